#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qes/json_io.hpp"

namespace qes {

// One validation criterion outcome.  `passed` requires both the substance
// checks and the wall-clock budget; `detail` carries the measured numbers so
// the validation document is self-describing.
struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  bool substance_passed = false;
  std::string detail;
  double seconds = 0.0;
  double budget_seconds = 0.0;
};

// Deterministic cross-seed reproducibility check: the same problem solved
// under three different solver seeds must yield identical certified sets.
struct SeedVariationResult {
  bool identical = false;
  std::string detail;
};

inline constexpr int kCriterionCount = 12;

// Runs a single criterion (1-based id in [1, kCriterionCount]).
CriterionResult run_criterion(int id, std::uint64_t seed);

// Runs all criteria in order.
std::vector<CriterionResult> run_acceptance_suite(std::uint64_t seed);

SeedVariationResult seed_variation_check(std::uint64_t seed);

bool all_passed(const std::vector<CriterionResult>& results);

// Full validation document: acceptance suite + seed-variation check +
// total-runtime budget, serialized for the report subcommand.
Json validation_document(std::uint64_t seed);

}  // namespace qes
