#pragma once

#include <json.hpp>
#include <string>
#include <vector>

#include "qes/apps.hpp"
#include "qes/augmented.hpp"
#include "qes/bethe.hpp"
#include "qes/counting.hpp"
#include "qes/forms.hpp"
#include "qes/ode_spec.hpp"

namespace qes {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchemaVersion = "1";

// Complex scalars serialize as [re, im]; parsing also accepts a bare number.
Json cplx_to_json(const Cplx& v);
Cplx cplx_from_json(const Json& j);

// Coefficient arrays serialize ascending by power: [[re, im], ...].
Json poly_to_json(const ComplexPoly& p);

Json spec_to_json(const OdeSpec& spec);
OdeSpec spec_from_json(const Json& j);

// Discriminated union keyed by "type": heun | gheun1 | gheun2 | gheun3 | gheun4.
Json form_to_json(const AnyForm& form);
AnyForm form_from_json(const Json& j);

Json solution_to_json(const BetheSolution& sol);
BetheSolution solution_from_json(const Json& j);

// Top-level documents.
Json solve_document(const OdeSpec& spec, const SolverConfig& cfg, const SolveReport& report);
Json count_document(const CountReport& report);
Json augmented_solutions_json(const std::vector<AugmentedSolution>& sols);
Json two_electron_document(const TwoElectronParams& p, const TwoElectronReport& r);
Json phi6_document(const Phi6Params& p, const Phi6Report& r);
Json rn_document(const RNParams& p, const RNReport& r);
Json dirac_document(const DiracParams& p, const DiracReport& r);
Json decatic_document(const DecaticParams& p, const DecaticReport& r);

// Deterministic serialization: floating-point numbers rendered with 17
// significant digits so identical inputs and seed give byte-identical files.
std::string dump_deterministic(const Json& j, int indent = 2);

// One solution per row; root columns padded to the widest solution.
std::string solutions_to_csv(const SolveReport& report);

// Human-oriented rendering: 12 significant digits, a+bi, real values flagged.
std::string format_complex_pretty(const Cplx& v);
std::string solutions_to_pretty(const OdeSpec& spec, const SolveReport& report);

}  // namespace qes
