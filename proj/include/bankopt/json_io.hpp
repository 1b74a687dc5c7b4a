#pragma once
#include <string>

#include <json.hpp>

#include "bankopt/policy.hpp"
#include "bankopt/simulate.hpp"

namespace bankopt {

inline constexpr int kSchemaVersion = 1;

// Parse a parameter file. Keys must match the ModelParams field names
// exactly; unknown keys are rejected. Missing keys keep baseline defaults.
ModelParams params_from_json(const nlohmann::json& j);

// Apply a "key=value" override (the CLI --param flag).
void apply_override(ModelParams& p, const std::string& spec);

nlohmann::json params_to_json(const ModelParams& p);
nlohmann::json pb_to_json(const PbSolution& pb);

// Full solve report: case, boundaries, coefficients, policy block with
// thresholds/multiplier/value at x0, and the residual audit.
nlohmann::json solution_report(const PrimalSolution& sol);

nlohmann::json budget_to_json(const BudgetCheck& bc);

} // namespace bankopt
