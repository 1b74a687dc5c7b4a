#include "bankopt/json_io.hpp"
#include "bankopt/errors.hpp"

#include <cmath>
#include <map>

namespace bankopt {

namespace {

std::map<std::string, double ModelParams::*> field_map() {
    return {
        {"delta", &ModelParams::delta}, {"k", &ModelParams::k},
        {"r", &ModelParams::r},         {"mu", &ModelParams::mu},
        {"sigma", &ModelParams::sigma}, {"gamma", &ModelParams::gamma},
        {"d", &ModelParams::d},         {"w", &ModelParams::w},
        {"F", &ModelParams::F},         {"eta", &ModelParams::eta},
        {"alpha", &ModelParams::alpha}, {"L_bar", &ModelParams::L_bar},
        {"L", &ModelParams::L},         {"x0", &ModelParams::x0},
    };
}

} // namespace

ModelParams params_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw ConfigError("parameter file must be a JSON object");
    ModelParams p;
    const auto fields = field_map();
    for (auto it = j.begin(); it != j.end(); ++it) {
        const auto f = fields.find(it.key());
        if (f == fields.end())
            throw ConfigError("unknown parameter key: " + it.key());
        if (!it.value().is_number())
            throw ConfigError("parameter " + it.key() + " must be a number");
        p.*(f->second) = it.value().get<double>();
    }
    return p;
}

void apply_override(ModelParams& p, const std::string& spec) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos)
        throw ConfigError("override must be key=value, got: " + spec);
    const std::string key = spec.substr(0, eq);
    const auto fields = field_map();
    const auto f = fields.find(key);
    if (f == fields.end()) throw ConfigError("unknown parameter key: " + key);
    try {
        p.*(f->second) = std::stod(spec.substr(eq + 1));
    } catch (const std::exception&) {
        throw ConfigError("bad numeric value in override: " + spec);
    }
}

nlohmann::json params_to_json(const ModelParams& p) {
    nlohmann::json j;
    for (const auto& [name, ptr] : field_map()) j[name] = p.*ptr;
    return j;
}

nlohmann::json pb_to_json(const PbSolution& pb) {
    nlohmann::json j;
    j["case"] = pb.case_tag == PbCase::Case1 ? "Case 1" : "Case 2";
    j["z_hat_pb"] = pb.bounded() ? nlohmann::json(pb.z_hat_pb)
                                 : nlohmann::json("inf");
    if (pb.case_tag == PbCase::Case1) {
        j["B21_pb"] = pb.B21_pb;
        j["B12_pb"] = pb.B12_pb;
        j["B22_pb"] = pb.B22_pb;
    } else {
        j["B2_pb"] = pb.B2_pb;
    }
    j["max_residual"] = pb.max_residual;
    return j;
}

nlohmann::json solution_report(const PrimalSolution& sol) {
    const ModelParams& p = sol.pb.params;
    const DerivedConstants& dc = sol.pb.dc;
    const auto th = thresholds(sol);
    const auto m = invert_multiplier(p.x0, sol);
    const double V = value_at(p.x0, sol);

    nlohmann::json j;
    j["schema_version"] = kSchemaVersion;
    j["params"] = params_to_json(p);
    j["derived"] = {{"theta", dc.theta}, {"A1", dc.A1},       {"A2", dc.A2},
                    {"y_tilde", std::isfinite(dc.y_tilde)
                                    ? nlohmann::json(dc.y_tilde)
                                    : nlohmann::json("inf")},
                    {"n1", dc.n1},       {"n2", dc.n2},
                    {"Gamma1", dc.Gamma1}, {"Gamma2", dc.Gamma2}};
    j["pb"] = pb_to_json(sol.pb);
    j["case"] = to_string(sol.case_tag);
    j["regime"] = sol.regime == Regime::bankruptcy_first ? "bankruptcy_first"
                                                         : "liquidity_first";
    j["z_bar"] = sol.z_bar;
    j["z_hat"] = sol.z_hat;
    j["h_root"] = sol.h_root;
    nlohmann::json coeffs;
    if (sol.two_piece) {
        coeffs["B21"] = sol.B21;
        coeffs["B12"] = sol.B12;
        coeffs["B22"] = sol.B22;
    } else {
        coeffs["B2"] = sol.B2;
    }
    j["coeffs"] = coeffs;
    j["lambda_star"] = m.lambda_star;
    j["immediate_bankruptcy"] = m.immediate_bankruptcy;
    j["V"] = V;
    j["x_bar"] = th.x_bar;
    j["x_hat"] = th.x_hat;
    j["x_tilde"] = std::isfinite(th.x_tilde) ? nlohmann::json(th.x_tilde)
                                             : nlohmann::json(nullptr);
    j["residual_audit"] = {{"pasting", sol.audit.pasting},
                           {"z_hat_eq", sol.audit.z_hat_eq},
                           {"ode", sol.audit.ode},
                           {"v5_shortfall", sol.audit.v5_shortfall},
                           {"v2_excess", sol.audit.v2_excess},
                           {"v4_excess", sol.audit.v4_excess},
                           {"convexity", sol.audit.convexity}};
    return j;
}

nlohmann::json budget_to_json(const BudgetCheck& bc) {
    return {{"mean", bc.mean},
            {"estimate", bc.estimate},
            {"std_error", bc.std_error},
            {"n_paths", bc.n_paths},
            {"fraction_stopped", bc.fraction_stopped}};
}

} // namespace bankopt
