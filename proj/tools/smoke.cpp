// Temporary smoke harness used while bringing the solver up.
#include <cstdio>

#include "bankopt/policy.hpp"

using namespace bankopt;

static void report(const char* tag, const ModelParams& p) {
    const auto dc = derive(p);
    const auto pb = solve_pb(p, dc);
    const auto sol = solve_primal(p, dc, pb);
    const auto th = thresholds(sol);
    const auto m = invert_multiplier(p.x0, sol);
    const double V = value_at(p.x0, sol);
    std::printf("%s: %s pb_zhat=%.6f z_bar=%.6f z_hat=%.6f B2=%.6f\n", tag,
                to_string(sol.case_tag), pb.z_hat_pb, sol.z_bar, sol.z_hat, sol.B2);
    std::printf("   x_bar=%.6f x_hat=%.6f x_tilde=%.6f lam=%.6f (imm=%d) V=%.6f\n",
                th.x_bar, th.x_hat, th.x_tilde, m.lambda_star,
                int(m.immediate_bankruptcy), V);
    std::printf("   audit: pasting=%.2e zhat=%.2e ode=%.2e v5=%.2e v2=%.2e v4=%.2e cx=%.2e\n",
                sol.audit.pasting, sol.audit.z_hat_eq, sol.audit.ode,
                sol.audit.v5_shortfall, sol.audit.v2_excess, sol.audit.v4_excess,
                sol.audit.convexity);
}

int main() {
    ModelParams base;
    report("baseline", base);
    ModelParams k2 = base; k2.k = 2.0;
    report("k=2", k2);
    ModelParams k4 = base; k4.k = 4.0;
    report("k=4", k4);
    report("full-leisure", ModelParams::full_leisure_preset());
    return 0;
}
