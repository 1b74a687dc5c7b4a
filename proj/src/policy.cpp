#include "bankopt/policy.hpp"
#include "bankopt/errors.hpp"
#include "bankopt/rootfind.hpp"

#include <cmath>
#include <limits>

namespace bankopt {

namespace {

// Decreasing map z -> -v'(z) inverted by bisection-grade bracketing; the
// bracket low end expands until the target wealth is covered.
double invert_decreasing(const std::function<double(double)>& wealth, double x,
                         double lo_seed, double hi) {
    double lo = lo_seed;
    while (wealth(lo) < x && lo > 1e-280) lo *= 1e-2;
    if (wealth(lo) < x)
        throw BracketingFailure("invert_multiplier: wealth target unreachable");
    return brent([&](double z) { return wealth(z) - x; }, lo, hi);
}

} // namespace

MultiplierResult invert_multiplier(double x, const PrimalSolution& sol) {
    const ModelParams& p = sol.pb.params;
    if (!(x >= p.F + p.eta))
        throw OutOfRange("invert_multiplier: x below F + eta");

    const double x_bar = -v_eval(sol.z_bar * (1.0 - 1e-13), sol).d1;
    if (x >= x_bar) {
        auto wealth = [&](double z) { return -v_eval(z, sol).d1; };
        return {invert_decreasing(wealth, x, sol.z_bar * 1e-4, sol.z_bar), false};
    }
    // immediate bankruptcy: restart the dual at the post-jump wealth
    const double x_post = p.alpha * (x - p.F);
    auto wealth = [&](double z) { return -v_pb_eval(z, sol.pb).d1; };
    const double hi = sol.pb.bounded() ? sol.pb.z_hat_pb : 1e12;
    if (x_post <= 0.0) return {hi, true};
    return {invert_decreasing(wealth, x_post, hi * 1e-6, hi), true};
}

double value_at(double x, const PrimalSolution& sol) {
    const ModelParams& p = sol.pb.params;
    const auto m = invert_multiplier(x, sol);
    if (m.immediate_bankruptcy)
        return v_pb_eval(m.lambda_star, sol.pb).v +
               m.lambda_star * p.alpha * (x - p.F);
    return v_eval(m.lambda_star, sol).v + m.lambda_star * x;
}

Thresholds thresholds(const PrimalSolution& sol) {
    Thresholds t;
    t.x_bar = -v_eval(sol.z_bar * (1.0 - 1e-13), sol).d1;
    t.x_hat = -u_stop_eval(sol.z_hat, sol.pb).d1;
    const double yt = sol.pb.dc.y_tilde;
    t.x_tilde = std::isfinite(yt)
                    ? -u_stop_eval(sol.pb.params.alpha * yt, sol.pb).d1
                    : std::numeric_limits<double>::quiet_NaN();
    return t;
}

Controls controls_at(double z, const PrimalSolution& sol, ControlRegime regime) {
    if (!(z > 0.0)) throw DomainError("controls_at: z must be positive");
    const ModelParams& p = sol.pb.params;
    const DerivedConstants& dc = sol.pb.dc;
    const auto du = u_tilde(z, dc, p);
    const Jet3 j = (regime == ControlRegime::pre_bankruptcy)
                       ? v_eval(z, sol)
                       : v_pb_eval(z, sol.pb);
    return {du.c_hat, du.l_hat, dc.theta / p.sigma * z * j.d2, -j.d1};
}

NoBankruptcySolution solve_no_bankruptcy(const ModelParams& p,
                                         const DerivedConstants& dc) {
    NoBankruptcySolution nob;
    nob.params = p;
    nob.dc = dc;
    nob.refl = solve_reflecting(p, dc, p.d, p.F + p.eta, /*allow_unbounded=*/false);
    nob.z_hat_nob = nob.refl.z_hat;
    if (nob.refl.split_at_kink) {
        nob.case_tag = NobCase::Case1;
        nob.B21_nob = nob.refl.B21;
        nob.B12_nob = nob.refl.B12;
        nob.B22_nob = nob.refl.B22;
    } else {
        nob.case_tag = NobCase::Case2;
        nob.B2_nob = nob.refl.B2;
    }
    return nob;
}

Jet3 v_nob_eval(double z, const NoBankruptcySolution& nob) {
    return reflecting_eval(z, nob.refl, nob.dc, nob.params.F + nob.params.eta);
}

double nob_multiplier(double x, const NoBankruptcySolution& nob) {
    const ModelParams& p = nob.params;
    if (!(x >= p.F + p.eta))
        throw OutOfRange("nob_multiplier: x below F + eta");
    auto wealth = [&](double z) { return -v_nob_eval(z, nob).d1; };
    return invert_decreasing(wealth, x, nob.z_hat_nob * 1e-4, nob.z_hat_nob);
}

double nob_value_at(double x, const NoBankruptcySolution& nob) {
    const double lam = nob_multiplier(x, nob);
    return v_nob_eval(lam, nob).v + lam * x;
}

Controls nob_controls_at(double z, const NoBankruptcySolution& nob) {
    if (!(z > 0.0)) throw DomainError("nob_controls_at: z must be positive");
    const ModelParams& p = nob.params;
    const auto du = u_tilde(z, nob.dc, p);
    const Jet3 j = v_nob_eval(z, nob);
    return {du.c_hat, du.l_hat, nob.dc.theta / p.sigma * z * j.d2, -j.d1};
}

} // namespace bankopt
