#include "bankopt/dual_utility.hpp"
#include "bankopt/errors.hpp"

#include <cmath>

namespace bankopt {

double utility(double c, double l, const ModelParams& p) {
    return std::pow(std::pow(c, p.delta) * std::pow(l, 1.0 - p.delta), 1.0 - p.k) /
           (p.delta * (1.0 - p.k));
}

DualUtilityEval u_tilde(double y, const DerivedConstants& dc, const ModelParams& p) {
    if (!(y > 0.0)) throw DomainError("u_tilde: y must be positive");
    DualUtilityEval e;
    e.y = y;
    const double dk = p.delta * (1.0 - p.k);
    if (y < dc.y_tilde) {
        e.branch = DualBranch::below_kink;
        e.u_tilde = dc.A1 * std::pow(y, dc.beta1) - p.w * p.L * y;
        e.c_hat = dc.c_coef_lo * std::pow(y, 1.0 / (dk - 1.0));
        e.l_hat = p.L;
    } else {
        e.branch = DualBranch::at_or_above_kink;
        e.u_tilde = dc.A2 * std::pow(y, dc.beta2);
        e.c_hat = dc.c_coef_hi * std::pow(y, -1.0 / p.k);
        e.l_hat = dc.l_coef_hi * std::pow(y, -1.0 / p.k);
    }
    return e;
}

double u_tilde_val(double y, const DerivedConstants& dc, const ModelParams& p) {
    if (!(y > 0.0)) throw DomainError("u_tilde_val: y must be positive");
    if (y < dc.y_tilde) return dc.A1 * std::pow(y, dc.beta1) - p.w * p.L * y;
    return dc.A2 * std::pow(y, dc.beta2);
}

double u_tilde_d1(double y, const DerivedConstants& dc, const ModelParams& p) {
    if (!(y > 0.0)) throw DomainError("u_tilde_d1: y must be positive");
    if (y < dc.y_tilde)
        return dc.beta1 * dc.A1 * std::pow(y, dc.beta1 - 1.0) - p.w * p.L;
    return dc.beta2 * dc.A2 * std::pow(y, dc.beta2 - 1.0);
}

double u_tilde_d2(double y, const DerivedConstants& dc, const ModelParams&) {
    if (!(y > 0.0)) throw DomainError("u_tilde_d2: y must be positive");
    if (y < dc.y_tilde)
        return dc.beta1 * (dc.beta1 - 1.0) * dc.A1 * std::pow(y, dc.beta1 - 2.0);
    return dc.beta2 * (dc.beta2 - 1.0) * dc.A2 * std::pow(y, dc.beta2 - 2.0);
}

} // namespace bankopt
