#pragma once
#include "bankopt/params.hpp"

namespace bankopt {

enum class DualBranch { below_kink, at_or_above_kink };

// One evaluation of the dual utility: value, maximizers and branch tag.
struct DualUtilityEval {
    double y;
    double u_tilde;
    double c_hat;    // maximizing consumption
    double l_hat;    // maximizing leisure (= L on the constrained branch)
    DualBranch branch;
};

// u(c,l) = (c^delta l^(1-delta))^(1-k) / (delta (1-k))
double utility(double c, double l, const ModelParams& p);

// Legendre-Fenchel transform sup_{c,0<=l<=L} [u(c,l) - (c+wl) y], y > 0.
// Throws DomainError for y <= 0.
DualUtilityEval u_tilde(double y, const DerivedConstants& dc, const ModelParams& p);

// Analytic derivatives of the transform. u_tilde_d1 equals -(c_hat + w*l_hat).
double u_tilde_val(double y, const DerivedConstants& dc, const ModelParams& p);
double u_tilde_d1(double y, const DerivedConstants& dc, const ModelParams& p);
double u_tilde_d2(double y, const DerivedConstants& dc, const ModelParams& p);

} // namespace bankopt
