#pragma once
#include "bankopt/params.hpp"
#include "bankopt/piecewise.hpp"

namespace bankopt {

// Shared smooth-pasting solver for the reflecting-boundary problems: the dual
// ODE with drift terms ((w(L_bar-L)-d_repay)/r, (w L_bar-d_repay)/r) and the
// boundary conditions v'(z_hat) = -floor_level, v''(z_hat) = 0.
//
// Instances: post-bankruptcy (d_repay=0, floor 0), no-bankruptcy baseline and
// the liquidity-first primal regime (d_repay=d, floor F+eta).
struct ReflectingSolution {
    bool split_at_kink;   // true: two pieces split at y_tilde (y_tilde <= z_hat)
    double z_hat;         // reflecting boundary (may be +inf when unbounded)
    double B21 = 0.0, B12 = 0.0, B22 = 0.0; // split coefficients
    double B2 = 0.0;                        // single-piece coefficient
    double max_residual = 0.0;
    PowerSum lower, upper;
};

// allow_unbounded: accept the degenerate no-boundary solution (pure particular
// part) when the floor is only reached asymptotically; requires y_tilde = inf.
ReflectingSolution solve_reflecting(const ModelParams& p, const DerivedConstants& dc,
                                    double d_repay, double floor_level,
                                    bool allow_unbounded);

// Value and derivatives; beyond z_hat the derivative is clamped to the
// boundary slope -floor_level (the reflected continuation is linear).
Jet3 reflecting_eval(double z, const ReflectingSolution& s,
                     const DerivedConstants& dc, double floor_level);

} // namespace bankopt
