#pragma once
#include "bankopt/dual_utility.hpp"
#include "bankopt/pb_solver.hpp"

namespace bankopt {

enum class PrimalCase { C1, C2, C3, C4, C5, C6, C7 };

// VI regime: whether the bankruptcy boundary sits below or above the
// liquidity boundary in the dual variable.
enum class Regime {
    bankruptcy_first,  // z_bar < z_hat
    liquidity_first,   // z_bar >= z_hat
};

const char* to_string(PrimalCase c);

// Inequality / residual audit attached to every solved instance.
struct ResidualAudit {
    double pasting = 0.0;      // max |smooth-pasting equation residual|
    double z_hat_eq = 0.0;     // |liquidity-boundary equation residual|
    double ode = 0.0;          // max |dual ODE residual| on continuation samples
    double v5_shortfall = 0.0; // max(U - v, 0) on the continuation region
    double v2_excess = 0.0;    // max(v' + F + eta, 0) below the liquidity boundary
    double v4_excess = 0.0;    // max operator excess on the stopped/reflected side
    double convexity = 0.0;    // max(-v'', 0) on continuation samples
    bool ok(double slack = 1e-8) const;
};

struct PrimalSolution {
    PrimalCase case_tag;
    Regime regime;
    double z_bar;    // bankruptcy boundary
    double z_hat;    // liquidity boundary
    double h_root;   // unique zero of h; lower bound for z_bar
    double B2 = 0.0, B11 = 0.0, B21 = 0.0, B12 = 0.0, B22 = 0.0;
    bool two_piece = false; // continuation split at y_tilde (cases 5, 6)
    PbSolution pb;
    ResidualAudit audit;

    PowerSum lower, upper;
};

// h(z) = u~(z) - u~(z/alpha) + (rF - d + wL_bar - wL_bar/alpha) z, the
// stopping-gain rate of the bankruptcy obstacle. h(0+) = 0, strictly concave,
// with a unique positive zero; h <= 0 is necessary on the stopping region.
double h_eval(double z, const ModelParams& p, const DerivedConstants& dc);

// Unique positive zero of h. Throws BracketingFailure if no sign change is
// found (violated standing assumptions).
double h_root(const ModelParams& p, const DerivedConstants& dc);

// Bankruptcy boundary from the value-matching + C1 system against U.
double find_z_bar(const ModelParams& p, const DerivedConstants& dc,
                  const PbSolution& pb);

// Full solve: boundaries, coefficients, case identification, audits.
PrimalSolution solve_primal(const ModelParams& p, const DerivedConstants& dc,
                            const PbSolution& pb);

// v and derivatives on the whole positive axis: closed-form continuation,
// the stopped value U beyond z_bar, and (liquidity-first regime) the linear
// reflected segment between z_hat and z_bar.
Jet3 v_eval(double z, const PrimalSolution& sol);

} // namespace bankopt
