#pragma once
#include "bankopt/params.hpp"
#include "bankopt/piecewise.hpp"

namespace bankopt {

enum class PbCase {
    Case1,  // y_tilde <= z_hat_pb: two-piece value split at y_tilde
    Case2,  // z_hat_pb < y_tilde: single lower-branch piece
};

// Closed-form solution of the post-bankruptcy free-boundary problem.
// For w*(L_bar-L) == 0 (no labour income at the leisure cap) the liquidity
// floor is only reached asymptotically: z_hat_pb = +inf with B2_pb = 0.
struct PbSolution {
    PbCase case_tag;
    double z_hat_pb;     // free boundary (may be +inf, see above)
    double B21_pb = 0.0; // Case 1 lower-piece z^n2 coefficient
    double B12_pb = 0.0; // Case 1 upper-piece z^n1 coefficient
    double B22_pb = 0.0; // Case 1 upper-piece z^n2 coefficient
    double B2_pb = 0.0;  // Case 2 z^n2 coefficient
    double max_residual = 0.0; // worst smooth-pasting equation residual

    ModelParams params;
    DerivedConstants dc;

    PowerSum lower;      // piece on (0, min(y_tilde, z_hat_pb))
    PowerSum upper;      // Case 1 piece on [y_tilde, z_hat_pb)

    bool bounded() const { return std::isfinite(z_hat_pb); }
};

// Solve the smooth-pasting systems; exactly one case must be admissible.
// Throws NoCaseAdmissible / MultipleCasesAdmissible otherwise.
PbSolution solve_pb(const ModelParams& p, const DerivedConstants& dc);

// v_PB and derivatives. Beyond z_hat_pb the continuation is flat:
// v_PB(z) = v_PB(z_hat_pb), v_PB' = 0. Throws DomainError for z <= 0.
Jet3 v_pb_eval(double z, const PbSolution& pb);

// Dual value of declaring bankruptcy at dual state z:
// U(z) = v_PB(z/alpha) - F z, flat-continued beyond alpha*z_hat_pb where
// U'(z) = -F exactly.
Jet3 u_stop_eval(double z, const PbSolution& pb);

} // namespace bankopt
