#pragma once
#include "bankopt/primal_solver.hpp"
#include "bankopt/reflecting.hpp"

namespace bankopt {

// Result of inverting x = -v'(lambda). Inside the stopping region (x < x_bar)
// bankruptcy is immediate; the returned multiplier is then the post-jump dual
// state solving alpha (x - F) = -v_PB'(lambda), matching how the optimal
// process actually restarts.
struct MultiplierResult {
    double lambda_star;
    bool immediate_bankruptcy;
};

struct Thresholds {
    double x_bar;    // bankruptcy wealth level, -v'(z_bar)
    double x_hat;    // liquidity wealth level, -v'(z_hat) = F + eta
    double x_tilde;  // minimum wealth with l* = L, -U'(alpha y_tilde)
                     // (NaN when the kink is absent, i.e. w = 0)
};

// Station of the dual state: pre-bankruptcy continuation or post-bankruptcy.
enum class ControlRegime { pre_bankruptcy, post_bankruptcy };

struct Controls {
    double c;   // consumption rate
    double l;   // leisure rate
    double pi;  // amount in the risky asset, (theta/sigma) z v''(z)
    double x;   // wealth consistent with the dual state, -v'(z)
};

MultiplierResult invert_multiplier(double x, const PrimalSolution& sol);

double value_at(double x, const PrimalSolution& sol);

Thresholds thresholds(const PrimalSolution& sol);

// Policy maps at dual state z. pre_bankruptcy uses v (the stopped value U
// beyond z_bar); post_bankruptcy uses v_PB.
Controls controls_at(double z, const PrimalSolution& sol,
                     ControlRegime regime = ControlRegime::pre_bankruptcy);

// ---- no-bankruptcy baseline (debt kept forever, liquidity floor F + eta) ----

enum class NobCase { Case1, Case2 };

struct NoBankruptcySolution {
    NobCase case_tag;
    double z_hat_nob;
    double B21_nob = 0.0, B12_nob = 0.0, B22_nob = 0.0, B2_nob = 0.0;
    ReflectingSolution refl;
    ModelParams params;
    DerivedConstants dc;
};

NoBankruptcySolution solve_no_bankruptcy(const ModelParams& p,
                                         const DerivedConstants& dc);

Jet3 v_nob_eval(double z, const NoBankruptcySolution& nob);

double nob_multiplier(double x, const NoBankruptcySolution& nob);
double nob_value_at(double x, const NoBankruptcySolution& nob);
Controls nob_controls_at(double z, const NoBankruptcySolution& nob);

} // namespace bankopt
