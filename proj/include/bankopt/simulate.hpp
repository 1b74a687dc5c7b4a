#pragma once
#include <cstdint>
#include <vector>

#include "bankopt/kernels.hpp"
#include "bankopt/policy.hpp"

namespace bankopt {

struct SimConfig {
    double dt = 1e-3;
    double horizon = 50.0;
    std::size_t n_paths = 1;
    std::uint64_t seed = 0;
    int n_threads = 0;                 // 0: hardware concurrency
    kernels::Backend backend = kernels::Backend::auto_detect;
    std::size_t record_stride = 1;     // keep every k-th grid point
};

struct PathRecord {
    std::vector<double> times, z_path, x_path, c_path, l_path, pi_path;
    std::vector<std::uint8_t> regime;  // 0 pre-bankruptcy, 1 post-bankruptcy
    double tau;                        // bankruptcy time; NaN if not reached
    double x_at_tau;                   // wealth at the crossing (pre-jump)
    double x_post_jump;                // alpha (x_at_tau - F)
    bool stopped() const;
};

// Simulate the optimal dual process and the policies along it. The dual
// steps are exact log-normal increments; bankruptcy time is interpolated in
// log Z between the straddling grid points. Post-bankruptcy the dual reflects
// at z_hat_pb (projection), pre-bankruptcy at z_hat in the liquidity-first
// regime only.
std::vector<PathRecord> simulate(const PrimalSolution& sol, const SimConfig& cfg);

struct BudgetCheck {
    double mean;        // Monte Carlo estimate of the deflated budget
    double estimate;    // mean - x0
    double std_error;
    std::size_t n_paths;
    double fraction_stopped;
};

// Monte Carlo check of the budget identity
//   E[ int_0^tau H (c + d + w l - w L_bar) dt + H(tau) X(tau) ] = x0,
// with Brownian-bridge barrier correction and martingale-consistent
// truncation at the horizon. consumption_scale != 1 breaks optimality and
// must push the estimate above x0.
BudgetCheck budget_check(const PrimalSolution& sol, const SimConfig& cfg,
                         double consumption_scale = 1.0);

struct WealthGapPair {
    double gap_coarse;  // max |X_sde - (-v'(Z))| at step dt
    double gap_fine;    // same at dt/2 on the common Brownian path
};

// Milstein-integrate the wealth SDE with the simulated controls along exact
// dual paths and measure the worst pathwise gap to -v'(Z); the fine level
// reuses the same Brownian increments, so gap_fine/gap_coarse ~ 1/2.
WealthGapPair wealth_sde_gap(const PrimalSolution& sol, double dt,
                             std::size_t n_paths, std::uint64_t seed,
                             double horizon);

} // namespace bankopt
