#pragma once
#include "bankopt/exp_impl.hpp"
#include "bankopt/kernels.hpp"

// Termination bookkeeping shared by the scalar and AVX2 step kernels. Both
// translation units compile with contraction disabled so the arithmetic here
// is bit-identical across backends.
namespace bankopt::kernels::detail {

inline void terminate_path(BudgetBatch& b, const BudgetStepParams& sp,
                           std::size_t i, double t_tau, double seg) {
    const double h_tau = exp_scalar(sp.log_zbar - sp.log_lambda - sp.gamma * t_tau);
    const double f_tau =
        (sp.flow_coef * exp_scalar(sp.flow_pow * sp.log_zbar) + sp.flow_const) * h_tau;
    b.estimate[i] = b.acc[i] + seg * 0.5 * (b.f_prev[i] + f_tau) + h_tau * sp.x_bar;
    b.alive[i] = 0;
}

} // namespace bankopt::kernels::detail
