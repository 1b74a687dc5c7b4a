#include "bankopt/kernels.hpp"
#include "bankopt/budget_detail.hpp"

namespace bankopt::kernels {

bool avx2_supported() {
#if defined(__x86_64__) || defined(_M_X64)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

Backend resolve(Backend requested) {
    if (requested == Backend::auto_detect)
        return avx2_supported() ? Backend::avx2 : Backend::scalar;
    return requested;
}

const char* to_string(Backend b) {
    switch (b) {
        case Backend::scalar: return "scalar";
        case Backend::avx2: return "avx2";
        default: return "auto";
    }
}

void exp4(const double* x, double* out) {
    for (int i = 0; i < 4; ++i) out[i] = detail::exp_scalar(x[i]);
}

void BudgetBatch::init(std::size_t count, const BudgetStepParams& sp) {
    n = count;
    const std::size_t padded = (count + 3) & ~std::size_t(3);
    log_z.assign(padded, sp.log_lambda);
    acc.assign(padded, 0.0);
    estimate.assign(padded, 0.0);
    alive.assign(padded, 1);
    for (std::size_t i = count; i < padded; ++i) alive[i] = 0;
    // integrand at t = 0 (H = 1)
    const double f0 =
        sp.flow_coef * detail::exp_scalar(sp.flow_pow * sp.log_lambda) + sp.flow_const;
    f_prev.assign(padded, f0);
}

std::size_t budget_step_scalar(BudgetBatch& b, const BudgetStepParams& sp,
                               double t, const double* normals,
                               const double* uniforms) {
    using detail::exp_scalar;
    using detail::terminate_path;
    const double half_dt = 0.5 * sp.dt;
    const double h_shift = -sp.log_lambda - sp.gamma * (t + sp.dt);
    std::size_t live = 0;
    for (std::size_t i = 0; i < b.n; ++i) {
        if (!b.alive[i]) continue;
        const double lz0 = b.log_z[i];
        const double lzn = (lz0 + sp.drift_z) + sp.vol * normals[i];
        if (lzn >= sp.log_zbar) {
            const double fr = (sp.log_zbar - lz0) / (lzn - lz0);
            terminate_path(b, sp, i, t + fr * sp.dt, fr * sp.dt);
            continue;
        }
        const double q =
            (sp.bridge_coef * (sp.log_zbar - lz0)) * (sp.log_zbar - lzn);
        if (q < 40.0 && uniforms[i] < exp_scalar(-q)) {
            terminate_path(b, sp, i, t + 0.5 * sp.dt, 0.5 * sp.dt);
            continue;
        }
        const double hn = exp_scalar(lzn + h_shift);
        const double fn = (sp.flow_coef * exp_scalar(sp.flow_pow * lzn) + sp.flow_const) * hn;
        b.acc[i] = b.acc[i] + half_dt * (b.f_prev[i] + fn);
        b.f_prev[i] = fn;
        b.log_z[i] = lzn;
        ++live;
    }
    return live;
}

BudgetStepFn budget_step(Backend backend) {
#if defined(__x86_64__) || defined(_M_X64)
    if (resolve(backend) == Backend::avx2) return &budget_step_avx2;
#else
    (void)backend;
#endif
    return &budget_step_scalar;
}

} // namespace bankopt::kernels
