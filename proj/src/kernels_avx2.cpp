// AVX2 variants; this translation unit is compiled with -mavx2 -mfma and must
// only be entered after a runtime cpuid check (kernels::resolve).
#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include "bankopt/budget_detail.hpp"

namespace bankopt::kernels {

namespace {

using namespace detail;

// Same range reduction, coefficients and FMA order as detail::exp_scalar.
inline __m256d exp4_pd(__m256d x) {
    const __m256d log2e = _mm256_set1_pd(kLog2E);
    const __m256d ln2hi = _mm256_set1_pd(-kLn2Hi);
    const __m256d ln2lo = _mm256_set1_pd(-kLn2Lo);

    const __m256d kd = _mm256_round_pd(_mm256_mul_pd(x, log2e),
                                       _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
    const __m256d r = _mm256_fmadd_pd(kd, ln2lo, _mm256_fmadd_pd(kd, ln2hi, x));

    __m256d p = _mm256_set1_pd(kC[0]);
    for (int i = 1; i < 12; ++i)
        p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(kC[i]));
    const __m256d one = _mm256_set1_pd(1.0);
    p = _mm256_fmadd_pd(_mm256_fmadd_pd(p, r, one), r, one);

    // scale by 2^k through the exponent bits
    const __m128i ki = _mm256_cvtpd_epi32(kd);
    const __m256i kq = _mm256_cvtepi32_epi64(ki);
    const __m256i bits = _mm256_add_epi64(_mm256_castpd_si256(p),
                                          _mm256_slli_epi64(kq, 52));
    __m256d out = _mm256_castsi256_pd(bits);

    // clamp the extremes the scalar path handles explicitly
    const __m256d lo_mask = _mm256_cmp_pd(x, _mm256_set1_pd(-745.0), _CMP_LT_OQ);
    const __m256d hi_mask = _mm256_cmp_pd(x, _mm256_set1_pd(709.0), _CMP_GT_OQ);
    out = _mm256_blendv_pd(out, _mm256_setzero_pd(), lo_mask);
    out = _mm256_blendv_pd(out, _mm256_set1_pd(HUGE_VAL), hi_mask);
    return out;
}

} // namespace

void exp4_avx2(const double* x, double* out) {
    _mm256_storeu_pd(out, exp4_pd(_mm256_loadu_pd(x)));
}

std::size_t budget_step_avx2(BudgetBatch& b, const BudgetStepParams& sp, double t,
                             const double* normals, const double* uniforms) {
    const std::size_t padded = b.log_z.size();
    const __m256d drift = _mm256_set1_pd(sp.drift_z);
    const __m256d vol = _mm256_set1_pd(sp.vol);
    const __m256d lzb = _mm256_set1_pd(sp.log_zbar);
    const __m256d bridge = _mm256_set1_pd(sp.bridge_coef);
    const __m256d q_cut = _mm256_set1_pd(40.0);
    const __m256d half_dt = _mm256_set1_pd(0.5 * sp.dt);
    const __m256d flow_pow = _mm256_set1_pd(sp.flow_pow);
    const __m256d flow_coef = _mm256_set1_pd(sp.flow_coef);
    const __m256d flow_const = _mm256_set1_pd(sp.flow_const);
    const __m256d h_shift =
        _mm256_set1_pd(-sp.log_lambda - sp.gamma * (t + sp.dt));

    std::size_t live = 0;
    for (std::size_t base = 0; base < padded; base += 4) {
        uint8_t* alive = &b.alive[base];
        if (!(alive[0] | alive[1] | alive[2] | alive[3])) continue;

        const __m256d lz0 = _mm256_loadu_pd(&b.log_z[base]);
        const __m256d xi = _mm256_loadu_pd(&normals[base]);
        const __m256d lzn = _mm256_add_pd(_mm256_add_pd(lz0, drift),
                                          _mm256_mul_pd(vol, xi));

        const __m256d crossed = _mm256_cmp_pd(lzn, lzb, _CMP_GE_OQ);

        // bridge crossing probability for non-crossing lanes
        const __m256d d1 = _mm256_sub_pd(lzb, lz0);
        const __m256d d2 = _mm256_sub_pd(lzb, lzn);
        const __m256d q = _mm256_mul_pd(_mm256_mul_pd(bridge, d1), d2);
        const __m256d pbr = exp4_pd(_mm256_sub_pd(_mm256_setzero_pd(), q));
        const __m256d u = _mm256_loadu_pd(&uniforms[base]);
        const __m256d bridged = _mm256_andnot_pd(
            crossed, _mm256_and_pd(_mm256_cmp_pd(q, q_cut, _CMP_LT_OQ),
                                   _mm256_cmp_pd(u, pbr, _CMP_LT_OQ)));

        const int cross_mask = _mm256_movemask_pd(crossed);
        const int bridge_mask = _mm256_movemask_pd(bridged);

        // surviving lanes: trapezoid update, fully vectorized
        const __m256d hn = exp4_pd(_mm256_add_pd(lzn, h_shift));
        const __m256d fn = _mm256_mul_pd(
            _mm256_add_pd(_mm256_mul_pd(flow_coef,
                                        exp4_pd(_mm256_mul_pd(flow_pow, lzn))),
                          flow_const),
            hn);
        const __m256d facc = _mm256_loadu_pd(&b.acc[base]);
        const __m256d fprev = _mm256_loadu_pd(&b.f_prev[base]);
        const __m256d acc_n =
            _mm256_add_pd(facc, _mm256_mul_pd(half_dt, _mm256_add_pd(fprev, fn)));

        alignas(32) double lz0_s[4], lzn_s[4], acc_s[4], fn_s[4];
        _mm256_store_pd(lz0_s, lz0);
        _mm256_store_pd(lzn_s, lzn);
        _mm256_store_pd(acc_s, acc_n);
        _mm256_store_pd(fn_s, fn);

        for (int lane = 0; lane < 4; ++lane) {
            const std::size_t i = base + lane;
            if (!alive[lane]) continue;
            if (cross_mask & (1 << lane)) {
                const double fr = (sp.log_zbar - lz0_s[lane]) / (lzn_s[lane] - lz0_s[lane]);
                detail::terminate_path(b, sp, i, t + fr * sp.dt, fr * sp.dt);
            } else if (bridge_mask & (1 << lane)) {
                detail::terminate_path(b, sp, i, t + 0.5 * sp.dt, 0.5 * sp.dt);
            } else {
                b.acc[i] = acc_s[lane];
                b.f_prev[i] = fn_s[lane];
                b.log_z[i] = lzn_s[lane];
                ++live;
            }
        }
    }
    return live;
}

} // namespace bankopt::kernels

#endif // x86_64
