#pragma once
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace bankopt::kernels {

enum class Backend { auto_detect, scalar, avx2 };

Backend resolve(Backend requested);          // auto_detect -> best supported
bool avx2_supported();
const char* to_string(Backend b);

// exp on 4 lanes; identical polynomial in the scalar fallback so both
// backends produce matching results to a few ulp.
void exp4(const double* x, double* out);          // scalar reference
#if defined(__x86_64__) || defined(_M_X64)
void exp4_avx2(const double* x, double* out);     // AVX2 variant
#endif

// Per-step constants of the pre-bankruptcy budget walk in log coordinates.
struct BudgetStepParams {
    double drift_z;      // (gamma - r - theta^2/2) dt
    double vol;          // -theta sqrt(dt)
    double gamma;        // discount rate
    double dt;
    double log_zbar;     // crossing level
    double log_lambda;   // initial dual state (H = Z e^{-gamma t} / lambda)
    double bridge_coef;  // 2 / (theta^2 dt), Brownian-bridge exponent scale
    double flow_pow;     // consumption exponent 1/(delta(1-k)-1)
    double flow_coef;    // consumption coefficient (times any test scaling)
    double flow_const;   // d + w l - w L_bar on the constrained branch
    double x_bar;        // wealth at the crossing
};

// State of a batch of paths advanced in lockstep.
struct BudgetBatch {
    std::vector<double> log_z;
    std::vector<double> acc;       // trapezoid accumulator of H * flow
    std::vector<double> f_prev;    // previous-step integrand value
    std::vector<double> estimate;  // filled when a path terminates
    std::vector<uint8_t> alive;
    std::size_t n = 0;

    void init(std::size_t count, const BudgetStepParams& sp);
};

// Advance every live path by one step. normals/uniforms hold one draw per
// path (uniforms feed the Brownian-bridge crossing test). t is the time at
// the start of the step. Returns the number of paths still alive.
std::size_t budget_step_scalar(BudgetBatch& b, const BudgetStepParams& sp,
                               double t, const double* normals,
                               const double* uniforms);
#if defined(__x86_64__) || defined(_M_X64)
std::size_t budget_step_avx2(BudgetBatch& b, const BudgetStepParams& sp,
                             double t, const double* normals,
                             const double* uniforms);
#endif

using BudgetStepFn = std::size_t (*)(BudgetBatch&, const BudgetStepParams&,
                                     double, const double*, const double*);
BudgetStepFn budget_step(Backend backend);

} // namespace bankopt::kernels
