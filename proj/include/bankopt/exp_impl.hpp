#pragma once
#include <cmath>
#include <cstdint>
#include <cstring>

// Shared exp kernel: identical constant set and FMA evaluation order for the
// scalar and AVX2 paths, so both backends produce bit-identical trajectories.
namespace bankopt::kernels::detail {

inline constexpr double kLog2E = 1.4426950408889634073599246810019;
inline constexpr double kLn2Hi = 6.93147180369123816490e-01;
inline constexpr double kLn2Lo = 1.90821492927058770002e-10;

// Taylor coefficients 1/13! ... 1/2!; |r| <= ln2/2 keeps the truncation
// error below 1e-17 relative.
inline constexpr double kC[] = {
    1.6059043836821614599e-10, 2.0876756987868098979e-9,
    2.5052108385441718775e-8,  2.7557319223985890653e-7,
    2.7557319223985892510e-6,  2.4801587301587301566e-5,
    1.9841269841269841253e-4,  1.3888888888888889419e-3,
    8.3333333333333332177e-3,  4.1666666666666664354e-2,
    1.6666666666666665741e-1,  5.0000000000000000000e-1,
};

inline double exp_scalar(double x) {
    if (x > 709.0) return HUGE_VAL;
    if (x < -745.0) return 0.0;
    const double kd = std::nearbyint(x * kLog2E);
    const double r = std::fma(kd, -kLn2Lo, std::fma(kd, -kLn2Hi, x));
    double p = kC[0];
    for (int i = 1; i < 12; ++i) p = std::fma(p, r, kC[i]);
    p = std::fma(std::fma(p, r, 1.0), r, 1.0);
    const int64_t ki = static_cast<int64_t>(kd);
    uint64_t bits;
    std::memcpy(&bits, &p, 8);
    bits += static_cast<uint64_t>(ki) << 52;
    double out;
    std::memcpy(&out, &bits, 8);
    return out;
}

} // namespace bankopt::kernels::detail
