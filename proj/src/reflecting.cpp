#include "bankopt/reflecting.hpp"
#include "bankopt/errors.hpp"
#include "bankopt/rootfind.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

namespace bankopt {

namespace {

std::optional<double> first_root(const std::function<double(double)>& f,
                                 double lo, double hi, int n = 600) {
    const auto hits = scan_sign_changes(f, lo, hi, n);
    if (hits.empty()) return std::nullopt;
    return brent(f, hits.front().lo, hits.front().hi);
}

} // namespace

ReflectingSolution solve_reflecting(const ModelParams& p, const DerivedConstants& dc,
                                    double d_repay, double floor_level,
                                    bool allow_unbounded) {
    const double a1 = dc.A1 / dc.Gamma1;
    const double a2 = (dc.A2 != 0.0) ? dc.A2 / dc.Gamma2 : 0.0;
    const double drift_lo = (p.w * (p.L_bar - p.L) - d_repay) / p.r;
    const double drift_hi = (p.w * p.L_bar - d_repay) / p.r;
    const double yt = dc.y_tilde;
    const double n1 = dc.n1, n2 = dc.n2, b1 = dc.beta1, b2 = dc.beta2;

    std::vector<ReflectingSolution> found;

    if (std::isfinite(yt)) {
        // split case: C0/C1 at the kink, C1 at the boundary are linear in the
        // coefficients; the C2 boundary condition pins z_hat.
        auto coeffs = [&](double zh) {
            std::vector<double> M = {
                std::pow(yt, n2), -std::pow(yt, n1), -std::pow(yt, n2),
                n2 * std::pow(yt, n2 - 1), -n1 * std::pow(yt, n1 - 1), -n2 * std::pow(yt, n2 - 1),
                0.0, n1 * std::pow(zh, n1 - 1), n2 * std::pow(zh, n2 - 1)};
            std::vector<double> rhs = {
                -(a1 * std::pow(yt, b1) - (p.w * p.L / p.r) * yt - a2 * std::pow(yt, b2)),
                -(b1 * a1 * std::pow(yt, b1 - 1) - p.w * p.L / p.r - b2 * a2 * std::pow(yt, b2 - 1)),
                -(b2 * a2 * std::pow(zh, b2 - 1) + drift_hi + floor_level)};
            solve_dense(M, rhs);
            return std::array<double, 3>{rhs[0], rhs[1], rhs[2]};
        };
        auto residual = [&](double zh) {
            const auto B = coeffs(zh);
            return n1 * (n1 - 1) * B[1] * std::pow(zh, n1 - 2) +
                   n2 * (n2 - 1) * B[2] * std::pow(zh, n2 - 2) +
                   b2 * (b2 - 1) * a2 * std::pow(zh, b2 - 2);
        };
        if (auto root = first_root(residual, yt * (1.0 + 1e-9), yt * 1e8)) {
            ReflectingSolution s;
            s.split_at_kink = true;
            s.z_hat = *root;
            const auto B = coeffs(*root);
            s.B21 = B[0];
            s.B12 = B[1];
            s.B22 = B[2];
            s.max_residual = std::abs(residual(*root));
            found.push_back(std::move(s));
        }
    }

    // single-piece case (z_hat below the kink): a boundary exists only when
    // the lower-branch wealth actually reaches the floor at finite z.
    if (drift_lo + floor_level > 0.0) {
        auto coeff = [&](double zh) {
            return -(b1 * a1 * std::pow(zh, b1 - 1) + drift_lo + floor_level) /
                   (n2 * std::pow(zh, n2 - 1));
        };
        auto residual = [&](double zh) {
            return n2 * (n2 - 1) * coeff(zh) * std::pow(zh, n2 - 2) +
                   b1 * (b1 - 1) * a1 * std::pow(zh, b1 - 2);
        };
        const double hi = std::isfinite(yt) ? yt * (1.0 - 1e-9) : 1e10;
        if (auto root = first_root(residual, 1e-10, hi)) {
            ReflectingSolution s;
            s.split_at_kink = false;
            s.z_hat = *root;
            s.B2 = coeff(*root);
            s.max_residual = std::abs(residual(*root));
            found.push_back(std::move(s));
        }
    } else if (!std::isfinite(yt) && allow_unbounded) {
        ReflectingSolution s;
        s.split_at_kink = false;
        s.z_hat = std::numeric_limits<double>::infinity();
        s.B2 = 0.0;
        found.push_back(std::move(s));
    }

    if (found.empty())
        throw NoCaseAdmissible("solve_reflecting: no admissible boundary");
    if (found.size() > 1)
        throw MultipleCasesAdmissible("solve_reflecting: both cases admit a boundary");

    ReflectingSolution s = std::move(found.front());
    s.lower.add(s.split_at_kink ? s.B21 : s.B2, n2);
    s.lower.add(a1, b1);
    s.lower.add(drift_lo, 1.0);
    if (s.split_at_kink) {
        s.upper.add(s.B12, n1);
        s.upper.add(s.B22, n2);
        s.upper.add(a2, b2);
        s.upper.add(drift_hi, 1.0);
    }
    return s;
}

Jet3 reflecting_eval(double z, const ReflectingSolution& s,
                     const DerivedConstants& dc, double floor_level) {
    if (!(z > 0.0)) throw DomainError("reflecting_eval: z must be positive");
    if (z >= s.z_hat) {
        Jet3 j = jet(s.split_at_kink ? s.upper : s.lower, s.z_hat);
        j.v -= floor_level * (z - s.z_hat);
        j.d1 = -floor_level;
        j.d2 = j.d3 = 0.0;
        return j;
    }
    if (s.split_at_kink && z >= dc.y_tilde) return jet(s.upper, z);
    return jet(s.lower, z);
}

} // namespace bankopt
