#include "bankopt/primal_solver.hpp"
#include "bankopt/errors.hpp"
#include "bankopt/reflecting.hpp"
#include "bankopt/rootfind.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

namespace bankopt {

const char* to_string(PrimalCase c) {
    switch (c) {
        case PrimalCase::C1: return "Case 1";
        case PrimalCase::C2: return "Case 2";
        case PrimalCase::C3: return "Case 3";
        case PrimalCase::C4: return "Case 4";
        case PrimalCase::C5: return "Case 5";
        case PrimalCase::C6: return "Case 6";
        default: return "Case 7";
    }
}

bool ResidualAudit::ok(double slack) const {
    return pasting <= 1e-10 && z_hat_eq <= 1e-10 && ode <= slack &&
           v5_shortfall <= slack && v2_excess <= slack && v4_excess <= slack &&
           convexity <= 1e-9;
}

double h_eval(double z, const ModelParams& p, const DerivedConstants& dc) {
    if (!(z > 0.0)) throw DomainError("h_eval: z must be positive");
    return u_tilde_val(z, dc, p) - u_tilde_val(z / p.alpha, dc, p) +
           (p.r * p.F - p.d + p.w * p.L_bar - p.w * p.L_bar / p.alpha) * z;
}

double h_root(const ModelParams& p, const DerivedConstants& dc) {
    auto f = [&](double z) { return h_eval(z, p, dc); };
    const auto hits = scan_sign_changes(f, 1e-12, 1e12, 800);
    if (hits.empty())
        throw BracketingFailure("h_root: no sign change in [1e-12, 1e12]");
    return brent(f, hits.front().lo, hits.front().hi);
}

namespace {

struct Builder {
    const ModelParams& p;
    const DerivedConstants& dc;
    const PbSolution& pb;
    double a1, a2, drift_lo, drift_hi;

    Builder(const ModelParams& p_, const DerivedConstants& dc_, const PbSolution& pb_)
        : p(p_), dc(dc_), pb(pb_) {
        a1 = dc.A1 / dc.Gamma1;
        a2 = (dc.A2 != 0.0) ? dc.A2 / dc.Gamma2 : 0.0;
        drift_lo = (p.w * (p.L_bar - p.L) - p.d) / p.r;
        drift_hi = (p.w * p.L_bar - p.d) / p.r;
    }

    PowerSum lower_base() const {
        PowerSum ps;
        ps.add(a1, dc.beta1);
        ps.add(drift_lo, 1.0);
        return ps;
    }

    // Single-piece candidate: B2 from value matching at zb, residual is the
    // C1 pasting gap against U.
    double single_B2(double zb) const {
        const PowerSum base = lower_base();
        return (u_stop_eval(zb, pb).v - base.eval(zb)) / std::pow(zb, dc.n2);
    }
    double single_resid(double zb) const {
        PowerSum ps = lower_base();
        ps.add(single_B2(zb), dc.n2);
        return ps.eval(zb, 1) - u_stop_eval(zb, pb).d1;
    }

    // Two-piece candidate (kink inside the continuation region): linear solve
    // (B21, B12, B22) from C0/C1 at y_tilde and C0 at zb; residual is C1 at zb.
    std::array<double, 3> two_coeffs(double zb) const {
        const double yt = dc.y_tilde, n1 = dc.n1, n2 = dc.n2;
        std::vector<double> M = {
            std::pow(yt, n2), -std::pow(yt, n1), -std::pow(yt, n2),
            n2 * std::pow(yt, n2 - 1), -n1 * std::pow(yt, n1 - 1), -n2 * std::pow(yt, n2 - 1),
            0.0, std::pow(zb, n1), std::pow(zb, n2)};
        std::vector<double> rhs = {
            -(a1 * std::pow(yt, dc.beta1) - (p.w * p.L / p.r) * yt -
              a2 * std::pow(yt, dc.beta2)),
            -(dc.beta1 * a1 * std::pow(yt, dc.beta1 - 1) - p.w * p.L / p.r -
              dc.beta2 * a2 * std::pow(yt, dc.beta2 - 1)),
            u_stop_eval(zb, pb).v -
                (a2 * std::pow(zb, dc.beta2) + drift_hi * zb)};
        solve_dense(M, rhs);
        return {rhs[0], rhs[1], rhs[2]};
    }
    double two_resid(double zb) const {
        const auto B = two_coeffs(zb);
        return dc.n1 * B[1] * std::pow(zb, dc.n1 - 1) +
               dc.n2 * B[2] * std::pow(zb, dc.n2 - 1) +
               dc.beta2 * a2 * std::pow(zb, dc.beta2 - 1) + drift_hi -
               u_stop_eval(zb, pb).d1;
    }
};

} // namespace

Jet3 v_eval(double z, const PrimalSolution& sol) {
    if (!(z > 0.0)) throw DomainError("v_eval: z must be positive");
    if (z >= sol.z_bar) return u_stop_eval(z, sol.pb);
    if (sol.regime == Regime::liquidity_first && z >= sol.z_hat) {
        Jet3 j = jet(sol.two_piece ? sol.upper : sol.lower, sol.z_hat);
        const double floor = sol.pb.params.F + sol.pb.params.eta;
        j.v -= floor * (z - sol.z_hat);
        j.d1 = -floor;
        j.d2 = j.d3 = 0.0;
        return j;
    }
    if (sol.two_piece && z >= sol.pb.dc.y_tilde) return jet(sol.upper, z);
    return jet(sol.lower, z);
}

namespace {

// Inequality audit over the assembled candidate; adjudicates genuine
// solutions against spurious pasting roots.
ResidualAudit run_audit(const PrimalSolution& s, const ModelParams& p,
                        const DerivedConstants& dc) {
    ResidualAudit a = s.audit;
    const double zb = s.z_bar;
    const double cont_end = (s.regime == Regime::bankruptcy_first)
                                ? zb
                                : std::min(s.z_hat, zb);

    auto sample = [&](double lo, double hi, int n_geo, int n_lin,
                      const std::function<void(double)>& fn) {
        if (!(hi > lo) || !(lo > 0.0)) return;
        const double ratio = std::pow(hi / lo, 1.0 / (n_geo - 1));
        for (int i = 0; i < n_geo; ++i) fn(lo * std::pow(ratio, i));
        for (int i = 1; i <= n_lin; ++i)
            fn(hi - (hi - lo) * 0.05 * i / n_lin);
    };

    sample(cont_end * 1e-4, cont_end * (1.0 - 1e-9), 200, 100, [&](double z) {
        const Jet3 j = v_eval(z, s);
        const double ode = -p.gamma * j.v + (p.gamma - p.r) * z * j.d1 +
                           0.5 * dc.theta * dc.theta * z * z * j.d2 +
                           u_tilde_val(z, dc, p) - (p.d - p.w * p.L_bar) * z;
        a.ode = std::max(a.ode, std::abs(ode));
        a.convexity = std::max(a.convexity, -j.d2);
        a.v2_excess = std::max(a.v2_excess, j.d1 + p.F + p.eta);
    });

    // value dominance over the stopping payoff on the whole pre-stop range
    sample(zb * 1e-4, zb * (1.0 - 1e-9), 200, 100, [&](double z) {
        const double gap = u_stop_eval(z, s.pb).v - v_eval(z, s).v;
        a.v5_shortfall = std::max(a.v5_shortfall, gap);
    });

    if (s.regime == Regime::bankruptcy_first) {
        // stopped side: the generator applied to U must not be positive
        sample(zb * (1.0 + 1e-9), s.z_hat, 120, 0, [&](double z) {
            a.v4_excess = std::max(a.v4_excess, h_eval(z, p, dc));
        });
    } else {
        // reflected segment: operator applied to the linear continuation
        sample(s.z_hat * (1.0 + 1e-9), std::isfinite(zb) ? zb : s.z_hat * 10.0,
               120, 0, [&](double z) {
                   const Jet3 j = v_eval(z, s);
                   const double op = -p.gamma * j.v + (p.gamma - p.r) * z * j.d1 +
                                     u_tilde_val(z, dc, p) - (p.d - p.w * p.L_bar) * z;
                   a.v4_excess = std::max(a.v4_excess, op);
               });
    }
    return a;
}

} // namespace

double find_z_bar(const ModelParams& p, const DerivedConstants& dc,
                  const PbSolution& pb) {
    return solve_primal(p, dc, pb).z_bar;
}

PrimalSolution solve_primal(const ModelParams& p, const DerivedConstants& dc,
                            const PbSolution& pb_in) {
    // The post-bankruptcy solve depends only on (delta, k, r, mu, sigma,
    // gamma, w, L_bar, L); rebind the remaining fields so cached solutions
    // can be reused across alpha/F/eta/d/x0 sweeps.
    {
        const ModelParams& q = pb_in.params;
        const bool same = q.delta == p.delta && q.k == p.k && q.r == p.r &&
                          q.mu == p.mu && q.sigma == p.sigma &&
                          q.gamma == p.gamma && q.w == p.w &&
                          q.L_bar == p.L_bar && q.L == p.L;
        if (!same)
            throw InvalidParams("solve_primal: pb solved for different dynamics");
    }
    PbSolution pb = pb_in;
    pb.params = p;
    pb.dc = dc;

    Builder bld(p, dc, pb);
    const double zeta = h_root(p, dc);
    const double yt = dc.y_tilde;
    const double cap = p.alpha * pb.z_hat_pb; // z_bar <= alpha z_hat_pb

    // liquidity boundary of the bankruptcy-first regime: U'(z_hat) = -(F+eta)
    double z_hat116;
    {
        auto g = [&](double z) { return u_stop_eval(z, pb).d1 + (p.F + p.eta); };
        if (std::isfinite(cap)) {
            if (g(cap) <= 0.0) {
                z_hat116 = cap; // eta = 0: boundary coincides with alpha z_hat_pb
            } else {
                double lo = cap * 1e-6;
                while (g(lo) > 0.0 && lo > 1e-300) lo *= 1e-3;
                z_hat116 = brent(g, lo, cap);
            }
        } else {
            double hi = std::max(zeta, 1.0);
            while (g(hi) < 0.0 && hi < 1e300) hi *= 4.0;
            double lo = hi * 1e-6;
            while (g(lo) > 0.0 && lo > 1e-300) lo *= 1e-3;
            z_hat116 = brent(g, lo, hi);
        }
    }

    const double ord_tol = 1e-9 * std::max(1.0, std::isfinite(yt) ? yt : 1.0);

    std::vector<PrimalSolution> admissible;
    auto consider = [&](PrimalSolution&& cand) {
        cand.audit = run_audit(cand, p, dc);
        if (!cand.audit.ok()) return;
        admissible.push_back(std::move(cand));
    };

    // ---- bankruptcy-first (z_bar < z_hat), single-piece continuation ----
    {
        const double lo = zeta * (1.0 - 1e-3);
        double hi = std::min(yt, cap);
        if (!std::isfinite(hi)) hi = zeta * 1e6;
        hi *= (1.0 - 1e-9);
        if (hi > lo) {
            auto f = [&](double z) { return bld.single_resid(z); };
            for (const auto& hit : scan_sign_changes(f, lo, hi, 500)) {
                const double zb = brent(f, hit.lo, hit.hi);
                if (zb < zeta - ord_tol) continue;
                if (!(zb < z_hat116 - ord_tol)) continue;
                PrimalSolution s;
                s.regime = Regime::bankruptcy_first;
                s.two_piece = false;
                s.z_bar = zb;
                s.z_hat = z_hat116;
                s.h_root = zeta;
                s.pb = pb;
                s.B2 = bld.single_B2(zb);
                s.lower = bld.lower_base();
                s.lower.add(s.B2, dc.n2);
                s.audit.pasting = std::abs(bld.single_resid(zb));
                s.audit.z_hat_eq = std::abs(u_stop_eval(z_hat116, pb).d1 + p.F + p.eta);
                if (pb.case_tag == PbCase::Case2) {
                    s.case_tag = PrimalCase::C4;
                    if (!(z_hat116 <= cap + ord_tol)) continue;
                } else {
                    const double ay = p.alpha * yt;
                    if (z_hat116 < ay - ord_tol)
                        s.case_tag = PrimalCase::C1;
                    else if (zb < ay + ord_tol)
                        s.case_tag = PrimalCase::C2;
                    else
                        s.case_tag = PrimalCase::C3;
                }
                consider(std::move(s));
            }
        }
    }

    // ---- bankruptcy-first, two-piece continuation (y_tilde <= z_bar) ----
    if (std::isfinite(yt) && pb.case_tag == PbCase::Case1 && std::isfinite(cap) &&
        cap > yt) {
        const double lo = std::max(zeta * (1.0 - 1e-3), yt * (1.0 + 1e-9));
        const double hi = cap * (1.0 - 1e-9);
        if (hi > lo) {
            auto f = [&](double z) { return bld.two_resid(z); };
            for (const auto& hit : scan_sign_changes(f, lo, hi, 500)) {
                const double zb = brent(f, hit.lo, hit.hi);
                if (zb < zeta - ord_tol) continue;
                if (!(zb < z_hat116 - ord_tol)) continue;
                PrimalSolution s;
                s.regime = Regime::bankruptcy_first;
                s.two_piece = true;
                s.z_bar = zb;
                s.z_hat = z_hat116;
                s.h_root = zeta;
                s.pb = pb;
                const auto B = bld.two_coeffs(zb);
                s.B21 = B[0];
                s.B12 = B[1];
                s.B22 = B[2];
                s.lower = bld.lower_base();
                s.lower.add(s.B21, dc.n2);
                s.upper.add(s.B12, dc.n1);
                s.upper.add(s.B22, dc.n2);
                s.upper.add(bld.a2, dc.beta2);
                s.upper.add(bld.drift_hi, 1.0);
                s.audit.pasting = std::abs(bld.two_resid(zb));
                s.audit.z_hat_eq = std::abs(u_stop_eval(z_hat116, pb).d1 + p.F + p.eta);
                s.case_tag = PrimalCase::C5;
                consider(std::move(s));
            }
        }
    }

    // ---- liquidity-first (z_bar >= z_hat): boundary from the reflecting
    //      system, z_bar from value-matching the linear segment against U ----
    try {
        const auto refl = solve_reflecting(p, dc, p.d, p.F + p.eta,
                                           /*allow_unbounded=*/false);
        if (std::isfinite(refl.z_hat)) {
            auto M = [&](double z) {
                return reflecting_eval(z, refl, dc, p.F + p.eta).v -
                       u_stop_eval(z, pb).v;
            };
            const auto hits =
                scan_sign_changes(M, refl.z_hat * (1.0 + 1e-12), refl.z_hat * 1e6, 500);
            if (!hits.empty()) {
                const double zb = brent(M, hits.front().lo, hits.front().hi);
                if (zb >= refl.z_hat - ord_tol) {
                    PrimalSolution s;
                    s.regime = Regime::liquidity_first;
                    s.two_piece = refl.split_at_kink;
                    s.z_bar = zb;
                    s.z_hat = refl.z_hat;
                    s.h_root = zeta;
                    s.pb = pb;
                    s.lower = refl.lower;
                    s.upper = refl.upper;
                    s.B21 = refl.B21;
                    s.B12 = refl.B12;
                    s.B22 = refl.B22;
                    s.B2 = refl.B2;
                    s.audit.pasting = refl.max_residual;
                    s.audit.z_hat_eq = std::abs(
                        reflecting_eval(refl.z_hat * (1.0 - 1e-12), refl, dc,
                                        p.F + p.eta)
                            .d1 +
                        p.F + p.eta);
                    s.case_tag = refl.split_at_kink ? PrimalCase::C6 : PrimalCase::C7;
                    consider(std::move(s));
                }
            }
        }
    } catch (const NoCaseAdmissible&) {
        // no reflecting boundary: regime cannot occur for these parameters
    }

    if (admissible.empty())
        throw NoCaseAdmissible("solve_primal: no case satisfies its constraints");
    if (admissible.size() > 1)
        throw MultipleCasesAdmissible("solve_primal: " +
                                      std::to_string(admissible.size()) +
                                      " cases satisfy their constraints");
    return admissible.front();
}

} // namespace bankopt
