#include "bankopt/params.hpp"
#include "bankopt/errors.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace bankopt {

ModelParams ModelParams::full_leisure_preset() {
    ModelParams p;
    p.w = 0.0;
    p.L = p.L_bar;
    return p;
}

std::string ValidationReport::summary() const {
    std::ostringstream os;
    for (size_t i = 0; i < violations.size(); ++i) {
        if (i) os << "; ";
        os << violations[i].tag << " (" << violations[i].detail << ")";
    }
    return os.str();
}

namespace {

void add(ValidationReport& rep, std::string tag, std::string detail, bool hard) {
    rep.violations.push_back({std::move(tag), std::move(detail), hard});
}

std::string num(double x) {
    std::ostringstream os;
    os.precision(10);
    os << x;
    return os.str();
}

} // namespace

ValidationReport validate(const ModelParams& p) {
    ValidationReport rep;

    const double fields[] = {p.delta, p.k, p.r, p.mu, p.sigma, p.gamma, p.d,
                             p.w, p.F, p.eta, p.alpha, p.L_bar, p.L, p.x0};
    for (double f : fields) {
        if (!std::isfinite(f)) {
            add(rep, "finite_fields", "all parameters must be finite", true);
            return rep;
        }
    }

    if (!(p.delta > 0.0 && p.delta < 1.0))
        add(rep, "delta_range", "delta=" + num(p.delta) + " not in (0,1)", true);
    if (!(p.k > 1.0))
        add(rep, "k_range", "k=" + num(p.k) + " must exceed 1", true);
    if (!(p.sigma > 0.0))
        add(rep, "sigma_positive", "sigma=" + num(p.sigma), true);
    if (!(p.r > 0.0))
        add(rep, "r_positive", "r=" + num(p.r), true);
    if (!(p.d > 0.0))
        add(rep, "d_positive", "d=" + num(p.d), true);
    if (!(p.w >= 0.0))
        add(rep, "w_nonnegative", "w=" + num(p.w), true);
    if (!(p.F > 0.0))
        add(rep, "F_positive", "F=" + num(p.F), true);
    if (!(p.eta >= 0.0))
        add(rep, "eta_nonnegative", "eta=" + num(p.eta), true);
    if (!(p.alpha > 0.0 && p.alpha < 1.0))
        add(rep, "alpha_range", "alpha=" + num(p.alpha) + " not in (0,1)", true);
    if (!(p.L > 0.0 && p.L <= p.L_bar))
        add(rep, "leisure_bounds", "need 0 < L <= L_bar, got L=" + num(p.L) +
                                       " L_bar=" + num(p.L_bar), true);

    if (p.sigma > 0.0) {
        const double theta = (p.mu - p.r) / p.sigma;
        if (std::abs(theta) < 1e-12)
            add(rep, "theta_nonzero", "mu=r degenerates the dual diffusion", true);
        const double bound = p.r + 0.5 * theta * theta;
        if (!(p.gamma > bound))
            add(rep, "gamma_condition",
                "gamma=" + num(p.gamma) + " must exceed r+theta^2/2=" + num(bound), true);
    }

    // rF - d + w*L_bar - w*L_bar/alpha < 0: bankruptcy must carry a net benefit,
    // otherwise the stopping boundary does not exist.
    if (p.alpha > 0.0) {
        const double lhs = p.r * p.F - p.d + p.w * p.L_bar - p.w * p.L_bar / p.alpha;
        if (!(lhs < 0.0))
            add(rep, "bankruptcy_benefit_condition",
                "rF-d+wL_bar-wL_bar/alpha=" + num(lhs) + " must be negative", true);
    }

    // F + eta >= (d - w*L_bar)/r: the pre-bankruptcy floor covers the market
    // value of the debt net of maximal labour income. Soft: the bankruptcy
    // option itself remains well-defined below this level (the no-labour
    // preset intentionally sits outside it).
    if (p.r > 0.0) {
        const double floor = (p.d - p.w * p.L_bar) / p.r;
        if (!(p.F + p.eta >= floor))
            add(rep, "debt_capacity_condition",
                "F+eta=" + num(p.F + p.eta) + " below (d-wL_bar)/r=" + num(floor), false);
    }

    if (!(p.x0 >= p.F + p.eta))
        add(rep, "initial_wealth_condition",
            "x0=" + num(p.x0) + " below F+eta=" + num(p.F + p.eta), false);

    return rep;
}

double DerivedConstants::Gamma(double b, const ModelParams& p) const {
    return p.gamma - (p.gamma - p.r) * b - 0.5 * theta * theta * b * (b - 1.0);
}

DerivedConstants derive(const ModelParams& p) {
    const auto rep = validate(p);
    if (!rep.solvable())
        throw InvalidParams("invalid parameters: " + rep.summary());

    DerivedConstants dc{};
    dc.theta = (p.mu - p.r) / p.sigma;

    const double dk = p.delta * (1.0 - p.k); // < 0
    dc.beta1 = dk / (dk - 1.0);
    dc.beta2 = (p.k - 1.0) / p.k;

    const double eA1 = -(1.0 - p.k) * (1.0 - p.delta) / (dk - 1.0);
    dc.A1 = (1.0 - p.delta + p.delta * p.k) / dk * std::pow(p.L, eA1);
    dc.c_coef_lo = std::pow(p.L, eA1);

    if (p.w > 0.0) {
        const double Q = (1.0 - p.delta) / (p.delta * p.w);
        dc.A2 = p.k / dk * std::pow(Q, (1.0 - p.k) * (1.0 - p.delta) / p.k);
        dc.y_tilde = std::pow(p.L, -p.k) * std::pow(Q, 1.0 - dk);
        dc.c_coef_hi = std::pow(Q, (1.0 - p.k) * (1.0 - p.delta) / p.k);
        dc.l_coef_hi = std::pow(Q, (1.0 - dk) / p.k);
    } else {
        // Zero wage: the leisure cap binds for every dual value and the
        // interior branch is unreachable.
        dc.A2 = 0.0;
        dc.y_tilde = std::numeric_limits<double>::infinity();
        dc.c_coef_hi = 0.0;
        dc.l_coef_hi = 0.0;
    }

    const double a = 0.5 * dc.theta * dc.theta;
    const double b = p.gamma - p.r - a;
    const double c = -p.gamma;
    const double disc = std::sqrt(b * b - 4.0 * a * c);
    dc.n1 = (-b - disc) / (2.0 * a);
    dc.n2 = (-b + disc) / (2.0 * a);

    dc.Gamma1 = dc.Gamma(dc.beta1, p);
    dc.Gamma2 = dc.Gamma(dc.beta2, p);
    return dc;
}

} // namespace bankopt
