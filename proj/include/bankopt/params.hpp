#pragma once
#include <string>
#include <vector>

namespace bankopt {

// Exogenous model inputs. Field names double as the JSON schema.
struct ModelParams {
    double delta = 0.6;    // utility consumption weight, 0 < delta < 1
    double k     = 3.0;    // relative risk aversion, k > 1
    double r     = 0.05;   // risk-free rate
    double mu    = 0.1;    // risky drift
    double sigma = 0.2;    // risky volatility, > 0
    double gamma = 0.3;    // discount rate
    double d     = 0.3;    // continuous debt repayment, > 0
    double w     = 1.5;    // wage rate, >= 0 (0 switches labour income off)
    double F     = 0.96;   // fixed bankruptcy toll, > 0
    double eta   = 0.0001; // liquidity cushion, >= 0
    double alpha = 0.9;    // post-bankruptcy wealth retention, 0 < alpha < 1
    double L_bar = 1.0;    // total time endowment
    double L     = 0.8;    // maximum leisure rate, 0 < L <= L_bar
    double x0    = 6.6;    // initial wealth, >= F + eta

    // Preset used for the no-labour-income comparison: full leisure, zero wage.
    static ModelParams full_leisure_preset();
};

struct Violation {
    std::string tag;     // stable identifier, e.g. "gamma_condition"
    std::string detail;  // human-readable explanation with numbers
    bool hard = true;    // hard violations block solving; soft ones only warn
};

struct ValidationReport {
    std::vector<Violation> violations;

    bool valid() const { return violations.empty(); }
    bool solvable() const {
        for (const auto& v : violations)
            if (v.hard) return false;
        return true;
    }
    bool has(const std::string& tag) const {
        for (const auto& v : violations)
            if (v.tag == tag) return true;
        return false;
    }
    std::string summary() const;
};

// Constants shared by every solver, computed once from the inputs.
//
// beta1/beta2 are the exponents of the two branches of the dual utility;
// Gamma(b) = gamma - (gamma-r)*b - (theta^2/2)*b*(b-1) is the divisor that
// turns A*z^b into a particular solution of the dual ODE (Gamma(1) = r).
// n1 < 0 < 1 < n2 solve (theta^2/2) n(n-1) + (gamma-r) n - gamma = 0.
struct DerivedConstants {
    double theta;    // market price of risk (mu - r) / sigma
    double A1;       // dual-utility coefficient, constrained-leisure branch (< 0)
    double A2;       // dual-utility coefficient, interior branch (< 0; 0 when w = 0)
    double y_tilde;  // leisure kink: l = L binds for y < y_tilde (+inf when w = 0)
    double n1;       // negative homogeneous exponent
    double n2;       // homogeneous exponent > 1
    double Gamma1;   // Gamma(beta1)
    double Gamma2;   // Gamma(beta2)

    double beta1;    // delta(1-k) / (delta(1-k)-1), in (0,1)
    double beta2;    // (k-1)/k, in (0,1)
    double c_coef_lo;    // consumption map coefficient on the constrained branch
    double c_coef_hi;    // consumption map coefficient on the interior branch
    double l_coef_hi;    // leisure map coefficient on the interior branch

    double Gamma(double b, const ModelParams& p) const;
};

ValidationReport validate(const ModelParams& p);

// Throws InvalidParams when a hard violation is present.
DerivedConstants derive(const ModelParams& p);

} // namespace bankopt
