#pragma once
#include <cmath>
#include <vector>

namespace bankopt {

// Sum of power terms c * z^e with derivatives up to third order.
// Every closed-form value function in the model is one of these per piece.
struct PowerSum {
    struct Term {
        double c, e;
    };
    std::vector<Term> terms;

    void add(double c, double e) {
        if (c != 0.0) terms.push_back({c, e});
    }

    double eval(double z, int order = 0) const {
        double s = 0.0;
        for (const auto& t : terms) {
            double f = t.c;
            for (int j = 0; j < order; ++j) f *= (t.e - j);
            if (f != 0.0) s += f * std::pow(z, t.e - order);
        }
        return s;
    }
};

// Value, first, second and third derivative at a point.
struct Jet3 {
    double v = 0.0, d1 = 0.0, d2 = 0.0, d3 = 0.0;
    double deriv(int order) const {
        switch (order) {
            case 0: return v;
            case 1: return d1;
            case 2: return d2;
            default: return d3;
        }
    }
};

inline Jet3 jet(const PowerSum& ps, double z) {
    Jet3 j;
    const double lz = std::log(z);
    for (const auto& t : ps.terms) {
        const double base = t.c * std::exp(t.e * lz);
        j.v += base;
        j.d1 += base * t.e / z;
        j.d2 += base * t.e * (t.e - 1.0) / (z * z);
        j.d3 += base * t.e * (t.e - 1.0) * (t.e - 2.0) / (z * z * z);
    }
    return j;
}

} // namespace bankopt
