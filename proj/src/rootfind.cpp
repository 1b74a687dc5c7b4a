#include "bankopt/rootfind.hpp"

#include <algorithm>
#include <cstddef>

namespace bankopt {

double brent(const std::function<double(double)>& f, double a, double b,
             double rtol, double xtol, int maxit) {
    double fa = f(a), fb = f(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if (fa * fb > 0.0)
        throw BracketingFailure("brent: no sign change on bracket");

    double c = a, fc = fa, d = b - a, e = d;
    for (int it = 0; it < maxit; ++it) {
        if (std::abs(fc) < std::abs(fb)) {
            a = b; b = c; c = a;
            fa = fb; fb = fc; fc = fa;
        }
        const double tol = 2.0 * rtol * std::abs(b) + 0.5 * xtol;
        const double m = 0.5 * (c - b);
        if (std::abs(m) <= tol || fb == 0.0) return b;
        if (std::abs(e) < tol || std::abs(fa) <= std::abs(fb)) {
            d = m; e = m;
        } else {
            double s = fb / fa, p, q;
            if (a == c) {
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {
                const double qq = fa / fc, rr = fb / fc;
                p = s * (2.0 * m * qq * (qq - rr) - (b - a) * (rr - 1.0));
                q = (qq - 1.0) * (rr - 1.0) * (s - 1.0);
            }
            if (p > 0.0) q = -q; else p = -p;
            if (2.0 * p < std::min(3.0 * m * q - std::abs(tol * q), std::abs(e * q))) {
                e = d; d = p / q;
            } else {
                d = m; e = m;
            }
        }
        a = b; fa = fb;
        b += (std::abs(d) > tol) ? d : (m > 0.0 ? tol : -tol);
        fb = f(b);
        if ((fb > 0.0) == (fc > 0.0)) {
            c = a; fc = fa; d = b - a; e = d;
        }
    }
    return b;
}

std::vector<BracketHit> scan_sign_changes(const std::function<double(double)>& f,
                                          double lo, double hi, int n) {
    std::vector<BracketHit> hits;
    if (!(lo > 0.0) || !(hi > lo) || n < 2) return hits;
    const double ratio = std::pow(hi / lo, 1.0 / (n - 1));
    double z = lo, fz = f(z);
    for (int i = 1; i < n; ++i) {
        const double z2 = (i == n - 1) ? hi : lo * std::pow(ratio, i);
        const double f2 = f(z2);
        if (std::isfinite(fz) && std::isfinite(f2) && fz * f2 <= 0.0 && fz != f2)
            hits.push_back({z, z2});
        z = z2; fz = f2;
    }
    return hits;
}

void solve_dense(std::vector<double>& a, std::vector<double>& b) {
    const size_t n = b.size();
    for (size_t col = 0; col < n; ++col) {
        size_t piv = col;
        for (size_t row = col + 1; row < n; ++row)
            if (std::abs(a[row * n + col]) > std::abs(a[piv * n + col])) piv = row;
        if (piv != col) {
            for (size_t j = 0; j < n; ++j) std::swap(a[col * n + j], a[piv * n + j]);
            std::swap(b[col], b[piv]);
        }
        const double diag = a[col * n + col];
        if (diag == 0.0) throw BracketingFailure("solve_dense: singular system");
        for (size_t row = col + 1; row < n; ++row) {
            const double fac = a[row * n + col] / diag;
            if (fac == 0.0) continue;
            for (size_t j = col; j < n; ++j) a[row * n + j] -= fac * a[col * n + j];
            b[row] -= fac * b[col];
        }
    }
    for (size_t i = n; i-- > 0;) {
        double s = b[i];
        for (size_t j = i + 1; j < n; ++j) s -= a[i * n + j] * b[j];
        b[i] = s / a[i * n + i];
    }
}

} // namespace bankopt
