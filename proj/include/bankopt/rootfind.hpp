#pragma once
#include <cmath>
#include <functional>
#include <vector>

#include "bankopt/errors.hpp"

namespace bankopt {

// Brent's method on a sign-changing bracket [a,b]. Converges to relative
// tolerance rtol (plus absolute floor xtol).
double brent(const std::function<double(double)>& f, double a, double b,
             double rtol = 1e-15, double xtol = 1e-300, int maxit = 200);

struct BracketHit {
    double lo, hi;
};

// Scan [lo,hi] on a geometric grid and return every sign-change cell.
std::vector<BracketHit> scan_sign_changes(const std::function<double(double)>& f,
                                          double lo, double hi, int n = 400);

// Solve an n x n dense linear system in place (partial pivoting).
// a is row-major n*n, b length n; solution returned in b.
void solve_dense(std::vector<double>& a, std::vector<double>& b);

} // namespace bankopt
