#pragma once

#include <functional>
#include <vector>

namespace resodet {

struct QuadRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// Gauss-Legendre rule on [-1, 1]; results are cached per n.
const QuadRule& gauss_legendre(int n);

// Rule mapped onto [a, b].
QuadRule gauss_legendre(int n, double a, double b);

// Integrates f on [a, b] with node doubling until two successive values agree
// to rel_tol (relative, with a small absolute floor).  Starts at n0 nodes.
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double rel_tol = 1e-10, int n0 = 16, int n_max = 1 << 14);

// Least-squares fit of y against powers x^1..x^J (no constant term), column-scaled.
std::vector<double> fit_monomials(const std::vector<double>& x, const std::vector<double>& y,
                                  int J);

// Least-squares slope of log(y) vs log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace resodet
