#include "resodet/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace resodet {

namespace {

QuadRule build_gauss_legendre(int n) {
    QuadRule r;
    r.nodes.resize(n);
    r.weights.resize(n);
    // Newton on P_n with Chebyshev-like initial guesses.
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            pp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) {
                p0 = 1.0;
                p1 = x;
                for (int k = 2; k <= n; ++k) {
                    double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                pp = n * (x * p1 - p0) / (x * x - 1.0);
                break;
            }
        }
        double w = 2.0 / ((1.0 - x * x) * pp * pp);
        r.nodes[i] = -x;
        r.nodes[n - 1 - i] = x;
        r.weights[i] = w;
        r.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) r.nodes[n / 2] = 0.0;
    return r;
}

std::map<int, QuadRule> g_rules;
std::mutex g_rules_mutex;

}  // namespace

const QuadRule& gauss_legendre(int n) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
    std::lock_guard<std::mutex> lock(g_rules_mutex);
    auto it = g_rules.find(n);
    if (it == g_rules.end()) it = g_rules.emplace(n, build_gauss_legendre(n)).first;
    return it->second;
}

QuadRule gauss_legendre(int n, double a, double b) {
    const QuadRule& base = gauss_legendre(n);
    QuadRule r;
    r.nodes.resize(n);
    r.weights.resize(n);
    double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (int i = 0; i < n; ++i) {
        r.nodes[i] = mid + half * base.nodes[i];
        r.weights[i] = half * base.weights[i];
    }
    return r;
}

double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double rel_tol, int n0, int n_max) {
    auto eval = [&](int n) {
        QuadRule r = gauss_legendre(n, a, b);
        double s = 0.0;
        for (int i = 0; i < n; ++i) s += r.weights[i] * f(r.nodes[i]);
        return s;
    };
    double prev = eval(n0);
    for (int n = 2 * n0; n <= n_max; n *= 2) {
        double cur = eval(n);
        if (std::abs(cur - prev) <= rel_tol * (std::abs(cur) + 1e-300) + 1e-300) return cur;
        prev = cur;
    }
    return prev;
}

std::vector<double> fit_monomials(const std::vector<double>& x, const std::vector<double>& y,
                                  int J) {
    if (x.size() != y.size() || static_cast<int>(x.size()) < J)
        throw std::invalid_argument("fit_monomials: need at least J samples");
    double xm = 0.0;
    for (double v : x) xm = std::max(xm, std::abs(v));
    // normal equations on scaled variable s = x/xm
    std::vector<std::vector<double>> A(J, std::vector<double>(J, 0.0));
    std::vector<double> rhs(J, 0.0);
    for (size_t i = 0; i < x.size(); ++i) {
        double s = x[i] / xm;
        std::vector<double> pw(J + 1, 1.0);
        for (int j = 1; j <= J; ++j) pw[j] = pw[j - 1] * s;
        for (int p = 0; p < J; ++p) {
            rhs[p] += pw[p + 1] * y[i];
            for (int q = 0; q < J; ++q) A[p][q] += pw[p + 1] * pw[q + 1];
        }
    }
    // Gaussian elimination with partial pivoting
    std::vector<double> c(J, 0.0);
    for (int k = 0; k < J; ++k) {
        int piv = k;
        for (int i = k + 1; i < J; ++i)
            if (std::abs(A[i][k]) > std::abs(A[piv][k])) piv = i;
        std::swap(A[k], A[piv]);
        std::swap(rhs[k], rhs[piv]);
        for (int i = k + 1; i < J; ++i) {
            double m = A[i][k] / A[k][k];
            for (int q = k; q < J; ++q) A[i][q] -= m * A[k][q];
            rhs[i] -= m * rhs[k];
        }
    }
    for (int k = J - 1; k >= 0; --k) {
        double s = rhs[k];
        for (int q = k + 1; q < J; ++q) s -= A[k][q] * c[q];
        c[k] = s / A[k][k];
    }
    std::vector<double> out(J);
    double scale = 1.0;
    for (int j = 0; j < J; ++j) {
        scale /= xm;
        out[j] = c[j] * scale;
    }
    return out;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("loglog_slope: need >= 2 points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = static_cast<int>(x.size());
    for (int i = 0; i < n; ++i) {
        double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace resodet
