#include "resodet/freeresolvent.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "resodet/quadrature.hpp"

namespace resodet {

Complex kernel_1d(double x, double y, Complex lam) {
    if (std::abs(lam) < kLambdaMin)
        throw std::invalid_argument("kernel_1d: |lambda| below the pole-exclusion radius");
    Complex i(0.0, 1.0);
    return i / (2.0 * lam) * std::exp(i * lam * std::abs(x - y));
}

Complex kernel_3d(double r, Complex lam) {
    if (!(r > 0.0)) throw std::invalid_argument("kernel_3d: r must be > 0 (diagonal singularity)");
    Complex i(0.0, 1.0);
    return std::exp(i * lam * r) / (4.0 * M_PI * r);
}

// ---- spherical Bessel functions for complex argument ----
// j_ell: power series for small |z|, otherwise Miller downward recurrence
// normalized by j_0; y_ell: upward recurrence (dominant direction is stable).

namespace {

Complex sph_j_series(int ell, Complex z) {
    // j_ell(z) = z^ell / (2ell+1)!! * sum_k (-z^2/2)^k / (k! (2ell+3)(2ell+5)...(2ell+2k+1))
    double dfact = 1.0;
    for (int i = 1; i <= 2 * ell + 1; i += 2) dfact *= i;
    Complex term(1.0, 0.0), sum(1.0, 0.0);
    Complex z2 = -0.5 * z * z;
    for (int k = 1; k < 60; ++k) {
        term *= z2 / (static_cast<double>(k) * (2.0 * ell + 2.0 * k + 1.0));
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    Complex zp(1.0, 0.0);
    for (int i = 0; i < ell; ++i) zp *= z;
    return zp / dfact * sum;
}

}  // namespace

Complex sph_bessel_j(int ell, Complex z) {
    if (ell < 0) throw std::invalid_argument("sph_bessel_j: ell >= 0");
    if (z == Complex(0.0)) return ell == 0 ? Complex(1.0) : Complex(0.0);
    double az = std::abs(z);
    if (az <= 1.5 || az <= 0.5 * ell) return sph_j_series(ell, z);
    if (ell == 0) return std::sin(z) / z;
    // Miller downward recurrence with renormalization
    int start = ell + 16 + static_cast<int>(az);
    Complex fp(0.0), fc(1e-280, 0.0);
    std::vector<Complex> vals(ell + 1);
    for (int k = start; k >= 0; --k) {
        Complex fm = (2.0 * k + 3.0) / z * fc - fp;
        fp = fc;
        fc = fm;
        if (k <= ell) vals[k] = fc;
        if (std::abs(fc) > 1e250) {
            double s = 1e-250;
            fp *= s;
            fc *= s;
            for (int t = std::max(0, k); t <= ell; ++t) vals[t] *= s;
        }
    }
    Complex j0 = std::sin(z) / z;
    return vals[ell] * (j0 / fc);
}

Complex sph_bessel_y(int ell, Complex z) {
    if (ell < 0) throw std::invalid_argument("sph_bessel_y: ell >= 0");
    if (z == Complex(0.0)) throw std::invalid_argument("sph_bessel_y: z = 0");
    Complex y0 = -std::cos(z) / z;
    if (ell == 0) return y0;
    Complex y1 = -std::cos(z) / (z * z) - std::sin(z) / z;
    for (int k = 1; k < ell; ++k) {
        Complex y2 = (2.0 * k + 1.0) / z * y1 - y0;
        y0 = y1;
        y1 = y2;
        if (!std::isfinite(std::abs(y1)))
            throw NumericalError("sph_bessel_y: recurrence overflow");
    }
    return y1;
}

Complex sph_hankel1(int ell, Complex z) {
    return sph_bessel_j(ell, z) + Complex(0.0, 1.0) * sph_bessel_y(ell, z);
}

Complex kernel_radial(int ell, double r, double rp, Complex lam) {
    if (!(r > 0.0) || !(rp > 0.0)) throw std::invalid_argument("kernel_radial: r, r' must be > 0");
    if (ell < 0 || ell > kEllMax)
        throw std::invalid_argument("kernel_radial: ell out of supported range");
    double rl = std::min(r, rp), rg = std::max(r, rp);
    Complex i(0.0, 1.0);
    return i * lam * r * rp * sph_bessel_j(ell, lam * rl) * sph_hankel1(ell, lam * rg);
}

// ---- assembly ----

KernelMatrix assemble_cutoff_resolvent(double R, Complex lam, int n, int d,
                                       std::optional<int> ell) {
    if (n < 4) throw std::invalid_argument("assemble_cutoff_resolvent: n >= 4");
    if (d != 1 && d != 3) throw std::invalid_argument("assemble_cutoff_resolvent: d must be 1 or 3");
    KernelMatrix K;
    K.lam = lam;
    K.d = d;
    K.ell = ell.value_or(0);
    QuadRule rule = d == 1 ? gauss_legendre(n, -R, R) : gauss_legendre(n, 0.0, R);
    K.nodes = rule.nodes;
    K.weights = rule.weights;
    K.entries = CMatrix(n);
    for (int m = 0; m < n; ++m)
        for (int j = 0; j < n; ++j) {
            Complex k = d == 1 ? kernel_1d(rule.nodes[m], rule.nodes[j], lam)
                               : kernel_radial(K.ell, rule.nodes[m], rule.nodes[j], lam);
            K.entries.at(m, j) = k * rule.weights[j];
        }
    return K;
}

namespace {

CMatrix weight_symmetrized(const KernelMatrix& K) {
    // conjugate by diag(sqrt(w)): same spectrum, Hermitian-friendly conditioning
    int n = K.entries.n;
    CMatrix S(n);
    for (int i = 0; i < n; ++i) {
        double si = std::sqrt(K.weights[i]);
        for (int j = 0; j < n; ++j) S.at(i, j) = si * K.entries.at(i, j) / std::sqrt(K.weights[j]);
    }
    return S;
}

}  // namespace

double operator_norm(const KernelMatrix& A) {
    if (A.entries.n == 0) return 0.0;
    return power_iteration_norm(weight_symmetrized(A));
}

std::vector<double> singular_values(const KernelMatrix& A) {
    return jacobi_singular_values(weight_symmetrized(A));
}

double hs_norm(const KernelMatrix& A) { return frobenius_norm(weight_symmetrized(A)); }

double cutoff_resolvent_norm(double R, Complex lam, int n, int d, std::optional<int> ell) {
    std::vector<int> ns;
    for (int k = 0; k < 4; ++k) {
        int m = n >> k;
        if (m < 16) break;
        ns.push_back(m);
    }
    std::reverse(ns.begin(), ns.end());
    std::vector<double> v;
    for (int m : ns) v.push_back(operator_norm(assemble_cutoff_resolvent(R, lam, m, d, ell)));
    int p = 2;
    while (v.size() > 1) {
        double f = std::pow(2.0, p++);
        std::vector<double> next(v.size() - 1);
        for (size_t i = 0; i + 1 < v.size(); ++i) next[i] = (f * v[i + 1] - v[i]) / (f - 1.0);
        v = std::move(next);
    }
    return v[0];
}

ResolventBoundReport verify_resolvent_bound(double R, int d, const std::vector<Complex>& grid,
                                            int n) {
    ResolventBoundReport rep;
    rep.alpha = 2.0 * R;
    double sup = 0.0;
    for (Complex lam : grid) {
        if (d == 1 && std::abs(lam) < kLambdaMin)
            throw std::invalid_argument("verify_resolvent_bound: grid enters the exclusion disk");
        double nm = cutoff_resolvent_norm(R, lam, n, d, d == 3 ? std::optional<int>(0) : std::nullopt);
        rep.norms.push_back(nm);
        double weighted = nm * std::exp(rep.alpha * lam.imag());
        if (d == 1) weighted *= std::abs(lam);
        if (!std::isfinite(weighted)) rep.finite = false;
        sup = std::max(sup, weighted);
    }
    rep.empirical_constant = sup;
    return rep;
}

SingularDecayReport verify_singular_decay(double R, int d, Complex lam, int n,
                                          std::optional<int> ell) {
    KernelMatrix K = assemble_cutoff_resolvent(R, lam, n, d, ell);
    std::vector<double> sv = singular_values(K);
    SingularDecayReport rep;
    rep.values = sv;
    int reliable = 0;
    for (double s : sv)
        if (s > 1e-13) ++reliable;
    if (reliable < 30)
        throw NumericalError("verify_singular_decay: insufficient resolvable singular values");
    rep.fit_lo = 3;
    rep.fit_hi = std::min(reliable, n / 3);
    std::vector<double> xs, ys;
    for (int j = rep.fit_lo; j <= rep.fit_hi; ++j) {
        xs.push_back(j);
        ys.push_back(sv[j - 1]);
    }
    rep.slope = loglog_slope(xs, ys);
    return rep;
}

std::string kernel_matrix_csv(const KernelMatrix& A) {
    std::ostringstream os;
    os.precision(17);
    int n = A.entries.n;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (j) os << ',';
            const Complex& z = A.entries.at(i, j);
            os << z.real() << ' ' << z.imag();
        }
        os << '\n';
    }
    return os.str();
}

}  // namespace resodet
