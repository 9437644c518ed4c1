#include "resodet/cmatrix.hpp"

#include <algorithm>
#include <cmath>

namespace resodet {

CMatrix CMatrix::identity(int n) {
    CMatrix m(n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1.0;
    return m;
}

CMatrix CMatrix::operator+(const CMatrix& o) const {
    if (n != o.n) throw std::invalid_argument("CMatrix: size mismatch");
    CMatrix r(n);
    for (size_t i = 0; i < a.size(); ++i) r.a[i] = a[i] + o.a[i];
    return r;
}

CMatrix CMatrix::operator*(const CMatrix& o) const {
    if (n != o.n) throw std::invalid_argument("CMatrix: size mismatch");
    CMatrix r(n);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
            Complex aik = at(i, k);
            if (aik == Complex(0.0)) continue;
            for (int j = 0; j < n; ++j) r.at(i, j) += aik * o.at(k, j);
        }
    return r;
}

ScaledComplex det_one_plus(const CMatrix& A) {
    int n = A.n;
    std::vector<Complex> m(A.a);
    auto at = [&](int i, int j) -> Complex& { return m[static_cast<size_t>(i) * n + j]; };
    for (int i = 0; i < n; ++i) at(i, i) += 1.0;

    double log_mag = 0.0;
    Complex phase(1.0, 0.0);
    for (int k = 0; k < n; ++k) {
        int piv = k;
        double best = std::abs(at(k, k));
        for (int i = k + 1; i < n; ++i) {
            double v = std::abs(at(i, k));
            if (v > best) {
                best = v;
                piv = i;
            }
        }
        if (best == 0.0) return ScaledComplex{Complex(0.0), 0.0};
        if (piv != k) {
            for (int j = k; j < n; ++j) std::swap(at(piv, j), at(k, j));
            phase = -phase;
        }
        Complex p = at(k, k);
        log_mag += std::log(std::abs(p));
        phase *= p / std::abs(p);
        for (int i = k + 1; i < n; ++i) {
            Complex f = at(i, k) / p;
            if (f == Complex(0.0)) continue;
            at(i, k) = 0.0;
            for (int j = k + 1; j < n; ++j) at(i, j) -= f * at(k, j);
        }
    }
    return ScaledComplex{phase, log_mag};
}

Complex trace(const CMatrix& A) {
    Complex t(0.0);
    for (int i = 0; i < A.n; ++i) t += A.at(i, i);
    return t;
}

double frobenius_norm(const CMatrix& A) {
    double s = 0.0;
    for (const Complex& z : A.a) s += std::norm(z);
    return std::sqrt(s);
}

namespace {

// y = A x and y = A^H x without forming A^H.
void matvec(const CMatrix& A, const std::vector<Complex>& x, std::vector<Complex>& y) {
    int n = A.n;
    for (int i = 0; i < n; ++i) {
        Complex s(0.0);
        const Complex* row = &A.a[static_cast<size_t>(i) * n];
        for (int j = 0; j < n; ++j) s += row[j] * x[j];
        y[i] = s;
    }
}

void matvec_adj(const CMatrix& A, const std::vector<Complex>& x, std::vector<Complex>& y) {
    int n = A.n;
    std::fill(y.begin(), y.end(), Complex(0.0));
    for (int i = 0; i < n; ++i) {
        const Complex* row = &A.a[static_cast<size_t>(i) * n];
        Complex xi = x[i];
        for (int j = 0; j < n; ++j) y[j] += std::conj(row[j]) * xi;
    }
}

}  // namespace

double power_iteration_norm(const CMatrix& A, double rel_tol, int max_iter) {
    int n = A.n;
    if (n == 0) return 0.0;
    std::vector<Complex> x(n), y(n), z(n);
    // fixed deterministic start vector
    uint64_t s = 0x9e3779b97f4a7c15ull;
    for (int i = 0; i < n; ++i) {
        s ^= s >> 12; s ^= s << 25; s ^= s >> 27;
        x[i] = Complex(1.0 + (s % 1000) * 1e-4, (s % 7) * 1e-3);
    }
    double nrm = 0.0;
    for (const Complex& v : x) nrm += std::norm(v);
    nrm = std::sqrt(nrm);
    for (auto& v : x) v /= nrm;

    double prev = -1.0;
    for (int it = 0; it < max_iter; ++it) {
        matvec(A, x, y);
        matvec_adj(A, y, z);
        double zn = 0.0;
        for (const Complex& v : z) zn += std::norm(v);
        zn = std::sqrt(zn);
        if (zn == 0.0) return 0.0;
        double sigma = std::sqrt(zn);
        for (int i = 0; i < n; ++i) x[i] = z[i] / zn;
        if (prev >= 0.0 && std::abs(sigma - prev) <= rel_tol * sigma) return sigma;
        prev = sigma;
    }
    throw NumericalError("power_iteration_norm: no convergence within iteration cap");
}

std::vector<double> jacobi_singular_values(const CMatrix& A) {
    int n = A.n;
    // H = A^H A, Hermitian positive semidefinite
    std::vector<Complex> H(static_cast<size_t>(n) * n, Complex(0.0));
    auto h = [&](int i, int j) -> Complex& { return H[static_cast<size_t>(i) * n + j]; };
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            Complex s(0.0);
            for (int k = 0; k < n; ++k) s += std::conj(A.at(k, i)) * A.at(k, j);
            h(i, j) = s;
            h(j, i) = std::conj(s);
        }

    // cyclic complex Jacobi sweeps: phase-scale the (p,q) entry to make the
    // 2x2 block real symmetric, then a plain Givens rotation zeroes it
    for (int sweep = 0; sweep < 80; ++sweep) {
        double off = 0.0, diag = 0.0;
        for (int i = 0; i < n; ++i) {
            diag += std::abs(h(i, i));
            for (int j = i + 1; j < n; ++j) off += std::norm(h(i, j));
        }
        if (std::sqrt(off) <= 1e-15 * (diag + 1e-300)) break;
        for (int p = 0; p < n - 1; ++p)
            for (int q = p + 1; q < n; ++q) {
                Complex beta = h(p, q);
                double b = std::abs(beta);
                double app = h(p, p).real(), aqq = h(q, q).real();
                if (b <= 1e-18 * (std::abs(app) + std::abs(aqq) + 1e-300)) continue;
                Complex d = std::conj(beta) / b;
                double theta = 0.5 * std::atan2(2.0 * b, aqq - app);
                double c = std::cos(theta), sn = std::sin(theta);
                // J = diag(1, d) * [[c, s], [-s, c]] ; H <- J^H H J
                for (int k = 0; k < n; ++k) {
                    Complex hkp = h(k, p), hkq = h(k, q);
                    h(k, p) = c * hkp - sn * d * hkq;
                    h(k, q) = sn * hkp + c * d * hkq;
                }
                Complex dc = std::conj(d);
                for (int k = 0; k < n; ++k) {
                    Complex hpk = h(p, k), hqk = h(q, k);
                    h(p, k) = c * hpk - sn * dc * hqk;
                    h(q, k) = sn * hpk + c * dc * hqk;
                }
            }
    }
    std::vector<double> sv(n);
    for (int i = 0; i < n; ++i) sv[i] = std::sqrt(std::max(0.0, h(i, i).real()));
    std::sort(sv.begin(), sv.end(), std::greater<double>());
    return sv;
}

}  // namespace resodet
