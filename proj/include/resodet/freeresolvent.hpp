#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "resodet/cmatrix.hpp"

namespace resodet {

// exclusion disk around lambda = 0 for the d=1 kernel pole and the
// zero-energy threshold
inline constexpr double kLambdaMin = 1e-3;
inline constexpr int kEllMax = 8;

// (i/2 lambda) e^{i lambda |x-y|}
Complex kernel_1d(double x, double y, Complex lam);

// e^{i lambda r}/(4 pi r), r = |x-y| > 0
Complex kernel_3d(double r, Complex lam);

// spherical Bessel/Hankel for complex argument
Complex sph_bessel_j(int ell, Complex z);
Complex sph_bessel_y(int ell, Complex z);
Complex sph_hankel1(int ell, Complex z);

// Outgoing Green kernel of -d^2/dr^2 + ell(ell+1)/r^2 - lambda^2 on (0, inf):
// G_ell(r, r') = i lambda r r' j_ell(lambda r_<) h^(1)_ell(lambda r_>)
Complex kernel_radial(int ell, double r, double rp, Complex lam);

struct KernelMatrix {
    Complex lam;
    int d = 1;
    int ell = 0;  // d=3 sector
    std::vector<double> nodes;
    std::vector<double> weights;
    CMatrix entries;  // A[m][n] = k(x_m, x_n; lam) * w_n
};

// Gauss-Legendre Nystrom matrix of the cutoff free resolvent on [-R, R] (d=1)
// or the radial sector ell on (0, R] (d=3).
KernelMatrix assemble_cutoff_resolvent(double R, Complex lam, int n, int d,
                                       std::optional<int> ell = std::nullopt);

// Largest singular value of the weight-symmetrized matrix (power iteration).
double operator_norm(const KernelMatrix& A);

// All singular values of the weight-symmetrized matrix, descending (Jacobi).
std::vector<double> singular_values(const KernelMatrix& A);

double hs_norm(const KernelMatrix& A);

// Richardson-extrapolated operator norm over node counts n, n/2, n/4, n/8.
// The kernel kink on the diagonal limits the raw Nystrom rate to O(n^-2);
// extrapolation restores the accuracy the self-convergence checks need.
double cutoff_resolvent_norm(double R, Complex lam, int n, int d,
                             std::optional<int> ell = std::nullopt);

struct ResolventBoundReport {
    double alpha = 0.0;            // 2R
    double empirical_constant = 0.0;  // sup over grid of ||chi R0 chi|| * |lam| * e^{alpha Im lam} (d=1)
    bool finite = true;
    std::vector<double> norms;     // per grid point
};

ResolventBoundReport verify_resolvent_bound(double R, int d, const std::vector<Complex>& grid,
                                            int n = 128);

struct SingularDecayReport {
    double slope = 0.0;
    int fit_lo = 0, fit_hi = 0;
    std::vector<double> values;
};

// log-log least-squares fit of mu_j vs j over the reliable range;
// requires at least 30 singular values above 1e-13.
SingularDecayReport verify_singular_decay(double R, int d, Complex lam, int n,
                                          std::optional<int> ell = std::nullopt);

// row-major CSV with "re,im" cells
std::string kernel_matrix_csv(const KernelMatrix& A);

}  // namespace resodet
