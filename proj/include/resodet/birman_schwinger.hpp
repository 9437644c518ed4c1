#pragma once

#include <optional>

#include "resodet/freeresolvent.hpp"
#include "resodet/potential.hpp"

namespace resodet {

// Nystrom discretization of K_V(lambda) = V R_0(lambda) chi.
// Row m is identically zero wherever V(x_m) = 0.
struct BSMatrix {
    Complex lam;
    int n = 0;
    int d = 1;
    int ell = 0;
    std::vector<double> nodes;
    std::vector<double> weights;
    std::vector<double> v_values;  // V at the nodes
    CMatrix entries;               // V(x_m) k(x_m, x_n; lam) w_n
};

BSMatrix assemble_bs(const Potential& V, Complex lam, int n, std::optional<int> ell = std::nullopt);

Complex bs_trace(const BSMatrix& K);

// quadrature approximation of (int int |V(x)|^2 |k(x,y)|^2 dx dy)^{1/2}
double bs_hilbert_schmidt_norm(const BSMatrix& K);

// singular values of the weight-symmetrized matrix (for cross-checks)
std::vector<double> bs_singular_values(const BSMatrix& K);

}  // namespace resodet
