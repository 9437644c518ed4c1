#include "resodet/birman_schwinger.hpp"

#include <cmath>

#include "resodet/quadrature.hpp"

namespace resodet {

BSMatrix assemble_bs(const Potential& V, Complex lam, int n, std::optional<int> ell) {
    int d = V.dimension();
    if (d == 3 && !V.radial()) throw std::invalid_argument("assemble_bs: d=3 needs a radial potential");
    if (d == 3 && !ell.has_value()) throw std::invalid_argument("assemble_bs: d=3 needs a sector ell");
    BSMatrix K;
    K.lam = lam;
    K.n = n;
    K.d = d;
    K.ell = ell.value_or(0);
    double R = V.support_radius();
    QuadRule rule = d == 1 ? gauss_legendre(n, -R, R) : gauss_legendre(n, 0.0, R);
    K.nodes = rule.nodes;
    K.weights = rule.weights;
    K.v_values.resize(n);
    for (int m = 0; m < n; ++m) K.v_values[m] = V.evaluate(rule.nodes[m]);
    K.entries = CMatrix(n);
    for (int m = 0; m < n; ++m) {
        if (K.v_values[m] == 0.0) continue;  // row stays zero
        for (int j = 0; j < n; ++j) {
            Complex k = d == 1 ? kernel_1d(rule.nodes[m], rule.nodes[j], lam)
                               : kernel_radial(K.ell, rule.nodes[m], rule.nodes[j], lam);
            K.entries.at(m, j) = K.v_values[m] * k * rule.weights[j];
        }
    }
    return K;
}

Complex bs_trace(const BSMatrix& K) { return trace(K.entries); }

namespace {

CMatrix weight_symmetrized(const BSMatrix& K) {
    int n = K.n;
    CMatrix S(n);
    for (int i = 0; i < n; ++i) {
        double si = std::sqrt(K.weights[i]);
        for (int j = 0; j < n; ++j) S.at(i, j) = si * K.entries.at(i, j) / std::sqrt(K.weights[j]);
    }
    return S;
}

}  // namespace

double bs_hilbert_schmidt_norm(const BSMatrix& K) { return frobenius_norm(weight_symmetrized(K)); }

std::vector<double> bs_singular_values(const BSMatrix& K) {
    return jacobi_singular_values(weight_symmetrized(K));
}

}  // namespace resodet
