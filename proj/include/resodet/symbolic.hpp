#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <map>
#include <string>
#include <vector>

namespace resodet {

using Rational = boost::multiprecision::cpp_rational;

// One term c * z^zp * prod_m V^(m)(y) of a differential polynomial in V,
// z = x - y.  v_derivs is kept sorted descending (canonical form).
struct SymbolicTerm {
    Rational coeff;
    int z_power = 0;
    std::vector<int> v_derivs;
};

// Canonical list of terms: v_derivs sorted, equal keys merged, zero
// coefficients dropped, keys ordered deterministically.
struct DifferentialPolynomial {
    std::vector<SymbolicTerm> terms;

    static DifferentialPolynomial one();
    static DifferentialPolynomial z_power(int n);

    DifferentialPolynomial canonicalized() const;
    DifferentialPolynomial operator+(const DifferentialPolynomial& o) const;
    DifferentialPolynomial operator*(const Rational& c) const;

    // d/dy: z^n -> -n z^{n-1}; V^(m) -> V^(m+1) by the product rule
    DifferentialPolynomial d_dy() const;

    // -d^2/dy^2 + V(y) applied symbolically
    DifferentialPolynomial apply_hamiltonian() const;

    // drop every term with z_power > 0
    DifferentialPolynomial at_coincidence() const;

    std::string str() const;
};

// generalized binomial C(j-1+d/2, k+d/2) as the exact product
// prod_{i=1}^{j-1-k} (k + d/2 + i)/i
Rational hp_binomial(int j, int k, int d);

// Density of the j-th heat invariant for -d^2/dx^2 + V on the line:
// sum_{k=0}^{j-1} (-1)^j C(j-1+1/2, k+1/2) H^{k+j}(z^{2k})|_{z=0} / (4^k k! (k+j)!)
DifferentialPolynomial hp_density(int j);

// Reduce an integrated differential polynomial modulo total derivatives:
// single-factor terms drop, and the highest derivative order in every
// surviving term appears at least twice.
DifferentialPolynomial ibp_reduce(const DifferentialPolynomial& p);

}  // namespace resodet
