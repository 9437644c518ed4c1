#include <cmath>
#include <map>
#include <vector>

#include "doctest.h"
#include "resodet/birman_schwinger.hpp"
#include "resodet/determinant.hpp"

using namespace resodet;

TEST_CASE("assemble_bs: zero potential gives the zero matrix") {
    Potential zero = Potential::bump_sum({}, 1.0);
    BSMatrix K = assemble_bs(zero, Complex(1, -0.5), 24);
    for (const Complex& z : K.entries.a) CHECK(z == Complex(0.0));
}

TEST_CASE("assemble_bs: entrywise linearity in V") {
    Potential v = Potential::bump_sum({{1.0, 0.2, 0.6}}, 1.0);
    Potential v3 = v.scaled_by(3.0);
    Complex lam(2, -1);
    BSMatrix a = assemble_bs(v, lam, 20);
    BSMatrix b = assemble_bs(v3, lam, 20);
    for (size_t i = 0; i < a.entries.a.size(); ++i)
        CHECK(std::abs(b.entries.a[i] - 3.0 * a.entries.a[i]) <=
              1e-14 * std::abs(a.entries.a[i]) + 1e-300);
}

TEST_CASE("assemble_bs: row support follows V") {
    // well of half-width 0.5 inside a support ball of radius 1
    Potential v = Potential::bump_sum({{2.0, 0.0, 0.5}}, 1.0);
    BSMatrix K = assemble_bs(v, Complex(1, -0.5), 40);
    for (int m = 0; m < K.n; ++m) {
        if (K.v_values[m] == 0.0) {
            for (int j = 0; j < K.n; ++j) CHECK(K.entries.at(m, j) == Complex(0.0));
        }
    }
}

TEST_CASE("bs_trace: closed form on the imaginary axis") {
    Potential sw = Potential::square_well(-10.0, 1.0);
    // diagonal kernel is the constant i/(2 lambda); trace -> (i/2lam) int V
    Complex t = bs_trace(assemble_bs(sw, Complex(0, 1), 64));
    CHECK(std::abs(t - Complex(-10.0, 0.0)) < 1e-10);
    Complex t2 = bs_trace(assemble_bs(sw, Complex(0, -1), 64));
    CHECK(std::abs(t2 - Complex(10.0, 0.0)) < 1e-10);
    Potential zero = Potential::bump_sum({}, 1.0);
    CHECK(bs_trace(assemble_bs(zero, Complex(0, 1), 64)) == Complex(0.0));
}

TEST_CASE("bs_trace matches (i/2lam) c_1(V) for smooth V") {
    Potential v = Potential::bump_sum({{1.3, -0.2, 0.7}}, 1.0);
    double c1 = 0.0;
    {
        BSMatrix K = assemble_bs(v, Complex(0, 1), 300);
        for (int m = 0; m < K.n; ++m) c1 += K.weights[m] * K.v_values[m];
    }
    for (Complex lam : {Complex(0, 1), Complex(2, -0.7), Complex(1, 0.4)}) {
        Complex expect = Complex(0, 1) / (2.0 * lam) * c1;
        Complex got = bs_trace(assemble_bs(v, lam, 300));
        CHECK(std::abs(got - expect) < 1e-10);
    }
}

TEST_CASE("hilbert_schmidt norm: examples and cross-check") {
    Potential zero = Potential::bump_sum({}, 1.0);
    CHECK(bs_hilbert_schmidt_norm(assemble_bs(zero, Complex(1, -1), 32)) == 0.0);

    Potential v = Potential::bump_sum({{1.0, 0.0, 1.0}}, 1.0);
    BSMatrix K = assemble_bs(v, Complex(1.5, -0.8), 48);
    double hs = bs_hilbert_schmidt_norm(K);
    std::vector<double> sv = bs_singular_values(K);
    double s2 = 0.0;
    for (double s : sv) s2 += s * s;
    CHECK(hs == doctest::Approx(std::sqrt(s2)).epsilon(1e-9));
}

TEST_CASE("hilbert_schmidt norm: d=3 sector stays finite and stable under node doubling") {
    Potential sw = Potential::square_well(-10.0, 1.0, 3);
    Complex lam(1, -0.5);
    double a = bs_hilbert_schmidt_norm(assemble_bs(sw, lam, 120, 0));
    double b = bs_hilbert_schmidt_norm(assemble_bs(sw, lam, 240, 0));
    CHECK(std::isfinite(a));
    CHECK(std::abs(a - b) < 1e-3 * std::max(1.0, b));  // raw rule; kink caps the raw rate
    // Richardson over node doublings restores tight stability
    auto extrap = [&](std::vector<double> v) {
        int p = 2;
        while (v.size() > 1) {
            double f = std::pow(2.0, p++);
            std::vector<double> nx(v.size() - 1);
            for (size_t i = 0; i + 1 < v.size(); ++i) nx[i] = (f * v[i + 1] - v[i]) / (f - 1.0);
            v = std::move(nx);
        }
        return v[0];
    };
    std::map<int, double> hs;
    for (int n : {30, 60, 120, 240, 480})
        hs[n] = bs_hilbert_schmidt_norm(assemble_bs(sw, lam, n, 0));
    double ea = extrap({hs[30], hs[60], hs[120], hs[240]});
    double eb = extrap({hs[60], hs[120], hs[240], hs[480]});
    CHECK(std::abs(ea - eb) < 1e-7 * std::max(1.0, eb));
}

TEST_CASE("hilbert_schmidt norm growth along Im lambda follows e^{2R|Im|}") {
    Potential v = Potential::bump_sum({{1.0, 0.0, 1.0}}, 1.0);
    // ratio hs / e^{2R|Im lam|} stays bounded on a vertical line
    double worst = 0.0;
    for (double im : {-0.5, -1.0, -2.0, -3.0}) {
        double hs = bs_hilbert_schmidt_norm(assemble_bs(v, Complex(1.0, im), 96));
        worst = std::max(worst, hs / std::exp(2.0 * std::abs(im)));
    }
    CHECK(worst < 10.0);
}

TEST_CASE("node-doubling stability of the extrapolated determinant (d=1)") {
    Potential sw = Potential::square_well(-10.0, 1.0);
    Complex lam(1, -0.5);
    ScaledComplex a = regularized_determinant(sw, lam, 320).scaled();
    ScaledComplex b = regularized_determinant(sw, lam, 640).scaled();
    CHECK((a - b).abs() < 1e-8);
}

TEST_CASE("d=3 preconditions") {
    Potential sw = Potential::square_well(-10.0, 1.0, 3);
    CHECK_THROWS_AS(assemble_bs(sw, Complex(1, -0.5), 32), std::invalid_argument);
    CHECK_NOTHROW(assemble_bs(sw, Complex(1, -0.5), 32, 0));
}
