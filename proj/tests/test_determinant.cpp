#include <cmath>
#include <functional>

#include "doctest.h"
#include "resodet/contour.hpp"
#include "resodet/determinant.hpp"

using namespace resodet;

namespace {

// bisection on the textbook transcendental equations for the square well
// -V0 on [-a, a]: even kappa = k tan(ka), odd kappa = -k cot(ka), k^2 + kappa^2 = V0
std::vector<double> square_well_bound_kappas(double V0, double a) {
    std::vector<double> out;
    auto bisect = [&](const std::function<double(double)>& f, double lo, double hi) {
        double flo = f(lo), fhi = f(hi);
        if (!(flo * fhi < 0)) return;
        for (int it = 0; it < 200; ++it) {
            double mid = 0.5 * (lo + hi), fm = f(mid);
            if (flo * fm <= 0) {
                hi = mid;
                fhi = fm;
            } else {
                lo = mid;
                flo = fm;
            }
        }
        double k = 0.5 * (lo + hi);
        out.push_back(std::sqrt(V0 - k * k));
        (void)fhi;
    };
    double kmax = std::sqrt(V0);
    auto even = [&](double k) { return k * std::tan(k * a) - std::sqrt(V0 - k * k); };
    auto odd = [&](double k) { return k / std::tan(k * a) + std::sqrt(V0 - k * k); };
    // scan between tangent poles
    int segs = 400;
    for (int i = 0; i < segs; ++i) {
        double lo = 1e-9 + (kmax - 2e-9) * i / segs;
        double hi = 1e-9 + (kmax - 2e-9) * (i + 1) / segs;
        if (std::abs(std::cos(lo * a)) < 1e-6 || std::abs(std::cos(hi * a)) < 1e-6) continue;
        if (std::floor(lo * a / M_PI + 0.5) == std::floor(hi * a / M_PI + 0.5)) bisect(even, lo, hi);
    }
    for (int i = 0; i < segs; ++i) {
        double lo = 1e-9 + (kmax - 2e-9) * i / segs;
        double hi = 1e-9 + (kmax - 2e-9) * (i + 1) / segs;
        if (std::abs(std::sin(lo * a)) < 1e-6 || std::abs(std::sin(hi * a)) < 1e-6) continue;
        if (std::floor(lo * a / M_PI) == std::floor(hi * a / M_PI)) bisect(odd, lo, hi);
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

TEST_CASE("det_reg: closed-form examples") {
    CMatrix Z(3);
    CHECK(det_reg(1, Z).value() == Complex(1.0));
    CHECK(det_reg(2, Z).value() == Complex(1.0));

    CMatrix one(1);
    one.at(0, 0) = 1.0;
    CHECK(det_reg(2, one).value().real() == doctest::Approx(0.735758882342884643).epsilon(1e-14));

    CMatrix nil(2);
    nil.at(0, 1) = 1.0;
    CHECK(det_reg(2, nil).value() == Complex(1.0));

    CHECK_THROWS_AS(det_reg(3, Z), std::invalid_argument);
}

TEST_CASE("det_reg: multiplicative over block-diagonal direct sums") {
    SplitMix64 rng(99);
    for (int p : {1, 2}) {
        CMatrix A(3), B(4);
        for (auto& z : A.a) z = Complex(rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5));
        for (auto& z : B.a) z = Complex(rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5));
        CMatrix C(7);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) C.at(i, j) = A.at(i, j);
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) C.at(3 + i, 3 + j) = B.at(i, j);
        Complex lhs = det_reg(p, C).value();
        Complex rhs = (det_reg(p, A) * det_reg(p, B)).value();
        CHECK(std::abs(lhs - rhs) < 1e-12 * std::abs(rhs));
    }
}

TEST_CASE("det_reg: similarity invariance") {
    SplitMix64 rng(1234);
    CMatrix A(5);
    for (auto& z : A.a) z = Complex(rng.uniform(-0.4, 0.4), rng.uniform(-0.4, 0.4));
    // well-conditioned S = I + small random
    CMatrix S = CMatrix::identity(5), Sinv = CMatrix::identity(5);
    CMatrix E(5);
    for (auto& z : E.a) z = Complex(rng.uniform(-0.1, 0.1), rng.uniform(-0.1, 0.1));
    // Neumann inverse of I+E (converges for small E)
    CMatrix term = E;
    for (int k = 1; k <= 40; ++k) {
        for (size_t i = 0; i < S.a.size(); ++i) {
            S.a[i] = (k == 1 ? S.a[i] + E.a[i] : S.a[i]);
            Sinv.a[i] += (k % 2 ? -1.0 : 1.0) * term.a[i];
        }
        if (k < 40) term = term * E;
    }
    CMatrix SAS = S * A * Sinv;
    for (int p : {1, 2}) {
        Complex a = det_reg(p, A).value();
        Complex b = det_reg(p, SAS).value();
        CHECK(std::abs(a - b) <= 1e-9 * std::abs(a));
    }
}

TEST_CASE("d=1 identity: det(I+K) = det2(I+K) e^{tr K}") {
    Potential v = Potential::bump_sum({{1.0, 0.1, 0.8}}, 1.0);
    BSMatrix K = assemble_bs(v, Complex(1.4, -0.9), 60);
    ScaledComplex d1 = det_reg(1, K.entries);
    ScaledComplex d2 = det_reg(2, K.entries);
    Complex tr = bs_trace(K);
    ScaledComplex rhs = d2 * ScaledComplex{std::exp(Complex(0, tr.imag())), tr.real()};
    CHECK((d1 - rhs).abs() < 1e-10 * d1.abs());
}

TEST_CASE("D(lambda) is identically 1 for the zero potential") {
    Potential zero = Potential::bump_sum({}, 1.0);
    for (double re : {0.1, 2.0, 5.0, 10.0})
        for (double im : {-3.0, -1.0, -1e-3}) {
            DeterminantValue d = regularized_determinant(zero, Complex(re, im), 64);
            CHECK(d.plain() == Complex(1.0));
            CHECK(d.log_scale == 0.0);
        }
}

TEST_CASE("conjugate symmetry for real V: D(-conj(lambda)) = conj(D(lambda))") {
    Potential v = Potential::bump_sum({{1.0, 0.3, 0.5}}, 1.0);
    for (Complex lam : {Complex(1.5, -0.8), Complex(3.0, -2.0), Complex(0.7, 0.9)}) {
        Complex a = regularized_determinant(v, -std::conj(lam), 96).plain();
        Complex b = std::conj(regularized_determinant(v, lam, 96).plain());
        CHECK(std::abs(a - b) <= 1e-10 * std::abs(b));
    }
}

TEST_CASE("bound states: D vanishes at i kappa from the transcendental equations") {
    Potential sw = Potential::square_well(-10.0, 1.0);
    std::vector<double> kappas = square_well_bound_kappas(10.0, 1.0);
    REQUIRE(kappas.size() == 3);
    CHECK(kappas[0] == doctest::Approx(0.0633976533739955195).epsilon(1e-10));
    CHECK(kappas[1] == doctest::Approx(2.1503939374751268).epsilon(1e-10));
    CHECK(kappas[2] == doctest::Approx(2.93134530126183512).epsilon(1e-10));

    for (double kap : kappas) {
        // Newton refinement from a nearby start must land at i kappa with |D| small
        AnalyticFn f = [&](Complex lam) { return regularized_determinant(sw, lam, 200).scaled(); };
        Complex z(0.002, kap * 1.01);
        for (int it = 0; it < 40; ++it) {
            double h = 1e-6 * (1.0 + std::abs(z));
            ScaledComplex fp = f(z + h), fm = f(z - h), fz = f(z);
            Complex dz = (fz / ((fp - fm) * (1.0 / (2.0 * h)))).value();
            z -= dz;
            if (std::abs(dz) < 1e-12) break;
        }
        CHECK(std::abs(z - Complex(0.0, kap)) < 1e-6);
        CHECK(f(z).abs() < 1e-8);
    }
}

TEST_CASE("determinant derivative: stencil and Cauchy cross-checks") {
    Potential sw = Potential::square_well(-10.0, 1.0);
    Complex lam(1, -0.5);
    int n = 120;
    Complex d_central = determinant_derivative(sw, lam, n);

    // Richardson-extrapolated 4-point stencil
    double h = 1e-5 * (1.0 + std::abs(lam));
    auto D = [&](Complex z) { return regularized_determinant(sw, z, n).scaled(); };
    Complex d_h = ((D(lam + h) - D(lam - h)) * (1.0 / (2 * h))).value();
    Complex d_h2 = ((D(lam + h / 2) - D(lam - h / 2)) * (1.0 / h)).value();
    Complex d_rich = (4.0 * d_h2 - d_h) / 3.0;
    CHECK(std::abs(d_central - d_rich) < 1e-6 * std::abs(d_rich));

    // Cauchy integral on a circle of radius 0.1 (trapezoid; spectrally accurate)
    int M = 64;
    double rho = 0.1;
    Complex acc(0.0);
    for (int k = 0; k < M; ++k) {
        double th = 2.0 * M_PI * k / M;
        Complex w = rho * std::exp(Complex(0, th));
        acc += D(lam + w).value() / (w * w) * w;  // f(z)/(z-lam)^2 * dz/(2 pi i), dz = i w dth
    }
    Complex d_cauchy = acc / static_cast<double>(M);
    CHECK(std::abs(d_central - d_cauchy) < 1e-6 * std::abs(d_cauchy));

    // zero potential: derivative vanishes identically
    Potential zero = Potential::bump_sum({}, 1.0);
    CHECK(std::abs(determinant_derivative(zero, lam, 32)) < 1e-12);
}

TEST_CASE("node-doubling stability on a lambda grid") {
    Potential sw = Potential::square_well(-10.0, 1.0);
    double worst = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int k = 0; k < 3; ++k) {
            Complex lam(0.5 + 4.5 * i / 2.0, -2.0 + 2.0 * k / 2.0 - 1e-3);
            ScaledComplex a = regularized_determinant(sw, lam, 400).scaled();
            ScaledComplex b = regularized_determinant(sw, lam, 800).scaled();
            worst = std::max(worst, (a - b).abs());
        }
    CHECK(worst < 1e-8);
}

TEST_CASE("d=3: sector determinant and product determinant") {
    Potential sw = Potential::square_well(-10.0, 1.0, 3);
    Complex lam(1.2, -0.4);
    DeterminantValue d = regularized_determinant(sw, lam, 100, 2);
    CHECK(std::isfinite(d.plain().real()));
    CHECK(d.p == 2);
    // the sector product with ell_max = 0 equals the bare sector determinant
    DeterminantValue d0 = regularized_determinant(sw, lam, 100, 0);
    ScaledComplex s0 = sector_determinant(sw, lam, 100, 0);
    CHECK((d0.scaled() - s0).abs() < 1e-12 * s0.abs());
    // sector tail decays with ell
    double t3 = sector_tail_hs(sw, lam, 80, 3);
    double t8 = sector_tail_hs(sw, lam, 80, 8);
    CHECK(t8 < t3);
}

TEST_CASE("verify_continuity: W = 0 gives identically zero errors") {
    Potential v = Potential::bump_sum({{1.0, 0.0, 1.0}}, 1.0);
    Potential w = Potential::bump_sum({}, 1.0);
    std::vector<Complex> grid{{1, -0.5}, {2, -1}, {4, -2}};
    ContinuityReport rep = verify_continuity(v, w, grid, 60, 4);
    for (double e : rep.errors) CHECK(e == 0.0);
}

TEST_CASE("verify_continuity: 1/j rate and bounded ratio") {
    Potential v = Potential::bump_sum({{1.0, 0.0, 1.0}}, 1.0);
    Potential w = Potential::bump_sum({{1.0, 0.3, 0.5}}, 1.0);
    std::vector<Complex> grid;
    for (int i = 0; i < 4; ++i)
        for (int k = 0; k < 3; ++k) grid.push_back(Complex(0.5 + 4.5 * i / 3.0, -2.0 * k / 2.0 - 1e-6));
    ContinuityReport rep = verify_continuity(v, w, grid, 80, 16);
    CHECK(rep.slope <= -0.9);
    CHECK(rep.ratio_max / rep.ratio_min < 3.0);
}
