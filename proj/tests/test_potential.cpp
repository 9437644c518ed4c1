#include <cmath>
#include <functional>
#include <limits>

#include "doctest.h"
#include "resodet/errors.hpp"
#include "resodet/potential.hpp"
#include "resodet/quadrature.hpp"

using namespace resodet;

namespace {

// test-local adaptive Simpson, independent of the library quadrature
double simpson_rec(const std::function<double(double)>& f, double a, double b, double fa,
                   double fm, double fb, double whole, double tol, int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return simpson_rec(f, a, m, fa, flm, fm, left, tol / 2, depth - 1) +
           simpson_rec(f, m, b, fm, frm, fb, right, tol / 2, depth - 1);
}

double simpson(const std::function<double(double)>& f, double a, double b, double tol = 1e-12) {
    double m = 0.5 * (a + b);
    double fa = f(a), fm = f(m), fb = f(b);
    double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_rec(f, a, b, fa, fm, fb, whole, tol, 48);
}

double bump_val(double x) { return std::abs(x) < 1 ? std::exp(-1.0 / (1.0 - x * x)) : 0.0; }
double bump_dval(double x) {
    if (std::abs(x) >= 1) return 0.0;
    double t = 1.0 - x * x;
    return bump_val(x) * (-2.0 * x / (t * t));
}

}  // namespace

TEST_CASE("evaluate: basic examples") {
    Potential sw = Potential::square_well(-10.0, 1.0);
    CHECK(sw.evaluate(0.0) == -10.0);
    CHECK(sw.evaluate(2.0) == 0.0);
    CHECK(sw.evaluate(-5.0) == 0.0);
    CHECK(sw.evaluate(1.0) == 0.0);  // compact support: zero at |x| >= R

    Potential b = Potential::bump_sum({{1.0, 0.0, 1.0}}, 1.0);
    CHECK(b.evaluate(0.0) == doctest::Approx(0.36787944117144233).epsilon(1e-14));
    CHECK(b.evaluate(2.0) == 0.0);
    CHECK(b.evaluate(0.9999999) == doctest::Approx(0.0).epsilon(1e-30));
}

TEST_CASE("evaluate: radial d=3") {
    Potential sw = Potential::square_well(-10.0, 1.0, 3);
    CHECK(sw.evaluate(0.5) == -10.0);
    CHECK(sw.evaluate_point({0.3, 0.4, 0.0}) == -10.0);  // |x| = 0.5
    CHECK(sw.evaluate_point({3.0, 4.0, 0.0}) == 0.0);
    CHECK_THROWS_AS(sw.evaluate(-0.1), std::invalid_argument);
}

TEST_CASE("derivative: non-smooth kind rejected") {
    Potential sw = Potential::square_well(-10.0, 1.0);
    CHECK_THROWS_AS(sw.derivative({1}), std::invalid_argument);
}

TEST_CASE("derivative: order zero is the identity on samples") {
    std::vector<double> s(257);
    for (int i = 0; i < 257; ++i) {
        double x = -1.0 + 2.0 * i / 256.0;
        s[i] = bump_val(x);
    }
    Potential g = Potential::grid_sampled(1.0, s);
    Potential g0 = g.derivative({0});
    REQUIRE(g0.samples().size() == s.size());
    for (size_t i = 0; i < s.size(); ++i) CHECK(g0.samples()[i] == s[i]);
}

TEST_CASE("derivative: int (V')^2 matches the quadrature oracle") {
    // oracle: adaptive Simpson on the closed-form derivative of the bump
    double oracle = simpson([](double x) { return bump_dval(x) * bump_dval(x); }, -1.0, 1.0);
    CHECK(oracle == doctest::Approx(0.40958706075277012817).epsilon(1e-10));  // frozen

    Potential b = Potential::bump_sum({{1.0, 0.0, 1.0}}, 1.0);
    // library route 1: exact derivative values
    double lib = integrate_adaptive(
        [&](double x) {
            double v = b.derivative_value(1, x);
            return v * v;
        },
        -1.0, 1.0, 1e-12, 64);
    CHECK(lib == doctest::Approx(oracle).epsilon(1e-8));

    // library route 2: Fourier differentiation of the sampled potential
    std::vector<double> s(2049);
    for (int i = 0; i < 2049; ++i) s[i] = bump_val(-1.0 + 2.0 * i / 2048.0);
    Potential g = Potential::grid_sampled(1.0, s);
    Potential dg = g.derivative({1});
    double lib2 = integrate_adaptive(
        [&](double x) {
            double v = dg.evaluate(x);
            return v * v;
        },
        -1.0, 1.0, 1e-10, 128);
    CHECK(lib2 == doctest::Approx(oracle).epsilon(1e-6));
}

TEST_CASE("derivative: composition commutes with order addition") {
    std::vector<double> s(2049);
    for (int i = 0; i < 2049; ++i) s[i] = bump_val(-1.0 + 2.0 * i / 2048.0);
    Potential g = Potential::grid_sampled(1.0, s);
    Potential d11 = g.derivative({1}).derivative({1});
    Potential d2 = g.derivative({2});
    double worst = 0.0;
    for (size_t i = 0; i < d2.samples().size(); ++i)
        worst = std::max(worst, std::abs(d11.samples()[i] - d2.samples()[i]));
    CHECK(worst < 1e-7);
}

TEST_CASE("derivative: order too high for a coarse grid signals refinement") {
    std::vector<double> s(129);
    for (int i = 0; i < 129; ++i) s[i] = bump_val(-1.0 + 2.0 * i / 128.0);
    Potential g = Potential::grid_sampled(1.0, s);
    CHECK_THROWS_AS(g.derivative({11}), NumericalError);
}

TEST_CASE("lp_norm: examples") {
    Potential sw = Potential::square_well(-10.0, 1.0);
    CHECK(sw.lp_norm(2) == doctest::Approx(14.1421356237309505).epsilon(1e-12));
    Potential zero = Potential::bump_sum({}, 1.0);
    CHECK(zero.lp_norm(1) == 0.0);
    CHECK(zero.lp_norm(7.5) == 0.0);

    Potential b = Potential::bump_sum({{1.0, 0.0, 1.0}}, 1.0);
    // oracle: Gauss-Legendre with doubled nodes until 1e-10 agreement
    const QuadRule r1 = gauss_legendre(256, -1.0, 1.0);
    const QuadRule r2 = gauss_legendre(512, -1.0, 1.0);
    auto p4 = [&](const QuadRule& r) {
        double s = 0.0;
        for (size_t i = 0; i < r.nodes.size(); ++i)
            s += r.weights[i] * std::pow(std::abs(bump_val(r.nodes[i])), 4);
        return std::pow(s, 0.25);
    };
    double o1 = p4(r1), o2 = p4(r2);
    REQUIRE(std::abs(o1 - o2) < 1e-10);
    CHECK(b.lp_norm(4) == doctest::Approx(o2).epsilon(1e-10));
    CHECK(b.lp_norm(4) == doctest::Approx(0.3443452870735767304).epsilon(1e-12));  // frozen

    CHECK(b.sup_norm() == doctest::Approx(0.36787944117144233).epsilon(1e-12));
    CHECK(sw.lp_norm(std::numeric_limits<double>::infinity()) == 10.0);
}

TEST_CASE("lp_norm: d=3 radial weight") {
    Potential sw = Potential::square_well(-10.0, 1.0, 3);
    // int |V| = 10 * (4/3) pi
    CHECK(sw.lp_norm(1) == doctest::Approx(10.0 * 4.0 * M_PI / 3.0).epsilon(1e-12));
}

TEST_CASE("sobolev_norm: examples") {
    Potential b = Potential::bump_sum({{1.0, 0.0, 1.0}}, 1.0);
    CHECK(b.sobolev_norm(0) == doctest::Approx(b.lp_norm(2)).epsilon(1e-13));
    Potential zero = Potential::bump_sum({}, 1.0);
    CHECK(zero.sobolev_norm(3) == 0.0);
    CHECK(b.sobolev_norm(2) == doctest::Approx(3.372972130480272739).epsilon(1e-8));  // frozen
}

TEST_CASE("sobolev_norm: monotone in s") {
    for (uint64_t seed : {7ull, 8ull, 9ull}) {
        Potential v = Potential::random_bump_sum(seed, 3, 1.0);
        double prev = v.sobolev_norm(0);
        for (int s = 1; s <= 4; ++s) {
            double cur = v.sobolev_norm(s);
            CHECK(cur >= prev - 1e-12);
            prev = cur;
        }
    }
}

TEST_CASE("sobolev_norm: d=3 radial identity for the gradient term") {
    Potential v = Potential::bump_sum({{1.0, 0.0, 0.8}}, 1.0, 3);
    // <V,(-Delta)V> = 4 pi int V'(r)^2 r^2 dr must equal 4 pi int ((rV)')^2 dr
    double direct = integrate_adaptive(
        [&](double r) {
            double dv = v.derivative_value(1, r);
            return 4.0 * M_PI * dv * dv * r * r;
        },
        0.0, 1.0, 1e-12, 64);
    CHECK(v.radial_moment(1) == doctest::Approx(direct).epsilon(1e-10));
}

TEST_CASE("frechet_metric: axioms and examples") {
    FrechetIndexing idx{24, 1};
    Potential v = Potential::bump_sum({{1.0, 0.0, 1.0}}, 1.0);
    Potential w = Potential::bump_sum({{0.8, 0.3, 0.5}}, 1.0);
    CHECK(frechet_metric(v, v, idx).value == 0.0);
    FrechetResult vw = frechet_metric(v, w, idx);
    CHECK(vw.value > 0.0);
    CHECK(vw.value < 1.0);
    CHECK(vw.tail_bound == doctest::Approx(std::pow(2.0, -24)));

    // monotone decrease as the shift goes to zero
    double prev = 1e300;
    for (int k = 0; k < 4; ++k) {
        double shift = 0.1 / std::pow(2.0, k);
        Potential base = Potential::bump_sum({{1.0, 0.0, 0.8}}, 1.0);
        Potential sh = base.shifted(shift);
        double d = frechet_metric(base, sh, idx).value;
        CHECK(d < prev);
        prev = d;
    }
}

TEST_CASE("frechet_metric: symmetry and triangle inequality on random triples") {
    FrechetIndexing idx{16, 1};
    for (uint64_t seed = 1; seed <= 6; ++seed) {
        Potential a = Potential::random_bump_sum(3 * seed, 2, 1.0);
        Potential b = Potential::random_bump_sum(3 * seed + 1, 3, 1.0);
        Potential c = Potential::random_bump_sum(3 * seed + 2, 2, 1.0);
        double ab = frechet_metric(a, b, idx).value;
        double ba = frechet_metric(b, a, idx).value;
        double ac = frechet_metric(a, c, idx).value;
        double cb = frechet_metric(c, b, idx).value;
        CHECK(std::abs(ab - ba) < 1e-12);
        CHECK(ab <= ac + cb + 1e-12);
    }
}

TEST_CASE("frechet_metric: d=3 radial pair") {
    FrechetIndexing idx{20, 3};
    Potential v = Potential::bump_sum({{1.0, 0.0, 0.7}}, 1.0, 3);
    Potential w = Potential::bump_sum({{0.5, 0.0, 0.9}}, 1.0, 3);
    double d = frechet_metric(v, w, idx).value;
    CHECK(d > 0.0);
    CHECK(d < 1.0);
    CHECK(frechet_metric(v, v, idx).value == 0.0);
}

TEST_CASE("multi-index bijection is graded and deterministic") {
    FrechetIndexing idx{64, 3};
    int prev_deg = 0;
    for (int i = 1; i <= 40; ++i) {
        MultiIndex m = idx.multi_index_at(i);
        int deg = m[0] + m[1] + m[2];
        CHECK(deg >= prev_deg);
        prev_deg = deg;
    }
    CHECK(idx.multi_index_at(1) == MultiIndex{0, 0, 0});
    FrechetIndexing one{64, 1};
    for (int i = 1; i <= 10; ++i) CHECK(one.multi_index_at(i) == MultiIndex{i - 1});
}

TEST_CASE("enumerate_index_set: small examples") {
    auto s1 = enumerate_index_set(3, 3, 1);
    REQUIRE(s1.size() == 1);
    CHECK(s1[0].alphas == std::vector<MultiIndex>{{0}, {0}, {0}});

    auto s2 = enumerate_index_set(4, 4, 1);
    REQUIRE(s2.size() == 1);
    CHECK(s2[0].alphas == std::vector<MultiIndex>{{0}, {0}, {0}, {0}});

    auto s3 = enumerate_index_set(4, 3, 1);
    REQUIRE(s3.size() == 3);  // permutations of (1,1,0)
    for (const MultiIndexTuple& t : s3) {
        int total = 0, nonzero = 0;
        for (const MultiIndex& a : t.alphas) {
            total += a[0];
            nonzero += a[0] > 0;
        }
        CHECK(total == 2);
        CHECK(nonzero == 2);
    }
}

TEST_CASE("enumerate_index_set equals brute force for j <= 7, d in {1,3}") {
    for (int d : {1, 3}) {
        for (int j = 3; j <= 7; ++j) {
            for (int k = 3; k <= j; ++k) {
                auto fast = enumerate_index_set(j, k, d);
                // brute force: odometer over all k*d exponents in [0, j-k]
                int cap = j - k, slots = k * d;
                std::vector<int> digits(slots, 0);
                size_t count = 0;
                auto matches_constraints = [&]() {
                    int total = 0;
                    for (int m = 0; m < k; ++m) {
                        int ord = 0;
                        for (int l = 0; l < d; ++l) ord += digits[m * d + l];
                        if (ord > cap) return false;
                        total += ord;
                    }
                    if (total != 2 * (j - k)) return false;
                    for (int l = 0; l < d; ++l) {
                        int col = 0;
                        for (int m = 0; m < k; ++m) col += digits[m * d + l];
                        if (col % 2 != 0) return false;
                    }
                    return true;
                };
                for (;;) {
                    if (matches_constraints()) ++count;
                    int pos = slots - 1;
                    while (pos >= 0 && digits[pos] == cap) digits[pos--] = 0;
                    if (pos < 0) break;
                    ++digits[pos];
                }
                CHECK(fast.size() == count);
                // spot-check membership invariants on the fast enumeration
                for (const MultiIndexTuple& t : fast) {
                    int total = 0;
                    for (const MultiIndex& a : t.alphas) {
                        int ord = 0;
                        for (int v : a) ord += v;
                        CHECK(ord <= cap);
                        total += ord;
                    }
                    CHECK(total == 2 * (j - k));
                }
            }
        }
    }
}

TEST_CASE("inequality suite: zero potential, all sides vanish") {
    Potential zero = Potential::bump_sum({}, 1.0);
    InequalityReport rep = verify_inequality_suite(zero, 3);
    CHECK(rep.all_hold);
    for (const InequalityCheck& c : rep.checks) {
        CHECK(c.lhs == doctest::Approx(0.0).epsilon(1e-15));
        CHECK(c.holds);
    }
}

TEST_CASE("inequality suite: interpolation bound on the unit bump") {
    Potential b = Potential::bump_sum({{1.0, 0.0, 1.0}}, 1.0);
    double lhs = b.lp_norm(4);
    double rhs = std::pow(b.lp_norm(2), 0.25) * std::pow(b.lp_norm(6), 0.75);
    CHECK(lhs <= rhs + 1e-9);
    InequalityReport rep = verify_inequality_suite(b, 3);
    CHECK(rep.all_hold);
    CHECK(rep.sobolev_ratio > 0.0);
}

TEST_CASE("inequality suite: seeded random bump sums") {
    for (uint64_t seed = 100; seed < 110; ++seed) {
        Potential v = Potential::random_bump_sum(seed, 3, 1.0);
        InequalityReport rep = verify_inequality_suite(v, 4);
        CHECK(rep.all_hold);
    }
}

TEST_CASE("generalized Hoelder with derivative factors") {
    Potential v = Potential::bump_sum({{1.3, -0.2, 0.6}, {0.7, 0.4, 0.5}}, 1.0);
    // int |V V' V| <= ||V||_3 ||V'||_3 ||V||_3
    double lhs = integrate_adaptive(
        [&](double x) {
            return std::abs(v.evaluate(x) * v.derivative_value(1, x) * v.evaluate(x));
        },
        -1.0, 1.0, 1e-9, 64);
    double n3 = v.lp_norm(3);
    double d3 = std::pow(integrate_adaptive(
                             [&](double x) {
                                 return std::pow(std::abs(v.derivative_value(1, x)), 3);
                             },
                             -1.0, 1.0, 1e-10, 64),
                         1.0 / 3.0);
    CHECK(lhs <= n3 * d3 * n3 + 1e-9);
}

TEST_CASE("potential JSON round trip: normative field names") {
    Potential b = Potential::bump_sum({{1.5, 0.25, 0.5}}, 1.0);
    auto j = b.to_json();
    CHECK(j["kind"] == "BumpSum");
    CHECK(j["dimension"] == 1);
    CHECK(j["support_radius"] == 1.0);
    CHECK(j["bumps"][0]["amplitude"] == 1.5);
    Potential b2 = Potential::from_json(j);
    CHECK(b2.evaluate(0.25) == b.evaluate(0.25));

    Potential g = Potential::grid_sampled(2.0, std::vector<double>{0.0, 1.0, 0.0, 1.0, 0.0});
    auto gj = g.to_json();
    CHECK(gj["kind"] == "GridSampled");
    CHECK(gj["grid_spacing"] == doctest::Approx(1.0));
    CHECK(gj["samples"].size() == 5);
    Potential g2 = Potential::from_json(gj);
    CHECK(g2.grid_spacing() == g.grid_spacing());

    Potential sw3 = Potential::square_well(-10.0, 1.0, 3);
    auto sj = sw3.to_json();
    CHECK(sj["radial"] == true);
    // d=3 requires the radial flag
    sj.erase("radial");
    CHECK_THROWS_AS(Potential::from_json(sj), std::invalid_argument);
}

TEST_CASE("potential invariants: support and bump validation") {
    CHECK_THROWS_AS(Potential::bump_sum({{1.0, 0.9, 0.5}}, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(Potential::bump_sum({{1.0, 0.3, 0.5}}, 1.0, 3), std::invalid_argument);
    CHECK_NOTHROW(Potential::bump_sum({{1.0, 0.5, 0.4}}, 1.0, 3));
    CHECK_NOTHROW(Potential::bump_sum({{1.0, 0.0, 0.6}}, 1.0, 3));
}
