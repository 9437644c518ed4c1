#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace resodet {

enum class PotentialKind { SquareWell, BumpSum, GridSampled };

struct Bump {
    double amplitude = 0.0;
    double center = 0.0;
    double width = 1.0;
};

using MultiIndex = std::vector<int>;

// Compactly supported real potential on R^d, d = 1 or 3 (radial).
// For d = 3 the coordinate passed to evaluate() is the radius.
class Potential {
  public:
    static Potential square_well(double depth, double half_width, int dimension = 1);
    static Potential bump_sum(std::vector<Bump> bumps, double support_radius, int dimension = 1);
    static Potential grid_sampled(double support_radius, std::vector<double> samples,
                                  int dimension = 1);
    // Seeded generator used by the randomized property suites.
    static Potential random_bump_sum(uint64_t seed, int n_bumps, double support_radius,
                                     int dimension = 1);

    PotentialKind kind() const { return kind_; }
    int dimension() const { return dim_; }
    double support_radius() const { return R_; }
    bool radial() const { return dim_ == 3; }
    bool smooth() const { return kind_ != PotentialKind::SquareWell; }

    double depth() const { return depth_; }
    double half_width() const { return half_width_; }
    const std::vector<Bump>& bumps() const { return bumps_; }
    const std::vector<double>& samples() const { return samples_; }
    double grid_spacing() const { return spacing_; }

    // V at coordinate x (d=1) or radius x (d=3); exactly 0 for |x| >= R.
    double evaluate(double x) const;
    double evaluate_point(const std::array<double, 3>& x) const;

    // Exact derivative of order m at x (BumpSum only).
    double derivative_value(int order, double x) const;

    // D^alpha V as a GridSampled potential (d=1; alpha is a d-vector).
    Potential derivative(const MultiIndex& alpha) const;

    double lp_norm(double p) const;
    double sup_norm() const;
    double sobolev_norm(int s) const;

    Potential scaled_by(double c) const;
    Potential reflected() const;    // V(-x); d=3: identity
    Potential shifted(double dx) const;  // d=1 only; support must stay inside the ball

    // <(rV)^(k)> building block for radial d=3 Sobolev machinery:
    // I_k = 4 pi * int_0^R ((rV)^(k))^2 dr
    double radial_moment(int k) const;

    nlohmann::ordered_json to_json() const;
    static Potential from_json(const nlohmann::json& j);

  private:
    Potential() = default;
    void check_invariants() const;

    PotentialKind kind_ = PotentialKind::SquareWell;
    int dim_ = 1;
    double R_ = 1.0;
    double depth_ = 0.0, half_width_ = 0.0;
    std::vector<Bump> bumps_;
    std::vector<double> samples_;
    double spacing_ = 0.0;
};

// ---- multi-index machinery ----

struct FrechetIndexing {
    int i_max = 24;
    int dimension = 1;
    // graded lexicographic bijection i >= 1 -> N_0^d
    MultiIndex multi_index_at(int i) const;
};

struct FrechetResult {
    double value = 0.0;
    double tail_bound = 0.0;
};

FrechetResult frechet_metric(const Potential& V, const Potential& W, const FrechetIndexing& idx);

struct MultiIndexTuple {
    int j = 0, k = 0, d = 1;
    std::vector<MultiIndex> alphas;
    bool operator==(const MultiIndexTuple& o) const {
        return j == o.j && k == o.k && d == o.d && alphas == o.alphas;
    }
};

// All k-tuples (alpha^1..alpha^k) of multi-indices in N_0^d with
// |alpha^m| <= j-k, sum |alpha^m| = 2(j-k) and even per-coordinate column sums.
// Deterministic lexicographic order on the flattened tuple.
std::vector<MultiIndexTuple> enumerate_index_set(int j, int k, int d);

// ---- inequality suite ----

struct InequalityCheck {
    std::string name;
    double lhs = 0.0, rhs = 0.0;
    bool holds = false;
};

struct InequalityReport {
    std::vector<InequalityCheck> checks;
    double sobolev_ratio = 0.0;  // ||V||_{j-2,2}^2 / (1 + sum of index-set integrals)
    bool all_hold = true;
};

InequalityReport verify_inequality_suite(const Potential& V, int j);

// splitmix64; used everywhere randomness with a seed is needed, so outputs do
// not depend on the platform's distribution implementations
struct SplitMix64 {
    uint64_t state;
    explicit SplitMix64(uint64_t seed) : state(seed) {}
    uint64_t next() {
        uint64_t z = (state += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
    double uniform() { return (next() >> 11) * 0x1.0p-53; }
    double uniform(double a, double b) { return a + (b - a) * uniform(); }
};

}  // namespace resodet
