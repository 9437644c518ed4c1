#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "resodet/determinant.hpp"

namespace resodet {

// number of worker threads used by batched contour evaluation and sweeps
int runtime_threads();
void set_runtime_threads(int k);

struct SearchRegion {
    double re_min = 0.0, re_max = 0.0, im_min = 0.0, im_max = 0.0;
    double exclusion_radius = 1e-3;

    void validate() const;
    bool contains(Complex z, double pad = 0.0) const {
        return z.real() >= re_min - pad && z.real() <= re_max + pad && z.imag() >= im_min - pad &&
               z.imag() <= im_max + pad;
    }
    double diameter() const;
};

struct ResonanceEntry {
    Complex lambda;
    int multiplicity = 1;
};

struct ResonanceSet {
    std::vector<ResonanceEntry> entries;
    SearchRegion region;
    double tolerance = 1e-8;
    std::optional<int> ell_max;

    nlohmann::ordered_json to_json() const;
};

using AnalyticFn = std::function<ScaledComplex(Complex)>;

// Winding number of f along the rectangle boundary via adaptive phase
// tracking.  Throws if |f| drops below the boundary floor (zero on boundary)
// or if refinement does not settle.
int count_zeros(const AnalyticFn& f, const SearchRegion& region);

// Zeros with multiplicities by recursive quadrisection + Newton refinement.
ResonanceSet locate_zeros(const AnalyticFn& f, const SearchRegion& region, double tol,
                          int cell_budget = 40000);

ResonanceSet locate_resonances(const Potential& V, const SearchRegion& region, double tol, int n,
                               std::optional<int> ell_max = std::nullopt);

// ---- independent oracles ----

struct PiecewiseConstant {
    std::vector<double> breakpoints;  // ascending, size m+1
    std::vector<double> values;       // size m
};

PiecewiseConstant to_piecewise(const Potential& V);

// Coefficient of the incoming component of the right Jost solution continued
// to the left of the support; resonances are its zeros.
ScaledComplex outgoing_matching_1d(const PiecewiseConstant& pw, Complex lam);

ResonanceSet transfer_matrix_resonances(const PiecewiseConstant& pw, const SearchRegion& region,
                                        double tol);
ResonanceSet transfer_matrix_resonances(const Potential& V, const SearchRegion& region,
                                        double tol);

// ell = 0 matching function for the spherical well depth * 1_{r<a}:
// i lambda sin(k'a)/k' - cos(k'a), k' = sqrt(lambda^2 - depth)
ScaledComplex swave_matching_3d(double depth, double a, Complex lam);

ResonanceSet swave_resonances_3d(double depth, double a, const SearchRegion& region, double tol);

struct IsoReport {
    bool iso_resonant = false;
    std::vector<std::pair<int, int>> matches;
    std::vector<int> unmatched_a, unmatched_b;

    nlohmann::ordered_json to_json() const;
};

IsoReport compare_resonance_sets(const ResonanceSet& A, const ResonanceSet& B, double tol);

}  // namespace resodet
