#pragma once

#include <map>
#include <optional>
#include <vector>

#include "json.hpp"
#include "resodet/potential.hpp"
#include "resodet/symbolic.hpp"

namespace resodet {

// closed-form heat invariants: int V, int V^2, int (V^3 + |grad V|^2 / 2)
double heat_invariant_closed(int j, const Potential& V);

// d=1 heat invariant from the symbolic density, calibrated to the closed-form
// normalization (the raw density integrates to (-1)^j/j! times it).
double heat_invariant_symbolic(int j, const Potential& V, int max_j = 6);

// raw density integral, before calibration
double heat_invariant_symbolic_raw(int j, const Potential& V);

// the exact calibration ratio (-1)^j / j!
Rational symbolic_calibration(int j);

struct WaveConstants {
    int j = 0, d = 0;
    bool uses_M = false;   // j <= (d-1)/2
    double MN = 0.0;       // M_j or N_j
    double d_j = 0.0;      // 2^{2(j-d)+1} / MN
};

// M_j = ((d/dtheta)^{d-1-2j} e^{-theta^2})(0) exactly (Taylor coefficients);
// N_j = int e^{-theta^2} |theta|^{2j-d} dtheta by doubled Gauss-Legendre.
WaveConstants wave_constants(int j, int d);

// w_j = d_j c_j for d=3, closed-form c_j (j <= 3)
std::map<int, double> wave_trace_expansion(const Potential& V, int J);

// ---- heat trace oracle (d=1) ----

struct HeatTraceOptions {
    double box_factor = 8.0;   // L = max(box_factor R, R + 10 sqrt(t_max))
    int grid_n = 3200;         // coarse grid; Richardson uses grid_n and 2*grid_n
    double cutoff = 45.0;      // keep e^{-t mu} terms with t_min mu < cutoff
};

// Tr(e^{-t H_V} - e^{-t H_0}) on a Dirichlet box, second-order finite
// differences, Richardson-extrapolated in the grid spacing.  The free
// eigenvalues are known in closed form; only H_V needs the bisection solve.
std::vector<double> heat_trace(const Potential& V, const std::vector<double>& ts,
                               const HeatTraceOptions& opt = {});

double heat_trace(const Potential& V, double t, const HeatTraceOptions& opt = {});

// least squares of sqrt(4 pi t) * trace(t) against sum_{j<=J} gamma_j t^j
std::map<int, double> fit_heat_coefficients(const Potential& V, const std::vector<double>& t_grid,
                                            int J, const HeatTraceOptions& opt = {});

struct InvariantComparison {
    bool equal = true;
    std::map<int, double> residuals;  // |c_j(V0) - c_j(V1)| / (1 + |c_j(V0)|)
};

InvariantComparison verify_invariants_equal(const Potential& V0, const Potential& V1, int J,
                                            double tol);

struct InvariantVector {
    int d = 1;
    std::map<int, double> c;
    std::map<int, double> w;
    std::map<int, double> d_constants;
    std::map<int, double> kappa;  // empirical gamma_j / c_j when a fit was run

    nlohmann::ordered_json to_json() const;
};

InvariantVector invariant_vector(const Potential& V, int J, bool with_wave = true);

// lowest Dirichlet-box eigenvalues of -u'' + V u on [-L, L], Richardson in h
std::vector<double> dirichlet_box_eigenvalues(const Potential& V, double L, int count,
                                              int grid_n = 2400);

}  // namespace resodet
