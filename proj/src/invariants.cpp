#include "resodet/invariants.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "resodet/errors.hpp"
#include "resodet/quadrature.hpp"
#include "resodet/tridiag.hpp"

namespace resodet {

double heat_invariant_closed(int j, const Potential& V) {
    if (j < 1 || j > 3) throw std::invalid_argument("heat_invariant_closed: j in {1,2,3}");
    if (j == 3 && !V.smooth())
        throw std::invalid_argument("heat_invariant_closed: j=3 needs a smooth potential");
    double R = V.support_radius();
    int d = V.dimension();
    auto weight = [&](double x) { return d == 3 ? 4.0 * M_PI * x * x : 1.0; };
    auto f = [&](double x) {
        double v = V.evaluate(x);
        switch (j) {
            case 1: return weight(x) * v;
            case 2: return weight(x) * v * v;
            default: {
                double dv = V.derivative_value(1, x);
                return weight(x) * (v * v * v + 0.5 * dv * dv);
            }
        }
    };
    double lo = d == 3 ? 0.0 : -R;
    return integrate_adaptive(f, lo, R, 1e-12, 64);
}

Rational symbolic_calibration(int j) {
    Rational f(1);
    for (int i = 2; i <= j; ++i) f *= i;
    Rational r = Rational(1) / f;
    return (j % 2 == 1) ? -r : r;
}

double heat_invariant_symbolic_raw(int j, const Potential& V) {
    if (V.dimension() != 1)
        throw std::invalid_argument("heat_invariant_symbolic: d=1 only");
    if (!V.smooth()) throw std::invalid_argument("heat_invariant_symbolic: smooth V required");
    DifferentialPolynomial dens = hp_density(j);
    double R = V.support_radius();
    auto f = [&](double x) {
        double acc = 0.0;
        for (const SymbolicTerm& t : dens.terms) {
            double prod = static_cast<double>(t.coeff);
            for (int m : t.v_derivs) prod *= V.derivative_value(m, x);
            acc += prod;
        }
        return acc;
    };
    return integrate_adaptive(f, -R, R, 1e-12, 64);
}

double heat_invariant_symbolic(int j, const Potential& V, int max_j) {
    if (j < 1 || j > max_j) throw std::invalid_argument("heat_invariant_symbolic: j out of range");
    double raw = heat_invariant_symbolic_raw(j, V);
    return raw / static_cast<double>(symbolic_calibration(j));
}

WaveConstants wave_constants(int j, int d) {
    if (d % 2 == 0 || d < 1) throw std::invalid_argument("wave_constants: d odd");
    if (j < 1) throw std::invalid_argument("wave_constants: j >= 1");
    WaveConstants wc;
    wc.j = j;
    wc.d = d;
    if (2 * j <= d - 1) {
        wc.uses_M = true;
        int n = d - 1 - 2 * j;
        // n-th Taylor derivative of e^{-theta^2} at 0
        if (n % 2 == 1) {
            wc.MN = 0.0;
            throw NumericalError("wave_constants: M_j vanishes (odd derivative)");
        }
        double val = 1.0;
        int h = n / 2;
        // n! / h! * (-1)^h
        for (int i = h + 1; i <= n; ++i) val *= i;
        if (h % 2 == 1) val = -val;
        wc.MN = val;
    } else {
        int pw = 2 * j - d;
        if (pw <= -1) throw std::invalid_argument("wave_constants: integral divergent");
        auto f = [&](double th) { return std::exp(-th * th) * std::pow(std::abs(th), pw); };
        wc.MN = 2.0 * integrate_adaptive(f, 0.0, 9.0, 1e-13, 64);
    }
    wc.d_j = std::pow(2.0, 2.0 * (j - d) + 1.0) / wc.MN;
    return wc;
}

std::map<int, double> wave_trace_expansion(const Potential& V, int J) {
    if (V.dimension() != 3)
        throw std::invalid_argument("wave_trace_expansion: the w-indexing applies to d=3");
    if (J > 3) throw std::invalid_argument("wave_trace_expansion: closed forms cover j <= 3");
    std::map<int, double> w;
    for (int j = 1; j <= J; ++j)
        w[j] = wave_constants(j, 3).d_j * heat_invariant_closed(j, V);
    return w;
}

// ---- heat trace oracle ----

namespace {

// trace difference on one grid: interior points x_i = -L + i h, i = 1..N-1
std::vector<double> boxed_trace(const Potential& V, const std::vector<double>& ts, double L,
                                int N, double cutoff) {
    double h = 2.0 * L / N;
    std::vector<double> diag(N - 1), off(N - 2, -1.0 / (h * h));
    for (int i = 1; i < N; ++i) diag[i - 1] = 2.0 / (h * h) + V.evaluate(-L + i * h);
    double tmin = *std::min_element(ts.begin(), ts.end());
    double lam_cut = cutoff / tmin;
    std::vector<double> mu = tridiag_eigenvalues_below(diag, off, lam_cut);
    // free eigenvalues of the same discretization are exact:
    // nu_i = (4/h^2) sin^2(i pi / (2N)), i = 1..N-1
    std::vector<double> out(ts.size(), 0.0);
    size_t m = mu.size();
    for (size_t q = 0; q < ts.size(); ++q) {
        double t = ts[q], acc = 0.0;
        for (size_t i = 0; i < m; ++i) {
            double nu = (4.0 / (h * h)) * std::pow(std::sin((i + 1) * M_PI / (2.0 * N)), 2);
            acc += std::exp(-t * mu[i]) - std::exp(-t * nu);
        }
        // paired tail beyond the cutoff is below e^{-cutoff}; drop it
        out[q] = acc;
    }
    return out;
}

}  // namespace

std::vector<double> heat_trace(const Potential& V, const std::vector<double>& ts,
                               const HeatTraceOptions& opt) {
    if (V.dimension() != 1) throw std::invalid_argument("heat_trace: d=1 oracle");
    for (double t : ts)
        if (t < 1e-3 || t > 1.0)
            throw std::invalid_argument("heat_trace: t must lie in [1e-3, 1]");
    double tmax = *std::max_element(ts.begin(), ts.end());
    double R = V.support_radius();
    double L = std::max(opt.box_factor * R, R + 10.0 * std::sqrt(tmax));
    std::vector<double> coarse, fine;
    std::thread worker([&] { coarse = boxed_trace(V, ts, L, opt.grid_n, opt.cutoff); });
    fine = boxed_trace(V, ts, L, 2 * opt.grid_n, opt.cutoff);
    worker.join();
    std::vector<double> out(ts.size());
    for (size_t i = 0; i < ts.size(); ++i) out[i] = (4.0 * fine[i] - coarse[i]) / 3.0;
    return out;
}

double heat_trace(const Potential& V, double t, const HeatTraceOptions& opt) {
    return heat_trace(V, std::vector<double>{t}, opt)[0];
}

std::map<int, double> fit_heat_coefficients(const Potential& V, const std::vector<double>& t_grid,
                                            int J, const HeatTraceOptions& opt) {
    if (J > 3) throw std::invalid_argument("fit_heat_coefficients: J <= 3");
    if (static_cast<int>(t_grid.size()) < 2 * J)
        throw std::invalid_argument("fit_heat_coefficients: need >= 2J points");
    std::vector<double> tr = heat_trace(V, t_grid, opt);
    std::vector<double> F(tr.size());
    for (size_t i = 0; i < tr.size(); ++i) F[i] = std::sqrt(4.0 * M_PI * t_grid[i]) * tr[i];
    std::vector<double> gamma = fit_monomials(t_grid, F, J);
    std::map<int, double> out;
    for (int j = 1; j <= J; ++j) out[j] = gamma[j - 1];
    return out;
}

InvariantComparison verify_invariants_equal(const Potential& V0, const Potential& V1, int J,
                                            double tol) {
    InvariantComparison cmp;
    int maxJ = (V0.dimension() == 1) ? J : std::min(J, 3);
    for (int j = 1; j <= maxJ; ++j) {
        double a = (j <= 3) ? heat_invariant_closed(j, V0) : heat_invariant_symbolic(j, V0);
        double b = (j <= 3) ? heat_invariant_closed(j, V1) : heat_invariant_symbolic(j, V1);
        double r = std::abs(a - b) / (1.0 + std::abs(a));
        cmp.residuals[j] = r;
        if (r > tol) cmp.equal = false;
    }
    return cmp;
}

nlohmann::ordered_json InvariantVector::to_json() const {
    nlohmann::ordered_json j;
    j["dimension"] = d;
    nlohmann::ordered_json cj, wj, dj, kj;
    for (auto& [k, v] : c) cj[std::to_string(k)] = v;
    for (auto& [k, v] : w) wj[std::to_string(k)] = v;
    for (auto& [k, v] : d_constants) dj[std::to_string(k)] = v;
    j["c"] = cj;
    j["w"] = wj;
    j["constants"] = dj;
    if (!kappa.empty()) {
        for (auto& [k, v] : kappa) kj[std::to_string(k)] = v;
        j["calibration"] = nlohmann::ordered_json{{"kappa", kj}};
    }
    return j;
}

InvariantVector invariant_vector(const Potential& V, int J, bool with_wave) {
    InvariantVector iv;
    iv.d = V.dimension();
    int maxJ = (iv.d == 1) ? J : std::min(J, 3);
    for (int j = 1; j <= maxJ; ++j) {
        if (j <= 3)
            iv.c[j] = heat_invariant_closed(j, V);
        else
            iv.c[j] = heat_invariant_symbolic(j, V);
    }
    if (with_wave && iv.d == 3) {
        for (int j = 1; j <= maxJ; ++j) {
            WaveConstants wc = wave_constants(j, 3);
            iv.d_constants[j] = wc.d_j;
            iv.w[j] = wc.d_j * iv.c[j];
        }
    }
    return iv;
}

std::vector<double> dirichlet_box_eigenvalues(const Potential& V, double L, int count,
                                              int grid_n) {
    if (V.dimension() != 1) throw std::invalid_argument("dirichlet_box_eigenvalues: d=1");
    auto solve = [&](int N) {
        double h = 2.0 * L / N;
        std::vector<double> diag(N - 1), off(N - 2, -1.0 / (h * h));
        for (int i = 1; i < N; ++i) diag[i - 1] = 2.0 / (h * h) + V.evaluate(-L + i * h);
        std::vector<double> mu = tridiag_eigenvalues_below(diag, off, 1e9);
        mu.resize(std::min<size_t>(mu.size(), count));
        return mu;
    };
    std::vector<double> a = solve(grid_n), b = solve(2 * grid_n);
    std::vector<double> out(std::min(a.size(), b.size()));
    for (size_t i = 0; i < out.size(); ++i) out[i] = (4.0 * b[i] - a[i]) / 3.0;
    return out;
}

}  // namespace resodet
