#include "resodet/potential.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>

#include "resodet/errors.hpp"
#include "resodet/quadrature.hpp"

namespace resodet {

namespace {

// ---- bump profile b(u) = exp(-1/(1-u^2)) and its exact derivatives ----
// b^(k)(u) = P_k(u) * exp(-t) * t^{2k},  t = 1/(1-u^2),
// with integer-coefficient polynomials P_{k+1} = (1-u^2)^2 P_k' + (4k u (1-u^2) - 2u) P_k.
const std::vector<double>& bump_poly(int k) {
    thread_local std::vector<std::vector<double>> polys = {{1.0}};
    while (static_cast<int>(polys.size()) <= k) {
        int m = static_cast<int>(polys.size()) - 1;
        const std::vector<double>& P = polys.back();
        int deg = static_cast<int>(P.size()) - 1;
        std::vector<double> Q(deg + 4, 0.0);
        // (1-u^2)^2 P' = (1 - 2u^2 + u^4) P'
        for (int i = 1; i <= deg; ++i) {
            double c = i * P[i];
            Q[i - 1] += c;
            if (i + 1 < static_cast<int>(Q.size())) Q[i + 1] -= 2.0 * c;
            if (i + 3 < static_cast<int>(Q.size())) Q[i + 3] += c;
        }
        // (4 m u (1-u^2) - 2u) P = ((4m-2) u - 4m u^3) P
        for (int i = 0; i <= deg; ++i) {
            double c = P[i];
            Q[i + 1] += (4.0 * m - 2.0) * c;
            if (i + 3 < static_cast<int>(Q.size())) Q[i + 3] -= 4.0 * m * c;
        }
        while (Q.size() > 1 && Q.back() == 0.0) Q.pop_back();
        polys.push_back(std::move(Q));
    }
    return polys[k];
}

double bump_profile_derivative(int k, double u) {
    if (std::abs(u) >= 1.0) return 0.0;
    double t = 1.0 / (1.0 - u * u);
    double ex = -t + 2.0 * k * std::log(t);
    if (ex < -740.0) return 0.0;
    const std::vector<double>& P = bump_poly(k);
    double pv = 0.0;
    for (int i = static_cast<int>(P.size()) - 1; i >= 0; --i) pv = pv * u + P[i];
    return pv * std::exp(ex);
}

int next_pow2(int n) {
    int p = 1;
    while (p < n) p <<= 1;
    return p;
}

// in-place iterative radix-2 FFT, sign = -1 forward / +1 inverse (unscaled)
void fft(std::vector<std::complex<double>>& a, int sign) {
    int n = static_cast<int>(a.size());
    for (int i = 1, j = 0; i < n; ++i) {
        int bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (int len = 2; len <= n; len <<= 1) {
        double ang = sign * 2.0 * M_PI / len;
        std::complex<double> wl(std::cos(ang), std::sin(ang));
        for (int i = 0; i < n; i += len) {
            std::complex<double> w(1.0);
            for (int k = 0; k < len / 2; ++k) {
                std::complex<double> u = a[i + k], v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wl;
            }
        }
    }
}

}  // namespace

// ---- construction ----

Potential Potential::square_well(double depth, double half_width, int dimension) {
    Potential p;
    p.kind_ = PotentialKind::SquareWell;
    p.dim_ = dimension;
    p.depth_ = depth;
    p.half_width_ = half_width;
    p.R_ = half_width;
    p.check_invariants();
    return p;
}

Potential Potential::bump_sum(std::vector<Bump> bumps, double support_radius, int dimension) {
    Potential p;
    p.kind_ = PotentialKind::BumpSum;
    p.dim_ = dimension;
    p.bumps_ = std::move(bumps);
    p.R_ = support_radius;
    p.check_invariants();
    return p;
}

Potential Potential::grid_sampled(double support_radius, std::vector<double> samples,
                                  int dimension) {
    Potential p;
    p.kind_ = PotentialKind::GridSampled;
    p.dim_ = dimension;
    p.samples_ = std::move(samples);
    p.R_ = support_radius;
    if (p.samples_.size() < 3) throw std::invalid_argument("GridSampled: need >= 3 samples");
    p.spacing_ = (dimension == 1 ? 2.0 * support_radius : support_radius) /
                 (static_cast<double>(p.samples_.size()) - 1.0);
    p.check_invariants();
    return p;
}

Potential Potential::random_bump_sum(uint64_t seed, int n_bumps, double support_radius,
                                     int dimension) {
    SplitMix64 rng(seed);
    std::vector<Bump> bs;
    for (int i = 0; i < n_bumps; ++i) {
        Bump b;
        b.width = rng.uniform(0.12, 0.45) * support_radius;
        if (dimension == 3) {
            // keep the profile smooth at the origin: centered or cleanly separated
            b.center = (rng.uniform() < 0.5)
                           ? 0.0
                           : rng.uniform(b.width, support_radius - b.width);
        } else {
            b.center = rng.uniform(-(support_radius - b.width), support_radius - b.width);
        }
        b.amplitude = rng.uniform(-2.0, 2.0);
        bs.push_back(b);
    }
    return bump_sum(std::move(bs), support_radius, dimension);
}

void Potential::check_invariants() const {
    if (dim_ != 1 && dim_ != 3) throw std::invalid_argument("Potential: dimension must be 1 or 3");
    if (!(R_ > 0.0)) throw std::invalid_argument("Potential: support_radius must be > 0");
    if (kind_ == PotentialKind::BumpSum) {
        for (const Bump& b : bumps_) {
            if (!(b.width > 0.0)) throw std::invalid_argument("Bump: width must be > 0");
            if (dim_ == 1) {
                if (std::abs(b.center) + b.width > R_ + 1e-12)
                    throw std::invalid_argument("Bump: support exceeds the ball");
            } else {
                if (b.center + b.width > R_ + 1e-12)
                    throw std::invalid_argument("Bump: support exceeds the ball");
                if (b.center != 0.0 && b.center - b.width < -1e-12)
                    throw std::invalid_argument(
                        "Bump (d=3): center must be 0 or center - width >= 0 for smoothness");
            }
        }
    }
    if (kind_ == PotentialKind::SquareWell && !(half_width_ > 0.0))
        throw std::invalid_argument("SquareWell: half_width must be > 0");
}

// ---- evaluation ----

double Potential::evaluate(double x) const {
    double ax = dim_ == 1 ? std::abs(x) : x;
    if (dim_ == 3 && x < 0.0) throw std::invalid_argument("evaluate: radius must be >= 0 in d=3");
    if (ax >= R_) return 0.0;
    switch (kind_) {
        case PotentialKind::SquareWell:
            return ax < half_width_ ? depth_ : 0.0;
        case PotentialKind::BumpSum: {
            double s = 0.0;
            for (const Bump& b : bumps_) s += b.amplitude * bump_profile_derivative(0, (x - b.center) / b.width);
            return s;
        }
        case PotentialKind::GridSampled: {
            double lo = dim_ == 1 ? -R_ : 0.0;
            double u = (x - lo) / spacing_;
            int n = static_cast<int>(samples_.size());
            int i = static_cast<int>(std::floor(u));
            double f = u - i;
            // 4-point Lagrange interpolation, clamped at the ends
            auto sample = [&](int idx) {
                return (idx < 0 || idx >= n) ? 0.0 : samples_[idx];
            };
            double ym1 = sample(i - 1), y0 = sample(i), y1 = sample(i + 1), y2 = sample(i + 2);
            double a = -f * (f - 1.0) * (f - 2.0) / 6.0;
            double b = (f * f - 1.0) * (f - 2.0) / 2.0;
            double c = -f * (f + 1.0) * (f - 2.0) / 2.0;
            double d = f * (f * f - 1.0) / 6.0;
            return a * ym1 + b * y0 + c * y1 + d * y2;
        }
    }
    return 0.0;
}

double Potential::evaluate_point(const std::array<double, 3>& x) const {
    double r = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
    if (dim_ == 1) return evaluate(x[0]);
    return evaluate(r);
}

double Potential::derivative_value(int order, double x) const {
    if (kind_ != PotentialKind::BumpSum)
        throw std::invalid_argument("derivative_value: exact derivatives need a BumpSum potential");
    if (order == 0) return evaluate(x);
    double s = 0.0;
    for (const Bump& b : bumps_) {
        double u = (x - b.center) / b.width;
        s += b.amplitude * bump_profile_derivative(order, u) / std::pow(b.width, order);
    }
    return s;
}

// ---- derivative as a potential ----

Potential Potential::derivative(const MultiIndex& alpha) const {
    if (static_cast<int>(alpha.size()) != dim_)
        throw std::invalid_argument("derivative: multi-index size must equal dimension");
    if (dim_ != 1)
        throw std::invalid_argument(
            "derivative: d=3 radial potentials are handled through the radial reduction; "
            "component derivatives are not supported");
    int order = alpha[0];
    if (order < 0) throw std::invalid_argument("derivative: order must be >= 0");
    if (kind_ == PotentialKind::SquareWell)
        throw std::invalid_argument("derivative: non-smooth kind");
    if (order == 0) {
        if (kind_ == PotentialKind::GridSampled) return *this;
        // sample the bump sum onto a default grid
        int n = 2049;
        std::vector<double> s(n);
        double h = 2.0 * R_ / (n - 1);
        for (int i = 0; i < n; ++i) s[i] = evaluate(-R_ + i * h);
        return grid_sampled(R_, std::move(s), 1);
    }
    if (kind_ == PotentialKind::BumpSum) {
        int n = 2049;
        std::vector<double> s(n);
        double h = 2.0 * R_ / (n - 1);
        for (int i = 0; i < n; ++i) s[i] = derivative_value(order, -R_ + i * h);
        return grid_sampled(R_, std::move(s), 1);
    }

    // GridSampled: Fourier differentiation of the zero-padded periodic extension.
    int n = static_cast<int>(samples_.size());
    int m = next_pow2(2 * (n - 1) < 4 ? 4 : 2 * (n - 1));  // period >= [-2R, 2R)
    if (n % 2 == 0)
        throw std::invalid_argument("derivative: GridSampled needs an odd sample count");
    double h = spacing_;
    double period = m * h;
    std::vector<std::complex<double>> buf(m, 0.0);
    int off = (m - (n - 1)) / 2;
    for (int i = 0; i < n; ++i) buf[(off + i) % m] = samples_[i];
    fft(buf, -1);
    // Nyquist check: spectral content of k^order * V_hat concentrated below the top octave
    {
        std::vector<double> mag(m / 2 + 1, 0.0);
        double total = 0.0, top = 0.0;
        for (int k = 0; k <= m / 2; ++k) {
            double kk = 2.0 * M_PI * k / period;
            double v = std::abs(buf[k]) * std::pow(kk, order);
            mag[k] = v * v;
            total += mag[k];
            if (k > m / 4) top += mag[k];
        }
        if (total > 0.0 && top / total > 1e-12)
            throw NumericalError("derivative: order too high for this grid (refine grid)");
    }
    for (int k = 0; k < m; ++k) {
        int kk = k <= m / 2 ? k : k - m;
        std::complex<double> ik(0.0, 2.0 * M_PI * kk / period);
        std::complex<double> mult = std::pow(ik, order);
        if (k == m / 2 && order % 2 == 1) mult = 0.0;  // unmatched Nyquist mode
        buf[k] *= mult;
    }
    fft(buf, +1);
    std::vector<double> out(n);
    for (int i = 0; i < n; ++i) out[i] = buf[(off + i) % m].real() / m;
    return grid_sampled(R_, std::move(out), 1);
}

// ---- norms ----

double Potential::sup_norm() const {
    switch (kind_) {
        case PotentialKind::SquareWell:
            return std::abs(depth_);
        case PotentialKind::GridSampled: {
            double m = 0.0;
            for (double v : samples_) m = std::max(m, std::abs(v));
            return m;
        }
        case PotentialKind::BumpSum: {
            double lo = dim_ == 1 ? -R_ : 0.0;
            int n = 4097;
            double h = (R_ - lo) / (n - 1);
            double best = 0.0, bestx = lo;
            for (int i = 0; i < n; ++i) {
                double v = std::abs(evaluate(lo + i * h));
                if (v > best) {
                    best = v;
                    bestx = lo + i * h;
                }
            }
            // local golden-section refinement around the best grid point
            double a = std::max(lo, bestx - h), b = std::min(R_, bestx + h);
            for (int it = 0; it < 80; ++it) {
                double x1 = a + 0.381966011250105 * (b - a);
                double x2 = b - 0.381966011250105 * (b - a);
                if (std::abs(evaluate(x1)) < std::abs(evaluate(x2)))
                    a = x1;
                else
                    b = x2;
            }
            return std::max(best, std::abs(evaluate(0.5 * (a + b))));
        }
    }
    return 0.0;
}

double Potential::lp_norm(double p) const {
    if (p < 1.0) throw std::invalid_argument("lp_norm: p must be >= 1");
    if (std::isinf(p)) return sup_norm();
    auto integrand = [&](double x) {
        double v = std::abs(evaluate(x));
        double w = dim_ == 3 ? 4.0 * M_PI * x * x : 1.0;
        return w * std::pow(v, p);
    };
    double lo = dim_ == 1 ? -R_ : 0.0;
    double I = integrate_adaptive(integrand, lo, R_, 1e-12, 32);
    return std::pow(I, 1.0 / p);
}

double Potential::radial_moment(int k) const {
    if (dim_ != 3) throw std::invalid_argument("radial_moment: d=3 only");
    if (kind_ == PotentialKind::SquareWell && k > 0)
        throw std::invalid_argument("radial_moment: non-smooth kind");
    auto uk = [&](double r) {
        // (r V)^(k) = r V^(k) + k V^(k-1)
        if (k == 0) return r * evaluate(r);
        return r * derivative_value(k, r) + k * derivative_value(k - 1, r);
    };
    auto integrand = [&](double r) {
        double v = uk(r);
        return 4.0 * M_PI * v * v;
    };
    return integrate_adaptive(integrand, 0.0, R_, 1e-11, 64);
}

namespace {

// sum over |alpha| = k in N_0^3 of prod (2 alpha_i - 1)!! / (2k+1)!!
double angular_weight_sum(int k) {
    auto dfact = [](int m) {  // (2a-1)!!
        double r = 1.0;
        for (int i = 1; i <= m; ++i) r *= 2.0 * i - 1.0;
        return r;
    };
    double denom = 1.0;
    for (int i = 1; i <= 2 * k + 1; i += 2) denom *= i;
    double s = 0.0;
    for (int a = 0; a <= k; ++a)
        for (int b = 0; a + b <= k; ++b) {
            int c = k - a - b;
            s += dfact(a) * dfact(b) * dfact(c) / denom;
        }
    return s;
}

}  // namespace

double Potential::sobolev_norm(int s) const {
    if (s < 0) throw std::invalid_argument("sobolev_norm: s must be >= 0");
    if (s == 0) return lp_norm(2.0);
    if (!smooth() ) throw std::invalid_argument("sobolev_norm: non-smooth kind");
    if (dim_ == 1) {
        double acc = 0.0;
        if (kind_ == PotentialKind::BumpSum) {
            for (int m = 0; m <= s; ++m) {
                auto f = [&](double x) {
                    double v = derivative_value(m, x);
                    return v * v;
                };
                acc += integrate_adaptive(f, -R_, R_, 1e-12, 64);
            }
        } else {
            Potential cur = *this;
            for (int m = 0; m <= s; ++m) {
                if (m > 0) cur = cur.derivative({1});
                auto f = [&](double x) {
                    double v = cur.evaluate(x);
                    return v * v;
                };
                acc += integrate_adaptive(f, -R_, R_, 1e-10, 128);
            }
        }
        return std::sqrt(acc);
    }
    // d=3 radial: sum_{|alpha|<=s} ||D^alpha V||_2^2 = sum_k A_k <V, (-Delta)^k V>
    // with <V,(-Delta)^k V> = 4 pi ||(rV)^(k)||^2_{L^2(0,inf)}
    double acc = 0.0;
    for (int k = 0; k <= s; ++k) acc += angular_weight_sum(k) * radial_moment(k);
    return std::sqrt(acc);
}

// ---- algebraic helpers ----

Potential Potential::scaled_by(double c) const {
    Potential p = *this;
    switch (kind_) {
        case PotentialKind::SquareWell:
            p.depth_ *= c;
            break;
        case PotentialKind::BumpSum:
            for (Bump& b : p.bumps_) b.amplitude *= c;
            break;
        case PotentialKind::GridSampled:
            for (double& v : p.samples_) v *= c;
            break;
    }
    return p;
}

Potential Potential::reflected() const {
    Potential p = *this;
    if (dim_ == 3) return p;
    switch (kind_) {
        case PotentialKind::SquareWell:
            break;
        case PotentialKind::BumpSum:
            for (Bump& b : p.bumps_) b.center = -b.center;
            break;
        case PotentialKind::GridSampled:
            std::reverse(p.samples_.begin(), p.samples_.end());
            break;
    }
    return p;
}

Potential Potential::shifted(double dx) const {
    if (dim_ != 1) throw std::invalid_argument("shifted: d=1 only");
    if (kind_ != PotentialKind::BumpSum) throw std::invalid_argument("shifted: BumpSum only");
    Potential p = *this;
    for (Bump& b : p.bumps_) b.center += dx;
    p.check_invariants();
    return p;
}

// ---- Frechet machinery ----

MultiIndex FrechetIndexing::multi_index_at(int i) const {
    if (i < 1) throw std::invalid_argument("multi_index_at: i >= 1");
    // enumerate N_0^d by total degree, lexicographic within a degree
    int count = 0;
    for (int deg = 0;; ++deg) {
        std::vector<MultiIndex> level;
        MultiIndex cur(dimension, 0);
        // lexicographic enumeration of compositions of deg into d parts
        std::function<void(int, int)> rec = [&](int pos, int rem) {
            if (pos == dimension - 1) {
                cur[pos] = rem;
                level.push_back(cur);
                return;
            }
            for (int v = deg; v >= 0; --v)
                if (v <= rem) {
                    cur[pos] = v;
                    rec(pos + 1, rem - v);
                }
        };
        rec(0, deg);
        for (const MultiIndex& m : level) {
            ++count;
            if (count == i) return m;
        }
    }
}

namespace {

// merged difference V - W as a single smooth object for exact derivatives
struct DiffEval {
    const Potential* V;
    const Potential* W;
    double deriv(int order, double x) const {
        return V->derivative_value(order, x) - W->derivative_value(order, x);
    }
};

}  // namespace

FrechetResult frechet_metric(const Potential& V, const Potential& W, const FrechetIndexing& idx) {
    if (V.dimension() != W.dimension())
        throw std::invalid_argument("frechet_metric: dimensions differ");
    if (V.dimension() != idx.dimension)
        throw std::invalid_argument("frechet_metric: indexing dimension mismatch");
    if (!V.smooth() || !W.smooth())
        throw std::invalid_argument("frechet_metric: non-smooth kind");
    double R = std::max(V.support_radius(), W.support_radius());
    FrechetResult res;
    res.tail_bound = std::pow(2.0, -idx.i_max);

    if (V.dimension() == 1) {
        // fixed quadrature rule shared by every term: the discretized metric then
        // satisfies the metric axioms exactly, not just up to quadrature error
        QuadRule rule = gauss_legendre(512, -R, R);
        DiffEval diff{&V, &W};
        for (int i = 1; i <= idx.i_max; ++i) {
            int order = idx.multi_index_at(i)[0];
            double s = 0.0;
            for (size_t q = 0; q < rule.nodes.size(); ++q) {
                double v = diff.deriv(order, rule.nodes[q]);
                s += rule.weights[q] * v * v;
            }
            double nrm = std::sqrt(s);
            res.value += std::pow(2.0, -i) * nrm / (1.0 + nrm);
        }
        return res;
    }

    // d=3 radial: ||D^alpha f||^2 = m(alpha) * 4 pi ||(r f)^(|alpha|)||^2
    QuadRule rule = gauss_legendre(512, 0.0, R);
    auto dfact = [](int m) {
        double r = 1.0;
        for (int t = 1; t <= m; ++t) r *= 2.0 * t - 1.0;
        return r;
    };
    for (int i = 1; i <= idx.i_max; ++i) {
        MultiIndex a = idx.multi_index_at(i);
        int k = a[0] + a[1] + a[2];
        double denom = 1.0;
        for (int t = 1; t <= 2 * k + 1; t += 2) denom *= t;
        double malpha = dfact(a[0]) * dfact(a[1]) * dfact(a[2]) / denom;
        double s = 0.0;
        for (size_t q = 0; q < rule.nodes.size(); ++q) {
            double r = rule.nodes[q];
            double uv, uw;
            if (k == 0) {
                uv = r * V.evaluate(r);
                uw = r * W.evaluate(r);
            } else {
                uv = r * V.derivative_value(k, r) + k * V.derivative_value(k - 1, r);
                uw = r * W.derivative_value(k, r) + k * W.derivative_value(k - 1, r);
            }
            double d = uv - uw;
            s += rule.weights[q] * d * d;
        }
        double nrm = std::sqrt(malpha * 4.0 * M_PI * s);
        res.value += std::pow(2.0, -i) * nrm / (1.0 + nrm);
    }
    return res;
}

// ---- index set enumeration ----

std::vector<MultiIndexTuple> enumerate_index_set(int j, int k, int d) {
    if (j < 3 || k < 3 || k > j) throw std::invalid_argument("enumerate_index_set: need j>=3, 3<=k<=j");
    if (d != 1 && d != 3) throw std::invalid_argument("enumerate_index_set: d must be 1 or 3");
    int cap = j - k;          // per-index order bound
    int total = 2 * (j - k);  // required total order
    std::vector<MultiIndexTuple> out;

    std::vector<MultiIndex> alphas(k, MultiIndex(d, 0));
    std::vector<int> colsum(d, 0);

    std::function<void(int, int)> rec_tuple = [&](int m, int used) {
        if (m == k) {
            if (used != total) return;
            for (int l = 0; l < d; ++l)
                if (colsum[l] % 2 != 0) return;
            MultiIndexTuple t;
            t.j = j;
            t.k = k;
            t.d = d;
            t.alphas = alphas;
            out.push_back(std::move(t));
            return;
        }
        // enumerate multi-indices of order <= cap for slot m, lexicographically
        std::function<void(int, int)> rec_idx = [&](int pos, int sum) {
            if (pos == d) {
                if (used + sum <= total) {
                    rec_tuple(m + 1, used + sum);
                }
                return;
            }
            for (int v = 0; v <= cap - sum; ++v) {
                alphas[m][pos] = v;
                colsum[pos] += v;
                rec_idx(pos + 1, sum + v);
                colsum[pos] -= v;
            }
            alphas[m][pos] = 0;
        };
        rec_idx(0, 0);
    };
    rec_tuple(0, 0);
    return out;
}

// ---- inequality suite ----

namespace {

double product_integral_abs(const Potential& V, const std::vector<int>& orders) {
    // int |prod V^(a_m)| over the support (d=1)
    auto f = [&](double x) {
        double p = 1.0;
        for (int a : orders) p *= V.derivative_value(a, x);
        return std::abs(p);
    };
    return integrate_adaptive(f, -V.support_radius(), V.support_radius(), 1e-8, 64, 1 << 13);
}

}  // namespace

InequalityReport verify_inequality_suite(const Potential& V, int j) {
    if (V.dimension() != 1)
        throw std::invalid_argument("verify_inequality_suite: d=1 suite");
    if (!V.smooth()) throw std::invalid_argument("verify_inequality_suite: V must be smooth");
    const double slack = 1e-9;
    InequalityReport rep;
    auto add = [&](const std::string& name, double lhs, double rhs) {
        InequalityCheck c{name, lhs, rhs, lhs <= rhs + slack};
        rep.all_hold = rep.all_hold && c.holds;
        rep.checks.push_back(c);
    };

    double n2 = V.lp_norm(2), n3 = V.lp_norm(3), n4 = V.lp_norm(4), n6 = V.lp_norm(6);
    double ninf = V.sup_norm();

    // generalized Hoelder on reciprocal-sum-one tuples
    add("holder_2_2", product_integral_abs(V, {0, 0}), n2 * n2);
    add("holder_3_3_3", product_integral_abs(V, {0, 0, 0}), n3 * n3 * n3);
    add("holder_2_4_4", product_integral_abs(V, {0, 0, 0}), n2 * n4 * n4);
    add("holder_2_3_6", product_integral_abs(V, {0, 0, 0}), n2 * n3 * n6);

    // L^p interpolation ||V||_4 <= ||V||_2^{1/4} ||V||_6^{3/4}
    add("interpolation_4_2_6", n4, std::pow(n2, 0.25) * std::pow(n6, 0.75));

    // 1D sup bound ||u||_inf <= C ||u||_{1,2}; u^2 = int 2 u u' <= ||u||^2 + ||u'||^2
    // gives C = 1 independent of the support
    add("sup_bound_h1", ninf, V.sobolev_norm(1));

    // Sobolev bound: report the implied constant
    if (j >= 3) {
        double denom = 1.0;
        for (int k = 3; k <= j; ++k) {
            for (const MultiIndexTuple& t : enumerate_index_set(j, k, 1)) {
                std::vector<int> orders;
                for (const MultiIndex& a : t.alphas) orders.push_back(a[0]);
                denom += product_integral_abs(V, orders);
            }
        }
        double lhs = V.sobolev_norm(j - 2);
        rep.sobolev_ratio = lhs * lhs / denom;
    }
    return rep;
}

// ---- serialization ----

nlohmann::ordered_json Potential::to_json() const {
    nlohmann::ordered_json j;
    switch (kind_) {
        case PotentialKind::SquareWell:
            j["kind"] = "SquareWell";
            break;
        case PotentialKind::BumpSum:
            j["kind"] = "BumpSum";
            break;
        case PotentialKind::GridSampled:
            j["kind"] = "GridSampled";
            break;
    }
    j["dimension"] = dim_;
    j["support_radius"] = R_;
    if (dim_ == 3) j["radial"] = true;
    switch (kind_) {
        case PotentialKind::SquareWell:
            j["depth"] = depth_;
            j["half_width"] = half_width_;
            break;
        case PotentialKind::BumpSum: {
            nlohmann::ordered_json arr = nlohmann::ordered_json::array();
            for (const Bump& b : bumps_) {
                nlohmann::ordered_json e;
                e["amplitude"] = b.amplitude;
                e["center"] = b.center;
                e["width"] = b.width;
                arr.push_back(e);
            }
            j["bumps"] = arr;
            break;
        }
        case PotentialKind::GridSampled:
            j["grid_spacing"] = spacing_;
            j["samples"] = samples_;
            break;
    }
    return j;
}

Potential Potential::from_json(const nlohmann::json& j) {
    std::string kind = j.at("kind").get<std::string>();
    int dim = j.at("dimension").get<int>();
    double R = j.at("support_radius").get<double>();
    if (dim == 3 && (!j.contains("radial") || !j.at("radial").get<bool>()))
        throw std::invalid_argument("Potential: d=3 requires \"radial\": true");
    if (kind == "SquareWell") {
        double depth = j.at("depth").get<double>();
        double hw = j.at("half_width").get<double>();
        Potential p = square_well(depth, hw, dim);
        if (std::abs(hw - R) > 1e-12) {
            p.R_ = R;
            if (hw > R) throw std::invalid_argument("SquareWell: half_width exceeds support_radius");
        }
        return p;
    }
    if (kind == "BumpSum") {
        std::vector<Bump> bs;
        for (const auto& e : j.at("bumps")) {
            Bump b;
            b.amplitude = e.at("amplitude").get<double>();
            b.center = e.at("center").get<double>();
            b.width = e.at("width").get<double>();
            bs.push_back(b);
        }
        return bump_sum(std::move(bs), R, dim);
    }
    if (kind == "GridSampled") {
        std::vector<double> s = j.at("samples").get<std::vector<double>>();
        Potential p = grid_sampled(R, std::move(s), dim);
        double h = j.at("grid_spacing").get<double>();
        if (std::abs(h - p.spacing_) > 1e-9 * p.spacing_)
            throw std::invalid_argument("GridSampled: grid_spacing inconsistent with samples/support");
        return p;
    }
    throw std::invalid_argument("Potential: unknown kind " + kind);
}

}  // namespace resodet
