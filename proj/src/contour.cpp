#include "resodet/contour.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstring>
#include <map>
#include <thread>

namespace resodet {

namespace {
std::atomic<int> g_threads{4};
}

int runtime_threads() { return g_threads.load(); }
void set_runtime_threads(int k) { g_threads.store(std::max(1, k)); }

void SearchRegion::validate() const {
    if (!(re_min < re_max) || !(im_min < im_max))
        throw std::invalid_argument("SearchRegion: re_min < re_max and im_min < im_max required");
    // closest point of the rectangle to the origin must clear the exclusion disk
    double cx = std::clamp(0.0, re_min, re_max);
    double cy = std::clamp(0.0, im_min, im_max);
    if (std::hypot(cx, cy) < exclusion_radius)
        throw std::invalid_argument("SearchRegion: region intersects the exclusion disk at 0");
}

double SearchRegion::diameter() const { return std::hypot(re_max - re_min, im_max - im_min); }

nlohmann::ordered_json ResonanceSet::to_json() const {
    nlohmann::ordered_json j;
    j["region"] = {{"re_min", region.re_min},
                   {"re_max", region.re_max},
                   {"im_min", region.im_min},
                   {"im_max", region.im_max},
                   {"exclusion_radius", region.exclusion_radius}};
    j["tolerance"] = tolerance;
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const ResonanceEntry& e : entries) {
        nlohmann::ordered_json o;
        o["re"] = e.lambda.real();
        o["im"] = e.lambda.imag();
        o["multiplicity"] = e.multiplicity;
        arr.push_back(o);
    }
    j["entries"] = arr;
    if (ell_max.has_value()) j["ell_max"] = *ell_max;
    return j;
}

namespace {

constexpr double kBoundaryFloorLog = -23.025850929940457;  // log(1e-10)

struct EvalCache {
    const AnalyticFn* f;
    std::map<std::pair<uint64_t, uint64_t>, ScaledComplex> cache;

    static std::pair<uint64_t, uint64_t> key(Complex z) {
        uint64_t a, b;
        double re = z.real(), im = z.imag();
        std::memcpy(&a, &re, 8);
        std::memcpy(&b, &im, 8);
        return {a, b};
    }

    ScaledComplex eval(Complex z) {
        auto k = key(z);
        auto it = cache.find(k);
        if (it != cache.end()) return it->second;
        ScaledComplex v = (*f)(z);
        cache.emplace(k, v);
        return v;
    }

    // evaluate a batch in parallel, filling the cache deterministically
    void prefetch(const std::vector<Complex>& pts) {
        std::vector<Complex> todo;
        for (Complex z : pts)
            if (cache.find(key(z)) == cache.end()) todo.push_back(z);
        std::sort(todo.begin(), todo.end(), [](Complex a, Complex b) {
            return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
        });
        todo.erase(std::unique(todo.begin(), todo.end()), todo.end());
        if (todo.empty()) return;
        int nt = std::min<int>(runtime_threads(), static_cast<int>(todo.size()));
        std::vector<ScaledComplex> out(todo.size());
        if (nt <= 1) {
            for (size_t i = 0; i < todo.size(); ++i) out[i] = (*f)(todo[i]);
        } else {
            std::vector<std::thread> th;
            std::atomic<size_t> next{0};
            for (int t = 0; t < nt; ++t)
                th.emplace_back([&] {
                    for (;;) {
                        size_t i = next.fetch_add(1);
                        if (i >= todo.size()) return;
                        out[i] = (*f)(todo[i]);
                    }
                });
            for (auto& t : th) t.join();
        }
        for (size_t i = 0; i < todo.size(); ++i) cache.emplace(key(todo[i]), out[i]);
    }
};

double midpoint(double a, double b) { return a + (b - a) * 0.5; }

struct Rect {
    double x0, x1, y0, y1;
    Complex corner(int i) const {
        switch (i & 3) {
            case 0: return {x0, y0};
            case 1: return {x1, y0};
            case 2: return {x1, y1};
            default: return {x0, y1};
        }
    }
    double diam() const { return std::hypot(x1 - x0, y1 - y0); }
    Complex center() const { return {midpoint(x0, x1), midpoint(y0, y1)}; }
};

std::vector<Complex> edge_points(Complex a, Complex b, int m) {
    std::vector<Complex> pts(m + 1);
    for (int i = 0; i <= m; ++i) pts[i] = a + (b - a) * (static_cast<double>(i) / m);
    pts[0] = a;
    pts[m] = b;
    return pts;
}

// winding of f around rect; phase increments kept below pi/2 by refinement
int rect_winding(EvalCache& C, const Rect& r, int depth_cap = 14) {
    double total = 0.0;
    for (int e = 0; e < 4; ++e) {
        Complex a = r.corner(e), b = r.corner(e + 1);
        int m = 8;
        for (;;) {
            std::vector<Complex> pts = edge_points(a, b, m);
            C.prefetch(pts);
            double mn = std::numeric_limits<double>::infinity();
            double sum = 0.0, worst = 0.0;
            Complex prev = C.eval(pts[0]).arg_ref();
            mn = std::min(mn, C.eval(pts[0]).log_abs());
            for (int i = 1; i <= m; ++i) {
                ScaledComplex v = C.eval(pts[i]);
                mn = std::min(mn, v.log_abs());
                double d = std::arg(v.arg_ref() / prev);
                worst = std::max(worst, std::abs(d));
                sum += d;
                prev = v.arg_ref();
            }
            if (mn < kBoundaryFloorLog)
                throw NumericalError("count_zeros: zero on or near the region boundary");
            if (worst < M_PI / 2) {
                total += sum;
                break;
            }
            m *= 2;
            if (m > (1 << depth_cap))
                throw NumericalError("count_zeros: boundary refinement did not settle");
        }
    }
    double w = total / (2.0 * M_PI);
    double residual = std::abs(w - std::round(w));
    if (residual > 0.25) throw NumericalError("count_zeros: winding residual above 0.25");
    return static_cast<int>(std::lround(w));
}

Complex newton_refine(EvalCache& C, Complex z0, double tol, const SearchRegion& region,
                      bool* converged) {
    Complex z = z0;
    *converged = false;
    for (int it = 0; it < 60; ++it) {
        double h = 1e-6 * (1.0 + std::abs(z));
        ScaledComplex fp = C.eval(z + h), fm = C.eval(z - h), fz = C.eval(z);
        ScaledComplex deriv = (fp - fm) * (1.0 / (2.0 * h));
        if (deriv.is_zero()) return z;
        ScaledComplex step = fz / deriv;
        Complex dz = step.value();
        if (!std::isfinite(dz.real()) || !std::isfinite(dz.imag())) return z;
        z -= dz;
        if (!region.contains(z, 0.05 * region.diameter())) return z;
        if (std::abs(dz) < 0.5 * tol) {
            *converged = true;
            return z;
        }
    }
    return z;
}

}  // namespace

int count_zeros(const AnalyticFn& f, const SearchRegion& region) {
    region.validate();
    EvalCache C{&f, {}};
    return rect_winding(C, Rect{region.re_min, region.re_max, region.im_min, region.im_max});
}

namespace {

struct SearchState {
    EvalCache C;
    const SearchRegion* region;
    double tol;
    int cell_budget;
    int cells_used = 0;
    std::vector<ResonanceEntry> found;

    void process(const Rect& r, int w) {
        if (++cells_used > cell_budget)
            throw NumericalError("locate_zeros: cell budget exceeded");
        if (w == 0) return;
        if (w == 1) {
            bool conv = false;
            Complex z = newton_refine(C, r.center(), tol, *region, &conv);
            if (conv && region->contains(z, tol)) {
                found.push_back({z, 1});
                return;
            }
        }
        if (r.diam() < tol) {
            found.push_back({r.center(), w});
            return;
        }
        subdivide(r, w);
    }

    // Quadrisect; if a zero lands on the proposed split lines the winding of a
    // child fails, so retry with nudged split fractions until the partition is
    // consistent (child windings sum to the parent's).
    void subdivide(const Rect& r, int w) {
        static const double fracs[] = {0.5, 0.5618, 0.4382, 0.6236, 0.3764};
        for (double fx : fracs)
            for (double fy : fracs) {
                double cx = r.x0 + (r.x1 - r.x0) * fx;
                double cy = r.y0 + (r.y1 - r.y0) * fy;
                Rect kids[4] = {Rect{r.x0, cx, r.y0, cy}, Rect{cx, r.x1, r.y0, cy},
                                Rect{r.x0, cx, cy, r.y1}, Rect{cx, r.x1, cy, r.y1}};
                int wk[4];
                bool ok = true;
                try {
                    // warm the cache with every child corner and coarse edge point in one batch
                    std::vector<Complex> warm;
                    for (const Rect& k : kids)
                        for (int e = 0; e < 4; ++e) {
                            auto pts = edge_points(k.corner(e), k.corner(e + 1), 8);
                            warm.insert(warm.end(), pts.begin(), pts.end());
                        }
                    C.prefetch(warm);
                    int sum = 0;
                    for (int i = 0; i < 4; ++i) {
                        wk[i] = rect_winding(C, kids[i]);
                        sum += wk[i];
                    }
                    if (sum != w) ok = false;
                } catch (const NumericalError&) {
                    ok = false;
                }
                if (ok) {
                    for (int i = 0; i < 4; ++i) process(kids[i], wk[i]);
                    return;
                }
            }
        throw NumericalError("locate_zeros: could not separate zeros from cell boundaries");
    }
};

}  // namespace

ResonanceSet locate_zeros(const AnalyticFn& f, const SearchRegion& region, double tol,
                          int cell_budget) {
    region.validate();
    if (tol < 1e-10) throw std::invalid_argument("locate_zeros: tol >= 1e-10");
    SearchState st{EvalCache{&f, {}}, &region, tol, cell_budget, 0, {}};
    Rect root{region.re_min, region.re_max, region.im_min, region.im_max};
    int total = rect_winding(st.C, root);
    st.process(root, total);
    std::vector<ResonanceEntry>& found = st.found;

    ResonanceSet out;
    out.region = region;
    out.tolerance = tol;

    // merge clusters closer than 2 tol to their multiplicity-weighted centroid
    bool merged = true;
    while (merged) {
        merged = false;
        for (size_t i = 0; i < found.size() && !merged; ++i)
            for (size_t j = i + 1; j < found.size() && !merged; ++j) {
                if (std::abs(found[i].lambda - found[j].lambda) < 2.0 * tol) {
                    int m = found[i].multiplicity + found[j].multiplicity;
                    Complex c = (found[i].lambda * static_cast<double>(found[i].multiplicity) +
                                 found[j].lambda * static_cast<double>(found[j].multiplicity)) /
                                static_cast<double>(m);
                    found[i] = {c, m};
                    found.erase(found.begin() + j);
                    merged = true;
                }
            }
    }
    std::sort(found.begin(), found.end(), [](const ResonanceEntry& a, const ResonanceEntry& b) {
        return a.lambda.real() != b.lambda.real() ? a.lambda.real() < b.lambda.real()
                                                  : a.lambda.imag() < b.lambda.imag();
    });
    int sum = 0;
    for (const ResonanceEntry& e : found) sum += e.multiplicity;
    if (sum != total)
        throw NumericalError("locate_zeros: located multiplicities do not match the region winding");
    out.entries = std::move(found);
    return out;
}

ResonanceSet locate_resonances(const Potential& V, const SearchRegion& region, double tol, int n,
                               std::optional<int> ell_max) {
    if (V.dimension() == 1) {
        AnalyticFn f = [&](Complex lam) { return regularized_determinant(V, lam, n).scaled(); };
        return locate_zeros(f, region, tol);
    }
    int lmax = ell_max.value_or(kEllMax);
    ResonanceSet out;
    out.region = region;
    out.tolerance = tol;
    out.ell_max = lmax;
    for (int l = 0; l <= lmax; ++l) {
        AnalyticFn f = [&V, n, l](Complex lam) { return sector_determinant(V, lam, n, l); };
        ResonanceSet sec = locate_zeros(f, region, tol);
        for (ResonanceEntry e : sec.entries) {
            e.multiplicity *= 2 * l + 1;
            out.entries.push_back(e);
        }
    }
    std::sort(out.entries.begin(), out.entries.end(),
              [](const ResonanceEntry& a, const ResonanceEntry& b) {
                  return a.lambda.real() != b.lambda.real() ? a.lambda.real() < b.lambda.real()
                                                            : a.lambda.imag() < b.lambda.imag();
              });
    return out;
}

// ---- transfer matrix oracle ----

PiecewiseConstant to_piecewise(const Potential& V) {
    if (V.kind() != PotentialKind::SquareWell || V.dimension() != 1)
        throw std::invalid_argument("to_piecewise: non-piecewise-constant input");
    PiecewiseConstant pw;
    pw.breakpoints = {-V.half_width(), V.half_width()};
    pw.values = {V.depth()};
    return pw;
}

ScaledComplex outgoing_matching_1d(const PiecewiseConstant& pw, Complex lam) {
    size_t m = pw.values.size();
    if (pw.breakpoints.size() != m + 1 || m == 0)
        throw std::invalid_argument("outgoing_matching_1d: malformed piecewise data");
    Complex i(0.0, 1.0);
    double b = pw.breakpoints.back();
    Complex psi = std::exp(i * lam * b);
    Complex dpsi = i * lam * psi;
    for (size_t p = m; p-- > 0;) {
        Complex k = std::sqrt(lam * lam - pw.values[p]);
        double delta = pw.breakpoints[p + 1] - pw.breakpoints[p];
        Complex c = std::cos(k * delta), s;
        // sin(k d)/k, stable as k -> 0
        if (std::abs(k) * delta < 1e-8)
            s = delta;
        else
            s = std::sin(k * delta) / k;
        Complex psi_a = psi * c - dpsi * s;
        Complex dpsi_a = psi * (k * k) * s + dpsi * c;
        psi = psi_a;
        dpsi = dpsi_a;
    }
    double a0 = pw.breakpoints.front();
    Complex alpha = std::exp(-i * lam * a0) * (psi + dpsi / (i * lam)) / 2.0;
    return scaled(alpha);
}

ResonanceSet transfer_matrix_resonances(const PiecewiseConstant& pw, const SearchRegion& region,
                                        double tol) {
    AnalyticFn f = [&pw](Complex lam) { return outgoing_matching_1d(pw, lam); };
    return locate_zeros(f, region, tol);
}

ResonanceSet transfer_matrix_resonances(const Potential& V, const SearchRegion& region,
                                        double tol) {
    return transfer_matrix_resonances(to_piecewise(V), region, tol);
}

ScaledComplex swave_matching_3d(double depth, double a, Complex lam) {
    Complex kp = std::sqrt(lam * lam - depth);
    Complex i(0.0, 1.0);
    Complex s;
    if (std::abs(kp) * a < 1e-8)
        s = a;
    else
        s = std::sin(kp * a) / kp;
    return scaled(i * lam * s - std::cos(kp * a));
}

ResonanceSet swave_resonances_3d(double depth, double a, const SearchRegion& region, double tol) {
    if (depth == 0.0) {
        ResonanceSet out;
        out.region = region;
        out.tolerance = tol;
        return out;
    }
    AnalyticFn f = [depth, a](Complex lam) { return swave_matching_3d(depth, a, lam); };
    return locate_zeros(f, region, tol);
}

// ---- comparison ----

nlohmann::ordered_json IsoReport::to_json() const {
    nlohmann::ordered_json j;
    j["iso_resonant"] = iso_resonant;
    j["matches"] = matches;
    j["unmatched_a"] = unmatched_a;
    j["unmatched_b"] = unmatched_b;
    return j;
}

IsoReport compare_resonance_sets(const ResonanceSet& A, const ResonanceSet& B, double tol) {
    auto near = [](double a, double b) { return std::abs(a - b) < 1e-12; };
    if (!near(A.region.re_min, B.region.re_min) || !near(A.region.re_max, B.region.re_max) ||
        !near(A.region.im_min, B.region.im_min) || !near(A.region.im_max, B.region.im_max))
        throw std::invalid_argument("compare_resonance_sets: regions differ");
    IsoReport rep;
    std::vector<bool> usedB(B.entries.size(), false);
    for (size_t i = 0; i < A.entries.size(); ++i) {
        int best = -1;
        double bestd = std::numeric_limits<double>::infinity();
        for (size_t j = 0; j < B.entries.size(); ++j) {
            if (usedB[j]) continue;
            double d = std::abs(A.entries[i].lambda - B.entries[j].lambda);
            if (d < bestd) {
                bestd = d;
                best = static_cast<int>(j);
            }
        }
        if (best >= 0 && bestd < tol &&
            A.entries[i].multiplicity == B.entries[best].multiplicity) {
            usedB[best] = true;
            rep.matches.emplace_back(static_cast<int>(i), best);
        } else {
            rep.unmatched_a.push_back(static_cast<int>(i));
        }
    }
    for (size_t j = 0; j < B.entries.size(); ++j)
        if (!usedB[j]) rep.unmatched_b.push_back(static_cast<int>(j));
    rep.iso_resonant = rep.unmatched_a.empty() && rep.unmatched_b.empty();
    return rep;
}

}  // namespace resodet
