#include "resodet/determinant.hpp"

#include <cmath>
#include <limits>

#include "resodet/quadrature.hpp"

namespace resodet {

ScaledComplex det_reg(int p, const CMatrix& A) {
    if (p != 1 && p != 2) throw std::invalid_argument("det_reg: p must be 1 or 2");
    ScaledComplex d = det_one_plus(A);
    if (p == 2) {
        Complex tr = trace(A);
        // e^{-tr A}: fold the real part into the log scale, the phase into the mantissa
        d.mantissa *= std::exp(Complex(0.0, -tr.imag()));
        d.log_scale -= tr.real();
    }
    return d.normalized();
}

namespace {

ScaledComplex sector_det(const Potential& V, Complex lam, int n, int p, std::optional<int> ell) {
    BSMatrix K = assemble_bs(V, lam, n, ell);
    return det_reg(p, K.entries);
}

// Richardson over node counts n, n/2, ... (error expansion in n^{-2}, n^{-3}, ...).
// Levels with fewer than 25 nodes are dropped; at most 5 levels.
ScaledComplex extrapolated_det(const Potential& V, Complex lam, int n, int p,
                               std::optional<int> ell) {
    std::vector<int> ns;
    for (int k = 0; k < 5; ++k) {
        int m = n >> k;
        if (m < 25 && !ns.empty()) break;
        if (m < 8) break;
        ns.push_back(m);
    }
    std::reverse(ns.begin(), ns.end());
    std::vector<ScaledComplex> v;
    for (int m : ns) v.push_back(sector_det(V, lam, m, p, ell));
    bool constant = true;
    for (const ScaledComplex& s : v)
        constant = constant && s.mantissa == v[0].mantissa && s.log_scale == v[0].log_scale;
    if (constant) return v[0];  // extrapolating a constant sequence exactly (V = 0)
    int expo = 2;
    while (v.size() > 1) {
        double f = std::pow(2.0, expo++);
        std::vector<ScaledComplex> next(v.size() - 1);
        for (size_t i = 0; i + 1 < v.size(); ++i)
            next[i] = (v[i + 1] * f - v[i]) * (1.0 / (f - 1.0));
        v = std::move(next);
    }
    return v[0];
}

}  // namespace

DeterminantValue regularized_determinant_raw(const Potential& V, Complex lam, int n,
                                             std::optional<int> ell_max) {
    DeterminantValue out;
    out.lam = lam;
    if (V.dimension() == 1) {
        out.p = 1;
        ScaledComplex d = sector_det(V, lam, n, 1, std::nullopt);
        out.value = d.mantissa;
        out.log_scale = d.log_scale;
        return out;
    }
    out.p = 2;
    int lmax = ell_max.value_or(kEllMax);
    ScaledComplex prod{Complex(1.0, 0.0), 0.0};
    for (int l = 0; l <= lmax; ++l)
        prod = prod * sector_det(V, lam, n, 2, l).pow_int(2 * l + 1);
    out.value = prod.mantissa;
    out.log_scale = prod.log_scale;
    return out;
}

DeterminantValue regularized_determinant(const Potential& V, Complex lam, int n,
                                         std::optional<int> ell_max) {
    DeterminantValue out;
    out.lam = lam;
    if (V.dimension() == 1) {
        out.p = 1;
        ScaledComplex d = extrapolated_det(V, lam, n, 1, std::nullopt);
        out.value = d.mantissa;
        out.log_scale = d.log_scale;
        return out;
    }
    out.p = 2;
    int lmax = ell_max.value_or(kEllMax);
    ScaledComplex prod{Complex(1.0, 0.0), 0.0};
    for (int l = 0; l <= lmax; ++l)
        prod = prod * extrapolated_det(V, lam, n, 2, l).pow_int(2 * l + 1);
    out.value = prod.mantissa;
    out.log_scale = prod.log_scale;
    return out;
}

ScaledComplex sector_determinant(const Potential& V, Complex lam, int n, int ell) {
    if (V.dimension() != 3) throw std::invalid_argument("sector_determinant: d=3 only");
    return extrapolated_det(V, lam, n, 2, ell);
}

double sector_tail_hs(const Potential& V, Complex lam, int n, int ell) {
    return bs_hilbert_schmidt_norm(assemble_bs(V, lam, n, ell));
}

Complex determinant_derivative(const Potential& V, Complex lam, int n,
                               std::optional<int> ell_max) {
    double h = 1e-5 * (1.0 + std::abs(lam));
    ScaledComplex dp = regularized_determinant(V, lam + h, n, ell_max).scaled();
    ScaledComplex dm = regularized_determinant(V, lam - h, n, ell_max).scaled();
    return ((dp - dm) * (1.0 / (2.0 * h))).value();
}

ContinuityReport verify_continuity(const Potential& V, const Potential& W,
                                   const std::vector<Complex>& lam_grid, int n, int steps) {
    if (V.dimension() != W.dimension())
        throw std::invalid_argument("verify_continuity: dimension mismatch");
    ContinuityReport rep;
    std::vector<ScaledComplex> base;
    base.reserve(lam_grid.size());
    for (Complex lam : lam_grid) base.push_back(regularized_determinant(V, lam, n).scaled());
    double wsup = W.sup_norm();
    for (int j = 1; j <= steps; ++j) {
        // V_j = V + W / j on the common support ball
        Potential Wj = W.scaled_by(1.0 / j);
        Potential Vj = [&] {
            if (V.kind() == PotentialKind::BumpSum && W.kind() == PotentialKind::BumpSum) {
                std::vector<Bump> bs = V.bumps();
                for (const Bump& b : Wj.bumps()) bs.push_back(b);
                return Potential::bump_sum(std::move(bs),
                                           std::max(V.support_radius(), W.support_radius()),
                                           V.dimension());
            }
            throw std::invalid_argument("verify_continuity: BumpSum potentials expected");
        }();
        double e = 0.0;
        for (size_t g = 0; g < lam_grid.size(); ++g) {
            ScaledComplex dj = regularized_determinant(Vj, lam_grid[g], n).scaled();
            e = std::max(e, (dj - base[g]).abs());
        }
        rep.errors.push_back(e);
        rep.sup_norms.push_back(wsup / j);
    }
    std::vector<double> js;
    for (int j = 1; j <= steps; ++j) js.push_back(j);
    bool positive = true;
    for (double e : rep.errors) positive = positive && e > 0.0;
    rep.slope = positive ? loglog_slope(js, rep.errors) : 0.0;
    rep.ratio_max = 0.0;
    rep.ratio_min = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < rep.errors.size(); ++i) {
        double r = rep.errors[i] / rep.sup_norms[i];
        rep.ratio_max = std::max(rep.ratio_max, r);
        rep.ratio_min = std::min(rep.ratio_min, r);
    }
    return rep;
}

}  // namespace resodet
