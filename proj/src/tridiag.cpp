#include "resodet/tridiag.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace resodet {

int tridiag_count_below(const std::vector<double>& d, const std::vector<double>& e, double x) {
    int n = static_cast<int>(d.size());
    const double tiny = std::numeric_limits<double>::min() / std::numeric_limits<double>::epsilon();
    int count = 0;
    double q = d[0] - x;
    if (q < 0) ++count;
    for (int i = 1; i < n; ++i) {
        if (std::abs(q) < tiny) q = (q < 0 ? -tiny : tiny);
        q = d[i] - x - e[i - 1] * e[i - 1] / q;
        if (q < 0) ++count;
    }
    return count;
}

std::vector<double> tridiag_eigenvalues_below(const std::vector<double>& d,
                                              const std::vector<double>& e, double upper) {
    int n = static_cast<int>(d.size());
    if (e.size() + 1 != d.size()) throw std::invalid_argument("tridiag: size mismatch");
    // Gershgorin bounds
    double lo = d[0], hi = d[0];
    for (int i = 0; i < n; ++i) {
        double r = (i > 0 ? std::abs(e[i - 1]) : 0.0) + (i < n - 1 ? std::abs(e[i]) : 0.0);
        lo = std::min(lo, d[i] - r);
        hi = std::max(hi, d[i] + r);
    }
    hi = std::min(hi, upper);
    if (hi <= lo) return {};

    int m = tridiag_count_below(d, e, hi);
    std::vector<double> out(m);
    // bisection for the k-th eigenvalue (0-based): smallest x with count(x) >= k+1
    for (int k = 0; k < m; ++k) {
        double a = lo, b = hi;
        while (b - a > 1e-14 * (std::abs(a) + std::abs(b)) + 1e-300) {
            double mid = 0.5 * (a + b);
            if (mid <= a || mid >= b) break;
            if (tridiag_count_below(d, e, mid) >= k + 1)
                b = mid;
            else
                a = mid;
        }
        out[k] = 0.5 * (a + b);
    }
    return out;
}

}  // namespace resodet
