#pragma once

#include <vector>

namespace resodet {

// Eigenvalues of the symmetric tridiagonal matrix (diag d, off-diagonal e)
// that are strictly below `upper`, ascending, by Sturm-count bisection.
// e has size d.size()-1.
std::vector<double> tridiag_eigenvalues_below(const std::vector<double>& d,
                                              const std::vector<double>& e, double upper);

// Number of eigenvalues < x (Sturm count with standard pivot clamping).
int tridiag_count_below(const std::vector<double>& d, const std::vector<double>& e, double x);

}  // namespace resodet
