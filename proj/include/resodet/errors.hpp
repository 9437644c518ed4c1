#pragma once

#include <stdexcept>

namespace resodet {

// Numerical failure (non-convergence, resolution limits) as opposed to a
// contract violation, which uses std::invalid_argument.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace resodet
