#pragma once
// Model parameters shared across the symbolic and numeric layers.

#include <stdexcept>

#include "spintower/scalar.hpp"

namespace spintower {

// Anisotropy signature: the third diagonal entry of the metric coupling is
// gamma2 = +1 (compact target sphere) or -1 (hyperboloid sheet).
struct ModelParams {
    int gamma2 = 1;

    void validate() const {
        if (gamma2 != 1 && gamma2 != -1)
            throw std::invalid_argument("gamma2 must be +1 or -1");
    }
    // i-th diagonal coupling: 1, 1, gamma2.
    ExactScalar coupling(int i) const {
        if (i < 1 || i > 3) throw std::out_of_range("coupling index must be 1..3");
        return ExactScalar(Rational(i == 3 ? gamma2 : 1));
    }
};

// Levi-Civita symbol on {1,2,3}.
inline int eps3(int i, int j, int k) {
    if (i == j || j == k || i == k) return 0;
    return ((j - i + 3) % 3 == 1) ? 1 : -1;
}

}  // namespace spintower
