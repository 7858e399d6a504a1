#pragma once

#include <string>
#include <vector>

#include "epdt/params.hpp"

namespace epdt {

struct CheckResult {
    std::string name;
    double residual;
    double tolerance;
    bool passed;
};

// Residual checks of the adjoint construction and the special-function identities.
// order_shift perturbs the Bessel order of rho (negative control).
// Throws NegativeDiscriminant when delta < 0.
std::vector<CheckResult> validation_suite(const ModelParams& params, double order_shift = 0.0);

}  // namespace epdt
