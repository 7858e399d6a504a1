#pragma once

#include <vector>

namespace epdt {

// Grid solution (u, u_t) at time t >= 1.
struct SolverState {
    double t = 1.0;
    std::vector<double> u;
    std::vector<double> v;
};

struct DiagnosticRow {
    double t;
    double sup_norm;
    double U;               // int u dx
    double U0;              // int u psi(t, .) dx; NaN when delta < 0
    double nonlinear_mass;  // int |u|^p dx
    double support_radius;
};

using DiagnosticSeries = std::vector<DiagnosticRow>;

}  // namespace epdt
