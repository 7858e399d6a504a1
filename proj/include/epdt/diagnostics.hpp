#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "epdt/constructions.hpp"
#include "epdt/grid.hpp"
#include "epdt/params.hpp"
#include "epdt/state.hpp"

namespace epdt {

// Inclusive node index range; quadratures skip nodes outside it (u vanishes there).
struct NodeRange {
    std::size_t lo;
    std::size_t hi;
    static NodeRange all(const SpatialGrid& grid) { return {0, grid.size() - 1}; }
};

double average_U(std::span<const double> u, const SpatialGrid& grid);
double average_U(std::span<const double> u, const SpatialGrid& grid, NodeRange range);

// int u(t, x) psi(t, x) dx, evaluated as sum w_i u_i exp(log rho(t) + log phi(x_i)).
double average_U0(std::span<const double> u, double t, const SpatialGrid& grid,
                  const TestFunctionContext& ctx);
double average_U0(std::span<const double> u, double t, const SpatialGrid& grid,
                  const TestFunctionContext& ctx, NodeRange range);

double nonlinear_mass(std::span<const double> u, double p, const SpatialGrid& grid,
                      NodeRange range);

double average_U(const SolverState& state, const SpatialGrid& grid);
double average_U0(const SolverState& state, const SpatialGrid& grid,
                  const TestFunctionContext& ctx);

struct OdeIdentityReport {
    double max_abs_residual;
    double max_rel_residual;  // normalized by the largest term magnitude in the window
    std::size_t rows_checked;
};

// Residual of U'' + mu U'/t + nu2 U/t^2 = int |u|^p with U', U'' from centered
// differences of the series, over the middle 80% of the run. Requires uniformly
// spaced rows (relative spacing spread <= 1e-6). With nonlinear = false the right-hand
// side is 0 (linear runs). Throws InsufficientData for fewer than 5 rows.
OdeIdentityReport check_ode_identity(const DiagnosticSeries& series, const ModelParams& params,
                                     bool nonlinear = true);

struct BoundFit {
    std::string name;
    double fitted_constant;  // largest c with value(t) >= c shape(t) on the window
    double window_lo;
    double window_hi;
    std::size_t samples;
    bool trivial;   // data identically zero
    bool positive;  // fitted_constant > 0
};

struct LowerBoundReport {
    BoundFit fujita_U;   // U(t) >= c eps t^{(1-mu)/2 + sqrt(delta)/2}, t >= 1
    BoundFit U0_decay;   // U0(t) >= c eps t^{-ell}, t >= T1
    BoundFit strauss_U;  // U(t) >= c eps^p t^{(-(n-1)(ell+1)/2-(ell+mu)/2)p+(n-1)(ell+1)+2}, t >= T1
};

// Fits the largest constant for each lower bound over the observed window.
// Rows past the blow-up threshold are still included; empty windows give c = NaN.
LowerBoundReport check_lower_bounds(const DiagnosticSeries& series, const ModelParams& params,
                                    const TestFunctionContext& ctx);

}  // namespace epdt
