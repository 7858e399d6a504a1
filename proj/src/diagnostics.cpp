#include "epdt/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "epdt/errors.hpp"

namespace epdt {

namespace {

void check_range(std::span<const double> u, const SpatialGrid& grid, NodeRange range) {
    if (u.size() != grid.size()) throw ConfigError("diagnostics: sample size mismatch");
    if (range.lo > range.hi || range.hi >= grid.size())
        throw ConfigError("diagnostics: invalid node range");
}

}  // namespace

double average_U(std::span<const double> u, const SpatialGrid& grid, NodeRange range) {
    check_range(u, grid, range);
    const auto w = grid.weights();
    double s = 0.0;
    for (std::size_t i = range.lo; i <= range.hi; ++i) s += w[i] * u[i];
    return s;
}

double average_U(std::span<const double> u, const SpatialGrid& grid) {
    return average_U(u, grid, NodeRange::all(grid));
}

double average_U0(std::span<const double> u, double t, const SpatialGrid& grid,
                  const TestFunctionContext& ctx, NodeRange range) {
    check_range(u, grid, range);
    const auto w = grid.weights();
    const double log_r = log_rho(ctx, t);
    const int n = ctx.params.n();
    double s = 0.0;
    for (std::size_t i = range.lo; i <= range.hi; ++i) {
        if (u[i] == 0.0) continue;
        s += w[i] * u[i] * std::exp(log_r + log_eigenfunction_phi(n, grid.radius(i)));
    }
    return s;
}

double average_U0(std::span<const double> u, double t, const SpatialGrid& grid,
                  const TestFunctionContext& ctx) {
    return average_U0(u, t, grid, ctx, NodeRange::all(grid));
}

double nonlinear_mass(std::span<const double> u, double p, const SpatialGrid& grid,
                      NodeRange range) {
    check_range(u, grid, range);
    const auto w = grid.weights();
    double s = 0.0;
    for (std::size_t i = range.lo; i <= range.hi; ++i)
        if (u[i] != 0.0) s += w[i] * std::pow(std::abs(u[i]), p);
    return s;
}

double average_U(const SolverState& state, const SpatialGrid& grid) {
    return average_U(state.u, grid);
}

double average_U0(const SolverState& state, const SpatialGrid& grid,
                  const TestFunctionContext& ctx) {
    return average_U0(state.u, state.t, grid, ctx);
}

OdeIdentityReport check_ode_identity(const DiagnosticSeries& series, const ModelParams& params,
                                     bool nonlinear) {
    if (series.size() < 5) throw InsufficientData("check_ode_identity: need at least 5 rows");
    const double h = series[1].t - series[0].t;
    if (!(h > 0.0)) throw InsufficientData("check_ode_identity: non-increasing times");
    // Longest uniformly spaced prefix; the final row of a run usually sits off the grid.
    std::size_t count = 2;
    while (count < series.size() &&
           std::abs((series[count].t - series[count - 1].t) - h) <= 1e-6 * h)
        ++count;
    if (count < 5) throw InsufficientData("check_ode_identity: fewer than 5 uniform rows");

    const double t_lo = series.front().t, t_hi = series[count - 1].t;
    const double w_lo = t_lo + 0.1 * (t_hi - t_lo), w_hi = t_lo + 0.9 * (t_hi - t_lo);
    const double mu = params.mu(), nu2 = params.nu2();

    double max_abs = 0.0, max_scale = 0.0;
    std::size_t checked = 0;
    for (std::size_t i = 1; i + 1 < count; ++i) {
        const double t = series[i].t;
        if (t < w_lo || t > w_hi) continue;
        const double Um = series[i - 1].U, U = series[i].U, Up = series[i + 1].U;
        const double d2 = (Up - 2.0 * U + Um) / (h * h);
        const double damp = mu * (Up - Um) / (2.0 * h) / t;
        const double mass = nu2 * U / (t * t);
        const double N = nonlinear ? series[i].nonlinear_mass : 0.0;
        max_abs = std::max(max_abs, std::abs(d2 + damp + mass - N));
        max_scale = std::max({max_scale, std::abs(d2), std::abs(damp), std::abs(mass), N});
        ++checked;
    }
    if (checked == 0) throw InsufficientData("check_ode_identity: empty window");
    return {max_abs, max_scale > 0.0 ? max_abs / max_scale : 0.0, checked};
}

namespace {

template <class Value, class Shape>
BoundFit fit_bound(std::string name, const DiagnosticSeries& series, double window_lo,
                   Value value, Shape shape) {
    BoundFit fit{std::move(name), std::numeric_limits<double>::quiet_NaN(), window_lo,
                 window_lo, 0, false, false};
    double c = std::numeric_limits<double>::infinity();
    bool all_zero = true;
    for (const auto& row : series) {
        if (row.t < window_lo) continue;
        const double v = value(row);
        if (!std::isfinite(v)) continue;
        ++fit.samples;
        fit.window_hi = row.t;
        if (v != 0.0) all_zero = false;
        const double s = shape(row.t);
        if (s > 0.0) c = std::min(c, v / s);
    }
    if (fit.samples == 0) return fit;
    if (all_zero) {
        fit.fitted_constant = 0.0;
        fit.trivial = true;
        return fit;
    }
    fit.fitted_constant = std::isfinite(c) ? c : 0.0;
    fit.positive = fit.fitted_constant > 0.0;
    return fit;
}

}  // namespace

LowerBoundReport check_lower_bounds(const DiagnosticSeries& series, const ModelParams& params,
                                    const TestFunctionContext& ctx) {
    const int n = params.n();
    const double ell = params.ell(), mu = params.mu(), p = params.p(), eps = params.eps();
    const double sqrt_delta = std::sqrt(std::max(params.delta(), 0.0));
    const double T1 = ctx.T1;
    const double fujita_power = (1.0 - mu) / 2.0 + sqrt_delta / 2.0;
    const double strauss_power =
        (-(n - 1) * (ell + 1.0) / 2.0 - (ell + mu) / 2.0) * p + (n - 1) * (ell + 1.0) + 2.0;

    LowerBoundReport rep{
        fit_bound("fujita_U", series, T1, [](const DiagnosticRow& r) { return r.U; },
                  [&](double t) { return eps * std::pow(t, fujita_power); }),
        fit_bound("U0_decay", series, T1, [](const DiagnosticRow& r) { return r.U0; },
                  [&](double t) { return eps * std::pow(t, -ell); }),
        fit_bound("strauss_U", series, T1, [](const DiagnosticRow& r) { return r.U; },
                  [&](double t) { return std::pow(eps, p) * std::pow(t, strauss_power); }),
    };
    return rep;
}

}  // namespace epdt
