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

struct SolverConfig {
    double c_cfl = 0.5;      // dt <= c_cfl dx / max(1, t^ell)
    double c_react = 0.2;    // dt <= c_react / max(1, sup|u|)^{(p-1)/2}
    double U_max = 1e6;      // blow-up threshold on sup|u|
    double dt_min = 1e-12;
    double T_max = 10.0;
    double dx = 0.01;
    double L = 0.0;          // domain radius; 0 selects the smallest admissible value
    int output_stride = 10;  // record every this many steps (when output_dt == 0)
    double output_dt = 0.0;  // > 0: record at t = 1 + k output_dt exactly
    bool nonlinear = true;   // false drops |u|^p (linear runs)

    // Throws ConfigError.
    void validate() const;
};

enum class RunStatus { blew_up, survived, step_underflow };
std::string to_string(RunStatus s);

struct SimResult {
    RunStatus status;
    double T_num;    // first time sup|u| >= U_max; NaN unless blew_up
    double t_final;  // time reached
    long steps;
    DiagnosticSeries series;
    SolverState final_state;
    std::string grid_description;
};

// Smallest L with R + phi_ell(T_max) - phi_ell(1) + 4 dx <= L.
double required_domain_radius(const ModelParams& params, const SolverConfig& config);

// Grid for a run: the configured L (validated against the support cone) or the
// smallest admissible one. Throws ConfigError("domain does not contain support cone").
SpatialGrid make_run_grid(const ModelParams& params, const SolverConfig& config);

struct Derivative {
    std::vector<double> du_dt;
    std::vector<double> dv_dt;
};

// du/dt = v, dv/dt = t^{2 ell} Lap_h u - mu v/t - nu2 u/t^2 + |u|^p, second-order
// central differences, Lap u(0) = n u_rr(0) at the radial origin, outer boundary 0.
Derivative rhs(const SolverState& state, const ModelParams& params, const SpatialGrid& grid,
               bool nonlinear = true);

// dt chosen by the CFL and reaction limiters, capped at T_max - t.
double step_size(const SolverState& state, const SolverConfig& config,
                 const ModelParams& params, const SpatialGrid& grid);

// One classical fourth-order Runge-Kutta step of size step_size(...).
// Throws StepUnderflow when that size is below dt_min.
SolverState step(const SolverState& state, const SolverConfig& config, const ModelParams& params,
                 const SpatialGrid& grid);

// Largest |x| with |u| > tol sup|u|; 0 for the zero state.
double support_radius(const SolverState& state, const SpatialGrid& grid, double tol = 1e-12);

// Integrates from t = 1 with u = eps u0, u_t = eps u1.
SimResult run(const ModelParams& params, const SolverConfig& config, const InitialData& data);
SimResult run(const ModelParams& params, const SolverConfig& config, const SpatialGrid& grid,
              std::span<const double> u0, std::span<const double> u1);

}  // namespace epdt
