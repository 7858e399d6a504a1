#pragma once

#include <functional>
#include <span>
#include <vector>

#include "epdt/grid.hpp"
#include "epdt/params.hpp"

namespace epdt {

// Time factor rho of the adjoint solution psi(s, x) = rho(s) phi(x), together with
// the threshold T0 beyond which rho^2 sits in its asymptotic band.
struct TestFunctionContext {
    ModelParams params;
    double order;  // sqrt(delta) / (2 (ell + 1)), the Bessel order of rho
    double T0;
    double T1;  // 2 T0

    // Computes the order and scans for T0. Throws NegativeDiscriminant, NotFound.
    static TestFunctionContext make(const ModelParams& params);
    // Order only; T0 = T1 = NaN until find_T0 is called.
    static TestFunctionContext without_threshold(const ModelParams& params);
};

// Positive solution of Lap phi = phi: e^r + e^{-r} for n = 1, the sphere average
// int_{S^{n-1}} e^{x.w} dw = (2 pi)^{n/2} r^{1-n/2} I_{n/2-1}(r) otherwise.
double eigenfunction_phi(int n, double r);
double log_eigenfunction_phi(int n, double r);

double rho(const TestFunctionContext& ctx, double s);
double log_rho(const TestFunctionContext& ctx, double s);
double rho_prime(const TestFunctionContext& ctx, double s);
// rho'(s)/rho(s), evaluated without forming rho.
double rho_log_derivative(const TestFunctionContext& ctx, double s);

double psi(const TestFunctionContext& ctx, double s, double r);
double log_psi(const TestFunctionContext& ctx, double s, double r);

// Largest relative residual of rho'' - s^{2 ell} rho - mu rho'/s + (mu+nu2) rho/s^2
// with rho'' from centered differences (step 1e-3), normalized pointwise by
// max(|rho''|, s^{2 ell} |rho|).
double check_rho_ode(const TestFunctionContext& ctx, std::span<const double> s_samples);

// Largest relative residual of sigma^2 eta'' + sigma eta' - (sigma^2 + order^2) eta
// for eta = K_order, derivatives by centered differences with step 1e-3 min(1, sigma).
double check_eta_equation(double order, std::span<const double> sigma_samples);

using SpaceTimeFunction = std::function<double(double s, double r)>;

// Largest relative residual of
//   psi_ss - s^{2 ell} Lap psi - d/ds(mu psi / s) + nu2 psi / s^2
// on the tensor grid, every derivative by centered differences (radial Laplacian
// for n >= 2). The default test function is the construction psi.
double check_adjoint_pde(const TestFunctionContext& ctx, std::span<const double> s_samples,
                         std::span<const double> r_samples);
double check_adjoint_pde(const TestFunctionContext& ctx, const SpaceTimeFunction& test_fn,
                         std::span<const double> s_samples, std::span<const double> r_samples);

// Smallest scan point s* > 1 (step 0.01) such that
//   (1/4) pi (ell+1) e^{-2 phi_ell(s)} s^{mu-ell} <= rho^2(s) <= pi (ell+1) e^{-2 phi_ell(s)} s^{mu-ell}
// for every scan point in [s*, 10 s*]. Updates ctx.T0 and ctx.T1 = 2 s*.
double find_T0(TestFunctionContext& ctx);

// log(rho^2 / (pi (ell+1) e^{-2 phi_ell(s)} s^{mu-ell})); the band is [log(1/4), 0].
double rho_band_log_ratio(const TestFunctionContext& ctx, double s);

// Smooth compactly supported bump amplitude * exp(1 - 1/(1 - (r/R)^2)) on r < R.
double bump(double R, double amplitude, double r);
std::vector<double> make_bump(double R, double amplitude, const SpatialGrid& grid);

enum class DataKind { bump };

struct InitialData {
    DataKind kind = DataKind::bump;
    double amplitude0 = 1.0;
    double amplitude1 = 0.0;
    double R = 1.0;

    std::vector<double> sample_u0(const SpatialGrid& grid) const;
    std::vector<double> sample_u1(const SpatialGrid& grid) const;
};

// u0 >= 0 and u1 + ((mu-1-sqrt(delta))/2) u0 >= 0 at every node.
// Throws SignConditionViolated naming the first offending node.
void check_sign_condition(const ModelParams& params, const SpatialGrid& grid,
                          std::span<const double> u0, std::span<const double> u1);

// int (K_{order+1}(phi_ell(1)) u0 + K_order(phi_ell(1)) (u1 + r1 u0)) phi dx by the
// grid trapezoid rule. Checks the sign condition first.
double data_functional(const TestFunctionContext& ctx, const SpatialGrid& grid,
                       std::span<const double> u0, std::span<const double> u1);

}  // namespace epdt
