#include "epdt/constructions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "epdt/errors.hpp"
#include "epdt/specfun.hpp"

namespace epdt {

namespace {

constexpr double kFdStep = 1e-3;

// r^{-nu} I_nu(r) by its power series; regular at r = 0.
double i_over_power_series(double nu, double r) {
    const double q = 0.25 * r * r;
    double term = std::exp(-nu * M_LN2 - std::lgamma(nu + 1.0));
    double sum = term;
    for (int k = 1; k < 1000; ++k) {
        term *= q / (k * (k + nu));
        sum += term;
        if (term <= 1e-17 * sum) break;
    }
    return sum;
}

void require_positive_time(double s) {
    if (!(s > 0.0)) throw DomainError("time argument must be positive");
}

double log_k_at(const TestFunctionContext& ctx, double order, double s) {
    return specfun::log_bessel_k(order, specfun::phi_ell(ctx.params.ell(), s));
}

}  // namespace

TestFunctionContext TestFunctionContext::without_threshold(const ModelParams& params) {
    params.require_nonnegative_delta();
    const double order = std::sqrt(params.delta()) / (2.0 * (params.ell() + 1.0));
    const double nan = std::numeric_limits<double>::quiet_NaN();
    return {params, order, nan, nan};
}

TestFunctionContext TestFunctionContext::make(const ModelParams& params) {
    auto ctx = without_threshold(params);
    find_T0(ctx);
    return ctx;
}

double log_eigenfunction_phi(int n, double r) {
    if (n < 1) throw DomainError("eigenfunction_phi: n must be >= 1");
    if (!(r >= 0.0)) throw DomainError("eigenfunction_phi: r must be >= 0");
    if (n == 1) return r + std::log1p(std::exp(-2.0 * r));
    const double nu = 0.5 * n - 1.0;
    const double prefactor = 0.5 * n * std::log(2.0 * M_PI);
    if (r <= 1.0) return prefactor + std::log(i_over_power_series(nu, r));
    return prefactor - nu * std::log(r) + specfun::log_bessel_i(nu, r);
}

double eigenfunction_phi(int n, double r) {
    if (n == 1) {
        if (!(r >= 0.0)) throw DomainError("eigenfunction_phi: r must be >= 0");
        return std::exp(r) + std::exp(-r);
    }
    return std::exp(log_eigenfunction_phi(n, r));
}

double log_rho(const TestFunctionContext& ctx, double s) {
    require_positive_time(s);
    return 0.5 * (ctx.params.mu() + 1.0) * std::log(s) + log_k_at(ctx, ctx.order, s);
}

double rho(const TestFunctionContext& ctx, double s) { return std::exp(log_rho(ctx, s)); }

double rho_prime(const TestFunctionContext& ctx, double s) {
    require_positive_time(s);
    const double mu = ctx.params.mu(), ell = ctx.params.ell();
    const double sqrt_delta = std::sqrt(ctx.params.delta());
    const double sigma = specfun::phi_ell(ell, s);
    return -std::pow(s, 0.5 * (mu + 1.0) + ell) * specfun::bessel_k(ctx.order + 1.0, sigma) +
           0.5 * (mu + 1.0 + sqrt_delta) * std::pow(s, 0.5 * (mu - 1.0)) *
               specfun::bessel_k(ctx.order, sigma);
}

double rho_log_derivative(const TestFunctionContext& ctx, double s) {
    require_positive_time(s);
    const double mu = ctx.params.mu(), ell = ctx.params.ell();
    const double sqrt_delta = std::sqrt(ctx.params.delta());
    const double k_ratio =
        std::exp(log_k_at(ctx, ctx.order + 1.0, s) - log_k_at(ctx, ctx.order, s));
    return -std::pow(s, ell) * k_ratio + 0.5 * (mu + 1.0 + sqrt_delta) / s;
}

double log_psi(const TestFunctionContext& ctx, double s, double r) {
    return log_rho(ctx, s) + log_eigenfunction_phi(ctx.params.n(), r);
}

double psi(const TestFunctionContext& ctx, double s, double r) {
    return std::exp(log_psi(ctx, s, r));
}

double check_rho_ode(const TestFunctionContext& ctx, std::span<const double> s_samples) {
    const double ell = ctx.params.ell(), mu = ctx.params.mu(), nu2 = ctx.params.nu2();
    const double h = kFdStep;
    double worst = 0.0;
    for (double s : s_samples) {
        // Everything is divided by rho(s) so that deep underflow of rho is harmless.
        const double l0 = log_rho(ctx, s);
        const double second =
            (std::exp(log_rho(ctx, s + h) - l0) - 2.0 + std::exp(log_rho(ctx, s - h) - l0)) /
            (h * h);
        const double speed2 = std::pow(s, 2.0 * ell);
        const double first = rho_log_derivative(ctx, s);
        const double residual = second - speed2 - mu * first / s + (mu + nu2) / (s * s);
        const double scale = std::max(std::abs(second), speed2);
        worst = std::max(worst, std::abs(residual) / scale);
    }
    return worst;
}

double check_eta_equation(double order, std::span<const double> sigma_samples) {
    double worst = 0.0;
    for (double sigma : sigma_samples) {
        // K varies on the scale sigma near the origin.
        const double h = kFdStep * std::min(1.0, sigma);
        const double l0 = specfun::log_bessel_k(order, sigma);
        const double up = std::exp(specfun::log_bessel_k(order, sigma + h) - l0);
        const double down = std::exp(specfun::log_bessel_k(order, sigma - h) - l0);
        const double second = (up - 2.0 + down) / (h * h);
        const double first = (up - down) / (2.0 * h);
        const double a = sigma * sigma * second;
        const double b = sigma * first;
        const double c = sigma * sigma + order * order;
        const double scale = std::max({std::abs(a), std::abs(b), c});
        worst = std::max(worst, std::abs(a + b - c) / scale);
    }
    return worst;
}

double check_adjoint_pde(const TestFunctionContext& ctx, std::span<const double> s_samples,
                         std::span<const double> r_samples) {
    return check_adjoint_pde(
        ctx, [&ctx](double s, double r) { return psi(ctx, s, r); }, s_samples, r_samples);
}

double check_adjoint_pde(const TestFunctionContext& ctx, const SpaceTimeFunction& test_fn,
                         std::span<const double> s_samples, std::span<const double> r_samples) {
    const int n = ctx.params.n();
    const double ell = ctx.params.ell(), mu = ctx.params.mu(), nu2 = ctx.params.nu2();
    const double h = kFdStep;
    double worst = 0.0;
    for (double s : s_samples) {
        for (double r : r_samples) {
            const double f = test_fn(s, r);
            const double f_ss = (test_fn(s + h, r) - 2.0 * f + test_fn(s - h, r)) / (h * h);
            const double damping =
                mu * (test_fn(s + h, r) / (s + h) - test_fn(s - h, r) / (s - h)) / (2.0 * h);

            double lap = 0.0;
            if (n == 1) {
                // phi is even, so x = r covers the line.
                lap = (test_fn(s, r + h) - 2.0 * f + test_fn(s, std::abs(r - h))) / (h * h);
            } else if (r < 0.5 * h) {
                lap = n * 2.0 * (test_fn(s, h) - f) / (h * h);
            } else {
                const double fp = test_fn(s, r + h), fm = test_fn(s, std::abs(r - h));
                lap = (fp - 2.0 * f + fm) / (h * h) + (n - 1) / r * (fp - fm) / (2.0 * h);
            }
            const double speed2 = std::pow(s, 2.0 * ell);
            const double mass = nu2 * f / (s * s);
            const double residual = f_ss - speed2 * lap - damping + mass;
            const double scale = std::max(
                {std::abs(f_ss), speed2 * std::abs(lap), std::abs(damping), std::abs(mass)});
            if (scale > 0.0) worst = std::max(worst, std::abs(residual) / scale);
        }
    }
    return worst;
}

double rho_band_log_ratio(const TestFunctionContext& ctx, double s) {
    const double ell = ctx.params.ell(), mu = ctx.params.mu();
    const double log_reference = std::log(M_PI * (ell + 1.0)) -
                                 2.0 * specfun::phi_ell(ell, s) + (mu - ell) * std::log(s);
    return 2.0 * log_rho(ctx, s) - log_reference;
}

double find_T0(TestFunctionContext& ctx) {
    constexpr long kStepsPerUnit = 100;  // scan step 0.01
    constexpr double kScanLimit = 1e4;
    const double lower = std::log(0.25);
    auto s_at = [](long i) { return static_cast<double>(kStepsPerUnit + i) / kStepsPerUnit; };
    auto index_of = [](double s) {
        return static_cast<long>(std::ceil(s * kStepsPerUnit - 1e-9)) - kStepsPerUnit;
    };
    auto in_band = [&](long i) {
        const double v = rho_band_log_ratio(ctx, s_at(i));
        return v >= lower && v <= 0.0;
    };

    long candidate = 1;
    long j = candidate;
    while (s_at(candidate) <= kScanLimit) {
        const long last = index_of(10.0 * s_at(candidate));
        if (j > last) {
            ctx.T0 = s_at(candidate);
            ctx.T1 = 2.0 * ctx.T0;
            return ctx.T0;
        }
        if (in_band(j)) {
            ++j;
        } else {
            candidate = j + 1;
            j = candidate;
        }
    }
    std::ostringstream os;
    os << "find_T0: no threshold <= " << kScanLimit << " for ell=" << ctx.params.ell()
       << ", mu=" << ctx.params.mu() << ", nu2=" << ctx.params.nu2();
    throw NotFound(os.str());
}

double bump(double R, double amplitude, double r) {
    const double x = r / R;
    if (x >= 1.0) return 0.0;
    return amplitude * std::exp(1.0 - 1.0 / (1.0 - x * x));
}

std::vector<double> make_bump(double R, double amplitude, const SpatialGrid& grid) {
    if (!(R > 0.0)) throw DomainError("make_bump: R must be > 0");
    return grid.sample([&](double r) { return bump(R, amplitude, r); });
}

std::vector<double> InitialData::sample_u0(const SpatialGrid& grid) const {
    return make_bump(R, amplitude0, grid);
}

std::vector<double> InitialData::sample_u1(const SpatialGrid& grid) const {
    return make_bump(R, amplitude1, grid);
}

void check_sign_condition(const ModelParams& params, const SpatialGrid& grid,
                          std::span<const double> u0, std::span<const double> u1) {
    if (u0.size() != grid.size() || u1.size() != grid.size())
        throw ConfigError("sign condition: sample size mismatch");
    params.require_nonnegative_delta();
    const double r1 = (params.mu() - 1.0 - std::sqrt(params.delta())) / 2.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (u0[i] < 0.0 || u1[i] + r1 * u0[i] < 0.0) {
            std::ostringstream os;
            os << "sign condition u0 >= 0, u1 + ((mu-1-sqrt(delta))/2) u0 >= 0 fails at x = "
               << grid.node(i) << " (u0 = " << u0[i] << ", u1 = " << u1[i] << ")";
            throw SignConditionViolated(os.str());
        }
    }
}

double data_functional(const TestFunctionContext& ctx, const SpatialGrid& grid,
                       std::span<const double> u0, std::span<const double> u1) {
    check_sign_condition(ctx.params, grid, u0, u1);
    const double sigma1 = specfun::phi_ell(ctx.params.ell(), 1.0);
    const double k_hi = specfun::bessel_k(ctx.order + 1.0, sigma1);
    const double k_lo = specfun::bessel_k(ctx.order, sigma1);
    const double r1 = (ctx.params.mu() - 1.0 - std::sqrt(ctx.params.delta())) / 2.0;
    const int n = ctx.params.n();
    std::vector<double> integrand(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double a = k_hi * u0[i] + k_lo * (u1[i] + r1 * u0[i]);
        integrand[i] = a == 0.0 ? 0.0 : a * eigenfunction_phi(n, grid.radius(i));
    }
    return grid.integrate(integrand);
}

}  // namespace epdt
