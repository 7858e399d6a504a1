#include "epdt/specfun.hpp"

#include <cfloat>
#include <cmath>
#include <sstream>

#include "epdt/errors.hpp"

namespace epdt::specfun {

namespace {

void check_args(const char* who, double gamma, double z) {
    if (!(gamma >= 0.0) || !std::isfinite(gamma) || !(z > 0.0) || !std::isfinite(z)) {
        std::ostringstream os;
        os << who << ": requires order >= 0 and z > 0 (got order " << gamma << ", z " << z
           << ")";
        throw DomainError(os.str());
    }
}

// log of exp(-z (cosh t - 1)) cosh(gamma t); z (cosh t - 1) = 2 z sinh^2(t/2).
double log_k_integrand(double gamma, double z, double t) {
    const double sh = std::sinh(0.5 * t);
    return -2.0 * z * sh * sh + gamma * t + std::log1p(std::exp(-2.0 * gamma * t)) - M_LN2;
}

// log of exp(z) K_gamma(z).
double log_k_scaled(double gamma, double z) {
    // The integrand peaks near z sinh t = gamma tanh(gamma t) ~ gamma.
    const double t_peak = gamma > 0.0 ? std::asinh(gamma / z) : 0.0;
    const double log_peak = log_k_integrand(gamma, z, t_peak);

    // Truncate where the integrand is below exp(-45) of its peak.
    constexpr double kDrop = 45.0;
    double upper = t_peak;
    double inc = 0.05;
    while (log_k_integrand(gamma, z, upper) > log_peak - kDrop) {
        upper += inc;
        inc *= 1.5;
    }

    auto f = [&](double t) { return std::exp(log_k_integrand(gamma, z, t) - log_peak); };

    int n = 16;
    double h = upper / n;
    double sum = 0.5 * f(0.0) + 0.5 * f(upper);
    for (int i = 1; i < n; ++i) sum += f(i * h);
    double value = h * sum;

    constexpr int kMaxIntervals = 1 << 22;
    while (n < kMaxIntervals) {
        double mid = 0.0;
        for (int i = 0; i < n; ++i) mid += f((i + 0.5) * h);
        sum += mid;
        n *= 2;
        h *= 0.5;
        const double refined = h * sum;
        const bool converged = std::abs(refined - value) <= 1e-14 * std::abs(refined);
        value = refined;
        if (converged && n >= 64) break;
    }
    return log_peak + std::log(value);
}

// Direct series, all terms positive.
double i_series(double gamma, double z) {
    const double q = 0.25 * z * z;
    double term = std::exp(gamma * std::log(0.5 * z) - std::lgamma(gamma + 1.0));
    double sum = term;
    for (int k = 1; k < 10000; ++k) {
        term *= q / (k * (k + gamma));
        sum += term;
        if (term <= 1e-17 * sum) break;
    }
    return sum;
}

// log of exp(-z) I_gamma(z) from the series, anchored at its largest term so that
// neither the terms nor the sum overflow.
double log_i_scaled_series(double gamma, double z) {
    const double q = 0.25 * z * z;
    const double k_peak_real = 0.5 * (-(gamma + 2.0) + std::sqrt(gamma * gamma + z * z));
    const long k0 = k_peak_real > 0.0 ? static_cast<long>(std::floor(k_peak_real)) : 0;
    const double log_t0 = (2.0 * k0 + gamma) * std::log(0.5 * z) -
                          std::lgamma(static_cast<double>(k0) + 1.0) -
                          std::lgamma(static_cast<double>(k0) + gamma + 1.0);

    double sum = 1.0;
    double term = 1.0;
    for (long k = k0 + 1;; ++k) {
        term *= q / (static_cast<double>(k) * (k + gamma));
        sum += term;
        if (term <= 1e-17 * sum) break;
    }
    term = 1.0;
    for (long k = k0; k > 0; --k) {
        term *= static_cast<double>(k) * (k + gamma) / q;
        sum += term;
        if (term <= 1e-17 * sum) break;
    }
    return log_t0 + std::log(sum) - z;
}

}  // namespace

BesselOrder::BesselOrder(double gamma) : gamma_(gamma) {
    if (!std::isfinite(gamma) || gamma < 0.0)
        throw DomainError("Bessel order must be finite and nonnegative");
}

double gamma_real(double x) {
    if (!(x > 0.0)) throw DomainError("gamma_real: x must be > 0");
    return std::tgamma(x);
}

double log_bessel_k(double gamma, double z) {
    check_args("bessel_k", gamma, z);
    return log_k_scaled(gamma, z) - z;
}

double bessel_k_scaled(double gamma, double z) {
    check_args("bessel_k", gamma, z);
    return std::exp(log_k_scaled(gamma, z));
}

KValue bessel_k_checked(double gamma, double z) {
    const double lk = log_bessel_k(gamma, z);
    if (lk < std::log(DBL_MIN)) return {0.0, true};
    return {std::exp(lk), false};
}

double bessel_k(double gamma, double z) { return bessel_k_checked(gamma, z).value; }

double bessel_k_prime(double gamma, double z) {
    return -bessel_k(gamma + 1.0, z) + (gamma / z) * bessel_k(gamma, z);
}

double log_bessel_i(double gamma, double z) {
    check_args("bessel_i", gamma, z);
    if (z <= 30.0) return std::log(i_series(gamma, z));
    return log_i_scaled_series(gamma, z) + z;
}

double bessel_i(double gamma, double z) {
    check_args("bessel_i", gamma, z);
    if (z <= 30.0) return i_series(gamma, z);
    return std::exp(log_i_scaled_series(gamma, z) + z);
}

double bessel_i_scaled(double gamma, double z) {
    check_args("bessel_i", gamma, z);
    if (z <= 30.0) return i_series(gamma, z) * std::exp(-z);
    return std::exp(log_i_scaled_series(gamma, z));
}

double bessel_i_prime(double gamma, double z) {
    return bessel_i(gamma + 1.0, z) + (gamma / z) * bessel_i(gamma, z);
}

double phi_ell(double ell, double t) {
    if (ell <= -1.0) throw DomainError("phi_ell: ell must be > -1");
    return std::pow(t, ell + 1.0) / (ell + 1.0);
}

}  // namespace epdt::specfun
