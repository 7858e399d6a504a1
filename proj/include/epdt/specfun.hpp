#pragma once

namespace epdt::specfun {

// Order of a modified Bessel function; finite and nonnegative.
class BesselOrder {
public:
    explicit BesselOrder(double gamma);
    double value() const { return gamma_; }

private:
    double gamma_;
};

struct KValue {
    double value;
    bool underflow;  // true when K < DBL_MIN and value was flushed to 0
};

double gamma_real(double x);

/// Modified Bessel function of the second kind K_gamma(z), real order gamma >= 0, z > 0.
///
/// Evaluated from K_gamma(z) = int_0^inf exp(-z cosh t) cosh(gamma t) dt with a
/// step-halving trapezoid sum on the scaled integrand exp(-z (cosh t - 1)), which
/// converges exponentially for this analytic, rapidly decaying integrand.
double bessel_k(double gamma, double z);
KValue bessel_k_checked(double gamma, double z);
/// exp(z) K_gamma(z); never underflows.
double bessel_k_scaled(double gamma, double z);
/// log K_gamma(z), finite for every z > 0.
double log_bessel_k(double gamma, double z);

/// K'_gamma(z) = -K_{gamma+1}(z) + (gamma/z) K_gamma(z).
double bessel_k_prime(double gamma, double z);

/// Modified Bessel function of the first kind I_gamma(z) by its power series.
double bessel_i(double gamma, double z);
/// exp(-z) I_gamma(z).
double bessel_i_scaled(double gamma, double z);
double log_bessel_i(double gamma, double z);
/// I'_gamma(z) = I_{gamma+1}(z) + (gamma/z) I_gamma(z).
double bessel_i_prime(double gamma, double z);

/// phi_ell(t) = t^{ell+1}/(ell+1), the primitive of the propagation speed t^ell.
double phi_ell(double ell, double t);

}  // namespace epdt::specfun
