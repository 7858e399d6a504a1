#pragma once

#include <optional>
#include <string>
#include <vector>

#include "epdt/params.hpp"

namespace epdt {

enum class Regime { strauss_dominant, fujita_dominant, tie };
enum class Branch { strauss, fujita };

std::string to_string(Regime r);
std::string to_string(Branch b);

struct Roots {
    double r1;
    double r2;
};

// One lifespan bound T(eps) <= C eps^{-rate}.
struct LifespanRate {
    Branch branch;
    double rate;
    bool binding = false;     // smallest rate among the applicable branches
    bool degenerate = false;  // Strauss branch with an infinite Strauss exponent
};

struct ExponentReport {
    double delta;
    double sqrt_delta;
    double r1;
    double r2;
    double p_strauss;   // may be +inf
    double fujita_arg;  // k = (ell+1) n + (mu-1)/2 - sqrt(delta)/2
    double p_fujita;    // may be +inf
    double p_crit;      // max(p_strauss, p_fujita)
    Regime regime;
    double theta_at_p;
    std::vector<LifespanRate> rates;  // empty when p >= p_crit
};

double compute_delta(double mu, double nu2);

// Roots of r^2 - (mu-1) r + nu2 = 0, r1 <= r2. Throws NegativeDiscriminant.
Roots characteristic_roots(double mu, double nu2);

// Largest root of
//   ((d-1)/2 + ell/(2(ell+1))) p^2 - ((d+1)/2 - 3 ell/(2(ell+1))) p - 1 = 0,
// +inf when the leading coefficient is not positive. d may be non-integer.
double strauss_exponent(double d, double ell);

// 1 + 2/k, or +inf for k <= 0.
double fujita_exponent(double k);

double effective_dimension(int n, double ell, double mu);
double fujita_argument(int n, double ell, double mu, double nu2);

double theta(int n, double ell, double mu, double p);

double quasi_homogeneous_dimension(int n, double ell);

// Lifespan rates. Throws EmptyRange when p >= p_crit, NegativeDiscriminant
// when delta < 0.
std::vector<LifespanRate> lifespan_rates(const ModelParams& params);

// Rate of the binding branch.
LifespanRate binding_rate(const ModelParams& params);

ExponentReport critical_exponent(const ModelParams& params);

}  // namespace epdt
