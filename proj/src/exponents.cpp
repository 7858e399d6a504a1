#include "epdt/exponents.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "epdt/errors.hpp"

namespace epdt {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

bool valid_real(double x) { return std::isfinite(x); }
}  // namespace

ModelParams::ModelParams(int n, double ell, double mu, double nu2, double p, double eps,
                         double R)
    : n_(n), ell_(ell), mu_(mu), nu2_(nu2), p_(p), eps_(eps), R_(R) {
    std::ostringstream err;
    if (n < 1) err << "n must be >= 1 (got " << n << "); ";
    if (!valid_real(ell) || ell <= -1.0) err << "ell must be > -1 (got " << ell << "); ";
    if (!valid_real(mu) || mu < 0.0) err << "mu must be >= 0 (got " << mu << "); ";
    if (!valid_real(nu2) || nu2 < 0.0) err << "nu2 must be >= 0 (got " << nu2 << "); ";
    if (!valid_real(p) || p <= 1.0) err << "p must be > 1 (got " << p << "); ";
    // eps = 0 is accepted so that the trivial solution can be simulated.
    if (!valid_real(eps) || eps < 0.0) err << "eps must be >= 0 (got " << eps << "); ";
    if (!valid_real(R) || R <= 0.0) err << "R must be > 0 (got " << R << "); ";
    if (!err.str().empty()) throw ConfigError("invalid model parameters: " + err.str());
    delta_ = compute_delta(mu, nu2);
}

void ModelParams::require_nonnegative_delta() const {
    if (delta_ < 0.0) {
        std::ostringstream os;
        os << "delta negative: (mu-1)^2 - 4 nu2 = " << delta_
           << " < 0 violates the blow-up hypothesis delta >= 0";
        throw NegativeDiscriminant(os.str());
    }
}

ModelParams ModelParams::with_eps(double eps) const {
    return ModelParams(n_, ell_, mu_, nu2_, p_, eps, R_);
}

ModelParams ModelParams::with_p(double p) const {
    return ModelParams(n_, ell_, mu_, nu2_, p, eps_, R_);
}

std::string to_string(Regime r) {
    switch (r) {
        case Regime::strauss_dominant: return "strauss-dominant";
        case Regime::fujita_dominant: return "fujita-dominant";
        case Regime::tie: return "tie";
    }
    return "?";
}

std::string to_string(Branch b) { return b == Branch::strauss ? "strauss" : "fujita"; }

double compute_delta(double mu, double nu2) { return (mu - 1.0) * (mu - 1.0) - 4.0 * nu2; }

Roots characteristic_roots(double mu, double nu2) {
    const double delta = compute_delta(mu, nu2);
    if (delta < 0.0) throw NegativeDiscriminant("characteristic roots: delta < 0");
    const double s = std::sqrt(delta);
    return {(mu - 1.0 - s) / 2.0, (mu - 1.0 + s) / 2.0};
}

double strauss_exponent(double d, double ell) {
    if (ell <= -1.0) throw DomainError("strauss_exponent: ell must be > -1");
    if (!(d > 0.0)) throw DomainError("strauss_exponent: dimension must be > 0");
    const double a = (d - 1.0) / 2.0 + ell / (2.0 * (ell + 1.0));
    const double b = (d + 1.0) / 2.0 - 3.0 * ell / (2.0 * (ell + 1.0));
    // A leading coefficient that cancels to rounding level is treated as zero.
    const double scale = std::abs(d - 1.0) / 2.0 + std::abs(ell) / (2.0 * (ell + 1.0));
    if (a <= 16.0 * std::numeric_limits<double>::epsilon() * scale) return kInf;
    // a p^2 - b p - 1 = 0 with a > 0: roots have product -1/a < 0, so the
    // largest root is positive. Use the cancellation-free branch.
    const double disc = std::sqrt(b * b + 4.0 * a);
    if (b >= 0.0) return (b + disc) / (2.0 * a);
    return -2.0 / (b - disc);
}

double fujita_exponent(double k) { return k > 0.0 ? 1.0 + 2.0 / k : kInf; }

double effective_dimension(int n, double ell, double mu) { return n + mu / (ell + 1.0); }

double fujita_argument(int n, double ell, double mu, double nu2) {
    const double delta = compute_delta(mu, nu2);
    if (delta < 0.0) throw NegativeDiscriminant("fujita_argument: delta < 0");
    return (ell + 1.0) * n + (mu - 1.0) / 2.0 - std::sqrt(delta) / 2.0;
}

double theta(int n, double ell, double mu, double p) {
    const double lin = (n + 1) * (ell + 1.0) / 2.0 + (mu - 3.0 * ell) / 2.0;
    const double quad = (n - 1) * (ell + 1.0) / 2.0 + (ell + mu) / 2.0;
    return ell + 1.0 + lin * p - quad * p * p;
}

double quasi_homogeneous_dimension(int n, double ell) {
    if (ell <= -1.0) throw DomainError("quasi_homogeneous_dimension: ell must be > -1");
    return (ell + 1.0) * n + 1.0;
}

std::vector<LifespanRate> lifespan_rates(const ModelParams& params) {
    params.require_nonnegative_delta();
    const int n = params.n();
    const double ell = params.ell(), mu = params.mu(), p = params.p();
    const double p_str = strauss_exponent(effective_dimension(n, ell, mu), ell);
    const double k = fujita_argument(n, ell, mu, params.nu2());
    const double p_fuj = fujita_exponent(k);

    std::vector<LifespanRate> rates;
    if (p < p_str) {
        const double th = theta(n, ell, mu, p);
        // With an infinite Strauss exponent theta can still vanish; only a
        // positive theta yields a finite rate.
        if (th > 0.0) {
            rates.push_back({Branch::strauss, p * (p - 1.0) / th, false, std::isinf(p_str)});
        }
    }
    if (p < p_fuj) {
        const double denom = 2.0 / (p - 1.0) - k;
        if (denom > 0.0) rates.push_back({Branch::fujita, 1.0 / denom, false, false});
    }
    if (rates.empty()) {
        std::ostringstream os;
        os << "no blow-up branch applies: p = " << p << " >= p_crit = " << std::max(p_str, p_fuj);
        throw EmptyRange(os.str());
    }
    auto best = std::min_element(rates.begin(), rates.end(),
                                 [](const auto& a, const auto& b) { return a.rate < b.rate; });
    best->binding = true;
    return rates;
}

LifespanRate binding_rate(const ModelParams& params) {
    for (const auto& r : lifespan_rates(params))
        if (r.binding) return r;
    throw EmptyRange("no binding rate");
}

ExponentReport critical_exponent(const ModelParams& params) {
    params.require_nonnegative_delta();
    ExponentReport rep{};
    const int n = params.n();
    const double ell = params.ell(), mu = params.mu(), nu2 = params.nu2();
    rep.delta = params.delta();
    rep.sqrt_delta = std::sqrt(rep.delta);
    const Roots roots = characteristic_roots(mu, nu2);
    rep.r1 = roots.r1;
    rep.r2 = roots.r2;
    rep.p_strauss = strauss_exponent(effective_dimension(n, ell, mu), ell);
    rep.fujita_arg = fujita_argument(n, ell, mu, nu2);
    rep.p_fujita = fujita_exponent(rep.fujita_arg);
    rep.p_crit = std::max(rep.p_strauss, rep.p_fujita);

    if (std::isinf(rep.p_strauss) && std::isinf(rep.p_fujita)) {
        rep.regime = Regime::tie;
    } else if (std::abs(rep.p_strauss - rep.p_fujita) <= 1e-12 * std::max(1.0, rep.p_crit)) {
        rep.regime = Regime::tie;
    } else {
        rep.regime = rep.p_strauss > rep.p_fujita ? Regime::strauss_dominant
                                                  : Regime::fujita_dominant;
    }
    rep.theta_at_p = theta(n, ell, mu, params.p());
    try {
        rep.rates = lifespan_rates(params);
    } catch (const EmptyRange&) {
        rep.rates.clear();
    }
    return rep;
}

}  // namespace epdt
