#include "epdt/iteration.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "epdt/errors.hpp"

namespace epdt {

namespace {

void require_branch_range(const ModelParams& params, Branch branch) {
    params.require_nonnegative_delta();
    const int n = params.n();
    const double ell = params.ell(), mu = params.mu(), p = params.p();
    bool ok = false;
    if (branch == Branch::strauss) {
        ok = p < strauss_exponent(effective_dimension(n, ell, mu), ell) &&
             theta(n, ell, mu, p) > 0.0;
    } else {
        ok = p < fujita_exponent(fujita_argument(n, ell, mu, params.nu2()));
    }
    if (!ok) {
        std::ostringstream os;
        os << "p = " << p << " is outside the " << to_string(branch) << " blow-up range";
        throw EmptyRange(os.str());
    }
}

}  // namespace

Seed initial_exponents(const ModelParams& params, Branch branch, const IterationInputs& in) {
    params.require_nonnegative_delta();
    const int n = params.n();
    const double ell = params.ell(), mu = params.mu(), p = params.p();
    const double log_eps = std::log(params.eps());
    if (branch == Branch::strauss) {
        const double alpha0 = ((n - 1) * (ell + 1.0) / 2.0 + (ell + mu) / 2.0) * p;
        const double beta0 = (n - 1) * (ell + 1.0) + 2.0;
        return {alpha0, beta0, std::log(in.K_str) + p * log_eps, p};
    }
    // U >= I eps t^{s}; the nonnegative part of s goes to beta0.
    const double s = (1.0 - mu) / 2.0 + std::sqrt(params.delta()) / 2.0;
    const double alpha0 = s >= 0.0 ? 0.0 : -s;
    const double beta0 = s >= 0.0 ? s : 0.0;
    return {alpha0, beta0, std::log(in.I_fuj) + log_eps, 1.0};
}

IterationConstants make_iteration_constants(const ModelParams& params, Branch branch,
                                            const IterationInputs& in) {
    if (!(in.C_frame > 0.0) || !(in.K_str > 0.0) || !(in.I_fuj > 0.0) || !(in.C_tilde > 0.0))
        throw ConfigError("iteration constants must be positive");
    if (!(in.T1 > 0.0)) throw ConfigError("T1 must be positive");
    IterationConstants k{};
    k.inputs = in;
    k.branch = branch;
    k.r2 = characteristic_roots(params.mu(), params.nu2()).r2;
    k.seed = initial_exponents(params, branch, in);
    const double p = params.p();
    const double b = (k.r2 + 3.0) / (p - 1.0) + k.seed.beta0;
    k.D = in.C_frame / (b * b);
    const double seed_constant = branch == Branch::strauss ? in.K_str : in.I_fuj;
    k.D_tilde = seed_constant * std::pow(k.D, 1.0 / (p - 1.0)) *
                std::pow(p, -2.0 * p / ((p - 1.0) * (p - 1.0)));
    k.D_hat = std::pow(2.0, -(k.r2 + 3.0) / (p - 1.0) - k.seed.beta0) * k.D_tilde;
    const double j0_real = std::log(k.D) / (2.0 * std::log(p)) - p / (p - 1.0);
    k.j0 = j0_real <= 0.0 ? 0 : static_cast<int>(std::ceil(j0_real));
    return k;
}

IterationRow advance(const IterationRow& row, const ModelParams& params,
                     const IterationConstants& k) {
    const int n = params.n();
    const double ell = params.ell(), p = params.p();
    const double beta_next = k.r2 + 3.0 + p * row.beta;
    return {row.j + 1, k.r2 + 1.0 + n * (ell + 1.0) * (p - 1.0) + p * row.alpha, beta_next,
            std::log(k.inputs.C_frame) + p * row.log_C - 2.0 * std::log(beta_next)};
}

ClosedFormRow closed_form(int j, const ModelParams& params, const IterationConstants& k) {
    if (j < 0) throw DomainError("closed_form: j must be >= 0");
    const int n = params.n();
    const double ell = params.ell(), p = params.p();
    const double a_shift = (k.r2 + 1.0) / (p - 1.0) + n * (ell + 1.0);
    const double b_shift = (k.r2 + 3.0) / (p - 1.0);
    auto beta_at = [&](int i) { return (b_shift + k.seed.beta0) * std::pow(p, i) - b_shift; };

    ClosedFormRow out{};
    const double pj = std::pow(p, j);
    out.alpha = j == 0 ? k.seed.alpha0 : (a_shift + k.seed.alpha0) * pj - a_shift;
    out.beta = j == 0 ? k.seed.beta0 : beta_at(j);
    // log C_j = p^j log C_0 + log C (p^j - 1)/(p - 1) - 2 sum_{i=1}^{j} p^{j-i} log beta_i
    double weighted_logs = 0.0;
    for (int i = 1; i <= j; ++i) weighted_logs += std::pow(p, j - i) * std::log(beta_at(i));
    out.log_C = pj * k.seed.log_C0 + std::log(k.inputs.C_frame) * (pj - 1.0) / (p - 1.0) -
                2.0 * weighted_logs;
    out.log_C_bound = pj * (std::log(k.D_tilde) + k.seed.eps_power * std::log(params.eps()));
    return out;
}

IterationTable build_table(const ModelParams& params, const IterationConstants& k, int j_max) {
    IterationTable table{k.branch, {}};
    table.rows.reserve(static_cast<std::size_t>(j_max) + 1);
    table.rows.push_back({0, k.seed.alpha0, k.seed.beta0, k.seed.log_C0});
    for (int j = 0; j < j_max; ++j) table.rows.push_back(advance(table.rows.back(), params, k));
    return table;
}

double envelope_time_exponent(const ModelParams& params, const IterationConstants& k) {
    const double p = params.p();
    return 2.0 / (p - 1.0) + k.seed.beta0 - k.seed.alpha0 - params.n() * (params.ell() + 1.0);
}

EnvelopeValue envelope(double t, int j, const ModelParams& params, const IterationConstants& k,
                       EnvelopeForm form) {
    const double T1 = k.inputs.T1;
    if (!(t > T1)) throw DomainError("envelope: requires t > T1");
    if (j < 0) throw DomainError("envelope: j must be >= 0");
    const double p = params.p();
    const double pj = std::pow(p, j);
    const double log_eps = std::log(params.eps());

    double log_value = 0.0;
    if (form == EnvelopeForm::exact) {
        const ClosedFormRow row = closed_form(j, params, k);
        log_value = row.log_C_bound - row.alpha * std::log(t) + row.beta * std::log(t - T1);
    } else {
        if (t < 2.0 * T1) throw DomainError("envelope: simplified form requires t >= 2 T1");
        const double a_shift = (k.r2 + 1.0) / (p - 1.0) + params.n() * (params.ell() + 1.0);
        const double b_shift = (k.r2 + 3.0) / (p - 1.0);
        const double log_lead = k.branch == Branch::strauss
                                    ? std::log(k.D_hat) + k.seed.eps_power * log_eps
                                    : std::log(k.inputs.C_tilde) + log_eps;
        const double factor = log_lead + envelope_time_exponent(params, k) * std::log(t);
        log_value = pj * factor + a_shift * std::log(t) - b_shift * std::log(t - T1);
    }
    const double value =
        log_value > 700.0 ? std::numeric_limits<double>::infinity() : std::exp(log_value);
    return {log_value, value};
}

EnvelopeBlowup envelope_blowup_time(const ModelParams& params, const IterationConstants& k) {
    require_branch_range(params, k.branch);
    const double p = params.p();
    const double eps = params.eps();
    const double E = envelope_time_exponent(params, k);
    const double two_T1 = 2.0 * k.inputs.T1;
    EnvelopeBlowup out{};
    if (k.branch == Branch::strauss) {
        out.time = std::pow(k.D_hat * std::pow(eps, p), -1.0 / E);
        out.eps0_bound = std::pow(two_T1, -E) * std::pow(k.D_hat, 1.0 / p);
        out.eps_at_2T1 = std::pow(std::pow(two_T1, -E) / k.D_hat, 1.0 / p);
    } else {
        out.time = std::pow(k.inputs.C_tilde * eps, -1.0 / E);
        out.eps0_bound = std::numeric_limits<double>::quiet_NaN();
        out.eps_at_2T1 = std::pow(two_T1, -E) / k.inputs.C_tilde;
    }
    return out;
}

}  // namespace epdt
