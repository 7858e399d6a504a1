#pragma once

#include <vector>

#include "epdt/exponents.hpp"
#include "epdt/params.hpp"

namespace epdt {

// The multiplicative constants hidden in the lower-bound chain. Only prefactors
// depend on them; every scaling exponent is independent of their values.
struct IterationInputs {
    double C_frame = 1.0;  // constant of the iteration frame inequality
    double K_str = 1.0;    // constant of the first Strauss-type lower bound for U
    double I_fuj = 1.0;    // int u0 dx, the Fujita-type seed constant
    double C_tilde = 1.0;  // Fujita-branch envelope constant
    double T1 = 2.0;       // lower end of the window where the bounds hold
};

struct Seed {
    double alpha0;
    double beta0;
    double log_C0;  // log K eps^p (Strauss) or log I eps (Fujita)
    double eps_power;  // p (Strauss) or 1 (Fujita)
};

struct IterationConstants {
    IterationInputs inputs;
    Branch branch;
    double r2;
    Seed seed;
    double D;
    double D_tilde;
    double D_hat;
    int j0;
};

struct IterationRow {
    int j;
    double alpha;
    double beta;
    double log_C;
};

struct ClosedFormRow {
    double alpha;
    double beta;
    double log_C;        // exact unrolled value of the C_j recursion
    double log_C_bound;  // p^j log(D_tilde eps^q), a lower bound for j >= j0
};

struct IterationTable {
    Branch branch;
    std::vector<IterationRow> rows;
};

Seed initial_exponents(const ModelParams& params, Branch branch, const IterationInputs& in);

// Throws NegativeDiscriminant.
IterationConstants make_iteration_constants(const ModelParams& params, Branch branch,
                                            const IterationInputs& in);

// alpha_{j+1} = r2+1+n(ell+1)(p-1)+p alpha_j, beta_{j+1} = r2+3+p beta_j,
// log C_{j+1} = log C + p log C_j - 2 log(r2+3+p beta_j).
IterationRow advance(const IterationRow& row, const ModelParams& params,
                     const IterationConstants& k);

ClosedFormRow closed_form(int j, const ModelParams& params, const IterationConstants& k);

IterationTable build_table(const ModelParams& params, const IterationConstants& k, int j_max);

enum class EnvelopeForm {
    exact,       // bound-of-C_j times t^{-alpha_j} (t - T1)^{beta_j}, t > T1
    simplified,  // log(t - T1) >= log t - log 2 applied, t >= 2 T1
};

struct EnvelopeValue {
    double log_value;
    double value;  // +inf once log_value > 700
};

// Lower bound for U(t) after j iterations. Throws DomainError for t <= T1
// (t < 2 T1 for the simplified form).
EnvelopeValue envelope(double t, int j, const ModelParams& params, const IterationConstants& k,
                       EnvelopeForm form = EnvelopeForm::simplified);

// Coefficient of log t multiplying p^j in the simplified envelope:
// theta/(p-1) for Strauss, 2/(p-1) - (ell+1) n + beta0 - alpha0 for Fujita.
double envelope_time_exponent(const ModelParams& params, const IterationConstants& k);

struct EnvelopeBlowup {
    double time;        // t* where the simplified envelope's exponent factor vanishes
    double eps0_bound;  // (2 T1)^{-theta/(p-1)} D_hat^{1/p} (Strauss); NaN for Fujita
    double eps_at_2T1;  // eps at which t* = 2 T1
};

// Throws EmptyRange when p is outside the branch's range.
EnvelopeBlowup envelope_blowup_time(const ModelParams& params, const IterationConstants& k);

}  // namespace epdt
