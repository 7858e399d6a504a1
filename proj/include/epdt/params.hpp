#pragma once

namespace epdt {

// One instance of
//   u_tt - t^{2 ell} Lap u + mu t^{-1} u_t + nu2 t^{-2} u = |u|^p,   t >= 1,
//   u(1) = eps u0,  u_t(1) = eps u1,  supp u0, u1 in B_R.
// Construction validates every field; delta = (mu-1)^2 - 4 nu2 is computed once.
class ModelParams {
public:
    ModelParams(int n, double ell, double mu, double nu2, double p, double eps = 1.0,
                double R = 1.0);

    int n() const { return n_; }
    double ell() const { return ell_; }
    double mu() const { return mu_; }
    double nu2() const { return nu2_; }
    double p() const { return p_; }
    double eps() const { return eps_; }
    double R() const { return R_; }
    double delta() const { return delta_; }

    // Throws NegativeDiscriminant when delta < 0.
    void require_nonnegative_delta() const;

    ModelParams with_eps(double eps) const;
    ModelParams with_p(double p) const;

private:
    int n_;
    double ell_, mu_, nu2_, p_, eps_, R_;
    double delta_;
};

}  // namespace epdt
