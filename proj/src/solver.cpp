#include "epdt/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "epdt/diagnostics.hpp"
#include "epdt/errors.hpp"
#include "epdt/specfun.hpp"

namespace epdt {

void SolverConfig::validate() const {
    std::ostringstream err;
    if (!(c_cfl > 0.0 && c_cfl <= 1.0)) err << "c_cfl must be in (0, 1]; ";
    if (!(c_react > 0.0)) err << "c_react must be > 0; ";
    if (!(U_max > 0.0)) err << "U_max must be > 0; ";
    if (!(dt_min > 0.0)) err << "dt_min must be > 0; ";
    if (!(T_max > 1.0) || !std::isfinite(T_max)) err << "T_max must be finite and > 1; ";
    if (!(dx > 0.0)) err << "dx must be > 0; ";
    if (!(L >= 0.0)) err << "L must be >= 0 (0 = automatic); ";
    if (output_stride < 1) err << "output_stride must be >= 1; ";
    if (!(output_dt >= 0.0)) err << "output_dt must be >= 0; ";
    if (!err.str().empty()) throw ConfigError("invalid solver config: " + err.str());
}

std::string to_string(RunStatus s) {
    switch (s) {
        case RunStatus::blew_up: return "blew_up";
        case RunStatus::survived: return "survived";
        case RunStatus::step_underflow: return "step_underflow";
    }
    return "?";
}

double required_domain_radius(const ModelParams& params, const SolverConfig& config) {
    const double ell = params.ell();
    return params.R() + specfun::phi_ell(ell, config.T_max) - specfun::phi_ell(ell, 1.0) +
           4.0 * config.dx;
}

SpatialGrid make_run_grid(const ModelParams& params, const SolverConfig& config) {
    config.validate();
    const double need = required_domain_radius(params, config);
    double L = config.L;
    if (L == 0.0) {
        L = std::ceil(need / config.dx) * config.dx;
    } else if (L < need) {
        std::ostringstream os;
        os << "domain does not contain support cone: L = " << L << " < R + phi(T_max) - phi(1) + 4 dx = "
           << need;
        throw ConfigError(os.str());
    }
    return SpatialGrid::for_dimension(params.n(), L, config.dx);
}

namespace {

// Method-of-lines right-hand side and RK4 driver restricted to the nodes that can
// be nonzero. Nodes outside the active window hold exact zeros, for which the
// right-hand side is exactly zero, so the restriction does not change any value.
class Integrator {
public:
    Integrator(const ModelParams& params, const SpatialGrid& grid, bool nonlinear)
        : params_(params), grid_(grid), nonlinear_(nonlinear), N_(grid.size()) {
        const double dx = grid.dx();
        const double inv2 = 1.0 / (dx * dx);
        cp_.assign(N_, inv2);
        cm_.assign(N_, inv2);
        c0_.assign(N_, -2.0 * inv2);
        radial_ = grid.geometry() == Geometry::radial;
        if (radial_) {
            const int n = grid.dimension();
            for (std::size_t i = 1; i < N_; ++i) {
                const double drift = (n - 1) / (grid.node(i) * 2.0 * dx);
                cp_[i] += drift;
                cm_[i] -= drift;
            }
            // Lap u(0) = n u_rr(0) with the ghost value u(-dx) = u(dx).
            cp_[0] = 2.0 * n * inv2;
            cm_[0] = 0.0;
            c0_[0] = -2.0 * n * inv2;
            first_ = 0;
        } else {
            first_ = 1;
        }
        last_ = N_ - 2;
        for (auto* a : {&k1u_, &k1v_, &k2u_, &k2v_, &k3u_, &k3v_, &k4u_, &k4v_, &tu_, &tv_})
            a->assign(N_, 0.0);
        p_ = params.p();
        p_int_ = (p_ == 2.0) ? 2 : (p_ == 3.0 ? 3 : 0);
    }

    void reset_window(const SolverState& s) {
        lo_ = last_;
        hi_ = first_;
        bool any = false;
        for (std::size_t i = first_; i <= last_; ++i) {
            if (s.u[i] != 0.0 || s.v[i] != 0.0) {
                lo_ = std::min(lo_, i);
                hi_ = std::max(hi_, i);
                any = true;
            }
        }
        if (!any) {
            const std::size_t c = radial_ ? 0 : N_ / 2;
            lo_ = hi_ = c;
        }
        if (radial_) lo_ = 0;
    }

    // Window of nodes that can become nonzero during one four-stage step.
    NodeRange compute_window() const {
        const std::size_t lo = lo_ >= first_ + 4 ? lo_ - 4 : first_;
        const std::size_t hi = std::min(hi_ + 4, last_);
        return {lo, hi};
    }

    NodeRange window() const { return {lo_, hi_}; }

    double nonlinearity(double u) const {
        if (!nonlinear_ || u == 0.0) return 0.0;
        const double a = std::abs(u);
        if (p_int_ == 2) return a * a;
        if (p_int_ == 3) return a * a * a;
        return std::pow(a, p_);
    }

    void eval(double t, const std::vector<double>& u, const std::vector<double>& v,
              std::vector<double>& du, std::vector<double>& dv, NodeRange w) const {
        const double speed2 = std::pow(t, 2.0 * params_.ell());
        const double damp = params_.mu() / t;
        const double mass = params_.nu2() / (t * t);
        std::size_t i = w.lo;
        if (radial_ && i == 0) {
            const double lap = cp_[0] * u[1] + c0_[0] * u[0];
            du[0] = v[0];
            dv[0] = speed2 * lap - damp * v[0] - mass * u[0] + nonlinearity(u[0]);
            ++i;
        }
        for (; i <= w.hi; ++i) {
            const double lap = cp_[i] * u[i + 1] + c0_[i] * u[i] + cm_[i] * u[i - 1];
            du[i] = v[i];
            dv[i] = speed2 * lap - damp * v[i] - mass * u[i] + nonlinearity(u[i]);
        }
    }

    Derivative full_rhs(const SolverState& s) const {
        Derivative d{std::vector<double>(N_, 0.0), std::vector<double>(N_, 0.0)};
        eval(s.t, s.u, s.v, d.du_dt, d.dv_dt, {first_, last_});
        return d;
    }

    void rk4(SolverState& s, double dt) {
        const NodeRange w = compute_window();
        const double t = s.t;
        auto stage = [&](const std::vector<double>& ku, const std::vector<double>& kv, double c) {
            for (std::size_t i = w.lo; i <= w.hi; ++i) {
                tu_[i] = s.u[i] + c * ku[i];
                tv_[i] = s.v[i] + c * kv[i];
            }
        };
        eval(t, s.u, s.v, k1u_, k1v_, w);
        stage(k1u_, k1v_, 0.5 * dt);
        eval(t + 0.5 * dt, tu_, tv_, k2u_, k2v_, w);
        stage(k2u_, k2v_, 0.5 * dt);
        eval(t + 0.5 * dt, tu_, tv_, k3u_, k3v_, w);
        stage(k3u_, k3v_, dt);
        eval(t + dt, tu_, tv_, k4u_, k4v_, w);
        const double c = dt / 6.0;
        for (std::size_t i = w.lo; i <= w.hi; ++i) {
            s.u[i] += c * (k1u_[i] + 2.0 * k2u_[i] + 2.0 * k3u_[i] + k4u_[i]);
            s.v[i] += c * (k1v_[i] + 2.0 * k2v_[i] + 2.0 * k3v_[i] + k4v_[i]);
        }
        s.t = t + dt;
        // The window only grows, so scratch entries outside it stay zero.
        for (std::size_t i = w.lo; i < lo_; ++i)
            if (s.u[i] != 0.0 || s.v[i] != 0.0) {
                lo_ = i;
                break;
            }
        for (std::size_t i = w.hi; i > hi_; --i)
            if (s.u[i] != 0.0 || s.v[i] != 0.0) {
                hi_ = i;
                break;
            }
    }

    double sup_norm(const SolverState& s) const {
        double m = 0.0;
        for (std::size_t i = lo_; i <= hi_; ++i) {
            const double a = std::abs(s.u[i]);
            if (!(a <= m)) m = a;  // propagates NaN
        }
        return m;
    }

private:
    const ModelParams& params_;
    const SpatialGrid& grid_;
    bool nonlinear_;
    bool radial_ = false;
    std::size_t N_;
    std::size_t first_ = 0, last_ = 0;
    std::size_t lo_ = 0, hi_ = 0;
    double p_;
    int p_int_;
    std::vector<double> cp_, cm_, c0_;
    std::vector<double> k1u_, k1v_, k2u_, k2v_, k3u_, k3v_, k4u_, k4v_, tu_, tv_;
};

double sup_abs(std::span<const double> u) {
    double m = 0.0;
    for (double x : u) {
        const double a = std::abs(x);
        if (!(a <= m)) m = a;
    }
    return m;
}

double limited_step(double t, double sup, const SolverConfig& config, const ModelParams& params,
                    double dx) {
    const double speed = std::pow(t, params.ell());
    const double cfl = config.c_cfl * dx / std::max(1.0, speed);
    const double react =
        config.c_react / std::pow(std::max(1.0, sup), 0.5 * (params.p() - 1.0));
    const double dt = std::min(cfl, react);
    // Absorb a rounding-level remainder into the final step instead of leaving a sliver.
    const double rest = config.T_max - t;
    return rest <= dt * (1.0 + 1e-6) ? rest : dt;
}

void check_state(const SolverState& s, const SpatialGrid& grid) {
    if (s.u.size() != grid.size() || s.v.size() != grid.size())
        throw ConfigError("solver state does not match the grid");
}

}  // namespace

Derivative rhs(const SolverState& state, const ModelParams& params, const SpatialGrid& grid,
               bool nonlinear) {
    check_state(state, grid);
    Integrator integ(params, grid, nonlinear);
    return integ.full_rhs(state);
}

double step_size(const SolverState& state, const SolverConfig& config, const ModelParams& params,
                 const SpatialGrid& grid) {
    return limited_step(state.t, sup_abs(state.u), config, params, grid.dx());
}

SolverState step(const SolverState& state, const SolverConfig& config, const ModelParams& params,
                 const SpatialGrid& grid) {
    check_state(state, grid);
    const double dt = step_size(state, config, params, grid);
    if (dt < config.dt_min) {
        std::ostringstream os;
        os << "step size " << dt << " below dt_min at t = " << state.t;
        throw StepUnderflow(os.str());
    }
    Integrator integ(params, grid, config.nonlinear);
    SolverState next = state;
    integ.reset_window(next);
    integ.rk4(next, dt);
    if (dt >= config.T_max - state.t) next.t = config.T_max;
    return next;
}

double support_radius(const SolverState& state, const SpatialGrid& grid, double tol) {
    check_state(state, grid);
    const double sup = sup_abs(state.u);
    if (sup == 0.0) return 0.0;
    double r = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i)
        if (std::abs(state.u[i]) > tol * sup) r = std::max(r, grid.radius(i));
    return r;
}

SimResult run(const ModelParams& params, const SolverConfig& config, const InitialData& data) {
    const SpatialGrid grid = make_run_grid(params, config);
    return run(params, config, grid, data.sample_u0(grid), data.sample_u1(grid));
}

SimResult run(const ModelParams& params, const SolverConfig& config, const SpatialGrid& grid,
              std::span<const double> u0, std::span<const double> u1) {
    config.validate();
    if (grid.dimension() != params.n()) throw ConfigError("grid dimension differs from n");
    if (std::abs(grid.dx() - config.dx) > 1e-12 * config.dx)
        throw ConfigError("grid spacing differs from config dx");
    if (grid.L() < required_domain_radius(params, config) - 1e-9 * grid.L())
        throw ConfigError("domain does not contain support cone");
    if (u0.size() != grid.size() || u1.size() != grid.size())
        throw ConfigError("initial data do not match the grid");

    std::optional<TestFunctionContext> ctx;
    if (params.delta() >= 0.0) ctx = TestFunctionContext::without_threshold(params);

    SimResult res{RunStatus::survived, std::numeric_limits<double>::quiet_NaN(), 1.0, 0, {}, {},
                  grid.describe()};
    SolverState s;
    s.t = 1.0;
    s.u.resize(grid.size());
    s.v.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        s.u[i] = params.eps() * u0[i];
        s.v[i] = params.eps() * u1[i];
    }
    // Outer boundary nodes are held at zero.
    s.u.front() = s.u.back() = s.v.front() = s.v.back() = 0.0;
    if (grid.geometry() == Geometry::radial) s.u.front() = params.eps() * u0[0],
                                             s.v.front() = params.eps() * u1[0];

    Integrator integ(params, grid, config.nonlinear);
    integ.reset_window(s);

    auto record = [&](const SolverState& st, double sup) {
        const NodeRange w = integ.window();
        DiagnosticRow row{};
        row.t = st.t;
        row.sup_norm = sup;
        row.U = average_U(st.u, grid, w);
        row.U0 = ctx ? average_U0(st.u, st.t, grid, *ctx, w)
                     : std::numeric_limits<double>::quiet_NaN();
        row.nonlinear_mass = nonlinear_mass(st.u, params.p(), grid, w);
        double r = 0.0;
        if (sup > 0.0)
            for (std::size_t i = w.lo; i <= w.hi; ++i)
                if (std::abs(st.u[i]) > 1e-12 * sup) r = std::max(r, grid.radius(i));
        row.support_radius = r;
        if (res.series.empty() || row.t > res.series.back().t) res.series.push_back(row);
    };

    double sup = integ.sup_norm(s);
    record(s, sup);
    long k_out = 1;
    auto next_output_time = [&]() { return 1.0 + static_cast<double>(k_out) * config.output_dt; };

    while (true) {
        if (!(sup < config.U_max)) {  // NaN counts as blow-up
            res.status = RunStatus::blew_up;
            res.T_num = s.t;
            break;
        }
        if (s.t >= config.T_max) {
            res.status = RunStatus::survived;
            break;
        }
        double dt = limited_step(s.t, sup, config, params, grid.dx());
        bool on_output = false;
        if (config.output_dt > 0.0) {
            const double gap = next_output_time() - s.t;
            if (gap <= dt * (1.0 + 1e-6)) {  // no sliver steps from accumulated rounding
                dt = gap;
                on_output = true;
            }
        }
        if (dt < config.dt_min) {
            res.status = RunStatus::step_underflow;
            break;
        }
        const bool to_horizon = dt >= config.T_max - s.t;
        integ.rk4(s, dt);
        ++res.steps;
        if (to_horizon) s.t = config.T_max;
        if (on_output) {
            // Snap to the output grid so that sample spacing is exactly uniform.
            s.t = next_output_time();
            ++k_out;
        }
        if (s.t > config.T_max) s.t = config.T_max;
        sup = integ.sup_norm(s);
        const bool stride_hit = config.output_dt == 0.0 && res.steps % config.output_stride == 0;
        if (on_output || stride_hit) record(s, sup);
    }
    record(s, sup);
    res.t_final = s.t;
    res.final_state = std::move(s);
    return res;
}

}  // namespace epdt
