#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "epdt/errors.hpp"
#include "epdt/solver.hpp"
#include "epdt/specfun.hpp"
#include "oracles.hpp"

using namespace epdt;

namespace {
// Blow-up time of the regression case at dx = 0.0025.
constexpr double kRegressionT = 4.3009304361235365;

double sup_abs(const std::vector<double>& u) {
    double m = 0;
    for (double x : u) m = std::max(m, std::abs(x));
    return m;
}

SolverState bump_state(const SpatialGrid& g, double A, double t = 1.0) {
    SolverState s;
    s.t = t;
    s.u = g.sample([&](double r) { return oracle::bump(1.0, A, r); });
    s.v.assign(g.size(), 0.0);
    return s;
}

// Discrete energy int (v^2 + |grad_h u|^2) on a line grid.
double energy(const SolverState& s, double dx) {
    double e = 0;
    for (std::size_t i = 0; i < s.u.size(); ++i) e += s.v[i] * s.v[i] * dx;
    for (std::size_t i = 0; i + 1 < s.u.size(); ++i) {
        const double g = (s.u[i + 1] - s.u[i]) / dx;
        e += g * g * dx;
    }
    return e;
}

double energy_drift(double c_cfl) {
    const ModelParams m(1, 0, 0, 0, 2);
    SolverConfig c;
    c.dx = 0.02;
    c.c_cfl = c_cfl;
    c.T_max = 3.0;
    c.nonlinear = false;
    const SpatialGrid g = make_run_grid(m, c);
    SolverState s = bump_state(g, 1.0);
    const double e0 = energy(s, c.dx);
    while (s.t < c.T_max) s = step(s, c, m, g);
    return std::abs(energy(s, c.dx) - e0);
}
}  // namespace

TEST_CASE("config validation") {
    SolverConfig c;
    CHECK_NOTHROW(c.validate());
    c.c_cfl = 0;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = {};
    c.c_cfl = 1.5;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = {};
    c.dx = -1;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = {};
    c.T_max = 0.5;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = {};
    c.U_max = 0;
    CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("domain sizing") {
    const ModelParams m(1, 1, 2, 0, 2, 0.1, 1.5);
    SolverConfig c;
    c.T_max = 4;
    c.dx = 0.01;
    CHECK(required_domain_radius(m, c) == doctest::Approx(1.5 + 8 - 0.5 + 0.04).epsilon(1e-14));
    const SpatialGrid g = make_run_grid(m, c);
    CHECK(g.L() >= required_domain_radius(m, c));
    CHECK(g.L() < required_domain_radius(m, c) + c.dx + 1e-12);
    c.L = 5;
    try {
        make_run_grid(m, c);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("domain does not contain support cone") != std::string::npos);
    }
    CHECK_THROWS_AS(run(m, c, InitialData{}), ConfigError);
    c.L = 12;
    CHECK(make_run_grid(m, c).L() == doctest::Approx(12.0));
}

TEST_CASE("rhs examples") {
    SUBCASE("zero state") {
        for (int n : {1, 3}) {
            const ModelParams m(n, 0.5, 2, 0.3, 2);
            const SpatialGrid g = SpatialGrid::for_dimension(n, 3, 0.05);
            SolverState s;
            s.t = 2.0;
            s.u.assign(g.size(), 0.0);
            s.v.assign(g.size(), 0.0);
            const Derivative d = rhs(s, m, g);
            CHECK(sup_abs(d.du_dt) == 0.0);
            CHECK(sup_abs(d.dv_dt) == 0.0);
        }
    }
    SUBCASE("constant state away from the edges") {
        const double c = 0.7, t = 1.5, nu2 = 0.6;
        const ModelParams m(1, 0.3, 2.0, nu2, 2.5);
        const SpatialGrid g = SpatialGrid::line(4, 0.05);
        SolverState s;
        s.t = t;
        s.u.resize(g.size());
        for (std::size_t i = 0; i < g.size(); ++i) s.u[i] = std::abs(g.node(i)) < 2 ? c : 0.0;
        s.v.assign(g.size(), 0.0);
        const Derivative d = rhs(s, m, g);
        for (std::size_t i = 0; i < g.size(); ++i)
            if (std::abs(g.node(i)) < 1.8)
                CHECK(d.dv_dt[i] == doctest::Approx(-nu2 * c / (t * t) + std::pow(c, 2.5)).epsilon(1e-13));
    }
    SUBCASE("discrete cosine eigenvalue") {
        const double dx = 0.05, k = 3.0, t = 1.7;
        const ModelParams m(1, 0.5, 0, 0, 2);
        const SpatialGrid g = SpatialGrid::line(5, dx);
        SolverState s;
        s.t = t;
        s.u.resize(g.size());
        for (std::size_t i = 0; i < g.size(); ++i) s.u[i] = std::cos(k * g.node(i));
        s.v.assign(g.size(), 0.25);
        const Derivative d = rhs(s, m, g, false);
        const double lambda = -4 / (dx * dx) * std::pow(std::sin(k * dx / 2), 2);
        for (std::size_t i = 1; i + 1 < g.size(); ++i) {
            CHECK(d.dv_dt[i] == doctest::Approx(t * lambda * s.u[i]).epsilon(1e-9).scale(1));
            CHECK(d.du_dt[i] == 0.25);
        }
        CHECK(d.dv_dt.front() == 0.0);
        CHECK(d.dv_dt.back() == 0.0);
    }
    SUBCASE("radial origin uses n u_rr") {
        // u = 1 - r^2 near the origin: Lap u = -2n exactly.
        for (int n : {2, 3, 5}) {
            const ModelParams m(n, 0, 0, 0, 2);
            const SpatialGrid g = SpatialGrid::radial(n, 2, 0.1);
            SolverState s;
            s.u.resize(g.size());
            for (std::size_t i = 0; i < g.size(); ++i) s.u[i] = 1 - g.node(i) * g.node(i);
            s.v.assign(g.size(), 0.0);
            const Derivative d = rhs(s, m, g, false);
            CHECK(d.dv_dt[0] == doctest::Approx(-2.0 * n).epsilon(1e-12));
            for (std::size_t i = 1; i + 1 < g.size(); ++i) CHECK(d.dv_dt[i] == doctest::Approx(-2.0 * n).epsilon(1e-10));
        }
    }
}

TEST_CASE("step") {
    const ModelParams m(1, 0, 0, 0, 3);
    SolverConfig c;
    c.dx = 0.02;
    c.T_max = 5;
    const SpatialGrid g = make_run_grid(m, c);
    SUBCASE("zero state is a fixed point") {
        SolverState s;
        s.u.assign(g.size(), 0.0);
        s.v.assign(g.size(), 0.0);
        const SolverState s1 = step(s, c, m, g);
        CHECK(s1.t == doctest::Approx(1 + 0.5 * 0.02).epsilon(1e-15));
        CHECK(sup_abs(s1.u) == 0.0);
        CHECK(sup_abs(s1.v) == 0.0);
    }
    SUBCASE("dt is monotone in sup|u|") {
        double prev = INFINITY;
        for (double A : {0.5, 1.0, 3.0, 10.0, 100.0, 1e4}) {
            const double dt = step_size(bump_state(g, A), c, m, g);
            CHECK(dt <= prev);
            CHECK(dt == doctest::Approx(std::min(c.c_cfl * c.dx, c.c_react / std::max(1.0, A))).epsilon(1e-12));
            prev = dt;
        }
    }
    SUBCASE("dt law with speed and horizon") {
        const ModelParams fast(1, 1, 0, 0, 2);
        SolverConfig cf = c;
        SolverState s = bump_state(g, 0.1, 4.0);
        CHECK(step_size(s, cf, fast, g) == doctest::Approx(0.5 * 0.02 / 4).epsilon(1e-14));
        s.t = 5 - 1e-4;
        CHECK(step_size(s, cf, fast, g) == doctest::Approx(1e-4).epsilon(1e-8));
    }
    SUBCASE("underflow") {
        SolverConfig cu = c;
        cu.dt_min = 1e-3;
        CHECK_THROWS_AS(step(bump_state(g, 1e6), cu, m, g), StepUnderflow);
    }
    SUBCASE("deterministic") {
        const SolverState a = step(bump_state(g, 2), c, m, g);
        const SolverState b = step(bump_state(g, 2), c, m, g);
        CHECK(a.u == b.u);
        CHECK(a.v == b.v);
        CHECK(a.t == b.t);
    }
}

TEST_CASE("fourth-order energy drift under dt halving") {
    const double coarse = energy_drift(0.8), fine = energy_drift(0.4);
    CAPTURE(coarse);
    CAPTURE(fine);
    CHECK(coarse > 0);
    CHECK(coarse / fine >= 16.0 * 0.75);
}

TEST_CASE("zero data survives") {
    const ModelParams m(1, 0, 2, 0, 2, 0.0);
    SolverConfig c;
    c.T_max = 3;
    c.dx = 0.02;
    const SimResult r = run(m, c, InitialData{});
    CHECK(r.status == RunStatus::survived);
    CHECK(std::isnan(r.T_num));
    CHECK(r.t_final == 3.0);
    for (const auto& row : r.series) {
        CHECK(row.sup_norm == 0.0);
        CHECK(row.U == 0.0);
        CHECK(row.support_radius == 0.0);
    }
    CHECK(sup_abs(r.final_state.u) == 0.0);
}

TEST_CASE("regression blow-up") {
    const ModelParams m(1, 0, 0, 0, 2, 2.0);
    SolverConfig c;
    c.dx = 0.005;
    c.T_max = 20;
    const SimResult a = run(m, c, InitialData{});
    REQUIRE(a.status == RunStatus::blew_up);
    CHECK(std::abs(a.T_num - kRegressionT) / kRegressionT <= 0.02);
    CHECK(a.T_num >= 1);
    CHECK(a.T_num <= c.T_max);
    CHECK(a.series.back().t == a.T_num);
    CHECK(a.series.back().sup_norm >= c.U_max);
    for (std::size_t i = 1; i < a.series.size(); ++i) CHECK(a.series[i].t > a.series[i - 1].t);

    SUBCASE("threshold insensitivity") {
        SolverConfig c8 = c;
        c8.U_max = 1e8;
        const SimResult b = run(m, c8, InitialData{});
        REQUIRE(b.status == RunStatus::blew_up);
        CHECK(b.T_num > a.T_num);
        CHECK((b.T_num - a.T_num) / a.T_num < 0.01);
    }
    SUBCASE("larger data blows up earlier") {
        const SimResult b = run(m.with_eps(3.0), c, InitialData{});
        REQUIRE(b.status == RunStatus::blew_up);
        CHECK(b.T_num < a.T_num);
    }
    SUBCASE("bit-identical reruns") {
        const SimResult b = run(m, c, InitialData{});
        REQUIRE(a.series.size() == b.series.size());
        for (std::size_t i = 0; i < a.series.size(); ++i) {
            CHECK(a.series[i].t == b.series[i].t);
            CHECK(a.series[i].sup_norm == b.series[i].sup_norm);
            CHECK(a.series[i].U == b.series[i].U);
        }
        CHECK(a.final_state.u == b.final_state.u);
        CHECK(a.steps == b.steps);
    }
}

TEST_CASE("second-order spatial self-convergence") {
    const ModelParams m(1, 0, 2, 0, 2, 1.0);
    auto solve = [&](double dx) {
        SolverConfig c;
        c.dx = dx;
        c.L = 4;
        c.T_max = 2.5;
        c.nonlinear = false;
        return run(m, c, InitialData{}).final_state;
    };
    const SolverState a = solve(0.005), b = solve(0.0025), f = solve(0.00125);
    double e1 = 0, e2 = 0;
    for (std::size_t i = 0; i < a.u.size(); ++i) {
        e1 = std::max(e1, std::abs(a.u[i] - b.u[2 * i]));
        e2 = std::max(e2, std::abs(b.u[2 * i] - f.u[4 * i]));
    }
    CAPTURE(e1);
    CAPTURE(e2);
    CHECK(e1 / e2 >= 3.0);
    CHECK(e1 / e2 <= 5.0);
}

TEST_CASE("support radius") {
    const SpatialGrid g = SpatialGrid::line(3, 0.01);
    CHECK(support_radius(bump_state(g, 1), g) <= 1.0 + 0.01);
    CHECK(support_radius(bump_state(g, 1), g) >= 0.9);
    SolverState z = bump_state(g, 0);
    CHECK(support_radius(z, g) == 0.0);
    const SpatialGrid rg = SpatialGrid::radial(3, 3, 0.01);
    CHECK(support_radius(bump_state(rg, 5), rg) <= 1.0 + 0.01);
    // relative threshold
    SolverState s = bump_state(g, 0);
    s.u[g.size() / 2] = 1;
    s.u[g.size() / 2 + 50] = 1e-13;
    CHECK(support_radius(s, g) == doctest::Approx(0.0).scale(1));
    s.u[g.size() / 2 + 50] = 1e-11;
    CHECK(support_radius(s, g) == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("numerical domain of dependence") {
    // Each RK4 stage widens the stencil by one cell, so after k steps the support
    // can grow by at most 4k cells regardless of the continuum cone.
    for (int n : {1, 3}) {
        const ModelParams m(n, 0, 2, 0, 2, 1.0);
        SolverConfig c;
        c.dx = 0.02;
        c.T_max = 1.2;
        c.nonlinear = false;
        const SpatialGrid g = make_run_grid(m, c);
        SolverState s = bump_state(g, 1);
        long k = 0;
        while (s.t < c.T_max) {
            s = step(s, c, m, g);
            ++k;
            double reach = 0;
            for (std::size_t i = 0; i < g.size(); ++i)
                if (s.u[i] != 0.0) reach = std::max(reach, g.radius(i));
            CHECK(reach <= 1.0 + 4.0 * k * c.dx + 1e-9);
        }
    }
}

TEST_CASE("series recording") {
    const ModelParams m(3, 0, 2, 0, 2, 0.5);
    SolverConfig c;
    c.dx = 0.02;
    c.T_max = 3;
    c.output_dt = 0.25;
    const SimResult r = run(m, c, InitialData{});
    REQUIRE(r.status == RunStatus::survived);
    REQUIRE(r.series.size() == 9);
    for (std::size_t i = 0; i < r.series.size(); ++i) CHECK(r.series[i].t == doctest::Approx(1 + 0.25 * i).epsilon(1e-14));
    CHECK(r.series.front().U > 0);
    CHECK(std::isfinite(r.series.front().U0));

    c.output_dt = 0;
    c.output_stride = 7;
    const SimResult s = run(m, c, InitialData{});
    CHECK(s.series.front().t == 1.0);
    CHECK(s.series.back().t == 3.0);
    CHECK(s.series.size() == static_cast<std::size_t>(s.steps / 7 + 1 + (s.steps % 7 != 0)));

    // negative delta: U0 undefined
    const SimResult q = run(ModelParams(1, 0, 0, 1, 2, 0.1), c, InitialData{});
    CHECK(std::isnan(q.series.front().U0));
}
