// Command-line front end: exponents, validate, simulate, iterate, sweep.
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "epdt/config.hpp"
#include "epdt/constructions.hpp"
#include "epdt/diagnostics.hpp"
#include "epdt/errors.hpp"
#include "epdt/experiments.hpp"
#include "epdt/exponents.hpp"
#include "epdt/iteration.hpp"
#include "epdt/solver.hpp"
#include "epdt/specfun.hpp"
#include "epdt/validation.hpp"

using nlohmann::json;
using namespace epdt;

namespace {

enum Exit { ok = 0, config_error = 1, hypothesis = 2, blew_up = 3, underflow = 4 };

std::string human(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

// JSON number, or null for non-finite values.
json num(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

std::string dump(const json& j) { return j.dump(2); }

json params_json(const ModelParams& m) {
    return {{"n", m.n()},   {"ell", m.ell()}, {"mu", m.mu()}, {"nu2", m.nu2()},
            {"p", m.p()},   {"eps", m.eps()}, {"R", m.R()},   {"delta", m.delta()}};
}

json exponents_json(const ExponentReport& r) {
    json rates = json::array();
    for (const auto& x : r.rates)
        rates.push_back({{"branch", to_string(x.branch)},
                         {"rate", num(x.rate)},
                         {"binding", x.binding},
                         {"degenerate", x.degenerate}});
    return {{"delta", r.delta},         {"sqrt_delta", r.sqrt_delta},
            {"r1", r.r1},               {"r2", r.r2},
            {"p_strauss", num(r.p_strauss)}, {"fujita_arg", r.fujita_arg},
            {"p_fujita", num(r.p_fujita)},   {"p_crit", num(r.p_crit)},
            {"regime", to_string(r.regime)}, {"theta_at_p", num(r.theta_at_p)},
            {"rates", rates}};
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write '" + path + "'");
    out << text;
}

// Shared options: --config FILE plus one --key VALUE flag per config key.
struct Options {
    std::string config_file;
    std::map<std::string, std::string> overrides;

    void attach(CLI::App* app) {
        app->add_option("--config", config_file, "JSON config file (flags override it)");
        for (const auto& k : config_keys()) {
            auto* opt = app->add_option_function<std::string>(
                "--" + k.key, [this, key = k.key](const std::string& v) { overrides[key] = v; },
                k.help + " [" + k.type + ", default " +
                    (k.default_value.empty() ? "\"\"" : k.default_value) + "]");
            opt->type_name(k.type == "real_list" ? "LIST" : "VALUE");
        }
    }

    RunConfig resolve() const {
        RunConfig cfg;
        if (!config_file.empty()) load_config_file(cfg, config_file);
        for (const auto& [k, v] : overrides) apply_override(cfg, k, v);
        return cfg;
    }
};

int cmd_exponents(const RunConfig& cfg) {
    const ModelParams m = cfg.model();
    try {
        m.require_nonnegative_delta();
    } catch (const NegativeDiscriminant& e) {
        std::cerr << "error: delta negative (" << e.what()
                  << "); the blow-up result requires (mu-1)^2 - 4 nu2 >= 0\n";
        return hypothesis;
    }
    const ExponentReport r = critical_exponent(m);
    if (cfg.format == "json") {
        std::cout << dump({{"params", params_json(m)}, {"exponents", exponents_json(r)}}) << '\n';
        return ok;
    }
    std::cout << "delta        " << human(r.delta) << '\n'
              << "r1, r2       " << human(r.r1) << ", " << human(r.r2) << '\n'
              << "p_strauss    " << human(r.p_strauss) << '\n'
              << "p_fujita     " << human(r.p_fujita) << "  (k = " << human(r.fujita_arg) << ")\n"
              << "p_crit       " << human(r.p_crit) << '\n'
              << "regime       " << to_string(r.regime) << '\n'
              << "theta(p)     " << human(r.theta_at_p) << '\n';
    if (r.rates.empty()) std::cout << "rates        none (p >= p_crit)\n";
    for (const auto& x : r.rates)
        std::cout << "rate         " << to_string(x.branch) << ' ' << human(x.rate)
                  << (x.binding ? " binding" : "") << (x.degenerate ? " degenerate" : "") << '\n';
    return ok;
}

int cmd_validate(const RunConfig& cfg, bool inject_fault) {
    const ModelParams m = cfg.model();
    if (m.delta() < 0.0) {
        std::cerr << "error: delta negative; the construction needs (mu-1)^2 - 4 nu2 >= 0\n";
        return hypothesis;
    }
    const auto checks = validation_suite(m, inject_fault ? 1e-2 : 0.0);
    bool all = true;
    json arr = json::array();
    for (const auto& c : checks) {
        all = all && c.passed;
        arr.push_back({{"name", c.name}, {"residual", num(c.residual)},
                       {"tolerance", c.tolerance}, {"passed", c.passed}});
    }
    if (cfg.format == "json") {
        std::cout << dump({{"params", params_json(m)}, {"checks", arr}, {"passed", all}}) << '\n';
    } else {
        std::printf("%-20s %-14s %-14s %s\n", "check", "residual", "tolerance", "status");
        for (const auto& c : checks)
            std::printf("%-20s %-14s %-14s %s\n", c.name.c_str(), human(c.residual).c_str(),
                        human(c.tolerance).c_str(), c.passed ? "ok" : "FAIL");
    }
    if (!all) {
        std::cerr << "failing checks:";
        for (const auto& c : checks)
            if (!c.passed) std::cerr << ' ' << c.name;
        std::cerr << '\n';
        return config_error;
    }
    return ok;
}

int cmd_simulate(const RunConfig& cfg) {
    const ModelParams m = cfg.model();
    const SimResult res = run(m, cfg.solver, cfg.data());

    json exps = nullptr;
    if (m.delta() >= 0.0) exps = exponents_json(critical_exponent(m));

    json diag = {{"steps", res.steps},
                 {"t_final", res.t_final},
                 {"grid", res.grid_description},
                 {"rows", res.series.size()}};
    json residuals = json::object();
    double cone_excess = -std::numeric_limits<double>::infinity();
    double U0_min = std::numeric_limits<double>::infinity();
    for (const auto& row : res.series) {
        const double cone = m.R() + specfun::phi_ell(m.ell(), row.t) - specfun::phi_ell(m.ell(), 1.0);
        cone_excess = std::max(cone_excess, row.support_radius - cone);
        if (std::isfinite(row.U0)) U0_min = std::min(U0_min, row.U0);
    }
    residuals["support_cone_excess"] = num(cone_excess);
    diag["U0_min"] = num(U0_min);
    try {
        const auto r = check_ode_identity(res.series, m, cfg.solver.nonlinear);
        residuals["ode_identity_rel"] = r.max_rel_residual;
        residuals["ode_identity_abs"] = r.max_abs_residual;
    } catch (const InsufficientData& e) {
        residuals["ode_identity_rel"] = nullptr;
        diag["ode_identity_note"] = e.what();
    }
    if (m.delta() >= 0.0) {
        try {
            const TestFunctionContext ctx = TestFunctionContext::make(m);
            const auto lb = check_lower_bounds(res.series, m, ctx);
            json fits = json::object();
            for (const BoundFit* f : {&lb.fujita_U, &lb.U0_decay, &lb.strauss_U})
                fits[f->name] = {{"constant", num(f->fitted_constant)},
                                 {"window", {f->window_lo, f->window_hi}},
                                 {"samples", f->samples},
                                 {"positive", f->positive}};
            diag["lower_bounds"] = fits;
            diag["T1"] = ctx.T1;
        } catch (const NotFound& e) {
            diag["lower_bounds_note"] = e.what();
        }
    }

    const json summary = {{"params", params_json(m)},
                          {"exponents", exps},
                          {"status", to_string(res.status)},
                          {"T_num", num(res.T_num)},
                          {"diagnostics", diag},
                          {"residuals", residuals}};
    if (!cfg.out.empty()) {
        std::ostringstream csv;
        write_series_csv(csv, res.series);
        write_file(cfg.out + "_series.csv", csv.str());
        write_file(cfg.out + "_summary.json", dump(summary) + "\n");
    }
    if (cfg.format == "json" || cfg.out.empty()) {
        std::cout << dump(summary) << '\n';
    } else {
        std::cout << "status  " << to_string(res.status) << '\n'
                  << "T_num   " << human(res.T_num) << '\n'
                  << "t_final " << human(res.t_final) << '\n'
                  << "steps   " << res.steps << '\n'
                  << "wrote   " << cfg.out << "_series.csv, " << cfg.out << "_summary.json\n";
    }
    switch (res.status) {
        case RunStatus::survived: return ok;
        case RunStatus::blew_up: return blew_up;
        case RunStatus::step_underflow: return underflow;
    }
    return ok;
}

int cmd_iterate(const RunConfig& cfg) {
    const ModelParams m = cfg.model();
    if (m.delta() < 0.0) {
        std::cerr << "error: delta negative; the iteration needs (mu-1)^2 - 4 nu2 >= 0\n";
        return hypothesis;
    }
    Branch branch;
    try {
        const auto rates = lifespan_rates(m);
        if (cfg.branch == "strauss") branch = Branch::strauss;
        else if (cfg.branch == "fujita") branch = Branch::fujita;
        else if (cfg.branch == "binding") branch = binding_rate(m).branch;
        else branch = rates.front().branch;  // strauss is listed first when it applies
        // Verifies p lies in the chosen branch's range.
        bool applies = false;
        for (const auto& r : rates) applies = applies || r.branch == branch;
        if (!applies) throw EmptyRange("no blow-up branch applies: " + to_string(branch) +
                                       " range does not contain p");
    } catch (const EmptyRange& e) {
        std::cerr << "error: " << e.what() << '\n';
        return hypothesis;
    }
    if (cfg.j_max < 0) throw ConfigError("j_max must be >= 0");
    const IterationConstants k = make_iteration_constants(m, branch, cfg.iteration);
    const IterationTable table = build_table(m, k, cfg.j_max);

    std::ostringstream csv;
    csv << "j,alpha_rec,alpha_closed,beta_rec,beta_closed,logC_rec,logC_bound\n";
    for (const auto& row : table.rows) {
        const ClosedFormRow c = closed_form(row.j, m, k);
        csv << row.j << ',' << format_number(row.alpha) << ',' << format_number(c.alpha) << ','
            << format_number(row.beta) << ',' << format_number(c.beta) << ','
            << format_number(row.log_C) << ',' << format_number(c.log_C_bound) << '\n';
    }
    json env = nullptr;
    try {
        const EnvelopeBlowup b = envelope_blowup_time(m, k);
        env = {{"time", num(b.time)}, {"eps0_bound", num(b.eps0_bound)},
               {"eps_at_2T1", num(b.eps_at_2T1)}};
    } catch (const EmptyRange&) {
    }
    const json constants = {{"branch", to_string(branch)}, {"r2", k.r2},
                            {"alpha0", k.seed.alpha0},    {"beta0", k.seed.beta0},
                            {"D", num(k.D)},              {"D_tilde", num(k.D_tilde)},
                            {"D_hat", num(k.D_hat)},      {"j0", k.j0},
                            {"envelope_blowup", env}};
    if (!cfg.out.empty()) {
        write_file(cfg.out + "_iteration.csv", csv.str());
        write_file(cfg.out + "_constants.json", dump(constants) + "\n");
    }
    std::cout << csv.str();
    std::cerr << "branch " << to_string(branch) << "  D " << human(k.D) << "  D_tilde "
              << human(k.D_tilde) << "  D_hat " << human(k.D_hat) << "  j0 " << k.j0;
    if (!env.is_null()) std::cerr << "  t* " << human(env["time"].is_null() ? NAN : env["time"].get<double>());
    std::cerr << '\n';
    return ok;
}

json fit_json(const FitReport& f) {
    return {{"slope", f.slope},
            {"intercept", f.intercept},
            {"r_squared", f.r_squared},
            {"theoretical_rate", f.theoretical_rate},
            {"branch", to_string(f.branch)},
            {"relative_error", f.relative_error},
            {"points", f.points}};
}

int cmd_sweep(const RunConfig& cfg, const std::string& fit_only, bool scan) {
    const ModelParams m = cfg.model();
    const unsigned jobs = resolve_jobs(cfg.jobs);
    if (scan) {
        if (cfg.p_grid.empty()) throw ConfigError("p_grid is empty");
        const ScanReport rep = p_scan(m, cfg.p_grid, cfg.solver, cfg.data(), jobs);
        std::printf("%-10s %-16s %s\n", "p", "status", "T_num");
        for (const auto& r : rep.rows)
            std::printf("%-10s %-16s %s\n", human(r.p).c_str(), to_string(r.status).c_str(),
                        r.T_num ? human(*r.T_num).c_str() : "-");
        std::cout << "bracket [" << (rep.p_last_blowup ? human(*rep.p_last_blowup) : "-") << ", "
                  << (rep.p_first_survival ? human(*rep.p_first_survival) : "-")
                  << "]  p_crit " << human(rep.p_crit)
                  << "  (survival means no blow-up observed up to T_max)\n";
        return ok;
    }

    std::vector<SweepRecord> records;
    if (!fit_only.empty()) {
        std::ifstream in(fit_only);
        if (!in) throw ConfigError("cannot open '" + fit_only + "'");
        records = read_sweep_csv(in);
    } else {
        if (cfg.eps_grid.empty()) throw ConfigError("eps_grid is empty");
        records = lifespan_sweep(m, cfg.eps_grid, cfg.solver, cfg.data(), jobs);
    }
    if (cfg.fit_points < 4) throw ConfigError("fit_points must be >= 4");
    FitReport fit{};
    try {
        fit = fit_rate(records, m, static_cast<std::size_t>(cfg.fit_points));
    } catch (const InsufficientData& e) {
        std::cerr << "error: " << e.what() << '\n';
        std::ostringstream csv;
        write_sweep_csv(csv, records);
        std::cerr << csv.str();
        return config_error;
    }
    std::ostringstream csv;
    write_sweep_csv(csv, records);
    const json report = fit_json(fit);
    if (!cfg.out.empty()) {
        if (fit_only.empty()) write_file(cfg.out + "_sweep.csv", csv.str());
        write_file(cfg.out + "_fit.json", dump(report) + "\n");
    }
    if (cfg.format == "json") {
        std::cout << dump(report) << '\n';
    } else {
        if (fit_only.empty()) std::cout << csv.str() << '\n';
        std::cout << "slope " << human(fit.slope) << "  theoretical " << human(fit.theoretical_rate)
                  << " (" << to_string(fit.branch) << ")  relative_error "
                  << human(fit.relative_error) << "  r^2 " << human(fit.r_squared) << "  points "
                  << fit.points << '\n';
    }
    return ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Blow-up numerics for the semilinear Euler-Poisson-Darboux-Tricomi equation"};
    app.require_subcommand(1);

    Options o_exp, o_val, o_sim, o_it, o_sw;
    auto* exps = app.add_subcommand("exponents", "critical exponents and lifespan rates");
    o_exp.attach(exps);
    auto* val = app.add_subcommand("validate", "residual checks of the adjoint construction");
    o_val.attach(val);
    bool inject_fault = false;
    val->add_flag("--inject-fault", inject_fault)->group("");
    auto* sim = app.add_subcommand("simulate", "single run: series CSV and summary JSON");
    o_sim.attach(sim);
    auto* it = app.add_subcommand("iterate", "iteration table for the lower bounds");
    o_it.attach(it);
    auto* sw = app.add_subcommand("sweep", "lifespan sweep over eps with a power-law fit");
    o_sw.attach(sw);
    std::string fit_only;
    bool scan = false;
    sw->add_option("--fit-only", fit_only, "fit a sweep CSV instead of running");
    sw->add_flag("--scan", scan, "scan p_grid at fixed eps and report the bracket");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? ok : config_error;
    }

    try {
        if (*exps) return cmd_exponents(o_exp.resolve());
        if (*val) return cmd_validate(o_val.resolve(), inject_fault);
        if (*sim) return cmd_simulate(o_sim.resolve());
        if (*it) return cmd_iterate(o_it.resolve());
        if (*sw) return cmd_sweep(o_sw.resolve(), fit_only, scan);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return config_error;
    } catch (const NegativeDiscriminant& e) {
        std::cerr << "error: delta negative: " << e.what() << '\n';
        return hypothesis;
    } catch (const EmptyRange& e) {
        std::cerr << "error: " << e.what() << '\n';
        return hypothesis;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return config_error;
    }
    return ok;
}
