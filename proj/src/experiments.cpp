#include "epdt/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <thread>

#include "epdt/errors.hpp"

namespace epdt {

namespace {

// Runs task(i) for i in [0, count) on up to `jobs` threads.
void parallel_for(std::size_t count, unsigned jobs, const std::function<void(std::size_t)>& task) {
    jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(count)));
    if (jobs <= 1) {
        for (std::size_t i = 0; i < count; ++i) task(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < jobs; ++w)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) task(i);
        });
    for (auto& th : pool) th.join();
}

}  // namespace

std::vector<SweepRecord> lifespan_sweep(const ModelParams& base, std::vector<double> eps_grid,
                                        const SolverConfig& config, const InitialData& data,
                                        unsigned jobs) {
    for (double e : eps_grid)
        if (!(e > 0.0)) throw ConfigError("eps grid entries must be positive");
    std::sort(eps_grid.begin(), eps_grid.end(), std::greater<>());
    std::vector<SweepRecord> out(eps_grid.size());
    parallel_for(eps_grid.size(), jobs, [&](std::size_t i) {
        const auto start = std::chrono::steady_clock::now();
        SweepRecord rec{eps_grid[i], RunStatus::step_underflow, std::nullopt, 0.0, {}};
        try {
            const SimResult r = run(base.with_eps(eps_grid[i]), config, data);
            rec.status = r.status;
            if (r.status == RunStatus::blew_up) rec.T_num = r.T_num;
        } catch (const std::exception& e) {
            rec.error = e.what();
        }
        rec.wallclock_s =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        out[i] = rec;
    });
    return out;
}

FitReport fit_rate(const std::vector<SweepRecord>& records, const ModelParams& params,
                   std::size_t max_points) {
    std::vector<std::pair<double, double>> pts;
    for (const auto& r : records)
        if (r.status == RunStatus::blew_up && r.T_num && r.eps > 0.0 && *r.T_num > 0.0)
            pts.emplace_back(r.eps, *r.T_num);
    std::sort(pts.begin(), pts.end());
    if (pts.size() > max_points) pts.resize(max_points);
    if (pts.size() < 4) {
        std::ostringstream os;
        os << "fit_rate: need at least 4 blow-up points, have " << pts.size();
        throw InsufficientData(os.str());
    }
    const double m = static_cast<double>(pts.size());
    double sx = 0, sy = 0;
    for (auto [e, T] : pts) {
        sx += std::log(e);
        sy += std::log(T);
    }
    const double mx = sx / m, my = sy / m;
    double sxx = 0, sxy = 0, syy = 0;
    for (auto [e, T] : pts) {
        const double dx = std::log(e) - mx, dy = std::log(T) - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (!(sxx > 0.0)) throw InsufficientData("fit_rate: eps values are not distinct");
    FitReport f{};
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double ss_res = 0;
    for (auto [e, T] : pts) {
        const double res = std::log(T) - (f.intercept + f.slope * std::log(e));
        ss_res += res * res;
    }
    f.r_squared = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
    const LifespanRate b = binding_rate(params);
    f.branch = b.branch;
    f.theoretical_rate = -b.rate;
    f.relative_error = std::abs(f.slope - f.theoretical_rate) / std::abs(f.theoretical_rate);
    f.points = pts.size();
    return f;
}

ScanReport p_scan(const ModelParams& base, const std::vector<double>& p_grid,
                  const SolverConfig& config, const InitialData& data, unsigned jobs) {
    ScanReport rep;
    rep.rows.resize(p_grid.size());
    parallel_for(p_grid.size(), jobs, [&](std::size_t i) {
        ScanRow row{p_grid[i], RunStatus::step_underflow, std::nullopt};
        try {
            const SimResult r = run(base.with_p(p_grid[i]), config, data);
            row.status = r.status;
            if (r.status == RunStatus::blew_up) row.T_num = r.T_num;
        } catch (const std::exception&) {
        }
        rep.rows[i] = row;
    });
    for (const auto& r : rep.rows)
        if (r.status == RunStatus::blew_up) rep.p_last_blowup = r.p;
    for (const auto& r : rep.rows)
        if (r.status == RunStatus::survived && (!rep.p_last_blowup || r.p > *rep.p_last_blowup)) {
            rep.p_first_survival = r.p;
            break;
        }
    rep.p_crit = std::numeric_limits<double>::quiet_NaN();
    if (base.delta() >= 0.0) rep.p_crit = critical_exponent(base).p_crit;
    return rep;
}

std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_series_csv(std::ostream& os, const DiagnosticSeries& series) {
    os << "t,sup_norm,U,U0,nonlinear_mass,support_radius\n";
    for (const auto& r : series)
        os << format_number(r.t) << ',' << format_number(r.sup_norm) << ',' << format_number(r.U)
           << ',' << format_number(r.U0) << ',' << format_number(r.nonlinear_mass) << ','
           << format_number(r.support_radius) << '\n';
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepRecord>& records,
                     bool include_wallclock) {
    os << "eps,status,T_num" << (include_wallclock ? ",wallclock_s" : "") << '\n';
    for (const auto& r : records) {
        os << format_number(r.eps) << ',' << to_string(r.status) << ','
           << (r.T_num ? format_number(*r.T_num) : "");
        if (include_wallclock) os << ',' << format_number(r.wallclock_s);
        os << '\n';
    }
}

RunStatus parse_status(const std::string& s) {
    if (s == "blew_up") return RunStatus::blew_up;
    if (s == "survived") return RunStatus::survived;
    if (s == "step_underflow") return RunStatus::step_underflow;
    throw ConfigError("unknown run status '" + s + "'");
}

std::vector<SweepRecord> read_sweep_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw ConfigError("sweep CSV is empty");
    if (line.rfind("eps,status,T_num", 0) != 0)
        throw ConfigError("sweep CSV header must start with eps,status,T_num");
    std::vector<SweepRecord> out;
    std::size_t lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> cols;
        std::stringstream ss(line);
        std::string c;
        while (std::getline(ss, c, ',')) cols.push_back(c);
        if (!line.empty() && line.back() == ',') cols.emplace_back();
        if (cols.size() < 3) throw ConfigError("sweep CSV line " + std::to_string(lineno) + ": too few columns");
        try {
            SweepRecord r{std::stod(cols[0]), parse_status(cols[1]), std::nullopt, 0.0, {}};
            if (!cols[2].empty()) r.T_num = std::stod(cols[2]);
            if (cols.size() > 3 && !cols[3].empty()) r.wallclock_s = std::stod(cols[3]);
            out.push_back(r);
        } catch (const std::logic_error& e) {
            throw ConfigError("sweep CSV line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    return out;
}

}  // namespace epdt
