#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "epdt/constructions.hpp"
#include "epdt/exponents.hpp"
#include "epdt/params.hpp"
#include "epdt/solver.hpp"

namespace epdt {

struct SweepRecord {
    double eps;
    RunStatus status;
    std::optional<double> T_num;  // present only for blew_up
    double wallclock_s;
    std::string error;  // non-empty when the run threw; status is then step_underflow
};

struct FitReport {
    double slope;
    double intercept;
    double r_squared;
    double theoretical_rate;  // minus the binding rate
    Branch branch;
    double relative_error;
    std::size_t points;
};

// One run per eps, up to `jobs` at a time. Output is sorted by eps descending.
// A run that throws yields a flagged record instead of failing the sweep.
std::vector<SweepRecord> lifespan_sweep(const ModelParams& base, std::vector<double> eps_grid,
                                        const SolverConfig& config, const InitialData& data,
                                        unsigned jobs = 1);

// Least squares of log T_num on log eps over the blew_up records with the
// `max_points` smallest eps. Throws InsufficientData below 4 points.
FitReport fit_rate(const std::vector<SweepRecord>& records, const ModelParams& params,
                   std::size_t max_points = 8);

struct ScanRow {
    double p;
    RunStatus status;
    std::optional<double> T_num;
};

struct ScanReport {
    std::vector<ScanRow> rows;
    std::optional<double> p_last_blowup;
    std::optional<double> p_first_survival;  // first survival above p_last_blowup
    double p_crit;                           // NaN when delta < 0
};

ScanReport p_scan(const ModelParams& base, const std::vector<double>& p_grid,
                  const SolverConfig& config, const InitialData& data, unsigned jobs = 1);

// CSV helpers; numbers use 17 significant digits.
std::string format_number(double x);
void write_series_csv(std::ostream& os, const DiagnosticSeries& series);
void write_sweep_csv(std::ostream& os, const std::vector<SweepRecord>& records,
                     bool include_wallclock = true);
// Parses `eps,status,T_num[,wallclock_s]` rows. Throws ConfigError.
std::vector<SweepRecord> read_sweep_csv(std::istream& is);

RunStatus parse_status(const std::string& s);

}  // namespace epdt
