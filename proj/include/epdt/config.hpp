#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "epdt/constructions.hpp"
#include "epdt/iteration.hpp"
#include "epdt/params.hpp"
#include "epdt/solver.hpp"

namespace epdt {

// Flat key set shared by the JSON config file and the --key value flags.
struct RunConfig {
    // model
    int n = 1;
    double ell = 0.0;
    double mu = 2.0;
    double nu2 = 0.0;
    double p = 2.0;
    double eps = 0.1;
    double R = 1.0;
    // solver
    SolverConfig solver;
    // data
    double amplitude0 = 1.0;
    double amplitude1 = 0.0;
    // iteration
    IterationInputs iteration;
    std::string branch = "auto";  // auto (strauss when it applies) | binding | strauss | fujita
    int j_max = 20;
    // sweeps
    std::vector<double> eps_grid{0.4, 0.3, 0.2, 0.15, 0.1, 0.07, 0.05};
    std::vector<double> p_grid{2.0, 2.5, 3.0, 3.5, 4.0};
    int fit_points = 8;
    int jobs = 0;  // 0: EPDT_JOBS, then hardware concurrency
    // output
    std::string out = "";  // file prefix for CSV/JSON; empty: stdout only
    std::string format = "table";  // table | json

    ModelParams model() const;  // throws DomainError
    InitialData data() const;
};

struct KeyDoc {
    std::string key;
    std::string type;  // int | real | bool | string | real_list
    std::string default_value;
    std::string help;
};

// All recognised keys with their defaults, in display order.
const std::vector<KeyDoc>& config_keys();

// Applies a JSON object (as text) on top of cfg. Unknown keys and type
// mismatches throw ConfigError.
void apply_json(RunConfig& cfg, const std::string& json_text);

// Applies one key = value override given as flag text. Lists are comma separated.
void apply_override(RunConfig& cfg, const std::string& key, const std::string& value);

// Reads a file, then applies it with apply_json.
void load_config_file(RunConfig& cfg, const std::string& path);

// Worker count: explicit value, else EPDT_JOBS, else hardware concurrency.
// A malformed EPDT_JOBS throws ConfigError.
unsigned resolve_jobs(int requested);

}  // namespace epdt
