#include "epdt/config.hpp"

#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "epdt/errors.hpp"

namespace epdt {

using nlohmann::json;

ModelParams RunConfig::model() const { return ModelParams(n, ell, mu, nu2, p, eps, R); }

InitialData RunConfig::data() const {
    InitialData d;
    d.amplitude0 = amplitude0;
    d.amplitude1 = amplitude1;
    d.R = R;
    return d;
}

namespace {

struct Binding {
    KeyDoc doc;
    std::function<void(RunConfig&, const json&)> set;
};

double as_real(const std::string& key, const json& v) {
    if (!v.is_number()) throw ConfigError("config key '" + key + "' must be a number");
    return v.get<double>();
}

int as_int(const std::string& key, const json& v) {
    if (!v.is_number_integer()) throw ConfigError("config key '" + key + "' must be an integer");
    return v.get<int>();
}

bool as_bool(const std::string& key, const json& v) {
    if (!v.is_boolean()) throw ConfigError("config key '" + key + "' must be true or false");
    return v.get<bool>();
}

std::string as_string(const std::string& key, const json& v) {
    if (!v.is_string()) throw ConfigError("config key '" + key + "' must be a string");
    return v.get<std::string>();
}

std::vector<double> as_list(const std::string& key, const json& v) {
    if (!v.is_array()) throw ConfigError("config key '" + key + "' must be an array of numbers");
    std::vector<double> out;
    for (const auto& x : v) out.push_back(as_real(key, x));
    return out;
}

std::string fmt(double x) {
    std::ostringstream os;
    os << x;
    return os.str();
}

std::string fmt(const std::vector<double>& xs) {
    std::ostringstream os;
    for (std::size_t i = 0; i < xs.size(); ++i) os << (i ? "," : "") << xs[i];
    return os.str();
}

#define REAL(k, field, help)                                                                \
    Binding {                                                                               \
        {k, "real", fmt(d.field), help}, [](RunConfig& c, const json& v) { c.field = as_real(k, v); } \
    }
#define INT(k, field, help)                                                                 \
    Binding {                                                                               \
        {k, "int", std::to_string(d.field), help},                                          \
            [](RunConfig& c, const json& v) { c.field = as_int(k, v); }                     \
    }

const std::vector<Binding>& bindings() {
    static const std::vector<Binding> table = [] {
        const RunConfig d;
        std::vector<Binding> b{
            INT("n", n, "space dimension"),
            REAL("ell", ell, "Tricomi exponent, > -1"),
            REAL("mu", mu, "damping coefficient"),
            REAL("nu2", nu2, "mass coefficient, >= 0"),
            REAL("p", p, "nonlinearity power, > 1"),
            REAL("eps", eps, "data size"),
            REAL("R", R, "support radius of the data"),
            REAL("c_cfl", solver.c_cfl, "CFL factor"),
            REAL("c_react", solver.c_react, "reaction step factor"),
            REAL("U_max", solver.U_max, "blow-up threshold on sup|u|"),
            REAL("dt_min", solver.dt_min, "smallest admissible step"),
            REAL("T_max", solver.T_max, "final time"),
            REAL("dx", solver.dx, "grid spacing"),
            REAL("L", solver.L, "domain radius, 0 = smallest containing the cone"),
            INT("output_stride", solver.output_stride, "record every k steps"),
            REAL("output_dt", solver.output_dt, "record at uniform times, 0 = use stride"),
            Binding{{"nonlinear", "bool", "true", "include |u|^p"},
                    [](RunConfig& c, const json& v) { c.solver.nonlinear = as_bool("nonlinear", v); }},
            REAL("amplitude0", amplitude0, "bump amplitude of u0"),
            REAL("amplitude1", amplitude1, "bump amplitude of u1"),
            REAL("C_frame", iteration.C_frame, "iteration frame constant"),
            REAL("K_str", iteration.K_str, "Strauss seed constant"),
            REAL("I_fuj", iteration.I_fuj, "Fujita seed constant"),
            REAL("C_tilde", iteration.C_tilde, "Fujita envelope constant"),
            REAL("T1", iteration.T1, "start of the bound window"),
            Binding{{"branch", "string", d.branch, "auto | binding | strauss | fujita"},
                    [](RunConfig& c, const json& v) {
                        c.branch = as_string("branch", v);
                        if (c.branch != "auto" && c.branch != "binding" && c.branch != "strauss" &&
                            c.branch != "fujita")
                            throw ConfigError("branch must be auto, binding, strauss or fujita");
                    }},
            INT("j_max", j_max, "last iteration index"),
            Binding{{"eps_grid", "real_list", fmt(d.eps_grid), "sweep eps values"},
                    [](RunConfig& c, const json& v) { c.eps_grid = as_list("eps_grid", v); }},
            Binding{{"p_grid", "real_list", fmt(d.p_grid), "scan p values"},
                    [](RunConfig& c, const json& v) { c.p_grid = as_list("p_grid", v); }},
            INT("fit_points", fit_points, "smallest eps values used by the fit"),
            INT("jobs", jobs, "worker threads, 0 = EPDT_JOBS or all cores"),
            Binding{{"out", "string", "", "output file prefix"},
                    [](RunConfig& c, const json& v) { c.out = as_string("out", v); }},
            Binding{{"format", "string", d.format, "table | json"},
                    [](RunConfig& c, const json& v) {
                        c.format = as_string("format", v);
                        if (c.format != "table" && c.format != "json")
                            throw ConfigError("format must be table or json");
                    }},
        };
        return b;
    }();
    return table;
}

#undef REAL
#undef INT

const Binding& find(const std::string& key) {
    for (const auto& b : bindings())
        if (b.doc.key == key) return b;
    throw ConfigError("unknown config key '" + key + "'");
}

}  // namespace

const std::vector<KeyDoc>& config_keys() {
    static const std::vector<KeyDoc> docs = [] {
        std::vector<KeyDoc> out;
        for (const auto& b : bindings()) out.push_back(b.doc);
        return out;
    }();
    return docs;
}

void apply_json(RunConfig& cfg, const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    for (const auto& [key, value] : j.items()) find(key).set(cfg, value);
}

void apply_override(RunConfig& cfg, const std::string& key, const std::string& value) {
    const Binding& b = find(key);
    json v;
    try {
        if (b.doc.type == "string") {
            v = value;
        } else if (b.doc.type == "bool") {
            if (value == "true" || value == "1") v = true;
            else if (value == "false" || value == "0") v = false;
            else throw ConfigError("flag --" + key + " expects true or false");
        } else if (b.doc.type == "real_list") {
            v = json::array();
            std::stringstream ss(value);
            std::string item;
            while (std::getline(ss, item, ','))
                if (!item.empty()) v.push_back(std::stod(item));
        } else if (b.doc.type == "int") {
            std::size_t pos = 0;
            const long x = std::stol(value, &pos);
            if (pos != value.size()) throw ConfigError("flag --" + key + " expects an integer");
            v = x;
        } else {
            std::size_t pos = 0;
            const double x = std::stod(value, &pos);
            if (pos != value.size()) throw ConfigError("flag --" + key + " expects a number");
            v = x;
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const std::logic_error&) {
        throw ConfigError("flag --" + key + ": cannot parse '" + value + "'");
    }
    b.set(cfg, v);
}

void load_config_file(RunConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    apply_json(cfg, ss.str());
}

unsigned resolve_jobs(int requested) {
    if (requested > 0) return static_cast<unsigned>(requested);
    if (const char* env = std::getenv("EPDT_JOBS"); env && *env) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end == env || *end != '\0' || v <= 0)
            throw ConfigError(std::string("EPDT_JOBS must be a positive integer, got '") + env + "'");
        return static_cast<unsigned>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace epdt
