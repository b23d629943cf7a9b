#include "replearn/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <sstream>

namespace replearn {

namespace {

[[noreturn]] void schema_error(const std::string& msg) {
    throw ConfigError("schema", msg);
}

[[noreturn]] void validation_error(const std::string& msg) {
    throw ConfigError("validation", msg);
}

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

double parse_double(const std::string& key, const std::string& value) {
    std::size_t pos = 0;
    double x = 0.0;
    try {
        x = std::stod(value, &pos);
    } catch (const std::exception&) {
        schema_error(key + ": expected a number, got '" + value + "'");
    }
    if (pos != value.size())
        schema_error(key + ": expected a number, got '" + value + "'");
    return x;
}

long long parse_int(const std::string& key, const std::string& value) {
    std::size_t pos = 0;
    long long x = 0;
    try {
        x = std::stoll(value, &pos);
    } catch (const std::exception&) {
        schema_error(key + ": expected an integer, got '" + value + "'");
    }
    if (pos != value.size())
        schema_error(key + ": expected an integer, got '" + value + "'");
    return x;
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    schema_error(key + ": expected true or false, got '" + value + "'");
}

std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> parts;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) parts.push_back(trim(item));
    return parts;
}

}  // namespace

OutputFormat parse_format(const std::string& word) {
    if (word == "csv") return OutputFormat::Csv;
    if (word == "json") return OutputFormat::Json;
    if (word == "both") return OutputFormat::Both;
    schema_error("output.format: expected csv, json, or both, got '" + word +
                 "'");
}

RunConfig parse_config(const std::string& text) {
    RunConfig cfg;
    std::map<std::string, std::string> kv;

    std::stringstream ss(text);
    std::string line;
    int line_no = 0;
    while (std::getline(ss, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            schema_error("line " + std::to_string(line_no) +
                         ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            schema_error("line " + std::to_string(line_no) + ": empty key");
        if (kv.count(key)) schema_error("duplicate key '" + key + "'");
        kv[key] = value;
    }

    const auto take = [&kv](const std::string& key) {
        auto it = kv.find(key);
        if (it == kv.end()) return std::pair<bool, std::string>{false, ""};
        std::pair<bool, std::string> out{true, it->second};
        kv.erase(it);
        return out;
    };
    const auto get_double = [&](const std::string& key, double& slot) {
        if (auto [ok, v] = take(key); ok) {
            slot = parse_double(key, v);
            return true;
        }
        return false;
    };
    const auto get_int = [&](const std::string& key, int& slot) {
        if (auto [ok, v] = take(key); ok) {
            slot = static_cast<int>(parse_int(key, v));
            return true;
        }
        return false;
    };
    const auto note_default = [&cfg](const std::string& key, bool present) {
        if (!present) cfg.defaults_applied.push_back(key);
    };

    // Model parameters are required.
    for (const auto* key :
         {"model.v", "model.p", "model.q", "model.c", "model.delta"}) {
        if (!kv.count(key))
            schema_error(std::string("missing required key '") + key + "'");
    }
    get_double("model.v", cfg.model.v);
    get_double("model.p", cfg.model.p);
    get_double("model.q", cfg.model.q);
    get_double("model.c", cfg.model.c);
    get_double("model.delta", cfg.model.delta);

    note_default("solver.m", get_int("solver.m", cfg.solver.m));
    note_default("solver.epsilon",
                 get_double("solver.epsilon", cfg.solver.epsilon));
    note_default("solver.tol", get_double("solver.tol", cfg.solver.tol));
    note_default("solver.max_iter",
                 get_int("solver.max_iter", cfg.solver.max_iter));

    note_default("sim.lambda0", get_double("sim.lambda0", cfg.sim.lambda0));
    note_default("sim.n_paths", get_int("sim.n_paths", cfg.sim.n_paths));
    note_default("sim.t_max", get_int("sim.t_max", cfg.sim.t_max));
    note_default("sim.horizon", get_int("sim.horizon", cfg.sim.horizon));
    if (auto [ok, v] = take("sim.seed"); ok)
        cfg.sim.seed = static_cast<std::uint64_t>(parse_int("sim.seed", v));
    else
        cfg.defaults_applied.push_back("sim.seed");

    if (auto [ok, v] = take("sweep.parameter"); ok) cfg.sweep.parameter = v;
    if (auto [ok, v] = take("sweep.values"); ok) {
        for (const auto& item : split_list(v))
            cfg.sweep.values.push_back(parse_double("sweep.values", item));
    }

    note_default("price.lambda_min",
                 get_double("price.lambda_min", cfg.price.lambda_min));
    note_default("price.lambda_max",
                 get_double("price.lambda_max", cfg.price.lambda_max));
    if (auto [ok, v] = take("price.find_delta_bar"); ok)
        cfg.price.find_delta_bar = parse_bool("price.find_delta_bar", v);
    note_default("price.delta_bar_tol",
                 get_double("price.delta_bar_tol", cfg.price.delta_bar_tol));

    note_default("outcomes.rho", get_double("outcomes.rho", cfg.outcomes.rho));

    note_default("finite.horizon",
                 get_int("finite.horizon", cfg.finite.horizon));
    if (auto [ok, v] = take("finite.t_list"); ok) {
        for (const auto& item : split_list(v))
            cfg.finite.t_list.push_back(
                static_cast<int>(parse_int("finite.t_list", item)));
    }

    if (auto [ok, v] = take("output.dir"); ok) cfg.out_dir = v;
    if (auto [ok, v] = take("output.format"); ok) cfg.format = parse_format(v);

    if (!kv.empty()) schema_error("unknown key '" + kv.begin()->first + "'");

    validate_config(cfg);
    return cfg;
}

void validate_config(const RunConfig& cfg) {
    try {
        cfg.model.validate();
        cfg.solver.validate();
    } catch (const std::invalid_argument& e) {
        validation_error(e.what());
    }
    if (!(cfg.sim.lambda0 > 0.0 && cfg.sim.lambda0 < 1.0))
        validation_error("sim.lambda0: must lie strictly in (0, 1)");
    if (cfg.sim.n_paths < 1) validation_error("sim.n_paths: must be >= 1");
    if (cfg.sim.t_max < 1) validation_error("sim.t_max: must be >= 1");
    if (cfg.sim.horizon < 1) validation_error("sim.horizon: must be >= 1");
    if (!cfg.sweep.parameter.empty() || !cfg.sweep.values.empty()) {
        static const char* allowed[] = {"v", "p", "q", "c", "delta"};
        const bool known =
            std::any_of(std::begin(allowed), std::end(allowed),
                        [&](const char* s) { return cfg.sweep.parameter == s; });
        if (!known)
            validation_error(
                "sweep.parameter: must be one of v, p, q, c, delta");
        if (cfg.sweep.values.empty())
            validation_error("sweep.values: must be a nonempty list");
    }
    if (!(cfg.price.lambda_min > 0.0 &&
          cfg.price.lambda_min < cfg.price.lambda_max &&
          cfg.price.lambda_max < 1.0))
        validation_error(
            "price.lambda_min/lambda_max: must satisfy 0 < min < max < 1");
    if (!(cfg.price.delta_bar_tol > 0.0))
        validation_error("price.delta_bar_tol: must be > 0");
    if (!(cfg.outcomes.rho > 0.5 && cfg.outcomes.rho <= 1.0))
        validation_error("outcomes.rho: must satisfy 1/2 < rho <= 1");
    if (cfg.finite.horizon < 1)
        validation_error("finite.horizon: must be >= 1");
    for (std::size_t i = 0; i < cfg.finite.t_list.size(); ++i) {
        if (cfg.finite.t_list[i] < 1)
            validation_error("finite.t_list: entries must be >= 1");
        if (i > 0 && cfg.finite.t_list[i] <= cfg.finite.t_list[i - 1])
            validation_error("finite.t_list: must be strictly increasing");
    }
    if (cfg.out_dir.empty()) validation_error("output.dir: must be nonempty");
}

}  // namespace replearn
