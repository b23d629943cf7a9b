#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "replearn/io.hpp"
#include "replearn/run.hpp"

using namespace replearn;
namespace fs = std::filesystem;

namespace {

const char* kMinimalConfig =
    "model.v = 1\n"
    "model.p = 0.4\n"
    "model.q = 0.75\n"
    "model.c = 0.22\n"
    "model.delta = 0.92\n";

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name)
        : path(fs::temp_directory_path() / name) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("minimal config fills documented defaults") {
    const RunConfig cfg = parse_config(kMinimalConfig);
    CHECK(cfg.model.v == 1.0);
    CHECK(cfg.solver.m == 50);
    CHECK(cfg.solver.epsilon == 0.0);
    CHECK(cfg.solver.tol == 1e-10);
    const auto& d = cfg.defaults_applied;
    CHECK(std::find(d.begin(), d.end(), "solver.m") != d.end());
    CHECK(std::find(d.begin(), d.end(), "solver.epsilon") != d.end());
    CHECK(std::find(d.begin(), d.end(), "solver.tol") != d.end());
}

TEST_CASE("config schema and validation errors") {
    SUBCASE("violated invariant is named") {
        const std::string bad_q =
            "model.v = 1\nmodel.p = 0.4\nmodel.q = 0.5\nmodel.c = "
            "0.22\nmodel.delta = 0.92\n";
        CHECK_THROWS_WITH_AS(parse_config(bad_q),
                             "model.q: must satisfy 1/2 < q < 1", ConfigError);
        try {
            parse_config(bad_q);
        } catch (const ConfigError& e) {
            CHECK(e.kind() == "validation");
        }
    }
    SUBCASE("unknown keys are rejected") {
        const std::string doc = std::string(kMinimalConfig) + "model.vv = 2\n";
        try {
            parse_config(doc);
            FAIL("expected ConfigError");
        } catch (const ConfigError& e) {
            CHECK(e.kind() == "schema");
            CHECK(std::string(e.what()).find("model.vv") != std::string::npos);
        }
    }
    SUBCASE("missing required key") {
        CHECK_THROWS_AS(parse_config("model.v = 1\n"), ConfigError);
    }
    SUBCASE("duplicate key") {
        const std::string doc = std::string(kMinimalConfig) + "model.v = 2\n";
        CHECK_THROWS_AS(parse_config(doc), ConfigError);
    }
    SUBCASE("malformed number") {
        const std::string doc =
            std::string(kMinimalConfig) + "solver.tol = tiny\n";
        CHECK_THROWS_AS(parse_config(doc), ConfigError);
    }
    SUBCASE("comments and blank lines are fine") {
        const std::string doc =
            std::string("# calibration\n\n") + kMinimalConfig +
            "solver.m = 10  # coarse\n";
        CHECK(parse_config(doc).solver.m == 10);
    }
}

TEST_CASE("solve command writes solution files with provenance") {
    TempDir dir("replearn_cli_solve");
    RunConfig cfg = parse_config(kMinimalConfig);
    cfg.out_dir = dir.path.string();
    const auto written = run_command(cfg, "solve");
    REQUIRE(written.size() == 2);

    const std::string csv = read_file(dir.path / "solution.csv");
    CHECK(csv.find("ell,lambda,V,theta,Delta,D\n") != std::string::npos);
    CHECK(csv.find("# replearn") != std::string::npos);
    CHECK(csv.find("model.q=0.75") != std::string::npos);

    const auto j = nlohmann::json::parse(read_file(dir.path / "solution.json"));
    CHECK(j["meta"]["version"].is_string());
    CHECK(j["meta"]["command"] == "solve");
    CHECK(j["nodes"].size() == 101);
    CHECK(j["v_up"].get<double>() == doctest::Approx(5.0));
}

TEST_CASE("figures command reproduces the structural curves") {
    TempDir dir("replearn_cli_figures");
    RunConfig cfg = parse_config(kMinimalConfig);
    cfg.out_dir = dir.path.string();
    run_command(cfg, "figures");

    // Policy is zero outside the experimentation thresholds.
    std::istringstream fig1(read_file(dir.path / "fig1_policy_drift.csv"));
    std::string line;
    bool saw_header = false;
    int interior_ones = 0;
    while (std::getline(fig1, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!saw_header) {
            saw_header = true;
            continue;
        }
        std::stringstream row(line);
        std::string cell;
        std::getline(row, cell, ',');
        const double lambda = std::stod(cell);
        std::getline(row, cell, ',');
        std::getline(row, cell, ',');
        const double theta = std::stod(cell);
        if (lambda <= 2.0 / 11.0 + 1e-12 || lambda >= 2.0 / 3.0 - 1e-12)
            CHECK(theta == 0.0);
        else if (theta == 1.0)
            ++interior_ones;
    }
    CHECK(interior_ones > 0);

    // Ten paths, eleven rows each (t = 0..10).
    std::istringstream fig3(read_file(dir.path / "fig3_paths.csv"));
    int rows = 0;
    while (std::getline(fig3, line))
        if (!line.empty() && line[0] != '#' && line.find("path_id") != 0)
            ++rows;
    CHECK(rows == 110);
}

TEST_CASE("simulate command is byte-identical across runs with one seed") {
    RunConfig cfg = parse_config(kMinimalConfig);
    cfg.sim.n_paths = 5;
    cfg.sim.t_max = 20;
    cfg.sim.seed = 7;

    TempDir a("replearn_cli_sim_a");
    cfg.out_dir = a.path.string();
    run_command(cfg, "simulate");
    const std::string first = read_file(a.path / "paths.csv");

    TempDir b("replearn_cli_sim_b");
    cfg.out_dir = b.path.string();
    run_command(cfg, "simulate");
    const std::string second = read_file(b.path / "paths.csv");

    CHECK(first.size() > 0);
    // The provenance block ignores the directory, so bytes must agree.
    CHECK(first == second);
}

TEST_CASE("sweep command emits one classified row per point") {
    TempDir dir("replearn_cli_sweep");
    RunConfig cfg = parse_config(std::string(kMinimalConfig) +
                                 "sweep.parameter = c\n"
                                 "sweep.values = 0.1, 0.22, 0.35\n"
                                 "solver.m = 10\n");
    cfg.out_dir = dir.path.string();
    run_command(cfg, "sweep");

    std::istringstream csv(read_file(dir.path / "sweep.csv"));
    std::string line;
    int rows = 0;
    while (std::getline(csv, line))
        if (!line.empty() && line[0] != '#' && line.find("index,") != 0) {
            ++rows;
            CHECK((line.find("EarlyResolution") != std::string::npos ||
                   line.find("NoInvestment") != std::string::npos ||
                   line.find("DoubleHump") != std::string::npos ||
                   line.find("Other") != std::string::npos));
        }
    CHECK(rows == 3);

    const auto j = nlohmann::json::parse(read_file(dir.path / "sweep.json"));
    CHECK(j["points"].size() == 3);
}

TEST_CASE("sweep command requires a parameter") {
    TempDir dir("replearn_cli_sweep_err");
    RunConfig cfg = parse_config(kMinimalConfig);
    cfg.out_dir = dir.path.string();
    CHECK_THROWS_AS(run_command(cfg, "sweep"), ConfigError);
}

TEST_CASE("remaining commands produce their artifacts") {
    TempDir dir("replearn_cli_rest");
    RunConfig cfg = parse_config(std::string(kMinimalConfig) +
                                 "solver.m = 10\n"
                                 "sim.n_paths = 50\n"
                                 "sim.horizon = 30\n"
                                 "finite.horizon = 12\n"
                                 "finite.t_list = 2, 5, 10\n"
                                 "price.find_delta_bar = false\n"
                                 "outcomes.rho = 0.75\n");
    cfg.out_dir = dir.path.string();

    run_command(cfg, "classify");
    CHECK(fs::exists(dir.path / "classification.json"));
    run_command(cfg, "welfare");
    CHECK(fs::exists(dir.path / "welfare.json"));
    run_command(cfg, "finite");
    CHECK(fs::exists(dir.path / "finite.csv"));
    CHECK(fs::exists(dir.path / "convergence.csv"));
    run_command(cfg, "price");
    CHECK(fs::exists(dir.path / "flex_solution.csv"));
    run_command(cfg, "outcomes");
    CHECK(fs::exists(dir.path / "outcome_solution.csv"));

    CHECK_THROWS_AS(run_command(cfg, "nonsense"), std::invalid_argument);

    const auto j =
        nlohmann::json::parse(read_file(dir.path / "classification.json"));
    CHECK(j["classification"] == "EarlyResolution");
}

TEST_CASE("figure datasets derive from the solution alone") {
    // Same config, fresh directories: figures must not depend on any state
    // other than the solution and the recorded seed.
    RunConfig cfg = parse_config(kMinimalConfig);
    TempDir a("replearn_cli_fig_a");
    cfg.out_dir = a.path.string();
    run_command(cfg, "figures");
    TempDir b("replearn_cli_fig_b");
    cfg.out_dir = b.path.string();
    run_command(cfg, "figures");
    for (const char* name :
         {"fig1_policy_drift.csv", "fig2_value_gradient.csv",
          "fig3_paths.csv"})
        CHECK(read_file(a.path / name) == read_file(b.path / name));
}
