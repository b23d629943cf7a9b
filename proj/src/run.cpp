#include "replearn/run.hpp"

#include <cmath>
#include <filesystem>
#include <sstream>
#include <stdexcept>

#include "replearn/io.hpp"

namespace replearn {

namespace {

using nlohmann::json;

struct Emitter {
    const RunConfig& cfg;
    std::string command;
    std::vector<std::string> written;

    std::string path_of(const std::string& name) const {
        return (std::filesystem::path(cfg.out_dir) / name).string();
    }

    void csv(const std::string& name, const std::string& body,
             bool always = false) {
        if (cfg.format == OutputFormat::Json && !always) return;
        const std::string path = path_of(name);
        write_text_file(path, csv_provenance(cfg, command) + body);
        written.push_back(path);
    }

    void js(const std::string& name, json payload, bool always = false) {
        if (cfg.format == OutputFormat::Csv && !always) return;
        payload["meta"] = meta_json(cfg, command);
        const std::string path = path_of(name);
        write_text_file(path, payload.dump(2) + "\n");
        written.push_back(path);
    }
};

std::vector<Path> simulate_paths(const Solution& sol, const RunConfig& cfg) {
    std::vector<Path> paths;
    paths.reserve(static_cast<std::size_t>(cfg.sim.n_paths));
    for (int i = 0; i < cfg.sim.n_paths; ++i)
        paths.push_back(simulate_path(sol, cfg.sim.lambda0, cfg.sim.t_max,
                                      cfg.sim.seed,
                                      static_cast<std::uint64_t>(i)));
    return paths;
}

std::vector<SweepRow> run_sweep(const RunConfig& cfg) {
    std::vector<SweepRow> rows;
    for (std::size_t i = 0; i < cfg.sweep.values.size(); ++i) {
        ModelParams mp = cfg.model;
        const double value = cfg.sweep.values[i];
        if (cfg.sweep.parameter == "v") mp.v = value;
        else if (cfg.sweep.parameter == "p") mp.p = value;
        else if (cfg.sweep.parameter == "q") mp.q = value;
        else if (cfg.sweep.parameter == "c") mp.c = value;
        else if (cfg.sweep.parameter == "delta") mp.delta = value;
        else throw std::invalid_argument("sweep.parameter: unknown parameter");

        const Solution sol = solve(mp, cfg.solver);
        const PatternReport rep = classify(sol);
        SweepRow row;
        row.index = static_cast<int>(i);
        row.parameter = cfg.sweep.parameter;
        row.value = value;
        row.statics = sol.statics;
        row.classification = rep.classification;
        row.n_components = static_cast<int>(rep.components.size());
        for (const auto& comp : rep.components)
            row.invest_nodes += comp.hi - comp.lo + 1;
        if (!rep.components.empty()) {
            row.invest_lambda_lo = rep.components.front().lambda_lo;
            row.invest_lambda_hi = rep.components.back().lambda_hi;
        }
        double max_d = sol.Delta[1];
        for (int k = 1; k <= 2 * sol.grid.m - 1; ++k)
            max_d = std::max(max_d, sol.Delta[static_cast<std::size_t>(k)]);
        row.max_delta = max_d;
        row.v_up = sol.v_up;
        row.iterations = sol.iterations;
        rows.push_back(row);
    }
    return rows;
}

/// Figure 1 dataset: policy, marginal incentive, and drift against belief,
/// padded with cascade-region rows so the curves cover (0, 1).
std::string fig_policy_drift_csv(const Solution& sol) {
    std::ostringstream out;
    out << "lambda,ell,theta,Delta,drift\n";
    const Statics& s = sol.statics;
    const int pad = 25;
    const auto row = [&](double lambda, double ell, double theta, double Delta) {
        // Drift is a policy object of the experimentation region; beliefs in
        // cascades are frozen.
        const bool interior =
            lambda > s.lambda_under && lambda < s.lambda_over;
        const double mu = interior ? drift(theta, sol.params.q, s.z) : 0.0;
        out << fmt12(lambda) << "," << fmt12(ell) << "," << fmt12(theta) << ","
            << fmt12(Delta) << "," << fmt12(mu) << "\n";
    };
    for (int i = 0; i < pad; ++i) {
        const double lambda =
            0.01 + i * (s.lambda_under - 0.01) / pad;
        row(lambda, std::log(lambda / (1.0 - lambda)), 0.0, -sol.params.c);
    }
    for (int k = 0; k < sol.grid.size(); ++k) {
        const auto i = static_cast<std::size_t>(k);
        row(sol.grid.lambda_of(k), sol.grid.nodes[i], sol.theta[i],
            sol.Delta[i]);
    }
    for (int i = 1; i <= pad; ++i) {
        const double lambda =
            s.lambda_over + i * (0.99 - s.lambda_over) / pad;
        row(lambda, std::log(lambda / (1.0 - lambda)), 0.0, -sol.params.c);
    }
    return out.str();
}

/// Figure 2 dataset: value and its finite-difference gradient.
std::string fig_value_gradient_csv(const Solution& sol) {
    std::ostringstream out;
    out << "lambda,ell,V,D\n";
    const Statics& s = sol.statics;
    const int pad = 25;
    const auto row = [&](double lambda, double ell, double V, double D) {
        out << fmt12(lambda) << "," << fmt12(ell) << "," << fmt12(V) << ","
            << fmt12(D) << "\n";
    };
    for (int i = 0; i < pad; ++i) {
        const double lambda = 0.01 + i * (s.lambda_under - 0.01) / pad;
        row(lambda, std::log(lambda / (1.0 - lambda)), sol.v_down, 0.0);
    }
    for (int k = 0; k < sol.grid.size(); ++k) {
        const auto i = static_cast<std::size_t>(k);
        row(sol.grid.lambda_of(k), sol.grid.nodes[i], sol.V[i], sol.D[i]);
    }
    for (int i = 1; i <= pad; ++i) {
        const double lambda = s.lambda_over + i * (0.99 - s.lambda_over) / pad;
        row(lambda, std::log(lambda / (1.0 - lambda)), sol.v_up, 0.0);
    }
    return out.str();
}

/// Figure 3 dataset: ten 10-period paths from evenly spaced interior starts.
std::vector<Path> fig_paths(const Solution& sol, std::uint64_t seed) {
    const Statics& s = sol.statics;
    std::vector<Path> paths;
    for (int i = 0; i < 10; ++i) {
        const double lambda0 =
            s.lambda_under +
            (i + 0.5) * (s.lambda_over - s.lambda_under) / 10.0;
        Path path = simulate_path(sol, lambda0, 10, seed,
                                  static_cast<std::uint64_t>(i));
        paths.push_back(std::move(path));
    }
    return paths;
}

}  // namespace

std::vector<std::string> run_command(const RunConfig& cfg,
                                     const std::string& command) {
    validate_config(cfg);
    std::filesystem::create_directories(cfg.out_dir);
    Emitter em{cfg, command, {}};

    if (command == "solve") {
        const Solution sol = solve(cfg.model, cfg.solver);
        em.csv("solution.csv", solution_csv(sol));
        em.js("solution.json", solution_json(sol));
    } else if (command == "finite") {
        const FiniteSolution fs =
            solve_finite(cfg.model, cfg.finite.horizon, cfg.solver);
        em.csv("finite.csv", finite_csv(fs));
        em.js("finite.json", finite_json(fs));
        if (!cfg.finite.t_list.empty()) {
            const ConvergenceReport rep =
                convergence_to_infinite(cfg.model, cfg.finite.t_list,
                                        cfg.solver);
            em.csv("convergence.csv", convergence_csv(rep));
            em.js("convergence.json", convergence_json(rep));
        }
    } else if (command == "simulate") {
        const Solution sol = solve(cfg.model, cfg.solver);
        const std::vector<Path> paths = simulate_paths(sol, cfg);
        em.csv("paths.csv", paths_csv(paths));
        em.js("simulate.json", paths_summary_json(paths));
    } else if (command == "classify") {
        const Solution sol = solve(cfg.model, cfg.solver);
        const PatternReport rep = classify(sol);
        em.csv("classification.csv", classification_csv(rep));
        em.js("classification.json", classification_json(rep, sol));
    } else if (command == "welfare") {
        const Solution sol = solve(cfg.model, cfg.solver);
        const WelfareReport rep =
            welfare_mc(sol, cfg.sim.lambda0, cfg.sim.n_paths, cfg.sim.horizon,
                       cfg.sim.seed);
        em.csv("welfare.csv", welfare_csv(rep));
        em.js("welfare.json", welfare_json(rep));
    } else if (command == "sweep") {
        if (cfg.sweep.parameter.empty())
            throw ConfigError("validation",
                              "sweep.parameter: required for the sweep command");
        const std::vector<SweepRow> rows = run_sweep(cfg);
        em.csv("sweep.csv", sweep_csv(rows));
        em.js("sweep.json", sweep_json(rows));
    } else if (command == "price") {
        FlexParams fp{cfg.model.v, cfg.model.q, cfg.model.c, cfg.model.delta};
        FlexDomain domain{cfg.price.lambda_min, cfg.price.lambda_max};
        const FlexSolution fx =
            solve_flexible(fp, domain, cfg.solver.m, cfg.solver.tol);
        em.csv("flex_solution.csv", flex_csv(fx));
        em.js("flex_solution.json", flex_json(fx));
        if (cfg.price.find_delta_bar) {
            const DeltaBarResult res =
                delta_bar(fp, domain, cfg.solver.m, cfg.price.delta_bar_tol,
                          cfg.solver.tol);
            // JSON is this artifact's only form, so the format flag does not
            // suppress it.
            em.js("delta_bar.json", delta_bar_json(res), true);
        }
    } else if (command == "outcomes") {
        const OutcomeSolution os =
            solve_outcomes(cfg.model, cfg.outcomes.rho, cfg.solver.m,
                           cfg.solver.tol, cfg.solver.epsilon);
        em.csv("outcome_solution.csv", outcome_csv(os));
        em.js("outcome_solution.json", outcome_json(os));
    } else if (command == "figures") {
        // Figure data is CSV by definition, independent of output.format.
        const Solution sol = solve(cfg.model, cfg.solver);
        em.csv("fig1_policy_drift.csv", fig_policy_drift_csv(sol), true);
        em.csv("fig2_value_gradient.csv", fig_value_gradient_csv(sol), true);
        em.csv("fig3_paths.csv", paths_csv(fig_paths(sol, cfg.sim.seed)),
               true);
    } else {
        throw std::invalid_argument("unknown command '" + command + "'");
    }
    return em.written;
}

}  // namespace replearn
