#include "replearn/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "replearn/version.hpp"

namespace replearn {

using nlohmann::json;

std::string fmt12(double x) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

std::vector<std::pair<std::string, std::string>> config_kv(
    const RunConfig& cfg) {
    std::vector<std::pair<std::string, std::string>> kv;
    kv.emplace_back("model.v", fmt12(cfg.model.v));
    kv.emplace_back("model.p", fmt12(cfg.model.p));
    kv.emplace_back("model.q", fmt12(cfg.model.q));
    kv.emplace_back("model.c", fmt12(cfg.model.c));
    kv.emplace_back("model.delta", fmt12(cfg.model.delta));
    kv.emplace_back("solver.m", std::to_string(cfg.solver.m));
    kv.emplace_back("solver.epsilon", fmt12(cfg.solver.epsilon));
    kv.emplace_back("solver.tol", fmt12(cfg.solver.tol));
    kv.emplace_back("solver.max_iter", std::to_string(cfg.solver.max_iter));
    kv.emplace_back("sim.lambda0", fmt12(cfg.sim.lambda0));
    kv.emplace_back("sim.n_paths", std::to_string(cfg.sim.n_paths));
    kv.emplace_back("sim.t_max", std::to_string(cfg.sim.t_max));
    kv.emplace_back("sim.horizon", std::to_string(cfg.sim.horizon));
    kv.emplace_back("sim.seed", std::to_string(cfg.sim.seed));
    if (!cfg.sweep.parameter.empty()) {
        kv.emplace_back("sweep.parameter", cfg.sweep.parameter);
        std::string vals;
        for (std::size_t i = 0; i < cfg.sweep.values.size(); ++i) {
            if (i) vals += ",";
            vals += fmt12(cfg.sweep.values[i]);
        }
        kv.emplace_back("sweep.values", vals);
    }
    kv.emplace_back("price.lambda_min", fmt12(cfg.price.lambda_min));
    kv.emplace_back("price.lambda_max", fmt12(cfg.price.lambda_max));
    kv.emplace_back("price.find_delta_bar",
                    cfg.price.find_delta_bar ? "true" : "false");
    kv.emplace_back("price.delta_bar_tol", fmt12(cfg.price.delta_bar_tol));
    kv.emplace_back("outcomes.rho", fmt12(cfg.outcomes.rho));
    kv.emplace_back("finite.horizon", std::to_string(cfg.finite.horizon));
    if (!cfg.finite.t_list.empty()) {
        std::string vals;
        for (std::size_t i = 0; i < cfg.finite.t_list.size(); ++i) {
            if (i) vals += ",";
            vals += std::to_string(cfg.finite.t_list[i]);
        }
        kv.emplace_back("finite.t_list", vals);
    }
    return kv;
}

json meta_json(const RunConfig& cfg, const std::string& command) {
    json meta;
    meta["artifact"] = kArtifactName;
    meta["version"] = kVersion;
    meta["command"] = command;
    json conf = json::object();
    for (const auto& [k, v] : config_kv(cfg)) conf[k] = v;
    meta["config"] = conf;
    meta["defaults_applied"] = cfg.defaults_applied;
    return meta;
}

std::string csv_provenance(const RunConfig& cfg, const std::string& command) {
    std::ostringstream out;
    out << "# " << kArtifactName << " " << kVersion << " command=" << command
        << "\n";
    for (const auto& [k, v] : config_kv(cfg)) out << "# " << k << "=" << v
                                                 << "\n";
    if (!cfg.defaults_applied.empty()) {
        out << "# defaults_applied=";
        for (std::size_t i = 0; i < cfg.defaults_applied.size(); ++i) {
            if (i) out << ",";
            out << cfg.defaults_applied[i];
        }
        out << "\n";
    }
    return out.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << content;
    if (!out) throw std::runtime_error("write failed: " + path);
}

namespace {

json statics_json(const Statics& s) {
    return json{{"z", s.z},
                {"K", s.K},
                {"r_under", s.r_under},
                {"r_over", s.r_over},
                {"lambda_under", s.lambda_under},
                {"lambda_over", s.lambda_over},
                {"eta", s.eta},
                {"log_z", s.log_z},
                {"ell_under", s.ell_under},
                {"ell_over", s.ell_over}};
}

}  // namespace

json solution_json(const Solution& sol) {
    json j;
    j["statics"] = statics_json(sol.statics);
    j["v_down"] = sol.v_down;
    j["v_up"] = sol.v_up;
    j["iterations"] = sol.iterations;
    j["sup_residual"] = sol.sup_residual;
    json nodes = json::array();
    for (int k = 0; k < sol.grid.size(); ++k) {
        const auto i = static_cast<std::size_t>(k);
        nodes.push_back(json{{"ell", sol.grid.nodes[i]},
                             {"lambda", sol.grid.lambda_of(k)},
                             {"V", sol.V[i]},
                             {"theta", sol.theta[i]},
                             {"Delta", sol.Delta[i]},
                             {"D", sol.D[i]}});
    }
    j["nodes"] = nodes;
    return j;
}

std::string solution_csv(const Solution& sol) {
    std::ostringstream out;
    out << "ell,lambda,V,theta,Delta,D\n";
    for (int k = 0; k < sol.grid.size(); ++k) {
        const auto i = static_cast<std::size_t>(k);
        out << fmt12(sol.grid.nodes[i]) << "," << fmt12(sol.grid.lambda_of(k))
            << "," << fmt12(sol.V[i]) << "," << fmt12(sol.theta[i]) << ","
            << fmt12(sol.Delta[i]) << "," << fmt12(sol.D[i]) << "\n";
    }
    return out.str();
}

json finite_json(const FiniteSolution& fs) {
    json j;
    j["T"] = fs.T;
    j["buyer_tie_break"] =
        fs.buyer_tie_break == BuyerTieBreak::Buy ? "buy" : "pass";
    j["statics"] = statics_json(fs.statics);
    json periods = json::array();
    for (int t = 1; t <= fs.T; ++t) {
        const auto& V = fs.V[static_cast<std::size_t>(t - 1)];
        const auto& th = fs.theta[static_cast<std::size_t>(t - 1)];
        json nodes = json::array();
        for (int k = 0; k < fs.grid.size(); ++k) {
            const auto i = static_cast<std::size_t>(k);
            nodes.push_back(json{{"ell", fs.grid.nodes[i]},
                                 {"lambda", fs.grid.lambda_of(k)},
                                 {"V", V[i]},
                                 {"theta", th[i]}});
        }
        periods.push_back(json{{"t", t}, {"nodes", nodes}});
    }
    j["periods"] = periods;
    return j;
}

std::string finite_csv(const FiniteSolution& fs) {
    std::ostringstream out;
    out << "t,node,ell,lambda,V,theta\n";
    for (int t = 1; t <= fs.T; ++t) {
        const auto& V = fs.V[static_cast<std::size_t>(t - 1)];
        const auto& th = fs.theta[static_cast<std::size_t>(t - 1)];
        for (int k = 0; k < fs.grid.size(); ++k) {
            const auto i = static_cast<std::size_t>(k);
            out << t << "," << k << "," << fmt12(fs.grid.nodes[i]) << ","
                << fmt12(fs.grid.lambda_of(k)) << "," << fmt12(V[i]) << ","
                << fmt12(th[i]) << "\n";
        }
    }
    return out.str();
}

json convergence_json(const ConvergenceReport& rep) {
    json j;
    j["gaps_nonincreasing"] = rep.gaps_nonincreasing;
    j["pointwise_nondecreasing"] = rep.pointwise_nondecreasing;
    json pts = json::array();
    for (const auto& p : rep.points)
        pts.push_back(json{{"T", p.T}, {"gap", p.gap}, {"bound", p.bound}});
    j["points"] = pts;
    return j;
}

std::string convergence_csv(const ConvergenceReport& rep) {
    std::ostringstream out;
    out << "T,gap,bound\n";
    for (const auto& p : rep.points)
        out << p.T << "," << fmt12(p.gap) << "," << fmt12(p.bound) << "\n";
    return out.str();
}

std::string paths_csv(const std::vector<Path>& paths) {
    std::ostringstream out;
    out << "path_id,t,lambda,ell,theta,action\n";
    for (const auto& path : paths) {
        for (std::size_t t = 0; t < path.lambda_series.size(); ++t) {
            const double lambda = path.lambda_series[t];
            const double ell = std::log(lambda / (1.0 - lambda));
            out << path.path_id << "," << t << "," << fmt12(lambda) << ","
                << fmt12(ell) << ",";
            if (t == 0)
                out << "0,0\n";  // no decision precedes the initial belief
            else
                out << fmt12(path.theta_series[t - 1]) << ","
                    << path.action_series[t - 1] << "\n";
        }
    }
    return out.str();
}

json paths_summary_json(const std::vector<Path>& paths) {
    json arr = json::array();
    for (const auto& path : paths) {
        json j;
        j["path_id"] = path.path_id;
        j["seed"] = path.seed;
        j["periods"] = path.theta_series.size();
        j["absorbed_at"] =
            path.absorbed_at ? json(*path.absorbed_at) : json(nullptr);
        j["absorbed_to"] = path.absorbed_to == AbsorbSide::Up     ? "up"
                           : path.absorbed_to == AbsorbSide::Down ? "down"
                                                                  : "none";
        j["lambda_final"] = path.lambda_series.back();
        arr.push_back(j);
    }
    return json{{"paths", arr}};
}

json classification_json(const PatternReport& rep, const Solution& sol) {
    json j;
    j["classification"] = to_string(rep.classification);
    json comps = json::array();
    for (const auto& c : rep.components)
        comps.push_back(json{{"lo", c.lo},
                             {"hi", c.hi},
                             {"lambda_lo", c.lambda_lo},
                             {"lambda_hi", c.lambda_hi}});
    j["components"] = comps;
    json gaps = json::array();
    for (const auto& g : rep.gap_intervals)
        gaps.push_back(json{{"lo", g.lo},
                            {"hi", g.hi},
                            {"lambda_lo", g.lambda_lo},
                            {"lambda_hi", g.lambda_hi}});
    j["gap_intervals"] = gaps;
    j["lambda_under"] = sol.statics.lambda_under;
    j["lambda_over"] = sol.statics.lambda_over;
    return j;
}

std::string classification_csv(const PatternReport& rep) {
    std::ostringstream out;
    out << "classification,n_components,invest_nodes,lambda_lo,lambda_hi\n";
    int nodes = 0;
    for (const auto& c : rep.components) nodes += c.hi - c.lo + 1;
    out << to_string(rep.classification) << "," << rep.components.size() << ","
        << nodes << ",";
    if (!rep.components.empty())
        out << fmt12(rep.components.front().lambda_lo) << ","
            << fmt12(rep.components.back().lambda_hi) << "\n";
    else
        out << "0,0\n";
    return out.str();
}

json welfare_json(const WelfareReport& rep) {
    return json{{"n_paths", rep.n_paths},
                {"horizon", rep.horizon},
                {"buyer_mean", rep.buyer_mean},
                {"buyer_se", rep.buyer_se},
                {"seller_mean", rep.seller_mean},
                {"seller_se", rep.seller_se},
                {"total_mean", rep.total_mean},
                {"total_se", rep.total_se}};
}

std::string welfare_csv(const WelfareReport& rep) {
    std::ostringstream out;
    out << "n_paths,horizon,buyer_mean,buyer_se,seller_mean,seller_se,"
           "total_mean,total_se\n";
    out << rep.n_paths << "," << rep.horizon << "," << fmt12(rep.buyer_mean)
        << "," << fmt12(rep.buyer_se) << "," << fmt12(rep.seller_mean) << ","
        << fmt12(rep.seller_se) << "," << fmt12(rep.total_mean) << ","
        << fmt12(rep.total_se) << "\n";
    return out.str();
}

json sweep_json(const std::vector<SweepRow>& rows) {
    json arr = json::array();
    for (const auto& r : rows) {
        arr.push_back(json{{"index", r.index},
                           {"parameter", r.parameter},
                           {"value", r.value},
                           {"z", r.statics.z},
                           {"lambda_under", r.statics.lambda_under},
                           {"lambda_over", r.statics.lambda_over},
                           {"eta", r.statics.eta},
                           {"classification", to_string(r.classification)},
                           {"n_components", r.n_components},
                           {"invest_nodes", r.invest_nodes},
                           {"invest_lambda_lo", r.invest_lambda_lo},
                           {"invest_lambda_hi", r.invest_lambda_hi},
                           {"max_delta", r.max_delta},
                           {"v_up", r.v_up},
                           {"iterations", r.iterations}});
    }
    return json{{"points", arr}};
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::ostringstream out;
    out << "index,parameter,value,z,lambda_under,lambda_over,eta,"
           "classification,n_components,invest_nodes,invest_lambda_lo,"
           "invest_lambda_hi,max_delta,v_up,iterations\n";
    for (const auto& r : rows) {
        out << r.index << "," << r.parameter << "," << fmt12(r.value) << ","
            << fmt12(r.statics.z) << "," << fmt12(r.statics.lambda_under)
            << "," << fmt12(r.statics.lambda_over) << ","
            << fmt12(r.statics.eta) << "," << to_string(r.classification)
            << "," << r.n_components << "," << r.invest_nodes << ","
            << fmt12(r.invest_lambda_lo) << "," << fmt12(r.invest_lambda_hi)
            << "," << fmt12(r.max_delta) << "," << fmt12(r.v_up) << ","
            << r.iterations << "\n";
    }
    return out.str();
}

json flex_json(const FlexSolution& fx) {
    json j;
    j["lambda_min"] = fx.domain.lambda_min;
    j["lambda_max"] = fx.domain.lambda_max;
    j["m"] = fx.m;
    j["pooling_count"] = fx.pooling_count;
    j["iterations"] = fx.iterations;
    j["sup_residual"] = fx.sup_residual;
    json nodes = json::array();
    for (std::size_t k = 0; k < fx.ell.size(); ++k)
        nodes.push_back(json{{"ell", fx.ell[k]},
                             {"lambda", fx.lambda[k]},
                             {"V", fx.V[k]},
                             {"theta", fx.theta[k]},
                             {"price", fx.price[k]},
                             {"pooling", fx.pooling[k] != 0}});
    j["nodes"] = nodes;
    return j;
}

std::string flex_csv(const FlexSolution& fx) {
    std::ostringstream out;
    out << "ell,lambda,V,theta,price,pooling\n";
    for (std::size_t k = 0; k < fx.ell.size(); ++k)
        out << fmt12(fx.ell[k]) << "," << fmt12(fx.lambda[k]) << ","
            << fmt12(fx.V[k]) << "," << fmt12(fx.theta[k]) << ","
            << fmt12(fx.price[k]) << "," << int(fx.pooling[k]) << "\n";
    return out.str();
}

json delta_bar_json(const DeltaBarResult& res) {
    json j;
    j["found"] = res.found;
    j["lo"] = res.lo;
    j["hi"] = res.hi;
    j["estimate"] = res.estimate;
    j["monotone_consistent"] = res.monotone_consistent;
    j["note"] = res.note;
    json evals = json::array();
    for (const auto& e : res.evaluations)
        evals.push_back(json{{"delta", e.delta}, {"no_pooling", e.no_pooling}});
    j["evaluations"] = evals;
    return j;
}

json outcome_json(const OutcomeSolution& os) {
    json j;
    j["rho"] = os.rho;
    j["w"] = os.w;
    j["statics"] = statics_json(os.statics);
    j["v_down"] = os.v_down;
    j["v_up"] = os.v_up;
    j["iterations"] = os.iterations;
    j["sup_residual"] = os.sup_residual;
    j["max_display_discrepancy"] = os.max_display_discrepancy;
    json nodes = json::array();
    for (int k = 0; k < os.grid.size(); ++k) {
        const auto i = static_cast<std::size_t>(k);
        nodes.push_back(json{{"ell", os.grid.nodes[i]},
                             {"lambda", os.grid.lambda_of(k)},
                             {"V", os.V[i]},
                             {"theta", os.theta[i]},
                             {"Delta", os.Delta[i]},
                             {"Delta_display", os.Delta_display[i]}});
    }
    j["nodes"] = nodes;
    return j;
}

std::string outcome_csv(const OutcomeSolution& os) {
    std::ostringstream out;
    out << "ell,lambda,V,theta,Delta,Delta_display,rho\n";
    for (int k = 0; k < os.grid.size(); ++k) {
        const auto i = static_cast<std::size_t>(k);
        out << fmt12(os.grid.nodes[i]) << "," << fmt12(os.grid.lambda_of(k))
            << "," << fmt12(os.V[i]) << "," << fmt12(os.theta[i]) << ","
            << fmt12(os.Delta[i]) << "," << fmt12(os.Delta_display[i]) << ","
            << fmt12(os.rho) << "\n";
    }
    return out.str();
}

}  // namespace replearn
