#pragma once

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "replearn/config.hpp"
#include "replearn/finite_horizon.hpp"
#include "replearn/outcome_ext.hpp"
#include "replearn/price_ext.hpp"
#include "replearn/simulate.hpp"
#include "replearn/solver.hpp"

namespace replearn {

/// Formats a double with 12 significant digits ('.' decimal separator).
std::string fmt12(double x);

/// Every effective configuration entry as key=value strings, used for the
/// provenance block of each output file.
std::vector<std::pair<std::string, std::string>> config_kv(
    const RunConfig& config);

/// Provenance header: artifact version, command, full config, defaults.
nlohmann::json meta_json(const RunConfig& config, const std::string& command);
std::string csv_provenance(const RunConfig& config,
                           const std::string& command);

void write_text_file(const std::string& path, const std::string& content);

nlohmann::json solution_json(const Solution& sol);
std::string solution_csv(const Solution& sol);

nlohmann::json finite_json(const FiniteSolution& fs);
std::string finite_csv(const FiniteSolution& fs);

nlohmann::json convergence_json(const ConvergenceReport& rep);
std::string convergence_csv(const ConvergenceReport& rep);

std::string paths_csv(const std::vector<Path>& paths);
nlohmann::json paths_summary_json(const std::vector<Path>& paths);

nlohmann::json classification_json(const PatternReport& rep,
                                   const Solution& sol);
std::string classification_csv(const PatternReport& rep);

nlohmann::json welfare_json(const WelfareReport& rep);
std::string welfare_csv(const WelfareReport& rep);

/// One sweep row: solved point plus its classification.
struct SweepRow {
    int index = 0;
    std::string parameter;
    double value = 0.0;
    Statics statics;
    PatternClass classification = PatternClass::NoInvestment;
    int n_components = 0;
    int invest_nodes = 0;
    double invest_lambda_lo = 0.0;
    double invest_lambda_hi = 0.0;
    double max_delta = 0.0;
    double v_up = 0.0;
    int iterations = 0;
};

nlohmann::json sweep_json(const std::vector<SweepRow>& rows);
std::string sweep_csv(const std::vector<SweepRow>& rows);

nlohmann::json flex_json(const FlexSolution& fx);
std::string flex_csv(const FlexSolution& fx);

nlohmann::json delta_bar_json(const DeltaBarResult& res);

nlohmann::json outcome_json(const OutcomeSolution& os);
std::string outcome_csv(const OutcomeSolution& os);

}  // namespace replearn
