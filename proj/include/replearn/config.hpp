#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "replearn/model.hpp"
#include "replearn/solver.hpp"

namespace replearn {

/// Configuration or schema failure; `kind` distinguishes malformed documents
/// ("schema") from well-formed documents with invalid values ("validation").
class ConfigError : public std::runtime_error {
  public:
    ConfigError(std::string kind, const std::string& message)
        : std::runtime_error(message), kind_(std::move(kind)) {}
    const std::string& kind() const { return kind_; }

  private:
    std::string kind_;
};

struct SimOptions {
    double lambda0 = 0.40;
    int n_paths = 100;
    int t_max = 200;
    int horizon = 200;
    std::uint64_t seed = 1;
};

struct SweepSpec {
    std::string parameter;  // one of v, p, q, c, delta
    std::vector<double> values;
};

struct PriceOptions {
    double lambda_min = 0.01;
    double lambda_max = 0.99;
    bool find_delta_bar = false;
    double delta_bar_tol = 1e-3;
};

struct OutcomeOptions {
    double rho = 0.75;
};

struct FiniteOptions {
    int horizon = 100;
    std::vector<int> t_list;
};

enum class OutputFormat { Csv, Json, Both };

struct RunConfig {
    ModelParams model;
    SolveOptions solver;
    SimOptions sim;
    SweepSpec sweep;
    PriceOptions price;
    OutcomeOptions outcomes;
    FiniteOptions finite;
    std::string out_dir = "out";
    OutputFormat format = OutputFormat::Both;
    std::vector<std::string> defaults_applied;
};

/// Parses the flat `section.key = value` document.  Unknown or duplicate
/// keys and malformed lines raise schema errors with the offending key;
/// invariant violations raise validation errors naming the constraint.
/// Keys left at their defaults are listed in defaults_applied.
RunConfig parse_config(const std::string& text);

/// Re-checks every invariant on an assembled config (used after CLI
/// overrides).  Throws ConfigError("validation", ...).
void validate_config(const RunConfig& config);

OutputFormat parse_format(const std::string& word);

}  // namespace replearn
