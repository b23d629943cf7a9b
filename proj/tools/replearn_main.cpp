#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "replearn/config.hpp"
#include "replearn/run.hpp"
#include "replearn/version.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int run(const std::string& command, const std::string& config_path,
        const std::string& out_dir, long long seed, bool seed_set,
        const std::string& format) {
    replearn::RunConfig cfg = replearn::parse_config(read_file(config_path));
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    if (seed_set) cfg.sim.seed = static_cast<std::uint64_t>(seed);
    if (!format.empty()) cfg.format = replearn::parse_format(format);

    const auto written = replearn::run_command(cfg, command);
    for (const auto& path : written) std::cout << path << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{std::string(replearn::kArtifactName) +
                 " - reputation and social-learning equilibrium toolkit"};
    app.set_version_flag("--version", replearn::kVersion);
    app.require_subcommand(1);

    static const char* commands[] = {"solve",   "finite",  "simulate",
                                     "classify", "welfare", "sweep",
                                     "price",   "outcomes", "figures"};
    std::string config_path;
    std::string out_dir;
    std::string format;
    long long seed = 0;
    bool seed_set = false;
    std::string chosen;
    for (const char* name : commands) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "configuration file")
            ->required();
        sub->add_option("--out", out_dir, "output directory");
        sub->add_option("--seed", seed, "override sim.seed")
            ->each([&seed_set](const std::string&) { seed_set = true; });
        sub->add_option("--format", format, "csv|json|both");
        sub->callback([&chosen, name]() { chosen = name; });
    }

    CLI11_PARSE(app, argc, argv);

    try {
        return run(chosen, config_path, out_dir, seed, seed_set, format);
    } catch (const replearn::ConfigError& e) {
        nlohmann::json err{{"error", {{"type", e.kind()}, {"message", e.what()}}}};
        std::cerr << err.dump() << "\n";
        return 1;
    } catch (const std::exception& e) {
        nlohmann::json err{
            {"error", {{"type", "runtime"}, {"message", e.what()}}}};
        std::cerr << err.dump() << "\n";
        return 1;
    }
}
