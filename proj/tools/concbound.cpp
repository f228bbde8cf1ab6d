#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "concbound/concbound.hpp"

namespace {

struct CliOverrides {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::int64_t> replications;
    std::optional<std::string> out_path;
    std::optional<std::string> format;
};

void add_common_flags(CLI::App* cmd, CliOverrides& o, bool config_required) {
    auto* config = cmd->add_option("--config", o.config_path, "path to a run configuration file");
    if (config_required) config->required();
    cmd->add_option("--seed", o.seed, "override the configured seed");
    cmd->add_option("--replications", o.replications, "override the configured replication count");
    cmd->add_option("--out", o.out_path, "write output to this file instead of stdout");
    cmd->add_option("--format", o.format, "output format: csv or jsonl")
        ->check(CLI::IsMember({"csv", "jsonl"}));
}

int run_command(concbound::Command command, const CliOverrides& o) {
    using namespace concbound;
    RunConfig cfg;
    if (!o.config_path.empty()) {
        std::ifstream file(o.config_path);
        if (!file.good()) {
            std::cerr << "error: cannot read config file '" << o.config_path << "'\n";
            return 2;
        }
        std::ostringstream text;
        text << file.rdbuf();
        cfg = parse_config(text.str());
        if (cfg.command != command) {
            std::cerr << "error: config file declares command '" << to_string(cfg.command)
                      << "' but the '" << to_string(command) << "' subcommand was invoked\n";
            return 2;
        }
    } else {
        cfg.command = command;
    }
    if (o.seed) cfg.seed = *o.seed;
    if (o.replications) cfg.replications = *o.replications;
    if (o.out_path) cfg.output_path = *o.out_path;
    if (o.format) cfg.format = *o.format == "csv" ? OutputFormat::Csv : OutputFormat::Jsonl;
    return concbound::run(cfg);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"concentration-bound evaluation and Monte Carlo verification"};
    app.require_subcommand(1);

    CliOverrides bound_opts, simulate_opts, verify_opts, comb_opts, regimes_opts;
    auto* bound = app.add_subcommand("bound", "evaluate closed-form bounds from a config");
    add_common_flags(bound, bound_opts, true);
    auto* simulate = app.add_subcommand("simulate", "run the Monte Carlo estimator");
    add_common_flags(simulate, simulate_opts, true);
    auto* verify = app.add_subcommand("verify", "run bound-versus-simulation dominance checks");
    add_common_flags(verify, verify_opts, true);
    auto* comb = app.add_subcommand("combinatorics", "tabulate exact tuple counts and the bound");
    add_common_flags(comb, comb_opts, false);
    auto* regimes = app.add_subcommand("regimes", "compare bound families over a parameter grid");
    add_common_flags(regimes, regimes_opts, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return 2;
    }

    try {
        if (bound->parsed()) return run_command(concbound::Command::Bound, bound_opts);
        if (simulate->parsed()) return run_command(concbound::Command::Simulate, simulate_opts);
        if (verify->parsed()) return run_command(concbound::Command::Verify, verify_opts);
        if (comb->parsed()) return run_command(concbound::Command::Combinatorics, comb_opts);
        if (regimes->parsed()) return run_command(concbound::Command::Regimes, regimes_opts);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
