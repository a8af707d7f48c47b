// epigraphon: command-line front end for graph and graphon SEIR scenarios.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "epigraphon/config.hpp"
#include "epigraphon/error.hpp"
#include "epigraphon/scenario.hpp"

namespace {

using namespace epigraphon;

struct Overrides {
    std::string config;
    std::optional<double> beta, gamma, mu, dt, t_end;
    std::optional<std::size_t> n;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
};

std::string exit_code_table() {
    std::string text = "Exit codes:\n  0   success\n  1   unexpected internal error\n  2   invalid command line\n";
    for (int k = 0; k <= static_cast<int>(ErrorKind::IoError); ++k) {
        const auto kind = static_cast<ErrorKind>(k);
        text += "  " + std::to_string(exit_code(kind)) + "  " + std::string(to_string(kind)) + "\n";
    }
    return text;
}

void add_options(CLI::App* cmd, Overrides& o) {
    cmd->add_option("--config", o.config, "Scenario file")->required()->check(CLI::ExistingFile);
    cmd->add_option("--beta", o.beta, "Transmission rate (scalar override)");
    cmd->add_option("--gamma", o.gamma, "Recovery rate (scalar override)");
    cmd->add_option("--mu", o.mu, "Incubation rate (scalar override)");
    cmd->add_option("--dt", o.dt, "Time step");
    cmd->add_option("--T", o.t_end, "Final time");
    cmd->add_option("--n", o.n, "Node count or quadrature size");
    cmd->add_option("--seed", o.seed, "Random seed");
    cmd->add_option("--out", o.out, "Output directory");
}

ScenarioConfig load(const std::string& subcommand, const Overrides& o) {
    ScenarioConfig cfg = read_config_file(o.config);
    const ScenarioKind kind = *parse_kind(subcommand);
    if (cfg.kind && *cfg.kind != kind)
        throw Error(ErrorKind::ValidationError, "config kind '" + std::string(to_string(*cfg.kind)) +
                                                    "' does not match subcommand '" + subcommand + "'");
    cfg.kind = kind;
    if (o.beta) cfg.beta = RateSpec::scalar(*o.beta);
    if (o.gamma) cfg.gamma = RateSpec::scalar(*o.gamma);
    if (o.mu) cfg.mu = RateSpec::scalar(*o.mu);
    if (o.dt) cfg.run.dt = *o.dt;
    if (o.t_end) cfg.run.t_end = *o.t_end;
    if (o.n) cfg.run.n = *o.n;
    if (o.seed) cfg.run.seed = *o.seed;
    if (o.out) cfg.output.dir = *o.out;
    validate_config(cfg);
    return cfg;
}

void report_error(const std::string& subcommand, const std::string& kind, int code, const std::string& message,
                  const std::optional<std::string>& dir) {
    const nlohmann::ordered_json record = {
        {"status", "error"}, {"subcommand", subcommand}, {"kind", kind},
        {"exit_code", code}, {"message", message},
    };
    std::cerr << record.dump() << '\n';
    if (!dir) return;
    std::error_code ec;
    std::filesystem::create_directories(*dir, ec);
    std::ofstream out(std::filesystem::path(*dir) / "error.json");
    if (out) out << record.dump(2) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"SEIR epidemics on graphs and graphons"};
    app.footer(exit_code_table());
    app.require_subcommand(1);

    Overrides o;
    const std::pair<const char*, const char*> commands[] = {
        {"simulate-graph", "Integrate the SEIR system on a graph"},
        {"simulate-graphon", "Integrate the semi-discrete SEIR system on a graphon"},
        {"spectral", "Threshold quantities and dominant eigenpairs"},
        {"sample", "Sample graphs from a graphon and measure operator gaps"},
        {"converge", "Discretization convergence study on a graphon"},
    };
    for (const auto& [name, help] : commands) add_options(app.add_subcommand(name, help), o);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    const std::string subcommand = app.get_subcommands().front()->get_name();
    std::optional<std::string> dir = o.out;
    try {
        const ScenarioConfig cfg = load(subcommand, o);
        dir = cfg.output.dir;
        const ScenarioResult result = run_scenario(cfg);
        std::cout << subcommand << ": wrote " << result.artifacts.size() << " files to " << cfg.output.dir << '\n';
        return 0;
    } catch (const Error& e) {
        report_error(subcommand, std::string(to_string(e.kind())), exit_code(e.kind()), e.what(), dir);
        return exit_code(e.kind());
    } catch (const std::exception& e) {
        report_error(subcommand, "Internal", 1, e.what(), dir);
        return 1;
    }
}
