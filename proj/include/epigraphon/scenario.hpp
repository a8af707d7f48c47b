#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "epigraphon/config.hpp"
#include "epigraphon/graph.hpp"
#include "epigraphon/graphon.hpp"
#include "epigraphon/gseir.hpp"
#include "epigraphon/seir.hpp"

namespace epigraphon {

/// The seed is used by the erdos-renyi family only.
Graph build_graph(const GraphSpec& spec, std::size_t n, std::uint64_t seed = 0);
/// The coupling mode named in the spec.
CouplingMode coupling_mode(const GraphSpec& spec);
Graphon build_graphon(const GraphonSpec& spec);

/// Initial state on n nodes; node j sits at the midpoint x_j for the bump profile.
SeirState build_initial(const InitSpec& spec, std::size_t n);
EpidemicParams build_params(const ScenarioConfig& cfg, std::size_t n);
CoefficientField build_fields(const ScenarioConfig& cfg);

struct ScenarioSummary {
    double initial_infected = 0.0;        // mean i(0)
    double final_infected_or_recovered = 0.0;  // mean (i + r)(T)
    double max_mean_infected = 0.0;       // max_t mean i(t)
    std::optional<double> equilibrium_time;
};

ScenarioSummary summarize(const Trace& trace);

struct ScenarioResult {
    ScenarioConfig resolved;
    std::vector<std::filesystem::path> artifacts;
    std::optional<Trace> trace;
    std::optional<ScenarioSummary> summary;
    std::optional<ConvergenceReport> convergence;
    std::vector<GapRow> gaps;
};

/// Runs cfg (whose kind must be set) and writes its artifacts, including
/// resolved-config.ini, into cfg.output.dir. Outputs depend only on the
/// config; runtimes are omitted unless output.timing is set.
ScenarioResult run_scenario(const ScenarioConfig& cfg);

}  // namespace epigraphon
