#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "epigraphon/gseir.hpp"
#include "epigraphon/seir.hpp"

namespace epigraphon {

enum class ScenarioKind { GraphSeir, GraphonSeir, Spectral, Sample, Converge };

std::string_view to_string(ScenarioKind kind);
/// Accepts the config names (graph-seir, ...) and the subcommand names
/// (simulate-graph, simulate-graphon, ...).
std::optional<ScenarioKind> parse_kind(std::string_view text);

struct GraphSpec {
    std::string family = "complete";  // complete|path|star|erdos-renyi|block|file|mobility
    double p = 0.1;                     // erdos-renyi
    std::vector<std::size_t> block_sizes;
    Matrix block_weights;
    std::string file;                   // adjacency (file) or mobility data (mobility)
    std::string coupling = "mobility";  // mobility|mean-field|graphon-mean-field

    bool operator==(const GraphSpec&) const = default;
};

struct GraphonSpec {
    std::string type = "gaussian";  // gaussian|block|gamma|constant|file
    double c_w = 1.0;
    double x0 = 0.5;
    double sigma = 0.5;
    Matrix values;                  // block
    double shape = 2.0;
    double rate = 1.0;
    double cap = 1.0;
    double value = 0.5;             // constant
    std::string file;

    bool operator==(const GraphonSpec&) const = default;
};

/// A rate: a scalar, per-node/per-cell values from a file, or the named
/// profile seasonal(base, amplitude, period) = base (1 + amplitude sin(2 pi t / period)).
struct RateSpec {
    enum class Kind { Scalar, File, Seasonal };
    Kind kind = Kind::Scalar;
    double value = 0.0;
    std::string file;
    double amplitude = 0.0;
    double period = 1.0;

    static RateSpec scalar(double v) {
        RateSpec r;
        r.value = v;
        return r;
    }

    bool operator==(const RateSpec&) const = default;
};

struct InitSpec {
    std::string profile = "uniform";  // uniform|seed-cell|bump|file
    double s = 0.99, e = 0.0, i = 0.01, r = 0.0;
    std::size_t cell = 0;             // seed-cell
    double i0 = 0.01;                 // seed-cell, bump peak
    double center = 0.5, width = 0.1; // bump
    std::string file;

    bool operator==(const InitSpec&) const = default;
};

struct RunSpec {
    Method method = Method::Euler;
    double dt = 0.01;
    double t_end = 100.0;
    std::size_t record_every = 10;
    std::size_t n = 100;
    std::optional<std::uint64_t> seed;
    bool spectral_diagnostics = false;

    bool operator==(const RunSpec&) const = default;
};

struct OutputSpec {
    std::string dir = "out";
    bool heatmap = true;
    bool timing = false;

    bool operator==(const OutputSpec&) const = default;
};

struct SampleSpec {
    std::vector<std::size_t> n_list{100, 400, 1600};
    std::string mode = "random";  // random|deterministic

    bool operator==(const SampleSpec&) const = default;
};

struct ConvergeSpec {
    std::vector<std::size_t> n_list{25, 50, 100, 200};
    std::optional<std::size_t> reference_n;
    SamplingMode mode = SamplingMode::ProjectContinuum;
    FieldNorm norm = FieldNorm::SupPointwise;

    bool operator==(const ConvergeSpec&) const = default;
};

struct ScenarioConfig {
    std::optional<ScenarioKind> kind;
    std::optional<GraphSpec> graph;
    std::optional<GraphonSpec> graphon;
    RateSpec beta = RateSpec::scalar(0.74);
    RateSpec mu = RateSpec::scalar(0.5);
    RateSpec gamma = RateSpec::scalar(0.14);
    InitSpec init;
    RunSpec run;
    OutputSpec output;
    SampleSpec sample;
    ConvergeSpec converge;

    bool operator==(const ScenarioConfig&) const = default;
};

/// Sections [model] [graph] [graphon] [params] [init] [run] [output] [sample]
/// [converge] with `key = value` lines; `#` starts a comment. Throws
/// ParseError (with line number) on syntax errors and unknown keys, and
/// ValidationError via validate_config.
ScenarioConfig parse_config(std::string_view text);
ScenarioConfig read_config_file(const std::string& path);

/// Throws ValidationError naming the violated invariant.
void validate_config(const ScenarioConfig& cfg);

/// Every field written explicitly; parse_config of the output is equal to cfg.
void write_config(std::ostream& out, const ScenarioConfig& cfg);

}  // namespace epigraphon
