#include "epigraphon/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "epigraphon/error.hpp"
#include "epigraphon/format.hpp"
#include "epigraphon/rng.hpp"
#include "epigraphon/spectral.hpp"

namespace epigraphon {

namespace fs = std::filesystem;

namespace {

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::IoError, "cannot open '" + path + "'");
    return in;
}

// "n" followed by n reals.
Vector read_vector_file(const std::string& path) {
    std::ifstream in = open_input(path);
    std::size_t n = 0;
    if (!(in >> n) || n == 0) throw Error(ErrorKind::ParseError, "'" + path + "': expected a positive length");
    Vector v(n);
    for (double& x : v)
        if (!(in >> x)) throw Error(ErrorKind::ParseError, "'" + path + "': expected " + std::to_string(n) + " values");
    return v;
}

}  // namespace

CouplingMode coupling_mode(const GraphSpec& spec) {
    if (spec.coupling == "mean-field") return CouplingMode::MeanField;
    if (spec.coupling == "graphon-mean-field") return CouplingMode::GraphonMeanField;
    return CouplingMode::Mobility;
}

Graph build_graph(const GraphSpec& spec, std::size_t n, std::uint64_t seed) {
    if (spec.family == "complete") return make_graph(family::Complete{}, n);
    if (spec.family == "path") return make_graph(family::Path{}, n);
    if (spec.family == "star") return make_graph(family::Star{}, n);
    if (spec.family == "erdos-renyi") return make_graph(family::ErdosRenyi{spec.p, seed}, n);
    if (spec.family == "block") return make_graph(family::Block{spec.block_sizes, spec.block_weights}, n);
    if (spec.family == "file") return graph_from_matrix(read_matrix_file(spec.file));
    if (spec.family == "mobility") return Graph(build_coupling(read_mobility_file(spec.file)).a, GraphKind::Weighted);
    throw Error(ErrorKind::ValidationError, "unknown graph family '" + spec.family + "'");
}

Graphon build_graphon(const GraphonSpec& spec) {
    if (spec.type == "gaussian") return gaussian_graphon(spec.c_w, spec.x0, spec.sigma);
    if (spec.type == "block") return StepGraphon(spec.values);
    if (spec.type == "gamma") return gamma_contact_graphon(spec.shape, spec.rate, spec.cap);
    if (spec.type == "constant") return constant_graphon(spec.value);
    if (spec.type == "file") {
        std::ifstream in = open_input(spec.file);
        return read_step_graphon(in);
    }
    throw Error(ErrorKind::ValidationError, "unknown graphon type '" + spec.type + "'");
}

SeirState build_initial(const InitSpec& spec, std::size_t n) {
    SeirState x;
    if (spec.profile == "uniform") {
        x = SeirState::uniform(n, spec.s, spec.e, spec.i, spec.r);
    } else if (spec.profile == "seed-cell") {
        if (spec.cell >= n) throw Error(ErrorKind::ValidationError, "seed cell index must be below n");
        x = SeirState::uniform(n, 1.0, 0.0, 0.0, 0.0);
        x.i[spec.cell] = spec.i0;
        x.s[spec.cell] = 1.0 - spec.i0;
    } else if (spec.profile == "bump") {
        x = SeirState::uniform(n, 1.0, 0.0, 0.0, 0.0);
        const Vector xs = midpoints(n);
        for (std::size_t j = 0; j < n; ++j) {
            const double d = (xs[j] - spec.center) / spec.width;
            x.i[j] = spec.i0 * std::exp(-0.5 * d * d);
            x.s[j] = 1.0 - x.i[j];
        }
    } else if (spec.profile == "file") {
        std::ifstream in = open_input(spec.file);
        std::size_t m = 0;
        if (!(in >> m) || m != n)
            throw Error(ErrorKind::DimensionMismatch, "initial-state file must start with the node count " + std::to_string(n));
        x = SeirState::zeros(n);
        for (std::size_t j = 0; j < n; ++j)
            if (!(in >> x.s[j] >> x.e[j] >> x.i[j] >> x.r[j]))
                throw Error(ErrorKind::ParseError, "'" + spec.file + "': expected rows 's e i r'");
    } else {
        throw Error(ErrorKind::ValidationError, "unknown init profile '" + spec.profile + "'");
    }
    try {
        validate_state(x, 1e-9);
    } catch (const Error& e) {
        throw Error(ErrorKind::ValidationError, std::string("initial condition: ") + e.what());
    }
    return x;
}

namespace {

double seasonal(const RateSpec& r, double t) {
    return r.value * (1.0 + r.amplitude * std::sin(2.0 * std::numbers::pi * t / r.period));
}

Coefficient node_rate(const RateSpec& r, std::size_t n) {
    switch (r.kind) {
        case RateSpec::Kind::Scalar: return Coefficient(r.value);
        case RateSpec::Kind::File: {
            Vector v = read_vector_file(r.file);
            if (v.size() != n) throw Error(ErrorKind::DimensionMismatch, "rate file '" + r.file + "' length differs from n");
            return Coefficient(std::move(v));
        }
        case RateSpec::Kind::Seasonal:
            return Coefficient([r](double t, std::size_t) { return seasonal(r, t); }, r.value * (1.0 - r.amplitude),
                               r.value * (1.0 + r.amplitude));
    }
    throw Error(ErrorKind::InvalidArgument, "unknown rate kind");
}

ScalarField field_rate(const RateSpec& r) {
    switch (r.kind) {
        case RateSpec::Kind::Scalar: return ScalarField(r.value);
        case RateSpec::Kind::File: return ScalarField::piecewise(read_vector_file(r.file));
        case RateSpec::Kind::Seasonal:
            return ScalarField([r](double t, double) { return seasonal(r, t); }, r.value * (1.0 - r.amplitude),
                               r.value * (1.0 + r.amplitude), true);
    }
    throw Error(ErrorKind::InvalidArgument, "unknown rate kind");
}

}  // namespace

EpidemicParams build_params(const ScenarioConfig& cfg, std::size_t n) {
    return {node_rate(cfg.beta, n), node_rate(cfg.mu, n), node_rate(cfg.gamma, n)};
}

CoefficientField build_fields(const ScenarioConfig& cfg) {
    return {field_rate(cfg.beta), field_rate(cfg.mu), field_rate(cfg.gamma)};
}

ScenarioSummary summarize(const Trace& trace) {
    if (trace.size() == 0) throw Error(ErrorKind::InvalidArgument, "empty trace");
    auto mean = [](const Vector& v) {
        double acc = 0.0;
        for (double x : v) acc += x;
        return acc / static_cast<double>(v.size());
    };
    ScenarioSummary s;
    s.initial_infected = mean(trace.states.front().i);
    const SeirState& last = trace.states.back();
    s.final_infected_or_recovered = mean(last.i) + mean(last.r);
    for (const SeirState& x : trace.states) s.max_mean_infected = std::max(s.max_mean_infected, mean(x.i));
    s.equilibrium_time = detect_equilibrium(trace);
    return s;
}

namespace {

class Writer {
public:
    Writer(const fs::path& dir, std::vector<fs::path>& artifacts) : dir_(dir), artifacts_(artifacts) {}

    template <typename Fn>
    void write(const std::string& name, Fn&& body) {
        const fs::path path = dir_ / name;
        std::ofstream out(path, std::ios::binary);
        if (!out) throw Error(ErrorKind::IoError, "cannot write '" + path.string() + "'");
        body(out);
        out.flush();
        if (!out) throw Error(ErrorKind::IoError, "write failed for '" + path.string() + "'");
        artifacts_.push_back(path);
    }

private:
    fs::path dir_;
    std::vector<fs::path>& artifacts_;
};

void write_summary(Writer& w, const ScenarioSummary& s) {
    w.write("summary.csv", [&](std::ostream& out) {
        out << "quantity,value\n";
        out << "initial_mean_infected," << format_real(s.initial_infected) << '\n';
        out << "final_mean_infected_or_recovered," << format_real(s.final_infected_or_recovered) << '\n';
        out << "max_mean_infected," << format_real(s.max_mean_infected) << '\n';
        out << "equilibrium_time," << (s.equilibrium_time ? format_real(*s.equilibrium_time) : "NA") << '\n';
    });
}

void write_heatmap(Writer& w, const Trace& trace) {
    const Matrix grid = infected_heatmap(trace);
    const auto data = grid.data();
    const double hi = *std::max_element(data.begin(), data.end());
    w.write("infected.ppm", [&](std::ostream& out) { write_ppm(out, grid, 0.0, hi); });
}

IntegrationSettings settings_of(const RunSpec& run) {
    IntegrationSettings s;
    s.t_end = run.t_end;
    s.dt = run.dt;
    s.method = run.method;
    s.record_every = run.record_every;
    s.spectral_diagnostics = run.spectral_diagnostics;
    return s;
}

void write_trace_outputs(Writer& w, const ScenarioConfig& cfg, ScenarioResult& result, bool field) {
    const Trace& trace = *result.trace;
    w.write("trace.csv", [&](std::ostream& out) { write_trace_csv(out, trace); });
    w.write("diagnostics.csv", [&](std::ostream& out) { write_diagnostics_csv(out, trace); });
    if (field) w.write("field.csv", [&](std::ostream& out) { write_field_csv(out, trace); });
    if (cfg.output.heatmap) write_heatmap(w, trace);
    result.summary = summarize(trace);
    write_summary(w, *result.summary);
}

void run_graph(const ScenarioConfig& cfg, Writer& w, ScenarioResult& result) {
    const Graph g = build_graph(*cfg.graph, cfg.run.n, cfg.run.seed.value_or(0));
    const NetworkSystem sys = NetworkSystem::from_graph(g, build_params(cfg, g.n()), coupling_mode(*cfg.graph));
    result.trace = integrate(sys, build_initial(cfg.init, g.n()), settings_of(cfg.run));
    write_trace_outputs(w, cfg, result, false);
}

void run_graphon(const ScenarioConfig& cfg, Writer& w, ScenarioResult& result) {
    const Graphon graphon = build_graphon(*cfg.graphon);
    const std::size_t n = cfg.run.n;
    const NetworkSystem sys = semi_discrete_system(graphon, build_fields(cfg), n);
    result.trace = integrate(sys, build_initial(cfg.init, n), settings_of(cfg.run));
    write_trace_outputs(w, cfg, result, true);
}

void run_spectral(const ScenarioConfig& cfg, Writer& w) {
    std::vector<std::pair<std::string, double>> rows;
    Vector left;
    if (cfg.graph) {
        const Graph g = build_graph(*cfg.graph, cfg.run.n, cfg.run.seed.value_or(0));
        const EpidemicParams p = build_params(cfg, g.n());
        const SeirState x0 = build_initial(cfg.init, g.n());
        const Matrix coupling = NetworkSystem::from_graph(g, p, coupling_mode(*cfg.graph)).effective_coupling();
        const ThresholdMargin m = threshold_margin(0.0, x0, coupling, p);
        left = dominant_left_eigenpair(build_B(x0.s, coupling)).v;
        rows.emplace_back("n", static_cast<double>(g.n()));
        rows.emplace_back("irreducible", is_irreducible(g) ? 1.0 : 0.0);
        rows.emplace_back("lambda_M", m.lambda_m);
        rows.emplace_back("beta", m.beta);
        rows.emplace_back("gamma", m.gamma);
        rows.emplace_back("margin", m.margin);
        rows.emplace_back("envelope", m.envelope ? 1.0 : 0.0);
        if (g.kind() == GraphKind::Simple01) {
            const SpectralBounds b = spectral_bounds(g, x0.s);
            rows.emplace_back("lambda_B_self_loops", perron_root(build_B(x0.s, with_self_loops(g).weights())));
            rows.emplace_back("bound_lower", b.lower);
            rows.emplace_back("bound_upper", b.upper);
        }
    } else {
        const Graphon graphon = build_graphon(*cfg.graphon);
        const CoefficientField c = build_fields(cfg);
        const std::size_t n = cfg.run.n;
        const NetworkSystem sys = semi_discrete_system(graphon, c, n);
        const SeirState x0 = build_initial(cfg.init, n);
        const ThresholdMargin m = threshold_margin(0.0, x0, sys.effective_coupling(), sys.params());
        left = dominant_left_eigenpair(build_B(x0.s, sys.effective_coupling())).v;
        const double lambda1 = operator_lambda1(graphon, std::max<std::size_t>(n, 1000));
        rows.emplace_back("n", static_cast<double>(n));
        rows.emplace_back("lambda1_T_W", lambda1);
        rows.emplace_back("operator_margin", c.beta.upper() * lambda1 - c.gamma.lower());
        rows.emplace_back("lambda_M", m.lambda_m);
        rows.emplace_back("beta", m.beta);
        rows.emplace_back("gamma", m.gamma);
        rows.emplace_back("margin", m.margin);
        rows.emplace_back("envelope", m.envelope ? 1.0 : 0.0);
        if (const auto* step = std::get_if<StepGraphon>(&graphon)) {
            const Vector spec = operator_spectrum_step(*step);
            for (std::size_t k = 0; k < spec.size(); ++k) rows.emplace_back("eigenvalue_" + std::to_string(k + 1), spec[k]);
        }
    }
    w.write("spectral.csv", [&](std::ostream& out) {
        out << "quantity,value\n";
        for (const auto& [name, v] : rows) out << name << ',' << format_real(v) << '\n';
    });
    w.write("eigenvector.csv", [&](std::ostream& out) {
        out << "node,v\n";
        for (std::size_t j = 0; j < left.size(); ++j) out << j << ',' << format_real(left[j]) << '\n';
    });
}

void run_sample(const ScenarioConfig& cfg, Writer& w, ScenarioResult& result) {
    const Graphon graphon = build_graphon(*cfg.graphon);
    const std::uint64_t seed = cfg.run.seed.value_or(0);
    if (cfg.sample.mode == "random") {
        result.gaps = operator_norm_gap(graphon, cfg.sample.n_list, seed);
        w.write("sample_gap.csv", [&](std::ostream& out) {
            out << "N,gap,ratio,seed,rng\n";
            for (const GapRow& r : result.gaps)
                out << r.n << ',' << format_real(r.gap) << ',' << format_real(r.ratio) << ',' << seed << ','
                    << kRngAlgorithm << '\n';
        });
        const Graph g = sample_graph_random(graphon, cfg.sample.n_list.front(), seed);
        w.write("sampled_graph.txt", [&](std::ostream& out) { write_matrix(out, g.weights()); });
    } else {
        w.write("sample_l1.csv", [&](std::ostream& out) {
            out << "N,l1_distance\n";
            for (std::size_t n : cfg.sample.n_list) {
                const Graph g = sample_graph_deterministic(graphon, n);
                Matrix clipped = g.weights();
                for (double& v : clipped.data()) v = std::clamp(v, 0.0, 1.0);
                out << n << ',' << format_real(l1_distance(StepGraphon(clipped), graphon)) << '\n';
            }
        });
        const Graph g = sample_graph_deterministic(graphon, cfg.sample.n_list.front());
        w.write("sampled_graph.txt", [&](std::ostream& out) { write_matrix(out, g.weights()); });
    }
    const Matrix grid = quadrature_matrix(graphon, cfg.run.n);
    w.write("graphon_grid.csv", [&](std::ostream& out) { write_grid_csv(out, grid); });
    if (cfg.output.heatmap)
        w.write("graphon.ppm", [&](std::ostream& out) { write_ppm(out, grid, 0.0, 1.0); });
}

void run_converge(const ScenarioConfig& cfg, Writer& w, ScenarioResult& result) {
    const Graphon graphon = build_graphon(*cfg.graphon);
    const CoefficientField c = build_fields(cfg);
    const InitSpec& in = cfg.init;
    InitialFields x0;
    if (in.profile == "uniform") {
        x0 = {ScalarField(in.s), ScalarField(in.e), ScalarField(in.i), ScalarField(in.r)};
    } else if (in.profile == "bump") {
        auto bump = [in](double, double x) {
            const double d = (x - in.center) / in.width;
            return in.i0 * std::exp(-0.5 * d * d);
        };
        x0.i = ScalarField(bump, 0.0, in.i0);
        x0.s = ScalarField([bump](double t, double x) { return 1.0 - bump(t, x); }, 1.0 - in.i0, 1.0);
    } else {
        // Node data on a fixed partition becomes a piecewise-constant field.
        const SeirState cells = build_initial(in, cfg.run.n);
        x0 = {ScalarField::piecewise(cells.s), ScalarField::piecewise(cells.e), ScalarField::piecewise(cells.i),
              ScalarField::piecewise(cells.r)};
    }
    ConvergenceOptions options;
    options.mode = cfg.converge.mode;
    options.seed = cfg.run.seed.value_or(0);
    options.reference_n = cfg.converge.reference_n;
    options.method = cfg.run.method;
    options.norm = cfg.converge.norm;
    options.record_every = cfg.run.record_every;
    result.convergence =
        convergence_study(graphon, c, x0, cfg.converge.n_list, cfg.run.t_end, cfg.run.dt, options);
    w.write("convergence.csv", [&](std::ostream& out) {
        write_convergence_csv(out, *result.convergence, cfg.output.timing);
    });
}

}  // namespace

ScenarioResult run_scenario(const ScenarioConfig& input) {
    if (!input.kind) throw Error(ErrorKind::ValidationError, "scenario kind is not set");
    validate_config(input);
    ScenarioResult result;
    result.resolved = input;
    ScenarioConfig& cfg = result.resolved;
    const bool random = *cfg.kind == ScenarioKind::Sample ||
                        (*cfg.kind == ScenarioKind::Converge && cfg.converge.mode == SamplingMode::SampleRandom) ||
                        (cfg.graph && cfg.graph->family == "erdos-renyi");
    if (random && !cfg.run.seed) cfg.run.seed = 0;
    if (*cfg.kind == ScenarioKind::Converge && !cfg.converge.reference_n)
        cfg.converge.reference_n = 2 * cfg.converge.n_list.back();

    const fs::path dir = cfg.output.dir;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Error(ErrorKind::IoError, "cannot create output directory '" + dir.string() + "': " + ec.message());
    Writer w(dir, result.artifacts);
    w.write("resolved-config.ini", [&](std::ostream& out) { write_config(out, cfg); });

    switch (*cfg.kind) {
        case ScenarioKind::GraphSeir: run_graph(cfg, w, result); break;
        case ScenarioKind::GraphonSeir: run_graphon(cfg, w, result); break;
        case ScenarioKind::Spectral: run_spectral(cfg, w); break;
        case ScenarioKind::Sample: run_sample(cfg, w, result); break;
        case ScenarioKind::Converge: run_converge(cfg, w, result); break;
    }
    return result;
}

}  // namespace epigraphon
