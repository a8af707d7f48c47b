// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "epigraphon/config.hpp"
#include "epigraphon/error.hpp"
#include "epigraphon/graph.hpp"
#include "epigraphon/graphon.hpp"
#include "epigraphon/gseir.hpp"
#include "epigraphon/scenario.hpp"
#include "epigraphon/seir.hpp"
#include "epigraphon/spectral.hpp"
#include "oracles.hpp"

using namespace epigraphon;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
    bool pass = false;
    std::string detail;
};

const fs::path kScenarios = EPIGRAPHON_SCENARIO_DIR;
const fs::path kWork = "acceptance_runs";

/// Infection concentrated near x = 0.2 on an otherwise susceptible population.
InitialFields bump() {
    auto infected = [](double, double x) { return 0.05 * std::exp(-(x - 0.2) * (x - 0.2) / 0.005); };
    InitialFields x0;
    x0.i = ScalarField(infected, 0.0, 0.05);
    x0.s = ScalarField([infected](double t, double x) { return 1.0 - infected(t, x); }, 0.95, 1.0);
    return x0;
}

double max_abs_diff(const Vector& a, const Vector& b) {
    double worst = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) worst = std::max(worst, std::abs(a[j] - b[j]));
    return worst;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

Matrix random_symmetric(std::size_t n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Matrix v(n, n);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b <= a; ++b) v(a, b) = v(b, a) = u(rng);
    return v;
}

// The reference Gaussian run, shared by the conservation and positivity checks.
struct GaussianRun {
    Trace trace;
    double seconds = 0.0;
};

const GaussianRun& gaussian_run() {
    static const GaussianRun run = [] {
        GaussianRun r;
        const auto start = Clock::now();
        const NetworkSystem sys = semi_discrete_system(gaussian_graphon(1.0, 0.5, 0.5), CoefficientField{}, 100);
        r.trace = integrate(sys, project_initial(bump(), 100), {0.0, 100.0, 0.01, Method::Euler, 1, false});
        r.seconds = seconds_since(start);
        return r;
    }();
    return run;
}

Outcome conservation() {
    const GaussianRun& run = gaussian_run();
    double worst = 0.0;
    for (const SeirState& x : run.trace.states)
        for (std::size_t j = 0; j < x.n(); ++j) worst = std::max(worst, std::abs(x.s[j] + x.e[j] + x.i[j] + x.r[j] - 1.0));
    return {worst <= 1e-10 && run.seconds <= 10.0,
            fmt::format("max |s+e+i+r-1| = {:.3g} over {} recorded steps, run {:.2f} s", worst, run.trace.size(),
                        run.seconds)};
}

Outcome positivity() {
    const GaussianRun& run = gaussian_run();
    double lowest = INFINITY;
    for (const SeirState& x : run.trace.states)
        for (const Vector* v : {&x.s, &x.e, &x.i, &x.r}) lowest = std::min(lowest, *std::min_element(v->begin(), v->end()));
    return {lowest >= -1e-9, fmt::format("min component = {:.3g}", lowest)};
}

Outcome equilibrium() {
    const NetworkSystem sys = semi_discrete_system(gaussian_graphon(1.0, 0.5, 0.5), CoefficientField{}, 100);
    const FieldState x0 = project_initial(bump(), 100);
    for (double t_end = 100.0; t_end <= 3200.0; t_end *= 2.0) {
        const Trace tr = integrate(sys, x0, {0.0, t_end, 0.01, Method::Euler, 1, false});
        const SeirState& last = tr.states.back();
        double active = 0.0;
        for (std::size_t j = 0; j < last.n(); ++j) active = std::max(active, last.e[j] + last.i[j]);
        if (active > 1e-4) continue;

        const std::optional<double> at = detect_equilibrium(tr, 1e-4);
        std::size_t violations = 0;
        for (std::size_t k = 1; k < tr.size(); ++k)
            for (std::size_t j = 0; j < last.n(); ++j) {
                if (tr.states[k].s[j] > tr.states[k - 1].s[j] + 1e-12) ++violations;
                if (tr.states[k].r[j] < tr.states[k - 1].r[j] - 1e-12) ++violations;
            }
        return {at.has_value() && violations == 0,
                fmt::format("T = {}, max(e+i) = {:.3g}, equilibrium at t = {}, monotonicity violations = {}", t_end,
                            active, at ? fmt::format("{:.2f}", *at) : "none", violations)};
    }
    return {false, "max(e+i) still above 1e-4 at T = 3200"};
}

Outcome scalar_reduction() {
    const std::size_t n = 8, steps = 50000, every = 500;
    const double dt = 1e-3;
    const IntegrationSettings settings{0.0, dt * steps, dt, Method::RK4, every, false};
    const auto ref = oracle::seir_rk4({0.99, 0.0, 0.01, 0.0}, 0.74, 0.5, 0.14, dt, steps);

    auto worst_against_oracle = [&](const Trace& tr) {
        double worst = 0.0;
        for (std::size_t r = 0; r < tr.size(); ++r) {
            const oracle::Seir& y = ref[r * every];
            const SeirState& x = tr.states[r];
            for (std::size_t j = 0; j < n; ++j)
                worst = std::max({worst, std::abs(x.s[j] - y.s), std::abs(x.e[j] - y.e), std::abs(x.i[j] - y.i),
                                  std::abs(x.r[j] - y.r)});
        }
        return tr.size() == steps / every + 1 ? worst : INFINITY;
    };

    const Trace graph_run = integrate(SeirState::uniform(n, 0.99, 0.0, 0.01, 0.0), make_graph(family::Complete{}, n),
                                      EpidemicParams{}, CouplingMode::MeanField, settings);
    InitialFields x0;
    x0.s = 0.99;
    x0.i = 0.01;
    const Trace graphon_run =
        integrate(semi_discrete_system(constant_graphon(1.0), CoefficientField{}, n), project_initial(x0, n), settings);

    const double g = worst_against_oracle(graph_run), w = worst_against_oracle(graphon_run);
    return {g <= 1e-8 && w <= 1e-8, fmt::format("sup error: complete graph {:.3g}, constant graphon {:.3g}", g, w)};
}

Outcome spectral_equivalence() {
    const auto start = Clock::now();
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst_gap = 0.0;
    std::size_t violations = 0;
    for (int rep = 0; rep < 100; ++rep) {
        const auto n = static_cast<std::size_t>(2 + rng() % 49);
        Matrix a = make_graph(family::ErdosRenyi{0.05 + 0.85 * u(rng), rng()}, n).weights();
        for (std::size_t j = 0; j + 1 < n; ++j) a(j, j + 1) = a(j + 1, j) = 1.0;  // keep it irreducible
        const Graph g(a, GraphKind::Simple01);
        Vector s(n);
        for (double& v : s) v = 1.0 - u(rng);  // (0, 1]

        const Matrix loops = with_self_loops(g).weights();
        const double lambda_b = perron_root(build_B(s, loops));
        const Matrix bsym = build_B_sym(s, loops);
        Eigen::MatrixXd e(n, n);
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) e(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) = bsym(j, k);
        const double lambda_sym = oracle::symmetric_spectrum(e).front();
        worst_gap = std::max(worst_gap, std::abs(lambda_b - lambda_sym));

        const SpectralBounds b = spectral_bounds(g, s);
        if (lambda_b < b.lower - 1e-12 || lambda_b > b.upper + 1e-12) ++violations;
    }
    const double secs = seconds_since(start);
    return {worst_gap <= 1e-8 && violations == 0 && secs <= 30.0,
            fmt::format("max |lambda(B) - lambda(B_sym)| = {:.3g}, bound violations = {}, {:.2f} s", worst_gap,
                        violations, secs)};
}

Outcome threshold() {
    const EpidemicParams reference{};
    // Decay: path with self-loops, lambda_1 < 3, so beta = 0.04 stays below gamma.
    const Matrix path = with_self_loops(make_graph(family::Path{}, 8)).weights();
    const EpidemicParams weak{0.04, 0.5, 0.14};
    const Trace decay = integrate(NetworkSystem(path, 1.0, weak), SeirState::uniform(8, 0.9, 0.05, 0.05, 0.0),
                                  {0.0, 50.0, 0.01, Method::Euler, 10, false});
    const QTauSeries qd = q_tau_series(decay, path, weak, 0.0);
    double worst_rise = -INFINITY;
    for (std::size_t k = 1; k < qd.q.size(); ++k) worst_rise = std::max(worst_rise, qd.q[k] - qd.q[k - 1]);

    // Growth: complete graph with self-loops at the reference rates.
    const Matrix complete = with_self_loops(make_graph(family::Complete{}, 6)).weights();
    const Trace growth = integrate(NetworkSystem(complete, 1.0, reference), SeirState::uniform(6, 0.99, 0.0, 0.01, 0.0),
                                   {0.0, 2.0, 0.01, Method::Euler, 10, false});
    const QTauSeries qg = q_tau_series(growth, complete, reference, 0.0);
    bool increasing = qg.q.size() > 1;
    for (std::size_t k = 1; k < qg.q.size(); ++k) increasing = increasing && qg.q[k] > qg.q[k - 1];

    return {qd.at_tau.margin <= 0.0 && worst_rise <= 1e-12 && qg.at_tau.margin > 0.0 && increasing,
            fmt::format("decay margin {:.3g}, largest q step {:.3g}; growth margin {:.3g}, strictly increasing on "
                        "[0, 2]: {}",
                        qd.at_tau.margin, worst_rise, qg.at_tau.margin, increasing ? "yes" : "no")};
}

Outcome discrete_graphon() {
    std::mt19937_64 rng(7);
    std::string detail;
    bool pass = true;
    for (const std::size_t n : {10, 50}) {
        const Matrix v = random_symmetric(n, rng);
        const StepGraphon w(v);
        const CoefficientField c;
        const FieldState x0 = project_initial(bump(), n);
        const IntegrationSettings settings{0.0, 30.0, 0.01, Method::RK4, 10, false};

        const Trace graph_run = integrate(x0, Graph(v, GraphKind::Weighted), EpidemicParams{},
                                          CouplingMode::GraphonMeanField, settings);
        const Trace step_run = integrate(semi_discrete_system(w, c, n), x0, settings);
        // The same step graphon discretized on twice as many cells, from the lifted initial data.
        FieldState fine = FieldState::zeros(2 * n);
        for (std::size_t k = 0; k < 2 * n; ++k) {
            fine.s[k] = x0.s[k / 2];
            fine.e[k] = x0.e[k / 2];
            fine.i[k] = x0.i[k / 2];
            fine.r[k] = x0.r[k / 2];
        }
        const Trace fine_run = integrate(semi_discrete_system(w, c, 2 * n), fine, settings);

        double worst = graph_run.size() == step_run.size() && graph_run.size() == fine_run.size() ? 0.0 : INFINITY;
        for (std::size_t k = 0; k < graph_run.size() && std::isfinite(worst); ++k) {
            const SeirState& g = graph_run.states[k];
            for (const SeirState* other : {&step_run.states[k], &fine_run.states[k]})
                for (auto part : {&SeirState::s, &SeirState::e, &SeirState::i, &SeirState::r})
                    worst = std::max(worst, field_distance(embed_piecewise(g.*part), embed_piecewise(other->*part),
                                                           FieldNorm::SupPointwise));
        }
        pass = pass && worst <= 1e-12;
        detail += fmt::format("{}n = {}: sup difference {:.3g}", detail.empty() ? "" : "; ", n, worst);
    }
    return {pass, detail};
}

Outcome continuum_convergence() {
    const auto start = Clock::now();
    const std::vector<std::size_t> ns{25, 50, 100, 200};
    ConvergenceOptions opts;
    opts.reference_n = 400;
    opts.record_every = 10;
    const ConvergenceReport r =
        convergence_study(gaussian_graphon(1.0, 0.5, 0.5), CoefficientField{}, bump(), ns, 30.0, 0.01, opts);
    const double secs = seconds_since(start);
    bool decreasing = true, enveloped = true;
    std::string values;
    for (std::size_t k = 0; k < r.d_n.size(); ++k) {
        if (k > 0) decreasing = decreasing && r.d_n[k] < r.d_n[k - 1];
        enveloped = enveloped && r.d_n[k] <= r.gronwall_bounds[k];
        values += fmt::format("{}{:.3g}", k ? ", " : "", r.d_n[k]);
    }
    return {decreasing && enveloped && secs <= 300.0,
            fmt::format("D_n = ({}), strictly decreasing: {}, within envelope: {}, {:.1f} s", values,
                        decreasing ? "yes" : "no", enveloped ? "yes" : "no", secs)};
}

Outcome sampling_convergence() {
    const std::vector<std::size_t> ns{100, 400, 1600};
    const Graphon w = constant_graphon(0.5);
    int good = 0;
    double worst_ratio = 0.0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const std::vector<GapRow> rows = operator_norm_gap(w, ns, seed);
        bool ok = true;
        for (std::size_t k = 0; k < rows.size(); ++k) {
            if (k > 0) ok = ok && rows[k].gap < rows[k - 1].gap;
            ok = ok && rows[k].ratio <= 1.0;
            worst_ratio = std::max(worst_ratio, rows[k].ratio);
        }
        good += ok ? 1 : 0;
    }
    return {good >= 8, fmt::format("{} of 10 seeds decreasing with ratio <= 1 (largest ratio {:.3g})", good, worst_ratio)};
}

ScenarioResult run_file(const std::string& name, const fs::path& out, double& seconds) {
    ScenarioConfig cfg = read_config_file(kScenarios / name);
    cfg.output.dir = out.string();
    fs::remove_all(out);
    const auto start = Clock::now();
    ScenarioResult r = run_scenario(cfg);
    seconds = seconds_since(start);
    return r;
}

bool has_artifact(const ScenarioResult& r, const std::string& file) {
    return std::any_of(r.artifacts.begin(), r.artifacts.end(),
                       [&](const fs::path& p) { return p.filename() == file && fs::file_size(p) > 0; });
}

Outcome block_reproduction() {
    double t_spread = 0.0, t_quiet = 0.0;
    const ScenarioResult spread = run_file("block-spread.ini", kWork / "block-spread", t_spread);
    const ScenarioResult quiet = run_file("block-no-spread.ini", kWork / "block-no-spread", t_quiet);
    if (!spread.summary || !quiet.summary) return {false, "scenario produced no summary"};
    const ScenarioSummary& a = *spread.summary;
    const ScenarioSummary& b = *quiet.summary;
    const bool grows = a.final_infected_or_recovered >= 10.0 * a.initial_infected;
    const bool contained = b.max_mean_infected <= 2.0 * b.initial_infected;
    const bool images = has_artifact(spread, "infected.ppm") && has_artifact(quiet, "infected.ppm");
    return {grows && contained && images && t_spread <= 30.0 && t_quiet <= 30.0,
            fmt::format("spread: (i+r)(T) / i(0) = {:.1f} in {:.2f} s; no spread: max i / i(0) = {:.3f} in {:.2f} s; "
                        "heatmaps: {}",
                        a.final_infected_or_recovered / a.initial_infected, t_spread,
                        b.max_mean_infected / b.initial_infected, t_quiet, images ? "yes" : "no")};
}

/// Brute force enumerates all (S, T) pairs; cell values are multiples of
/// 1/256 so both computations are exact and can be compared with ==.
Outcome cut_norm_oracle() {
    std::size_t cases = 0, mismatches = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        std::mt19937_64 rng(1000 + seed);
        const std::size_t n = 1 + seed % 6;
        Matrix v(n, n);
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b <= a; ++b) v(a, b) = v(b, a) = static_cast<double>(rng() % 257) / 256.0;
        const StepGraphon w(v);
        std::vector<std::vector<double>> nested(n, std::vector<double>(n));
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b) nested[a][b] = v(a, b);
        ++cases;
        if (cut_norm_exact(w) != oracle::cut_norm_brute_force(nested)) ++mismatches;

        // Signed differences exercise the subset search beyond the full square.
        Matrix d(n, n);
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b <= a; ++b) {
                d(a, b) = d(b, a) = v(a, b) - static_cast<double>(rng() % 257) / 256.0;
                nested[a][b] = nested[b][a] = d(a, b);
            }
        ++cases;
        if (cut_norm_exact(d) != oracle::cut_norm_brute_force(nested)) ++mismatches;
    }
    return {mismatches == 0, fmt::format("{} mismatches in {} cases (100 graphons and their signed differences)",
                                         mismatches, cases)};
}

/// Runs every scenario file twice from two working directories and compares
/// every artifact, including the resolved config, byte for byte.
Outcome determinism() {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(kScenarios))
        if (entry.path().extension() == ".ini") files.push_back(entry.path());
    std::sort(files.begin(), files.end());

    const fs::path home = fs::current_path();
    const fs::path root = fs::absolute(kWork / "determinism");
    fs::remove_all(root);
    std::size_t compared = 0, differing = 0;
    for (const fs::path& file : files) {
        const ScenarioConfig cfg = read_config_file(file);
        std::vector<std::vector<fs::path>> produced;
        for (const char* side : {"a", "b"}) {
            const fs::path dir = root / side / file.stem();
            fs::create_directories(dir);
            fs::current_path(dir);
            produced.push_back(run_scenario(cfg).artifacts);
            for (fs::path& p : produced.back()) p = fs::absolute(p);
            fs::current_path(home);
        }
        if (produced[0].size() != produced[1].size()) {
            ++differing;
            continue;
        }
        for (std::size_t k = 0; k < produced[0].size(); ++k) {
            ++compared;
            if (produced[0][k].filename() != produced[1][k].filename() ||
                slurp(produced[0][k]) != slurp(produced[1][k]))
                ++differing;
        }
    }
    return {differing == 0 && compared > 0,
            fmt::format("{} scenarios, {} artifacts compared, {} differ", files.size(), compared, differing)};
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"conservation", conservation},
        {"positivity", positivity},
        {"equilibrium", equilibrium},
        {"scalar reduction", scalar_reduction},
        {"spectral equivalence and bounds", spectral_equivalence},
        {"threshold behaviour", threshold},
        {"discrete/graphon equivalence", discrete_graphon},
        {"continuum convergence", continuum_convergence},
        {"sampling convergence", sampling_convergence},
        {"block-model spread and containment", block_reproduction},
        {"cut norm against brute force", cut_norm_oracle},
        {"determinism", determinism},
    };
    fs::create_directories(kWork);
    int failed = 0;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        Outcome o;
        try {
            o = criteria[k].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failed += o.pass ? 0 : 1;
        std::printf("%s %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", k + 1, criteria[k].first, o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%zu of %zu criteria passed\n", criteria.size() - static_cast<std::size_t>(failed), criteria.size());
    return failed == 0 ? 0 : 1;
}
