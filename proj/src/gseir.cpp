#include "epigraphon/gseir.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <numeric>
#include <ostream>

#include "epigraphon/error.hpp"
#include "epigraphon/format.hpp"

namespace epigraphon {

// --- fields -----------------------------------------------------------------

ScalarField::ScalarField(double value) : value_(value), lower_(value), upper_(value) {
    if (!std::isfinite(value)) throw Error(ErrorKind::NonFiniteInput, "field value must be finite");
}

ScalarField::ScalarField(Fn f, double lower, double upper, bool time_dependent)
    : value_(std::move(f)), lower_(lower), upper_(upper), time_dependent_(time_dependent) {
    if (!(lower <= upper) || !std::isfinite(lower) || !std::isfinite(upper))
        throw Error(ErrorKind::InvalidArgument, "field bounds must be finite with lower <= upper");
}

ScalarField ScalarField::piecewise(Vector cell_values) {
    if (cell_values.empty()) throw Error(ErrorKind::InvalidArgument, "piecewise field needs at least one cell");
    if (!all_finite(cell_values)) throw Error(ErrorKind::NonFiniteInput, "piecewise field values must be finite");
    ScalarField f(0.0);
    f.lower_ = *std::min_element(cell_values.begin(), cell_values.end());
    f.upper_ = *std::max_element(cell_values.begin(), cell_values.end());
    f.value_ = std::move(cell_values);
    return f;
}

double ScalarField::operator()(double t, double x) const {
    if (const auto* c = std::get_if<double>(&value_)) return *c;
    if (const auto* v = std::get_if<Vector>(&value_)) return (*v)[cell_of(x, v->size())];
    return std::get<Fn>(value_)(t, x);
}

Vector ScalarField::at_midpoints(double t, std::size_t n) const {
    Vector out = midpoints(n);
    for (double& x : out) x = (*this)(t, x);
    return out;
}

Vector ScalarField::cell_averages(double t, std::size_t n) const {
    if (n == 0) throw Error(ErrorKind::InvalidArgument, "cell count must be positive");
    if (const auto* c = std::get_if<double>(&value_)) return Vector(n, *c);
    Vector out(n, 0.0);
    if (const auto* v = std::get_if<Vector>(&value_)) {
        const double width = static_cast<double>(v->size());
        for (const RefinementPiece& p : common_refinement(n, v->size()))
            out[p.left] += static_cast<double>(p.units) / width * (*v)[p.right];
        return out;
    }
    const auto& f = std::get<Fn>(value_);
    constexpr std::size_t m = kCoefficientSubQuadrature;
    const double dn = static_cast<double>(n);
    for (std::size_t k = 0; k < n; ++k) {
        double acc = 0.0;
        for (std::size_t q = 0; q < m; ++q)
            acc += f(t, (static_cast<double>(k) + (static_cast<double>(q) + 0.5) / m) / dn);
        out[k] = acc / m;
    }
    return out;
}

double CoefficientField::max_rate() const { return std::max({beta.upper(), mu.upper(), gamma.upper()}); }
double CoefficientField::min_rate() const { return std::min({beta.lower(), mu.lower(), gamma.lower()}); }

PerCellCoefficients average_coefficients(const CoefficientField& c, std::size_t n, double t) {
    return {c.beta.cell_averages(t, n), c.mu.cell_averages(t, n), c.gamma.cell_averages(t, n)};
}

namespace {

Coefficient discretize(const ScalarField& f, std::size_t n, CoefficientSampling how) {
    if (f.is_constant()) return Coefficient(f(0.0, 0.0));
    if (!f.time_dependent())
        return Coefficient(how == CoefficientSampling::Midpoint ? f.at_midpoints(0.0, n) : f.cell_averages(0.0, n));
    Coefficient::Profile profile;
    if (how == CoefficientSampling::Midpoint) {
        profile = [f, n](double t, std::size_t node) {
            return f(t, (2.0 * static_cast<double>(node) + 1.0) / (2.0 * static_cast<double>(n)));
        };
    } else {
        profile = [f, n](double t, std::size_t node) {
            constexpr std::size_t m = kCoefficientSubQuadrature;
            double acc = 0.0;
            for (std::size_t q = 0; q < m; ++q)
                acc += f(t, (static_cast<double>(node) + (static_cast<double>(q) + 0.5) / m) / static_cast<double>(n));
            return acc / m;
        };
    }
    return Coefficient(std::move(profile), std::max(f.lower(), 0.0), std::max(f.upper(), 0.0), true);
}

}  // namespace

EpidemicParams discretize_coefficients(const CoefficientField& c, std::size_t n, CoefficientSampling how) {
    if (c.min_rate() < 0.0) throw Error(ErrorKind::InvalidArgument, "rates must be nonnegative");
    return {discretize(c.beta, n, how), discretize(c.mu, n, how), discretize(c.gamma, n, how)};
}

NetworkSystem semi_discrete_system(const Graphon& w, const CoefficientField& c, std::size_t n) {
    return {quadrature_matrix(w, n), 1.0 / static_cast<double>(n),
            discretize_coefficients(c, n, CoefficientSampling::Midpoint)};
}

FieldState gseir_rhs(double t, const FieldState& x, const Graphon& w, const CoefficientField& c) {
    if (x.n() == 0) throw Error(ErrorKind::DimensionMismatch, "empty field state");
    FieldState dx;
    semi_discrete_system(w, c, x.n()).derivative(t, x, dx);
    return dx;
}

FieldState project_initial(const InitialFields& x0, std::size_t n) {
    FieldState x{x0.s.cell_averages(0.0, n), x0.e.cell_averages(0.0, n), x0.i.cell_averages(0.0, n),
                 x0.r.cell_averages(0.0, n)};
    validate_state(x);
    return x;
}

// --- embedding and distances ------------------------------------------------

PiecewiseConstant::PiecewiseConstant(Vector values) : values_(std::move(values)) {
    if (values_.empty()) throw Error(ErrorKind::InvalidArgument, "piecewise lift needs at least one cell");
    if (!all_finite(values_)) throw Error(ErrorKind::NonFiniteInput, "piecewise lift values must be finite");
}

double PiecewiseConstant::operator()(double x) const {
    if (!(x >= 0.0 && x <= 1.0)) throw Error(ErrorKind::OutOfDomain, "lift evaluated outside [0,1]");
    return values_[cell_of(x, values_.size())];
}

PiecewiseConstant embed_piecewise(std::span<const double> v) { return PiecewiseConstant(Vector(v.begin(), v.end())); }

namespace {

// Sup or sum of length * diff^2 over the common refinement.
double refined(const Vector& a, const Vector& b, FieldNorm norm) {
    const std::size_t na = a.size(), nb = b.size();
    if (na + nb - std::gcd(na, nb) > kMaxRefinementCells)
        throw Error(ErrorKind::IncompatiblePartitions, "common refinement exceeds 10^6 cells");
    double acc = 0.0;
    for (const RefinementPiece& p : common_refinement(na, nb)) {
        const double d = std::abs(a[p.left] - b[p.right]);
        acc = norm == FieldNorm::SupPointwise ? std::max(acc, d) : acc + p.length * d * d;
    }
    return acc;
}

}  // namespace

double field_distance(const PiecewiseConstant& a, const PiecewiseConstant& b, FieldNorm norm) {
    const double r = refined(a.values(), b.values(), norm);
    return norm == FieldNorm::SupPointwise ? r : std::sqrt(r);
}

double field_distance(const FieldState& a, const FieldState& b, FieldNorm norm) {
    if (a.n() == 0 || b.n() == 0) throw Error(ErrorKind::DimensionMismatch, "empty field state");
    double acc = 0.0;
    for (auto part : {&SeirState::s, &SeirState::e, &SeirState::i, &SeirState::r}) acc += refined(a.*part, b.*part, norm);
    return norm == FieldNorm::SupPointwise ? acc : std::sqrt(acc);
}

// --- convergence harness ----------------------------------------------------

std::string_view to_string(SamplingMode mode) {
    switch (mode) {
        case SamplingMode::ProjectContinuum: return "project-continuum";
        case SamplingMode::SampleDeterministic: return "sample-deterministic";
        case SamplingMode::SampleRandom: return "sample-random";
    }
    return "unknown";
}

namespace {

Matrix discrete_kernel(const Graphon& w, std::size_t n, SamplingMode mode, std::uint64_t seed) {
    switch (mode) {
        case SamplingMode::ProjectContinuum: return cell_average_matrix(w, n);
        case SamplingMode::SampleDeterministic: return sample_graph_deterministic(w, n).weights();
        case SamplingMode::SampleRandom: return sample_graph_random(w, n, seed).weights();
    }
    throw Error(ErrorKind::InvalidArgument, "unknown sampling mode");
}

struct Run {
    std::size_t n = 0;
    Matrix kernel;
    FieldState x0;
    Trace trace;
    double seconds = 0.0;
};

// ||beta(y) W(x,y) - beta_n(y) W_n(x,y)||_L1 on the reference cells.
double weighted_kernel_l1(const Run& ref, const Run& run, const Vector& beta_ref, const Vector& beta_n) {
    const std::size_t m = ref.n;
    const Vector x = midpoints(m);
    std::vector<std::size_t> cell(m);
    for (std::size_t k = 0; k < m; ++k) cell[k] = cell_of(x[k], run.n);
    double acc = 0.0;
    for (std::size_t k = 0; k < m; ++k)
        for (std::size_t l = 0; l < m; ++l)
            acc += std::abs(beta_ref[l] * ref.kernel(k, l) - beta_n[cell[l]] * run.kernel(cell[k], cell[l]));
    return acc / static_cast<double>(m * m);
}

}  // namespace

ConvergenceReport convergence_study(const Graphon& w, const CoefficientField& c, const InitialFields& x0,
                                    std::span<const std::size_t> n_list, double t_end, double dt,
                                    const ConvergenceOptions& options) {
    if (n_list.empty()) throw Error(ErrorKind::InvalidArgument, "n_list is empty");
    for (std::size_t k = 0; k < n_list.size(); ++k) {
        if (n_list[k] == 0) throw Error(ErrorKind::InvalidArgument, "n_list entries must be positive");
        if (k > 0 && n_list[k] <= n_list[k - 1]) throw Error(ErrorKind::InvalidArgument, "n_list must be increasing");
    }
    if (!(t_end > 0.0)) throw Error(ErrorKind::InvalidArgument, "T must be positive");
    const std::size_t largest = n_list.back();
    const std::size_t ref_n = options.reference_n.value_or(2 * largest);
    if (ref_n < 2 * largest)
        throw Error(ErrorKind::ReferenceTooCoarse, "reference n must be at least twice the largest swept n");

    IntegrationSettings settings;
    settings.t_end = t_end;
    settings.dt = dt;
    settings.method = options.method;
    settings.record_every = options.record_every;

    std::vector<Run> runs(n_list.size() + 1);
    for (std::size_t k = 0; k < n_list.size(); ++k) runs[k].n = n_list[k];
    runs.back().n = ref_n;

    std::exception_ptr failure;
    const auto count = static_cast<std::ptrdiff_t>(runs.size());
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t k = 0; k < count; ++k) {
        try {
            Run& run = runs[static_cast<std::size_t>(k)];
            const bool is_ref = k + 1 == count;
            const auto start = std::chrono::steady_clock::now();
            run.kernel = discrete_kernel(w, run.n, is_ref ? SamplingMode::ProjectContinuum : options.mode, options.seed);
            run.x0 = project_initial(x0, run.n);
            const NetworkSystem sys(run.kernel, 1.0 / static_cast<double>(run.n),
                                    discretize_coefficients(c, run.n, CoefficientSampling::CellAverage));
            run.trace = integrate(sys, run.x0, settings);
            run.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        } catch (...) {
#pragma omp critical(epigraphon_convergence_failure)
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);

    const Run& ref = runs.back();
    const double k_hat = std::max(c.max_rate() * graphon_bound(w), c.max_rate());
    const double growth = std::expm1(k_hat * t_end);
    const PerCellCoefficients ref_0 = average_coefficients(c, ref.n, 0.0);
    const PerCellCoefficients ref_t = average_coefficients(c, ref.n, t_end);

    ConvergenceReport report;
    report.n_list.assign(n_list.begin(), n_list.end());
    report.reference_n = ref_n;
    report.mode = options.mode;
    report.seed = options.seed;
    for (std::size_t k = 0; k < n_list.size(); ++k) {
        const Run& run = runs[k];
        double d = 0.0;
        for (std::size_t s = 0; s < run.trace.size(); ++s)
            d = std::max(d, field_distance(run.trace.states[s], ref.trace.states[s], options.norm));
        const double l1 = std::max(weighted_kernel_l1(ref, run, ref_0.beta, average_coefficients(c, run.n, 0.0).beta),
                                   weighted_kernel_l1(ref, run, ref_t.beta, average_coefficients(c, run.n, t_end).beta));
        const double initial = field_distance(ref.x0, run.x0, FieldNorm::SupPointwise);
        report.d_n.push_back(d);
        report.gronwall_bounds.push_back((initial + t_end * l1) * growth);
        report.runtime_seconds.push_back(run.seconds);
    }
    return report;
}

void write_convergence_csv(std::ostream& out, const ConvergenceReport& report, bool with_timing) {
    out << "n,D_n,gronwall_bound,runtime_seconds,mode,seed\n";
    const std::string seed = report.mode == SamplingMode::SampleRandom ? std::to_string(report.seed) : "NA";
    for (std::size_t k = 0; k < report.n_list.size(); ++k) {
        out << report.n_list[k] << ',' << format_real(report.d_n[k]) << ',' << format_real(report.gronwall_bounds[k])
            << ',' << (with_timing ? format_real(report.runtime_seconds[k]) : std::string("NA")) << ','
            << to_string(report.mode) << ',' << seed << '\n';
    }
}

void write_field_csv(std::ostream& out, const Trace& trace) {
    out << "t,x_k,s,e,i,r\n";
    for (std::size_t k = 0; k < trace.size(); ++k) {
        const FieldState& x = trace.states[k];
        const Vector xs = midpoints(x.n());
        const std::string t = format_real(trace.times[k]);
        for (std::size_t j = 0; j < x.n(); ++j)
            out << t << ',' << format_real(xs[j]) << ',' << format_real(x.s[j]) << ',' << format_real(x.e[j]) << ','
                << format_real(x.i[j]) << ',' << format_real(x.r[j]) << '\n';
    }
}

Matrix infected_heatmap(const Trace& trace) {
    if (trace.size() == 0) throw Error(ErrorKind::InvalidArgument, "empty trace");
    Matrix grid(trace.size(), trace.states.front().n());
    for (std::size_t k = 0; k < trace.size(); ++k)
        std::copy(trace.states[k].i.begin(), trace.states[k].i.end(), grid.row(k).begin());
    return grid;
}

}  // namespace epigraphon
