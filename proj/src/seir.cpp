#include "epigraphon/seir.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <string>

#include "epigraphon/error.hpp"
#include "epigraphon/format.hpp"
#include "epigraphon/kernels.hpp"
#include "epigraphon/spectral.hpp"

namespace epigraphon {

SeirState SeirState::uniform(std::size_t n, double s0, double e0, double i0, double r0) {
    return {Vector(n, s0), Vector(n, e0), Vector(n, i0), Vector(n, r0)};
}

double conservation_residual(const SeirState& x, std::size_t j) {
    return std::abs(x.s[j] + x.e[j] + x.i[j] + x.r[j] - 1.0);
}

double conservation_residual(const SeirState& x) {
    double worst = 0.0;
    for (std::size_t j = 0; j < x.n(); ++j) worst = std::max(worst, conservation_residual(x, j));
    return worst;
}

double min_component(const SeirState& x) {
    double lo = std::numeric_limits<double>::infinity();
    for (const Vector* v : {&x.s, &x.e, &x.i, &x.r})
        for (double c : *v) lo = std::min(lo, c);
    return lo;
}

namespace {

void check_shape(const SeirState& x) {
    const std::size_t n = x.s.size();
    if (n == 0 || x.e.size() != n || x.i.size() != n || x.r.size() != n)
        throw Error(ErrorKind::DimensionMismatch, "state compartments must have equal nonzero length");
}

void check_finite(const SeirState& x, ErrorKind kind) {
    for (const Vector* v : {&x.s, &x.e, &x.i, &x.r})
        if (!all_finite(*v)) throw Error(kind, "state has non-finite entries");
}

}  // namespace

void validate_state(const SeirState& x, double tol) {
    check_shape(x);
    check_finite(x, ErrorKind::NonFiniteInput);
    for (const Vector* v : {&x.s, &x.e, &x.i, &x.r})
        for (double c : *v)
            if (c < -tol || c > 1.0 + tol) throw Error(ErrorKind::InvalidArgument, "state component outside [0,1]");
    for (std::size_t j = 0; j < x.n(); ++j)
        if (conservation_residual(x, j) > tol)
            throw Error(ErrorKind::InvalidArgument, "fractions at node " + std::to_string(j) + " do not sum to 1");
}

// --- Coefficient ------------------------------------------------------------

Coefficient::Coefficient(double value) : value_(value), lower_(value), upper_(value) {
    if (!std::isfinite(value) || value < 0.0) throw Error(ErrorKind::InvalidArgument, "rate must be finite and nonnegative");
}

Coefficient::Coefficient(Vector per_node) {
    if (per_node.empty()) throw Error(ErrorKind::InvalidArgument, "empty per-node rate vector");
    if (!all_finite(per_node)) throw Error(ErrorKind::NonFiniteInput, "per-node rate not finite");
    lower_ = *std::min_element(per_node.begin(), per_node.end());
    upper_ = *std::max_element(per_node.begin(), per_node.end());
    if (lower_ < 0.0) throw Error(ErrorKind::InvalidArgument, "negative rate");
    value_ = std::move(per_node);
}

Coefficient::Coefficient(Profile profile, double lower, double upper, bool time_dependent)
    : value_(std::move(profile)), lower_(lower), upper_(upper), time_dependent_(time_dependent) {
    if (!(lower >= 0.0 && lower <= upper && std::isfinite(upper)))
        throw Error(ErrorKind::InvalidArgument, "rate bounds must satisfy 0 <= lower <= upper < inf");
}

double Coefficient::at(double t, std::size_t node) const {
    if (const auto* c = std::get_if<double>(&value_)) return *c;
    if (const auto* v = std::get_if<Vector>(&value_)) return (*v)[node];
    return std::get<Profile>(value_)(t, node);
}

void Coefficient::fill(double t, std::span<double> out) const {
    if (const auto* c = std::get_if<double>(&value_)) {
        std::fill(out.begin(), out.end(), *c);
    } else if (const auto* v = std::get_if<Vector>(&value_)) {
        if (v->size() != out.size()) throw Error(ErrorKind::DimensionMismatch, "per-node rate length");
        std::copy(v->begin(), v->end(), out.begin());
    } else {
        const auto& f = std::get<Profile>(value_);
        for (std::size_t j = 0; j < out.size(); ++j) out[j] = f(t, j);
    }
}

std::size_t Coefficient::extent() const noexcept {
    if (const auto* v = std::get_if<Vector>(&value_)) return v->size();
    return 0;
}

double EpidemicParams::max_rate() const { return std::max({beta.upper(), mu.upper(), gamma.upper()}); }
double EpidemicParams::min_rate() const { return std::min({beta.lower(), mu.lower(), gamma.lower()}); }

// --- vector fields ----------------------------------------------------------

NetworkSystem::NetworkSystem(Matrix coupling, double scale, EpidemicParams params)
    : coupling_(std::move(coupling)), scale_(scale), params_(std::move(params)) {
    if (!coupling_.is_square() || coupling_.rows() == 0)
        throw Error(ErrorKind::DimensionMismatch, "coupling must be a nonempty square matrix");
    if (!all_finite(coupling_)) throw Error(ErrorKind::NonFiniteInput, "coupling has non-finite entries");
    for (const Coefficient* c : {&params_.beta, &params_.mu, &params_.gamma})
        if (c->extent() != 0 && c->extent() != n())
            throw Error(ErrorKind::DimensionMismatch, "per-node rate length differs from node count");
}

NetworkSystem NetworkSystem::from_graph(const Graph& g, EpidemicParams params, CouplingMode mode) {
    const double n = static_cast<double>(g.n());
    switch (mode) {
        case CouplingMode::Mobility: return {g.weights(), 1.0, std::move(params)};
        case CouplingMode::MeanField: {
            Matrix a = g.weights();
            for (std::size_t j = 0; j < g.n(); ++j) a(j, j) = 1.0;
            return {std::move(a), 1.0 / n, std::move(params)};
        }
        case CouplingMode::GraphonMeanField: return {g.weights(), 1.0 / n, std::move(params)};
    }
    throw Error(ErrorKind::InvalidArgument, "unknown coupling mode");
}

Matrix NetworkSystem::effective_coupling() const { return scale_ * coupling_; }

namespace {

struct Rates {
    Vector beta, mu, gamma;
    explicit Rates(std::size_t n) : beta(n), mu(n), gamma(n) {}
    void fill(const EpidemicParams& p, double t) {
        p.beta.fill(t, beta);
        p.mu.fill(t, mu);
        p.gamma.fill(t, gamma);
    }
};

/// Writes the four derivatives given the per-node force of infection.
void assemble(const SeirState& x, const Rates& k, std::span<const double> force, SeirState& dx) {
    const std::size_t n = x.n();
    dx.s.resize(n);
    dx.e.resize(n);
    dx.i.resize(n);
    dx.r.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double infection = x.s[j] * force[j];
        const double incubation = k.mu[j] * x.e[j];
        const double recovery = k.gamma[j] * x.i[j];
        dx.s[j] = -infection;
        dx.e[j] = infection - incubation;
        dx.i[j] = incubation - recovery;
        dx.r[j] = recovery;
    }
}

void check_input(const SeirState& x, std::size_t n) {
    check_shape(x);
    if (x.n() != n) throw Error(ErrorKind::DimensionMismatch, "state length differs from node count");
    check_finite(x, ErrorKind::NonFiniteInput);
}

}  // namespace

void NetworkSystem::derivative(double t, const SeirState& x, SeirState& dx) const {
    check_input(x, n());
    Rates k(n());
    k.fill(params_, t);
    Vector weighted(n());
    for (std::size_t j = 0; j < n(); ++j) weighted[j] = k.beta[j] * x.i[j];
    Vector force(n());
    kernels::parallel::matvec(coupling_, weighted, force, scale_);
    assemble(x, k, force, dx);
}

SeirState rhs(double t, const SeirState& x, const Graph& g, const EpidemicParams& p, CouplingMode mode) {
    SeirState dx;
    NetworkSystem::from_graph(g, p, mode).derivative(t, x, dx);
    return dx;
}

SeirState rhs_symmetric(double t, const SeirState& x, const Graph& g, const EpidemicParams& p) {
    check_input(x, g.n());
    const Matrix bsym = build_B_sym(x.s, g.weights());
    const std::size_t n = g.n();
    Rates k(n);
    k.fill(p, t);
    Vector weighted(n);
    for (std::size_t j = 0; j < n; ++j) weighted[j] = k.beta[j] * x.i[j];
    Vector pressure(n);
    kernels::parallel::matvec(bsym, weighted, pressure);
    SeirState dx = SeirState::zeros(n);
    for (std::size_t j = 0; j < n; ++j) {
        dx.s[j] = -pressure[j];
        dx.e[j] = pressure[j] - k.mu[j] * x.e[j];
        dx.i[j] = k.mu[j] * x.e[j] - k.gamma[j] * x.i[j];
        dx.r[j] = k.gamma[j] * x.i[j];
    }
    return dx;
}

SeirState rhs_laplacian(double t, const SeirState& x, const Graph& g, const EpidemicParams& p) {
    if (g.kind() != GraphKind::Simple01) throw Error(ErrorKind::InvalidGraph, "Laplacian form needs a Simple01 graph");
    check_input(x, g.n());
    const std::size_t n = g.n();
    const DegreeStats deg = degree_stats(g);
    Matrix laplacian(n, n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k) laplacian(j, k) = (j == k ? deg.degree[j] : 0.0) - g.weights()(j, k);

    Rates k(n);
    k.fill(p, t);
    Vector weighted(n);
    for (std::size_t j = 0; j < n; ++j) weighted[j] = k.beta[j] * x.i[j];
    Vector diffusion(n);
    kernels::parallel::matvec(laplacian, weighted, diffusion);
    Vector force(n);
    for (std::size_t j = 0; j < n; ++j) {
        // s_j * force_j = (d_j + 1) s_j w_j - s_j (L w)_j
        force[j] = (deg.degree[j] + 1.0) * weighted[j] - diffusion[j];
    }
    SeirState dx;
    assemble(x, k, force, dx);
    return dx;
}

// --- integration ------------------------------------------------------------

namespace {

void axpy(SeirState& y, double a, const SeirState& x) {
    for (std::size_t j = 0; j < y.n(); ++j) {
        y.s[j] += a * x.s[j];
        y.e[j] += a * x.e[j];
        y.i[j] += a * x.i[j];
        y.r[j] += a * x.r[j];
    }
}

SeirState offset(const SeirState& base, double a, const SeirState& dir) {
    SeirState out = base;
    axpy(out, a, dir);
    return out;
}

void step(const NetworkSystem& sys, Method method, double t, double h, SeirState& x) {
    if (method == Method::Euler) {
        SeirState k1;
        sys.derivative(t, x, k1);
        axpy(x, h, k1);
        return;
    }
    SeirState k1, k2, k3, k4;
    sys.derivative(t, x, k1);
    sys.derivative(t + 0.5 * h, offset(x, 0.5 * h, k1), k2);
    sys.derivative(t + 0.5 * h, offset(x, 0.5 * h, k2), k3);
    sys.derivative(t + h, offset(x, h, k3), k4);
    for (std::size_t j = 0; j < x.n(); ++j) {
        x.s[j] += h / 6.0 * (k1.s[j] + 2.0 * k2.s[j] + 2.0 * k3.s[j] + k4.s[j]);
        x.e[j] += h / 6.0 * (k1.e[j] + 2.0 * k2.e[j] + 2.0 * k3.e[j] + k4.e[j]);
        x.i[j] += h / 6.0 * (k1.i[j] + 2.0 * k2.i[j] + 2.0 * k3.i[j] + k4.i[j]);
        x.r[j] += h / 6.0 * (k1.r[j] + 2.0 * k2.r[j] + 2.0 * k3.r[j] + k4.r[j]);
    }
}

constexpr double kBlowUpBound = 10.0;

void check_step(const SeirState& x, double t) {
    for (const Vector* v : {&x.s, &x.e, &x.i, &x.r})
        for (double c : *v) {
            if (!std::isfinite(c)) throw Error(ErrorKind::NonFiniteState, "non-finite state at t=" + format_real(t));
            if (std::abs(c) > kBlowUpBound)
                throw Error(ErrorKind::BlowUp, "component magnitude above 10 at t=" + format_real(t) + " (dt too large?)");
        }
}

}  // namespace

Trace integrate(const NetworkSystem& sys, const SeirState& x0, const IntegrationSettings& cfg) {
    if (!(cfg.dt > 0.0) || !std::isfinite(cfg.dt)) throw Error(ErrorKind::InvalidArgument, "dt must be positive");
    if (!(cfg.t_end > cfg.t0)) throw Error(ErrorKind::InvalidArgument, "t_end must exceed t0");
    if (cfg.record_every == 0) throw Error(ErrorKind::InvalidArgument, "record_every must be positive");
    check_input(x0, sys.n());

    const Matrix coupling = cfg.spectral_diagnostics ? sys.effective_coupling() : Matrix();
    Trace trace;
    auto record = [&](double t, const SeirState& x) {
        StepDiagnostics d;
        d.conservation_residual = conservation_residual(x);
        d.min_component = min_component(x);
        if (cfg.spectral_diagnostics) {
            const ThresholdMargin m = threshold_margin(t, x, coupling, sys.params());
            d.lambda_m = m.lambda_m;
            d.margin = m.margin;
        }
        trace.times.push_back(t);
        trace.states.push_back(x);
        trace.diagnostics.push_back(d);
    };

    const double span = cfg.t_end - cfg.t0;
    const auto steps = static_cast<std::size_t>(std::ceil(span / cfg.dt - 1e-9));
    SeirState x = x0;
    record(cfg.t0, x);
    for (std::size_t k = 0; k < steps; ++k) {
        const double t = cfg.t0 + static_cast<double>(k) * cfg.dt;
        const double t_next = k + 1 == steps ? cfg.t_end : cfg.t0 + static_cast<double>(k + 1) * cfg.dt;
        step(sys, cfg.method, t, t_next - t, x);
        check_step(x, t_next);
        if ((k + 1) % cfg.record_every == 0 || k + 1 == steps) record(t_next, x);
    }
    return trace;
}

Trace integrate(const SeirState& x0, const Graph& g, const EpidemicParams& p, CouplingMode mode,
                const IntegrationSettings& settings) {
    return integrate(NetworkSystem::from_graph(g, p, mode), x0, settings);
}

std::optional<double> detect_equilibrium(const Trace& trace, double tol) {
    if (trace.size() == 0) throw Error(ErrorKind::InvalidArgument, "empty trace");
    std::optional<double> since;
    for (std::size_t k = 0; k < trace.size(); ++k) {
        const SeirState& x = trace.states[k];
        double active = 0.0;
        for (std::size_t j = 0; j < x.n(); ++j) active = std::max(active, x.e[j] + x.i[j]);
        if (active <= tol) {
            if (!since) since = trace.times[k];
        } else {
            since.reset();
        }
    }
    return since;
}

namespace {

bool has_spectral(const Trace& trace) {
    return !trace.diagnostics.empty() && trace.diagnostics.front().lambda_m.has_value();
}

}  // namespace

void write_trace_csv(std::ostream& out, const Trace& trace) {
    const bool spectral = has_spectral(trace);
    out << "t,node,s,e,i,r,conservation_residual" << (spectral ? ",lambda_M,margin" : "") << '\n';
    for (std::size_t k = 0; k < trace.size(); ++k) {
        const SeirState& x = trace.states[k];
        const std::string t = format_real(trace.times[k]);
        std::string tail;
        if (spectral)
            tail = ',' + format_real(*trace.diagnostics[k].lambda_m) + ',' + format_real(*trace.diagnostics[k].margin);
        for (std::size_t j = 0; j < x.n(); ++j) {
            out << t << ',' << j << ',' << format_real(x.s[j]) << ',' << format_real(x.e[j]) << ','
                << format_real(x.i[j]) << ',' << format_real(x.r[j]) << ',' << format_real(conservation_residual(x, j))
                << tail << '\n';
        }
    }
}

void write_diagnostics_csv(std::ostream& out, const Trace& trace) {
    const bool spectral = has_spectral(trace);
    out << "t,conservation_residual,min_component" << (spectral ? ",lambda_M,margin" : "") << '\n';
    for (std::size_t k = 0; k < trace.size(); ++k) {
        const StepDiagnostics& d = trace.diagnostics[k];
        out << format_real(trace.times[k]) << ',' << format_real(d.conservation_residual) << ','
            << format_real(d.min_component);
        if (spectral) out << ',' << format_real(*d.lambda_m) << ',' << format_real(*d.margin);
        out << '\n';
    }
}

}  // namespace epigraphon
