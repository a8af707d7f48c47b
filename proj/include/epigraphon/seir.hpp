#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "epigraphon/graph.hpp"
#include "epigraphon/matrix.hpp"

namespace epigraphon {

/// Per-node population fractions at one instant.
struct SeirState {
    Vector s, e, i, r;

    static SeirState zeros(std::size_t n) { return {Vector(n), Vector(n), Vector(n), Vector(n)}; }
    static SeirState uniform(std::size_t n, double s0, double e0, double i0, double r0);

    std::size_t n() const noexcept { return s.size(); }
    bool operator==(const SeirState&) const = default;
};

/// max_j |s_j + e_j + i_j + r_j - 1|
double conservation_residual(const SeirState& x);
double conservation_residual(const SeirState& x, std::size_t node);
double min_component(const SeirState& x);
/// Throws DimensionMismatch / NonFiniteInput / InvalidArgument when x is not a
/// valid state (components in [0,1], per-node sum 1 within tol).
void validate_state(const SeirState& x, double tol = 1e-10);

/// A rate coefficient (units 1/time): scalar, per-node vector, or a callable of
/// (t, node). Callables carry declared bounds since they cannot be inspected.
class Coefficient {
public:
    using Profile = std::function<double(double t, std::size_t node)>;

    Coefficient(double value);  // NOLINT(google-explicit-constructor)
    explicit Coefficient(Vector per_node);
    Coefficient(Profile profile, double lower, double upper, bool time_dependent = true);

    double at(double t, std::size_t node) const;
    void fill(double t, std::span<double> out) const;

    double lower() const noexcept { return lower_; }
    double upper() const noexcept { return upper_; }
    bool is_scalar() const noexcept { return std::holds_alternative<double>(value_); }
    bool time_dependent() const noexcept { return time_dependent_; }
    /// Nodes this coefficient is defined for (0 = any).
    std::size_t extent() const noexcept;

private:
    std::variant<double, Vector, Profile> value_;
    double lower_ = 0.0;
    double upper_ = 0.0;
    bool time_dependent_ = false;
};

/// Default values are those of the reference experiment (beta 0.74, mu 0.5, gamma 0.14).
struct EpidemicParams {
    Coefficient beta{0.74};
    Coefficient mu{0.5};
    Coefficient gamma{0.14};

    /// K0: the largest declared rate.
    double max_rate() const;
    /// c0: the smallest declared rate.
    double min_rate() const;
};

enum class CouplingMode {
    Mobility,          // c_jk = a_jk
    MeanField,         // c_jk = a_jk / n with a_jj forced to 1
    GraphonMeanField,  // c_jk = a_jk / n, diagonal kept (a step graphon's diagonal cells)
};

/// The SEIR vector field on n coupled nodes:
///   force_j = scale * sum_k C(j,k) beta_k(t) i_k
///   ds = -s*force, de = s*force - mu*e, di = mu*e - gamma*i, dr = gamma*i
class NetworkSystem {
public:
    NetworkSystem(Matrix coupling, double scale, EpidemicParams params);
    static NetworkSystem from_graph(const Graph& g, EpidemicParams params, CouplingMode mode);

    std::size_t n() const noexcept { return coupling_.rows(); }
    const Matrix& coupling() const noexcept { return coupling_; }
    double scale() const noexcept { return scale_; }
    const EpidemicParams& params() const noexcept { return params_; }
    /// scale * C, the matrix whose Diag(s)-scaling drives the threshold.
    Matrix effective_coupling() const;

    void derivative(double t, const SeirState& x, SeirState& dx) const;

private:
    Matrix coupling_;
    double scale_;
    EpidemicParams params_;
};

SeirState rhs(double t, const SeirState& x, const Graph& g, const EpidemicParams& p, CouplingMode mode);

/// Same dynamics with Diag(s)A replaced by Diag(s)^1/2 A Diag(s)^1/2; dr = gamma*i
/// so that r = 1 - s - e - i is preserved. Throws NegativeSusceptible.
SeirState rhs_symmetric(double t, const SeirState& x, const Graph& g, const EpidemicParams& p);

/// Laplacian form on a Simple01 graph with the A = Ã + I convention:
///   ds = -[Diag((d+1) o s) - Diag(s) L] (beta o i),  L = D - Ã.
SeirState rhs_laplacian(double t, const SeirState& x, const Graph& g, const EpidemicParams& p);

enum class Method { Euler, RK4 };

struct IntegrationSettings {
    double t0 = 0.0;
    double t_end = 1.0;
    double dt = 1e-2;
    Method method = Method::Euler;
    std::size_t record_every = 1;
    /// Compute lambda_M and the threshold margin at every recorded step.
    bool spectral_diagnostics = false;
};

struct StepDiagnostics {
    double conservation_residual = 0.0;
    double min_component = 0.0;
    std::optional<double> lambda_m;
    std::optional<double> margin;
};

struct Trace {
    Vector times;
    std::vector<SeirState> states;
    std::vector<StepDiagnostics> diagnostics;

    std::size_t size() const noexcept { return times.size(); }
};

/// Fixed-step explicit integration. Records the initial state, every
/// record_every-th step and the final state. No projection is applied.
/// Throws BlowUp when a component leaves [-10, 10], NonFiniteState on NaN/inf.
Trace integrate(const NetworkSystem& system, const SeirState& x0, const IntegrationSettings& settings);
Trace integrate(const SeirState& x0, const Graph& g, const EpidemicParams& p, CouplingMode mode,
                const IntegrationSettings& settings);

inline constexpr double kDefaultEquilibriumTol = 1e-4;

/// First recorded time after which max_j(e_j + i_j) stays <= tol.
std::optional<double> detect_equilibrium(const Trace& trace, double tol = kDefaultEquilibriumTol);

/// Columns t,node,s,e,i,r,conservation_residual[,lambda_M,margin].
void write_trace_csv(std::ostream& out, const Trace& trace);
/// Columns t,conservation_residual,min_component[,lambda_M,margin].
void write_diagnostics_csv(std::ostream& out, const Trace& trace);

}  // namespace epigraphon
