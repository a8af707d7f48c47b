#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "epigraphon/graphon.hpp"
#include "epigraphon/matrix.hpp"
#include "epigraphon/seir.hpp"

namespace epigraphon {

/// Field values at the n quadrature midpoints.
using FieldState = SeirState;

/// A real function of (t, x) on [0,1]: constant, piecewise constant on a
/// uniform partition, or a callable with declared bounds.
class ScalarField {
public:
    using Fn = std::function<double(double t, double x)>;

    ScalarField(double value);  // NOLINT(google-explicit-constructor)
    ScalarField(Fn f, double lower, double upper, bool time_dependent = false);
    static ScalarField piecewise(Vector cell_values);

    double operator()(double t, double x) const;

    double lower() const noexcept { return lower_; }
    double upper() const noexcept { return upper_; }
    bool time_dependent() const noexcept { return time_dependent_; }
    bool is_constant() const noexcept { return std::holds_alternative<double>(value_); }
    /// Cell values when piecewise constant.
    const Vector* cells() const noexcept { return std::get_if<Vector>(&value_); }

    /// Values at the n midpoints.
    Vector at_midpoints(double t, std::size_t n) const;
    /// Averages over the n cells: exact for constant and piecewise-constant
    /// fields, 16-point midpoint sub-quadrature per cell otherwise.
    Vector cell_averages(double t, std::size_t n) const;

private:
    std::variant<double, Vector, Fn> value_;
    double lower_ = 0.0;
    double upper_ = 0.0;
    bool time_dependent_ = false;
};

inline constexpr std::size_t kCoefficientSubQuadrature = 16;

struct CoefficientField {
    ScalarField beta{0.74};
    ScalarField mu{0.5};
    ScalarField gamma{0.14};

    double max_rate() const;  // K0
    double min_rate() const;  // c0
};

struct PerCellCoefficients {
    Vector beta, mu, gamma;
};

/// Cell averages of each coefficient at time t.
PerCellCoefficients average_coefficients(const CoefficientField& c, std::size_t n, double t = 0.0);

enum class CoefficientSampling { Midpoint, CellAverage };

/// Per-node rates for an n-cell system, re-evaluated in time when the field is
/// time dependent.
EpidemicParams discretize_coefficients(const CoefficientField& c, std::size_t n, CoefficientSampling how);

/// The semi-discrete system on n midpoints: coupling Q(k,j) = W(x_k, x_j),
/// scale 1/n, coefficients sampled at the midpoints.
NetworkSystem semi_discrete_system(const Graphon& w, const CoefficientField& c, std::size_t n);

/// ds_k = -s_k (1/n) sum_j beta(t,x_j) W(x_k,x_j) i_j, de_k = -ds_k - mu e_k,
/// di_k = mu e_k - gamma i_k, dr_k = gamma i_k.
FieldState gseir_rhs(double t, const FieldState& x, const Graphon& w, const CoefficientField& c);

/// Initial fields as functions of x (time is ignored).
struct InitialFields {
    ScalarField s{1.0};
    ScalarField e{0.0};
    ScalarField i{0.0};
    ScalarField r{0.0};
};

/// Cell averages of the initial fields; validated as a state.
FieldState project_initial(const InitialFields& x0, std::size_t n);

/// Piecewise-constant lift of cell values on the uniform n-partition.
class PiecewiseConstant {
public:
    explicit PiecewiseConstant(Vector values);

    double operator()(double x) const;
    std::size_t n() const noexcept { return values_.size(); }
    const Vector& values() const noexcept { return values_; }

private:
    Vector values_;
};

PiecewiseConstant embed_piecewise(std::span<const double> v);

enum class FieldNorm { SupPointwise, L2 };

inline constexpr std::size_t kMaxRefinementCells = 1'000'000;

/// Exact distance on the common refinement of the two partitions. Throws
/// IncompatiblePartitions when the refinement exceeds 10^6 cells.
double field_distance(const PiecewiseConstant& a, const PiecewiseConstant& b, FieldNorm norm);
/// For states: SupPointwise is the B_inf norm, the sum over compartments of
/// sup distances; L2 is sqrt of the summed squared compartment L2 distances.
double field_distance(const FieldState& a, const FieldState& b, FieldNorm norm);

enum class SamplingMode { ProjectContinuum, SampleDeterministic, SampleRandom };

std::string_view to_string(SamplingMode mode);

struct ConvergenceOptions {
    SamplingMode mode = SamplingMode::ProjectContinuum;
    std::uint64_t seed = 0;
    /// Defaults to 2 * max(n_list); smaller values throw ReferenceTooCoarse.
    std::optional<std::size_t> reference_n;
    Method method = Method::Euler;
    FieldNorm norm = FieldNorm::SupPointwise;
    std::size_t record_every = 1;
};

struct ConvergenceReport {
    std::vector<std::size_t> n_list;
    Vector d_n;
    Vector gronwall_bounds;
    Vector runtime_seconds;
    std::size_t reference_n = 0;
    SamplingMode mode = SamplingMode::ProjectContinuum;
    std::uint64_t seed = 0;
};

/// Self-convergence sweep. Each n builds an n-cell system from the graphon
/// (cell-average projection, deterministic sample or random sample),
/// cell-averaged coefficients and initial data, integrates on [0, T] and
/// records D_n = max over recorded times of the distance to the reference run
/// (cell-average projection at reference_n). The envelope is
///   [||u_ref(0) - u_n(0)||_Binf + T ||beta W - beta_n W_n||_L1] (exp(C T) - 1),
/// C = max(K0 K_w, K0).
ConvergenceReport convergence_study(const Graphon& w, const CoefficientField& c, const InitialFields& x0,
                                    std::span<const std::size_t> n_list, double t_end, double dt,
                                    const ConvergenceOptions& options = {});

/// Columns n,D_n,gronwall_bound,runtime_seconds,mode,seed. Runtimes are
/// written as NA unless `with_timing`, so that reports are reproducible.
void write_convergence_csv(std::ostream& out, const ConvergenceReport& report, bool with_timing = false);

/// Columns t,x_k,s,e,i,r.
void write_field_csv(std::ostream& out, const Trace& trace);
/// i(t, x) with one row per recorded time and one column per midpoint.
Matrix infected_heatmap(const Trace& trace);

}  // namespace epigraphon
