#pragma once

#include <cstddef>
#include <span>

#include "epigraphon/graph.hpp"
#include "epigraphon/matrix.hpp"
#include "epigraphon/seir.hpp"

namespace epigraphon {

/// Dominant eigenvalue with its left eigenvector, v normalized to unit 1-norm.
struct EigenPair {
    double lambda = 0.0;
    Vector v;
    std::size_t iterations = 0;
    double residual = 0.0;  // ||v^T M - lambda v^T||_inf
};

inline constexpr double kDefaultEigenTol = 1e-10;
inline constexpr std::size_t kDefaultEigenMaxIter = 10'000;

/// Diag(s) A
Matrix build_B(std::span<const double> s, const Matrix& a);
/// Diag(s)^1/2 A Diag(s)^1/2; throws NegativeSusceptible.
Matrix build_B_sym(std::span<const double> s, const Matrix& a);

/// Power iteration on (M + shift I)^T from the all-ones start vector, for a
/// nonnegative square M. The positive shift removes the period of
/// bipartite-like supports without changing eigenvectors.
/// Throws ZeroMatrix, InvalidArgument (negative entries) or NoConvergence.
EigenPair dominant_left_eigenpair(const Matrix& m, double tol = kDefaultEigenTol,
                                  std::size_t max_iter = kDefaultEigenMaxIter);

/// Spectral radius of a nonnegative matrix; 0 for the zero matrix. The
/// tolerance applies to m scaled to unit largest entry.
double perron_root(const Matrix& m, double tol = kDefaultEigenTol);

struct SpectralBounds {
    double lower = 0.0;  // (d_avg + 1) min_j s_j
    double upper = 0.0;  // (d_max + 1) max_j s_j
};

/// Bounds on lambda_1(Diag(s)(Ã + I)) for a Simple01 graph Ã.
SpectralBounds spectral_bounds(const Graph& g, std::span<const double> s);

struct ThresholdMargin {
    double margin = 0.0;  // beta * lambda_M - gamma
    double lambda_m = 0.0;
    double beta = 0.0;
    double gamma = 0.0;
    /// True when beta/gamma vary across nodes: max beta and min gamma are used,
    /// which is a conservative envelope rather than the scalar-rate threshold.
    bool envelope = false;
};

/// Margin for B(t) = Diag(s(t)) C where C is the effective coupling matrix.
ThresholdMargin threshold_margin(double t, const SeirState& x, const Matrix& coupling, const EpidemicParams& p);
ThresholdMargin threshold_margin(double t, const SeirState& x, const Graph& g, const EpidemicParams& p,
                                 CouplingMode mode = CouplingMode::Mobility);

struct QTauSeries {
    double tau = 0.0;
    Vector times;
    Vector q;              // V_M(tau)^T (e(t) + i(t)) for recorded t >= tau
    Vector left_vector;    // V_M(tau)
    ThresholdMargin at_tau;
};

/// Throws InvalidArgument when tau is outside the trace or s(tau) is not positive.
QTauSeries q_tau_series(const Trace& trace, const Matrix& coupling, const EpidemicParams& p, double tau);

}  // namespace epigraphon
