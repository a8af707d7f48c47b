#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "epigraphon/graph.hpp"
#include "epigraphon/kernels.hpp"
#include "epigraphon/matrix.hpp"

namespace epigraphon {

/// Graphon constant on the cells I_a x I_b of the uniform partition of [0,1]
/// into n blocks. Values are symmetric and lie in [0,1].
class StepGraphon {
public:
    explicit StepGraphon(Matrix values);

    std::size_t n_blocks() const noexcept { return values_.rows(); }
    const Matrix& values() const noexcept { return values_; }

    bool operator==(const StepGraphon&) const = default;

private:
    Matrix values_;
};

/// Analytic symmetric kernel with an essential bound K_w <= 1. The name and
/// parameter list identify it for provenance and config round-trips.
class KernelGraphon {
public:
    KernelGraphon(std::string name, Vector params, kernels::Kernel2D f, double bound);

    double operator()(double x, double y) const { return f_(x, y); }
    const kernels::Kernel2D& function() const noexcept { return f_; }
    double bound() const noexcept { return bound_; }
    const std::string& name() const noexcept { return name_; }
    const Vector& params() const noexcept { return params_; }

private:
    std::string name_;
    Vector params_;
    kernels::Kernel2D f_;
    double bound_;
};

using Graphon = std::variant<StepGraphon, KernelGraphon>;

/// Cell of x in the half-open uniform partition; x = 1 falls in the last cell.
std::size_t cell_of(double x, std::size_t n);

/// Throws OutOfDomain for x or y outside [0,1].
double eval(const Graphon& w, double x, double y);
/// K_w: essential sup of the graphon.
double graphon_bound(const Graphon& w);

StepGraphon constant_graphon(double c);
/// Throws WeightOutOfRange for weights outside [0,1], InvalidGraph when asymmetric.
StepGraphon graphon_from_graph(const Graph& g);

/// C_W exp(-((x - x0)^2 + (y - x0)^2) / (2 sigma^2)); C_W is the peak value.
KernelGraphon gaussian_graphon(double c_w, double x0, double sigma);
/// Full-parameter form; only the diagonal-centred isotropic case is a graphon,
/// anything else throws AsymmetricRequest.
KernelGraphon gaussian_graphon(double c_w, double x0, double y0, double sigma_x, double sigma_y);

/// Largest argument at which the Gamma quantile is evaluated.
inline constexpr double kGammaQuantileCap = 0.999;

/// cap * g(x) g(y) / g_max^2 with g the Gamma(shape, rate) quantile function,
/// evaluated at min(x, kGammaQuantileCap).
KernelGraphon gamma_contact_graphon(double shape, double rate, double cap);

struct RefinementPiece {
    double length;
    std::uint64_t units;  // length in multiples of 1 / (na * nb)
    std::size_t left;   // cell in the na-partition
    std::size_t right;  // cell in the nb-partition
};

/// Common refinement of the uniform partitions of [0,1] into na and nb cells,
/// in order; it has na + nb - gcd(na, nb) pieces.
std::vector<RefinementPiece> common_refinement(std::size_t na, std::size_t nb);

/// Midpoints x_k = (2k + 1) / (2n), k = 0..n-1.
Vector midpoints(std::size_t n);

/// Q(k, j) = W(x_k, x_j) at the n midpoints.
Matrix quadrature_matrix(const Graphon& w, std::size_t n);

/// Cell averages of W over I_a x I_b: exact for step graphons, sub x sub
/// midpoint sub-quadrature per cell for kernels.
Matrix cell_average_matrix(const Graphon& w, std::size_t n, std::size_t sub = 4);

/// Composite midpoint approximation of (T_W f)(x_k) = (1/n) sum_j W(x_k, x_j) f_j.
Vector apply_operator(const Graphon& w, std::span<const double> f, std::size_t n);

/// Nonzero eigenvalues of T_W for a step graphon (the spectrum of values / n),
/// descending.
Vector operator_spectrum_step(const StepGraphon& w);

/// lambda_1(T_W): exact for step graphons; for kernels, the Perron root of the
/// midpoint discretization at `quadrature_n` points.
double operator_lambda1(const Graphon& w, std::size_t quadrature_n = 1000);

/// integral of |w1 - w2| over [0,1]^2. Exact for two step graphons (common
/// refinement of their partitions), grid x grid midpoint rule otherwise.
double l1_distance(const Graphon& w1, const Graphon& w2, std::size_t grid = 256);

inline constexpr std::size_t kMaxExactCutBlocks = 16;

/// max over cell subsets S, T of |sum_{a in S, b in T} cells(a,b)| / n^2, the
/// cut norm of the step function with these (possibly signed) cell values.
/// Throws TooManyBlocks beyond 16 blocks.
double cut_norm_exact(const Matrix& cells);
double cut_norm_exact(const StepGraphon& w);

struct CutNormBounds {
    double lower = 0.0;  // max(|integral|, largest single-cell mass)
    double upper = 0.0;  // L1 norm
};

/// Cheap bounds; kernels are discretized on grid x grid cells first.
CutNormBounds cut_norm_bounds(const Graphon& w, std::size_t grid = 64);

/// Latent u_i = i/N (i = 1..N, node i-1); edge (i,j), i > j, with probability
/// W(u_i, u_j) from the counter-based generator.
Graph sample_graph_random(const Graphon& w, std::size_t n, std::uint64_t seed);
/// Weighted graph of cell averages (exact for steps, midpoint value for kernels).
Graph sample_graph_deterministic(const Graphon& w, std::size_t n);

struct GapRow {
    std::size_t n = 0;
    double gap = 0.0;    // |lambda_1(T_W) - lambda_1(T_{W_G})|
    double ratio = 0.0;  // gap / sqrt(log N / N)
};

/// One random sample per N (all under the same seed).
std::vector<GapRow> operator_norm_gap(const Graphon& w, std::span<const std::size_t> n_list, std::uint64_t seed,
                                      std::size_t kernel_quadrature = 1000);

// Step graphons use the matrix text format prefixed by "stepgraphon n".
void write_step_graphon(std::ostream& out, const StepGraphon& w);
StepGraphon read_step_graphon(std::istream& in);

/// Plain PPM (P3). Gray level round(255 * (v - lo) / (hi - lo)) clamped to
/// [0,255], so lo maps to black and hi to white; rows are matrix rows.
void write_ppm(std::ostream& out, const Matrix& values, double lo, double hi);
/// Columns x,y,value at the grid midpoints.
void write_grid_csv(std::ostream& out, const Matrix& grid);

}  // namespace epigraphon
