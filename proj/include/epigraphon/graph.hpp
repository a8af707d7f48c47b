#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <variant>
#include <vector>

#include "epigraphon/matrix.hpp"

namespace epigraphon {

enum class GraphKind { Simple01, Weighted };

/// Node set with a dense nonnegative coupling matrix.
///
/// Simple01 graphs are symmetric with 0/1 entries and an empty diagonal.
/// Weighted graphs only require finite nonnegative entries: a coupling built
/// from mobility data is not symmetric in general.
class Graph {
public:
    Graph(Matrix weights, GraphKind kind);

    std::size_t n() const noexcept { return weights_.rows(); }
    const Matrix& weights() const noexcept { return weights_; }
    GraphKind kind() const noexcept { return kind_; }
    bool symmetric() const { return is_symmetric(weights_); }

    bool operator==(const Graph&) const = default;

private:
    Matrix weights_;
    GraphKind kind_;
};

/// Ã + I as a Weighted graph (self-loop convention of the diffusive and
/// spectral-bound formulations).
Graph with_self_loops(const Graph& g);

struct MobilityData {
    Vector populations;  // N_j
    Matrix flows;        // Â(j,k): individuals of j that visit k
};

struct Coupling {
    Matrix p_out;  // Diag(N)^-1 Â, row stochastic
    Matrix p_in;   // Â Diag(M)^-1, column stochastic
    Matrix a;      // p_out * p_in^T
};

/// Derives the coupling matrix from movement data.
/// Throws DimensionMismatch, InvalidMobility (negative flows, row sums off
/// from populations) or ZeroArrivals.
Coupling build_coupling(const MobilityData& mob);

struct DegreeStats {
    Vector degree;
    double d_max = 0.0;
    double d_avg = 0.0;
};

DegreeStats degree_stats(const Graph& g);

/// Strong connectivity of the support graph {(j,k): w(j,k) > 0}.
bool is_irreducible(const Graph& g);

namespace family {
struct Complete {};
struct Path {};
/// Node 0 is the hub.
struct Star {};
struct Block {
    std::vector<std::size_t> block_sizes;
    Matrix block_weights;
};
struct ErdosRenyi {
    double p = 0.5;
    std::uint64_t seed = 0;
};
}  // namespace family

using GraphFamily = std::variant<family::Complete, family::Path, family::Star, family::Block, family::ErdosRenyi>;

/// Deterministic generators. Block graphs carry no self-loops; their kind is
/// Simple01 when every block weight is 0 or 1, Weighted otherwise.
/// ErdosRenyi draws with the counter-based generator in rng.hpp.
Graph make_graph(const GraphFamily& family, std::size_t n);

// Plain-text matrix format: a line "n", then n rows of n reals.
// Mobility files insert a row of n populations between the size line and the flows.
Matrix read_matrix(std::istream& in);
Matrix read_matrix_file(const std::filesystem::path& path);
void write_matrix(std::ostream& out, const Matrix& m);
MobilityData read_mobility(std::istream& in);
MobilityData read_mobility_file(const std::filesystem::path& path);

/// Infers Simple01 when all entries are 0/1 with empty diagonal and symmetric.
Graph graph_from_matrix(Matrix m);

/// CSV with header "j,k,value", one row per entry (0-based indices).
void write_matrix_csv(std::ostream& out, const Matrix& m);

}  // namespace epigraphon
