#include "epigraphon/graph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>

#include "epigraphon/error.hpp"
#include "epigraphon/format.hpp"
#include "epigraphon/rng.hpp"

namespace epigraphon {

Graph::Graph(Matrix weights, GraphKind kind) : weights_(std::move(weights)), kind_(kind) {
    if (!weights_.is_square() || weights_.rows() == 0)
        throw Error(ErrorKind::InvalidGraph, "weights must be a nonempty square matrix");
    if (!all_finite(weights_)) throw Error(ErrorKind::NonFiniteInput, "graph weights must be finite");
    const std::size_t n = weights_.rows();
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k) {
            const double w = weights_(j, k);
            if (w < 0.0) throw Error(ErrorKind::InvalidGraph, "negative weight");
            if (kind_ == GraphKind::Simple01) {
                if (w != 0.0 && w != 1.0) throw Error(ErrorKind::InvalidGraph, "Simple01 weight not 0/1");
                if (j == k && w != 0.0) throw Error(ErrorKind::InvalidGraph, "Simple01 graph with self-loop");
                if (w != weights_(k, j)) throw Error(ErrorKind::InvalidGraph, "Simple01 graph not symmetric");
            }
        }
}

Graph with_self_loops(const Graph& g) {
    Matrix a = g.weights();
    for (std::size_t j = 0; j < g.n(); ++j) a(j, j) += 1.0;
    return Graph(std::move(a), GraphKind::Weighted);
}

Coupling build_coupling(const MobilityData& mob) {
    const std::size_t n = mob.populations.size();
    if (!mob.flows.is_square() || mob.flows.rows() != n || n == 0)
        throw Error(ErrorKind::DimensionMismatch, "populations length must match flow dimension");
    if (!all_finite(mob.flows) || !all_finite(mob.populations))
        throw Error(ErrorKind::NonFiniteInput, "mobility data must be finite");

    Vector arrivals(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        if (!(mob.populations[j] > 0.0)) throw Error(ErrorKind::InvalidMobility, "populations must be positive");
        double departures = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            const double f = mob.flows(j, k);
            if (f < 0.0) throw Error(ErrorKind::InvalidMobility, "negative flow");
            departures += f;
            arrivals[k] += f;
        }
        if (std::abs(departures - mob.populations[j]) > 1e-9 * mob.populations[j])
            throw Error(ErrorKind::InvalidMobility,
                        "row " + std::to_string(j) + " of flows does not sum to its population");
    }
    for (std::size_t j = 0; j < n; ++j)
        if (arrivals[j] <= 0.0) throw Error(ErrorKind::ZeroArrivals, "node " + std::to_string(j) + " has no arrivals");

    Coupling c{Matrix(n, n), Matrix(n, n), Matrix(n, n)};
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k) {
            c.p_out(j, k) = mob.flows(j, k) / mob.populations[j];
            c.p_in(j, k) = mob.flows(j, k) / arrivals[k];
        }
    c.a = c.p_out * c.p_in.transposed();
    return c;
}

DegreeStats degree_stats(const Graph& g) {
    DegreeStats st;
    st.degree.resize(g.n());
    for (std::size_t j = 0; j < g.n(); ++j) {
        const auto row = g.weights().row(j);
        st.degree[j] = std::accumulate(row.begin(), row.end(), 0.0);
    }
    st.d_max = *std::max_element(st.degree.begin(), st.degree.end());
    st.d_avg = std::accumulate(st.degree.begin(), st.degree.end(), 0.0) / static_cast<double>(g.n());
    return st;
}

namespace {

std::size_t reach_count(const Matrix& w, bool reverse) {
    const std::size_t n = w.rows();
    std::vector<char> seen(n, 0);
    std::deque<std::size_t> queue{0};
    seen[0] = 1;
    std::size_t count = 1;
    while (!queue.empty()) {
        const std::size_t u = queue.front();
        queue.pop_front();
        for (std::size_t v = 0; v < n; ++v) {
            const double edge = reverse ? w(v, u) : w(u, v);
            if (edge > 0.0 && !seen[v]) {
                seen[v] = 1;
                ++count;
                queue.push_back(v);
            }
        }
    }
    return count;
}

}  // namespace

bool is_irreducible(const Graph& g) {
    const std::size_t n = g.n();
    if (reach_count(g.weights(), false) != n) return false;
    return g.symmetric() || reach_count(g.weights(), true) == n;
}

Graph make_graph(const GraphFamily& fam, std::size_t n) {
    if (n == 0) throw Error(ErrorKind::InvalidArgument, "graph needs at least one node");
    return std::visit(
        [n](const auto& f) -> Graph {
            using F = std::decay_t<decltype(f)>;
            Matrix w(n, n);
            if constexpr (std::is_same_v<F, family::Complete>) {
                for (std::size_t j = 0; j < n; ++j)
                    for (std::size_t k = 0; k < n; ++k) w(j, k) = j == k ? 0.0 : 1.0;
                return Graph(std::move(w), GraphKind::Simple01);
            } else if constexpr (std::is_same_v<F, family::Path>) {
                for (std::size_t j = 0; j + 1 < n; ++j) w(j, j + 1) = w(j + 1, j) = 1.0;
                return Graph(std::move(w), GraphKind::Simple01);
            } else if constexpr (std::is_same_v<F, family::Star>) {
                for (std::size_t j = 1; j < n; ++j) w(0, j) = w(j, 0) = 1.0;
                return Graph(std::move(w), GraphKind::Simple01);
            } else if constexpr (std::is_same_v<F, family::Block>) {
                const std::size_t blocks = f.block_sizes.size();
                const std::size_t total = std::accumulate(f.block_sizes.begin(), f.block_sizes.end(), std::size_t{0});
                if (blocks == 0 || total != n)
                    throw Error(ErrorKind::BadPartition, "block sizes must sum to n");
                if (std::find(f.block_sizes.begin(), f.block_sizes.end(), std::size_t{0}) != f.block_sizes.end())
                    throw Error(ErrorKind::BadPartition, "empty block");
                if (f.block_weights.rows() != blocks || f.block_weights.cols() != blocks)
                    throw Error(ErrorKind::BadPartition, "block weight matrix must be blocks x blocks");
                if (!is_symmetric(f.block_weights))
                    throw Error(ErrorKind::InvalidGraph, "block weight matrix must be symmetric");
                std::vector<std::size_t> label;
                for (std::size_t b = 0; b < blocks; ++b) label.insert(label.end(), f.block_sizes[b], b);
                bool binary = true;
                for (std::size_t j = 0; j < n; ++j)
                    for (std::size_t k = 0; k < n; ++k) {
                        if (j == k) continue;
                        w(j, k) = f.block_weights(label[j], label[k]);
                        binary = binary && (w(j, k) == 0.0 || w(j, k) == 1.0);
                    }
                return Graph(std::move(w), binary ? GraphKind::Simple01 : GraphKind::Weighted);
            } else {
                if (!(f.p >= 0.0 && f.p <= 1.0)) throw Error(ErrorKind::InvalidArgument, "edge probability outside [0,1]");
                for (std::size_t i = 1; i < n; ++i)
                    for (std::size_t j = 0; j < i; ++j)
                        if (counter_uniform(f.seed, pair_index(i, j)) < f.p) w(i, j) = w(j, i) = 1.0;
                return Graph(std::move(w), GraphKind::Simple01);
            }
        },
        fam);
}

namespace {

std::size_t read_size(std::istream& in, const char* what) {
    long long n = 0;
    if (!(in >> n) || n <= 0) throw Error(ErrorKind::ParseError, std::string("expected positive size for ") + what);
    return static_cast<std::size_t>(n);
}

double read_real(std::istream& in) {
    std::string token;
    if (!(in >> token)) throw Error(ErrorKind::ParseError, "matrix file truncated");
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(token, &used);
    } catch (const std::exception&) {
        throw Error(ErrorKind::ParseError, "not a number: '" + token + "'");
    }
    if (used != token.size()) throw Error(ErrorKind::ParseError, "not a number: '" + token + "'");
    return v;
}

Matrix read_square(std::istream& in, std::size_t n) {
    Matrix m(n, n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k) m(j, k) = read_real(in);
    return m;
}

std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::IoError, "cannot open " + path.string());
    return in;
}

}  // namespace

Matrix read_matrix(std::istream& in) { return read_square(in, read_size(in, "matrix")); }

Matrix read_matrix_file(const std::filesystem::path& path) {
    auto in = open_input(path);
    return read_matrix(in);
}

void write_matrix(std::ostream& out, const Matrix& m) {
    out << m.rows() << '\n';
    for (std::size_t j = 0; j < m.rows(); ++j) {
        for (std::size_t k = 0; k < m.cols(); ++k) out << (k ? " " : "") << format_real(m(j, k));
        out << '\n';
    }
}

MobilityData read_mobility(std::istream& in) {
    const std::size_t n = read_size(in, "mobility");
    MobilityData mob;
    mob.populations.resize(n);
    for (double& p : mob.populations) p = read_real(in);
    mob.flows = read_square(in, n);
    return mob;
}

MobilityData read_mobility_file(const std::filesystem::path& path) {
    auto in = open_input(path);
    return read_mobility(in);
}

Graph graph_from_matrix(Matrix m) {
    bool simple = is_symmetric(m);
    for (std::size_t j = 0; simple && j < m.rows(); ++j)
        for (std::size_t k = 0; k < m.cols(); ++k) {
            const double w = m(j, k);
            if ((w != 0.0 && w != 1.0) || (j == k && w != 0.0)) {
                simple = false;
                break;
            }
        }
    return Graph(std::move(m), simple ? GraphKind::Simple01 : GraphKind::Weighted);
}

void write_matrix_csv(std::ostream& out, const Matrix& m) {
    out << "j,k,value\n";
    for (std::size_t j = 0; j < m.rows(); ++j)
        for (std::size_t k = 0; k < m.cols(); ++k) out << j << ',' << k << ',' << format_real(m(j, k)) << '\n';
}

}  // namespace epigraphon
