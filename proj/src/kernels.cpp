#include "epigraphon/kernels.hpp"

#include <cstddef>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "epigraphon/error.hpp"
#include "epigraphon/rng.hpp"

namespace epigraphon::kernels {

namespace {

// Below this many rows the fork/join overhead dominates.
constexpr std::ptrdiff_t kParallelRows = 64;

void check_matvec(const Matrix& m, std::span<const double> x, std::span<double> out) {
    if (m.cols() != x.size() || m.rows() != out.size())
        throw Error(ErrorKind::DimensionMismatch, "matvec operand sizes");
}

inline double row_dot(std::span<const double> row, std::span<const double> x) {
    double acc = 0.0;
    for (std::size_t k = 0; k < row.size(); ++k) acc += row[k] * x[k];
    return acc;
}

void check_probs(const Matrix& probs) {
    if (!probs.is_square()) throw Error(ErrorKind::DimensionMismatch, "edge probabilities must be square");
}

inline void draw_row(const Matrix& probs, std::uint64_t seed, std::size_t i, Matrix& out) {
    for (std::size_t j = 0; j < i; ++j) {
        const double u = counter_uniform(seed, pair_index(i, j));
        const double edge = u < probs(i, j) ? 1.0 : 0.0;
        out(i, j) = edge;
        out(j, i) = edge;
    }
}

}  // namespace

namespace serial {

void matvec(const Matrix& m, std::span<const double> x, std::span<double> out, double scale) {
    check_matvec(m, x, out);
    for (std::size_t j = 0; j < m.rows(); ++j) out[j] = scale * row_dot(m.row(j), x);
}

Matrix evaluate_grid(const Kernel2D& f, std::span<const double> xs, std::span<const double> ys) {
    Matrix g(xs.size(), ys.size());
    for (std::size_t r = 0; r < xs.size(); ++r)
        for (std::size_t c = 0; c < ys.size(); ++c) g(r, c) = f(xs[r], ys[c]);
    return g;
}

Matrix bernoulli_adjacency(const Matrix& probs, std::uint64_t seed) {
    check_probs(probs);
    Matrix out(probs.rows(), probs.cols());
    for (std::size_t i = 1; i < probs.rows(); ++i) draw_row(probs, seed, i, out);
    return out;
}

}  // namespace serial

namespace parallel {

void matvec(const Matrix& m, std::span<const double> x, std::span<double> out, double scale) {
    check_matvec(m, x, out);
    const auto rows = static_cast<std::ptrdiff_t>(m.rows());
#pragma omp parallel for schedule(static) if (rows >= kParallelRows)
    for (std::ptrdiff_t j = 0; j < rows; ++j) out[j] = scale * row_dot(m.row(j), x);
}

Matrix evaluate_grid(const Kernel2D& f, std::span<const double> xs, std::span<const double> ys) {
    Matrix g(xs.size(), ys.size());
    const auto rows = static_cast<std::ptrdiff_t>(xs.size());
#pragma omp parallel for schedule(static) if (rows >= kParallelRows)
    for (std::ptrdiff_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < ys.size(); ++c) g(r, c) = f(xs[r], ys[c]);
    return g;
}

Matrix bernoulli_adjacency(const Matrix& probs, std::uint64_t seed) {
    check_probs(probs);
    Matrix out(probs.rows(), probs.cols());
    const auto rows = static_cast<std::ptrdiff_t>(probs.rows());
#pragma omp parallel for schedule(dynamic, 16) if (rows >= kParallelRows)
    for (std::ptrdiff_t i = 1; i < rows; ++i) draw_row(probs, seed, static_cast<std::size_t>(i), out);
    return out;
}

}  // namespace parallel

int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

}  // namespace epigraphon::kernels
