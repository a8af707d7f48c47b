#pragma once

// Data-parallel inner loops. Every kernel exists twice with the same
// signature: `serial` is the reference implementation used by tests and the
// benchmark baseline, `parallel` is the OpenMP version the library calls.
// Both compute each output element with the same operation order, so their
// results are bitwise identical regardless of thread count.

#include <cstdint>
#include <functional>
#include <span>

#include "epigraphon/matrix.hpp"

namespace epigraphon::kernels {

using Kernel2D = std::function<double(double, double)>;

namespace serial {

/// out_j = scale * sum_k m(j,k) x_k
void matvec(const Matrix& m, std::span<const double> x, std::span<double> out, double scale = 1.0);

/// Matrix of f(xs[r], ys[c]).
Matrix evaluate_grid(const Kernel2D& f, std::span<const double> xs, std::span<const double> ys);

/// Symmetric 0/1 matrix with zero diagonal: entry (i,j), i > j, is 1 when the
/// counter draw for pair_index(i,j) under `seed` falls below probs(i,j).
Matrix bernoulli_adjacency(const Matrix& probs, std::uint64_t seed);

}  // namespace serial

namespace parallel {

void matvec(const Matrix& m, std::span<const double> x, std::span<double> out, double scale = 1.0);
Matrix evaluate_grid(const Kernel2D& f, std::span<const double> xs, std::span<const double> ys);
Matrix bernoulli_adjacency(const Matrix& probs, std::uint64_t seed);

}  // namespace parallel

/// Number of threads the parallel kernels will use (1 without OpenMP).
int max_threads();

}  // namespace epigraphon::kernels
