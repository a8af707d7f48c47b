#include "doctest.h"

#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "epigraphon/error.hpp"
#include "epigraphon/graphon.hpp"
#include "epigraphon/kernels.hpp"
#include "support.hpp"

using namespace epigraphon;

namespace {

Matrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
    support::Draws d(seed);
    Matrix m(rows, cols);
    for (double& v : m.data()) v = d.next(-1.0, 1.0);
    return m;
}

}  // namespace

TEST_CASE("matvec: parallel equals serial bitwise") {
    for (std::size_t n : {1u, 7u, 64u, 300u}) {
        const Matrix m = random_matrix(n, n, n);
        const Matrix xv = random_matrix(1, n, n + 1);
        Vector a(n), b(n);
        kernels::serial::matvec(m, xv.data(), a, 0.25);
        kernels::parallel::matvec(m, xv.data(), b, 0.25);
        CHECK(a == b);
    }
}

TEST_CASE("matvec: small hand case and size checks") {
    const Matrix m{{1, 2}, {3, 4}};
    const Vector x{1, -1};
    Vector out(2);
    kernels::parallel::matvec(m, x, out, 2.0);
    CHECK(out == Vector{-2, -2});
    Vector wrong(3);
    CHECK_THROWS_AS(kernels::parallel::matvec(m, x, wrong), Error);
}

TEST_CASE("evaluate_grid: parallel equals serial bitwise") {
    const kernels::Kernel2D f = [](double x, double y) { return std::exp(-(x - 0.3) * (y + 0.2)); };
    const Vector xs = midpoints(150);
    const Vector ys = midpoints(97);
    CHECK(kernels::serial::evaluate_grid(f, xs, ys) == kernels::parallel::evaluate_grid(f, xs, ys));
}

TEST_CASE("bernoulli_adjacency: symmetric 0/1, empty diagonal, serial == parallel") {
    Matrix probs(200, 200, 0.3);
    const Matrix a = kernels::serial::bernoulli_adjacency(probs, 11);
    CHECK(a == kernels::parallel::bernoulli_adjacency(probs, 11));
    CHECK(is_symmetric(a, 0.0));
    for (std::size_t i = 0; i < a.rows(); ++i) {
        CHECK(a(i, i) == 0.0);
        for (std::size_t j = 0; j < a.cols(); ++j) CHECK((a(i, j) == 0.0 || a(i, j) == 1.0));
    }
    CHECK(a != kernels::parallel::bernoulli_adjacency(probs, 12));
}

#ifdef _OPENMP
TEST_CASE("bernoulli_adjacency: independent of thread count") {
    Matrix probs(300, 300, 0.5);
    const int saved = omp_get_max_threads();
    omp_set_num_threads(1);
    const Matrix one = kernels::parallel::bernoulli_adjacency(probs, 5);
    omp_set_num_threads(4);
    const Matrix four = kernels::parallel::bernoulli_adjacency(probs, 5);
    omp_set_num_threads(saved);
    CHECK(one == four);
}
#endif

TEST_CASE("counter generator: documented formula") {
    // u = (mix64(mix64(s) ^ c) >> 11) * 2^-53
    const std::uint64_t z = mix64(mix64(3) ^ 9);
    CHECK(counter_uniform(3, 9) == static_cast<double>(z >> 11) / 9007199254740992.0);
    CHECK(pair_index(1, 0) == 0);
    CHECK(pair_index(2, 0) == 1);
    CHECK(pair_index(2, 1) == 2);
    CHECK(pair_index(3, 0) == 3);
}
