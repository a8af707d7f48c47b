#include "doctest.h"

#include <cmath>
#include <sstream>

#include "epigraphon/error.hpp"
#include "epigraphon/graph.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace epigraphon;

using support::kind_of;

TEST_CASE("build_coupling: nobody moves") {
    const Coupling c = build_coupling({{1, 1}, Matrix::identity(2)});
    CHECK(c.p_out == Matrix::identity(2));
    CHECK(c.p_in == Matrix::identity(2));
    CHECK(c.a == Matrix::identity(2));
}

TEST_CASE("build_coupling: uniform mixing matches a dense product") {
    const Matrix flows{{0.5, 0.5}, {0.5, 0.5}};
    const Coupling c = build_coupling({{1, 1}, flows});
    CHECK(c.p_out == flows);
    CHECK(c.p_in == flows);
    const auto expected = oracle::multiply(support::to_nested(flows), support::to_nested(flows.transposed()));
    for (std::size_t j = 0; j < 2; ++j)
        for (std::size_t k = 0; k < 2; ++k) {
            CHECK(c.a(j, k) == doctest::Approx(expected[j][k]).epsilon(1e-15));
            CHECK(c.a(j, k) == doctest::Approx(0.5).epsilon(1e-15));
        }
}

TEST_CASE("build_coupling: random flows give stochastic factors and unit row sums") {
    support::Draws d(3);
    for (int rep = 0; rep < 20; ++rep) {
        const std::size_t n = 3;
        Matrix flows(n, n);
        Vector pop(n, 0.0);
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) {
                flows(j, k) = d.next(0.1, 10.0);
                pop[j] += flows(j, k);
            }
        const Coupling c = build_coupling({pop, flows});
        const auto product = oracle::multiply(support::to_nested(c.p_out), support::to_nested(c.p_in.transposed()));
        for (std::size_t j = 0; j < n; ++j) {
            double out_row = 0.0, in_col = 0.0, a_row = 0.0;
            for (std::size_t k = 0; k < n; ++k) {
                out_row += c.p_out(j, k);
                in_col += c.p_in(k, j);
                a_row += c.a(j, k);
                CHECK(c.a(j, k) >= 0.0);
                CHECK(c.a(j, k) == doctest::Approx(product[j][k]).epsilon(1e-13));
            }
            CHECK(std::abs(out_row - 1.0) <= 1e-12);
            CHECK(std::abs(in_col - 1.0) <= 1e-12);
            CHECK(std::abs(a_row - 1.0) <= 1e-12);
        }
    }
}

TEST_CASE("build_coupling: symmetric flows and equal populations give symmetric A") {
    const Matrix flows{{4, 3, 3}, {3, 4, 3}, {3, 3, 4}};
    const Coupling c = build_coupling({{10, 10, 10}, flows});
    CHECK(max_abs_diff(c.a, c.a.transposed()) <= 1e-12);
}

TEST_CASE("build_coupling: errors") {
    CHECK(kind_of([] { build_coupling({{1, 1, 1}, Matrix::identity(2)}); }) == ErrorKind::DimensionMismatch);
    CHECK(kind_of([] { build_coupling({{1, 1}, Matrix{{1, 0}, {1, 0}}}); }) == ErrorKind::ZeroArrivals);
    CHECK(kind_of([] { build_coupling({{1, 1}, Matrix{{1.5, -0.5}, {0, 1}}}); }) == ErrorKind::InvalidMobility);
    CHECK(kind_of([] { build_coupling({{2, 1}, Matrix::identity(2)}); }) == ErrorKind::InvalidMobility);
    // Self-flows are optional: only arrivals need to be positive.
    CHECK_NOTHROW(build_coupling({{1, 1}, Matrix{{0, 1}, {1, 0}}}));
}

TEST_CASE("degree_stats") {
    const DegreeStats k4 = degree_stats(make_graph(family::Complete{}, 4));
    CHECK(k4.degree == Vector{3, 3, 3, 3});
    CHECK(k4.d_max == 3);
    CHECK(k4.d_avg == 3);

    const DegreeStats star = degree_stats(make_graph(family::Star{}, 4));
    CHECK(star.degree == Vector{3, 1, 1, 1});
    CHECK(star.d_max == 3);
    CHECK(star.d_avg == 1.5);

    const DegreeStats w = degree_stats(Graph(Matrix{{0, 0.7}, {0.7, 0}}, GraphKind::Weighted));
    CHECK(w.degree == Vector{0.7, 0.7});
}

TEST_CASE("degree_stats: d_avg <= d_max with equality iff regular") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const Graph g = make_graph(family::ErdosRenyi{0.4, seed}, 8);
        const DegreeStats s = degree_stats(g);
        CHECK(s.d_avg <= s.d_max);
        const bool regular = std::all_of(s.degree.begin(), s.degree.end(), [&](double x) { return x == s.degree[0]; });
        CHECK(regular == (s.d_avg == s.d_max));
    }
}

TEST_CASE("is_irreducible: examples") {
    CHECK(is_irreducible(make_graph(family::Complete{}, 3)));
    CHECK(is_irreducible(make_graph(family::Path{}, 5)));
    const Graph two_edges(Matrix{{0, 1, 0, 0}, {1, 0, 0, 0}, {0, 0, 0, 1}, {0, 0, 1, 0}}, GraphKind::Simple01);
    CHECK_FALSE(is_irreducible(two_edges));
    CHECK(is_irreducible(Graph(Matrix{{0}}, GraphKind::Simple01)));
    // Directed cycle vs one-way chain.
    CHECK(is_irreducible(Graph(Matrix{{0, 1, 0}, {0, 0, 1}, {1, 0, 0}}, GraphKind::Weighted)));
    CHECK_FALSE(is_irreducible(Graph(Matrix{{0, 1, 0}, {0, 0, 1}, {0, 0, 0}}, GraphKind::Weighted)));
}

TEST_CASE("is_irreducible: agrees with boolean matrix powers on every simple graph up to 6 nodes") {
    for (std::size_t n = 1; n <= 6; ++n) {
        std::vector<std::pair<std::size_t, std::size_t>> pairs;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
        for (std::uint32_t mask = 0; mask < (1u << pairs.size()); ++mask) {
            Matrix w(n, n);
            for (std::size_t p = 0; p < pairs.size(); ++p)
                if (mask >> p & 1u) w(pairs[p].first, pairs[p].second) = w(pairs[p].second, pairs[p].first) = 1.0;
            const bool expected = oracle::reachable_all(support::to_nested(w));
            if (is_irreducible(Graph(w, GraphKind::Simple01)) != expected) {
                FAIL("mismatch for n=" << n << " mask=" << mask);
            }
        }
    }
}

TEST_CASE("is_irreducible: agrees with the oracle on random directed supports") {
    support::Draws d(9);
    for (int rep = 0; rep < 500; ++rep) {
        Matrix w(5, 5);
        for (double& v : w.data()) v = d.next() < 0.3 ? d.next() : 0.0;
        CHECK(is_irreducible(Graph(w, GraphKind::Weighted)) == oracle::reachable_all(support::to_nested(w)));
    }
}

TEST_CASE("make_graph: families") {
    const Graph k3 = make_graph(family::Complete{}, 3);
    CHECK(k3.weights() == Matrix{{0, 1, 1}, {1, 0, 1}, {1, 1, 0}});
    CHECK(k3.kind() == GraphKind::Simple01);

    const Graph blocks = make_graph(family::Block{{2, 2}, Matrix{{1, 0}, {0, 1}}}, 4);
    CHECK(blocks.weights() == Matrix{{0, 1, 0, 0}, {1, 0, 0, 0}, {0, 0, 0, 1}, {0, 0, 1, 0}});
    CHECK(blocks.kind() == GraphKind::Simple01);
    CHECK_FALSE(is_irreducible(blocks));

    const Graph weighted = make_graph(family::Block{{1, 2}, Matrix{{0.5, 0.2}, {0.2, 0.9}}}, 3);
    CHECK(weighted.kind() == GraphKind::Weighted);
    CHECK(weighted.weights() == Matrix{{0, 0.2, 0.2}, {0.2, 0, 0.9}, {0.2, 0.9, 0}});

    for (std::uint64_t seed : {0u, 1u, 99u}) CHECK(make_graph(family::ErdosRenyi{1.0, seed}, 6) == make_graph(family::Complete{}, 6));
    CHECK(make_graph(family::ErdosRenyi{0.3, 4}, 30) == make_graph(family::ErdosRenyi{0.3, 4}, 30));
    CHECK(make_graph(family::ErdosRenyi{0.0, 4}, 5).weights() == Matrix(5, 5));

    const Graph path = make_graph(family::Path{}, 4);
    CHECK(degree_stats(path).degree == Vector{1, 2, 2, 1});
}

TEST_CASE("make_graph: bad partitions") {
    CHECK(kind_of([] { make_graph(family::Block{{2, 1}, Matrix{{1, 0}, {0, 1}}}, 4); }) == ErrorKind::BadPartition);
    CHECK(kind_of([] { make_graph(family::Block{{4, 0}, Matrix{{1, 0}, {0, 1}}}, 4); }) == ErrorKind::BadPartition);
    CHECK(kind_of([] { make_graph(family::Block{{2, 2}, Matrix{{1}}}, 4); }) == ErrorKind::BadPartition);
}

TEST_CASE("Graph validation") {
    CHECK(kind_of([] { Graph(Matrix{{0, 1}, {0, 0}}, GraphKind::Simple01); }) == ErrorKind::InvalidGraph);
    CHECK(kind_of([] { Graph(Matrix{{1, 0}, {0, 0}}, GraphKind::Simple01); }) == ErrorKind::InvalidGraph);
    CHECK(kind_of([] { Graph(Matrix{{0, 0.5}, {0.5, 0}}, GraphKind::Simple01); }) == ErrorKind::InvalidGraph);
    CHECK(kind_of([] { Graph(Matrix{{0, -1}, {-1, 0}}, GraphKind::Weighted); }) == ErrorKind::InvalidGraph);
    CHECK(kind_of([] { Graph(Matrix{{0, NAN}, {NAN, 0}}, GraphKind::Weighted); }) == ErrorKind::NonFiniteInput);
    CHECK_NOTHROW(Graph(Matrix{{0.2, 0.5}, {0.1, 0}}, GraphKind::Weighted));
}

TEST_CASE("with_self_loops adds the identity") {
    const Graph g = with_self_loops(make_graph(family::Path{}, 3));
    CHECK(g.weights() == Matrix{{1, 1, 0}, {1, 1, 1}, {0, 1, 1}});
    CHECK(g.kind() == GraphKind::Weighted);
}

TEST_CASE("matrix text format round-trips") {
    const Matrix m{{0, 0.1, 1.0 / 3.0}, {0.1, 0, 2}, {1.0 / 3.0, 2, 0}};
    std::stringstream io;
    write_matrix(io, m);
    CHECK(read_matrix(io) == m);

    std::istringstream mob("2\n3 1\n2 1\n0 1\n");
    const MobilityData data = read_mobility(mob);
    CHECK(data.populations == Vector{3, 1});
    CHECK(data.flows == Matrix{{2, 1}, {0, 1}});

    std::istringstream bad("2\n1 x\n0 1\n");
    CHECK(kind_of([&] { read_matrix(bad); }) == ErrorKind::ParseError);
    std::istringstream truncated("3\n1 2 3\n");
    CHECK(kind_of([&] { read_matrix(truncated); }) == ErrorKind::ParseError);
}

TEST_CASE("graph_from_matrix infers the kind") {
    CHECK(graph_from_matrix(Matrix{{0, 1}, {1, 0}}).kind() == GraphKind::Simple01);
    CHECK(graph_from_matrix(Matrix{{0, 0.5}, {0.5, 0}}).kind() == GraphKind::Weighted);
    CHECK(graph_from_matrix(Matrix{{1, 1}, {1, 0}}).kind() == GraphKind::Weighted);
}

TEST_CASE("matrix CSV export") {
    std::ostringstream out;
    write_matrix_csv(out, Matrix{{0, 0.5}, {1, 2}});
    CHECK(out.str() == "j,k,value\n0,0,0\n0,1,0.5\n1,0,1\n1,1,2\n");
}
