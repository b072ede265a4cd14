#include "doctest.h"

#include <cmath>

#include "glocal/eigensolver.hpp"
#include "glocal/oracle.hpp"
#include "testutil.hpp"

using namespace glocal;
using namespace testutil;

namespace {

void check_pair_quality(const SparseGraph& g, const EigenPairs& eigs, double tol) {
    const double scale = std::max(1.0, eigs.values.empty() ? 0.0 : std::abs(eigs.values[0]));
    for (int j = 0; j < eigs.k(); ++j) {
        double norm2 = 0.0;
        for (double x : eigs.vectors[j])
            norm2 += x * x;
        CHECK(std::abs(std::sqrt(norm2) - 1.0) <= 1e-10);

        std::vector<double> r = g.matvec(eigs.vectors[j]);
        double res2 = 0.0;
        for (VertexId v = 0; v < g.num_vertices(); ++v) {
            r[v] -= eigs.values[j] * eigs.vectors[j][v];
            res2 += r[v] * r[v];
        }
        CHECK(std::sqrt(res2) <= tol * scale);
        CHECK(eigs.residuals[j] <= tol * scale);

        for (int i = 0; i < j; ++i) {
            double dot = 0.0;
            for (VertexId v = 0; v < g.num_vertices(); ++v)
                dot += eigs.vectors[i][v] * eigs.vectors[j][v];
            CHECK(std::abs(dot) <= 1e-8);
        }

        // sign convention: the entry of largest magnitude is non-negative
        double best = 0.0;
        std::size_t best_idx = 0;
        for (std::size_t v = 0; v < eigs.vectors[j].size(); ++v)
            if (std::abs(eigs.vectors[j][v]) > best) {
                best = std::abs(eigs.vectors[j][v]);
                best_idx = v;
            }
        CHECK(eigs.vectors[j][best_idx] >= 0.0);
    }
}

} // namespace

TEST_CASE("top eigenpair of K3") {
    EigenPairs eigs = top_eigenpairs(k3(), 1);
    REQUIRE(eigs.k() == 1);
    CHECK(eigs.values[0] == doctest::Approx(2.0).epsilon(1e-9));
    const double entry = 1.0 / std::sqrt(3.0);
    for (double x : eigs.vectors[0])
        CHECK(x == doctest::Approx(entry).epsilon(1e-7));
    check_pair_quality(k3(), eigs, kDefaultEigTol);
}

TEST_CASE("zero matrix yields zero eigenpairs") {
    EigenPairs eigs = top_eigenpairs(empty_graph(3), 2);
    REQUIRE(eigs.k() == 2);
    CHECK(eigs.values[0] == 0.0);
    CHECK(eigs.values[1] == 0.0);
    CHECK(eigs.residuals[0] == 0.0);
    CHECK(eigs.residuals[1] == 0.0);
}

TEST_CASE("C4 magnitude tie is ordered algebraically descending") {
    EigenPairs eigs = top_eigenpairs(c4(), 2);
    REQUIRE(eigs.k() == 2);
    CHECK(eigs.values[0] == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(eigs.values[1] == doctest::Approx(-2.0).epsilon(1e-9));
    check_pair_quality(c4(), eigs, kDefaultEigTol);
}

TEST_CASE("K larger than n is clamped") {
    EigenPairs eigs = top_eigenpairs(k3(), 5);
    CHECK(eigs.k() == 3);
}

TEST_CASE("repeated extremal eigenvalues are recovered after breakdown") {
    // K3 has a two-dimensional Krylov space from any start vector, so the
    // third pair requires restarting in the orthogonal complement
    EigenPairs eigs = top_eigenpairs(k3(), 3);
    REQUIRE(eigs.k() == 3);
    CHECK(eigs.values[0] == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(eigs.values[1] == doctest::Approx(-1.0).epsilon(1e-9));
    CHECK(eigs.values[2] == doctest::Approx(-1.0).epsilon(1e-9));
    check_pair_quality(k3(), eigs, kDefaultEigTol);

    // two disjoint triangles: lambda = 2 with multiplicity 2
    SparseGraph two = graph_of(6, {{0, 1}, {0, 2}, {1, 2}, {3, 4}, {3, 5}, {4, 5}});
    EigenPairs top2 = top_eigenpairs(two, 2);
    REQUIRE(top2.k() == 2);
    CHECK(top2.values[0] == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(top2.values[1] == doctest::Approx(2.0).epsilon(1e-9));
    check_pair_quality(two, top2, kDefaultEigTol);
}

TEST_CASE("Lanczos matches the dense oracle on random graphs") {
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        const VertexId n = static_cast<VertexId>(10 + 13 * seed);
        SparseGraph g = erdos_renyi(n, 0.25, 100 + seed);
        EigenPairs dense = oracle::dense_spectrum(g);

        const int k = std::min<int>(10, static_cast<int>(n));
        EigenPairs lanczos = top_eigenpairs(g, k);
        REQUIRE(lanczos.k() == k);
        check_pair_quality(g, lanczos, kDefaultEigTol);
        for (int j = 0; j < k; ++j)
            CHECK(std::abs(lanczos.values[j] - dense.values[j]) <= 1e-6);
    }
}

TEST_CASE("full-spectrum Lanczos matches the dense oracle elementwise") {
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
        const VertexId n = static_cast<VertexId>(12 + 9 * seed);
        SparseGraph g = erdos_renyi(n, 0.3, 200 + seed);
        EigenPairs dense = oracle::dense_spectrum(g);
        EigenPairs lanczos = top_eigenpairs(g, static_cast<int>(n));
        REQUIRE(lanczos.k() == static_cast<int>(n));
        for (VertexId j = 0; j < n; ++j)
            CHECK(std::abs(lanczos.values[j] - dense.values[j]) <= 1e-6);
    }
}

TEST_CASE("eigensolver output is deterministic") {
    SparseGraph g = erdos_renyi(40, 0.2, 777);
    EigenPairs a = top_eigenpairs(g, 5);
    EigenPairs b = top_eigenpairs(g, 5);
    CHECK(a.values == b.values);
    for (int j = 0; j < a.k(); ++j)
        CHECK(a.vectors[j] == b.vectors[j]);
}

TEST_CASE("eigenvalues are permutation-invariant") {
    SparseGraph g = erdos_renyi(30, 0.25, 31);
    auto pi = random_permutation(30, 32);
    EigenPairs orig = top_eigenpairs(g, 6);
    EigenPairs perm = top_eigenpairs(g.permute(pi), 6);
    for (int j = 0; j < 6; ++j)
        CHECK(std::abs(orig.values[j] - perm.values[j]) <= 1e-8);
}

TEST_CASE("non-convergence is reported") {
    CHECK_THROWS_AS(top_eigenpairs(c4(), 2, 1e-8, 1), NumericError);
    CHECK_THROWS_AS(top_eigenpairs(k3(), 0), InputError);
    CHECK_THROWS_AS(top_eigenpairs(k3(), 1, -1.0), InputError);
}
