#include "doctest.h"

#include <cmath>

#include "glocal/invariants.hpp"
#include "glocal/oracle.hpp"
#include "testutil.hpp"

using namespace glocal;
using namespace testutil;

TEST_CASE("brute_triangles enumerates ordered triples") {
    CHECK(oracle::brute_triangles(k4()).values == std::vector<double>{3, 3, 3, 3});
    CHECK(oracle::brute_triangles(c4()).values == std::vector<double>{0, 0, 0, 0});

    SparseGraph k3_iso = graph_of(4, {{0, 1}, {0, 2}, {1, 2}});
    CHECK(oracle::brute_triangles(k3_iso).values == std::vector<double>{1, 1, 1, 0});
}

TEST_CASE("brute_scan_statistic counts closed-neighborhood edges") {
    CHECK(oracle::brute_scan_statistic(k3()).values == std::vector<double>{3, 3, 3});
    CHECK(oracle::brute_scan_statistic(path3()).values == std::vector<double>{1, 2, 1});
    CHECK(oracle::brute_scan_statistic(star4()).values == std::vector<double>{3, 1, 1, 1});
}

TEST_CASE("oracles agree with the production implementations") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        SparseGraph g = erdos_renyi(static_cast<VertexId>(20 + 17 * seed), 0.18, 300 + seed);
        CHECK(oracle::brute_triangles(g).values == local_triangles_exact(g).values);
        CHECK(oracle::brute_scan_statistic(g).values == scan_statistic_1(g).values);
    }
}

TEST_CASE("dense_spectrum returns canonically ordered full spectra") {
    EigenPairs k3_spec = oracle::dense_spectrum(k3());
    REQUIRE(k3_spec.k() == 3);
    CHECK(k3_spec.values[0] == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(k3_spec.values[1] == doctest::Approx(-1.0).epsilon(1e-10));
    CHECK(k3_spec.values[2] == doctest::Approx(-1.0).epsilon(1e-10));

    EigenPairs empty2 = oracle::dense_spectrum(empty_graph(2));
    CHECK(empty2.values == std::vector<double>{0.0, 0.0});

    EigenPairs c4_spec = oracle::dense_spectrum(c4());
    REQUIRE(c4_spec.k() == 4);
    CHECK(c4_spec.values[0] == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(c4_spec.values[1] == doctest::Approx(-2.0).epsilon(1e-10));
    CHECK(std::abs(c4_spec.values[2]) <= 1e-10);
    CHECK(std::abs(c4_spec.values[3]) <= 1e-10);
}

TEST_CASE("dense_spectrum satisfies trace identities") {
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        SparseGraph g = erdos_renyi(static_cast<VertexId>(15 + 20 * seed), 0.3, 400 + seed);
        EigenPairs spectrum = oracle::dense_spectrum(g);
        double sum = 0.0, sum_sq = 0.0;
        for (double v : spectrum.values) {
            sum += v;
            sum_sq += v * v;
        }
        CHECK(std::abs(sum) <= 1e-8);
        CHECK(std::abs(sum_sq - 2.0 * static_cast<double>(g.num_edges())) <= 1e-6);

        for (int j = 0; j < spectrum.k(); ++j)
            CHECK(spectrum.residuals[j] <= 1e-8 * std::max(1.0, std::abs(spectrum.values[0])));
    }
}

TEST_CASE("oracle size guards reject large graphs") {
    CHECK_THROWS_AS(oracle::brute_triangles(empty_graph(2049)), InputError);
    CHECK_THROWS_AS(oracle::brute_scan_statistic(empty_graph(2049)), InputError);
    CHECK_THROWS_AS(oracle::dense_spectrum(empty_graph(513)), InputError);
}
