#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "oracles.hpp"
#include "pgir/error.hpp"
#include "pgir/graph.hpp"
#include "pgir/spectral.hpp"

using namespace pgir;

TEST_CASE("erdos_renyi produces exactly m distinct edges") {
  SUBCASE("paper scale") {
    const auto g = erdos_renyi(3000, 12000, 17);
    CHECK(g.order() == 3000);
    CHECK(g.edge_count() == 12000);
    const auto d = degrees(g);
    CHECK(std::accumulate(d.begin(), d.end(), std::int64_t{0}) == 24000);
    CHECK(*std::min_element(d.begin(), d.end()) >= 1);
  }
  SUBCASE("K2 is the only graph with n=2, m=1") {
    for (std::uint64_t seed : {0u, 1u, 99u}) CHECK(erdos_renyi(2, 1, seed) == oracle::complete2());
  }
  SUBCASE("complete graph when m is the maximum") {
    const auto g = erdos_renyi(6, 15, 3);
    CHECK(g.edge_count() == 15);
  }
  SUBCASE("m beyond n(n-1)/2 is rejected") {
    CHECK_THROWS_AS(erdos_renyi(4, 7, 0), InvalidArgument);
    CHECK_THROWS_AS(erdos_renyi(4, 0, 0), InvalidArgument);
  }
  SUBCASE("attempt cap") {
    // 10 vertices with 4 edges always leaves an isolated vertex.
    CHECK_THROWS_AS(erdos_renyi(10, 4, 0, 5), InvalidArgument);
  }
}

TEST_CASE("erdos_renyi is deterministic per seed") {
  const auto a = erdos_renyi(200, 600, 42);
  const auto b = erdos_renyi(200, 600, 42);
  const auto c = erdos_renyi(200, 600, 43);
  CHECK(a == b);
  CHECK(a.content_hash() == b.content_hash());
  CHECK_FALSE(a == c);
}

TEST_CASE("erdos_renyi covers every pair index") {
  // Dense draws exercise the pair decoding at both ends of each row.
  for (Vertex n : {2, 3, 7, 31}) {
    const auto full = static_cast<std::size_t>(n * (n - 1) / 2);
    const auto g = erdos_renyi(n, full, 5);
    CHECK(g.edge_count() == full);
    for (const auto& [u, v] : g.edges()) {
      CHECK(u < v);
      CHECK(v < n);
    }
  }
}

TEST_CASE("load_edge_list") {
  SUBCASE("path graph") {
    const auto g = load_edge_list("0 1\n1 2");
    CHECK(g == oracle::path(3));
  }
  SUBCASE("comments, blank lines, reversed duplicates and CRLF") {
    const auto g = load_edge_list("# header\n\n0 1\r\n1 0\n  2\t1 \n");
    CHECK(g.order() == 3);
    CHECK(g.edge_count() == 2);
  }
  SUBCASE("explicit vertex count") {
    const auto g = load_edge_list("n 4\n0 1\n2 3\n");
    CHECK(g.order() == 4);
    CHECK_THROWS_AS(load_edge_list("n 5\n0 1\n2 3\n"), InvalidArgument);  // vertex 4 isolated
    CHECK_THROWS_AS(load_edge_list("n 3\n0 1\n2 3\n"), ParseError);
  }
  SUBCASE("self-loop") { CHECK_THROWS_AS(load_edge_list("0 0"), ParseError); }
  SUBCASE("parse failure names the line") {
    try {
      (void)load_edge_list("0 1\n# fine\n1 x\n");
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.line() == 3);
    }
    CHECK_THROWS_AS(load_edge_list("0 1 2\n"), ParseError);
    CHECK_THROWS_AS(load_edge_list("-1 2\n"), ParseError);
    CHECK_THROWS_AS(load_edge_list("# only comments\n"), ParseError);
  }
  SUBCASE("round trip through format_edge_list") {
    const auto g = erdos_renyi(80, 240, 9);
    const auto back = load_edge_list(format_edge_list(g, {"generated for a test"}));
    CHECK(back == g);
    CHECK(back.content_hash() == g.content_hash());
  }
}

TEST_CASE("graph invariants") {
  CHECK_THROWS_AS(Graph(3, {{0, 1}}), InvalidArgument);    // isolated vertex 2
  CHECK_THROWS_AS(Graph(2, {{0, 2}}), InvalidArgument);    // out of range
  CHECK_THROWS_AS(Graph(2, {{1, 1}, {0, 1}}), InvalidArgument);
  CHECK(Graph(3, {{2, 1}, {0, 1}}).content_hash() == Graph(3, {{0, 1}, {1, 2}}).content_hash());
}

TEST_CASE("degrees") {
  CHECK(degrees(oracle::complete2()) == std::vector<std::int64_t>{1, 1});
  CHECK(degrees(oracle::path(3)) == std::vector<std::int64_t>{1, 2, 1});
  CHECK(degrees(oracle::cycle(6)) == std::vector<std::int64_t>(6, 2));
}

TEST_CASE("normalized_laplacian hand values") {
  SUBCASE("K2") {
    const auto l = normalized_laplacian(oracle::complete2());
    Eigen::Matrix2d expected;
    expected << 1, -1, -1, 1;
    CHECK((l.dense() - expected).cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("P3") {
    const double r = 1.0 / std::sqrt(2.0);
    Eigen::Matrix3d expected;
    expected << 1, -r, 0, -r, 1, -r, 0, -r, 1;
    CHECK((normalized_laplacian(oracle::path(3)).dense() - expected).cwiseAbs().maxCoeff() < 1e-15);
  }
  SUBCASE("C6 is circulant") {
    const auto l = normalized_laplacian(oracle::cycle(6)).dense();
    for (int i = 0; i < 6; ++i) {
      for (int j = 0; j < 6; ++j) {
        const int gap = std::min((i - j + 6) % 6, (j - i + 6) % 6);
        const double expected = gap == 0 ? 1.0 : (gap == 1 ? -0.5 : 0.0);
        CHECK(l(i, j) == doctest::Approx(expected).epsilon(1e-15));
      }
    }
  }
}

TEST_CASE("SymmetricMatrix rejects asymmetric input") {
  Eigen::Matrix2d m;
  m << 1, 2, 3, 1;
  CHECK_THROWS_AS(SymmetricMatrix{Eigen::MatrixXd(m)}, InvalidArgument);
  CHECK_THROWS_AS(SymmetricMatrix(Eigen::MatrixXd(2, 3)), InvalidArgument);
}

TEST_CASE("property: normalized Laplacian spectrum on random graphs") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 15; ++trial) {
    const Vertex n = std::uniform_int_distribution<Vertex>(10, 120)(rng);
    const auto m = static_cast<std::size_t>(std::uniform_int_distribution<Vertex>(3 * n, 5 * n)(rng));
    const auto g = erdos_renyi(n, m, rng());
    const auto basis = eigendecompose(normalized_laplacian(g));
    const auto& lambda = basis.eigenvalues();
    CHECK(lambda.minCoeff() >= -1e-10);
    CHECK(lambda.maxCoeff() <= 2.0 + 1e-10);
    const auto d = degrees(g);
    CHECK(std::accumulate(d.begin(), d.end(), std::int64_t{0}) == static_cast<std::int64_t>(2 * m));
    if (oracle::connected(g)) {
      CHECK((lambda.array() <= 1e-8).count() == 1);
      Eigen::VectorXd sqrt_d(n);
      for (Vertex i = 0; i < n; ++i) sqrt_d(i) = std::sqrt(static_cast<double>(d[i]));
      sqrt_d.normalize();
      const Eigen::VectorXd phi0 = basis.eigenvectors().col(0);
      const double residual = std::min((phi0 - sqrt_d).norm(), (phi0 + sqrt_d).norm());
      CHECK(residual < 1e-8);
    }
  }
}
