#include <doctest.h>

#include <cmath>
#include <random>

#include "codebounds/channels.hpp"
#include "codebounds/distances.hpp"
#include "codebounds/embedding.hpp"
#include "codebounds/errors.hpp"

using namespace codebounds;

namespace {

DistanceMatrix dm(int K, const std::vector<double>& v) {
  std::vector<ExtReal> e;
  e.reserve(v.size());
  for (double d : v) e.emplace_back(d);
  return DistanceMatrix(K, std::move(e));
}

// triangle-inequality violation in disguise: two points nearly coincide yet
// sit at very different distances from the third
DistanceMatrix near_zero_triangle() {
  return dm(3, {0, 0.01, 0.01, 0.01, 0, 1, 0.01, 1, 0});
}

DistanceMatrix scale_dm(const DistanceMatrix& D, double c) {
  int K = D.K();
  std::vector<ExtReal> e;
  e.reserve(static_cast<size_t>(K) * K);
  for (int x = 0; x < K; ++x)
    for (int y = 0; y < K; ++y) e.emplace_back(c * D(x, y).as_double());
  return DistanceMatrix(K, std::move(e));
}

}  // namespace

TEST_CASE("double centering fixtures") {
  Eigen::MatrixXd C = center(build_hamming(2));
  CHECK(C(0, 0) == doctest::Approx(0.5));
  CHECK(C(0, 1) == doctest::Approx(-0.5));
  CHECK(C(1, 0) == doctest::Approx(-0.5));
  CHECK(C(1, 1) == doctest::Approx(0.5));
  Eigen::MatrixXd Z = center(dm(3, std::vector<double>(9, 0.0)));
  CHECK(Z.cwiseAbs().maxCoeff() == 0.0);
  Eigen::MatrixXd L = center(build_lee(7));
  for (int r = 0; r < 7; ++r) CHECK(std::abs(L.row(r).sum()) < 1e-12);
}

TEST_CASE("hamming distances pass every check") {
  EmbeddingReport rep = classify(build_hamming(4));
  REQUIRE(rep.divisible.has_value());
  CHECK(*rep.divisible);
  CHECK(*rep.negative_type);
  CHECK(*rep.concave_form);
  CHECK(*rep.embeddable);
  CHECK(rep.consistent());
  CHECK_FALSE(rep.witness.has_value());
}

TEST_CASE("lee distances pass every check") {
  for (int K : {4, 5, 6, 7}) {
    EmbeddingReport rep = classify(build_lee(K));
    CHECK(*rep.embeddable);
    CHECK(*rep.divisible);
    CHECK(rep.consistent());
  }
}

TEST_CASE("squared euclidean distances pass every check") {
  Eigen::MatrixXd pts(4, 2);
  pts << 1, 0, 0, 1, -1, 0, 0, -1;
  EmbeddingReport rep = classify(build_from_points(pts));
  CHECK(*rep.embeddable);
  CHECK(rep.consistent());
}

TEST_CASE("a near-degenerate triangle fails every check") {
  EmbeddingReport rep = classify(near_zero_triangle());
  CHECK_FALSE(*rep.divisible);
  CHECK_FALSE(*rep.negative_type);
  CHECK_FALSE(*rep.concave_form);
  CHECK_FALSE(*rep.embeddable);
  CHECK(rep.consistent());
  REQUIRE(rep.witness.has_value());
  Eigen::VectorXd z = *rep.witness;
  CHECK(std::abs(z.sum()) < 1e-9);
  const DistanceMatrix D = near_zero_triangle();
  double q = 0;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) q += z(a) * z(b) * D(a, b).as_double();
  CHECK(q > 0);
}

TEST_CASE("negative type check alone") {
  CHECK(check_negative_type(build_hamming(3)).holds);
  NegativeTypeResult bad = check_negative_type(near_zero_triangle());
  CHECK_FALSE(bad.holds);
  CHECK(bad.min_eigenvalue < 0);
  REQUIRE(bad.witness.has_value());
  CHECK(std::abs(bad.witness->sum()) < 1e-9);
}

TEST_CASE("divisibility survives scaling for good metrics") {
  DivisibilityResult r = check_divisible(build_lee(5));
  CHECK(r.holds);
  CHECK_FALSE(r.failing_rho.has_value());
}

TEST_CASE("divisibility fails for the triangle") {
  DivisibilityResult r = check_divisible(near_zero_triangle());
  CHECK_FALSE(r.holds);
  CHECK(r.failing_rho.has_value());
  CHECK(r.worst_eigenvalue < 0);
}

TEST_CASE("cycle distances stop being divisible at large scale") {
  // exp(-1/rho) on C5 edges needs eigenvalue 1 - 2 cos(pi/5) exp(-1/rho) >= 0,
  // which fails once rho exceeds about 2.08
  DivisibilityResult r = check_divisible(build_cycle(5));
  CHECK_FALSE(r.holds);
  REQUIRE(r.failing_rho.has_value());
  CHECK(*r.failing_rho > 2.0);
  DivisibilityResult small = check_divisible(build_cycle(5), {0.5, 1.0, 2.0});
  CHECK(small.holds);
}

TEST_CASE("classify reports only divisibility when entries are infinite") {
  EmbeddingReport rep = classify(build_cycle(5));
  REQUIRE(rep.divisible.has_value());
  CHECK_FALSE(*rep.divisible);
  CHECK_FALSE(rep.negative_type.has_value());
  CHECK_FALSE(rep.concave_form.has_value());
  CHECK_FALSE(rep.embeddable.has_value());
  CHECK(rep.consistent());
}

TEST_CASE("embedding reconstructs the distances") {
  EmbedResult e = euclidean_embed(build_lee(6));
  CHECK(e.reconstruction_error < 1e-8);
  DistanceMatrix D = build_lee(6);
  REQUIRE(e.points.rows() == 6);
  for (int a = 0; a < 6; ++a)
    for (int b = 0; b < 6; ++b) {
      double d2 = (e.points.row(a) - e.points.row(b)).squaredNorm();
      CHECK(d2 == doctest::Approx(D(a, b).as_double()).epsilon(1e-7));
    }
}

TEST_CASE("embedding a bad matrix throws with a witness") {
  CHECK_THROWS_AS(euclidean_embed(near_zero_triangle()), NotEmbeddableError);
}

TEST_CASE("concavity sampler finds the spectral falsifier") {
  ConcavityResult r = check_concavity_sampled(near_zero_triangle());
  CHECK_FALSE(r.holds);
  REQUIRE(r.witness.has_value());
  CHECK(r.worst_form > 0);
}

TEST_CASE("concavity survives a long sampling run on hamming") {
  CHECK(check_concavity_sampled(build_hamming(4), 1000).holds);
}

TEST_CASE("one-letter matrices are vacuously fine") {
  DistanceMatrix one(1, {ExtReal(0.0)});
  CHECK(check_concavity_sampled(one).holds);
  CHECK(check_negative_type(one).holds);
}

TEST_CASE("hamming on three letters embeds as an orthogonal frame") {
  // three orthogonal vectors of squared norm 1/2 realize the matrix exactly
  Eigen::MatrixXd frame =
      std::sqrt(0.5) * Eigen::MatrixXd::Identity(3, 3);
  DistanceMatrix from_frame = build_from_points(frame);
  DistanceMatrix H = build_hamming(3);
  for (int x = 0; x < 3; ++x)
    for (int y = 0; y < 3; ++y)
      CHECK(from_frame(x, y).as_double() ==
            doctest::Approx(H(x, y).as_double()));
  EmbedResult e = euclidean_embed(H);
  for (int x = 0; x < 3; ++x)
    for (int y = x + 1; y < 3; ++y)
      CHECK((e.points.row(x) - e.points.row(y)).squaredNorm() ==
            doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("all-zero distances embed to coincident points") {
  EmbedResult e = euclidean_embed(dm(3, std::vector<double>(9, 0.0)));
  for (int x = 0; x < 3; ++x)
    for (int y = 0; y < 3; ++y)
      CHECK((e.points.row(x) - e.points.row(y)).squaredNorm() < 1e-15);
}

TEST_CASE("bhattacharyya distances of a bsc pass every check") {
  Channel flip = make_channel(2, 2, {0.9, 0.1, 0.1, 0.9});
  EmbeddingReport rep = classify(build_bhattacharyya(flip));
  CHECK(*rep.divisible);
  CHECK(*rep.negative_type);
  CHECK(*rep.concave_form);
  CHECK(*rep.embeddable);
}

TEST_CASE("negative type is scale invariant") {
  for (double c : {0.001, 1.0, 500.0}) {
    CHECK_FALSE(check_negative_type(scale_dm(near_zero_triangle(), c)).holds);
    CHECK(check_negative_type(scale_dm(build_lee(5), c)).holds);
  }
}

TEST_CASE("elementwise products of divisible kernels stay divisible") {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    int K = 3 + static_cast<int>(rng() % 4);
    auto cloud = [&]() {
      Eigen::MatrixXd P(K, 3);
      for (int i = 0; i < K; ++i)
        for (int j = 0; j < 3; ++j) P(i, j) = g(rng);
      return P;
    };
    DistanceMatrix A = build_from_points(cloud());
    DistanceMatrix B = build_from_points(cloud());
    CHECK(check_divisible(A, {0.5, 1, 2, 10}).holds);
    Eigen::MatrixXd GA(K, K), GB(K, K);
    for (int x = 0; x < K; ++x)
      for (int y = 0; y < K; ++y) {
        GA(x, y) = std::exp(-A(x, y).as_double());
        GB(x, y) = std::exp(-B(x, y).as_double());
      }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(
        GA.cwiseProduct(GB), Eigen::EigenvaluesOnly);
    CHECK(eig.eigenvalues()(0) >= -1e-10);
  }
}

TEST_CASE("the four checks agree on random finite matrices") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(0.05, 2.0);
  for (int trial = 0; trial < 20; ++trial) {
    int K = 3 + static_cast<int>(rng() % 3);
    std::vector<double> v(static_cast<size_t>(K) * K, 0.0);
    for (int a = 0; a < K; ++a)
      for (int b = a + 1; b < K; ++b)
        v[static_cast<size_t>(a) * K + b] = v[static_cast<size_t>(b) * K + a] =
            u(rng);
    EmbeddingReport rep = classify(dm(K, v));
    CHECK(rep.consistent());
    CHECK(*rep.negative_type == *rep.concave_form);
    CHECK(*rep.negative_type == *rep.embeddable);
    CHECK(*rep.negative_type == *rep.divisible);
  }
}
