#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "fixtures.hpp"
#include "fsmlp/clustering.hpp"
#include "fsmlp/metrics.hpp"
#include "fsmlp/rng.hpp"

using namespace fsmlp;

namespace {

Matrix two_blobs() { return Matrix(4, 2, std::vector<double>{0, 0, 0, 1, 100, 0, 100, 1}); }

void check_row_stochastic(const Matrix& u) {
  for (std::size_t i = 0; i < u.rows(); ++i) {
    double s = 0.0;
    for (double v : u.row(i)) {
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
      s += v;
    }
    CHECK(std::abs(s - 1.0) < 1e-9);
  }
}

}  // namespace

TEST_CASE("single cluster: memberships one, center at the mean") {
  const auto d = testing::random_dataset(30, 3, 2, 1);
  const auto p = fcm(d.x, 1);
  for (double v : p.memberships.flat()) CHECK(v == 1.0);
  for (std::size_t j = 0; j < 3; ++j) {
    double mean = 0.0;
    for (std::size_t i = 0; i < 30; ++i) mean += d.x(i, j);
    CHECK(p.centers(0, j) == doctest::Approx(mean / 30.0).epsilon(1e-12));
  }
}

TEST_CASE("two far blobs: memberships and centers") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    FcmOptions o;
    o.seed = seed;
    const auto p = fcm(two_blobs(), 2, o);
    const auto labels = harden(p);
    CHECK(labels[0] == labels[1]);
    CHECK(labels[2] == labels[3]);
    CHECK(labels[0] != labels[2]);
    for (std::size_t i = 0; i < 4; ++i) CHECK(p.memberships(i, static_cast<std::size_t>(labels[i])) > 0.99);
    const std::size_t a = static_cast<std::size_t>(labels[0]);
    const std::size_t b = static_cast<std::size_t>(labels[2]);
    CHECK(std::abs(p.centers(a, 0) - 0.0) < 1e-6);
    CHECK(std::abs(p.centers(a, 1) - 0.5) < 1e-6);
    CHECK(std::abs(p.centers(b, 0) - 100.0) < 1e-6);
    CHECK(std::abs(p.centers(b, 1) - 0.5) < 1e-6);
  }
}

TEST_CASE("a point at a center gets crisp membership") {
  // one cluster per point: after the first membership update every point sits on its center
  Matrix x(3, 1, std::vector<double>{0, 1, 5});
  const auto p = fcm(x, 3);
  for (std::size_t i = 0; i < 3; ++i) {
    const auto r = p.memberships.row(i);
    CHECK(std::count(r.begin(), r.end(), 1.0) == 1);
    CHECK(std::count(r.begin(), r.end(), 0.0) == 2);
  }
}

TEST_CASE("harden picks the argmax with ties to the lowest index") {
  FuzzyPartition p;
  p.memberships = Matrix(3, 2, std::vector<double>{0.5, 0.5, 0.2, 0.8, 1.0, 0.0});
  CHECK(harden(p) == std::vector<int>{0, 1, 0});
  p.memberships = Matrix(2, 3, std::vector<double>{0, 0, 1, 0, 1, 0});
  CHECK(harden(p) == std::vector<int>{2, 1});
}

TEST_CASE("objective is non-increasing and memberships stay row-stochastic") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto d = testing::random_dataset(60, 3, 4, seed);
    FcmOptions o;
    o.seed = seed;
    o.tol = 0.0;
    o.max_iter = 40;
    const auto p = fcm(d.x, 2 + seed % 4, o);
    for (std::size_t t = 1; t < p.objective_trace.size(); ++t)
      CHECK(p.objective_trace[t] <= p.objective_trace[t - 1] * (1.0 + 1e-12));
    check_row_stochastic(p.memberships);
  }
}

TEST_CASE("determinism and row permutation equivariance") {
  const auto d = testing::gaussian_blobs({{0, 0}, {4, 0}, {0, 4}}, 20, 0.7, 3);
  FcmOptions o;
  o.seed = 5;
  const auto a = fcm(d.x, 3, o);
  const auto b = fcm(d.x, 3, o);
  CHECK(a.memberships == b.memberships);

  std::vector<std::size_t> perm(d.rows());
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::shuffle(perm.begin(), perm.end(), Rng(9));
  const auto px = d.x.select_rows(perm);
  const auto pp = fcm(px, 3, o);
  const auto la = harden(a);
  const auto lp = harden(pp);
  std::vector<int> la_perm(perm.size());
  for (std::size_t i = 0; i < perm.size(); ++i) la_perm[i] = la[perm[i]];
  CHECK(ari(la_perm, lp) == doctest::Approx(1.0));
}

TEST_CASE("fuzzifier other than two") {
  const auto d = testing::gaussian_blobs({{0, 0}, {5, 5}}, 15, 0.5, 4);
  FcmOptions o;
  o.m = 1.5;
  const auto p = fcm(d.x, 2, o);
  check_row_stochastic(p.memberships);
  CHECK(ari(harden(p), d.labels) == doctest::Approx(1.0));
}

TEST_CASE("argument errors") {
  Matrix x(3, 2);
  CHECK_THROWS_AS(fcm(x, 4), Error);
  CHECK_THROWS_AS(fcm(x, 0), Error);
  FcmOptions o;
  o.m = 1.0;
  CHECK_THROWS_AS(fcm(x, 2, o), Error);
}
