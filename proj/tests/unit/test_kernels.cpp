#include <doctest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "fsmlp/kernels.hpp"
#include "fsmlp/rng.hpp"
#include "oracles.hpp"

using namespace fsmlp;

namespace {

Matrix random_matrix(std::size_t r, std::size_t c, std::uint64_t seed) {
  Rng rng(seed);
  std::normal_distribution<double> n(0.0, 1.0);
  Matrix m(r, c);
  for (double& v : m.flat()) v = n(rng);
  return m;
}

}  // namespace

TEST_CASE("sammon sums: serial matches the oracle, parallel matches serial bit for bit") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto x = random_matrix(400, 6, seed);
    const auto y = random_matrix(400, 3, seed + 100);
    const auto s = kernels::serial::sammon_sums(x, y, {});
    const auto p = kernels::parallel::sammon_sums(x, y, {});
    CHECK(s.weighted / s.normalizer == doctest::Approx(oracle::sammon(x, y)).epsilon(1e-12));
    CHECK(p.weighted == s.weighted);
    CHECK(p.normalizer == s.normalizer);
    CHECK(p.skipped == s.skipped);
  }
}

TEST_CASE("sammon sums restricted to rows equal the sums on the row subset") {
  const auto x = random_matrix(50, 4, 9);
  const auto y = random_matrix(50, 2, 10);
  const std::vector<std::size_t> rows{3, 7, 8, 20, 41};
  const auto s = kernels::parallel::sammon_sums(x, y, rows);
  CHECK(s.weighted / s.normalizer == doctest::Approx(oracle::sammon(x.select_rows(rows), y.select_rows(rows))));
}

TEST_CASE("duplicate rows are skipped and counted") {
  Matrix x(3, 1, std::vector<double>{1, 1, 2});
  const auto s = kernels::serial::sammon_sums(x, x, {});
  CHECK(s.skipped == 1);
  CHECK(s.normalizer == 2.0);
  CHECK(kernels::parallel::sammon_sums(x, x, {}).skipped == 1);
}

TEST_CASE("gated sammon sums and derivative agree between serial and parallel") {
  const auto x = random_matrix(300, 5, 3);
  const std::vector<double> gates{0.9, 0.1, 0.5, 1.0, 0.02};
  std::vector<double> ds(5);
  std::vector<double> dp(5);
  const auto s = kernels::serial::gated_sammon_sums(x, gates, {}, ds);
  const auto p = kernels::parallel::gated_sammon_sums(x, gates, {}, dp);
  CHECK(p.weighted == s.weighted);
  CHECK(dp == ds);

  // Derivative against a central difference of the weighted sum.
  for (std::size_t j = 0; j < 5; ++j) {
    auto g = gates;
    std::vector<double> scratch(5);
    const double h = 1e-6;
    g[j] = gates[j] + h;
    const double up = kernels::serial::gated_sammon_sums(x, g, {}, scratch).weighted;
    g[j] = gates[j] - h;
    const double down = kernels::serial::gated_sammon_sums(x, g, {}, scratch).weighted;
    CHECK(ds[j] == doctest::Approx((up - down) / (2 * h)).epsilon(1e-6));
  }
}

TEST_CASE("dense kernels: parallel equals serial") {
  const auto in = random_matrix(257, 9, 1);
  const auto w = random_matrix(6, 9, 2);
  const std::vector<double> b{0.1, -0.2, 0.3, 0.0, 1.0, -1.0};
  Matrix os;
  Matrix op;
  kernels::serial::affine(in, w, b, os);
  kernels::parallel::affine(in, w, b, op);
  CHECK(os == op);
  CHECK(os(5, 2) == doctest::Approx([&] {
          double v = b[2];
          for (std::size_t k = 0; k < 9; ++k) v += in(5, k) * w(2, k);
          return v;
        }()));

  const auto delta = random_matrix(257, 6, 3);
  Matrix dws;
  Matrix dwp;
  std::vector<double> dbs(6);
  std::vector<double> dbp(6);
  kernels::serial::weight_grad(delta, in, dws, dbs);
  kernels::parallel::weight_grad(delta, in, dwp, dbp);
  CHECK(dws == dwp);
  CHECK(dbs == dbp);

  Matrix dis;
  Matrix dip;
  kernels::serial::input_grad(delta, w, dis);
  kernels::parallel::input_grad(delta, w, dip);
  CHECK(dis == dip);

  const auto centers = random_matrix(4, 9, 4);
  Matrix ds;
  Matrix dp;
  kernels::serial::squared_distances(in, centers, ds);
  kernels::parallel::squared_distances(in, centers, dp);
  CHECK(ds == dp);
}

TEST_CASE("max_threads is positive") { CHECK(kernels::max_threads() >= 1); }
