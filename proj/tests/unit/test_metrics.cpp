#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "fsmlp/losses.hpp"
#include "fsmlp/metrics.hpp"
#include "fsmlp/rng.hpp"
#include "oracles.hpp"

using namespace fsmlp;

namespace {

using L = std::vector<int>;

std::vector<int> relabel(const std::vector<int>& a, const std::vector<int>& map) {
  std::vector<int> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = map[static_cast<std::size_t>(a[i])];
  return out;
}

}  // namespace

TEST_CASE("fixture values") {
  const L a{0, 0, 1, 1};
  const L b{0, 1, 0, 1};
  CHECK(ari(a, b) == -0.5);
  CHECK(nmi(a, b) == doctest::Approx(0.0));
  CHECK(jaccard(a, b) == 0.0);
  CHECK(nmi(a, L{1, 1, 0, 0}) == doctest::Approx(1.0));
  CHECK(ari(a, L{1, 1, 0, 0}) == 1.0);
  CHECK(jaccard(L{0, 0, 0, 1}, L{0, 0, 1, 1}) == 0.25);
  CHECK(ari(L{0, 1, 2, 3}, L{0, 0, 0, 0}) == 0.0);
  CHECK(nmi(L{0, 1, 2, 3}, L{0, 0, 0, 0}) == 0.0);
  CHECK(nmi(L{0, 0, 0}, L{1, 1, 1}) == 1.0);
  CHECK(ari(L{0, 0, 0}, L{2, 2, 2}) == 1.0);
  CHECK(jaccard(L{0, 1, 2}, L{2, 0, 1}) == 1.0);
}

TEST_CASE("pair counts") {
  const auto p = pair_counts(L{0, 0, 0, 1}, L{0, 0, 1, 1});
  CHECK(p.both == 1.0);
  CHECK(p.in_a == 3.0);
  CHECK(p.in_b == 2.0);
  CHECK(p.total == 6.0);
  CHECK_THROWS_AS(pair_counts(L{0, 1}, L{0}), Error);
}

TEST_CASE("brute-force agreement on every labelling pair, n <= 5, C <= 3") {
  std::size_t pairs = 0;
  for (std::size_t n = 1; n <= 5; ++n) {
    const auto all = oracle::all_labelings(n, 3);
    for (const auto& a : all)
      for (const auto& b : all) {
        REQUIRE(std::abs(ari(a, b) - oracle::ari(a, b)) <= 1e-12);
        REQUIRE(std::abs(jaccard(a, b) - oracle::jaccard(a, b)) <= 1e-12);
        REQUIRE(std::abs(nmi(a, b) - oracle::nmi(a, b)) <= 1e-12);
        ++pairs;
      }
  }
  MESSAGE(pairs << " pairs");
}

TEST_CASE("bounds, symmetry and relabeling invariance on random labels") {
  Rng rng(4);
  const std::vector<std::vector<int>> perms{{2, 0, 1}, {1, 2, 0}, {0, 2, 1}};
  for (int t = 0; t < 2000; ++t) {
    const std::size_t n = 1 + t % 12;
    std::uniform_int_distribution<int> lab(0, 2);
    L a(n), b(n);
    for (auto& v : a) v = lab(rng);
    for (auto& v : b) v = lab(rng);
    const double x = nmi(a, b), r = ari(a, b), j = jaccard(a, b);
    CHECK(x >= -1e-15);
    CHECK(x <= 1.0 + 1e-12);
    CHECK(j >= 0.0);
    CHECK(j <= 1.0);
    CHECK(r > -1.0);
    CHECK(r <= 1.0 + 1e-12);
    CHECK(x == doctest::Approx(nmi(b, a)).epsilon(1e-12));
    CHECK(r == doctest::Approx(ari(b, a)).epsilon(1e-12));
    CHECK(j == jaccard(b, a));
    const auto& p = perms[static_cast<std::size_t>(t) % perms.size()];
    CHECK(x == doctest::Approx(nmi(relabel(a, p), b)).epsilon(1e-12));
    CHECK(r == doctest::Approx(ari(a, relabel(b, p))).epsilon(1e-12));
    CHECK(j == jaccard(relabel(a, p), relabel(b, p)));
    CHECK(nmi(a, a) == doctest::Approx(1.0));
    CHECK(ari(a, relabel(a, p)) == doctest::Approx(1.0));
    CHECK(jaccard(a, a) == 1.0);
  }
}

TEST_CASE("oca") {
  CHECK(oca(L{0, 1, 2}, L{0, 1, 2}) == 1.0);
  CHECK(oca(L{1, 0}, L{0, 1}) == 0.0);
  CHECK(oca(L{0, 1, 1, 1}, L{0, 1, 0, 1}) == 0.75);
  CHECK_THROWS_AS(oca(L{0}, L{0, 1}), Error);
}

TEST_CASE("stress of subset") {
  Matrix x(3, 2, std::vector<double>{0, 0, 3, 0, 0, 4});
  const std::vector<std::size_t> all{0, 1};
  CHECK(stress_of_subset(x, all) == 0.0);

  Matrix z(3, 2, std::vector<double>{0, 0, 2, 0, 5, 0});
  CHECK(stress_of_subset(z, std::vector<std::size_t>{0}) == 0.0);

  // keep column 0: points 0, 3, 0
  const double hand = (0.0 / 3.0 + 16.0 / 4.0 + 4.0 / 5.0) / 12.0;
  CHECK(stress_of_subset(x, std::vector<std::size_t>{0}) == doctest::Approx(hand).epsilon(1e-14));
  CHECK(stress_of_subset(x, std::vector<std::size_t>{0}) ==
        doctest::Approx(oracle::sammon(x, x.select_cols(std::vector<std::size_t>{0}))));

  CHECK_THROWS_AS(stress_of_subset(x, std::vector<std::size_t>{}), Error);
  CHECK_THROWS_AS(stress_of_subset(x, std::vector<std::size_t>{0, 0}), Error);
  CHECK_THROWS_AS(stress_of_subset(x, std::vector<std::size_t>{2}), Error);
}
