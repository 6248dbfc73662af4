#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>

#include "fixtures.hpp"
#include "fsmlp/baselines.hpp"
#include "fsmlp/rng.hpp"

using namespace fsmlp;

namespace {

Dataset make(std::size_t n, std::size_t p, const std::vector<double>& values, const std::vector<int>& labels) {
  Dataset d;
  d.x = Matrix(n, p, values);
  d.labels = labels;
  d.class_count = static_cast<std::size_t>(*std::max_element(labels.begin(), labels.end())) + 1;
  return d;
}

double fisher_oracle(const Dataset& d, std::size_t j) {
  std::map<int, std::vector<double>> by;
  double mu = 0.0;
  for (std::size_t i = 0; i < d.rows(); ++i) {
    by[d.labels[i]].push_back(d.x(i, j));
    mu += d.x(i, j);
  }
  mu /= static_cast<double>(d.rows());
  double num = 0.0, den = 0.0;
  for (const auto& [c, v] : by) {
    const double m = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    double var = 0.0;
    for (double x : v) var += (x - m) * (x - m);
    num += static_cast<double>(v.size()) * (m - mu) * (m - mu);
    den += var;
  }
  return num / den;
}

double mi_oracle(const Dataset& d, std::size_t j, std::size_t bins) {
  double lo = d.x(0, j), hi = d.x(0, j);
  for (std::size_t i = 0; i < d.rows(); ++i) {
    lo = std::min(lo, d.x(i, j));
    hi = std::max(hi, d.x(i, j));
  }
  std::map<std::pair<long, int>, double> joint;
  std::map<long, double> pb;
  std::map<int, double> pc;
  const double n = static_cast<double>(d.rows());
  for (std::size_t i = 0; i < d.rows(); ++i) {
    const double width = (hi - lo) / static_cast<double>(bins);
    long b = static_cast<long>(std::floor((d.x(i, j) - lo) / width));
    b = std::min<long>(b, static_cast<long>(bins) - 1);
    joint[{b, d.labels[i]}] += 1.0 / n;
    pb[b] += 1.0 / n;
    pc[d.labels[i]] += 1.0 / n;
  }
  double mi = 0.0;
  for (const auto& [k, p] : joint) mi += p * std::log(p / (pb[k.first] * pc[k.second]));
  return mi;
}

}  // namespace

TEST_CASE("fisher: label-copy feature beats noise, constant feature is last") {
  // columns: label copy, noise, constant
  std::vector<double> v;
  std::vector<int> labels;
  Rng rng(1);
  std::normal_distribution<double> noise(0.0, 1.0);
  for (int i = 0; i < 10; ++i) {
    const int c = i % 2;
    labels.push_back(c);
    v.insert(v.end(), {static_cast<double>(c), noise(rng), 3.0});
  }
  const auto d = make(10, 3, v, labels);
  const auto r = fisher_score_rank(d);
  CHECK(r.scores[0] == kFisherSentinel);
  CHECK(r.scores[2] == 0.0);
  CHECK(r.order == std::vector<std::size_t>{0, 1, 2});
  CHECK(r.top(1) == std::vector<std::size_t>{0});
  CHECK(r.scores[1] == doctest::Approx(fisher_oracle(d, 1)).epsilon(1e-12));
}

TEST_CASE("fisher matches the direct formula") {
  const auto d = testing::random_dataset(60, 5, 3, 3);
  const auto r = fisher_score_rank(d);
  for (std::size_t j = 0; j < 5; ++j) CHECK(r.scores[j] == doctest::Approx(fisher_oracle(d, j)).epsilon(1e-12));
  for (std::size_t k = 1; k < 5; ++k) CHECK(r.scores[r.order[k - 1]] >= r.scores[r.order[k]]);
}

TEST_CASE("fisher is invariant under per-feature affine maps") {
  auto d = testing::random_dataset(40, 3, 2, 4);
  const auto before = fisher_score_rank(d).scores;
  const std::vector<double> a{-3.0, 0.25, 17.0};
  const std::vector<double> b{5.0, -1.0, 0.0};
  for (std::size_t i = 0; i < d.rows(); ++i)
    for (std::size_t j = 0; j < 3; ++j) d.x(i, j) = a[j] * d.x(i, j) + b[j];
  const auto after = fisher_score_rank(d).scores;
  for (std::size_t j = 0; j < 3; ++j) CHECK(after[j] == doctest::Approx(before[j]).epsilon(1e-10));
}

TEST_CASE("duplicated columns tie and break to the lower index") {
  auto d = testing::random_dataset(30, 3, 2, 5);
  for (std::size_t i = 0; i < d.rows(); ++i) d.x(i, 2) = d.x(i, 0);
  const auto f = fisher_score_rank(d);
  CHECK(f.scores[0] == f.scores[2]);
  const auto pos0 = std::find(f.order.begin(), f.order.end(), 0u);
  const auto pos2 = std::find(f.order.begin(), f.order.end(), 2u);
  CHECK(pos0 < pos2);
  const auto m = mutual_info_rank(d);
  CHECK(m.scores[0] == m.scores[2]);
  CHECK(std::find(m.order.begin(), m.order.end(), 0u) < std::find(m.order.begin(), m.order.end(), 2u));
}

TEST_CASE("mutual information examples") {
  std::vector<double> v;
  std::vector<int> labels;
  for (int i = 0; i < 200; ++i) {
    const int c = i % 2;
    labels.push_back(c);
    v.insert(v.end(), {static_cast<double>(c), 1.5});
  }
  const auto d = make(200, 2, v, labels);
  const auto r = mutual_info_rank(d);
  CHECK(r.scores[0] == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  CHECK(r.scores[1] == 0.0);
}

TEST_CASE("mutual information: shuffled feature scores near zero") {
  Rng rng(6);
  std::normal_distribution<double> noise(0.0, 1.0);
  std::vector<int> labels;
  std::vector<double> informative;
  for (int i = 0; i < 200; ++i) {
    labels.push_back(i % 2);
    informative.push_back(2.0 * (i % 2) + noise(rng));
  }
  auto shuffled = informative;
  std::shuffle(shuffled.begin(), shuffled.end(), rng);
  std::vector<double> v;
  for (int i = 0; i < 200; ++i) v.insert(v.end(), {shuffled[static_cast<std::size_t>(i)], informative[static_cast<std::size_t>(i)]});
  const auto d = make(200, 2, v, labels);
  const auto r = mutual_info_rank(d);
  CHECK(r.scores[0] == doctest::Approx(mi_oracle(d, 0, 10)).epsilon(1e-12));
  CHECK(r.scores[1] == doctest::Approx(mi_oracle(d, 1, 10)).epsilon(1e-12));
  CHECK(r.scores[0] < 0.1);
  CHECK(r.scores[0] < r.scores[1]);
  CHECK(r.order.front() == 1);
}

TEST_CASE("mutual information matches the plug-in oracle for other bin counts") {
  const auto d = testing::random_dataset(80, 4, 3, 7);
  for (std::size_t bins : {2u, 5u, 17u}) {
    const auto r = mutual_info_rank(d, bins);
    for (std::size_t j = 0; j < 4; ++j) CHECK(r.scores[j] == doctest::Approx(mi_oracle(d, j, bins)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(mutual_info_rank(d, 1), Error);
}

TEST_CASE("ranking top and errors") {
  FeatureRanking r;
  r.scores = {0.1, 0.5, 0.3};
  r.order = {1, 2, 0};
  CHECK(r.top(2) == std::vector<std::size_t>{1, 2});
  CHECK(r.top(3) == std::vector<std::size_t>{0, 1, 2});
  CHECK_THROWS_AS(r.top(4), Error);
  const auto one = make(3, 1, {1, 2, 3}, {0, 0, 0});
  CHECK_THROWS_AS(fisher_score_rank(one), Error);
}
