#include <doctest.h>

#include <cmath>
#include <numeric>

#include "tourguide/demand.hpp"
#include "tourguide/grid.hpp"

using namespace tourguide;

namespace {

// P(floor(|g|) = k) for g ~ N(0, sigma^2), the last rank taking the tail.
std::vector<double> analytic_pmf(int n, double sigma) {
  std::vector<double> p(n);
  const double s = sigma * std::sqrt(2.0);
  for (int k = 0; k + 1 < n; ++k) p[k] = std::erf((k + 1) / s) - std::erf(k / s);
  p[n - 1] = 1.0 - std::erf((n - 1) / s);
  return p;
}

double total_variation(const std::vector<double>& a, const std::vector<double>& b) {
  double tv = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) tv += std::abs(a[k] - b[k]);
  return tv / 2;
}

}  // namespace

TEST_CASE("popularity pmf") {
  const auto p1 = popularity_pmf(20, 1.0);
  CHECK(p1[0] == doctest::Approx(0.6827).epsilon(1e-4));
  CHECK(p1[1] == doctest::Approx(0.2718).epsilon(1e-3));
  const auto p5 = popularity_pmf(20, 5.0);
  CHECK(p5[0] == doctest::Approx(0.1585).epsilon(1e-3));
  CHECK(p5[15] > 0.001);
  CHECK(std::accumulate(p5.begin() + 10, p5.end(), 0.0) > 0.04);
  CHECK(popularity_pmf(1, 1.0) == std::vector<double>{1.0});

  for (double sigma : {0.3, 1.0, 2.5, 5.0, 12.0}) {
    for (int n : {1, 2, 5, 20, 40}) {
      const auto p = popularity_pmf(n, sigma);
      const auto ref = analytic_pmf(n, sigma);
      CHECK(std::accumulate(p.begin(), p.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-12));
      for (int k = 0; k < n; ++k) CHECK(p[k] == doctest::Approx(ref[k]).epsilon(1e-9));
      for (int k = 0; k + 2 < n; ++k) CHECK(p[k] >= p[k + 1]);
    }
  }
  CHECK(popularity_pmf(20, 1.0)[0] > popularity_pmf(20, 2.0)[0]);
  CHECK(popularity_pmf(20, 2.0)[0] > popularity_pmf(20, 5.0)[0]);
  CHECK_THROWS_AS(popularity_pmf(0, 1.0), Error);
  CHECK_THROWS_AS(popularity_pmf(5, 0.0), Error);
}

TEST_CASE("rank sampler matches the pmf") {
  for (double sigma : {1.0, 5.0}) {
    const RankSampler sampler(20, sigma);
    Rng rng(99);
    std::vector<double> freq(20, 0.0);
    const int draws = 100000;
    for (int i = 0; i < draws; ++i) freq[sampler(rng)] += 1.0 / draws;
    CHECK(total_variation(freq, analytic_pmf(20, sigma)) <= 0.01);
  }
}

TEST_CASE("client demand sampling") {
  SUBCASE("single AOI") {
    const DemandMatrix d = sample_demands(7, 1, 3.0, 5);
    CHECK(d.total() == 7);
  }
  SUBCASE("degenerate deviation") {
    const DemandMatrix d = sample_demands(10, 20, 1e-9, 5);
    CHECK(d.total() == 10);
    for (int l = 0; l < 10; ++l) CHECK(d.requests(l) == std::vector<int>{0});
  }
  SUBCASE("raw draws aggregate to the pmf") {
    std::vector<int> draws;
    for (std::uint64_t seed = 0; draws.size() < 100000; ++seed) sample_demands(10, 20, 1.0, seed, &draws);
    std::vector<double> freq(20, 0.0);
    for (int r : draws) freq[r] += 1.0 / draws.size();
    CHECK(total_variation(freq, analytic_pmf(20, 1.0)) <= 0.01);
  }
  SUBCASE("each client keeps its distinct draws") {
    std::vector<int> draws;
    const DemandMatrix d = sample_demands(6, 20, 5.0, 8, &draws);
    REQUIRE(draws.size() == 6 * kDrawsPerClient);
    for (int l = 0; l < 6; ++l) {
      std::vector<int> mine(draws.begin() + l * kDrawsPerClient, draws.begin() + (l + 1) * kDrawsPerClient);
      std::sort(mine.begin(), mine.end());
      mine.erase(std::unique(mine.begin(), mine.end()), mine.end());
      CHECK(d.requests(l) == mine);
    }
  }
  SUBCASE("rank permutation") {
    const std::vector<int> rank{2, 0, 1};
    CHECK(aois_by_rank(rank) == std::vector<int>{1, 2, 0});
    const DemandMatrix d = sample_demands(4, aois_by_rank(rank), 1e-9, 1);
    for (int l = 0; l < 4; ++l) CHECK(d.requests(l) == std::vector<int>{1});
  }
  SUBCASE("reproducible") {
    CHECK(sample_demands(10, 20, 1.0, 42) == sample_demands(10, 20, 1.0, 42));
    CHECK_FALSE(sample_demands(10, 20, 5.0, 42) == sample_demands(10, 20, 5.0, 43));
  }
}

TEST_CASE("demand text format") {
  const DemandMatrix d = sample_demands(5, 20, 5.0, 3);
  CHECK(parse_demands(format_demands(d), 20) == d);
  CHECK_THROWS_AS(parse_demands("21\n", 20), Error);
}

TEST_CASE("seed derivation") {
  CHECK(derive_seed(1, {2, 3}) == derive_seed(1, {2, 3}));
  CHECK(derive_seed(1, {2, 3}) != derive_seed(1, {3, 2}));
  CHECK(derive_seed(1, {2}) != derive_seed(2, {2}));
  Rng rng(1);
  for (int i = 0; i < 1000; ++i) {
    const auto v = uniform_int(rng, -3, 3);
    CHECK(v >= -3);
    CHECK(v <= 3);
    const double u = uniform01(rng);
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}
