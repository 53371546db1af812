#include <cmath>
#include <numeric>

#include "doctest.h"
#include "sscc/demand.hpp"
#include "sscc/error.hpp"

using namespace sscc;

TEST_CASE("zipf pmf examples") {
  const auto u = zipf_pmf(4, 0.0);
  for (double p : u) CHECK(p == doctest::Approx(0.25));
  const auto two = zipf_pmf(2, 1.0);
  CHECK(two[0] == doctest::Approx(2.0 / 3.0));
  CHECK(two[1] == doctest::Approx(1.0 / 3.0));
  const auto hundred = zipf_pmf(100, 0.1);
  CHECK(hundred[0] / hundred[99] == doctest::Approx(std::pow(100.0, 0.1)));
  CHECK_THROWS_AS(zipf_pmf(0, 1.0), InvalidArgument);
  CHECK_THROWS_AS(zipf_pmf(3, -0.5), InvalidArgument);
}

TEST_CASE("zipf pmf is normalised and monotone over the test grid") {
  for (std::size_t m : {1u, 2u, 10u, 100u}) {
    for (double g : {0.0, 0.1, 1.0, 2.0}) {
      const auto p = zipf_pmf(m, g);
      CHECK(std::abs(std::accumulate(p.begin(), p.end(), 0.0) - 1.0) < 1e-12);
      for (std::size_t i = 1; i < p.size(); ++i) CHECK(p[i] <= p[i - 1]);
      for (std::size_t i = 0; i < p.size(); ++i)
        CHECK(p[i] / p[0] == doctest::Approx(std::pow(static_cast<double>(i + 1), -g)));
    }
  }
}

TEST_CASE("request sampling follows the pmf") {
  SUBCASE("uniform catalog") {
    const DemandModel d(4, 0.0);
    RngStream rng(StreamKey{1, 0, 0, Purpose::kRequests});
    std::vector<double> freq(4, 0.0);
    const int draws = 100'000;
    for (int k = 0; k < draws; ++k) freq[d.sample_request(rng)] += 1.0 / draws;
    for (double f : freq) CHECK(std::abs(f - 0.25) < 0.01);
  }
  SUBCASE("single item") {
    const DemandModel d(1, 0.7);
    RngStream rng(3);
    for (int k = 0; k < 1000; ++k) CHECK(d.sample_request(rng) == 0);
  }
  SUBCASE("total variation against the computed pmf") {
    const DemandModel d(100, 0.1);
    RngStream rng(StreamKey{9, 0, 0, Purpose::kRequests});
    std::vector<double> freq(100, 0.0);
    const int draws = 1'000'000;
    for (int k = 0; k < draws; ++k) freq[d.sample_request(rng)] += 1.0;
    double tv = 0.0;
    for (std::size_t i = 0; i < 100; ++i) tv += std::abs(freq[i] / draws - d.probability(i));
    CHECK(0.5 * tv < 0.01);
  }
}
