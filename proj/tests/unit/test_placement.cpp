#include <cmath>
#include <numbers>

#include "doctest.h"
#include "sscc/error.hpp"
#include "sscc/placement.hpp"

using namespace sscc;

namespace {

PointPattern mother(std::uint64_t rep, double side = 100.0, double lambda = 0.1,
                    EdgeMode mode = EdgeMode::kTorus) {
  RngStream rng(StreamKey{77, rep, 0, Purpose::kMotherPattern});
  return sample_ppp(lambda, Window(side, mode), rng);
}

}  // namespace

TEST_CASE("soft kernel values") {
  CHECK(kernel_fc(0.5, 0.3, 0.4, 10.0) == 1.0);
  CHECK(kernel_fc(1.0, 0.3, 0.4, 10.0) == doctest::Approx(std::exp(-3.0)));
  CHECK(kernel_fc(1.0, 0.3, 0.4, kHardKernel) == 0.0);
  CHECK(kernel_fc(0.7, 0.3, 0.4, kHardKernel) == 1.0);
  CHECK_THROWS_AS(kernel_fc(-1.0, 0.1, 0.1, 1.0), InvalidArgument);
  CHECK_THROWS_AS(kernel_fc(1.0, -0.1, 0.1, 1.0), InvalidArgument);
  RngStream rng(5);
  for (int k = 0; k < 500; ++k) {
    const double r = 5 * rng.uniform(), m = 2 * rng.uniform(), n = 2 * rng.uniform();
    const double c = 0.1 + 50 * rng.uniform();
    CHECK(kernel_fc(r, m, n, c) == kernel_fc(r, n, m, c));
  }
}

TEST_CASE("mark distributions") {
  const auto g = MarkDistribution::gamma(3.0, 0.5);
  CHECK(g.shape() == doctest::Approx(6.0));
  CHECK(g.variance() == doctest::Approx(1.5));
  CHECK(MarkDistribution::gamma(3.0, 0.0).is_degenerate());
  CHECK(MarkDistribution::gamma(0.0, 1.0).is_degenerate());
  CHECK_THROWS_AS(MarkDistribution::gamma(-1.0, 1.0), InvalidArgument);
  RngStream rng(8);
  double s = 0.0;
  for (int k = 0; k < 200'000; ++k) s += g.sample(rng);
  CHECK(s / 200'000 == doctest::Approx(3.0).epsilon(0.01));
}

TEST_CASE("independent thinning") {
  const auto pat = mother(0);
  RngStream rng(1);
  CHECK(thin_independent(pat, 1.0, rng).size() == pat.size());
  CHECK(thin_independent(pat, 0.0, rng).empty());
  CHECK_THROWS_AS(thin_independent(pat, 1.2, rng), InvalidArgument);
  double total = 0.0;
  for (int rep = 0; rep < 500; ++rep) {
    RngStream r(StreamKey{3, static_cast<std::uint64_t>(rep), 0, Purpose::kIndependent});
    total += static_cast<double>(thin_independent(mother(rep), 0.3, r).size());
  }
  CHECK(total / 500 == doctest::Approx(300.0).epsilon(0.03));
}

TEST_CASE("Matern II thinning") {
  const double lambda = 0.1;
  const double delta = 1.0 / std::sqrt(lambda * std::numbers::pi);
  SUBCASE("zero radius keeps everything") {
    const auto pat = mother(1);
    RngStream rng(2);
    CHECK(thin_matern2(pat, 0.0, rng).size() == pat.size());
  }
  SUBCASE("retained fraction matches the classical formula") {
    double kept = 0.0, total = 0.0;
    for (int rep = 0; rep < 500; ++rep) {
      const auto pat = mother(rep);
      RngStream rng(StreamKey{4, static_cast<std::uint64_t>(rep), 0, Purpose::kWeights});
      kept += static_cast<double>(thin_matern2(pat, delta, rng).size());
      total += static_cast<double>(pat.size());
    }
    CHECK(kept / total == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(0.02));
  }
  SUBCASE("hard-core property") {
    for (double d : {0.5, 2.0, 6.0}) {
      const auto pat = mother(9, 60.0, 0.3, EdgeMode::kBorderCrop);
      RngStream rng(3);
      const auto kept = thin_matern2(pat, d, rng);
      for (std::size_t a = 0; a < kept.size(); ++a)
        for (std::size_t b = a + 1; b < kept.size(); ++b)
          CHECK(distance(pat[kept[a]].location, pat[kept[b]].location, pat.window()) > d);
    }
  }
}

TEST_CASE("soft-core thinning") {
  SUBCASE("zero marks and a hard kernel keep everything") {
    SoftCoreParams p{{MarkDistribution::degenerate(0.0)}, 1.0, kHardKernel, 1e-6};
    const auto pat = mother(2);
    RngStream rng(4);
    CHECK(thin_sscc(pat, p, 0, rng).size() == pat.size());
  }
  SUBCASE("hard kernel with degenerate marks reproduces Matern II at 2m") {
    const double m = 1.5;
    SoftCoreParams p{{MarkDistribution::degenerate(m)}, 1.0, kHardKernel, 1e-6};
    double soft = 0.0, hard = 0.0;
    for (int rep = 0; rep < 500; ++rep) {
      const auto pat = mother(rep);
      RngStream a(StreamKey{5, static_cast<std::uint64_t>(rep), 0, Purpose::kGeneric});
      RngStream b(StreamKey{6, static_cast<std::uint64_t>(rep), 0, Purpose::kGeneric});
      soft += static_cast<double>(thin_sscc(pat, p, 0, a).size());
      hard += static_cast<double>(thin_matern2(pat, 2 * m, b).size());
    }
    CHECK(soft == doctest::Approx(hard).epsilon(0.02));
  }
  SUBCASE("survivors satisfy the hard-core distance for the hard kernel") {
    SoftCoreParams p{{MarkDistribution::degenerate(2.0)}, 1.0, kHardKernel, 1e-6};
    const auto pat = mother(3, 60.0, 0.3, EdgeMode::kBorderCrop);
    RngStream rng(5);
    const auto kept = thin_sscc(pat, p, 0, rng);
    for (std::size_t a = 0; a < kept.size(); ++a)
      for (std::size_t b = a + 1; b < kept.size(); ++b)
        CHECK(distance(pat[kept[a]].location, pat[kept[b]].location, pat.window()) > 4.0);
  }
  SUBCASE("p0 thins the survivors") {
    SoftCoreParams p{{MarkDistribution::degenerate(0.0)}, 0.4, kHardKernel, 1e-6};
    double kept = 0.0, total = 0.0;
    for (int rep = 0; rep < 200; ++rep) {
      const auto pat = mother(rep);
      RngStream rng(StreamKey{7, static_cast<std::uint64_t>(rep), 0, Purpose::kGeneric});
      kept += static_cast<double>(thin_sscc(pat, p, 0, rng).size());
      total += static_cast<double>(pat.size());
    }
    CHECK(kept / total == doctest::Approx(0.4).epsilon(0.02));
  }
  SUBCASE("invalid parameters") {
    SoftCoreParams p{{MarkDistribution::degenerate(1.0)}, 0.0, 10.0, 1e-6};
    const auto pat = mother(0);
    RngStream rng(1);
    CHECK_THROWS_AS(thin_sscc(pat, p, 0, rng), InvalidArgument);
    p.p0 = 1.0;
    CHECK_THROWS_AS(thin_sscc(pat, p, 3, rng), InvalidArgument);
  }
}

TEST_CASE("retention probability equals the explicit product") {
  // Eight fixed points; the oracle evaluates the untruncated product directly.
  const Window w(10.0, EdgeMode::kBorderCrop);
  std::vector<MarkedPoint> pts;
  RngStream rng(StreamKey{31, 0, 0, Purpose::kGeneric});
  for (int k = 0; k < 8; ++k)
    pts.push_back({{2.0 + 6.0 * rng.uniform(), 2.0 + 6.0 * rng.uniform()}, 0.3 * rng.uniform(), rng.uniform()});
  const PointPattern pat(w, pts);
  const double c = 2.0, p0 = 0.9;
  for (std::size_t k = 0; k < pts.size(); ++k) {
    double prod = p0;
    for (std::size_t j = 0; j < pts.size(); ++j) {
      if (j == k || pts[j].weight > pts[k].weight) continue;
      const double r = std::hypot(pts[k].location.x - pts[j].location.x, pts[k].location.y - pts[j].location.y);
      prod *= 1.0 - kernel_fc(r, pts[k].mark, pts[j].mark, c);
    }
    CHECK(sscc_retention_probability(pat, k, p0, c, 1e-12) == doctest::Approx(prod).epsilon(1e-9));
  }
}

TEST_CASE("place_all_items") {
  const auto pat = mother(4, 100.0, 0.1, EdgeMode::kBorderCrop);
  SUBCASE("single item gives C in {0,1}") {
    const DemandModel d(1, 0.1);
    const auto res = place_all_items(pat, IndependentPolicy{{0.5}}, d, {1, 0, 0});
    for (auto c : res.cache_count) CHECK(c <= 1);
    for (std::size_t k = 0; k < pat.size(); ++k) CHECK(res.cache_count[k] == (res.contains(k, 0) ? 1u : 0u));
  }
  SUBCASE("independent policy: C(x) binomial mean") {
    const std::size_t M = 20;
    const double q = 0.3;
    const DemandModel d(M, 0.1);
    double sum = 0.0, cnt = 0.0;
    for (int rep = 0; rep < 50; ++rep) {
      const auto p = mother(rep, 100.0, 0.1, EdgeMode::kBorderCrop);
      const auto res = place_all_items(p, IndependentPolicy{std::vector<double>(M, q)}, d,
                                       {2, static_cast<std::uint64_t>(rep), 0});
      for (auto c : res.cache_count) { sum += c; cnt += 1.0; }
    }
    CHECK(sum / cnt == doctest::Approx(M * q).epsilon(0.02));
  }
  SUBCASE("mismatched parameter length rejected") {
    const DemandModel d(3, 0.1);
    CHECK_THROWS_AS(place_all_items(pat, IndependentPolicy{{0.1, 0.2}}, d, {}), InvalidArgument);
    CHECK_THROWS_AS(place_all_items(pat, HardCorePolicy{{1.0, -1.0, 1.0}}, d, {}), InvalidArgument);
  }
  SUBCASE("membership, counts and retained sets agree; runs are deterministic") {
    const std::size_t M = 5;
    const DemandModel d(M, 0.5);
    SoftCoreParams sp;
    for (std::size_t i = 0; i < M; ++i) sp.marks.push_back(MarkDistribution::gamma(1.0 + i, 1.0));
    const PlacementPolicy policy = SoftCorePolicy{sp};
    const auto a = place_all_items(pat, policy, d, {9, 1, 2});
    const auto b = place_all_items(pat, policy, d, {9, 1, 2});
    CHECK(a.retained == b.retained);
    for (std::size_t k = 0; k < pat.size(); ++k) {
      std::uint32_t c = 0;
      for (std::size_t i = 0; i < M; ++i) c += a.contains(k, i) ? 1 : 0;
      CHECK(c == a.cache_count[k]);
    }
    for (std::size_t i = 0; i < M; ++i)
      for (auto k : a.retained[i]) CHECK(k < pat.size());
  }
  SUBCASE("scoped placement matches the full run on the scope") {
    const std::size_t M = 4;
    const DemandModel d(M, 0.1);
    const PlacementPolicy policy = HardCorePolicy{{2.0, 3.0, 4.0, 5.0}};
    const auto full = place_all_items(pat, policy, d, {3, 0, 1});
    PlacementScope scope{pat.indices_in(pat.window().evaluation_region())};
    const auto part = place_all_items(pat, policy, d, {3, 0, 1}, scope);
    for (auto k : scope.nodes)
      for (std::size_t i = 0; i < M; ++i) CHECK(full.contains(k, i) == part.contains(k, i));
  }
  SUBCASE("items are placed independently given the mother pattern") {
    // z_{x,1} and z_{x,2} share the mother pattern, so independence is checked
    // conditionally: fixed pattern, fresh item streams per replication.
    const auto p = mother(11, 30.0, 0.1, EdgeMode::kTorus);
    const std::size_t M = 2, K = p.size();
    const DemandModel d(M, 0.0);
    SoftCoreParams sp{{MarkDistribution::gamma(2.0, 1.0), MarkDistribution::gamma(2.0, 1.0)}, 1.0, 10.0, 1e-6};
    const int reps = 2000;
    std::vector<std::vector<std::uint8_t>> a(reps), b(reps);
    std::vector<double> pa(K, 0.0), pb(K, 0.0);
    for (int rep = 0; rep < reps; ++rep) {
      const auto res = place_all_items(p, SoftCorePolicy{sp}, d, {5, static_cast<std::uint64_t>(rep), 0});
      a[rep].resize(K);
      b[rep].resize(K);
      for (std::size_t k = 0; k < K; ++k) {
        a[rep][k] = res.contains(k, 0);
        b[rep][k] = res.contains(k, 1);
        pa[k] += a[rep][k] / double(reps);
        pb[k] += b[rep][k] / double(reps);
      }
    }
    double s = 0.0, s2 = 0.0;
    for (int rep = 0; rep < reps; ++rep) {
      double t = 0.0;
      for (std::size_t k = 0; k < K; ++k) t += (a[rep][k] - pa[k]) * (b[rep][k] - pb[k]);
      s += t;
      s2 += t * t;
    }
    const double mean = s / reps;
    const double se = std::sqrt((s2 / reps - mean * mean) / reps);
    CHECK(std::abs(mean) < 3 * se);
  }
}
