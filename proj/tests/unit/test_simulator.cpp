#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "d2dcache/baselines.hpp"
#include "d2dcache/simulator.hpp"
#include "test_support.hpp"

using namespace d2dcache;
using doctest::Approx;

TEST_CASE("ppp sampling")
{
  Rng rng(17);
  CHECK(sample_ppp(0.0, 500.0, rng).empty());
  CHECK_THROWS_AS(sample_ppp(-1.0, 500.0, rng), std::invalid_argument);

  const double density = 50.0 / (std::numbers::pi * 500.0 * 500.0);
  double total = 0.0;
  for (int k = 0; k < 10000; ++k) {
    const auto pts = sample_ppp(density, 500.0, rng);
    total += static_cast<double>(pts.size());
    for (const Point2& p : pts)
      REQUIRE(std::hypot(p.x, p.y) <= 500.0);
  }
  CHECK(std::abs(total / 10000 - 50.0) <= 3.0 * std::sqrt(50.0 / 10000));

  // Uniform on the disk: P(r <= R/2) = 1/4.
  std::size_t inner = 0, count = 0;
  for (int k = 0; k < 2000; ++k)
    for (const Point2& p : sample_ppp(density, 500.0, rng)) {
      ++count;
      inner += std::hypot(p.x, p.y) <= 250.0;
    }
  const double frac = static_cast<double>(inner) / static_cast<double>(count);
  CHECK(std::abs(frac - 0.25) <= 3.0 * std::sqrt(0.25 * 0.75 / static_cast<double>(count)));
}

TEST_CASE("cache assignment")
{
  Rng rng(23);
  SUBCASE("zero placement leaves every cache empty")
  {
    const std::vector<double> p(10, 0.0);
    for (CacheMode mode : {CacheMode::independent, CacheMode::capacity_exact})
      for (const ContentSet& c : assign_caches(100, p, 3, mode, rng))
        CHECK(c.empty());
  }
  SUBCASE("certain contents are always held")
  {
    const std::vector<double> p{1.0, 0.3, 0.2, 1.0, 0.0};
    for (CacheMode mode : {CacheMode::independent, CacheMode::capacity_exact})
      for (const ContentSet& c : assign_caches(500, p, 3, mode, rng)) {
        REQUIRE(std::find(c.begin(), c.end(), 0u) != c.end());
        REQUIRE(std::find(c.begin(), c.end(), 3u) != c.end());
        REQUIRE(std::find(c.begin(), c.end(), 4u) == c.end());
      }
  }
  SUBCASE("capacity-exact even placement fills every cache")
  {
    const int n = 30, m = 8;
    const std::vector<double> p(n, static_cast<double>(m) / n);
    const int nodes = 10000;
    std::vector<int> freq(n, 0);
    for (const ContentSet& c : assign_caches(nodes, p, m, CacheMode::capacity_exact, rng)) {
      REQUIRE(c.size() == static_cast<std::size_t>(m));
      REQUIRE(std::is_sorted(c.begin(), c.end()));
      for (auto i : c)
        ++freq[i];
    }
    const double pi = static_cast<double>(m) / n;
    const double band = 3.0 * std::sqrt(pi * (1 - pi) / nodes);
    for (int i = 0; i < n; ++i)
      CHECK(std::abs(freq[i] / static_cast<double>(nodes) - pi) <= band);
  }
  SUBCASE("capacity-exact marginals for an uneven placement")
  {
    const std::vector<double> p{0.9, 0.7, 0.55, 0.35, 0.3, 0.2};
    const int nodes = 20000;
    std::vector<int> freq(p.size(), 0);
    for (const ContentSet& c : assign_caches(nodes, p, 3, CacheMode::capacity_exact, rng)) {
      REQUIRE(c.size() <= 3);
      for (auto i : c)
        ++freq[i];
    }
    for (std::size_t i = 0; i < p.size(); ++i)
      CHECK(std::abs(freq[i] / static_cast<double>(nodes) - p[i]) <=
            3.0 * std::sqrt(p[i] * (1 - p[i]) / nodes));
  }
  SUBCASE("independent marginals")
  {
    const std::vector<double> p{0.9, 0.5, 0.1};
    const int nodes = 20000;
    std::vector<int> freq(p.size(), 0);
    for (const ContentSet& c : assign_caches(nodes, p, 1, CacheMode::independent, rng))
      for (auto i : c)
        ++freq[i];
    for (std::size_t i = 0; i < p.size(); ++i)
      CHECK(std::abs(freq[i] / static_cast<double>(nodes) - p[i]) <=
            3.0 * std::sqrt(p[i] * (1 - p[i]) / nodes));
  }
  SUBCASE("over-budget placement is rejected in capacity-exact mode")
  {
    const std::vector<double> p{0.8, 0.8, 0.8};
    CHECK_THROWS_AS(assign_caches(1, p, 2, CacheMode::capacity_exact, rng), std::invalid_argument);
    CHECK_NOTHROW(assign_caches(1, p, 2, CacheMode::independent, rng));
  }
}

TEST_CASE("systematic sampling")
{
  const std::vector<double> p{0.5, 0.5, 0.5, 0.5};
  CHECK(systematic_sample(p, 2, 0.0) == ContentSet{0, 2});
  CHECK(systematic_sample(p, 2, 0.75) == ContentSet{1, 3});
  CHECK(systematic_sample(std::vector<double>{0.2, 0.3}, 1, 0.6).empty());
}

TEST_CASE("request resolution precedence")
{
  TrialState s;
  s.requester_cache_enabled = true;
  s.requester_cache = {2};
  s.user_positions = {{3.0, 4.0}, {20.0, 0.0}};
  s.user_caches = {{2, 5}, {7}};
  s.helper_positions = {{60.0, 0.0}, {150.0, 0.0}};
  s.helper_caches = {{2, 5, 7}, {9}};

  CHECK(resolve_request(s, 2, 15.0, 100.0) == Resolution::self);
  CHECK(resolve_request(s, 5, 15.0, 100.0) == Resolution::d2d);
  // The user holding 7 is outside r_ue.
  CHECK(resolve_request(s, 7, 15.0, 100.0) == Resolution::helper);
  // The helper holding 9 is outside r_h.
  CHECK(resolve_request(s, 9, 15.0, 100.0) == Resolution::cellular);
  s.requester_cache_enabled = false;
  CHECK(resolve_request(s, 2, 15.0, 100.0) == Resolution::d2d);
  // Boundary points count as covered.
  s.user_positions[1] = {15.0, 0.0};
  CHECK(resolve_request(s, 7, 15.0, 100.0) == Resolution::d2d);
}

TEST_CASE("simulation examples")
{
  const ScenarioConfig cfg = ScenarioConfig::table1();
  const Popularity q = make_zipf(30, 1.0);
  SimSettings sim;
  sim.n_trials = 20000;

  SUBCASE("zero placement never offloads")
  {
    const OffloadReport r = simulate_offloading(cfg, q, Placement::zeros(30), sim);
    CHECK(r.total == 0.0);
    CHECK(r.kind == ReportKind::empirical);
    CHECK(r.n_trials == sim.n_trials);
  }
  SUBCASE("popular placement agrees with the analytic model")
  {
    sim.n_trials = 100000;
    const Placement pl = popular_cache(cfg);
    const OffloadReport r = simulate_offloading(cfg, q, pl, sim);
    const double analytic = total_offload(cfg, q, pl).total;
    const double sigma = std::sqrt(analytic * (1 - analytic) / sim.n_trials);
    CHECK(std::abs(r.total - analytic) <= 3.0 * sigma);
    CHECK(*r.ci_halfwidth == Approx(1.96 * sigma).epsilon(0.05));
  }
  SUBCASE("full user caches always serve themselves")
  {
    ScenarioConfig full = cfg;
    full.alpha = 1.0;
    full.m_ue = 30;
    Placement pl = Placement::zeros(30);
    pl.p_ue.assign(30, 1.0);
    const SimulationResult r = simulate(full, q, pl, sim);
    CHECK(r.resolution_counts[static_cast<std::size_t>(Resolution::self)] == sim.n_trials);
    CHECK(r.report.total == 1.0);
  }
  SUBCASE("capacity-exact mode runs within budget")
  {
    sim.cache_mode = CacheMode::capacity_exact;
    const OffloadReport r = simulate_offloading(cfg, q, even_cache(cfg), sim);
    CHECK(r.total > 0.0);
    CHECK(r.total < 1.0);
  }
  SUBCASE("bad settings")
  {
    SimSettings bad = sim;
    bad.region_radius = 50.0;
    CHECK_THROWS_AS(simulate_offloading(cfg, q, Placement::zeros(30), bad), std::invalid_argument);
    bad = sim;
    bad.n_trials = 0;
    CHECK_THROWS_AS(simulate_offloading(cfg, q, Placement::zeros(30), bad), std::invalid_argument);
    CHECK_THROWS_AS(simulate_offloading(cfg, q, Placement::uniform(30, 0.9, 0.0), sim),
                    std::invalid_argument);
  }
}

TEST_CASE("simulation is reproducible")
{
  const ScenarioConfig cfg = ScenarioConfig::table1();
  const Popularity q = make_zipf(30, 1.0);
  SimSettings sim;
  sim.n_trials = 5000;
  sim.rng_seed = 99;
  const Placement pl = even_cache(cfg);
  const OffloadReport a = simulate_offloading(cfg, q, pl, sim);
  const OffloadReport b = simulate_offloading(cfg, q, pl, sim);
  CHECK(a.total == b.total);
  CHECK(a.per_content == b.per_content);
  CHECK(*a.ci_halfwidth == *b.ci_halfwidth);

  // Single trials reproduce the trials of a full run.
  const TrialOutcome t = run_trial(cfg, q, pl, sim, 1234);
  const TrialOutcome u = run_trial(cfg, q, pl, sim, 1234);
  CHECK(t.content == u.content);
  CHECK(t.resolution == u.resolution);

  sim.rng_seed = 100;
  CHECK(simulate_offloading(cfg, q, pl, sim).total != a.total);
}

TEST_CASE("d2d hit rate matches the thinned-PPP law")
{
  // No helpers; among requests the requester cannot serve itself, a D2D hit
  // happens with probability 1 - exp(-alpha pi lambda_ue r_ue^2 p_ue).
  ScenarioConfig cfg = ScenarioConfig::table1();
  cfg.lambda_h = 0.0;
  cfg.n_contents = 4;
  cfg.m_ue = 2;
  cfg.m_h = 1;
  const Popularity q = make_zipf(4, 0.0);
  Placement pl = Placement::zeros(4);
  pl.p_ue = {0.8, 0.6, 0.4, 0.2};
  SimSettings sim;
  sim.n_trials = 200000;
  const SimulationResult r = simulate(cfg, q, pl, sim);
  const OffloadModel model(cfg);
  for (std::size_t i = 0; i < 4; ++i) {
    const auto& c = r.per_content_counts[i];
    const double eligible = static_cast<double>(r.requests[i] - c[static_cast<std::size_t>(Resolution::self)]);
    const double hit = static_cast<double>(c[static_cast<std::size_t>(Resolution::d2d)]) / eligible;
    const double expected = 1.0 - std::exp(-model.user_rate() * pl.p_ue[i]);
    CHECK(std::abs(hit - expected) <= 3.0 * std::sqrt(expected * (1 - expected) / eligible));
    CHECK(c[static_cast<std::size_t>(Resolution::helper)] == 0);
  }
}
