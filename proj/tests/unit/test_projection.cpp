#include <doctest.h>

#include <cmath>
#include <limits>

#include "d2dcache/projection.hpp"
#include "test_support.hpp"

using namespace d2dcache;
using d2dcache::testing::Rng;
using d2dcache::testing::uniform;
using doctest::Approx;

namespace {

double norm_diff(const std::vector<double>& a, const std::vector<double>& b)
{
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

// Exhaustive grid minimiser of ||p - v||^2 over the capped simplex (dim 2).
std::vector<double> grid_minimiser_2d(const std::vector<double>& v, double budget, double step)
{
  const int m = static_cast<int>(std::round(1.0 / step));
  double best = std::numeric_limits<double>::infinity();
  std::vector<double> arg(2);
  for (int a = 0; a <= m; ++a)
    for (int b = 0; b <= m; ++b) {
      const double x = a * step, y = b * step;
      if (x + y > budget + 1e-12)
        continue;
      const double d = (x - v[0]) * (x - v[0]) + (y - v[1]) * (y - v[1]);
      if (d < best) {
        best = d;
        arg = {x, y};
      }
    }
  return arg;
}

} // namespace

TEST_CASE("projection examples")
{
  SUBCASE("members are fixed points")
  {
    const CappedSimplex set(3, 1.5);
    const std::vector<double> v{0.2, 0.9, 0.1};
    CHECK(project(set, v) == v);
  }
  SUBCASE("symmetric overflow splits evenly")
  {
    const auto p = project(CappedSimplex(2, 1.0), std::vector<double>{2.0, 2.0});
    CHECK(p[0] == Approx(0.5).epsilon(1e-10));
    CHECK(p[1] == Approx(0.5).epsilon(1e-10));
    const auto grid = grid_minimiser_2d({2.0, 2.0}, 1.0, 1e-3);
    CHECK(std::abs(grid[0] - p[0]) <= 2e-3);
  }
  SUBCASE("over-budget interior point shifts by a common offset")
  {
    // Grid-search oracle (step 1e-3, tests/oracles/frozen_values.py):
    // (0.866, 0.067, 0.067).
    const auto p = project(CappedSimplex(3, 1.0), std::vector<double>{0.9, 0.1, 0.1});
    CHECK(p[0] == Approx(0.9 - 0.1 / 3).epsilon(1e-9));
    CHECK(p[1] == Approx(0.1 - 0.1 / 3).epsilon(1e-9));
    CHECK(std::abs(p[0] - 0.866) <= 2e-3);
    CHECK(std::abs(p[1] - 0.067) <= 2e-3);
    CHECK(std::abs(p[2] - 0.067) <= 2e-3);
  }
  SUBCASE("box clipping alone when the budget is slack")
  {
    const auto p = project(CappedSimplex(3, 3.0), std::vector<double>{-1.0, 0.5, 4.0});
    CHECK(p == std::vector<double>{0.0, 0.5, 1.0});
  }
  SUBCASE("zero budget maps everything to zero")
  {
    const auto p = project(CappedSimplex(3, 0.0), std::vector<double>{0.3, 2.0, -1.0});
    CHECK(p == std::vector<double>{0.0, 0.0, 0.0});
  }
  SUBCASE("dimension mismatch")
  {
    CHECK_THROWS_AS(project(CappedSimplex(3, 1.0), std::vector<double>{1.0}), std::invalid_argument);
    CHECK_THROWS_AS(CappedSimplex(2, 3.0), std::invalid_argument);
  }
}

TEST_CASE("projection properties")
{
  Rng rng(99);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = std::uniform_int_distribution<std::size_t>(1, 40)(rng);
    const double budget = uniform(rng, 0.0, static_cast<double>(n));
    const CappedSimplex set(n, budget);
    std::vector<double> u(n), v(n);
    for (std::size_t i = 0; i < n; ++i) {
      u[i] = uniform(rng, -1.0, 2.0);
      v[i] = uniform(rng, -1.0, 2.0);
    }
    const auto pu = project(set, u);
    const auto pv = project(set, v);
    REQUIRE(set.contains(pu, 1e-9));
    REQUIRE(norm_diff(project(set, pu), pu) <= 1e-9);
    REQUIRE(norm_diff(pu, pv) <= norm_diff(u, v) + 1e-9);
  }
}

TEST_CASE("bisection")
{
  SUBCASE("linear root")
  {
    const auto r = bisect([](double x) { return x - 0.5; }, 0.0, 1.0);
    CHECK(r.converged);
    CHECK(r.x == Approx(0.5).epsilon(1e-10));
  }
  SUBCASE("decreasing exponential")
  {
    const auto r = bisect([](double x) { return std::exp(-x) - 0.5; }, 0.0, 2.0);
    CHECK(r.x == Approx(std::log(2.0)).epsilon(1e-9));
  }
  SUBCASE("endpoint root")
  {
    CHECK(bisect([](double) { return 0.0; }, -3.0, 4.0).x == -3.0);
  }
  SUBCASE("bracket expansion")
  {
    CHECK(bisect([](double x) { return x - 37.0; }, 0.0, 1.0).x == Approx(37.0).epsilon(1e-10));
    CHECK(bisect([](double x) { return x + 5.0; }, 0.0, 1.0).x == Approx(-5.0).epsilon(1e-10));
  }
  SUBCASE("no bracket")
  {
    CHECK_THROWS_AS(bisect([](double) { return 1.0; }, 0.0, 1.0), NoBracketError);
  }
  SUBCASE("iteration cap reports non-convergence")
  {
    const auto r = bisect([](double x) { return x - 0.3; }, 0.0, 1.0, 0.0, 5);
    CHECK_FALSE(r.converged);
    CHECK(std::abs(r.x - 0.3) <= 1.0 / 32);
  }
}

TEST_CASE("weighted projection")
{
  Rng rng(5);
  SUBCASE("unit weights give the Euclidean projection")
  {
    for (int trial = 0; trial < 200; ++trial) {
      const std::size_t n = std::uniform_int_distribution<std::size_t>(1, 30)(rng);
      const CappedSimplex set(n, uniform(rng, 0.0, static_cast<double>(n)));
      std::vector<double> v(n), out(n);
      for (double& x : v)
        x = uniform(rng, -1.0, 2.0);
      project_into(set, v, std::vector<double>(n, 1.0), out);
      REQUIRE(norm_diff(out, project(set, v)) <= 1e-9);
    }
  }
  SUBCASE("matches a weighted grid minimiser")
  {
    const std::vector<double> v{0.9, 0.8}, w{4.0, 1.0};
    std::vector<double> out(2);
    project_into(CappedSimplex(2, 1.0), v, w, out);
    // p_i = v_i - tau / w_i with the budget active: tau = 0.7 / 1.25.
    CHECK(out[0] == Approx(0.76).epsilon(1e-12));
    CHECK(out[1] == Approx(0.24).epsilon(1e-12));
    double best = 1e300, bx = 0.0, by = 0.0;
    for (int a = 0; a <= 1000; ++a)
      for (int b = 0; a + b <= 1000; ++b) {
        const double x = a * 1e-3, y = b * 1e-3;
        const double d = w[0] * (x - v[0]) * (x - v[0]) + w[1] * (y - v[1]) * (y - v[1]);
        if (d < best) {
          best = d;
          bx = x;
          by = y;
        }
      }
    CHECK(std::abs(out[0] - bx) <= 2e-3);
    CHECK(std::abs(out[1] - by) <= 2e-3);
  }
  SUBCASE("feasible under widely spread weights")
  {
    for (int trial = 0; trial < 500; ++trial) {
      const std::size_t n = std::uniform_int_distribution<std::size_t>(1, 40)(rng);
      const CappedSimplex set(n, uniform(rng, 0.0, static_cast<double>(n)));
      std::vector<double> v(n), w(n), out(n);
      for (std::size_t i = 0; i < n; ++i) {
        v[i] = uniform(rng, -1.0, 3.0);
        w[i] = std::pow(10.0, uniform(rng, -6.0, 1.0));
      }
      project_into(set, v, w, out);
      REQUIRE(set.contains(out, 1e-12));
    }
  }
}
