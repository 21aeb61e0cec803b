#include "d2dcache/extreme_solvers.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "d2dcache/projection.hpp"

namespace d2dcache {

double waterfill_level(double beta, double q_i, double helper_rate)
{
  return std::min(std::max(beta + std::log(q_i) / helper_rate, 0.0), 1.0);
}

WaterfillSolution waterfill(const ScenarioConfig& cfg, const Popularity& q)
{
  cfg.validate();
  const auto n = static_cast<std::size_t>(cfg.n_contents);
  if (q.size() != n)
    throw std::invalid_argument("waterfill: popularity dimension differs from n_contents");
  if (!(cfg.lambda_h > 0.0) || !(cfg.r_h > 0.0))
    throw std::invalid_argument("waterfill: helper density and radius must be positive");
  if (cfg.m_h < 1)
    throw std::invalid_argument("waterfill: m_h must be at least 1");

  const double c = OffloadModel(cfg).helper_rate();
  const double budget = cfg.m_h;

  auto excess = [&](double beta) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      s += waterfill_level(beta, q[i], c);
    return s - budget;
  };

  // All-dry and all-saturated water levels bracket the root.
  const double lo = -std::log(q[0]) / c;
  const double hi = 1.0 - std::log(q[n - 1]) / c;
  const BisectResult root = bisect(excess, lo, hi, 0.0);

  WaterfillSolution sol;
  sol.beta = root.x;
  sol.p_h.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    sol.p_h[i] = waterfill_level(sol.beta, q[i], c);
    if (sol.p_h[i] == 1.0)
      sol.saturated.push_back(i);
    else if (sol.p_h[i] == 0.0)
      sol.dry.push_back(i);
  }
  return sol;
}

double usertier_marginal(double p, double q_i, double alpha, double user_rate)
{
  return q_i * std::exp(-user_rate * p) * (alpha + user_rate * (1.0 - alpha * p));
}

namespace {

// Linear objective alpha * sum q_i p_i: fill by popularity, splitting the
// remaining budget evenly across a group of equally popular contents.
std::vector<double> fill_by_popularity(const Popularity& q, double budget)
{
  std::vector<double> p(q.size(), 0.0);
  std::size_t i = 0;
  while (i < q.size() && budget > 0.0) {
    std::size_t j = i;
    while (j < q.size() && q[j] == q[i])
      ++j;
    const double share = std::min(1.0, budget / static_cast<double>(j - i));
    for (std::size_t k = i; k < j; ++k)
      p[k] = share;
    budget -= share * static_cast<double>(j - i);
    i = j;
  }
  return p;
}

} // namespace

UserTierSolution usertier_solve(const ScenarioConfig& cfg, const Popularity& q)
{
  cfg.validate();
  const auto n = static_cast<std::size_t>(cfg.n_contents);
  if (q.size() != n)
    throw std::invalid_argument("usertier_solve: popularity dimension differs from n_contents");

  UserTierSolution sol;
  sol.placement = Placement::zeros(n);
  auto& p = sol.placement.p_ue;
  const double budget = cfg.m_ue;

  if (cfg.alpha == 0.0) {
    sol.degenerate = true;
    std::fill(p.begin(), p.end(), budget / static_cast<double>(n));
    return sol;
  }
  if (cfg.m_ue == 0)
    return sol;
  if (cfg.m_ue == cfg.n_contents) {
    std::fill(p.begin(), p.end(), 1.0);
    return sol;
  }

  const double alpha = cfg.alpha;
  const double b = OffloadModel(cfg).user_rate();
  if (b == 0.0) {
    p = fill_by_popularity(q, budget);
    sol.multiplier = alpha * q[static_cast<std::size_t>(cfg.m_ue) - 1];
    return sol;
  }

  auto level = [&](double mu, std::size_t i) {
    if (usertier_marginal(1.0, q[i], alpha, b) >= mu)
      return 1.0;
    if (usertier_marginal(0.0, q[i], alpha, b) <= mu)
      return 0.0;
    return bisect([&](double x) { return usertier_marginal(x, q[i], alpha, b) - mu; }, 0.0, 1.0,
                  0.0)
      .x;
  };
  auto fill = [&](double mu) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      s += level(mu, i);
    return s - budget;
  };

  // mu = 0 caches everything (sum = n > m_ue); the largest marginal at zero
  // caches nothing.
  const double mu_max = usertier_marginal(0.0, q[0], alpha, b);
  sol.multiplier = bisect(fill, 0.0, mu_max, 0.0).x;
  for (std::size_t i = 0; i < n; ++i)
    p[i] = level(sol.multiplier, i);
  return sol;
}

} // namespace d2dcache
