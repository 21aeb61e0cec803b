#include "d2dcache/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace d2dcache {

namespace {

std::uint64_t splitmix64(std::uint64_t x)
{
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double uniform01(Rng& rng)
{
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

bool holds(const ContentSet& set, std::size_t content)
{
  return std::binary_search(set.begin(), set.end(), static_cast<std::uint32_t>(content));
}

bool within(const Point2& p, double radius)
{
  return p.x * p.x + p.y * p.y <= radius * radius;
}

ContentSet independent_sample(std::span<const double> placement, Rng& rng)
{
  ContentSet set;
  for (std::size_t i = 0; i < placement.size(); ++i)
    if (uniform01(rng) < placement[i])
      set.push_back(static_cast<std::uint32_t>(i));
  return set;
}

// Cumulative popularity for inverse-CDF content draws.
class RequestSampler
{
public:
  explicit RequestSampler(const Popularity& q) : cumulative_(q.size())
  {
    double c = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) {
      c += q[i];
      cumulative_[i] = c;
    }
  }

  std::size_t draw(Rng& rng) const
  {
    const double u = uniform01(rng) * cumulative_.back();
    const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    return std::min(static_cast<std::size_t>(it - cumulative_.begin()), cumulative_.size() - 1);
  }

private:
  std::vector<double> cumulative_;
};

TrialOutcome draw_trial(const ScenarioConfig& cfg, const Placement& pl, const SimSettings& sim,
                        const RequestSampler& requests, long long trial_index)
{
  Rng rng(trial_seed(sim.rng_seed, trial_index));
  TrialState state;

  // Nodes outside the service disks never influence the request, and the
  // restriction of a PPP to a sub-disk is a PPP with the same density.
  state.helper_positions = sample_ppp(cfg.lambda_h, cfg.r_h, rng);
  state.helper_caches = assign_caches(state.helper_positions.size(), pl.p_h, cfg.m_h, sim.cache_mode, rng);

  state.user_positions = sample_ppp(cfg.lambda_ue, cfg.r_ue, rng);
  state.user_caches.resize(state.user_positions.size());
  for (auto& cache : state.user_caches)
    if (uniform01(rng) < cfg.alpha)
      cache = assign_caches(1, pl.p_ue, cfg.m_ue, sim.cache_mode, rng).front();

  state.requester_cache_enabled = uniform01(rng) < cfg.alpha;
  if (state.requester_cache_enabled)
    state.requester_cache = assign_caches(1, pl.p_ue, cfg.m_ue, sim.cache_mode, rng).front();

  TrialOutcome outcome;
  outcome.content = requests.draw(rng);
  outcome.resolution = resolve_request(state, outcome.content, cfg.r_ue, cfg.r_h);
  return outcome;
}

void check_inputs(const ScenarioConfig& cfg, const Popularity& q, const Placement& pl,
                  const SimSettings& sim)
{
  cfg.validate();
  sim.validate(cfg);
  const auto n = static_cast<std::size_t>(cfg.n_contents);
  if (q.size() != n || pl.p_h.size() != n || pl.p_ue.size() != n)
    throw std::invalid_argument("simulate: dimension mismatch");
  if (!pl.feasible(cfg))
    throw std::invalid_argument("simulate: placement is infeasible");
}

} // namespace

std::string_view to_string(CacheMode mode)
{
  return mode == CacheMode::independent ? "independent" : "capacity-exact";
}

CacheMode parse_cache_mode(std::string_view text)
{
  if (text == "independent")
    return CacheMode::independent;
  if (text == "capacity-exact")
    return CacheMode::capacity_exact;
  throw std::invalid_argument("unknown cache mode '" + std::string(text) + "'");
}

std::string_view to_string(Resolution r)
{
  switch (r) {
    case Resolution::self:
      return "self";
    case Resolution::d2d:
      return "d2d";
    case Resolution::helper:
      return "helper";
    case Resolution::cellular:
      return "cellular";
  }
  return "unknown";
}

void SimSettings::validate(const ScenarioConfig& cfg) const
{
  if (!(region_radius >= cfg.r_h))
    throw std::invalid_argument("region_radius must be at least r_h");
  if (n_trials < 1)
    throw std::invalid_argument("n_trials must be positive");
}

std::uint64_t trial_seed(std::uint64_t seed, long long trial_index)
{
  return splitmix64(splitmix64(seed) ^ static_cast<std::uint64_t>(trial_index));
}

std::vector<Point2> sample_ppp(double density, double radius, Rng& rng)
{
  if (!(density >= 0.0))
    throw std::invalid_argument("sample_ppp: density must be nonnegative");
  const double mean = density * std::numbers::pi * radius * radius;
  if (mean <= 0.0)
    return {};
  std::poisson_distribution<long long> count(mean);
  const long long n = count(rng);
  std::vector<Point2> points;
  points.reserve(static_cast<std::size_t>(n));
  for (long long k = 0; k < n; ++k) {
    const double r = radius * std::sqrt(uniform01(rng));
    const double theta = 2.0 * std::numbers::pi * uniform01(rng);
    points.push_back({r * std::cos(theta), r * std::sin(theta)});
  }
  return points;
}

ContentSet systematic_sample(std::span<const double> placement, int slots, double u)
{
  double total = 0.0;
  for (double p : placement)
    total += std::clamp(p, 0.0, 1.0);
  if (total > slots + 1e-9)
    throw std::invalid_argument("systematic_sample: placement exceeds the cache size");

  // Selection points u, u + 1, ... over the concatenated intervals; the slack
  // pseudo-content pads the total up to an integer and is never reported.
  ContentSet set;
  double lower = 0.0;
  double point = u;
  for (std::size_t i = 0; i < placement.size(); ++i) {
    const double upper = lower + std::clamp(placement[i], 0.0, 1.0);
    if (point < upper) {
      set.push_back(static_cast<std::uint32_t>(i));
      point += 1.0;
    }
    lower = upper;
  }
  if (static_cast<int>(set.size()) > slots)
    set.resize(static_cast<std::size_t>(slots));
  return set;
}

std::vector<ContentSet> assign_caches(std::size_t nodes, std::span<const double> placement, int slots,
                                      CacheMode mode, Rng& rng)
{
  std::vector<ContentSet> caches(nodes);
  if (mode == CacheMode::capacity_exact) {
    double total = 0.0;
    for (double p : placement)
      total += p;
    if (total > slots + 1e-9)
      throw std::invalid_argument("assign_caches: placement exceeds the cache size");
    for (auto& cache : caches)
      cache = systematic_sample(placement, slots, uniform01(rng));
  } else {
    for (auto& cache : caches)
      cache = independent_sample(placement, rng);
  }
  return caches;
}

Resolution resolve_request(const TrialState& state, std::size_t content, double r_ue, double r_h)
{
  if (state.requester_cache_enabled && holds(state.requester_cache, content))
    return Resolution::self;
  for (std::size_t k = 0; k < state.user_positions.size(); ++k)
    if (within(state.user_positions[k], r_ue) && holds(state.user_caches[k], content))
      return Resolution::d2d;
  for (std::size_t k = 0; k < state.helper_positions.size(); ++k)
    if (within(state.helper_positions[k], r_h) && holds(state.helper_caches[k], content))
      return Resolution::helper;
  return Resolution::cellular;
}

TrialOutcome run_trial(const ScenarioConfig& cfg, const Popularity& q, const Placement& pl,
                       const SimSettings& sim, long long trial_index)
{
  check_inputs(cfg, q, pl, sim);
  return draw_trial(cfg, pl, sim, RequestSampler(q), trial_index);
}

SimulationResult simulate(const ScenarioConfig& cfg, const Popularity& q, const Placement& pl,
                          const SimSettings& sim)
{
  check_inputs(cfg, q, pl, sim);
  const std::size_t n = q.size();
  const RequestSampler requests(q);

  SimulationResult result;
  result.requests.assign(n, 0);
  result.per_content_counts.assign(n, {});
  for (long long t = 0; t < sim.n_trials; ++t) {
    const TrialOutcome outcome = draw_trial(cfg, pl, sim, requests, t);
    const auto r = static_cast<std::size_t>(outcome.resolution);
    ++result.resolution_counts[r];
    ++result.requests[outcome.content];
    ++result.per_content_counts[outcome.content][r];
  }

  OffloadReport& report = result.report;
  report.kind = ReportKind::empirical;
  report.n_trials = sim.n_trials;
  report.per_content.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const long long served = result.requests[i] -
                             result.per_content_counts[i][static_cast<std::size_t>(Resolution::cellular)];
    if (result.requests[i] > 0)
      report.per_content[i] = static_cast<double>(served) / static_cast<double>(result.requests[i]);
  }
  const auto trials = static_cast<double>(sim.n_trials);
  const double offloaded =
    trials - static_cast<double>(result.resolution_counts[static_cast<std::size_t>(Resolution::cellular)]);
  report.total = offloaded / trials;
  // Normal approximation with a continuity term so that 0 and 1 keep a width.
  report.ci_halfwidth = 1.959963984540054 * std::sqrt(report.total * (1.0 - report.total) / trials) +
                        0.5 / trials;
  return result;
}

OffloadReport simulate_offloading(const ScenarioConfig& cfg, const Popularity& q,
                                  const Placement& pl, const SimSettings& sim)
{
  return simulate(cfg, q, pl, sim).report;
}

} // namespace d2dcache
