#pragma once

/// \file simulator.hpp
/// Monte Carlo validation of the offloading model. Each trial drops helper
/// and user Poisson point processes around a requesting user at the origin,
/// realises node caches from a placement and resolves one request with the
/// precedence self -> D2D -> helper -> cellular.

#include <array>
#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include "d2dcache/model.hpp"

namespace d2dcache {

enum class CacheMode
{
  /// Each node holds content i independently with probability p_i.
  independent,
  /// Systematic (Madow) sampling: at most M contents per node, exact marginals.
  capacity_exact
};

std::string_view to_string(CacheMode mode);
CacheMode parse_cache_mode(std::string_view text);

struct SimSettings
{
  /// Radius of the modelled region; must cover the helper service disk.
  double region_radius = 500.0;
  long long n_trials = 100000;
  std::uint64_t rng_seed = 1;
  CacheMode cache_mode = CacheMode::independent;

  void validate(const ScenarioConfig& cfg) const;
};

struct Point2
{
  double x = 0.0;
  double y = 0.0;
};

using Rng = std::mt19937_64;

/// Homogeneous PPP on the disk of the given radius centred at the origin.
std::vector<Point2> sample_ppp(double density, double radius, Rng& rng);

/// Sorted content indices held by one node.
using ContentSet = std::vector<std::uint32_t>;

/// Realises per-node caches with marginals p_i. In capacity-exact mode
/// sum(p) must not exceed slots + 1e-9 (std::invalid_argument otherwise).
std::vector<ContentSet> assign_caches(std::size_t nodes, std::span<const double> placement, int slots,
                                      CacheMode mode, Rng& rng);

/// Systematic sampling of one node's cache; exposed for testing.
ContentSet systematic_sample(std::span<const double> placement, int slots, double u);

enum class Resolution : std::uint8_t
{
  self,
  d2d,
  helper,
  cellular
};

std::string_view to_string(Resolution r);

struct TrialOutcome
{
  std::size_t content = 0;
  Resolution resolution = Resolution::cellular;
};

/// Everything a single request resolution looks at.
struct TrialState
{
  bool requester_cache_enabled = false;
  ContentSet requester_cache;
  std::vector<Point2> user_positions;
  /// Caches of the users in user_positions; empty for users without a cache.
  std::vector<ContentSet> user_caches;
  std::vector<Point2> helper_positions;
  std::vector<ContentSet> helper_caches;
};

/// Applies the access protocol to a realised trial.
Resolution resolve_request(const TrialState& state, std::size_t content, double r_ue, double r_h);

/// Draws one independent trial from a substream of seed.
TrialOutcome run_trial(const ScenarioConfig& cfg, const Popularity& q, const Placement& pl,
                       const SimSettings& sim, long long trial_index);

struct SimulationResult
{
  OffloadReport report;
  /// Trials per resolution, indexed by Resolution.
  std::array<long long, 4> resolution_counts{};
  std::vector<long long> requests;
  /// Per-content trial counts by resolution.
  std::vector<std::array<long long, 4>> per_content_counts;
};

SimulationResult simulate(const ScenarioConfig& cfg, const Popularity& q, const Placement& pl,
                          const SimSettings& sim);

/// Empirical offloading report with a 95% normal-approximation half-width.
OffloadReport simulate_offloading(const ScenarioConfig& cfg, const Popularity& q,
                                  const Placement& pl, const SimSettings& sim);

/// Seed of the per-trial random stream.
std::uint64_t trial_seed(std::uint64_t seed, long long trial_index);

} // namespace d2dcache
