#pragma once

/// \file model.hpp
/// Scenario description, Zipf popularity and the analytical offloading model
/// for a two-tier (helper + cache-enabled user) wireless caching network.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace d2dcache {

/// Network and content-library parameters. Densities are per square metre,
/// radii in metres.
struct ScenarioConfig
{
  int n_contents = 30;
  double gamma = 1.0;
  double lambda_ue = 0.0;
  double lambda_h = 0.0;
  double r_ue = 15.0;
  double r_h = 100.0;
  double alpha = 0.5;
  int m_ue = 2;
  int m_h = 8;

  /// Default parameter set: 5000 users and 50 helpers per disk of radius
  /// 500 m, R_UE = 15 m, R_H = 100 m, alpha = 0.5, M_UE = 2, M_H = 8, N = 30,
  /// gamma = 1.
  static ScenarioConfig table1();

  /// Throws std::invalid_argument when an invariant is violated.
  void validate() const;

  /// Soft conditions that do not invalidate the scenario (r_ue >= r_h).
  std::vector<std::string> warnings() const;
};

/// Request probabilities over the content library, ordered by rank.
class Popularity
{
public:
  /// Validates positivity, normalisation (1e-12) and non-increasing order.
  explicit Popularity(std::vector<double> q);

  std::size_t size() const noexcept { return q_.size(); }
  double operator[](std::size_t i) const { return q_[i]; }
  std::span<const double> values() const noexcept { return q_; }

private:
  std::vector<double> q_;
};

/// q_i proportional to i^-gamma. Normalised with compensated summation.
Popularity make_zipf(int n_contents, double gamma);

/// Caching probabilities per content at the helper tier and the user tier.
struct Placement
{
  std::vector<double> p_h;
  std::vector<double> p_ue;

  static Placement zeros(std::size_t n);
  static Placement uniform(std::size_t n, double p_h, double p_ue);

  std::size_t size() const noexcept { return p_h.size(); }

  /// Box and budget feasibility against cfg, within tol.
  bool feasible(const ScenarioConfig& cfg, double tol = 1e-9) const;
};

enum class ReportKind
{
  analytic,
  empirical
};

struct OffloadReport
{
  std::vector<double> per_content;
  double total = 0.0;
  ReportKind kind = ReportKind::analytic;
  std::optional<double> ci_halfwidth;
  std::optional<long long> n_trials;
};

/// Value of a scalar function of a placement and its gradient, split by tier.
struct ValueAndGradient
{
  double value = 0.0;
  std::vector<double> grad_h;
  std::vector<double> grad_ue;
};

/// Partial derivatives of a single content's offloading probability.
struct ContentGradient
{
  double d_ue = 0.0;
  double d_h = 0.0;
};

/// Per-content offloading formulas with the two exponent rates precomputed:
/// user_rate = pi * alpha * lambda_ue * r_ue^2 and
/// helper_rate = pi * lambda_h * r_h^2. These are the only ways the network
/// geometry enters the model.
class OffloadModel
{
public:
  explicit OffloadModel(const ScenarioConfig& cfg);

  double alpha() const noexcept { return alpha_; }
  double user_rate() const noexcept { return user_rate_; }
  double helper_rate() const noexcept { return helper_rate_; }

  /// At least one other cache-enabled user within r_ue holds the content.
  double d2d(double p_ue) const;
  /// At least one helper within r_h holds the content.
  double helper(double p_h) const;
  /// Offloading probability seen by a user without a cache.
  double non_cached(double p_ue, double p_h) const;
  /// Offloading probability seen by a cache-enabled user.
  double cached(double p_ue, double p_h) const;
  /// alpha * cached + (1 - alpha) * non_cached, in closed form.
  double offload(double p_ue, double p_h) const;
  ContentGradient offload_gradient(double p_ue, double p_h) const;

private:
  double alpha_;
  double user_rate_;
  double helper_rate_;
};

// Content indices are zero-based; out-of-range indices throw std::out_of_range.
double offload_per_content(const ScenarioConfig& cfg, const Placement& pl, std::size_t i);
double d2d_offload(const ScenarioConfig& cfg, const Placement& pl, std::size_t i);
double helper_offload(const ScenarioConfig& cfg, const Placement& pl, std::size_t i);
double non_cached_offload(const ScenarioConfig& cfg, const Placement& pl, std::size_t i);
double cached_offload(const ScenarioConfig& cfg, const Placement& pl, std::size_t i);

OffloadReport total_offload(const ScenarioConfig& cfg, const Popularity& q, const Placement& pl);

/// F(P) = -sum_i q_i P_i,off and its exact gradient (content-separable).
ValueAndGradient objective_and_gradient(const ScenarioConfig& cfg, const Popularity& q,
                                        const Placement& pl);

/// Same as objective_and_gradient with a prebuilt model, for inner loops.
ValueAndGradient objective_and_gradient(const OffloadModel& model, const Popularity& q,
                                        const Placement& pl);

/// Neumaier-compensated sum.
double compensated_sum(std::span<const double> values);

} // namespace d2dcache
