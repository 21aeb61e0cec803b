#pragma once

/// \file extreme_solvers.hpp
/// Exact solvers for the two single-tier cases: helpers only (alpha = 0),
/// solved by water-filling, and cache-enabled users only (no helper caching),
/// solved by bisection on the budget multiplier.

#include <cstddef>
#include <vector>

#include "d2dcache/model.hpp"

namespace d2dcache {

struct WaterfillSolution
{
  std::vector<double> p_h;
  /// Water level: p_i = min(max(beta + ln(q_i) / c, 0), 1), c = pi lambda_h r_h^2.
  double beta = 0.0;
  /// Indices with p_i == 1, ascending (a prefix).
  std::vector<std::size_t> saturated;
  /// Indices with p_i == 0, ascending (a suffix).
  std::vector<std::size_t> dry;
};

/// Maximises sum_i q_i (1 - exp(-c p_i)) subject to sum p_i = m_h, 0 <= p_i <= 1.
/// Requires lambda_h > 0, r_h > 0 and 1 <= m_h <= n_contents; throws
/// std::invalid_argument otherwise.
WaterfillSolution waterfill(const ScenarioConfig& cfg, const Popularity& q);

/// Helper level for a given multiplier, exposed for KKT checks.
double waterfill_level(double beta, double q_i, double helper_rate);

struct UserTierSolution
{
  /// p_h is identically zero.
  Placement placement;
  /// Budget multiplier mu (zero when the budget is slack).
  double multiplier = 0.0;
  /// Set when alpha = 0: the objective does not depend on the user tier and
  /// an even placement is returned.
  bool degenerate = false;
};

/// Marginal gain q_i e^{-b p} (alpha + b (1 - alpha p)) of caching content i
/// at the user tier, b = pi alpha lambda_ue r_ue^2. Strictly decreasing in p
/// when b > 0.
double usertier_marginal(double p, double q_i, double alpha, double user_rate);

/// Maximises sum_i q_i (1 - (1 - alpha p_i) e^{-b p_i}) subject to
/// sum p_i <= m_ue, 0 <= p_i <= 1. Requires m_ue <= n_contents.
UserTierSolution usertier_solve(const ScenarioConfig& cfg, const Popularity& q);

} // namespace d2dcache
