#pragma once

/// \file dc_solver.hpp
/// Difference-of-convex minimisation of F(P) = -sum_i q_i P_i,off.
///
/// F is split as G - H with the separable quadratic
/// H(P) = s * sum_i q_i alpha pi lambda_h r_h^2 (p_ue_i^2 + p_h_i^2), where s is
/// the convexifier scale. Each outer iteration linearises H at the current
/// iterate and minimises the convex surrogate G(P) - <grad H(P_k), P> over the
/// two capped simplices with projected gradient descent (Armijo backtracking).
/// The outer loop stops when either the objective change or the Euclidean
/// iterate change falls to epsilon.

#include <optional>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "d2dcache/model.hpp"

namespace d2dcache {

struct DcSettings
{
  double epsilon = 1e-6;
  int max_outer_iters = 500;
  /// Stop the inner solve when ||P - proj(P - grad)|| <= inner_tol.
  double inner_tol = 1e-10;
  int inner_max_iters = 20000;
  /// Multiplier (>= 1) on the quadratic convexifier coefficient.
  double convexifier_scale = 1.0;
  /// The scale is doubled up to this limit when G fails the convexity check.
  double max_convexifier_scale = 16.0;

  void validate() const;
};

enum class StopReason
{
  objective_delta,
  iterate_delta,
  max_iters
};

std::string_view to_string(StopReason reason);

struct DcIterate
{
  Placement placement;
  double objective = 0.0;
};

struct DcTrace
{
  /// P_0, P_1, ... with F(P_k); the last entry is the returned placement.
  std::vector<DcIterate> iterates;
  bool converged = false;
  StopReason reason = StopReason::max_iters;
  /// Convexifier scale the final run used.
  double convexifier_scale = 1.0;
  /// Number of restarts caused by convexifier escalation.
  int restarts = 0;
  long long inner_iterations = 0;
  /// Inner solves that hit inner_max_iters before reaching inner_tol.
  int inner_failures = 0;

  int outer_iterations() const { return iterates.empty() ? 0 : static_cast<int>(iterates.size()) - 1; }
};

struct DcResult
{
  Placement placement;
  DcTrace trace;
};

/// Raised when an outer iteration increases F beyond 1e-9, or when G cannot be
/// made convex within max_convexifier_scale.
class DcDescentError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// H(P) and its gradient for the given convexifier scale.
ValueAndGradient convexifier_h(const ScenarioConfig& cfg, const Popularity& q, const Placement& pl,
                               double scale = 1.0);

/// Smallest eigenvalue over contents of the 2x2 Hessian blocks of G = F + H.
/// Non-negative means G is convex at pl.
double surrogate_min_eigenvalue(const ScenarioConfig& cfg, const Popularity& q, const Placement& pl,
                                double scale = 1.0);

/// Runs the DC iteration. Without init, starts from p_ue = m_ue / N and
/// p_h = m_h / N. Throws std::invalid_argument on an infeasible init or bad
/// settings and DcDescentError on a non-monotone step.
DcResult dc_optimize(const ScenarioConfig& cfg, const Popularity& q, const DcSettings& settings = {},
                     const std::optional<Placement>& init = std::nullopt);

/// Norm of the projected-gradient step of F at pl, ||P - proj(P - grad F)||.
double projected_gradient_norm(const ScenarioConfig& cfg, const Popularity& q, const Placement& pl);

} // namespace d2dcache
