#pragma once

/// \file baselines.hpp
/// Reference placements the optimiser is compared against.

#include "d2dcache/model.hpp"

namespace d2dcache {

/// The m_ue most popular contents at every cache-enabled user and the m_h
/// most popular at every helper.
Placement popular_cache(const ScenarioConfig& cfg);

/// Every content with probability m_ue / N at users and m_h / N at helpers.
Placement even_cache(const ScenarioConfig& cfg);

struct NonJointPlacement
{
  Placement placement;
  /// Helpers serve nothing (lambda_h or r_h is zero); p_h is the even placement.
  bool helper_degenerate = false;
  /// alpha = 0; the user tier is the flagged even placement.
  bool user_degenerate = false;
};

/// Helper tier from water-filling, user tier from the user-only optimum,
/// combined without joint optimisation.
NonJointPlacement non_joint(const ScenarioConfig& cfg, const Popularity& q);

} // namespace d2dcache
