#include "d2dcache/baselines.hpp"

#include <algorithm>
#include <stdexcept>

#include "d2dcache/extreme_solvers.hpp"

namespace d2dcache {

Placement popular_cache(const ScenarioConfig& cfg)
{
  cfg.validate();
  const auto n = static_cast<std::size_t>(cfg.n_contents);
  Placement pl = Placement::zeros(n);
  std::fill_n(pl.p_ue.begin(), cfg.m_ue, 1.0);
  std::fill_n(pl.p_h.begin(), cfg.m_h, 1.0);
  return pl;
}

Placement even_cache(const ScenarioConfig& cfg)
{
  cfg.validate();
  const auto n = static_cast<std::size_t>(cfg.n_contents);
  return Placement::uniform(n, static_cast<double>(cfg.m_h) / cfg.n_contents,
                            static_cast<double>(cfg.m_ue) / cfg.n_contents);
}

NonJointPlacement non_joint(const ScenarioConfig& cfg, const Popularity& q)
{
  cfg.validate();
  const auto n = static_cast<std::size_t>(cfg.n_contents);
  if (q.size() != n)
    throw std::invalid_argument("non_joint: popularity dimension differs from n_contents");

  NonJointPlacement out;
  const UserTierSolution users = usertier_solve(cfg, q);
  out.placement.p_ue = users.placement.p_ue;
  out.user_degenerate = users.degenerate;

  if (cfg.m_h == 0) {
    out.placement.p_h.assign(n, 0.0);
  } else if (cfg.lambda_h == 0.0 || cfg.r_h == 0.0) {
    // Helpers never serve anything; any feasible helper placement is optimal.
    out.helper_degenerate = true;
    out.placement.p_h.assign(n, static_cast<double>(cfg.m_h) / cfg.n_contents);
  } else {
    out.placement.p_h = waterfill(cfg, q).p_h;
  }
  return out;
}

} // namespace d2dcache
