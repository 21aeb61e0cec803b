#include "d2dcache/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace d2dcache {

namespace {

void require(bool condition, const char* message)
{
  if (!condition)
    throw std::invalid_argument(message);
}

void check_dimensions(const Popularity& q, const Placement& pl)
{
  if (pl.p_h.size() != pl.p_ue.size())
    throw std::invalid_argument("placement tiers have different lengths");
  if (q.size() != pl.size())
    throw std::invalid_argument("popularity and placement dimensions differ");
}

void check_index(const Placement& pl, std::size_t i)
{
  if (pl.p_h.size() != pl.p_ue.size())
    throw std::invalid_argument("placement tiers have different lengths");
  if (i >= pl.size())
    throw std::out_of_range("content index out of range");
}

double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

} // namespace

ScenarioConfig ScenarioConfig::table1()
{
  const double area = std::numbers::pi * 500.0 * 500.0;
  ScenarioConfig cfg;
  cfg.n_contents = 30;
  cfg.gamma = 1.0;
  cfg.lambda_ue = 5000.0 / area;
  cfg.lambda_h = 50.0 / area;
  cfg.r_ue = 15.0;
  cfg.r_h = 100.0;
  cfg.alpha = 0.5;
  cfg.m_ue = 2;
  cfg.m_h = 8;
  return cfg;
}

void ScenarioConfig::validate() const
{
  require(n_contents >= 1, "n_contents must be positive");
  require(std::isfinite(gamma) && gamma >= 0.0, "gamma must be nonnegative");
  require(std::isfinite(lambda_ue) && lambda_ue >= 0.0, "lambda_ue must be nonnegative");
  require(std::isfinite(lambda_h) && lambda_h >= 0.0, "lambda_h must be nonnegative");
  require(std::isfinite(r_ue) && r_ue >= 0.0, "r_ue must be nonnegative");
  require(std::isfinite(r_h) && r_h >= 0.0, "r_h must be nonnegative");
  require(alpha >= 0.0 && alpha <= 1.0, "alpha must lie in [0, 1]");
  require(m_ue >= 0 && m_ue <= n_contents, "m_ue must lie in [0, n_contents]");
  require(m_h >= 0 && m_h <= n_contents, "m_h must lie in [0, n_contents]");
}

std::vector<std::string> ScenarioConfig::warnings() const
{
  std::vector<std::string> out;
  if (r_ue >= r_h) {
    std::ostringstream os;
    os << "r_ue (" << r_ue << ") is not smaller than r_h (" << r_h << ")";
    out.push_back(os.str());
  }
  return out;
}

Popularity::Popularity(std::vector<double> q) : q_(std::move(q))
{
  require(!q_.empty(), "popularity vector is empty");
  for (std::size_t i = 0; i < q_.size(); ++i) {
    require(std::isfinite(q_[i]) && q_[i] > 0.0, "popularity entries must be positive");
    if (i > 0)
      require(q_[i] <= q_[i - 1], "popularity must be non-increasing");
  }
  require(std::abs(compensated_sum(q_) - 1.0) <= 1e-12, "popularity must sum to one");
}

double compensated_sum(std::span<const double> values)
{
  double sum = 0.0;
  double c = 0.0;
  for (double v : values) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v))
      c += (sum - t) + v;
    else
      c += (v - t) + sum;
    sum = t;
  }
  return sum + c;
}

Popularity make_zipf(int n_contents, double gamma)
{
  require(n_contents >= 1, "n_contents must be positive");
  require(std::isfinite(gamma) && gamma >= 0.0, "gamma must be nonnegative");

  std::vector<double> w(static_cast<std::size_t>(n_contents));
  for (std::size_t i = 0; i < w.size(); ++i)
    w[i] = std::pow(static_cast<double>(i + 1), -gamma);
  const double norm = compensated_sum(w);
  for (double& x : w)
    x /= norm;
  return Popularity(std::move(w));
}

Placement Placement::zeros(std::size_t n)
{
  return uniform(n, 0.0, 0.0);
}

Placement Placement::uniform(std::size_t n, double p_h, double p_ue)
{
  return Placement{std::vector<double>(n, p_h), std::vector<double>(n, p_ue)};
}

bool Placement::feasible(const ScenarioConfig& cfg, double tol) const
{
  const auto n = static_cast<std::size_t>(cfg.n_contents);
  if (p_h.size() != n || p_ue.size() != n)
    return false;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(p_h[i] >= -tol && p_h[i] <= 1.0 + tol))
      return false;
    if (!(p_ue[i] >= -tol && p_ue[i] <= 1.0 + tol))
      return false;
  }
  return compensated_sum(p_h) <= cfg.m_h + tol && compensated_sum(p_ue) <= cfg.m_ue + tol;
}

OffloadModel::OffloadModel(const ScenarioConfig& cfg)
  : alpha_(cfg.alpha),
    user_rate_(std::numbers::pi * cfg.alpha * cfg.lambda_ue * cfg.r_ue * cfg.r_ue),
    helper_rate_(std::numbers::pi * cfg.lambda_h * cfg.r_h * cfg.r_h)
{}

double OffloadModel::d2d(double p_ue) const
{
  return -std::expm1(-user_rate_ * p_ue);
}

double OffloadModel::helper(double p_h) const
{
  return -std::expm1(-helper_rate_ * p_h);
}

double OffloadModel::non_cached(double p_ue, double p_h) const
{
  return -std::expm1(-(user_rate_ * p_ue + helper_rate_ * p_h));
}

double OffloadModel::cached(double p_ue, double p_h) const
{
  return p_ue + (1.0 - p_ue) * non_cached(p_ue, p_h);
}

double OffloadModel::offload(double p_ue, double p_h) const
{
  const double e = std::exp(-(user_rate_ * p_ue + helper_rate_ * p_h));
  return 1.0 - (1.0 - alpha_ * p_ue) * e;
}

ContentGradient OffloadModel::offload_gradient(double p_ue, double p_h) const
{
  const double e = std::exp(-(user_rate_ * p_ue + helper_rate_ * p_h));
  const double miss = 1.0 - alpha_ * p_ue;
  return {e * (alpha_ + user_rate_ * miss), helper_rate_ * miss * e};
}

double offload_per_content(const ScenarioConfig& cfg, const Placement& pl, std::size_t i)
{
  check_index(pl, i);
  return OffloadModel(cfg).offload(pl.p_ue[i], pl.p_h[i]);
}

double d2d_offload(const ScenarioConfig& cfg, const Placement& pl, std::size_t i)
{
  check_index(pl, i);
  return OffloadModel(cfg).d2d(pl.p_ue[i]);
}

double helper_offload(const ScenarioConfig& cfg, const Placement& pl, std::size_t i)
{
  check_index(pl, i);
  return OffloadModel(cfg).helper(pl.p_h[i]);
}

double non_cached_offload(const ScenarioConfig& cfg, const Placement& pl, std::size_t i)
{
  check_index(pl, i);
  return OffloadModel(cfg).non_cached(pl.p_ue[i], pl.p_h[i]);
}

double cached_offload(const ScenarioConfig& cfg, const Placement& pl, std::size_t i)
{
  check_index(pl, i);
  return OffloadModel(cfg).cached(pl.p_ue[i], pl.p_h[i]);
}

OffloadReport total_offload(const ScenarioConfig& cfg, const Popularity& q, const Placement& pl)
{
  check_dimensions(q, pl);
  const OffloadModel model(cfg);
  OffloadReport report;
  report.kind = ReportKind::analytic;
  report.per_content.resize(pl.size());
  std::vector<double> weighted(pl.size());
  for (std::size_t i = 0; i < pl.size(); ++i) {
    report.per_content[i] = clamp01(model.offload(pl.p_ue[i], pl.p_h[i]));
    weighted[i] = q[i] * report.per_content[i];
  }
  report.total = compensated_sum(weighted);
  return report;
}

ValueAndGradient objective_and_gradient(const OffloadModel& model, const Popularity& q,
                                        const Placement& pl)
{
  check_dimensions(q, pl);
  const std::size_t n = pl.size();
  ValueAndGradient out;
  out.grad_h.resize(n);
  out.grad_ue.resize(n);
  double value = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    value -= q[i] * model.offload(pl.p_ue[i], pl.p_h[i]);
    const ContentGradient g = model.offload_gradient(pl.p_ue[i], pl.p_h[i]);
    out.grad_ue[i] = -q[i] * g.d_ue;
    out.grad_h[i] = -q[i] * g.d_h;
  }
  out.value = value;
  return out;
}

ValueAndGradient objective_and_gradient(const ScenarioConfig& cfg, const Popularity& q,
                                        const Placement& pl)
{
  return objective_and_gradient(OffloadModel(cfg), q, pl);
}

} // namespace d2dcache
