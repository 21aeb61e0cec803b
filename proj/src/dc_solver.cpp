#include "d2dcache/dc_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "d2dcache/projection.hpp"

namespace d2dcache {

namespace {

constexpr double kDescentSlack = 1e-9;
constexpr double kArmijo = 1e-4;
constexpr double kMinStep = 1e-14;

// Stacked [p_h, p_ue] view of a placement; both tiers share the same length.
struct Stacked
{
  std::vector<double> x;
  std::size_t n = 0;

  explicit Stacked(const Placement& pl) : x(2 * pl.size()), n(pl.size())
  {
    std::copy(pl.p_h.begin(), pl.p_h.end(), x.begin());
    std::copy(pl.p_ue.begin(), pl.p_ue.end(), x.begin() + static_cast<std::ptrdiff_t>(n));
  }

  Placement placement() const
  {
    const auto mid = x.begin() + static_cast<std::ptrdiff_t>(n);
    return Placement{std::vector<double>(x.begin(), mid), std::vector<double>(mid, x.end())};
  }
};

double distance(std::span<const double> a, std::span<const double> b)
{
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

// Convex surrogate of one outer iteration:
//   S(P) = F(P) + H(P) - <grad H(P_k), P>
class Surrogate
{
public:
  Surrogate(const OffloadModel& model, const Popularity& q, double scale,
            std::vector<double> anchor_grad)
    : model_(model), q_(q), anchor_grad_(std::move(anchor_grad))
  {
    weight_.resize(q.size());
    for (std::size_t i = 0; i < q.size(); ++i)
      weight_[i] = scale * q[i] * model.alpha() * model.helper_rate();
  }

  /// S(y) - S(x), accumulated per content so that nearly saturated
  /// offloading probabilities do not cancel.
  double difference(std::span<const double> x, std::span<const double> y) const
  {
    const std::size_t n = q_.size();
    const double alpha = model_.alpha();
    const double a = model_.user_rate();
    const double c = model_.helper_rate();
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double h0 = x[i], u0 = x[n + i];
      const double h1 = y[i], u1 = y[n + i];
      // P(y) - P(x) = miss(x) e(x) - miss(y) e(y)
      const double gain = (1.0 - alpha * u0) * std::exp(-(a * u0 + c * h0)) -
                          (1.0 - alpha * u1) * std::exp(-(a * u1 + c * h1));
      s += -q_[i] * gain + weight_[i] * ((u1 - u0) * (u1 + u0) + (h1 - h0) * (h1 + h0));
      s -= anchor_grad_[i] * (h1 - h0) + anchor_grad_[n + i] * (u1 - u0);
    }
    return s;
  }

  void gradient(std::span<const double> x, std::span<double> g) const
  {
    const std::size_t n = q_.size();
    for (std::size_t i = 0; i < n; ++i) {
      const double h = x[i];
      const double u = x[n + i];
      const ContentGradient d = model_.offload_gradient(u, h);
      g[i] = -q_[i] * d.d_h + 2.0 * weight_[i] * h - anchor_grad_[i];
      g[n + i] = -q_[i] * d.d_ue + 2.0 * weight_[i] * u - anchor_grad_[n + i];
    }
  }

private:
  const OffloadModel& model_;
  const Popularity& q_;
  std::vector<double> anchor_grad_;
  std::vector<double> weight_;
};

struct TierSets
{
  CappedSimplex helper;
  CappedSimplex user;

  void project(std::span<const double> v, std::span<double> out) const
  {
    const std::size_t n = helper.dim();
    project_into(helper, v.first(n), out.first(n));
    project_into(user, v.subspan(n), out.subspan(n));
  }

  void project(std::span<const double> v, std::span<const double> w, std::span<double> out) const
  {
    const std::size_t n = helper.dim();
    project_into(helper, v.first(n), w.first(n), out.first(n));
    project_into(user, v.subspan(n), w.subspan(n), out.subspan(n));
  }
};

struct InnerResult
{
  int iterations = 0;
  bool converged = false;
};

// Projected gradient with Armijo backtracking (initial step 1, halving),
// taken in the metric sum_i q_i dp_i^2. Gradient and curvature of every
// content scale with q_i, so this removes the popularity spread from the
// conditioning.
InnerResult minimise_surrogate(const Surrogate& s, const TierSets& sets, const Popularity& q,
                               std::vector<double>& x, const DcSettings& settings)
{
  const std::size_t dim = x.size();
  const std::size_t n = q.size();
  std::vector<double> g(dim), trial(dim), shifted(dim), metric(dim);
  for (std::size_t i = 0; i < n; ++i)
    metric[i] = metric[n + i] = q[i];
  s.gradient(x, g);

  InnerResult result;
  for (int it = 0; it < settings.inner_max_iters; ++it) {
    result.iterations = it;
    double step = 1.0;
    bool accepted = false;
    bool first = true;
    while (step >= kMinStep) {
      for (std::size_t k = 0; k < dim; ++k)
        shifted[k] = x[k] - step * g[k] / metric[k];
      sets.project(shifted, metric, trial);
      const double moved = distance(x, trial);
      if (first) {
        if (moved <= settings.inner_tol) {
          result.converged = true;
          return result;
        }
        first = false;
      }
      if (moved == 0.0)
        break;
      double decrease = 0.0;
      for (std::size_t k = 0; k < dim; ++k)
        decrease += g[k] * (trial[k] - x[k]);
      if (s.difference(x, trial) <= kArmijo * decrease) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      // No representable decrease left: the iterate is stationary to
      // floating-point resolution.
      result.converged = true;
      return result;
    }
    x.swap(trial);
    s.gradient(x, g);
  }
  result.iterations = settings.inner_max_iters;
  return result;
}

bool convex_along(const ScenarioConfig& cfg, const Popularity& q, const Placement& pl, double scale)
{
  return surrogate_min_eigenvalue(cfg, q, pl, scale) >= -1e-12;
}

} // namespace

void DcSettings::validate() const
{
  if (!(epsilon > 0.0))
    throw std::invalid_argument("epsilon must be positive");
  if (max_outer_iters < 1)
    throw std::invalid_argument("max_outer_iters must be positive");
  if (!(inner_tol > 0.0))
    throw std::invalid_argument("inner_tol must be positive");
  if (inner_max_iters < 1)
    throw std::invalid_argument("inner_max_iters must be positive");
  if (!(convexifier_scale >= 1.0))
    throw std::invalid_argument("convexifier_scale must be at least 1");
  if (!(max_convexifier_scale >= convexifier_scale))
    throw std::invalid_argument("max_convexifier_scale must be at least convexifier_scale");
}

std::string_view to_string(StopReason reason)
{
  switch (reason) {
    case StopReason::objective_delta:
      return "objective-delta";
    case StopReason::iterate_delta:
      return "iterate-delta";
    case StopReason::max_iters:
      return "max-iters";
  }
  return "unknown";
}

ValueAndGradient convexifier_h(const ScenarioConfig& cfg, const Popularity& q, const Placement& pl,
                               double scale)
{
  if (q.size() != pl.size() || pl.p_ue.size() != pl.p_h.size())
    throw std::invalid_argument("convexifier_h: dimension mismatch");
  const OffloadModel model(cfg);
  const double coef = scale * model.alpha() * model.helper_rate();
  ValueAndGradient out;
  out.grad_h.resize(pl.size());
  out.grad_ue.resize(pl.size());
  for (std::size_t i = 0; i < pl.size(); ++i) {
    const double w = coef * q[i];
    out.value += w * (pl.p_ue[i] * pl.p_ue[i] + pl.p_h[i] * pl.p_h[i]);
    out.grad_ue[i] = 2.0 * w * pl.p_ue[i];
    out.grad_h[i] = 2.0 * w * pl.p_h[i];
  }
  return out;
}

double surrogate_min_eigenvalue(const ScenarioConfig& cfg, const Popularity& q, const Placement& pl,
                                double scale)
{
  if (q.size() != pl.size() || pl.p_ue.size() != pl.p_h.size())
    throw std::invalid_argument("surrogate_min_eigenvalue: dimension mismatch");
  const OffloadModel model(cfg);
  const double a = model.user_rate();
  const double c = model.helper_rate();
  const double alpha = model.alpha();
  const double k = 2.0 * scale * alpha * c;

  double smallest = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < pl.size(); ++i) {
    const double u = pl.p_ue[i];
    const double e = std::exp(-(a * u + c * pl.p_h[i]));
    const double miss = 1.0 - alpha * u;
    // Hessian of -P_i,off plus the convexifier's 2k on the diagonal.
    const double uu = e * (2.0 * a * alpha + a * a * miss) + k;
    const double hh = c * c * miss * e + k;
    const double uh = c * e * (alpha + a * miss);
    const double mean = 0.5 * (uu + hh);
    const double radius = std::hypot(0.5 * (uu - hh), uh);
    smallest = std::min(smallest, q[i] * (mean - radius));
  }
  return smallest;
}

double projected_gradient_norm(const ScenarioConfig& cfg, const Popularity& q, const Placement& pl)
{
  const ValueAndGradient f = objective_and_gradient(cfg, q, pl);
  const std::size_t n = pl.size();
  const TierSets sets{CappedSimplex(n, cfg.m_h), CappedSimplex(n, cfg.m_ue)};
  Stacked x(pl);
  std::vector<double> shifted(2 * n), out(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    shifted[i] = x.x[i] - f.grad_h[i];
    shifted[n + i] = x.x[n + i] - f.grad_ue[i];
  }
  sets.project(shifted, out);
  return distance(x.x, out);
}

DcResult dc_optimize(const ScenarioConfig& cfg, const Popularity& q, const DcSettings& settings,
                     const std::optional<Placement>& init)
{
  cfg.validate();
  settings.validate();
  const auto n = static_cast<std::size_t>(cfg.n_contents);
  if (q.size() != n)
    throw std::invalid_argument("dc_optimize: popularity dimension differs from n_contents");

  Placement start = init.value_or(Placement::uniform(n, static_cast<double>(cfg.m_h) / n,
                                                     static_cast<double>(cfg.m_ue) / n));
  if (!start.feasible(cfg))
    throw std::invalid_argument("dc_optimize: initial placement is infeasible");

  const OffloadModel model(cfg);
  const TierSets sets{CappedSimplex(n, cfg.m_h), CappedSimplex(n, cfg.m_ue)};

  DcTrace trace;
  double scale = settings.convexifier_scale;

  for (;;) {
    trace.iterates.clear();
    trace.inner_iterations = 0;
    trace.inner_failures = 0;
    trace.convexifier_scale = scale;
    trace.converged = false;
    trace.reason = StopReason::max_iters;

    Stacked current(start);
    double f_current = objective_and_gradient(model, q, start).value;
    trace.iterates.push_back({start, f_current});

    bool escalate = false;
    for (int k = 0; k < settings.max_outer_iters; ++k) {
      const Placement& pk = trace.iterates.back().placement;
      if (!convex_along(cfg, q, pk, scale)) {
        escalate = true;
        break;
      }
      const ValueAndGradient hk = convexifier_h(cfg, q, pk, scale);
      std::vector<double> anchor(2 * n);
      std::copy(hk.grad_h.begin(), hk.grad_h.end(), anchor.begin());
      std::copy(hk.grad_ue.begin(), hk.grad_ue.end(), anchor.begin() + static_cast<std::ptrdiff_t>(n));
      const Surrogate surrogate(model, q, scale, std::move(anchor));

      std::vector<double> next = current.x;
      const InnerResult inner = minimise_surrogate(surrogate, sets, q, next, settings);
      trace.inner_iterations += inner.iterations;
      if (!inner.converged)
        ++trace.inner_failures;

      const double step_norm = distance(current.x, next);
      current.x = std::move(next);
      const Placement pnext = current.placement();
      const double f_next = objective_and_gradient(model, q, pnext).value;

      if (f_next > f_current + kDescentSlack) {
        std::ostringstream os;
        os << "dc_optimize: objective increased from " << f_current << " to " << f_next
           << " at outer iteration " << k + 1;
        throw DcDescentError(os.str());
      }
      const double f_delta = std::abs(f_current - f_next);
      trace.iterates.push_back({pnext, f_next});
      f_current = f_next;

      if (f_delta <= settings.epsilon) {
        trace.converged = true;
        trace.reason = StopReason::objective_delta;
        break;
      }
      if (step_norm <= settings.epsilon) {
        trace.converged = true;
        trace.reason = StopReason::iterate_delta;
        break;
      }
    }

    if (!escalate)
      break;
    if (scale * 2.0 > settings.max_convexifier_scale)
      throw DcDescentError("dc_optimize: surrogate is not convex at the largest convexifier scale");
    scale *= 2.0;
    ++trace.restarts;
  }

  DcResult result{trace.iterates.back().placement, std::move(trace)};
  return result;
}

} // namespace d2dcache
