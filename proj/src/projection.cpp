#include "d2dcache/projection.hpp"

#include <algorithm>

#include "d2dcache/model.hpp"

namespace d2dcache {

CappedSimplex::CappedSimplex(std::size_t dim, double budget) : dim_(dim), budget_(budget)
{
  if (dim == 0)
    throw std::invalid_argument("capped simplex dimension must be positive");
  if (!(budget >= 0.0) || budget > static_cast<double>(dim))
    throw std::invalid_argument("capped simplex budget must lie in [0, dim]");
}

bool CappedSimplex::contains(std::span<const double> p, double tol) const
{
  if (p.size() != dim_)
    return false;
  for (double x : p)
    if (!(x >= -tol && x <= 1.0 + tol))
      return false;
  return compensated_sum(p) <= budget_ + tol;
}

void project_into(const CappedSimplex& set, std::span<const double> v, std::span<double> out)
{
  if (v.size() != set.dim() || out.size() != set.dim())
    throw std::invalid_argument("projection: dimension mismatch");

  auto clipped_sum = [&](double tau) {
    double s = 0.0;
    for (double x : v)
      s += std::clamp(x - tau, 0.0, 1.0);
    return s;
  };

  double tau = 0.0;
  if (clipped_sum(0.0) > set.budget()) {
    const double hi = *std::max_element(v.begin(), v.end());
    tau = bisect([&](double t) { return clipped_sum(t) - set.budget(); }, 0.0, hi, 1e-12).x;
  }
  for (std::size_t i = 0; i < v.size(); ++i)
    out[i] = std::clamp(v[i] - tau, 0.0, 1.0);
}

void project_into(const CappedSimplex& set, std::span<const double> v, std::span<const double> w,
                  std::span<double> out)
{
  if (v.size() != set.dim() || w.size() != set.dim() || out.size() != set.dim())
    throw std::invalid_argument("projection: dimension mismatch");

  auto clipped_sum = [&](double tau) {
    double s = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i)
      s += std::clamp(v[i] - tau / w[i], 0.0, 1.0);
    return s;
  };

  double tau = 0.0;
  if (clipped_sum(0.0) > set.budget()) {
    // The clipped sum is piecewise linear in tau with kinks where a
    // coordinate leaves 1 (tau = w (v - 1)) or reaches 0 (tau = w v). Locate
    // the segment holding the budget, then interpolate exactly.
    std::vector<double> kinks{0.0};
    for (std::size_t i = 0; i < v.size(); ++i)
      for (double t : {w[i] * (v[i] - 1.0), w[i] * v[i]})
        if (t > 0.0)
          kinks.push_back(t);
    std::sort(kinks.begin(), kinks.end());
    std::size_t lo = 0, hi = kinks.size() - 1;
    while (hi - lo > 1) {
      const std::size_t mid = (lo + hi) / 2;
      (clipped_sum(kinks[mid]) > set.budget() ? lo : hi) = mid;
    }
    const double t0 = kinks[lo];
    double slope = 0.0;
    const double probe = 0.5 * (kinks[lo] + kinks[hi]);
    for (std::size_t i = 0; i < v.size(); ++i) {
      const double p = v[i] - probe / w[i];
      if (p > 0.0 && p < 1.0)
        slope += 1.0 / w[i];
    }
    tau = slope > 0.0 ? t0 + (clipped_sum(t0) - set.budget()) / slope : kinks[hi];
  }
  for (std::size_t i = 0; i < v.size(); ++i)
    out[i] = std::clamp(v[i] - tau / w[i], 0.0, 1.0);
}

std::vector<double> project(const CappedSimplex& set, std::span<const double> v)
{
  std::vector<double> out(v.size());
  project_into(set, v, out);
  return out;
}

} // namespace d2dcache
