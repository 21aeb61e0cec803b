#pragma once

/// \file projection.hpp
/// Capped-simplex projection and monotone bisection root finding shared by
/// all placement solvers.

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace d2dcache {

/// {p : 0 <= p_i <= 1, sum_i p_i <= budget}
class CappedSimplex
{
public:
  CappedSimplex(std::size_t dim, double budget);

  std::size_t dim() const noexcept { return dim_; }
  double budget() const noexcept { return budget_; }

  bool contains(std::span<const double> p, double tol = 1e-9) const;

private:
  std::size_t dim_;
  double budget_;
};

/// Euclidean projection onto the capped simplex. Computed as
/// clamp(v_i - tau, 0, 1) with tau = 0 when the clamped vector already fits
/// the budget, otherwise tau > 0 found by bisection.
std::vector<double> project(const CappedSimplex& set, std::span<const double> v);

/// In-place variant used by the inner solvers; out must have set.dim() entries.
void project_into(const CappedSimplex& set, std::span<const double> v, std::span<double> out);

/// Projection in the metric sum_i w_i (p_i - v_i)^2 with w_i > 0:
/// clamp(v_i - tau / w_i, 0, 1).
void project_into(const CappedSimplex& set, std::span<const double> v, std::span<const double> w,
                  std::span<double> out);

struct BisectResult
{
  double x = 0.0;
  bool converged = false;
  int iterations = 0;
};

class NoBracketError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Root of a monotone scalar function on [lo, hi].
///
/// If f(lo) and f(hi) have the same strict sign the interval is widened on
/// the side closer to a root, doubling its width each time; after 60
/// expansions NoBracketError is thrown. Stops once |f(x)| <= tol or the
/// bracket is no wider than tol. After max_iter halvings the midpoint is
/// returned with converged = false.
template <class F>
BisectResult bisect(F&& f, double lo, double hi, double tol = 1e-10, int max_iter = 200)
{
  if (!(lo <= hi))
    throw std::invalid_argument("bisect: lo must not exceed hi");

  double flo = f(lo);
  if (flo == 0.0)
    return {lo, true, 0};
  double fhi = f(hi);
  if (fhi == 0.0)
    return {hi, true, 0};

  int expansions = 0;
  double step = hi > lo ? hi - lo : 1.0;
  while (std::signbit(flo) == std::signbit(fhi)) {
    if (expansions == 60)
      throw NoBracketError("bisect: no sign change after 60 bracket expansions");
    if (std::abs(flo) < std::abs(fhi)) {
      hi = lo;
      fhi = flo;
      lo -= step;
      flo = f(lo);
      if (flo == 0.0)
        return {lo, true, 0};
    } else {
      lo = hi;
      flo = fhi;
      hi += step;
      fhi = f(hi);
      if (fhi == 0.0)
        return {hi, true, 0};
    }
    step *= 2.0;
    ++expansions;
  }

  const bool increasing = flo < 0.0;
  for (int it = 1; it <= max_iter; ++it) {
    const double mid = lo + 0.5 * (hi - lo);
    const double fm = f(mid);
    if (std::abs(fm) <= tol || hi - lo <= tol || mid <= lo || mid >= hi)
      return {mid, true, it};
    if ((fm < 0.0) == increasing)
      lo = mid;
    else
      hi = mid;
  }
  return {lo + 0.5 * (hi - lo), false, max_iter};
}

} // namespace d2dcache
