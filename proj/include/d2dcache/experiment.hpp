#pragma once

/// \file experiment.hpp
/// Experiment manifests, parameter sweeps and CSV output used by the
/// command-line tool.
///
/// Manifests are flat `key = value` text files; `#` starts a comment. Keys are
/// the field names of ScenarioConfig, DcSettings and SimSettings:
///
///   n_contents gamma lambda_ue lambda_h r_ue r_h alpha m_ue m_h
///   epsilon max_outer_iters inner_tol inner_max_iters convexifier_scale
///   region_radius n_trials rng_seed cache_mode

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "d2dcache/dc_solver.hpp"
#include "d2dcache/model.hpp"
#include "d2dcache/simulator.hpp"

namespace d2dcache {

struct Experiment
{
  ScenarioConfig scenario = ScenarioConfig::table1();
  DcSettings dc;
  SimSettings sim;

  /// Sets one manifest key; throws std::invalid_argument on an unknown key or
  /// a malformed value.
  void set(std::string_view key, std::string_view value);

  static const std::vector<std::string>& keys();
};

/// Parses a manifest on top of the defaults.
Experiment parse_experiment(std::istream& in);
Experiment load_experiment(const std::string& path);

enum class Scheme
{
  dc,
  popular,
  even,
  nonjoint
};

std::string_view to_string(Scheme s);
Scheme parse_scheme(std::string_view text);
/// Comma-separated list; duplicates removed, canonical order kept.
std::vector<Scheme> parse_schemes(std::string_view text);

enum class SweepParameter
{
  lambda_h,
  lambda_ue,
  alpha,
  gamma,
  n_contents
};

std::string_view to_string(SweepParameter p);
SweepParameter parse_sweep_parameter(std::string_view text);

struct SweepSpec
{
  SweepParameter parameter = SweepParameter::lambda_h;
  std::vector<double> grid;
  std::vector<Scheme> schemes{Scheme::dc, Scheme::popular, Scheme::even, Scheme::nonjoint};
  bool validate = false;
};

/// `start:step:count` or a comma-separated list. The result must be nonempty
/// and strictly increasing.
std::vector<double> parse_grid(std::string_view text);

/// Scenario with one parameter replaced; throws if the result is invalid.
ScenarioConfig with_parameter(const ScenarioConfig& base, SweepParameter p, double value);

struct SchemeOutcome
{
  Placement placement;
  OffloadReport analytic;
  std::optional<int> iterations;
  std::optional<bool> converged;
};

/// Placement of one scheme under cfg plus its analytic report.
SchemeOutcome evaluate_scheme(const ScenarioConfig& cfg, const Popularity& q, Scheme scheme,
                              const DcSettings& dc);

struct SweepRow
{
  SweepParameter parameter = SweepParameter::lambda_h;
  double value = 0.0;
  Scheme scheme = Scheme::dc;
  std::optional<double> analytic;
  std::optional<double> empirical;
  std::optional<double> ci_halfwidth;
  std::optional<int> iterations;
  std::optional<bool> converged;
  /// Empty unless the point failed.
  std::string error;
};

/// One row per (grid value, scheme), ordered by value then scheme. Failed
/// points are reported with converged = false and an error message.
std::vector<SweepRow> run_sweep(const Experiment& exp, const SweepSpec& spec);

/// %.10g formatting used for every numeric CSV field.
std::string format_number(double x);

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

struct PlacementRow
{
  std::string scheme;
  Placement placement;
  OffloadReport analytic;
  std::optional<OffloadReport> empirical;
};

/// Per-content rows followed by one `total` row per scheme.
void write_placement_csv(std::ostream& out, const Popularity& q, const std::vector<PlacementRow>& rows);

} // namespace d2dcache
