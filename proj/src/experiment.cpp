#include "d2dcache/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "d2dcache/baselines.hpp"

namespace d2dcache {

namespace {

std::string_view trim(std::string_view s)
{
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos)
    return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value)
{
  throw std::invalid_argument("invalid value '" + std::string(value) + "' for " + std::string(key));
}

double parse_double(std::string_view key, std::string_view text)
{
  text = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v))
    bad_value(key, text);
  return v;
}

template <class Int>
Int parse_integer(std::string_view key, std::string_view text)
{
  text = trim(text);
  Int v{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size())
    bad_value(key, text);
  return v;
}

std::vector<std::string_view> split(std::string_view text, char sep)
{
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (;;) {
    const auto pos = text.find(sep, start);
    parts.push_back(trim(text.substr(start, pos - start)));
    if (pos == std::string_view::npos)
      break;
    start = pos + 1;
  }
  return parts;
}

constexpr Scheme kSchemeOrder[] = {Scheme::dc, Scheme::popular, Scheme::even, Scheme::nonjoint};

} // namespace

const std::vector<std::string>& Experiment::keys()
{
  static const std::vector<std::string> names{
    "n_contents", "gamma", "lambda_ue", "lambda_h", "r_ue", "r_h", "alpha", "m_ue", "m_h",
    "epsilon", "max_outer_iters", "inner_tol", "inner_max_iters", "convexifier_scale",
    "region_radius", "n_trials", "rng_seed", "cache_mode"};
  return names;
}

void Experiment::set(std::string_view key, std::string_view value)
{
  if (key == "n_contents")
    scenario.n_contents = parse_integer<int>(key, value);
  else if (key == "gamma")
    scenario.gamma = parse_double(key, value);
  else if (key == "lambda_ue")
    scenario.lambda_ue = parse_double(key, value);
  else if (key == "lambda_h")
    scenario.lambda_h = parse_double(key, value);
  else if (key == "r_ue")
    scenario.r_ue = parse_double(key, value);
  else if (key == "r_h")
    scenario.r_h = parse_double(key, value);
  else if (key == "alpha")
    scenario.alpha = parse_double(key, value);
  else if (key == "m_ue")
    scenario.m_ue = parse_integer<int>(key, value);
  else if (key == "m_h")
    scenario.m_h = parse_integer<int>(key, value);
  else if (key == "epsilon")
    dc.epsilon = parse_double(key, value);
  else if (key == "max_outer_iters")
    dc.max_outer_iters = parse_integer<int>(key, value);
  else if (key == "inner_tol")
    dc.inner_tol = parse_double(key, value);
  else if (key == "inner_max_iters")
    dc.inner_max_iters = parse_integer<int>(key, value);
  else if (key == "convexifier_scale")
    dc.convexifier_scale = parse_double(key, value);
  else if (key == "region_radius")
    sim.region_radius = parse_double(key, value);
  else if (key == "n_trials")
    sim.n_trials = parse_integer<long long>(key, value);
  else if (key == "rng_seed")
    sim.rng_seed = parse_integer<std::uint64_t>(key, value);
  else if (key == "cache_mode")
    sim.cache_mode = parse_cache_mode(trim(value));
  else
    throw std::invalid_argument("unknown key '" + std::string(key) + "'");
}

Experiment parse_experiment(std::istream& in)
{
  Experiment exp;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view view = line;
    if (const auto hash = view.find('#'); hash != std::string_view::npos)
      view = view.substr(0, hash);
    view = trim(view);
    if (view.empty())
      continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos)
      throw std::invalid_argument("line " + std::to_string(lineno) + ": expected key = value");
    try {
      exp.set(trim(view.substr(0, eq)), trim(view.substr(eq + 1)));
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return exp;
}

Experiment load_experiment(const std::string& path)
{
  std::ifstream in(path);
  if (!in)
    throw std::invalid_argument("cannot open config file '" + path + "'");
  return parse_experiment(in);
}

std::string_view to_string(Scheme s)
{
  switch (s) {
    case Scheme::dc:
      return "dc";
    case Scheme::popular:
      return "popular";
    case Scheme::even:
      return "even";
    case Scheme::nonjoint:
      return "nonjoint";
  }
  return "unknown";
}

Scheme parse_scheme(std::string_view text)
{
  for (Scheme s : kSchemeOrder)
    if (to_string(s) == text)
      return s;
  throw std::invalid_argument("unknown scheme '" + std::string(text) + "'");
}

std::vector<Scheme> parse_schemes(std::string_view text)
{
  std::vector<Scheme> picked;
  for (std::string_view part : split(text, ','))
    picked.push_back(parse_scheme(part));
  std::vector<Scheme> ordered;
  for (Scheme s : kSchemeOrder)
    if (std::find(picked.begin(), picked.end(), s) != picked.end())
      ordered.push_back(s);
  return ordered;
}

std::string_view to_string(SweepParameter p)
{
  switch (p) {
    case SweepParameter::lambda_h:
      return "lambda_h";
    case SweepParameter::lambda_ue:
      return "lambda_ue";
    case SweepParameter::alpha:
      return "alpha";
    case SweepParameter::gamma:
      return "gamma";
    case SweepParameter::n_contents:
      return "n_contents";
  }
  return "unknown";
}

SweepParameter parse_sweep_parameter(std::string_view text)
{
  for (auto p : {SweepParameter::lambda_h, SweepParameter::lambda_ue, SweepParameter::alpha,
                 SweepParameter::gamma, SweepParameter::n_contents})
    if (to_string(p) == text)
      return p;
  throw std::invalid_argument("unknown sweep parameter '" + std::string(text) + "'");
}

std::vector<double> parse_grid(std::string_view text)
{
  text = trim(text);
  if (text.empty())
    throw std::invalid_argument("grid is empty");

  std::vector<double> grid;
  if (text.find(':') != std::string_view::npos) {
    const auto parts = split(text, ':');
    if (parts.size() != 3)
      throw std::invalid_argument("grid range must be start:step:count");
    const double start = parse_double("grid start", parts[0]);
    const double step = parse_double("grid step", parts[1]);
    const int count = parse_integer<int>("grid count", parts[2]);
    if (count < 1)
      throw std::invalid_argument("grid count must be positive");
    for (int k = 0; k < count; ++k)
      grid.push_back(start + k * step);
  } else {
    for (std::string_view part : split(text, ','))
      grid.push_back(parse_double("grid value", part));
  }
  for (std::size_t k = 1; k < grid.size(); ++k)
    if (!(grid[k] > grid[k - 1]))
      throw std::invalid_argument("grid must be strictly increasing");
  return grid;
}

ScenarioConfig with_parameter(const ScenarioConfig& base, SweepParameter p, double value)
{
  ScenarioConfig cfg = base;
  switch (p) {
    case SweepParameter::lambda_h:
      cfg.lambda_h = value;
      break;
    case SweepParameter::lambda_ue:
      cfg.lambda_ue = value;
      break;
    case SweepParameter::alpha:
      cfg.alpha = value;
      break;
    case SweepParameter::gamma:
      cfg.gamma = value;
      break;
    case SweepParameter::n_contents:
      if (value != std::floor(value))
        throw std::invalid_argument("n_contents grid values must be integers");
      cfg.n_contents = static_cast<int>(value);
      break;
  }
  cfg.validate();
  return cfg;
}

SchemeOutcome evaluate_scheme(const ScenarioConfig& cfg, const Popularity& q, Scheme scheme,
                              const DcSettings& dc)
{
  SchemeOutcome out;
  switch (scheme) {
    case Scheme::dc: {
      DcResult r = dc_optimize(cfg, q, dc);
      out.placement = std::move(r.placement);
      out.iterations = r.trace.outer_iterations();
      out.converged = r.trace.converged;
      break;
    }
    case Scheme::popular:
      out.placement = popular_cache(cfg);
      break;
    case Scheme::even:
      out.placement = even_cache(cfg);
      break;
    case Scheme::nonjoint:
      out.placement = non_joint(cfg, q).placement;
      break;
  }
  out.analytic = total_offload(cfg, q, out.placement);
  return out;
}

std::vector<SweepRow> run_sweep(const Experiment& exp, const SweepSpec& spec)
{
  if (spec.grid.empty())
    throw std::invalid_argument("sweep grid is empty");
  if (spec.schemes.empty())
    throw std::invalid_argument("sweep needs at least one scheme");

  std::vector<SweepRow> rows;
  for (double value : spec.grid) {
    std::optional<ScenarioConfig> cfg;
    std::optional<Popularity> q;
    std::string point_error;
    try {
      cfg = with_parameter(exp.scenario, spec.parameter, value);
      q = make_zipf(cfg->n_contents, cfg->gamma);
    } catch (const std::exception& e) {
      point_error = e.what();
    }

    for (Scheme scheme : spec.schemes) {
      SweepRow row;
      row.parameter = spec.parameter;
      row.value = value;
      row.scheme = scheme;
      if (!point_error.empty()) {
        row.converged = false;
        row.error = point_error;
        rows.push_back(std::move(row));
        continue;
      }
      try {
        const SchemeOutcome outcome = evaluate_scheme(*cfg, *q, scheme, exp.dc);
        row.analytic = outcome.analytic.total;
        row.iterations = outcome.iterations;
        row.converged = outcome.converged;
        if (outcome.converged == false)
          row.error = "dc iteration limit reached";
        if (spec.validate) {
          const OffloadReport emp = simulate_offloading(*cfg, *q, outcome.placement, exp.sim);
          row.empirical = emp.total;
          row.ci_halfwidth = emp.ci_halfwidth;
        }
      } catch (const std::exception& e) {
        row.converged = false;
        row.error = e.what();
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

std::string format_number(double x)
{
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

namespace {

template <class T>
std::string optional_field(const std::optional<T>& v)
{
  if (!v)
    return {};
  if constexpr (std::is_same_v<T, bool>)
    return *v ? "true" : "false";
  else if constexpr (std::is_integral_v<T>)
    return std::to_string(*v);
  else
    return format_number(*v);
}

} // namespace

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows)
{
  out << "parameter,value,scheme,total_offload_analytic,total_offload_empirical,ci_halfwidth,"
         "iterations,converged\n";
  for (const SweepRow& r : rows) {
    out << to_string(r.parameter) << ',' << format_number(r.value) << ',' << to_string(r.scheme) << ','
        << optional_field(r.analytic) << ',' << optional_field(r.empirical) << ','
        << optional_field(r.ci_halfwidth) << ',' << optional_field(r.iterations) << ','
        << optional_field(r.converged) << '\n';
  }
}

void write_placement_csv(std::ostream& out, const Popularity& q, const std::vector<PlacementRow>& rows)
{
  out << "scheme,content,popularity,p_h,p_ue,offload_analytic,offload_empirical,ci_halfwidth,n_trials\n";
  for (const PlacementRow& r : rows) {
    const std::size_t n = r.placement.size();
    for (std::size_t i = 0; i < n; ++i) {
      out << r.scheme << ',' << i + 1 << ',' << format_number(q[i]) << ','
          << format_number(r.placement.p_h[i]) << ',' << format_number(r.placement.p_ue[i]) << ','
          << format_number(r.analytic.per_content[i]) << ',';
      if (r.empirical)
        out << format_number(r.empirical->per_content[i]);
      out << ",,\n";
    }
    out << r.scheme << ",total,," << format_number(compensated_sum(r.placement.p_h)) << ','
        << format_number(compensated_sum(r.placement.p_ue)) << ',' << format_number(r.analytic.total)
        << ',';
    if (r.empirical)
      out << format_number(r.empirical->total) << ',' << optional_field(r.empirical->ci_halfwidth) << ','
          << optional_field(r.empirical->n_trials);
    else
      out << ",,";
    out << '\n';
  }
}

} // namespace d2dcache
