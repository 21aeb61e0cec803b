// d2dcache: caching-placement optimisation and validation from the command line.
//
//   d2dcache optimize  --config configs/table1.cfg --out dc.csv
//   d2dcache waterfill --config configs/fig2.cfg
//   d2dcache sweep     --param lambda_h --grid 0:1e-4:9 --schemes dc,popular,even,nonjoint

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "d2dcache/baselines.hpp"
#include "d2dcache/dc_solver.hpp"
#include "d2dcache/experiment.hpp"
#include "d2dcache/extreme_solvers.hpp"
#include "d2dcache/simulator.hpp"

using namespace d2dcache;

namespace {

constexpr int kExitInvalid = 2;
constexpr int kExitNotConverged = 3;

struct Options
{
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<long long> trials;
  std::string param;
  std::string grid;
  std::string schemes;
  bool validate = false;
  std::string cache_mode;
  std::map<std::string, std::string> overrides;
};

Experiment build_experiment(const Options& opt)
{
  Experiment exp = opt.config.empty() ? Experiment{} : load_experiment(opt.config);
  for (const auto& [key, value] : opt.overrides)
    exp.set(key, value);
  if (opt.seed)
    exp.sim.rng_seed = *opt.seed;
  if (opt.trials)
    exp.sim.n_trials = *opt.trials;
  if (!opt.cache_mode.empty())
    exp.sim.cache_mode = parse_cache_mode(opt.cache_mode);
  exp.scenario.validate();
  exp.dc.validate();
  for (const auto& w : exp.scenario.warnings())
    std::cerr << "warning: " << w << '\n';
  return exp;
}

void print_summary(std::ostream& os, const std::string& scheme, const Placement& pl, double total)
{
  os << scheme << " p_h :";
  for (double x : pl.p_h)
    os << ' ' << format_number(x);
  os << '\n' << scheme << " p_ue:";
  for (double x : pl.p_ue)
    os << ' ' << format_number(x);
  os << '\n' << scheme << " total offload: " << format_number(total) << '\n';
}

// CSV goes to --out when given (summary on stdout), otherwise to stdout.
template <class WriteCsv>
void emit(const Options& opt, const std::vector<PlacementRow>& rows, WriteCsv&& write_csv)
{
  if (opt.out.empty()) {
    write_csv(std::cout);
    return;
  }
  for (const auto& r : rows)
    print_summary(std::cout, r.scheme, r.placement, r.empirical ? r.empirical->total : r.analytic.total);
  std::ofstream file(opt.out, std::ios::binary);
  if (!file)
    throw std::invalid_argument("cannot open output file '" + opt.out + "'");
  write_csv(file);
}

int emit_placements(const Options& opt, const Popularity& q, const std::vector<PlacementRow>& rows)
{
  emit(opt, rows, [&](std::ostream& os) { write_placement_csv(os, q, rows); });
  return 0;
}

int cmd_optimize(const Options& opt)
{
  const Experiment exp = build_experiment(opt);
  const Popularity q = make_zipf(exp.scenario.n_contents, exp.scenario.gamma);
  const DcResult r = dc_optimize(exp.scenario, q, exp.dc);
  emit_placements(opt, q, {{"dc", r.placement, total_offload(exp.scenario, q, r.placement), {}}});
  if (!r.trace.converged) {
    std::cerr << "error: dc iteration did not converge within " << exp.dc.max_outer_iters
              << " outer iterations\n";
    return kExitNotConverged;
  }
  return 0;
}

int cmd_waterfill(const Options& opt)
{
  const Experiment exp = build_experiment(opt);
  const Popularity q = make_zipf(exp.scenario.n_contents, exp.scenario.gamma);
  const WaterfillSolution w = waterfill(exp.scenario, q);
  Placement pl = Placement::zeros(q.size());
  pl.p_h = w.p_h;
  if (!opt.out.empty())
    std::cout << "water level beta: " << format_number(w.beta) << '\n';
  return emit_placements(opt, q, {{"waterfill", pl, total_offload(exp.scenario, q, pl), {}}});
}

int cmd_usertier(const Options& opt)
{
  const Experiment exp = build_experiment(opt);
  const Popularity q = make_zipf(exp.scenario.n_contents, exp.scenario.gamma);
  const UserTierSolution u = usertier_solve(exp.scenario, q);
  if (u.degenerate)
    std::cerr << "warning: alpha = 0, user tier does not affect offloading; even placement returned\n";
  return emit_placements(opt, q,
                         {{"usertier", u.placement, total_offload(exp.scenario, q, u.placement), {}}});
}

std::vector<Scheme> schemes_or(const Options& opt, std::vector<Scheme> fallback)
{
  return opt.schemes.empty() ? fallback : parse_schemes(opt.schemes);
}

int cmd_baseline(const Options& opt)
{
  const Experiment exp = build_experiment(opt);
  const Popularity q = make_zipf(exp.scenario.n_contents, exp.scenario.gamma);
  std::vector<PlacementRow> rows;
  for (Scheme s : schemes_or(opt, {Scheme::popular, Scheme::even, Scheme::nonjoint})) {
    SchemeOutcome o = evaluate_scheme(exp.scenario, q, s, exp.dc);
    rows.push_back({std::string(to_string(s)), std::move(o.placement), std::move(o.analytic), {}});
  }
  return emit_placements(opt, q, rows);
}

int cmd_simulate(const Options& opt)
{
  const Experiment exp = build_experiment(opt);
  const Popularity q = make_zipf(exp.scenario.n_contents, exp.scenario.gamma);
  std::vector<PlacementRow> rows;
  int status = 0;
  for (Scheme s : schemes_or(opt, {Scheme::dc, Scheme::popular, Scheme::even, Scheme::nonjoint})) {
    SchemeOutcome o = evaluate_scheme(exp.scenario, q, s, exp.dc);
    if (o.converged == false)
      status = kExitNotConverged;
    OffloadReport emp = simulate_offloading(exp.scenario, q, o.placement, exp.sim);
    rows.push_back({std::string(to_string(s)), std::move(o.placement), std::move(o.analytic), std::move(emp)});
  }
  emit_placements(opt, q, rows);
  if (status != 0)
    std::cerr << "error: dc iteration did not converge\n";
  return status;
}

int cmd_sweep(const Options& opt)
{
  const Experiment exp = build_experiment(opt);
  if (opt.param.empty())
    throw std::invalid_argument("sweep requires --param");
  SweepSpec spec;
  spec.parameter = parse_sweep_parameter(opt.param);
  spec.grid = parse_grid(opt.grid);
  if (!opt.schemes.empty())
    spec.schemes = parse_schemes(opt.schemes);
  spec.validate = opt.validate;

  const std::vector<SweepRow> rows = run_sweep(exp, spec);
  bool failed = false;
  for (const SweepRow& r : rows) {
    if (!r.error.empty()) {
      failed = true;
      std::cerr << "warning: " << to_string(r.parameter) << '=' << format_number(r.value) << ' '
                << to_string(r.scheme) << ": " << r.error << '\n';
    }
  }
  auto write = [&](std::ostream& os) { write_sweep_csv(os, rows); };
  if (opt.out.empty()) {
    write(std::cout);
  } else {
    std::ofstream file(opt.out, std::ios::binary);
    if (!file)
      throw std::invalid_argument("cannot open output file '" + opt.out + "'");
    write(file);
    std::cout << "wrote " << rows.size() << " rows to " << opt.out << '\n';
  }
  return failed ? kExitNotConverged : 0;
}

} // namespace

int main(int argc, char** argv)
{
  CLI::App app{"Optimal caching placement for D2D-assisted two-tier wireless caching networks"};
  app.require_subcommand(1);
  app.fallthrough();

  Options opt;
  app.add_option("--config", opt.config, "Experiment manifest (key = value)")->check(CLI::ExistingFile);
  app.add_option("--out", opt.out, "Output CSV path (stdout when omitted)");
  app.add_option("--seed", opt.seed, "Monte Carlo seed (rng_seed)");
  app.add_option("--trials", opt.trials, "Monte Carlo trials (n_trials)");
  app.add_option("--param", opt.param, "Sweep parameter: lambda_h, lambda_ue, alpha, gamma, n_contents");
  app.add_option("--grid", opt.grid, "Sweep grid: start:step:count or a comma list");
  app.add_option("--schemes", opt.schemes, "Comma list of dc, popular, even, nonjoint");
  app.add_flag("--validate", opt.validate, "Also run the Monte Carlo simulator at every sweep point");
  app.add_option("--cache-mode", opt.cache_mode, "independent or capacity-exact");

  std::map<std::string, std::string> raw;
  for (const std::string& key : Experiment::keys())
    app.add_option("--" + key, raw[key], "Override manifest key " + key);

  auto* optimize = app.add_subcommand("optimize", "Joint placement by DC programming");
  auto* waterfill_cmd = app.add_subcommand("waterfill", "Helper-only placement by water-filling");
  auto* usertier = app.add_subcommand("usertier", "User-only optimal placement");
  auto* baseline = app.add_subcommand("baseline", "Popular, even and non-joint placements");
  auto* simulate_cmd = app.add_subcommand("simulate", "Monte Carlo validation of placements");
  auto* sweep = app.add_subcommand("sweep", "Sweep one parameter across schemes");

  CLI11_PARSE(app, argc, argv);

  for (const std::string& key : Experiment::keys())
    if (app.count("--" + key) > 0)
      opt.overrides[key] = raw[key];

  try {
    if (*optimize)
      return cmd_optimize(opt);
    if (*waterfill_cmd)
      return cmd_waterfill(opt);
    if (*usertier)
      return cmd_usertier(opt);
    if (*baseline)
      return cmd_baseline(opt);
    if (*simulate_cmd)
      return cmd_simulate(opt);
    if (*sweep)
      return cmd_sweep(opt);
  } catch (const DcDescentError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNotConverged;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  }
  return kExitInvalid;
}
