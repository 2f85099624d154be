#include "swipt/cli.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <optional>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "swipt/config.hpp"
#include "swipt/csv.hpp"
#include "swipt/harvest.hpp"
#include "swipt/objective.hpp"
#include "swipt/parallel.hpp"
#include "swipt/simulator.hpp"
#include "swipt/solver.hpp"

namespace swipt::cli {

namespace {

using csv::Column;
using csv::Table;

constexpr double per_km2 = 1e6;  // W/m^2 -> W/km^2

struct Options {
  std::string command;
  std::string config_path;
  int jobs = 0;
  std::string format = "csv";
  std::string out_path;
  std::vector<std::string> presets;
  std::vector<std::string> sets;
  std::string trace_out;         // optimize
  std::string replications_out;  // simulate
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Context {
  Options opt;
  config::RunConfig cfg;
  std::uint64_t seed = 0;
  int jobs = 1;
  std::ostream* out;
  std::ostream* err;
};

void emit(const Context& ctx, const Table& t, const std::string& path) {
  std::ofstream file;
  std::ostream* os = ctx.out;
  if (!path.empty()) {
    file.open(path, std::ios::binary);
    if (!file) throw UsageError("cannot write '" + path + "'");
    os = &file;
  }
  if (ctx.opt.format == "human" && path == ctx.opt.out_path) csv::write_human(*os, t);
  else csv::write_csv(*os, t);
}

// ---- shared column groups -------------------------------------------------

void decision_columns(std::vector<Column>& c) {
  c.push_back({"mode", ""});
  c.push_back({"lambda_u", "m^-2"});
  c.push_back({"P", "W"});
  c.push_back({"lambda_b", "m^-2"});
  c.push_back({"split", ""});
}

void add_decision(Table& t, const ScenarioConfig& s) {
  t.add(to_string(s.mode.kind)).add(s.population.lambda_u).add(s.radio.tx_power).add(s.population.lambda_b).add(s.mode.split);
}

void evaluation_columns(std::vector<Column>& c) {
  for (const char* name : {"tau_d", "tau_dI", "tau_u", "tau_uI"}) c.push_back({name, "s/bit"});
  c.push_back({"util_d", ""});
  c.push_back({"util_u", ""});
  c.push_back({"w_d", ""});
  c.push_back({"user_power", "W"});
  c.push_back({"cdf_h", ""});
  c.push_back({"objective", "W/m^2"});
  c.push_back({"power_per_km2", "W/km^2"});
  c.push_back({"slack_c1_dl", ""});
  c.push_back({"slack_c1_ul", ""});
  c.push_back({"slack_c2", "m^-2"});
  c.push_back({"slack_c3", "W"});
  c.push_back({"slack_c4", ""});
  c.push_back({"slack_c5", ""});
  c.push_back({"slack_users_per_bs", ""});
  c.push_back({"feasible", ""});
  c.push_back({"fp_iterations", ""});
}

void add_evaluation(Table& t, const std::optional<objective::Evaluation>& e) {
  if (!e) {
    for (int i = 0; i < 20; ++i) t.blank();
    return;
  }
  const auto& p = e->perf;
  const auto& f = e->feasibility;
  t.add(p.tau_d).add(p.tau_dI).add(p.tau_u).add(p.tau_uI).add(p.util_d).add(p.util_u).add(p.w_d).add(p.user_power);
  t.add(e->cdf_h).add(e->objective).add(e->objective * per_km2);
  t.add(f.c1_dl).add(f.c1_ul).add(f.c2).add(f.c3).add(f.c4).add(f.c5).add(f.users_per_bs);
  t.add(f.feasible).add(p.iterations);
}

solver::GaConfig ga_config(const Context& ctx, int jobs) {
  auto ga = ctx.cfg.ga;
  ga.seed = ctx.seed;
  ga.jobs = jobs;
  return ga;
}

sim::SimConfig sim_config(const Context& ctx, int jobs) {
  auto s = ctx.cfg.sim;
  s.seed = ctx.seed;
  s.jobs = jobs;
  return s;
}

// Network power density measured in simulation: lambda_b [q1 + U_d (q2 + q3 (P - P_min))].
sim::Interval simulated_power(const ValidatedScenario& s, const sim::SimReport& r) {
  const auto& e = s.energy();
  const double slope = e.q2 + e.q3 * (s.radio().tx_power - s.radio().p_min);
  const double lb = s.population().lambda_b * per_km2;
  return {lb * (e.q1 + r.util_d.mean * slope), lb * slope * r.util_d.half_width, r.util_d.samples};
}

// ---- commands -------------------------------------------------------------

int cmd_evaluate(Context& ctx) {
  const auto s = validate(ctx.cfg.scenario);
  const auto e = objective::evaluate(s);
  std::vector<Column> cols;
  decision_columns(cols);
  evaluation_columns(cols);
  Table t(cols);
  t.row();
  add_decision(t, s.config());
  add_evaluation(t, e);
  emit(ctx, t, ctx.opt.out_path);
  return e.feasibility.feasible ? exit_ok : exit_infeasible;
}

void optimization_columns(std::vector<Column>& cols) {
  decision_columns(cols);
  cols.push_back({"fitness", "W/m^2"});
  cols.push_back({"generations", ""});
  cols.push_back({"evaluations", ""});
  cols.push_back({"termination", ""});
  evaluation_columns(cols);
}

void add_optimization(Table& t, const ScenarioConfig& base, const solver::OptimizationResult& r, bool ga) {
  add_decision(t, objective::apply(base, r.best));
  t.add(r.best_fitness);
  if (ga) t.add(r.generations);
  else t.blank();
  t.add(r.evaluations);
  if (ga) t.add(solver::to_string(r.termination));
  else t.blank();
  add_evaluation(t, r.evaluation);
}

int cmd_optimize(Context& ctx) {
  validate(ctx.cfg.scenario);
  const auto r = solver::ga_optimize(ctx.cfg.scenario, ga_config(ctx, ctx.jobs), ctx.cfg.fitness);
  std::vector<Column> cols;
  optimization_columns(cols);
  Table t(cols);
  t.row();
  add_optimization(t, ctx.cfg.scenario, r, true);
  emit(ctx, t, ctx.opt.out_path);
  if (!ctx.opt.trace_out.empty()) {
    Table trace({{"generation", ""}, {"best", "W/m^2"}, {"mean", "W/m^2"}, {"spread", "W/m^2"}});
    for (std::size_t g = 0; g < r.trace.size(); ++g)
      trace.row().add(static_cast<long>(g)).add(r.trace[g].best).add(r.trace[g].mean).add(r.trace[g].spread);
    emit(ctx, trace, ctx.opt.trace_out);
  }
  if (!r.evaluation) {
    *ctx.err << "error: the model failed at every evaluated point\n";
    return exit_nonconvergence;
  }
  return r.feasible ? exit_ok : exit_infeasible;
}

int cmd_grid(Context& ctx) {
  validate(ctx.cfg.scenario);
  const auto& base = ctx.cfg.scenario;
  const auto grid = solver::grid_search(base, ctx.cfg.grid, ctx.cfg.fitness, ctx.jobs);
  std::vector<Column> cols = {{"stage", ""}};
  optimization_columns(cols);
  Table t(cols);
  t.row().add("grid");
  add_optimization(t, base, grid, false);
  auto best = grid;
  if (ctx.cfg.refine_points > 0) {
    const auto refined = solver::refine_around(base, grid.best_gene, ctx.cfg.grid, ctx.cfg.refine_points, 1.0,
                                               ctx.cfg.fitness, ctx.jobs);
    t.row().add("refined");
    add_optimization(t, base, refined, false);
    if (refined.best_fitness < best.best_fitness) best = refined;
  }
  emit(ctx, t, ctx.opt.out_path);
  if (!best.evaluation) return exit_nonconvergence;
  return best.feasible ? exit_ok : exit_infeasible;
}

int cmd_simulate(Context& ctx) {
  const auto s = validate(ctx.cfg.scenario);
  const auto simcfg = sim_config(ctx, ctx.jobs);
  const auto rep = sim::run_sim(s, simcfg);

  std::optional<objective::Evaluation> model;
  std::vector<double> model_cdf(rep.harvest_grid.size(), std::numeric_limits<double>::quiet_NaN());
  try {
    model = objective::evaluate(s);
    const geometry::KernelTable kernel(s.population().lambda_b);
    const auto profile = harvest::build_profile(s, model->perf, kernel);
    for (std::size_t g = 0; g < rep.harvest_grid.size(); ++g) model_cdf[g] = harvest::cdf_h(profile, rep.harvest_grid[g]);
  } catch (const ModelError& e) {
    *ctx.err << "warning: analytic model unavailable: " << e.what() << '\n';
    model.reset();
  }

  std::vector<Column> cols;
  decision_columns(cols);
  cols.push_back({"side", "m"});
  cols.push_back({"replications", ""});
  cols.push_back({"mean_bs", ""});
  cols.push_back({"mean_users", ""});
  cols.push_back({"redraws", ""});
  cols.push_back({"users_per_bs_sim", ""});
  cols.push_back({"users_per_bs_ci", ""});
  const std::vector<std::pair<const char*, const char*>> quantities = {
      {"tau_d", "s/bit"}, {"tau_dI", "s/bit"}, {"tau_u", "s/bit"}, {"tau_uI", "s/bit"}, {"util_d", ""}, {"util_u", ""}};
  for (const auto& [name, unit] : quantities)
    for (const char* suffix : {"_sim", "_ci", "_model"}) cols.push_back({std::string(name) + suffix, unit});
  for (double h : rep.harvest_grid)
    for (const char* suffix : {"_sim", "_ci", "_model"})
      cols.push_back({"cdf_h(" + csv::format_number(h) + " W)" + suffix, ""});
  for (const char* suffix : {"_sim", "_ci", "_model"}) cols.push_back({std::string("power_per_km2") + suffix, "W/km^2"});

  Table t(cols);
  t.row();
  add_decision(t, s.config());
  t.add(rep.side).add(static_cast<long>(rep.replications.size())).add(rep.mean_bs).add(rep.mean_users).add(rep.redraws);
  t.add(rep.users_per_bs.mean).add(rep.users_per_bs.half_width);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  auto triple = [&](const sim::Interval& i, double m) { t.add(i.mean).add(i.half_width).add(m); };
  triple(rep.tau_d, model ? model->perf.tau_d : nan);
  triple(rep.tau_dI, model ? model->perf.tau_dI : nan);
  triple(rep.tau_u, model ? model->perf.tau_u : nan);
  triple(rep.tau_uI, model ? model->perf.tau_uI : nan);
  triple(rep.util_d, model ? model->perf.util_d : nan);
  triple(rep.util_u, model ? model->perf.util_u : nan);
  for (std::size_t g = 0; g < rep.harvest_grid.size(); ++g) triple(rep.cdf[g], model_cdf[g]);
  triple(simulated_power(s, rep), model ? model->objective * per_km2 : nan);
  emit(ctx, t, ctx.opt.out_path);

  if (!ctx.opt.replications_out.empty()) {
    std::vector<Column> rc = {{"replication", ""}, {"bs", ""},          {"users", ""},
                              {"active_iot", ""},  {"redraws", ""},     {"tau_d", "s/bit"},
                              {"tau_dI", "s/bit"}, {"tau_u", "s/bit"},  {"tau_uI", "s/bit"},
                              {"util_d", ""},      {"util_u", ""}};
    for (double h : rep.harvest_grid) rc.push_back({"cdf_h(" + csv::format_number(h) + " W)", ""});
    Table raw(rc);
    for (std::size_t k = 0; k < rep.replications.size(); ++k) {
      const auto& r = rep.replications[k];
      raw.row().add(static_cast<long>(k)).add(r.bs).add(r.users).add(r.active_iot).add(r.redraws);
      raw.add(r.tau_d).add(r.tau_dI).add(r.tau_u).add(r.tau_uI).add(r.util_d).add(r.util_u);
      for (double c : r.cdf) raw.add(c);
    }
    emit(ctx, raw, ctx.opt.replications_out);
  }
  return exit_ok;
}

int cmd_sweep(Context& ctx) {
  const auto& sw = ctx.cfg.sweep;
  config::get(ctx.cfg, sw.key);  // unknown keys fail here, before any work
  if (sw.values.empty()) throw config::ConfigError("sweep: no values (set sweep.values or sweep.range)");
  for (std::size_t i = 0; i < sw.values.size(); ++i) {
    if (!(sw.values[i] > 0)) throw config::ConfigError("sweep: values must be positive");
    if (i > 0 && !(sw.values[i] > sw.values[i - 1])) throw config::ConfigError("sweep: values must be strictly increasing");
  }
  std::string unit;
  for (const auto& k : config::keys())
    if (k.key == sw.key) unit = k.unit;

  const bool simulate = sw.task == config::SweepTask::simulate ||
                        (sw.task == config::SweepTask::optimize && sw.simulate_optimum);
  std::vector<Column> cols = {{"point", ""}, {sw.key, unit}, {"task", ""}, {"status", ""}, {"message", ""}};
  decision_columns(cols);
  cols.push_back({"fitness", "W/m^2"});
  cols.push_back({"generations", ""});
  cols.push_back({"termination", ""});
  evaluation_columns(cols);
  for (const char* name : {"sim_power_per_km2", "sim_power_per_km2_ci"}) cols.push_back({name, "W/km^2"});
  for (const char* name : {"sim_tau_d", "sim_tau_d_ci"}) cols.push_back({name, "s/bit"});
  for (const char* name : {"sim_cdf_h", "sim_cdf_h_ci"}) cols.push_back({name, ""});

  struct Point {
    std::string status = "ok", message;
    ScenarioConfig scenario;
    std::optional<solver::OptimizationResult> opt;
    std::optional<objective::Evaluation> eval;
    std::optional<sim::SimReport> sim;
    std::optional<sim::Interval> sim_power;
  };
  std::vector<Point> points(sw.values.size());
  // Points run concurrently; each runs its own work single-threaded.
  const int outer = std::min<int>(ctx.jobs, static_cast<int>(points.size()));
  const int inner = std::max(1, ctx.jobs / std::max(outer, 1));
  parallel_for(points.size(), outer, [&](std::size_t i) {
    auto& p = points[i];
    try {
      auto cfg = ctx.cfg;
      config::set(cfg, sw.key, csv::format_number(sw.values[i]));
      p.scenario = cfg.scenario;
      validate(p.scenario);
      if (sw.task == config::SweepTask::optimize) {
        p.opt = solver::ga_optimize(p.scenario, ga_config(ctx, inner), cfg.fitness);
        p.scenario = objective::apply(p.scenario, p.opt->best);
        p.eval = p.opt->evaluation;
        if (!p.eval) throw ModelError("the model failed at every evaluated point");
      } else {
        try {
          p.eval = objective::evaluate(validate(p.scenario));
        } catch (const ModelError&) {
          if (sw.task == config::SweepTask::evaluate) throw;
        }
      }
      if (simulate) {
        const auto s = validate(p.scenario);
        auto simcfg = sim_config(ctx, inner);
        p.sim = sim::run_sim(s, simcfg);
        p.sim_power = simulated_power(s, *p.sim);
      }
      if (p.eval && !p.eval->feasibility.feasible) p.status = "infeasible";
    } catch (const std::exception& e) {
      p.status = "error";
      p.message = e.what();
    }
  });

  Table t(cols);
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& p = points[i];
    t.row().add(static_cast<long>(i)).add(sw.values[i]).add(config::to_string(sw.task)).add(p.status).add(p.message);
    add_decision(t, p.scenario);
    if (p.opt) t.add(p.opt->best_fitness).add(p.opt->generations).add(solver::to_string(p.opt->termination));
    else t.blank().blank().blank();
    add_evaluation(t, p.eval);
    if (p.sim) {
      t.add(p.sim_power->mean).add(p.sim_power->half_width);
      t.add(p.sim->tau_d.mean).add(p.sim->tau_d.half_width);
      t.add(p.sim->cdf[0].mean).add(p.sim->cdf[0].half_width);
    } else {
      for (int k = 0; k < 6; ++k) t.blank();
    }
  }
  emit(ctx, t, ctx.opt.out_path);
  return exit_ok;
}

bool uses_randomness(const Context& ctx) {
  const auto& c = ctx.opt.command;
  if (c == "optimize" || c == "simulate") return true;
  if (c == "sweep") return ctx.cfg.sweep.task != config::SweepTask::evaluate || ctx.cfg.sweep.simulate_optimum;
  return false;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Energy-optimal SWIPT cellular network configuration", "swipt-opt"};
  app.require_subcommand(1, 1);
  Options opt;
  std::uint64_t seed_value = 0;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", opt.config_path, "scenario file")->required();
    sub->add_option("--seed", seed_value, "master seed (printed when omitted)");
    sub->add_option("--jobs", opt.jobs, "worker threads (default: all cores)")->check(CLI::PositiveNumber);
    sub->add_option("--format", opt.format, "output format")->check(CLI::IsMember({"csv", "human"}));
    sub->add_option("--out", opt.out_path, "write the main table here instead of stdout");
    sub->add_option("--preset", opt.presets, "named preset(s), applied after the file")->delimiter(',');
    sub->add_option("--set", opt.sets, "key=value override, applied last");
  };
  auto* evaluate = app.add_subcommand("evaluate", "analytic performance, objective and constraint slacks");
  auto* optimize = app.add_subcommand("optimize", "genetic-algorithm optimization");
  auto* grid = app.add_subcommand("grid", "exhaustive grid search with local refinement");
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo validation of the analytic model");
  auto* sweep = app.add_subcommand("sweep", "repeat a task over values of one key");
  for (auto* sub : {evaluate, optimize, grid, simulate, sweep}) add_common(sub);
  optimize->add_option("--trace-out", opt.trace_out, "per-generation fitness trace (CSV)");
  simulate->add_option("--replications-out", opt.replications_out, "per-replication summaries (CSV)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? exit_ok : exit_invalid;
  }
  for (auto* sub : app.get_subcommands()) opt.command = sub->get_name();

  Context ctx{opt, {}, 0, 1, &out, &err};
  try {
    config::load_file(ctx.cfg, opt.config_path);
    for (const auto& p : opt.presets) config::apply_preset(ctx.cfg, p);
    for (const auto& kv : opt.sets) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw UsageError("--set expects key=value, got '" + kv + "'");
      config::set(ctx.cfg, kv.substr(0, eq), kv.substr(eq + 1));
    }
    const auto* seed_opt = app.get_subcommands().front()->get_option("--seed");
    if (seed_opt->count() > 0) ctx.cfg.seed = seed_value;
    if (ctx.cfg.seed) {
      ctx.seed = *ctx.cfg.seed;
    } else {
      std::random_device rd;
      ctx.seed = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
      if (uses_randomness(ctx)) err << "seed: " << ctx.seed << '\n';
    }
    ctx.jobs = opt.jobs > 0 ? opt.jobs : default_jobs();

    if (opt.command == "evaluate") return cmd_evaluate(ctx);
    if (opt.command == "optimize") return cmd_optimize(ctx);
    if (opt.command == "grid") return cmd_grid(ctx);
    if (opt.command == "simulate") return cmd_simulate(ctx);
    return cmd_sweep(ctx);
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return exit_invalid;
  } catch (const config::ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return exit_invalid;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return exit_invalid;
  } catch (const sim::SimConfigError& e) {
    err << "error: " << e.what() << '\n';
    return exit_invalid;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return exit_invalid;
  } catch (const ModelError& e) {
    err << "error: " << e.what() << '\n';
    return exit_nonconvergence;
  }
}

}  // namespace swipt::cli
