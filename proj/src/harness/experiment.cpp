#include "htsgd/harness/experiment.hpp"

#include <atomic>
#include <cmath>
#include <filesystem>
#include <map>
#include <mutex>
#include <thread>
#include <tuple>

#include "htsgd/measures/criteria.hpp"
#include "htsgd/optimizers/output.hpp"
#include "htsgd/optimizers/sgd.hpp"
#include "htsgd/problems/hard_instances.hpp"
#include "htsgd/problems/l1ridge.hpp"
#include "htsgd/problems/quadratic.hpp"

namespace htsgd {

namespace {

double pget(const ExperimentConfig& cfg, const std::string& name, double fallback) {
  return cfg.raw.get_double("problem." + name, fallback);
}

// Reference solutions depend only on the data, not on alpha or p.
ReferenceSolution cached_reference(const L1RidgeProblem& prob, std::uint64_t seed, int d) {
  using Key = std::tuple<std::uint64_t, int, double, double>;
  static std::mutex mutex;
  static std::map<Key, ReferenceSolution> cache;
  const Key key{seed, d, prob.mu, prob.R};
  {
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  ReferenceSolution ref = solve_reference(prob, 1e-9);
  std::lock_guard<std::mutex> lock(mutex);
  cache.emplace(key, ref);
  return ref;
}

// Schedules that do not need the problem, for instances built from the schedule.
StepSchedule problem_free_schedule(const ExperimentConfig& cfg) {
  if (cfg.schedule == "constant") return StepSchedule::constant(cfg.eta);
  if (cfg.schedule == "polynomial") return StepSchedule::polynomial(cfg.eta, cfg.r);
  if (cfg.schedule == "harmonic_sc" && cfg.harmonic_mu) {
    return StepSchedule::harmonic_sc(*cfg.harmonic_mu, cfg.harmonic_c);
  }
  throw ConfigError("problem '" + cfg.problem_kind + "' needs a constant, polynomial or " +
                    "harmonic_sc schedule with optimizer.mu set");
}

std::uint64_t nonneg_seed(double v) {
  if (!(v >= 0.0) || v != std::floor(v)) throw ConfigError("problem.seed must be a nonnegative integer");
  return std::uint64_t(v);
}

}  // namespace

ProblemInstance build_problem(const ExperimentConfig& cfg) {
  const std::string& kind = cfg.problem_kind;
  try {
    if (kind == "l1ridge") {
      const std::uint64_t seed = nonneg_seed(pget(cfg, "seed", 42));
      const int d = int(pget(cfg, "d", 10));
      const double alpha = pget(cfg, "alpha", 2.0);
      const L1RidgeProblem prob =
          make_l1ridge_data(seed, d, pget(cfg, "mu", 0.0), pget(cfg, "R", 10.0), alpha);
      const double p = pget(cfg, "p", default_moment_order(alpha));
      ProblemInstance inst = make_l1ridge(prob, p, cached_reference(prob, seed, d));
      inst.initial_point = Vector::Constant(d, pget(cfg, "x0", 100.0));
      inst.constants.Delta1 =
          inst.objective(inst.feasible.project(inst.initial_point)) - *inst.constants.F_star;
      return inst;
    }
    if (kind == "hp_hard") {
      const StepSchedule sched = problem_free_schedule(cfg);
      std::vector<double> steps(std::size_t(cfg.T));
      for (long t = 1; t <= cfg.T; ++t) steps[std::size_t(t - 1)] = sched.at(t);
      const std::string cone = cfg.raw.get_or("problem.cone", "last");
      const auto gammas = cone == "average" ? average_cone(steps) : last_iterate_cone(steps);
      const double alpha = pget(cfg, "alpha", 2.0);
      const HPParameters hp = hp_hard_parameters(gammas, alpha, pget(cfg, "delta", 0.125));
      return make_hp_hard(HPHardInstance{hp.a, hp.L, alpha}, pget(cfg, "x1", -1.0));
    }
    if (kind == "small_step") {
      const StepSchedule sched = problem_free_schedule(cfg);
      const auto inst = small_step_instance(pget(cfg, "eps", 0.5), pget(cfg, "Delta1", 10.0),
                                            pget(cfg, "L", 1.0), pget(cfg, "nu", 2.0),
                                            [&](long t) { return sched.at(t); });
      return make_small_step(inst);
    }
    if (kind == "large_step") {
      LargeStepHardInstance inst;
      inst.nu = pget(cfg, "nu", 2.0);
      inst.p = pget(cfg, "p", 2.0);
      inst.sigma = pget(cfg, "sigma", 2.0);
      inst.G = pget(cfg, "G", 4.0);
      inst.L_nu = pget(cfg, "L", 1.0);
      return make_large_step(inst, int(pget(cfg, "d", 3)), pget(cfg, "Delta1", 1.0));
    }
    if (kind == "quadratic") {
      const int d = int(pget(cfg, "d", 1));
      QuadraticProblem q;
      q.H = pget(cfg, "curvature", 1.0) * Matrix::Identity(d, d);
      q.c = Vector::Zero(d);
      const double R = pget(cfg, "R", 0.0);
      q.feasible = R > 0.0 ? FeasibleSet::box(d, R) : FeasibleSet::unconstrained(d);
      const double alpha = pget(cfg, "alpha", 0.0);
      if (alpha > 0.0) q.noise_alpha = alpha;
      ProblemInstance inst = make_quadratic(q, Vector::Constant(d, pget(cfg, "x1", 1.0)));
      if (!inst.constants.x_star) {
        inst.constants.x_star = Vector::Zero(d);
        inst.constants.F_star = 0.0;
      }
      return inst;
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("invalid problem parameters: ") + e.what());
  }
  throw ConfigError("unknown problem kind '" + kind + "'");
}

StepSchedule build_schedule(const ExperimentConfig& cfg, const ProblemInstance& problem) {
  if (cfg.schedule == "harmonic_sc") {
    const double mu = cfg.harmonic_mu ? *cfg.harmonic_mu : problem.constants.mu;
    if (!(mu > 0.0)) {
      throw ConfigError("harmonic_sc schedule needs a positive optimizer.mu or a strongly convex problem");
    }
    return StepSchedule::harmonic_sc(mu, cfg.harmonic_c);
  }
  if (cfg.schedule == "tuned_convex") {
    const auto& c = problem.constants;
    if (!c.x_star) throw ConfigError("tuned_convex schedule needs x* of the problem");
    if (!std::isfinite(c.G) || !(c.G > 0.0)) {
      throw ConfigError("tuned_convex schedule needs a finite G (moment order below alpha)");
    }
    const double dist = (problem.feasible.project(problem.initial_point) - *c.x_star).norm();
    return StepSchedule::constant(cfg.tuned_c * tuned_convex_step(dist, c.G, c.p, cfg.T));
  }
  return problem_free_schedule(cfg);
}

ClipSchedule build_clip(const ExperimentConfig& cfg, const ProblemInstance&) {
  if (cfg.clip == "constant") return ClipSchedule::constant(cfg.clip_lambda);
  double q;
  if (cfg.clip_q) {
    q = *cfg.clip_q;
  } else {
    if (!cfg.raw.has("problem.alpha")) {
      throw ConfigError("optimizer.clip_q = auto needs problem.alpha");
    }
    q = cfg.raw.get_double("problem.alpha", 2.0) - 1.0;
  }
  return ClipSchedule::polynomial(cfg.clip_lambda, q);
}

Trajectory run_configured(const ExperimentConfig& cfg, const ProblemInstance& problem,
                          const StepSchedule& schedule, RandomStream& rng) {
  RunOptions opt;
  opt.light_records = true;
  if (cfg.method == "sgd") return run_sgd(problem, schedule, cfg.T, rng, opt);
  if (cfg.method == "clip_sgd") {
    return run_clip_sgd(problem, schedule, build_clip(cfg, problem), cfg.T, rng, opt);
  }
  if (cfg.method == "minibatch_sgd") {
    return run_minibatch_sgd(problem, schedule, cfg.batch, cfg.T, rng, opt);
  }
  if (cfg.method == "psmd") {
    const double p = cfg.psmd_p ? *cfg.psmd_p : problem.constants.p;
    return run_psmd(problem, schedule, p, cfg.T, rng, opt);
  }
  throw ConfigError("unknown optimizer.method '" + cfg.method + "'");
}

void parallel_for(long n, int threads, const std::function<void(long)>& task) {
  if (threads <= 1 || n <= 1) {
    for (long i = 0; i < n; ++i) task(i);
    return;
  }
  std::atomic<long> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (;;) {
      const long i = next.fetch_add(1);
      if (i >= n) return;
      try {
        task(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(n);
      }
    }
  };
  std::vector<std::thread> pool;
  const int count = int(std::min<long>(threads, n));
  for (int k = 0; k < count; ++k) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

namespace {

struct RunOutcome {
  bool completed = false;
  std::vector<std::vector<double>> values;  // [series][grid]
  double hitting = 0.0;
};

std::vector<long> make_grid(long T, long every) {
  std::vector<long> grid;
  for (long t = every; t <= T; t += every) grid.push_back(t);
  if (grid.empty() || grid.back() != T) grid.push_back(T);
  return grid;
}

// Reported point after `t` steps given running sums over x_1..x_t.
Vector prefix_output(const Trajectory& traj, OutputStrategy o, long t, const Vector& sum,
                     const Vector& wsum, double wtotal, const RandomStream& pick) {
  switch (o) {
    case OutputStrategy::last: return traj.iterates[std::size_t(t)];
    case OutputStrategy::simple_average: return sum / double(t);
    case OutputStrategy::weighted_average: return wsum / wtotal;
    case OutputStrategy::uniform_random: {
      // same draw select_output takes from a fresh selection substream
      long idx = long(pick.uniform_at(0) * double(t));
      if (idx >= t) idx = t - 1;
      return traj.iterates[std::size_t(idx)];
    }
  }
  return traj.iterates[std::size_t(t)];
}

RunOutcome evaluate_run(const ExperimentConfig& cfg, const ProblemInstance& problem,
                        const Trajectory& traj, const std::vector<long>& grid) {
  RunOutcome out;
  out.completed = traj.completed();
  if (!out.completed) return out;
  const std::size_t nser = cfg.outputs.size() * cfg.criteria.size();
  out.values.assign(nser, std::vector<double>(grid.size(), 0.0));

  const RandomStream pick =
      RandomStream(traj.seed, traj.stream_id).substream(kOutputSelectionTag);
  const Vector zero = Vector::Zero(problem.dim);
  Vector sum = zero, wsum = zero;
  double wtotal = 0.0;
  const Criterion& hit_crit = cfg.criteria.front();
  out.hitting = double(cfg.T + 1);
  bool hit = !cfg.hitting_threshold.has_value();

  std::size_t gi = 0;
  for (long t = 1; t <= cfg.T; ++t) {
    const Vector& x = traj.iterates[std::size_t(t - 1)];
    const double eta = traj.records[std::size_t(t - 1)].step;
    sum += x;
    wsum += eta * x;
    wtotal += eta;
    if (!hit) {
      const Vector point = cfg.hitting_output == OutputStrategy::last
                               ? x
                               : prefix_output(traj, cfg.hitting_output, t, sum, wsum, wtotal, pick);
      if (criterion_value(problem, point, hit_crit) <= *cfg.hitting_threshold) {
        out.hitting = double(t);
        hit = true;
      }
    }
    if (gi < grid.size() && grid[gi] == t) {
      for (std::size_t o = 0; o < cfg.outputs.size(); ++o) {
        const Vector point = prefix_output(traj, cfg.outputs[o], t, sum, wsum, wtotal, pick);
        for (std::size_t c = 0; c < cfg.criteria.size(); ++c) {
          out.values[o * cfg.criteria.size() + c][gi] =
              criterion_value(problem, point, cfg.criteria[c]);
        }
      }
      ++gi;
    }
  }
  return out;
}

}  // namespace

RunEnsemble run_ensemble(const ExperimentConfig& cfg, const ProblemInstance& problem) {
  const StepSchedule schedule = build_schedule(cfg, problem);
  const std::vector<long> grid = make_grid(cfg.T, cfg.record_every);
  std::vector<RunOutcome> outcomes(std::size_t(cfg.runs));
  parallel_for(cfg.runs, cfg.threads, [&](long k) {
    RandomStream rng(cfg.seed, cfg.seed + std::uint64_t(k));
    const Trajectory traj = run_configured(cfg, problem, schedule, rng);
    outcomes[std::size_t(k)] = evaluate_run(cfg, problem, traj, grid);
  });

  RunEnsemble ens;
  ens.experiment_id = cfg.id;
  ens.configured_runs = cfg.runs;
  ens.t_grid = grid;
  const std::size_t nser = cfg.outputs.size() * cfg.criteria.size();
  ens.per_run.assign(nser, {});
  for (const auto& o : outcomes) {
    if (!o.completed) {
      ++ens.aborted_runs;
      continue;
    }
    ++ens.completed_runs;
    for (std::size_t s = 0; s < nser; ++s) ens.per_run[s].push_back(o.values[s]);
    if (cfg.hitting_threshold) {
      ens.hitting_times.push_back(o.hitting);
      if (o.hitting > double(cfg.T)) ++ens.censored;
    }
  }
  for (std::size_t o = 0; o < cfg.outputs.size(); ++o) {
    for (std::size_t c = 0; c < cfg.criteria.size(); ++c) {
      const std::size_t s = o * cfg.criteria.size() + c;
      SeriesStats st;
      st.label = to_string(cfg.outputs[o]) + ":" + cfg.criteria[c].name();
      for (std::size_t i = 0; i < grid.size(); ++i) {
        std::vector<double> column;
        column.reserve(ens.per_run[s].size());
        for (const auto& run : ens.per_run[s]) column.push_back(run[i]);
        st.stats.push_back(summarize(std::move(column)));
      }
      ens.series.push_back(std::move(st));
    }
  }
  return ens;
}

RunEnsemble run_experiment(const ExperimentConfig& cfg) {
  return run_ensemble(cfg, build_problem(cfg));
}

CsvTable ensemble_table(const RunEnsemble& ens, const std::string& label_prefix) {
  CsvTable table;
  table.header = {"experiment_id", "run_count", "t", "criterion", "mean", "std", "q50", "q90", "q95"};
  for (const auto& s : ens.series) {
    for (std::size_t i = 0; i < ens.t_grid.size(); ++i) {
      const Summary& st = s.stats[i];
      table.rows.push_back({ens.experiment_id, std::to_string(ens.completed_runs),
                            std::to_string(ens.t_grid[i]), label_prefix + s.label,
                            format_number(st.mean), format_number(st.std), format_number(st.q50),
                            format_number(st.q90), format_number(st.q95)});
    }
  }
  return table;
}

SweepResult run_sweep(const ExperimentConfig& cfg) {
  if (!cfg.sweep_param) throw ConfigError("sweep needs sweep.param and sweep.values");
  SweepResult out;
  out.param = *cfg.sweep_param;
  for (const auto& v : cfg.sweep_values) {
    const ExperimentConfig point = with_override(cfg, *cfg.sweep_param, v);
    out.points.push_back({v, run_experiment(point)});
  }
  return out;
}

CsvTable sweep_table(const ExperimentConfig& cfg, const SweepResult& sweep) {
  CsvTable table;
  table.header = {"experiment_id", "run_count", sweep.param, "criterion", "mean", "std", "q50", "q90", "q95"};
  for (const auto& pt : sweep.points) {
    const RunEnsemble& e = pt.ensemble;
    const std::string runs = std::to_string(e.completed_runs);
    for (const auto& s : e.series) {
      const Summary& st = s.stats.back();
      table.rows.push_back({cfg.id, runs, pt.value, s.label, format_number(st.mean),
                            format_number(st.std), format_number(st.q50), format_number(st.q90),
                            format_number(st.q95)});
    }
    if (cfg.hitting_threshold) {
      const Summary h = summarize(e.hitting_times);
      table.rows.push_back({cfg.id, runs, pt.value, "hitting_time", format_number(h.mean),
                            format_number(h.std), format_number(h.q50), format_number(h.q90),
                            format_number(h.q95)});
      const double frac = e.completed_runs ? double(e.censored) / double(e.completed_runs) : 0.0;
      table.rows.push_back({cfg.id, runs, pt.value, "censored_fraction", format_number(frac), "0",
                            format_number(frac), format_number(frac), format_number(frac)});
    }
  }
  return table;
}

namespace {

std::string meta_text(const ExperimentConfig& cfg, const ProblemInstance& problem,
                      const std::vector<std::pair<std::string, const RunEnsemble*>>& ensembles) {
  std::string out = "# resolved configuration\n" + cfg.raw.to_text();
  out += "# problem constants\n";
  const auto& c = problem.constants;
  out += "constants.p = " + format_number(c.p) + "\n";
  out += "constants.G = " + format_number(c.G) + "\n";
  out += "constants.sigma = " + format_number(c.sigma) + "\n";
  out += "constants.mu = " + format_number(c.mu) + "\n";
  if (c.F_star) out += "constants.F_star = " + format_number(*c.F_star) + "\n";
  if (c.Delta1) out += "constants.Delta1 = " + format_number(*c.Delta1) + "\n";
  out += "# run accounting\n";
  for (const auto& [label, e] : ensembles) {
    const std::string tag = label.empty() ? "" : "[" + label + "]";
    out += "runs.configured" + tag + " = " + std::to_string(e->configured_runs) + "\n";
    out += "runs.completed" + tag + " = " + std::to_string(e->completed_runs) + "\n";
    out += "runs.aborted" + tag + " = " + std::to_string(e->aborted_runs) + "\n";
  }
  return out;
}

std::string join_path(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

std::vector<std::pair<std::string, ExperimentConfig>> expand(
    const ExperimentConfig& cfg, const std::optional<std::string>& param,
    const std::vector<std::string>& values) {
  if (!param) return {{"", cfg}};
  std::vector<std::pair<std::string, ExperimentConfig>> out;
  for (const auto& v : values) out.push_back({*param + "=" + v, with_override(cfg, *param, v)});
  return out;
}

std::optional<double> marker(const ExperimentConfig& cfg) {
  if (cfg.plot_marker != "inverse_alpha") return std::nullopt;
  return 1.0 / cfg.raw.get_double("problem.alpha", 2.0);
}

}  // namespace

std::vector<std::string> run_and_emit(const ExperimentConfig& cfg, const std::string& out_dir) {
  if (cfg.sweep_param) throw ConfigError("config has a sweep axis; use the sweep command");
  std::filesystem::create_directories(out_dir);
  std::vector<std::string> written;
  for (const auto& [series_label, scfg] : expand(cfg, cfg.series_param, cfg.series_values)) {
    const std::string stem = cfg.id + (series_label.empty() ? "" : "_" + series_label);
    CsvTable table;
    std::vector<PlotSeries> curves;
    std::vector<RunEnsemble> ensembles;
    std::vector<std::string> labels;
    std::optional<ProblemInstance> first_problem;
    for (const auto& [variant_label, vcfg] : expand(scfg, scfg.variant_param, scfg.variant_values)) {
      const ProblemInstance problem = build_problem(vcfg);
      if (!first_problem) first_problem = problem;
      ensembles.push_back(run_ensemble(vcfg, problem));
      labels.push_back(variant_label);
    }
    for (std::size_t v = 0; v < ensembles.size(); ++v) {
      const std::string prefix = labels[v].empty() ? "" : labels[v] + "|";
      const CsvTable part = ensemble_table(ensembles[v], prefix);
      if (table.header.empty()) table.header = part.header;
      table.rows.insert(table.rows.end(), part.rows.begin(), part.rows.end());
      for (const auto& s : ensembles[v].series) {
        PlotSeries ps;
        ps.label = prefix + s.label;
        for (std::size_t i = 0; i < ensembles[v].t_grid.size(); ++i) {
          ps.x.push_back(double(ensembles[v].t_grid[i]));
          ps.mean.push_back(s.stats[i].mean);
          ps.std.push_back(s.stats[i].std);
        }
        curves.push_back(std::move(ps));
      }
    }
    const std::string csv = join_path(out_dir, stem + ".csv");
    write_csv(csv, table);
    written.push_back(csv);

    std::vector<std::pair<std::string, const RunEnsemble*>> refs;
    for (std::size_t v = 0; v < ensembles.size(); ++v) refs.push_back({labels[v], &ensembles[v]});
    const std::string meta = join_path(out_dir, stem + ".meta");
    write_text(meta, meta_text(scfg, *first_problem, refs));
    written.push_back(meta);

    PlotStyle style;
    style.title = stem;
    style.xlabel = "iteration t";
    style.ylabel = "criterion (mean +- std)";
    style.logx = cfg.plot_logx;
    style.logy = cfg.plot_logy;
    const std::string svg = join_path(out_dir, stem + ".svg");
    write_svg(svg, curves, style);
    written.push_back(svg);
  }
  return written;
}

std::vector<std::string> sweep_and_emit(const ExperimentConfig& cfg, const std::string& out_dir) {
  if (!cfg.sweep_param) throw ConfigError("sweep needs sweep.param and sweep.values");
  std::filesystem::create_directories(out_dir);
  std::vector<std::string> written;
  for (const auto& [series_label, scfg] : expand(cfg, cfg.series_param, cfg.series_values)) {
    const std::string stem = cfg.id + (series_label.empty() ? "" : "_" + series_label);
    const SweepResult sweep = run_sweep(scfg);
    const std::string csv = join_path(out_dir, stem + ".csv");
    write_csv(csv, sweep_table(scfg, sweep));
    written.push_back(csv);

    std::vector<std::pair<std::string, const RunEnsemble*>> refs;
    for (const auto& pt : sweep.points) refs.push_back({sweep.param + "=" + pt.value, &pt.ensemble});
    const std::string meta = join_path(out_dir, stem + ".meta");
    write_text(meta, meta_text(scfg, build_problem(scfg), refs));
    written.push_back(meta);

    std::vector<PlotSeries> curves;
    PlotStyle style;
    style.title = stem;
    style.xlabel = sweep.param;
    style.logx = cfg.plot_logx;
    style.logy = cfg.plot_logy;
    style.vline = marker(scfg);
    if (style.vline) style.vline_label = "1/alpha";
    if (scfg.hitting_threshold) {
      PlotSeries ps;
      ps.label = "median hitting time";
      for (const auto& pt : sweep.points) {
        const double med = median(pt.ensemble.hitting_times);
        ps.x.push_back(parse_double(pt.value, sweep.param));
        ps.mean.push_back(med);
        ps.censored.push_back(med > double(scfg.T));
      }
      style.ylabel = "iterations to threshold (open marker: censored)";
      curves.push_back(std::move(ps));
    } else {
      const std::size_t nser = sweep.points.front().ensemble.series.size();
      for (std::size_t s = 0; s < nser; ++s) {
        PlotSeries ps;
        ps.label = sweep.points.front().ensemble.series[s].label;
        for (const auto& pt : sweep.points) {
          ps.x.push_back(parse_double(pt.value, sweep.param));
          ps.mean.push_back(pt.ensemble.series[s].stats.back().mean);
          ps.std.push_back(pt.ensemble.series[s].stats.back().std);
        }
        curves.push_back(std::move(ps));
      }
      style.ylabel = "criterion at T (mean +- std)";
    }
    const std::string svg = join_path(out_dir, stem + ".svg");
    write_svg(svg, curves, style);
    written.push_back(svg);
  }
  return written;
}

}  // namespace htsgd
