#include "htsgd/harness/lower_bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "htsgd/core/errors.hpp"
#include "htsgd/harness/config.hpp"
#include "htsgd/harness/experiment.hpp"
#include "htsgd/optimizers/sgd.hpp"

namespace htsgd {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

StepSchedule power_schedule(double eta, double r) {
  return r == 0.0 ? StepSchedule::constant(eta) : StepSchedule::polynomial(eta, r);
}

}  // namespace

HPConvexReport hp_convex_demo(const HPConvexParams& prm) {
  require(prm.T >= 1, "hp_convex_demo: T must be at least 1");
  require(prm.runs >= 1, "hp_convex_demo: runs must be at least 1");
  const StepSchedule schedule = power_schedule(prm.eta, prm.r);
  std::vector<double> steps(std::size_t(prm.T));
  for (long t = 1; t <= prm.T; ++t) steps[std::size_t(t - 1)] = schedule.at(t);
  const auto gammas = prm.output == OutputStrategy::simple_average ? average_cone(steps)
                                                                   : last_iterate_cone(steps);
  const HPParameters hp = hp_hard_parameters(gammas, prm.alpha, prm.delta);
  const HPHardInstance inst{hp.a, hp.L, prm.alpha};
  const ProblemInstance problem = make_hp_hard(inst, prm.x1);

  HPConvexReport rep;
  rep.params = prm;
  rep.a = hp.a;
  rep.L = hp.L;
  rep.threshold = hp.a * std::abs(prm.x1 - hp_hard_minimizer(inst));

  std::vector<char> hit(std::size_t(prm.runs), 0);
  parallel_for(prm.runs, prm.threads, [&](long k) {
    RandomStream rng(prm.seed, prm.seed + std::uint64_t(k));
    RunOptions opt;
    opt.light_records = true;
    const Trajectory traj = run_sgd(problem, schedule, prm.T, rng, opt);
    if (!traj.completed()) return;
    RandomStream pick = rng.substream(kOutputSelectionTag);
    const Vector out = select_output(traj, prm.output, pick);
    hit[std::size_t(k)] = problem.objective(out) - *problem.constants.F_star >= rep.threshold;
  });
  for (char h : hit) rep.events += h;
  rep.frequency = double(rep.events) / double(prm.runs);
  rep.standard_error = std::sqrt(prm.delta * (1.0 - prm.delta) / double(prm.runs));
  rep.consistent = rep.frequency >= prm.delta - 3.0 * rep.standard_error;
  return rep;
}

SmallStepReport small_step_demo(const SmallStepParams& prm) {
  require(prm.eta > 0.0, "small_step_demo: eta must be positive");
  const StepSchedule schedule = power_schedule(prm.eta, prm.r);
  const auto inst = small_step_instance(prm.eps, prm.Delta1, prm.L, prm.nu,
                                        [&](long t) { return schedule.at(t); },
                                        prm.max_iterations);
  SmallStepReport rep;
  rep.params = prm;
  rep.ramp_index = inst.T_star;
  rep.bound_quarter = prm.Delta1 / (4.0 * prm.eps * prm.eps);
  rep.bound_eighth = prm.Delta1 / (8.0 * prm.eps * prm.eps);

  double x = 0.0;
  double sum = 0.0;
  long t = 1;
  while (std::abs(small_step_derivative(inst, x)) > prm.eps) {
    require(t < prm.max_iterations, "small_step_demo: no eps-stationary iterate within max_iterations");
    const double eta = schedule.at(t);
    x -= eta * small_step_derivative(inst, x);
    sum += eta;
    ++t;
  }
  rep.first_hit = t;
  rep.step_sum = sum;
  rep.exceeds_quarter = sum > rep.bound_quarter;
  rep.exceeds_eighth = sum > rep.bound_eighth;
  return rep;
}

LargeStepReport large_step_demo(const LargeStepParams& prm) {
  require(prm.T >= 1, "large_step_demo: T must be at least 1");
  require(prm.runs >= 1, "large_step_demo: runs must be at least 1");
  const ProblemInstance problem = make_large_step(prm.instance, prm.dim, prm.Delta1);
  const StepSchedule schedule = power_schedule(prm.eta, prm.r);

  LargeStepReport rep;
  rep.params = prm;
  rep.min_tau = kInf;
  for (long t = 1; t <= prm.T; ++t) {
    rep.min_tau = std::min(rep.min_tau, large_step_tau(prm.instance, schedule.at(t)));
  }
  const double bound = std::min(problem.initial_point.norm(), rep.min_tau);

  std::vector<LargeStepRun> runs(std::size_t(prm.runs));
  std::vector<char> aborted(std::size_t(prm.runs), 0);
  parallel_for(prm.runs, prm.threads, [&](long k) {
    RandomStream rng(prm.seed, prm.seed + std::uint64_t(k));
    RunOptions opt;
    opt.light_records = true;
    const Trajectory traj = run_sgd(problem, schedule, prm.T, rng, opt);
    LargeStepRun run;
    run.bound = bound;
    run.min_norm = kInf;
    run.min_grad_norm = kInf;
    for (const auto& x : traj.iterates) run.min_norm = std::min(run.min_norm, x.norm());
    const std::size_t measured = std::min(traj.iterates.size(), std::size_t(prm.T));
    for (std::size_t i = 0; i < measured; ++i) {
      run.min_grad_norm = std::min(run.min_grad_norm, problem.gradient(traj.iterates[i]).norm());
    }
    run.respected = traj.completed() && run.min_norm >= bound;
    aborted[std::size_t(k)] = !traj.completed();
    runs[std::size_t(k)] = run;
  });

  rep.worst_margin = kInf;
  rep.min_grad_norm = kInf;
  for (std::size_t k = 0; k < runs.size(); ++k) {
    rep.aborted += aborted[k];
    rep.violations += !runs[k].respected;
    rep.worst_margin = std::min(rep.worst_margin, runs[k].min_norm - runs[k].bound);
    rep.min_grad_norm = std::min(rep.min_grad_norm, runs[k].min_grad_norm);
  }
  rep.runs = std::move(runs);
  return rep;
}

namespace {

class ParamReader {
 public:
  explicit ParamReader(const std::map<std::string, std::string>& params) : params_(params) {}

  double get(const std::string& key, double fallback) {
    used_.push_back(key);
    auto it = params_.find(key);
    return it == params_.end() ? fallback : parse_double(it->second, key);
  }
  long get(const std::string& key, long fallback) {
    used_.push_back(key);
    auto it = params_.find(key);
    return it == params_.end() ? fallback : parse_long(it->second, key);
  }
  std::string get(const std::string& key, const std::string& fallback) {
    used_.push_back(key);
    auto it = params_.find(key);
    return it == params_.end() ? fallback : it->second;
  }
  void finish() const {
    for (const auto& [k, v] : params_) {
      if (std::find(used_.begin(), used_.end(), k) == used_.end()) {
        throw ConfigError("unknown lower-bound parameter '" + k + "'");
      }
    }
  }

 private:
  const std::map<std::string, std::string>& params_;
  std::vector<std::string> used_;
};

std::uint64_t to_seed(long v) {
  if (v < 0) throw ConfigError("seed must be nonnegative");
  return std::uint64_t(v);
}

std::vector<std::string> row(std::initializer_list<std::string> cells) { return cells; }

}  // namespace

LowerBoundOutput lower_bound_demo(const std::string& kind,
                                  const std::map<std::string, std::string>& params) {
  ParamReader in(params);
  LowerBoundOutput out;
  std::ostringstream s;
  try {
    if (kind == "hp_convex") {
      HPConvexParams p;
      p.delta = in.get("delta", p.delta);
      p.alpha = in.get("alpha", p.alpha);
      p.T = in.get("T", p.T);
      p.eta = in.get("eta", p.eta);
      p.r = in.get("r", p.r);
      p.x1 = in.get("x1", p.x1);
      p.output = parse_output_strategy(in.get("output", std::string("last")));
      p.runs = in.get("runs", p.runs);
      p.seed = to_seed(in.get("seed", long(p.seed)));
      p.threads = int(in.get("threads", long(p.threads)));
      in.finish();
      const HPConvexReport r = hp_convex_demo(p);
      out.table.header = {"delta", "alpha", "T", "runs", "a", "threshold", "events", "frequency",
                          "standard_error", "consistent"};
      out.table.rows.push_back(row({format_number(p.delta), format_number(p.alpha),
                                    std::to_string(p.T), std::to_string(p.runs),
                                    format_number(r.a), format_number(r.threshold),
                                    std::to_string(r.events), format_number(r.frequency),
                                    format_number(r.standard_error),
                                    r.consistent ? "1" : "0"}));
      s << "hp_convex: frequency " << r.frequency << " vs delta " << p.delta << " (se "
        << r.standard_error << ") -> " << (r.consistent ? "consistent" : "below bound") << "\n";
      out.ok = r.consistent;
    } else if (kind == "small_step") {
      SmallStepParams p;
      p.eps = in.get("eps", p.eps);
      p.Delta1 = in.get("Delta1", p.Delta1);
      p.L = in.get("L", p.L);
      p.nu = in.get("nu", p.nu);
      p.eta = in.get("eta", p.eta);
      p.r = in.get("r", p.r);
      p.max_iterations = in.get("max_iterations", p.max_iterations);
      in.finish();
      const SmallStepReport r = small_step_demo(p);
      out.table.header = {"eps", "Delta1", "L", "nu", "eta", "r", "first_hit", "step_sum",
                          "bound_quarter", "bound_eighth", "exceeds_quarter", "exceeds_eighth"};
      out.table.rows.push_back(row({format_number(p.eps), format_number(p.Delta1),
                                    format_number(p.L), format_number(p.nu), format_number(p.eta),
                                    format_number(p.r), std::to_string(r.first_hit),
                                    format_number(r.step_sum), format_number(r.bound_quarter),
                                    format_number(r.bound_eighth),
                                    r.exceeds_quarter ? "1" : "0", r.exceeds_eighth ? "1" : "0"}));
      s << "small_step: first eps-stationary index " << r.first_hit << ", step sum "
        << r.step_sum << " vs Delta1/(4 eps^2) = " << r.bound_quarter
        << " and Delta1/(8 eps^2) = " << r.bound_eighth << "\n";
      out.ok = r.exceeds_quarter;
    } else if (kind == "large_step") {
      LargeStepParams p;
      p.instance.nu = in.get("nu", p.instance.nu);
      p.instance.p = in.get("p", p.instance.p);
      p.instance.sigma = in.get("sigma", p.instance.sigma);
      p.instance.G = in.get("G", p.instance.G);
      p.instance.L_nu = in.get("L", p.instance.L_nu);
      p.Delta1 = in.get("Delta1", p.Delta1);
      p.dim = int(in.get("d", long(p.dim)));
      p.T = in.get("T", p.T);
      p.eta = in.get("eta", p.eta);
      p.r = in.get("r", p.r);
      p.runs = in.get("runs", p.runs);
      p.seed = to_seed(in.get("seed", long(p.seed)));
      p.threads = int(in.get("threads", long(p.threads)));
      in.finish();
      const LargeStepReport r = large_step_demo(p);
      out.table.header = {"run", "min_norm", "bound", "min_grad_norm", "respected"};
      for (std::size_t k = 0; k < r.runs.size(); ++k) {
        const auto& run = r.runs[k];
        out.table.rows.push_back(row({std::to_string(k), format_number(run.min_norm),
                                      format_number(run.bound), format_number(run.min_grad_norm),
                                      run.respected ? "1" : "0"}));
      }
      s << "large_step: " << r.violations << " violations in " << p.runs
        << " runs, min tau " << r.min_tau << ", worst margin " << r.worst_margin
        << ", min gradient norm " << r.min_grad_norm << "\n";
      out.ok = r.violations == 0;
    } else {
      throw ConfigError("unknown lower-bound kind '" + kind +
                        "' (expected hp_convex, small_step or large_step)");
    }
  } catch (const ContractViolation& e) {
    throw ConfigError(e.what());
  }
  out.summary = s.str();
  return out;
}

}  // namespace htsgd
