#include <cstdio>
#include <filesystem>
#include <optional>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "htsgd/core/errors.hpp"
#include "htsgd/harness/acceptance.hpp"
#include "htsgd/harness/config.hpp"
#include "htsgd/harness/csv.hpp"
#include "htsgd/harness/experiment.hpp"
#include "htsgd/harness/lower_bounds.hpp"

namespace {

enum Exit { kOk = 0, kConfig = 1, kRuntime = 2, kGate = 3 };

struct Globals {
  std::optional<long> seed;
  std::optional<long> runs;
  int threads = 1;
  std::string out_dir = "results";
};

htsgd::ExperimentConfig load(const std::string& path, const Globals& g) {
  htsgd::Config raw = htsgd::Config::load(path);
  if (g.seed) raw.set("run.seed", std::to_string(*g.seed));
  if (g.runs) raw.set("run.runs", std::to_string(*g.runs));
  raw.erase("run.threads");
  htsgd::ExperimentConfig cfg = htsgd::resolve_config(raw);
  cfg.threads = g.threads;
  return cfg;
}

void print_paths(const std::vector<std::string>& paths) {
  for (const auto& p : paths) std::cout << "wrote " << p << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stochastic gradient methods under heavy-tailed noise"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--seed", g.seed, "Base seed (overrides run.seed)");
  app.add_option("--runs", g.runs, "Number of runs (overrides run.runs)");
  app.add_option("--threads", g.threads, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--out-dir", g.out_dir, "Directory for CSV, metadata and plots");

  std::string config_path;
  auto* run = app.add_subcommand("run", "Run an experiment and write its curves");
  run->add_option("config", config_path, "Config file")->required();
  auto* sweep = app.add_subcommand("sweep", "Sweep one parameter and write final-horizon statistics");
  sweep->add_option("config", config_path, "Config file")->required();

  std::string kind;
  std::vector<std::string> params;
  auto* lb = app.add_subcommand("lowerbound", "Lower-bound construction demos");
  lb->add_option("kind", kind, "hp_convex, small_step or large_step")->required();
  lb->add_option("--param", params, "key=value override (repeatable)");

  std::vector<int> only;
  auto* self = app.add_subcommand("selftest", "Run the acceptance suite");
  self->add_option("--only", only, "Criterion ids to run")->delimiter(',');

  auto* keys = app.add_subcommand("keys", "List accepted config keys");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run || *sweep) {
      const htsgd::ExperimentConfig cfg = load(config_path, g);
      print_paths(*run ? htsgd::run_and_emit(cfg, g.out_dir) : htsgd::sweep_and_emit(cfg, g.out_dir));
      return kOk;
    }
    if (*lb) {
      std::map<std::string, std::string> kv;
      for (const auto& p : params) {
        const auto eq = p.find('=');
        if (eq == std::string::npos) throw htsgd::ConfigError("--param expects key=value, got '" + p + "'");
        kv[p.substr(0, eq)] = p.substr(eq + 1);
      }
      if (g.seed) kv["seed"] = std::to_string(*g.seed);
      if (g.runs && kind != "small_step") kv["runs"] = std::to_string(*g.runs);
      if (kind != "small_step") kv["threads"] = std::to_string(g.threads);
      const htsgd::LowerBoundOutput out = htsgd::lower_bound_demo(kind, kv);
      std::cout << out.summary;
      std::filesystem::create_directories(g.out_dir);
      const std::string path = (std::filesystem::path(g.out_dir) / ("lowerbound_" + kind + ".csv")).string();
      htsgd::write_csv(path, out.table);
      std::cout << "wrote " << path << "\n";
      return kOk;
    }
    if (*self) {
      htsgd::AcceptanceOptions opt;
      if (g.seed) opt.seed = std::uint64_t(*g.seed);
      opt.threads = g.threads;
      opt.only = only;
      bool all = true;
      for (int id : opt.only.empty() ? std::vector<int>{1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11} : opt.only) {
        const auto r = htsgd::run_acceptance_criterion(id, opt);
        std::cout << htsgd::format_result(r) << std::endl;
        all = all && r.pass;
      }
      return all ? kOk : kGate;
    }
    if (*keys) {
      for (const auto& k : htsgd::known_config_keys()) std::cout << k << "\n";
      return kOk;
    }
  } catch (const htsgd::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid parameters: " << e.what() << "\n";
    return kConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRuntime;
  }
  return kOk;
}
