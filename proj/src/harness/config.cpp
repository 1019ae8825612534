#include "htsgd/harness/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "htsgd/harness/csv.hpp"

namespace htsgd {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

const std::set<std::string> kGeneralKeys = {
    "experiment.id",        "experiment.description",
    "problem.kind",
    "optimizer.method",     "optimizer.schedule",    "optimizer.eta",
    "optimizer.r",          "optimizer.c",           "optimizer.mu",
    "optimizer.clip",       "optimizer.clip_lambda", "optimizer.clip_q",
    "optimizer.batch",      "optimizer.p",
    "run.T",                "run.runs",              "run.seed",
    "run.threads",          "run.record_every",
    "criteria",             "outputs",
    "sweep.param",          "sweep.values",
    "series.param",         "series.values",
    "variant.param",        "variant.values",
    "hitting.threshold",    "hitting.output",
    "plot.logx",            "plot.logy",             "plot.marker",
};

const std::map<std::string, std::set<std::string>> kProblemKeys = {
    {"l1ridge", {"seed", "d", "mu", "R", "alpha", "p", "x0"}},
    {"hp_hard", {"alpha", "delta", "x1", "cone"}},
    {"small_step", {"eps", "Delta1", "L", "nu"}},
    {"large_step", {"nu", "p", "sigma", "G", "L", "Delta1", "d"}},
    {"quadratic", {"d", "curvature", "alpha", "x1", "R"}},
};

const std::set<std::string> kMethods = {"sgd", "clip_sgd", "minibatch_sgd", "psmd"};
const std::set<std::string> kSchedules = {"constant", "polynomial", "harmonic_sc", "tuned_convex"};
const std::set<std::string> kClips = {"constant", "polynomial"};

bool is_problem_key(const std::string& key) { return key.rfind("problem.", 0) == 0; }

}  // namespace

Config Config::parse(const std::string& text, const std::string& origin) {
  Config cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key");
    if (cfg.has(key)) {
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": duplicate key '" + key + "'");
    }
    cfg.values_[key] = value;
  }
  return cfg;
}

Config Config::load(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot read config file: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse(ss.str(), path);
}

const std::string& Config::get(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("missing config key '" + key + "'");
  return it->second;
}

std::string Config::get_or(const std::string& key, const std::string& fallback) const {
  auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

double Config::get_double(const std::string& key, double fallback) const {
  return has(key) ? parse_double(get(key), key) : fallback;
}

long Config::get_long(const std::string& key, long fallback) const {
  return has(key) ? parse_long(get(key), key) : fallback;
}

std::string Config::to_text() const {
  std::string out;
  for (const auto& [k, v] : values_) out += k + " = " + v + "\n";
  return out;
}

double parse_double(const std::string& text, const std::string& key) {
  const std::string t = trim(text);
  char* end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (t.empty() || *end != '\0' || !std::isfinite(v)) {
    throw ConfigError("config key '" + key + "': expected a finite number, got '" + text + "'");
  }
  return v;
}

long parse_long(const std::string& text, const std::string& key) {
  const std::string t = trim(text);
  char* end = nullptr;
  const long v = std::strtol(t.c_str(), &end, 10);
  if (t.empty() || *end != '\0') {
    throw ConfigError("config key '" + key + "': expected an integer, got '" + text + "'");
  }
  return v;
}

bool parse_bool(const std::string& text, const std::string& key) {
  const std::string t = trim(text);
  if (t == "true" || t == "1" || t == "yes") return true;
  if (t == "false" || t == "0" || t == "no") return false;
  throw ConfigError("config key '" + key + "': expected true or false, got '" + text + "'");
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  int depth = 0;
  for (char c : text) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (c == ',' && depth == 0) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!trim(cur).empty() || !out.empty()) out.push_back(trim(cur));
  return out;
}

std::vector<std::string> parse_value_grid(const std::string& text, const std::string& key) {
  const std::string t = trim(text);
  if (t.rfind("linspace(", 0) == 0) {
    if (t.back() != ')') throw ConfigError("config key '" + key + "': unterminated linspace");
    const auto args = split_list(t.substr(9, t.size() - 10));
    if (args.size() != 3) {
      throw ConfigError("config key '" + key + "': linspace takes (start, stop, count)");
    }
    const double a = parse_double(args[0], key);
    const double b = parse_double(args[1], key);
    const long n = parse_long(args[2], key);
    if (n < 1) throw ConfigError("config key '" + key + "': linspace count must be positive");
    std::vector<std::string> out;
    for (long i = 0; i < n; ++i) {
      const double v = n == 1 ? a : a + (b - a) * double(i) / double(n - 1);
      out.push_back(format_number(v));
    }
    return out;
  }
  auto out = split_list(t);
  if (out.empty() || std::any_of(out.begin(), out.end(), [](auto& s) { return s.empty(); })) {
    throw ConfigError("config key '" + key + "': empty value grid");
  }
  return out;
}

std::vector<std::string> known_config_keys() {
  std::vector<std::string> keys(kGeneralKeys.begin(), kGeneralKeys.end());
  for (const auto& [kind, ks] : kProblemKeys) {
    for (const auto& k : ks) keys.push_back("problem." + k + "  (" + kind + ")");
  }
  return keys;
}

ExperimentConfig resolve_config(const Config& raw) {
  ExperimentConfig cfg;
  cfg.raw = raw;
  cfg.problem_kind = raw.get_or("problem.kind", "l1ridge");
  const auto pk = kProblemKeys.find(cfg.problem_kind);
  if (pk == kProblemKeys.end()) {
    throw ConfigError("config key 'problem.kind': unknown problem '" + cfg.problem_kind + "'");
  }
  for (const auto& [key, value] : raw.values()) {
    if (kGeneralKeys.count(key)) continue;
    if (is_problem_key(key) && pk->second.count(key.substr(8))) continue;
    throw ConfigError("unknown config key '" + key + "'" +
                      (is_problem_key(key) ? " for problem kind '" + cfg.problem_kind + "'" : ""));
  }

  cfg.id = raw.get_or("experiment.id", "experiment");
  if (cfg.id.empty() || cfg.id.find_first_of("/\\ ") != std::string::npos) {
    throw ConfigError("config key 'experiment.id': must be a non-empty name without spaces or slashes");
  }

  cfg.method = raw.get_or("optimizer.method", "sgd");
  if (!kMethods.count(cfg.method)) {
    throw ConfigError("config key 'optimizer.method': unknown method '" + cfg.method + "'");
  }
  cfg.schedule = raw.get_or("optimizer.schedule", "polynomial");
  if (!kSchedules.count(cfg.schedule)) {
    throw ConfigError("config key 'optimizer.schedule': unknown schedule '" + cfg.schedule + "'");
  }
  cfg.eta = raw.get_double("optimizer.eta", 1.0);
  if (!(cfg.eta > 0.0)) throw ConfigError("config key 'optimizer.eta': must be positive");
  cfg.r = raw.get_double("optimizer.r", 0.5);
  cfg.harmonic_c = raw.get_double("optimizer.c", 1.0);
  cfg.tuned_c = cfg.harmonic_c;
  if (!(cfg.harmonic_c > 0.0)) throw ConfigError("config key 'optimizer.c': must be positive");
  if (raw.has("optimizer.mu")) {
    cfg.harmonic_mu = raw.get_double("optimizer.mu", 1.0);
    if (!(*cfg.harmonic_mu > 0.0)) throw ConfigError("config key 'optimizer.mu': must be positive");
  }
  cfg.clip = raw.get_or("optimizer.clip", "polynomial");
  if (!kClips.count(cfg.clip)) {
    throw ConfigError("config key 'optimizer.clip': unknown clip schedule '" + cfg.clip + "'");
  }
  cfg.clip_lambda = raw.get_double("optimizer.clip_lambda", 1.0);
  if (!(cfg.clip_lambda > 0.0)) {
    throw ConfigError("config key 'optimizer.clip_lambda': must be positive");
  }
  const std::string q = raw.get_or("optimizer.clip_q", "auto");
  if (q != "auto") cfg.clip_q = parse_double(q, "optimizer.clip_q");
  cfg.batch = raw.get_long("optimizer.batch", 1);
  if (cfg.batch < 1) throw ConfigError("config key 'optimizer.batch': must be at least 1");
  if (raw.has("optimizer.p")) {
    cfg.psmd_p = raw.get_double("optimizer.p", 2.0);
    if (!(*cfg.psmd_p > 1.0 && *cfg.psmd_p <= 2.0)) {
      throw ConfigError("config key 'optimizer.p': must lie in (1, 2]");
    }
  }

  cfg.T = raw.get_long("run.T", 1000);
  if (cfg.T < 1) throw ConfigError("config key 'run.T': must be at least 1");
  cfg.runs = raw.get_long("run.runs", 200);
  if (cfg.runs < 1) throw ConfigError("config key 'run.runs': must be at least 1");
  const long seed = raw.get_long("run.seed", 1);
  if (seed < 0) throw ConfigError("config key 'run.seed': must be nonnegative");
  cfg.seed = std::uint64_t(seed);
  cfg.threads = int(raw.get_long("run.threads", 1));
  if (cfg.threads < 1) throw ConfigError("config key 'run.threads': must be at least 1");
  cfg.record_every = raw.get_long("run.record_every", 1);
  if (cfg.record_every < 1) throw ConfigError("config key 'run.record_every': must be at least 1");

  for (const auto& c : split_list(raw.get_or("criteria", "subopt"))) {
    cfg.criteria.push_back(parse_criterion(c));
  }
  if (cfg.criteria.empty()) throw ConfigError("config key 'criteria': empty list");
  for (const auto& o : split_list(raw.get_or("outputs", "last"))) {
    cfg.outputs.push_back(parse_output_strategy(o));
  }
  if (cfg.outputs.empty()) throw ConfigError("config key 'outputs': empty list");

  auto axis = [&](const char* name, std::optional<std::string>& param,
                  std::vector<std::string>& values) {
    const std::string pkey = std::string(name) + ".param";
    const std::string vkey = std::string(name) + ".values";
    if (raw.has(pkey) != raw.has(vkey)) {
      throw ConfigError("config keys '" + pkey + "' and '" + vkey + "' must be given together");
    }
    if (!raw.has(pkey)) return;
    param = raw.get(pkey);
    const bool known = kGeneralKeys.count(*param) ||
                       (is_problem_key(*param) && pk->second.count(param->substr(8)));
    if (!known || param->rfind("sweep.", 0) == 0 || param->rfind("series.", 0) == 0 ||
        param->rfind("variant.", 0) == 0) {
      throw ConfigError("config key '" + pkey + "': cannot vary '" + *param + "'");
    }
    values = parse_value_grid(raw.get(vkey), vkey);
  };
  axis("sweep", cfg.sweep_param, cfg.sweep_values);
  axis("series", cfg.series_param, cfg.series_values);
  axis("variant", cfg.variant_param, cfg.variant_values);

  if (raw.has("hitting.threshold")) cfg.hitting_threshold = raw.get_double("hitting.threshold", 0.0);
  if (raw.has("hitting.output")) {
    cfg.hitting_output = parse_output_strategy(raw.get("hitting.output"));
  }

  if (raw.has("plot.logx")) cfg.plot_logx = parse_bool(raw.get("plot.logx"), "plot.logx");
  if (raw.has("plot.logy")) cfg.plot_logy = parse_bool(raw.get("plot.logy"), "plot.logy");
  cfg.plot_marker = raw.get_or("plot.marker", "none");
  if (cfg.plot_marker != "none" && cfg.plot_marker != "inverse_alpha") {
    throw ConfigError("config key 'plot.marker': expected none or inverse_alpha");
  }

  // validate the problem parameters that are numbers
  for (const auto& [key, value] : raw.values()) {
    if (!is_problem_key(key) || key == "problem.kind" || key == "problem.cone") continue;
    parse_double(value, key);
  }
  if (raw.has("problem.cone")) {
    const auto& c = raw.get("problem.cone");
    if (c != "last" && c != "average") {
      throw ConfigError("config key 'problem.cone': expected last or average");
    }
  }
  return cfg;
}

ExperimentConfig with_override(const ExperimentConfig& cfg, const std::string& key,
                               const std::string& value) {
  Config raw = cfg.raw;
  raw.set(key, value);
  ExperimentConfig out = resolve_config(raw);
  // keep command-line overrides that bypass the raw text
  out.threads = cfg.threads;
  return out;
}

}  // namespace htsgd
