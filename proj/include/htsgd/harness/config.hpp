#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "htsgd/core/errors.hpp"
#include "htsgd/measures/criteria.hpp"
#include "htsgd/optimizers/output.hpp"

namespace htsgd {

/// Flat `key = value` text with dotted keys; `#` starts a comment.
class Config {
 public:
  static Config parse(const std::string& text, const std::string& origin = "<string>");
  static Config load(const std::string& path);

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  const std::string& get(const std::string& key) const;
  std::string get_or(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  long get_long(const std::string& key, long fallback) const;
  void set(const std::string& key, const std::string& value) { values_[key] = value; }
  void erase(const std::string& key) { values_.erase(key); }
  const std::map<std::string, std::string>& values() const { return values_; }

  /// Sorted `key = value` lines.
  std::string to_text() const;

 private:
  std::map<std::string, std::string> values_;
};

double parse_double(const std::string& text, const std::string& key);
long parse_long(const std::string& text, const std::string& key);
bool parse_bool(const std::string& text, const std::string& key);

/// Splits on commas that are not inside parentheses; trims whitespace.
std::vector<std::string> split_list(const std::string& text);

/// "linspace(a,b,n)" or a comma list of values, returned as formatted text.
std::vector<std::string> parse_value_grid(const std::string& text, const std::string& key);

struct ExperimentConfig {
  std::string id = "experiment";

  std::string problem_kind = "l1ridge";

  std::string method = "sgd";
  std::string schedule = "polynomial";
  double eta = 1.0;
  double r = 0.5;
  double harmonic_c = 1.0;
  std::optional<double> harmonic_mu;
  double tuned_c = 1.0;
  std::string clip = "polynomial";
  double clip_lambda = 1.0;
  std::optional<double> clip_q;  // empty means alpha - 1
  long batch = 1;
  std::optional<double> psmd_p;

  long T = 1000;
  long runs = 200;
  std::uint64_t seed = 1;
  int threads = 1;
  long record_every = 1;

  std::vector<Criterion> criteria;
  std::vector<OutputStrategy> outputs;

  std::optional<std::string> sweep_param;
  std::vector<std::string> sweep_values;
  std::optional<std::string> series_param;
  std::vector<std::string> series_values;
  std::optional<std::string> variant_param;
  std::vector<std::string> variant_values;

  std::optional<double> hitting_threshold;
  OutputStrategy hitting_output = OutputStrategy::last;

  bool plot_logx = false;
  bool plot_logy = false;
  std::string plot_marker = "none";

  /// The validated key-value text this was resolved from.
  Config raw;
};

/// Validates every key and value. Throws ConfigError naming the offending key.
ExperimentConfig resolve_config(const Config& raw);

/// Copy of `cfg` with one key replaced and everything re-validated.
ExperimentConfig with_override(const ExperimentConfig& cfg, const std::string& key,
                               const std::string& value);

/// Every key accepted by resolve_config, for documentation and --help.
std::vector<std::string> known_config_keys();

}  // namespace htsgd
