#include "htsgd/harness/statistics.hpp"

#include <algorithm>
#include <cmath>

#include "htsgd/core/errors.hpp"

namespace htsgd {

double quantile_sorted(const std::vector<double>& sorted, double q) {
  require(!sorted.empty(), "quantile: empty sample");
  require(q >= 0.0 && q <= 1.0, "quantile: q must lie in [0, 1]");
  const double h = (double(sorted.size()) - 1.0) * q;
  const auto lo = std::size_t(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - double(lo)) * (sorted[hi] - sorted[lo]);
}

Summary summarize(std::vector<double> values) {
  Summary s;
  s.count = long(values.size());
  if (values.empty()) return s;
  double mean = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) mean += (values[i] - mean) / double(i + 1);
  s.mean = mean;
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    s.std = std::sqrt(ss / double(values.size() - 1));
  }
  std::sort(values.begin(), values.end());
  s.q50 = quantile_sorted(values, 0.5);
  s.q90 = quantile_sorted(values, 0.9);
  s.q95 = quantile_sorted(values, 0.95);
  return s;
}

double standard_error(const std::vector<double>& values) {
  if (values.size() < 2) return 0.0;
  return summarize(values).std / std::sqrt(double(values.size()));
}

double median(std::vector<double> values) {
  require(!values.empty(), "median: empty sample");
  std::sort(values.begin(), values.end());
  return quantile_sorted(values, 0.5);
}

}  // namespace htsgd
