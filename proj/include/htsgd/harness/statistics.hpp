#pragma once

#include <vector>

namespace htsgd {

struct Summary {
  long count = 0;
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation (n - 1); 0 for a single value
  double q50 = 0.0;
  double q90 = 0.0;
  double q95 = 0.0;
};

/// Linear-interpolation quantile of sorted data (Hyndman-Fan type 7).
double quantile_sorted(const std::vector<double>& sorted, double q);

Summary summarize(std::vector<double> values);

/// Standard error of the mean, s / sqrt(n).
double standard_error(const std::vector<double>& values);

double median(std::vector<double> values);

}  // namespace htsgd
