#include "htsgd/harness/slope.hpp"

#include <cmath>
#include <string>

namespace htsgd {

SlopeFit fit_rate_slope(const std::vector<double>& grid, const std::vector<double>& values) {
  if (grid.size() != values.size()) throw FitError("fit_rate_slope: grid and values differ in length");
  SlopeFit fit;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (values[i] > 0.0 && grid[i] > 0.0 && std::isfinite(values[i])) {
      fit.grid.push_back(grid[i]);
      fit.values.push_back(values[i]);
    } else {
      fit.dropped.push_back(grid[i]);
    }
  }
  const std::size_t n = fit.grid.size();
  if (n < 4) {
    throw FitError("fit_rate_slope: need at least 4 positive points, have " + std::to_string(n));
  }
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += std::log(fit.grid[i]);
    my += std::log(fit.values[i]);
  }
  mx /= double(n);
  my /= double(n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = std::log(fit.grid[i]) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(fit.values[i]) - my);
  }
  if (sxx == 0.0) throw FitError("fit_rate_slope: grid points are all equal");
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double rss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = std::log(fit.values[i]) - (fit.intercept + fit.slope * std::log(fit.grid[i]));
    rss += e * e;
  }
  fit.residual = std::sqrt(rss / double(n));
  return fit;
}

}  // namespace htsgd
