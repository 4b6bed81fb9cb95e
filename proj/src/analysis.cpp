#include "magprop/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "magprop/error.hpp"

namespace magprop {

double loglog_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw Error(ErrorKind::InvalidInput, "slope needs matching x and y");
  double mx = 0.0, my = 0.0;
  int n = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) continue;
    mx += std::log(x[i]);
    my += std::log(y[i]);
    ++n;
  }
  if (n < 2) throw Error(ErrorKind::InvalidInput, "slope needs two positive points");
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) continue;
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  if (sxx == 0.0) throw Error(ErrorKind::InvalidInput, "slope needs distinct x values");
  return sxy / sxx;
}

double median(std::vector<double> v) {
  if (v.empty()) throw Error(ErrorKind::InvalidInput, "median of an empty list");
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

TrendCheck check_trend(std::span<const double> x, std::span<const double> y, double max_slope, double exact_floor) {
  TrendCheck c;
  for (double v : y) c.max_value = std::max(c.max_value, std::abs(v));
  if (c.max_value < exact_floor) {
    c.exact = true;
    c.bounded = true;
    return c;
  }
  c.slope = loglog_slope(x, y);
  c.bounded = std::isfinite(c.max_value) && c.slope <= max_slope;
  return c;
}

}  // namespace magprop
