#pragma once

#include <span>
#include <vector>

namespace magprop {

/// Least-squares slope of log y against log x. Non-positive entries are skipped.
double loglog_slope(std::span<const double> x, std::span<const double> y);

double median(std::vector<double> v);

/// Boundedness of a scaled quantity over a parameter range: the log-log slope
/// may not exceed max_slope. Families whose values are all below exact_floor
/// count as bounded (they are exact up to round-off).
struct TrendCheck {
  double slope = 0.0;
  double max_value = 0.0;
  bool exact = false;
  bool bounded = false;
};

TrendCheck check_trend(std::span<const double> x, std::span<const double> y, double max_slope = 0.2,
                       double exact_floor = 1e-10);

}  // namespace magprop
