#pragma once

// Least-squares rate fits in log-log coordinates.

#include <string>
#include <utility>
#include <vector>

namespace wnls {

enum class RateModel {
  kPurePower,      // y = A x^alpha
  kPowerTimesLog,  // y = A x^alpha |ln x|^beta, beta fixed by the caller
};

struct RateFit {
  std::vector<std::pair<double, double>> points;
  RateModel model = RateModel::kPurePower;
  double beta = 0.0;
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;  // 1 - SS_res / SS_tot of ln y
};

std::string to_string(RateModel model);

/// Needs >= 2 points with positive coordinates (and x != 1 for the log model).
/// Throws DegenerateFit when all abscissae coincide.
RateFit fit_log_rate(const std::vector<std::pair<double, double>>& points, RateModel model, double beta = 0.0);

/// Ordinary least squares y = intercept + slope x with its R^2.
struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};
LinearFit fit_linear(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace wnls
