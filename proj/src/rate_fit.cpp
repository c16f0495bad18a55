#include "wnls/rate_fit.hpp"

#include <cmath>

#include "wnls/errors.hpp"

namespace wnls {

std::string to_string(RateModel model) {
  return model == RateModel::kPurePower ? "pure-power" : "power-times-log";
}

LinearFit fit_linear(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw DegenerateFit("linear fit needs >= 2 paired points");
  const double m = static_cast<double>(x.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= m;
  my /= m;
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) throw DegenerateFit("all abscissae are equal");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  // A perfect fit of constant data counts as R^2 = 1.
  fit.r_squared = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  return fit;
}

RateFit fit_log_rate(const std::vector<std::pair<double, double>>& points, RateModel model, double beta) {
  if (points.size() < 2) throw DegenerateFit("rate fit needs at least 2 points");
  std::vector<double> lx;
  std::vector<double> ly;
  std::vector<double> raw;
  for (const auto& [x, y] : points) {
    if (!(x > 0.0) || !(y > 0.0)) throw DegenerateFit("rate fit needs positive abscissae and ordinates");
    double yy = y;
    if (model == RateModel::kPowerTimesLog) {
      const double log_factor = std::abs(std::log(x));
      if (log_factor == 0.0) throw DegenerateFit("power-times-log model is undefined at x = 1");
      yy /= std::pow(log_factor, beta);
    }
    lx.push_back(std::log(x));
    ly.push_back(std::log(yy));
    raw.push_back(std::log(y));
  }
  const auto line = fit_linear(lx, ly);
  RateFit fit;
  fit.points = points;
  fit.model = model;
  fit.beta = model == RateModel::kPowerTimesLog ? beta : 0.0;
  fit.slope = line.slope;
  fit.intercept = line.intercept;
  fit.r_squared = line.r_squared;
  if (model == RateModel::kPowerTimesLog) {
    // Explained fraction of the variance of ln y, with the log factor part of the model.
    double mean = 0.0;
    for (double v : raw) mean += v;
    mean /= static_cast<double>(raw.size());
    double ss_tot = 0.0;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < raw.size(); ++i) {
      const double r = ly[i] - (line.intercept + line.slope * lx[i]);
      ss_res += r * r;
      ss_tot += (raw[i] - mean) * (raw[i] - mean);
    }
    fit.r_squared = ss_tot == 0.0 ? (ss_res == 0.0 ? 1.0 : 0.0) : 1.0 - ss_res / ss_tot;
  }
  return fit;
}

}  // namespace wnls
