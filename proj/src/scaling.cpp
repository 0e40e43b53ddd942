#include "nodalab/scaling.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nodalab {

std::string to_string(ScalingModel model) {
  return model == ScalingModel::pure_power ? "pure_power" : "power_with_log_correction";
}

ScalingModel scaling_model_from_string(const std::string& name) {
  if (name == "pure_power") return ScalingModel::pure_power;
  if (name == "power_with_log_correction") return ScalingModel::power_with_log_correction;
  throw std::invalid_argument("unknown scaling model: " + name);
}

ScalingFit fit_scaling(const std::vector<double>& lambdas, const std::vector<double>& values,
                       ScalingModel model, int dimension) {
  if (lambdas.size() != values.size()) throw std::invalid_argument("lambda and value counts differ");
  if (lambdas.size() < 4) throw std::invalid_argument("scaling fit needs at least 4 points");
  ScalingFit fit;
  fit.model = model;
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    const double lam = lambdas[i];
    if (!(values[i] > 0.0)) throw std::invalid_argument("scaling fit needs positive values");
    if (!(lam > 0.0)) throw std::invalid_argument("scaling fit needs positive lambda");
    double x = std::log(lam);
    if (model == ScalingModel::power_with_log_correction) {
      if (!(lam > 1.0)) throw std::invalid_argument("log-corrected fit needs lambda > 1");
      x = 0.5 * std::log(lam) + 0.5 * (dimension - 2) * std::log(std::log(lam));
    }
    fit.x.push_back(x);
    fit.y.push_back(std::log(values[i]));
  }
  const double n = static_cast<double>(fit.x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < fit.x.size(); ++i) {
    mx += fit.x[i];
    my += fit.y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < fit.x.size(); ++i) {
    sxx += (fit.x[i] - mx) * (fit.x[i] - mx);
    sxy += (fit.x[i] - mx) * (fit.y[i] - my);
    syy += (fit.y[i] - my) * (fit.y[i] - my);
  }
  if (!(sxx > 1e-24 * std::max(1.0, mx * mx))) throw std::invalid_argument("degenerate design: all lambda equal");
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < fit.x.size(); ++i) {
    const double e = fit.y[i] - (fit.intercept + fit.slope * fit.x[i]);
    ss_res += e * e;
  }
  fit.r_squared = syy > 0.0 ? std::clamp(1.0 - ss_res / syy, 0.0, 1.0) : 1.0;
  return fit;
}

}  // namespace nodalab
