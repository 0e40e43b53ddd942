#pragma once

#include <string>
#include <vector>

namespace nodalab {

enum class ScalingModel { pure_power, power_with_log_correction };

std::string to_string(ScalingModel model);
ScalingModel scaling_model_from_string(const std::string& name);

/// OLS of log y on a log-λ regressor.
struct ScalingFit {
  ScalingModel model = ScalingModel::pure_power;
  /// Regressor: log λ, or log(λ^{1/2} (log λ)^{(d-2)/2}) for the corrected model.
  std::vector<double> x;
  std::vector<double> y;
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

/// Needs at least 4 pairs, y > 0, and at least two distinct λ; the corrected model needs λ > 1.
ScalingFit fit_scaling(const std::vector<double>& lambdas, const std::vector<double>& values,
                       ScalingModel model = ScalingModel::pure_power, int dimension = 2);

}  // namespace nodalab
