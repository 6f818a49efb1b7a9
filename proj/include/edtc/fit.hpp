#pragma once

#include <Eigen/Dense>
#include <span>
#include <utility>

#include "edtc/errors.hpp"

namespace edtc {

/// Result of fitting y = a * x^lambda + b.
struct PowerLawFit {
  double a = 0.0;
  double lambda = 0.0;
  double b = 0.0;
  double residual = 0.0;  // sum of squared errors at the returned parameters
  Eigen::Matrix3d covariance = Eigen::Matrix3d::Zero();
  int iterations = 0;
};

/// Damped Gauss-Newton (Levenberg-Marquardt) fit of y = a x^lambda + b.
/// Initialization: b from min(y), (a, lambda) from a log-log regression of
/// y - b against x. Converges when the gradient max-norm drops below 1e-10;
/// throws FitNotConverged after 500 iterations or when no downhill step
/// exists. Requires >= 4 points with x > 0 and finite y.
PowerLawFit fit_power_law(std::span<const std::pair<double, double>> points);

}  // namespace edtc
