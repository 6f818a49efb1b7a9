#include "edtc/fit.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace edtc {

namespace {

constexpr int kMaxIterations = 500;
constexpr double kGradientTol = 1e-10;

Eigen::VectorXd residuals(const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                          const Eigen::Vector3d& p) {
  return (p(0) * x.array().pow(p(1)) + p(2) - y.array()).matrix();
}

Eigen::MatrixXd jacobian(const Eigen::VectorXd& x, const Eigen::Vector3d& p) {
  Eigen::MatrixXd j(x.size(), 3);
  const Eigen::ArrayXd xl = x.array().pow(p(1));
  j.col(0) = xl.matrix();
  j.col(1) = (p(0) * xl * x.array().log()).matrix();
  j.col(2).setOnes();
  return j;
}

}  // namespace

PowerLawFit fit_power_law(std::span<const std::pair<double, double>> points) {
  const Eigen::Index n = Eigen::Index(points.size());
  if (n < 4) {
    throw std::invalid_argument("fit_power_law requires at least 4 points");
  }
  Eigen::VectorXd x(n), y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    x(i) = points[i].first;
    y(i) = points[i].second;
    if (!(x(i) > 0.0) || !std::isfinite(x(i)) || !std::isfinite(y(i))) {
      throw std::invalid_argument("fit_power_law requires x > 0 and finite y");
    }
  }

  // Initialization: b0 = min(y); slope/intercept of log(y - b0) vs log(x)
  // over the points where y - b0 is positive.
  const double b0 = y.minCoeff();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double dy = y(i) - b0;
    if (dy <= 0.0) continue;
    const double lx = std::log(x(i)), ly = std::log(dy);
    sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly;
    ++m;
  }
  Eigen::Vector3d p;
  if (m >= 2 && std::abs(m * sxx - sx * sx) > 1e-30) {
    const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    const double intercept = (sy - slope * sx) / m;
    p << std::exp(intercept), slope, b0;
  } else {
    p << (y.maxCoeff() - b0) / std::pow(x.maxCoeff(), 2.0), 2.0, b0;
  }

  Eigen::VectorXd r = residuals(x, y, p);
  double sse = r.squaredNorm();
  double mu = 1e-3;
  PowerLawFit fit;

  int it = 0;
  bool converged = false;
  for (; it < kMaxIterations; ++it) {
    const Eigen::MatrixXd j = jacobian(x, p);
    const Eigen::Vector3d g = j.transpose() * r;
    if (g.cwiseAbs().maxCoeff() < kGradientTol) {
      converged = true;
      break;
    }
    const Eigen::Matrix3d h = j.transpose() * j;
    bool stepped = false;
    while (mu <= 1e12) {
      Eigen::Matrix3d damped = h;
      damped.diagonal() += mu * h.diagonal();
      const Eigen::Vector3d step = damped.ldlt().solve(-g);
      const Eigen::Vector3d pn = p + step;
      const Eigen::VectorXd rn = residuals(x, y, pn);
      const double ssen = rn.squaredNorm();
      if (std::isfinite(ssen) && ssen < sse) {
        p = pn;
        r = rn;
        sse = ssen;
        mu = std::max(mu * 0.3, 1e-12);
        stepped = true;
        break;
      }
      mu *= 10.0;
    }
    if (!stepped) {
      throw FitNotConverged("no downhill step found (damping exhausted)");
    }
  }
  if (!converged) {
    throw FitNotConverged("gradient tolerance not reached in 500 iterations");
  }

  fit.a = p(0);
  fit.lambda = p(1);
  fit.b = p(2);
  fit.residual = sse;
  fit.iterations = it;

  const Eigen::MatrixXd j = jacobian(x, p);
  const Eigen::Matrix3d h = j.transpose() * j;
  const double sigma2 = n > 3 ? sse / double(n - 3) : 0.0;
  fit.covariance = sigma2 * h.inverse();
  return fit;
}

}  // namespace edtc
