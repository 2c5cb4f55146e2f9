#pragma once

#include <Eigen/Dense>
#include <functional>

namespace blendcurv {

/// Central-difference configuration. `step` drives first derivatives,
/// `step2` the pure and mixed second derivatives (which feed curvature);
/// `richardson` adds one extrapolation pass at h and h/2.
struct DerivativeStencil {
  int order = 4;        // 2 or 4
  double step = 1e-3;
  double step2 = 5e-3;
  bool richardson = true;
};

using MatrixFn = std::function<Eigen::MatrixXd(const Eigen::VectorXd&)>;
using ScalarFn = std::function<double(const Eigen::VectorXd&)>;

/// d/dx_i of a matrix-valued function, entrywise.
Eigen::MatrixXd partial_first(const MatrixFn& f, const Eigen::VectorXd& x,
                              int i, const DerivativeStencil& st);

/// d²/dx_i dx_j, entrywise. Uses the pure second-derivative stencil on the
/// diagonal and nested first derivatives off it, both at `step2`.
Eigen::MatrixXd partial_second(const MatrixFn& f, const Eigen::VectorXd& x,
                               int i, int j, const DerivativeStencil& st);

/// One-dimensional derivative of a vector-valued curve, used for frame
/// derivatives along immersions.
Eigen::VectorXd curve_derivative(const std::function<Eigen::VectorXd(double)>& f,
                                 double t, const DerivativeStencil& st);

/// Directional derivative of a scalar field along a chart vector.
double directional_derivative(const ScalarFn& f, const Eigen::VectorXd& x,
                              const Eigen::VectorXd& direction,
                              const DerivativeStencil& st);

/// Gradient (covector) of a scalar field by coordinate partials at `step`.
Eigen::VectorXd scalar_gradient(const ScalarFn& f, const Eigen::VectorXd& x,
                                const DerivativeStencil& st);

}  // namespace blendcurv
