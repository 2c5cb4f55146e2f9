#pragma once

#include <Eigen/Dense>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace blendcurv {

/// Raised when a numerical step degenerates (singular solve, non-finite
/// values, failed internal cross-check).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A single coordinate chart: per-coordinate closed interval, with
/// coordinates optionally identified modulo the interval length.
class Chart {
 public:
  Chart(Eigen::VectorXd lo, Eigen::VectorXd hi, std::vector<bool> periodic);

  int dim() const { return static_cast<int>(lo_.size()); }
  double lo(int i) const { return lo_[i]; }
  double hi(int i) const { return hi_[i]; }
  double length(int i) const { return hi_[i] - lo_[i]; }
  bool periodic(int i) const { return periodic_[i]; }

  /// Wraps periodic coordinates into [lo, hi); leaves the rest untouched.
  Eigen::VectorXd canonicalize(Eigen::VectorXd coords) const;

  /// True when every non-periodic coordinate lies inside its interval
  /// (periodic coordinates are always in-domain after wrapping).
  bool contains(const Eigen::VectorXd& coords) const;

  bool same_as(const Chart& other) const;

 private:
  Eigen::VectorXd lo_, hi_;
  std::vector<bool> periodic_;
};

using ChartPtr = std::shared_ptr<const Chart>;

ChartPtr make_chart(Eigen::VectorXd lo, Eigen::VectorXd hi,
                    std::vector<bool> periodic);

/// A point of the chart domain. Periodic coordinates are stored canonically.
struct Point {
  Point(ChartPtr chart_in, Eigen::VectorXd coords_in);

  ChartPtr chart;
  Eigen::VectorXd coords;
};

/// A tangent vector at a base point, in chart components.
struct TangentVector {
  TangentVector(Point base_in, Eigen::VectorXd components_in);

  Point base;
  Eigen::VectorXd components;
};

/// Smooth fields are functions of raw chart coordinates so that finite
/// differencing can sample freely across periodic seams.
using ScalarField = std::function<double(const Eigen::VectorXd&)>;
using VectorField = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

/// The constant-component extension of a tangent vector.
VectorField constant_field(const Eigen::VectorXd& components);

}  // namespace blendcurv
