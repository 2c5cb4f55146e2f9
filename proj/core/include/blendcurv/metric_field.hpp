#pragma once

#include "blendcurv/chart.hpp"
#include "blendcurv/stencil.hpp"

namespace blendcurv {

/// A smooth field of symmetric positive-definite matrices over a chart.
/// `eval` takes raw chart coordinates; the catalog fields extend smoothly
/// past periodic seams and the declared boundary margins.
struct MetricField {
  ChartPtr chart;
  MatrixFn eval;
  std::string label;
};

MetricField make_metric_field(ChartPtr chart, MatrixFn eval, std::string label);

/// Evaluates the metric at p, symmetrized as (M + Mᵀ)/2. Throws
/// std::domain_error outside the chart domain and NumericalError on
/// non-finite entries.
Eigen::MatrixXd metric_at(const MetricField& g, const Point& p);

/// Unchecked evaluation at raw coordinates (for finite differencing).
Eigen::MatrixXd metric_raw(const MetricField& g, const Eigen::VectorXd& coords);

/// uᵀ G v with G = metric_at(g, p).
double inner(const Eigen::MatrixXd& G, const Eigen::VectorXd& u,
             const Eigen::VectorXd& v);

/// True when the smallest eigenvalue at p is positive.
bool positive_definite_at(const MetricField& g, const Point& p);

/// Constant c·g and pointwise rescalings used by tests and deformations.
MetricField scale_metric(const MetricField& g, double c);

}  // namespace blendcurv
