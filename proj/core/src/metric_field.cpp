#include "blendcurv/metric_field.hpp"

namespace blendcurv {

MetricField make_metric_field(ChartPtr chart, MatrixFn eval, std::string label) {
  if (!chart) throw std::invalid_argument("MetricField: null chart");
  if (!eval) throw std::invalid_argument("MetricField: null evaluator");
  return MetricField{std::move(chart), std::move(eval), std::move(label)};
}

Eigen::MatrixXd metric_raw(const MetricField& g, const Eigen::VectorXd& coords) {
  Eigen::MatrixXd M = g.eval(g.chart->canonicalize(coords));
  if (!M.allFinite())
    throw NumericalError("metric evaluation produced non-finite entries (" +
                         g.label + ")");
  return 0.5 * (M + M.transpose());
}

Eigen::MatrixXd metric_at(const MetricField& g, const Point& p) {
  if (!p.chart->same_as(*g.chart))
    throw std::invalid_argument("metric_at: point lives on a different chart");
  if (!g.chart->contains(p.coords))
    throw std::domain_error("metric_at: point outside chart domain");
  return metric_raw(g, p.coords);
}

double inner(const Eigen::MatrixXd& G, const Eigen::VectorXd& u,
             const Eigen::VectorXd& v) {
  return u.dot(G * v);
}

bool positive_definite_at(const MetricField& g, const Point& p) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(metric_at(g, p));
  return es.eigenvalues().minCoeff() > 0.0;
}

MetricField scale_metric(const MetricField& g, double c) {
  if (!(c > 0.0)) throw std::invalid_argument("scale_metric: factor must be > 0");
  auto base = g.eval;
  return make_metric_field(
      g.chart,
      [base, c](const Eigen::VectorXd& x) -> Eigen::MatrixXd {
        return c * base(x);
      },
      std::to_string(c) + "*" + g.label);
}

}  // namespace blendcurv
