#include "blendcurv/metric_blend.hpp"

#include <limits>

namespace blendcurv {

namespace {

Eigen::MatrixXd solve_spd(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                          const char* where) {
  Eigen::LDLT<Eigen::MatrixXd> ldlt(A);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive())
    throw NumericalError(std::string(where) + ": singular matrix");
  return ldlt.solve(B);
}

}  // namespace

double factorial(int r) {
  double f = 1.0;
  for (int i = 2; i <= r; ++i) f *= i;
  return f;
}

BlendPath make_blend_path(MetricField g0, MetricField g1) {
  if (!g0.chart->same_as(*g1.chart))
    throw std::invalid_argument("BlendPath: metrics live on different charts");
  return BlendPath{std::move(g0), std::move(g1)};
}

PTensor p_tensor(const BlendPath& path, const Point& p) {
  const Eigen::MatrixXd G0 = metric_at(path.g0, p);
  const Eigen::MatrixXd G1 = metric_at(path.g1, p);
  return PTensor{p, solve_spd(G0, G1, "p_tensor")};
}

PTensor p_tensor_scaled(const BlendPath& path, double t, const Point& p) {
  if (!(t > 0.0 && t < 1.0))
    throw std::invalid_argument("p_tensor_scaled: t must lie in (0,1)");
  PTensor P = p_tensor(path, p);
  P.matrix *= t / (1.0 - t);
  return P;
}

ConnectionDiff connection_diff(const BlendPath& path, const Point& p,
                               const DerivativeStencil& st) {
  const Christoffel g1c = christoffel(path.g1, p, st);
  const Christoffel g0c = christoffel(path.g0, p, st);
  const int n = g1c.dim();
  Christoffel d(n);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) d(k, i, j) = g1c(k, i, j) - g0c(k, i, j);
  return ConnectionDiff(p, std::move(d));
}

Eigen::MatrixXd blend_metric(const BlendPath& path, double t, const Point& p) {
  if (t < 0.0 || t > 1.0)
    throw std::invalid_argument("blend_metric: t must lie in [0,1]");
  return (1.0 - t) * metric_at(path.g0, p) + t * metric_at(path.g1, p);
}

MetricField blend_metric_field(const BlendPath& path, double t) {
  auto e0 = path.g0.eval;
  auto e1 = path.g1.eval;
  return make_metric_field(
      path.g0.chart,
      [e0, e1, t](const Eigen::VectorXd& x) -> Eigen::MatrixXd {
        return (1.0 - t) * e0(x) + t * e1(x);
      },
      "blend(t=" + std::to_string(t) + ")");
}

double blend_curvature(const BlendPath& path, double t, const Point& p,
                       const TangentVector& X, const TangentVector& Y,
                       const DerivativeStencil& st) {
  if (!(t > 0.0 && t < 1.0))
    throw std::invalid_argument("blend_curvature: t must lie in (0,1)");
  const int n = path.g0.chart->dim();
  const double R0 = riemann(path.g0, p, X, Y, Y, X, st);
  const double R1 = riemann(path.g1, p, X, Y, Y, X, st);
  const ConnectionDiff D = connection_diff(path, p, st);
  const Eigen::VectorXd Dxx = D(X.components, X.components);
  const Eigen::VectorXd Dxy = D(X.components, Y.components);
  const Eigen::VectorXd Dyy = D(Y.components, Y.components);

  const Eigen::MatrixXd P = p_tensor(path, p).matrix;
  const Eigen::MatrixXd M =
      Eigen::MatrixXd::Identity(n, n) - t * (Eigen::MatrixXd::Identity(n, n) - P);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(M);
  if (!lu.isInvertible()) {
    Eigen::VectorXcd ev = Eigen::EigenSolver<Eigen::MatrixXd>(
                              Eigen::MatrixXd::Identity(n, n) - P)
                              .eigenvalues();
    double bad = 0.0;
    for (int i = 0; i < n; ++i)
      if (std::abs(1.0 - t * ev[i].real()) < std::abs(1.0 - t * bad))
        bad = ev[i].real();
    throw NumericalError(
        "blend_curvature: resolvent 1 - t(1-P) is singular (eigenvalue of 1-P "
        "near 1/t: " +
        std::to_string(bad) + ")");
  }
  const Eigen::MatrixXd G1 = metric_at(path.g1, p);
  const double quad = inner(G1, lu.solve(Dxx), Dyy) - inner(G1, lu.solve(Dxy), Dxy);
  return (1.0 - t) * R0 + t * R1 + t * (1.0 - t) * quad;
}

double blend_curvature_oracle(const BlendPath& path, double t, const Point& p,
                              const TangentVector& X, const TangentVector& Y,
                              const DerivativeStencil& st) {
  const MetricField gt = blend_metric_field(path, t);
  return riemann(gt, p, X, Y, Y, X, st);
}

double s_p_r(const BlendPath& path, const Point& p, const TangentVector& X,
             const TangentVector& Y, int r, const DerivativeStencil& st) {
  if (r < 2) throw std::invalid_argument("s_p_r: r must be >= 2");
  if (r > 12) throw std::invalid_argument("s_p_r: r > 12 not supported");
  const int n = path.g0.chart->dim();
  const Eigen::MatrixXd P = p_tensor(path, p).matrix;
  Eigen::MatrixXd W = P;
  const Eigen::MatrixXd oneMinusP = Eigen::MatrixXd::Identity(n, n) - P;
  for (int k = 0; k < r - 2; ++k) W = W * oneMinusP;

  const ConnectionDiff D = connection_diff(path, p, st);
  const Eigen::VectorXd Dxx = D(X.components, X.components);
  const Eigen::VectorXd Dxy = D(X.components, Y.components);
  const Eigen::VectorXd Dyy = D(Y.components, Y.components);
  const Eigen::MatrixXd G1 = metric_at(path.g1, p);
  return inner(G1, W * Dxx, Dyy) - inner(G1, W * Dxy, Dxy);
}

double t_derivative_analytic(const BlendPath& path, const Point& p,
                             const TangentVector& X, const TangentVector& Y,
                             int r, const DerivativeStencil& st) {
  if (r < 1) throw std::invalid_argument("t_derivative_analytic: r must be >= 1");
  if (r == 1) {
    const double R0 = riemann(path.g0, p, X, Y, Y, X, st);
    const double R1 = riemann(path.g1, p, X, Y, Y, X, st);
    const ConnectionDiff D = connection_diff(path, p, st);
    const Eigen::MatrixXd G1 = metric_at(path.g1, p);
    const Eigen::VectorXd Dxx = D(X.components, X.components);
    const Eigen::VectorXd Dxy = D(X.components, Y.components);
    const Eigen::VectorXd Dyy = D(Y.components, Y.components);
    return R1 - R0 + inner(G1, Dxx, Dyy) - inner(G1, Dxy, Dxy);
  }
  return -factorial(r) * s_p_r(path, p, X, Y, r, st);
}

double series_radius(const BlendPath& path, const Point& p) {
  const Eigen::MatrixXd G0 = metric_at(path.g0, p);
  const Eigen::MatrixXd G1 = metric_at(path.g1, p);
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(G1, G0);
  if (es.info() != Eigen::Success)
    throw NumericalError("series_radius: eigen-solve failed");
  double rho = 0.0;
  for (int i = 0; i < es.eigenvalues().size(); ++i)
    rho = std::max(rho, std::abs(1.0 - es.eigenvalues()[i]));
  if (rho < 1e-14) return std::numeric_limits<double>::infinity();
  return 1.0 / rho;
}

}  // namespace blendcurv
