#include "blendcurv/tensor_calculus.hpp"

namespace blendcurv {

namespace {

Eigen::MatrixXd inverse_metric(const Eigen::MatrixXd& G, const char* where) {
  Eigen::LDLT<Eigen::MatrixXd> ldlt(G);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive())
    throw NumericalError(std::string(where) + ": metric matrix not invertible");
  return ldlt.solve(Eigen::MatrixXd::Identity(G.rows(), G.cols()));
}

std::vector<Eigen::MatrixXd> metric_first_partials(const MetricField& g,
                                                   const Eigen::VectorXd& x,
                                                   const DerivativeStencil& st) {
  const int n = g.chart->dim();
  auto f = [&](const Eigen::VectorXd& y) { return metric_raw(g, y); };
  std::vector<Eigen::MatrixXd> dG(n);
  for (int i = 0; i < n; ++i) dG[i] = partial_first(f, x, i, st);
  return dG;
}

}  // namespace

Eigen::VectorXd Christoffel::contract(const Eigen::VectorXd& u,
                                      const Eigen::VectorXd& v) const {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(n_);
  for (int k = 0; k < n_; ++k) {
    double s = 0.0;
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) s += (*this)(k, i, j) * u[i] * v[j];
    out[k] = s;
  }
  return out;
}

double CurvatureTensor::contract(const Eigen::VectorXd& X,
                                 const Eigen::VectorXd& Y,
                                 const Eigen::VectorXd& Z,
                                 const Eigen::VectorXd& W) const {
  double s = 0.0;
  for (int a = 0; a < n_; ++a) {
    if (X[a] == 0.0) continue;
    for (int b = 0; b < n_; ++b) {
      if (Y[b] == 0.0) continue;
      for (int c = 0; c < n_; ++c) {
        if (Z[c] == 0.0) continue;
        for (int d = 0; d < n_; ++d)
          s += (*this)(a, b, c, d) * X[a] * Y[b] * Z[c] * W[d];
      }
    }
  }
  return s;
}

Christoffel christoffel(const MetricField& g, const Point& p,
                        const DerivativeStencil& st) {
  const int n = g.chart->dim();
  const Eigen::MatrixXd G = metric_at(g, p);
  const Eigen::MatrixXd Ginv = inverse_metric(G, "christoffel");
  const auto dG = metric_first_partials(g, p.coords, st);

  Christoffel gamma(n);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        double s = 0.0;
        for (int l = 0; l < n; ++l)
          s += Ginv(k, l) * (dG[i](j, l) + dG[j](i, l) - dG[l](i, j));
        gamma(k, i, j) = 0.5 * s;
        gamma(k, j, i) = 0.5 * s;
      }
  return gamma;
}

TangentVector covariant_derivative(const MetricField& g, const VectorField& X,
                                   const VectorField& Y, const Point& p,
                                   const DerivativeStencil& st) {
  const int n = g.chart->dim();
  const Eigen::VectorXd Xp = X(p.coords);
  const Eigen::VectorXd Yp = Y(p.coords);
  const Christoffel gamma = christoffel(g, p, st);

  MatrixFn Yfn = [&](const Eigen::VectorXd& x) -> Eigen::MatrixXd { return Y(x); };
  Eigen::VectorXd out = gamma.contract(Xp, Yp);
  for (int i = 0; i < n; ++i) {
    if (Xp[i] == 0.0) continue;
    out += Xp[i] * Eigen::VectorXd(partial_first(Yfn, p.coords, i, st));
  }
  return TangentVector(p, out);
}

CurvatureTensor riemann_tensor(const MetricField& g, const Point& p,
                               const DerivativeStencil& st) {
  const int n = g.chart->dim();
  const Eigen::MatrixXd G = metric_at(g, p);
  const Eigen::MatrixXd Ginv = inverse_metric(G, "riemann");
  const auto dG = metric_first_partials(g, p.coords, st);

  auto f = [&](const Eigen::VectorXd& y) { return metric_raw(g, y); };
  std::vector<std::vector<Eigen::MatrixXd>> d2G(n, std::vector<Eigen::MatrixXd>(n));
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      d2G[i][j] = partial_second(f, p.coords, i, j, st);
      if (j != i) d2G[j][i] = d2G[i][j];
    }

  // Christoffel symbols of the first kind, Γ_{l,ij}.
  auto gamma1 = [&](int l, int i, int j) {
    return 0.5 * (dG[i](j, l) + dG[j](i, l) - dG[l](i, j));
  };

  CurvatureTensor R(n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      if (b == a) continue;  // antisymmetric slot
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          if (d == c) continue;
          double v = 0.5 * (d2G[a][c](b, d) + d2G[b][d](a, c) -
                            d2G[a][d](b, c) - d2G[b][c](a, d));
          for (int l = 0; l < n; ++l)
            for (int m = 0; m < n; ++m)
              v += Ginv(l, m) * (gamma1(l, b, d) * gamma1(m, a, c) -
                                 gamma1(l, a, d) * gamma1(m, b, c));
          R(a, b, c, d) = v;
        }
    }
  return R;
}

double riemann(const MetricField& g, const Point& p, const TangentVector& X,
               const TangentVector& Y, const TangentVector& Z,
               const TangentVector& W, const DerivativeStencil& st) {
  const CurvatureTensor R = riemann_tensor(g, p, st);
  return R.contract(X.components, Y.components, Z.components, W.components);
}

double sectional(const MetricField& g, const Point& p, const TangentVector& X,
                 const TangentVector& Y, const DerivativeStencil& st) {
  const Eigen::MatrixXd G = metric_at(g, p);
  const double xx = inner(G, X.components, X.components);
  const double yy = inner(G, Y.components, Y.components);
  const double xy = inner(G, X.components, Y.components);
  const double gram = xx * yy - xy * xy;
  if (!(gram > 1e-12 * std::max(1.0, xx * yy)))
    throw std::invalid_argument("sectional: X, Y are linearly dependent");
  return riemann(g, p, X, Y, Y, X, st) / gram;
}

}  // namespace blendcurv
