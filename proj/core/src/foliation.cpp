#include "blendcurv/foliation.hpp"

namespace blendcurv {

namespace {

// Bracket of two vector fields by finite differences:
// [X, Y]^k = X^i ∂_i Y^k − Y^i ∂_i X^k.
Eigen::VectorXd bracket(const VectorField& X, const VectorField& Y,
                        const Eigen::VectorXd& x, const DerivativeStencil& st) {
  const Eigen::VectorXd Xp = X(x);
  const Eigen::VectorXd Yp = Y(x);
  const int n = static_cast<int>(x.size());
  MatrixFn Xf = [&](const Eigen::VectorXd& y) -> Eigen::MatrixXd { return X(y); };
  MatrixFn Yf = [&](const Eigen::VectorXd& y) -> Eigen::MatrixXd { return Y(y); };
  Eigen::VectorXd out = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < n; ++i) {
    if (Xp[i] != 0.0) out += Xp[i] * Eigen::VectorXd(partial_first(Yf, x, i, st));
    if (Yp[i] != 0.0) out -= Yp[i] * Eigen::VectorXd(partial_first(Xf, x, i, st));
  }
  return out;
}

Eigen::VectorXd project_vertical(const FoliationStructure& F,
                                 const Eigen::VectorXd& coords,
                                 const Eigen::VectorXd& v) {
  const Eigen::MatrixXd B = F.frame_matrix(coords);
  const Eigen::MatrixXd G = metric_raw(F.metric, coords);
  const Eigen::MatrixXd gram = B.transpose() * G * B;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(gram);
  if (!lu.isInvertible())
    throw NumericalError("foliation: vertical frame is rank-deficient");
  return B * lu.solve(B.transpose() * (G * v));
}

}  // namespace

Eigen::MatrixXd FoliationStructure::frame_matrix(
    const Eigen::VectorXd& coords) const {
  const int n = chart->dim();
  Eigen::MatrixXd B(n, leaf_dim());
  for (int a = 0; a < leaf_dim(); ++a) B.col(a) = vertical_frame[a](coords);
  return B;
}

FoliationStructure make_foliation(ChartPtr chart,
                                  std::vector<VectorField> vertical_frame,
                                  MetricField metric) {
  if (!chart) throw std::invalid_argument("FoliationStructure: null chart");
  if (vertical_frame.empty() ||
      static_cast<int>(vertical_frame.size()) >= chart->dim())
    throw std::invalid_argument("FoliationStructure: need 1 <= k < n fields");
  if (!metric.chart->same_as(*chart))
    throw std::invalid_argument("FoliationStructure: metric chart mismatch");
  return FoliationStructure{std::move(chart), std::move(vertical_frame),
                            std::move(metric)};
}

TangentVector vertical_part(const FoliationStructure& F, const TangentVector& X) {
  return TangentVector(X.base, project_vertical(F, X.base.coords, X.components));
}

TangentVector horizontal_part(const FoliationStructure& F,
                              const TangentVector& X) {
  return TangentVector(
      X.base, X.components - project_vertical(F, X.base.coords, X.components));
}

Eigen::MatrixXd vertical_projector(const FoliationStructure& F,
                                   const Eigen::VectorXd& coords) {
  const Eigen::MatrixXd B = F.frame_matrix(coords);
  const Eigen::MatrixXd G = metric_raw(F.metric, coords);
  const Eigen::MatrixXd gram = B.transpose() * G * B;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(gram);
  if (!lu.isInvertible())
    throw NumericalError("foliation: vertical frame is rank-deficient");
  return B * lu.solve(B.transpose() * G);
}

TangentVector oneill_a(const FoliationStructure& F, const TangentVector& X,
                       const TangentVector& Y, const DerivativeStencil& st) {
  const Eigen::VectorXd xc = X.base.coords;
  const Eigen::MatrixXd G = metric_raw(F.metric, xc);
  const double scale =
      std::sqrt(std::max(inner(G, X.components, X.components),
                         inner(G, Y.components, Y.components))) +
      1e-300;
  const Eigen::VectorXd xv = project_vertical(F, xc, X.components);
  const Eigen::VectorXd yv = project_vertical(F, xc, Y.components);
  if (std::sqrt(inner(G, xv, xv)) > 1e-8 * scale ||
      std::sqrt(inner(G, yv, yv)) > 1e-8 * scale)
    throw std::invalid_argument("oneill_a: inputs must be horizontal");

  const Eigen::VectorXd Xcomp = X.components, Ycomp = Y.components;
  VectorField Xh = [&F, Xcomp](const Eigen::VectorXd& y) -> Eigen::VectorXd {
    return Xcomp - project_vertical(F, y, Xcomp);
  };
  VectorField Yh = [&F, Ycomp](const Eigen::VectorXd& y) -> Eigen::VectorXd {
    return Ycomp - project_vertical(F, y, Ycomp);
  };
  const Eigen::VectorXd br = bracket(Xh, Yh, xc, st);
  return TangentVector(X.base, 0.5 * project_vertical(F, xc, br));
}

TangentVector oneill_a_dual(const FoliationStructure& F, const TangentVector& X,
                            const TangentVector& V, const DerivativeStencil& st) {
  const Eigen::VectorXd xc = X.base.coords;
  const Eigen::MatrixXd G = metric_raw(F.metric, xc);
  const Eigen::VectorXd vh = V.components - project_vertical(F, xc, V.components);
  if (std::sqrt(inner(G, vh, vh)) >
      1e-8 * (std::sqrt(inner(G, V.components, V.components)) + 1e-300))
    throw std::invalid_argument("oneill_a_dual: V must be vertical");

  const auto basis = horizontal_basis(F, xc);
  const int m = static_cast<int>(basis.size());
  Eigen::MatrixXd gram(m, m);
  Eigen::VectorXd rhs(m);
  for (int i = 0; i < m; ++i) {
    const TangentVector hi(X.base, basis[i]);
    rhs[i] = inner(G, oneill_a(F, X, hi, st).components, V.components);
    for (int j = 0; j < m; ++j) gram(i, j) = inner(G, basis[i], basis[j]);
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(gram);
  if (!lu.isInvertible())
    throw NumericalError("oneill_a_dual: horizontal Gram solve failed");
  const Eigen::VectorXd c = lu.solve(rhs);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(xc.size());
  for (int i = 0; i < m; ++i) out += c[i] * basis[i];
  return TangentVector(X.base, out);
}

TangentVector leaf_shape(const FoliationStructure& F, const TangentVector& U,
                         const TangentVector& V, const DerivativeStencil& st) {
  const Eigen::VectorXd xc = U.base.coords;
  const Eigen::MatrixXd G = metric_raw(F.metric, xc);
  auto check_vertical = [&](const TangentVector& W, const char* name) {
    const Eigen::VectorXd wh =
        W.components - project_vertical(F, xc, W.components);
    if (std::sqrt(inner(G, wh, wh)) >
        1e-8 * (std::sqrt(inner(G, W.components, W.components)) + 1e-300))
      throw std::invalid_argument(std::string("leaf_shape: ") + name +
                                  " must be vertical");
  };
  check_vertical(U, "U");
  check_vertical(V, "V");

  // Extend a vertical vector with constant coefficients in the frame.
  auto vertical_extension = [&](const Eigen::VectorXd& w) -> VectorField {
    const Eigen::MatrixXd B = F.frame_matrix(xc);
    const Eigen::MatrixXd gram = B.transpose() * G * B;
    const Eigen::VectorXd coef =
        Eigen::FullPivLU<Eigen::MatrixXd>(gram).solve(B.transpose() * (G * w));
    return [&F, coef](const Eigen::VectorXd& y) -> Eigen::VectorXd {
      return F.frame_matrix(y) * coef;
    };
  };
  const VectorField Uf = vertical_extension(U.components);
  const VectorField Vf = vertical_extension(V.components);
  const Eigen::VectorXd duv =
      covariant_derivative(F.metric, Uf, Vf, U.base, st).components;
  const Eigen::VectorXd dvu =
      covariant_derivative(F.metric, Vf, Uf, U.base, st).components;
  const Eigen::VectorXd sym = 0.5 * (duv + dvu);
  return TangentVector(U.base, sym - project_vertical(F, xc, sym));
}

bool is_basic(const FoliationStructure& F, const ScalarField& h,
              const DerivativeStencil& st) {
  const int n = F.chart->dim();
  const int per_dim = 4;
  // Deterministic lattice, inset from non-periodic boundaries.
  std::vector<Eigen::VectorXd> pts;
  Eigen::VectorXd x(n);
  std::function<void(int)> rec = [&](int d) {
    if (d == n) {
      pts.push_back(x);
      return;
    }
    for (int s = 0; s < per_dim; ++s) {
      const double frac = F.chart->periodic(d)
                              ? (s + 0.5) / per_dim
                              : 0.1 + 0.8 * (s + 0.5) / per_dim;
      x[d] = F.chart->lo(d) + frac * F.chart->length(d);
      rec(d + 1);
    }
  };
  rec(0);

  for (const auto& pt : pts) {
    for (const auto& K : F.vertical_frame) {
      const double dh = directional_derivative(h, pt, K(pt), st);
      if (std::abs(dh) > 1e-8) return false;
    }
  }
  return true;
}

std::vector<Eigen::VectorXd> horizontal_basis(const FoliationStructure& F,
                                              const Eigen::VectorXd& coords) {
  const int n = F.chart->dim();
  const int k = F.leaf_dim();
  Eigen::MatrixXd H(n, n);
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd e = Eigen::VectorXd::Unit(n, i);
    H.col(i) = e - project_vertical(F, coords, e);
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(H);
  qr.setThreshold(1e-10);
  if (qr.rank() < n - k)
    throw NumericalError("horizontal_basis: rank deficiency");
  std::vector<Eigen::VectorXd> basis;
  for (int i = 0; i < n - k; ++i)
    basis.push_back(H.col(qr.colsPermutation().indices()[i]));
  return basis;
}

double integrability_residual(const FoliationStructure& F, const Point& p,
                              const DerivativeStencil& st) {
  double res = 0.0;
  const Eigen::VectorXd xc = p.coords;
  const Eigen::MatrixXd G = metric_raw(F.metric, xc);
  for (size_t i = 0; i < F.vertical_frame.size(); ++i)
    for (size_t j = i + 1; j < F.vertical_frame.size(); ++j) {
      const Eigen::VectorXd br =
          bracket(F.vertical_frame[i], F.vertical_frame[j], xc, st);
      const Eigen::VectorXd brh = br - project_vertical(F, xc, br);
      res = std::max(res, std::sqrt(inner(G, brh, brh)));
    }
  return res;
}

}  // namespace blendcurv
