#include "blendcurv/graph_immersion.hpp"

namespace blendcurv {

namespace {

Eigen::MatrixXd one_plus_p_inverse(const PTensor& P) {
  const int n = static_cast<int>(P.matrix.rows());
  Eigen::FullPivLU<Eigen::MatrixXd> lu(Eigen::MatrixXd::Identity(n, n) + P.matrix);
  if (!lu.isInvertible())
    throw NumericalError("graph_immersion: 1 + P is singular");
  return lu.inverse();
}

void check_dim(const PTensor& P, const Eigen::VectorXd& v, const char* where) {
  if (P.matrix.rows() != v.size())
    throw std::invalid_argument(std::string(where) + ": dimension mismatch");
}

}  // namespace

SplitVector chi(const TangentVector& X) {
  return SplitVector{X.components, X.components};
}

SplitVector chi_prime(const TangentVector& Y, const PTensor& P) {
  check_dim(P, Y.components, "chi_prime");
  return SplitVector{-P.matrix * Y.components, Y.components};
}

SplitVector normal_projection(const SplitVector& V, const PTensor& P) {
  check_dim(P, V.left, "normal_projection");
  const Eigen::MatrixXd O = one_plus_p_inverse(P);
  const Eigen::VectorXd w = O * (V.left - V.right);
  return SplitVector{P.matrix * w, -w};
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> chi_cross_inverse(
    const SplitVector& V, const PTensor& P) {
  check_dim(P, V.left, "chi_cross_inverse");
  const Eigen::MatrixXd O = one_plus_p_inverse(P);
  Eigen::VectorXd X = O * V.left + P.matrix * (O * V.right);
  Eigen::VectorXd Y = -O * V.left + O * V.right;
  return {std::move(X), std::move(Y)};
}

double shape_inner(const BlendPath& path, double t, const Point& p,
                   const TangentVector& X, const TangentVector& Y,
                   const TangentVector& Xp, const TangentVector& Yp,
                   const DerivativeStencil& st) {
  if (!(t > 0.0 && t < 1.0))
    throw std::invalid_argument("shape_inner: t must lie in (0,1)");
  const PTensor Pt = p_tensor_scaled(path, t, p);
  const Eigen::MatrixXd O = one_plus_p_inverse(Pt);
  const ConnectionDiff D = connection_diff(path, p, st);
  const Eigen::VectorXd u = D(X.components, Y.components);
  const Eigen::VectorXd v = D(Xp.components, Yp.components);
  const Eigen::MatrixXd G1 = metric_at(path.g1, p);
  return t * inner(G1, O * u, v);
}

}  // namespace blendcurv
