#pragma once

#include "blendcurv/metric_blend.hpp"

namespace blendcurv {

/// A point of M × M; the diagonal constructor is the only one offered
/// because the graph of the identity is all we immerse.
struct ProductPoint {
  explicit ProductPoint(Point p) : left(p), right(std::move(p)) {}
  Point left;
  Point right;
};

/// A tangent vector of M × M, split into factor components.
struct SplitVector {
  Eigen::VectorXd left;
  Eigen::VectorXd right;
};

/// χ(X) = (X, X): the tangent-space identification of the diagonal.
SplitVector chi(const TangentVector& X);

/// χ′(Y) = (−PY, Y): the normal-space identification; P must be the
/// operator of the weighted pair (use p_tensor_scaled for a blend at t).
SplitVector chi_prime(const TangentVector& Y, const PTensor& P);

/// Orthogonal projection onto the normal space of the diagonal, as the
/// block matrix [[PO, −PO], [−O, O]] with O = (1+P)⁻¹.
SplitVector normal_projection(const SplitVector& V, const PTensor& P);

/// Applies the displayed inverse of χ×χ′ to a product vector, recovering
/// the (tangent, normal) pre-images.
std::pair<Eigen::VectorXd, Eigen::VectorXd> chi_cross_inverse(
    const SplitVector& V, const PTensor& P);

/// ⟨II(dΞX, dΞY), II(dΞX′, dΞY′)⟩ of the diagonal in
/// (M×M, (1−t)g0 × t g1), via the closed form t·g1((1+P̃)⁻¹ D(X,Y), D(X′,Y′)).
double shape_inner(const BlendPath& path, double t, const Point& p,
                   const TangentVector& X, const TangentVector& Y,
                   const TangentVector& Xp, const TangentVector& Yp,
                   const DerivativeStencil& st);

}  // namespace blendcurv
