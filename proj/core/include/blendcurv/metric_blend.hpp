#pragma once

#include "blendcurv/tensor_calculus.hpp"

namespace blendcurv {

/// The straight-line family g(t) = (1−t)g0 + t·g1 between two metrics on
/// the same chart.
struct BlendPath {
  MetricField g0;
  MetricField g1;
};

BlendPath make_blend_path(MetricField g0, MetricField g1);

/// The g0-self-adjoint positive operator with g0(P X, Y) = g1(X, Y),
/// as a matrix in chart components (P = G0⁻¹ G1).
struct PTensor {
  Point base;
  Eigen::MatrixXd matrix;
};

/// The connection difference D = ∇¹ − ∇⁰ as the tensor D^k_{ij}.
struct ConnectionDiff {
 public:
  ConnectionDiff(Point base_in, Christoffel diff)
      : base(std::move(base_in)), d_(std::move(diff)) {}

  /// D(u, v)^k = D^k_{ij} u^i v^j.
  Eigen::VectorXd operator()(const Eigen::VectorXd& u,
                             const Eigen::VectorXd& v) const {
    return d_.contract(u, v);
  }
  const Christoffel& components() const { return d_; }

  Point base;

 private:
  Christoffel d_;
};

PTensor p_tensor(const BlendPath& path, const Point& p);

/// P̃ = (t/(1−t))·P, the operator comparing the weighted pair
/// ((1−t)g0, t·g1); feeds the graph-immersion formulas.
PTensor p_tensor_scaled(const BlendPath& path, double t, const Point& p);

ConnectionDiff connection_diff(const BlendPath& path, const Point& p,
                               const DerivativeStencil& st);

/// (1−t)G0(p) + t G1(p).
Eigen::MatrixXd blend_metric(const BlendPath& path, double t, const Point& p);

/// The whole blended family as a metric field (for direct curvature
/// evaluation). Valid wherever the combination stays positive-definite,
/// including slightly outside [0,1] for the t-derivative oracles.
MetricField blend_metric_field(const BlendPath& path, double t);

/// Closed-form curvature of the blend:
///   R_t(X,Y,Y,X) = (1−t)R0 + tR1
///                  + t(1−t) g1((1−t(1−P))⁻¹ D_XX, D_YY)
///                  − t(1−t) g1((1−t(1−P))⁻¹ D_XY, D_XY).
double blend_curvature(const BlendPath& path, double t, const Point& p,
                       const TangentVector& X, const TangentVector& Y,
                       const DerivativeStencil& st);

/// Independent route: assembles the summed metric field and differentiates
/// it directly with the generic curvature machinery.
double blend_curvature_oracle(const BlendPath& path, double t, const Point& p,
                              const TangentVector& X, const TangentVector& Y,
                              const DerivativeStencil& st);

/// S^P_r(X,Y) = g1(P(1−P)^{r−2} D_XX, D_YY) − g1(P(1−P)^{r−2} D_XY, D_XY),
/// r ≥ 2 (matrix powers by repeated multiplication, r ≤ 12).
double s_p_r(const BlendPath& path, const Point& p, const TangentVector& X,
             const TangentVector& Y, int r, const DerivativeStencil& st);

/// Exact t-derivatives of R_t(X,Y,Y,X) at t = 0:
///   r = 1: R1 − R0 + g1(D_XX, D_YY) − g1(D_XY, D_XY)
///   r ≥ 2: −r!·S^P_r.
double t_derivative_analytic(const BlendPath& path, const Point& p,
                             const TangentVector& X, const TangentVector& Y,
                             int r, const DerivativeStencil& st);

/// 1/ρ(1−P): the supremum of t for which the geometric resolvent series
/// converges at p. Returns +inf when P = 1.
double series_radius(const BlendPath& path, const Point& p);

double factorial(int r);

}  // namespace blendcurv
