#pragma once

#include "blendcurv/foliation.hpp"
#include "blendcurv/metric_blend.hpp"

namespace blendcurv {

/// An isometric action presented by its Killing frame: the vertical frame
/// of `foliation` consists of fundamental vector fields K_1..K_k of a Lie
/// algebra basis with structure constants c^m_{ij} ([K_i, K_j] = c^m_{ij} K_m)
/// and a bi-invariant inner product Q on the algebra.
struct GroupAction {
  FoliationStructure foliation;
  std::vector<std::vector<std::vector<double>>> lie_brackets;  // c[m][i][j]
  Eigen::MatrixXd Q;
};

/// Construction gates: each frame field Killing for g0 (Lie-derivative test
/// on a sample lattice), Q positive-definite and ad-invariant under the
/// structure constants.
GroupAction make_group_action(FoliationStructure foliation,
                              std::vector<std::vector<std::vector<double>>> brackets,
                              Eigen::MatrixXd Q, const DerivativeStencil& st);

/// Orbit tensor at a point: the k×k matrix O in the Killing basis with
/// Q(O u, v) = g0(u·K, v·K).
struct OrbitTensor {
  Point base;
  Eigen::MatrixXd matrix;
};

OrbitTensor orbit_tensor(const GroupAction& action, const Point& p);

// ---------------------------------------------------------------------------
// Metric factories
// ---------------------------------------------------------------------------

/// Pointwise e^{2h(p)} g0.
MetricField conformal_metric(const MetricField& g0, const ScalarField& h);

/// g_s = g0 on the horizontal distribution, e^{2s} g0 on the vertical one.
MetricField canonical_variation_metric(const FoliationStructure& F,
                                       const MetricField& g0, double s);

/// Vertical warping by a basic function: g_f = g0|_H + e^{2f} g0|_V.
/// Rejects non-basic f.
MetricField warped_metric(const FoliationStructure& F, const MetricField& g0,
                          const ScalarField& f, const DerivativeStencil& st);

/// Cheeger deformation: g_s(X,Y) = g0(P_s X, Y) with P_s = 1 on the
/// horizontal distribution and (1 + sO)^{-1} on the vertical one.
MetricField cheeger_metric(const GroupAction& action, const MetricField& g0,
                           double s);

// ---------------------------------------------------------------------------
// Closed-form checks and integrands
// ---------------------------------------------------------------------------

/// For g0-orthonormal X, Y spanning the plane of interest: evaluates
/// g0(D_XX, D_YY) − ‖D_XY‖²_0 from the conformal connection difference
/// D(A,B) = dh(A)B + dh(B)A − g0(A,B)∇⁰h, and verifies it equals
/// −2‖(∇⁰h)^T‖² + ‖(∇⁰h)^⊥‖² before returning it.
double conformal_variation_integrand(const MetricField& g0, const ScalarField& h,
                                     const Point& p, const TangentVector& X,
                                     const TangentVector& Y,
                                     const DerivativeStencil& st);

/// Max residual of the four connection identities of the canonical
/// variation, D^s(h,h) = 0, D^s(h,v) = (1−e^{2s})A*, D^s(v,h) likewise,
/// D^s(v,v) = (e^{2s}−1)σ, checked over a horizontal basis and the
/// vertical frame at p.
double canonical_connection_check(const FoliationStructure& F,
                                  const MetricField& g0, double s,
                                  const Point& p, const DerivativeStencil& st);

/// e^{4f}(1−e^{2f})^{r−2}·df(X)² for a g0-unit horizontal X and g0-unit
/// vertical Y, cross-checked against −S^P_r of the g0 → g_f path.
double warping_variation_integrand(const FoliationStructure& F,
                                   const MetricField& g0, const ScalarField& f,
                                   const Point& p, const TangentVector& X,
                                   const TangentVector& Y, int r,
                                   const DerivativeStencil& st);

/// Levi-Civita connection of Q evaluated through the orbit frame:
/// coefficients of ∇^Q_U V for vertical fields given by algebra-coefficient
/// functions, via the Koszul-limit linear solve.
Eigen::VectorXd nabla_q(const GroupAction& action, const Point& p,
                        const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& u,
                        const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& v,
                        const DerivativeStencil& st);

/// The limit integrand
///   Q(O⁻¹ ∇^Q_{OX^V} OX^V, ∇^Q_{OY^V} OY^V) − Q(O⁻¹ ∇^Q_{OX^V} OY^V, ∇^Q_{OX^V} OY^V),
/// with X, Y extended with constant chart components.
double cheeger_limit_condition(const GroupAction& action, const MetricField& g0,
                               const Point& p, const TangentVector& X,
                               const TangentVector& Y,
                               const DerivativeStencil& st);

/// For each s in s_list: |2s·g_s(∇^s_U V, W) − 2Q(∇^Q_u v, w)| at p, where
/// ∇^s comes from finite differences of the Cheeger metric. Residuals decay
/// like O(1/s). U, V, W are vertical fields; a horizontal W is rejected.
std::vector<double> cheeger_koszul_convergence(
    const GroupAction& action, const MetricField& g0, const Point& p,
    const VectorField& U, const VectorField& V, const VectorField& W,
    const std::vector<double>& s_list, const DerivativeStencil& st);

/// Algebra coefficients of the vertical part of a chart vector at p.
Eigen::VectorXd algebra_coefficients(const GroupAction& action,
                                     const Eigen::VectorXd& coords,
                                     const Eigen::VectorXd& v);

}  // namespace blendcurv
