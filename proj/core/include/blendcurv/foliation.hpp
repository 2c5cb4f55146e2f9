#pragma once

#include "blendcurv/tensor_calculus.hpp"

namespace blendcurv {

/// A metric foliation presented upstairs: a spanning frame of the vertical
/// distribution plus the ambient metric whose orthogonal complement is the
/// horizontal distribution.
struct FoliationStructure {
  ChartPtr chart;
  std::vector<VectorField> vertical_frame;
  MetricField metric;

  int leaf_dim() const { return static_cast<int>(vertical_frame.size()); }

  /// Vertical frame vectors as columns of an n×k matrix.
  Eigen::MatrixXd frame_matrix(const Eigen::VectorXd& coords) const;
};

FoliationStructure make_foliation(ChartPtr chart,
                                  std::vector<VectorField> vertical_frame,
                                  MetricField metric);

/// g-orthogonal projection onto span(vertical_frame).
TangentVector vertical_part(const FoliationStructure& F, const TangentVector& X);
TangentVector horizontal_part(const FoliationStructure& F, const TangentVector& X);

/// Matrix of the pointwise vertical projection (for metric assembly).
Eigen::MatrixXd vertical_projector(const FoliationStructure& F,
                                   const Eigen::VectorXd& coords);

/// A_X Y = ½ [X̄, Ȳ]^V with X̄, Ȳ the pointwise-horizontalized
/// constant-component extensions; tensorial in both slots.
TangentVector oneill_a(const FoliationStructure& F, const TangentVector& X,
                       const TangentVector& Y, const DerivativeStencil& st);

/// The dual A*_X V: the horizontal vector with g(A_X Y, V) = g(A*_X V, Y)
/// for every horizontal Y, found by a Gram solve over a horizontal basis.
TangentVector oneill_a_dual(const FoliationStructure& F, const TangentVector& X,
                            const TangentVector& V, const DerivativeStencil& st);

/// Leaf shape operator σ(U, V): horizontal part of ∇_U V̄ with V̄ extended
/// in the vertical frame, symmetrized in (U, V).
TangentVector leaf_shape(const FoliationStructure& F, const TangentVector& U,
                         const TangentVector& V, const DerivativeStencil& st);

/// True when dh(K) vanishes (≤ 1e−8 scale) for every vertical frame field
/// over an internal sample lattice.
bool is_basic(const FoliationStructure& F, const ScalarField& h,
              const DerivativeStencil& st);

/// A horizontal basis at a point (n−k independent horizontalized
/// coordinate directions).
std::vector<Eigen::VectorXd> horizontal_basis(const FoliationStructure& F,
                                              const Eigen::VectorXd& coords);

/// Max over the frame of the bracket integrability residual
/// ‖[K_i, K_j]^H‖ at the given point; leaves exist when it vanishes.
double integrability_residual(const FoliationStructure& F, const Point& p,
                              const DerivativeStencil& st);

}  // namespace blendcurv
