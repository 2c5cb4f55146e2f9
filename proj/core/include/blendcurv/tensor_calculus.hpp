#pragma once

#include "blendcurv/metric_field.hpp"

namespace blendcurv {

/// Christoffel symbols of the second kind at a point, indexed (k, i, j)
/// for Γ^k_{ij}; symmetric in (i, j).
class Christoffel {
 public:
  explicit Christoffel(int n) : n_(n), a_(static_cast<size_t>(n) * n * n, 0.0) {}
  double& operator()(int k, int i, int j) { return a_[idx(k, i, j)]; }
  double operator()(int k, int i, int j) const { return a_[idx(k, i, j)]; }
  int dim() const { return n_; }

  /// Γ(u, v)^k = Γ^k_{ij} u^i v^j.
  Eigen::VectorXd contract(const Eigen::VectorXd& u,
                           const Eigen::VectorXd& v) const;

 private:
  size_t idx(int k, int i, int j) const {
    return (static_cast<size_t>(k) * n_ + i) * n_ + j;
  }
  int n_;
  std::vector<double> a_;
};

/// Fully covariant curvature tensor R(∂a, ∂b, ∂c, ∂d) = g(R(∂a,∂b)∂c, ∂d),
/// sign convention chosen so that the round unit sphere has sectional
/// curvature +1.
class CurvatureTensor {
 public:
  explicit CurvatureTensor(int n)
      : n_(n), a_(static_cast<size_t>(n) * n * n * n, 0.0) {}
  double& operator()(int a, int b, int c, int d) { return a_[idx(a, b, c, d)]; }
  double operator()(int a, int b, int c, int d) const {
    return a_[idx(a, b, c, d)];
  }
  int dim() const { return n_; }

  double contract(const Eigen::VectorXd& X, const Eigen::VectorXd& Y,
                  const Eigen::VectorXd& Z, const Eigen::VectorXd& W) const;

 private:
  size_t idx(int a, int b, int c, int d) const {
    return ((static_cast<size_t>(a) * n_ + b) * n_ + c) * n_ + d;
  }
  int n_;
  std::vector<double> a_;
};

/// Γ^k_{ij} = ½ g^{kl}(∂_i g_{jl} + ∂_j g_{il} − ∂_l g_{ij}) by central
/// differences of the metric entries.
Christoffel christoffel(const MetricField& g, const Point& p,
                        const DerivativeStencil& st);

/// (∇_X Y)^k = X^i ∂_i Y^k + Γ^k_{ij} X^i Y^j at p.
TangentVector covariant_derivative(const MetricField& g, const VectorField& X,
                                   const VectorField& Y, const Point& p,
                                   const DerivativeStencil& st);

/// Full curvature tensor from second metric derivatives:
///   R_abcd = ½(∂a∂c g_bd + ∂b∂d g_ac − ∂a∂d g_bc − ∂b∂c g_ad)
///            + g^{lm}(Γ_{l,bd} Γ_{m,ac} − Γ_{l,ad} Γ_{m,bc}).
CurvatureTensor riemann_tensor(const MetricField& g, const Point& p,
                               const DerivativeStencil& st);

/// R(X, Y, Z, W) with all vectors based at p.
double riemann(const MetricField& g, const Point& p, const TangentVector& X,
               const TangentVector& Y, const TangentVector& Z,
               const TangentVector& W, const DerivativeStencil& st);

/// R(X,Y,Y,X) / (g(X,X)g(Y,Y) − g(X,Y)²). Throws on dependent X, Y.
double sectional(const MetricField& g, const Point& p, const TangentVector& X,
                 const TangentVector& Y, const DerivativeStencil& st);

}  // namespace blendcurv
