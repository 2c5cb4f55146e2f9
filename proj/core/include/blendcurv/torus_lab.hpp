#pragma once

#include "blendcurv/metric_blend.hpp"

namespace blendcurv {

/// A doubly periodic immersion of T² = [0, 2π)² into a chart, with the
/// coordinate frame {X, Y} = {∂map/∂u, ∂map/∂v}. `map` must return smooth
/// unwrapped coordinates (no seam jumps).
struct TorusImmersion {
  ChartPtr chart;
  std::function<Eigen::VectorXd(double, double)> map;
  /// Frame components at (u, v); supplied in closed form for the catalog
  /// tori, finite differences of `map` otherwise.
  std::function<std::pair<Eigen::VectorXd, Eigen::VectorXd>(double, double)> frame;
};

TorusImmersion make_torus_immersion(
    ChartPtr chart, std::function<Eigen::VectorXd(double, double)> map,
    std::function<std::pair<Eigen::VectorXd, Eigen::VectorXd>(double, double)>
        frame = nullptr);

/// True when map(u+2π, v) and map(u, v+2π) agree with map(u, v) modulo the
/// chart's periodic identifications.
bool doubly_periodic(const TorusImmersion& T, double tol = 1e-9);

enum class Verdict { positive, zero, negative };
std::string to_string(Verdict v);

/// Hypothesis residuals for "totally geodesic flat":
///   connection: max of ‖∇⁰_X X‖, ‖∇⁰_X Y‖, ‖∇⁰_Y Y‖ over a grid,
///   curvature:  max |R₀(X,Y,Y,X)|.
struct TorusResiduals {
  double connection = 0.0;
  double curvature = 0.0;
  double max() const { return std::max(connection, curvature); }
};

TorusResiduals check_totally_geodesic_flat(const MetricField& g0,
                                           const TorusImmersion& T,
                                           const DerivativeStencil& st,
                                           int grid_n = 16);

/// Trapezoidal product rule on grid_n² points (spectral for smooth periodic
/// integrands); returns the refined value and |I(2N) − I(N)| as the error
/// estimate.
std::pair<double, double> integrate_torus(
    const std::function<double(double, double)>& f, int grid_n);

/// Covariant derivative of the torus frame along itself in the metric g:
/// slot ∈ {XX, XY, YY}.
enum class FrameSlot { XX, XY, YY };
Eigen::VectorXd frame_covariant_derivative(const MetricField& g,
                                           const TorusImmersion& T, double u,
                                           double v, FrameSlot slot,
                                           const DerivativeStencil& st);

/// Both sides of the first-order identity, integrated with the displayed
/// 1/‖X∧Y‖₁² weight against the induced g1 area element:
///   lhs = ∫ R'₀(X,Y,Y,X) / ‖X∧Y‖₁,
///   rhs = ∫ [g1((∇¹XX)ᵀ,(∇¹YY)ᵀ) − g1((∇¹XY)ᵀ,(∇¹XY)ᵀ)] / ‖X∧Y‖₁,
/// with ᵀ the g1-orthogonal projection onto span{X, Y}.
struct FirstOrderIdentity {
  double lhs = 0.0;
  double rhs = 0.0;
  double lhs_error = 0.0;
  double rhs_error = 0.0;
};

/// Throws when the totally-geodesic-flat residual exceeds 1e−5.
FirstOrderIdentity first_order_average(const BlendPath& path,
                                       const TorusImmersion& T, int grid_n,
                                       const DerivativeStencil& st);

/// One row of the r-order report: both sides of the sign equivalence.
struct RVariationEntry {
  int r = 0;
  double dr_integral = 0.0;        // ∫ d^r/dt^r R_0  (du dv)
  double dr_error = 0.0;
  double dr_integral_weighted = 0.0;  // against the g0 area element
  double spr_integral = 0.0;       // ∫ S^P_r  (du dv)
  double spr_error = 0.0;
  Verdict verdict = Verdict::zero;       // sign of dr_integral
  Verdict spr_verdict = Verdict::zero;   // sign of spr_integral
  bool sign_equivalence_ok = false;      // opposite signs or both zero
};

RVariationEntry r_order_average(const BlendPath& path, const TorusImmersion& T,
                                int r, int grid_n, const DerivativeStencil& st);

/// ∫ K dA of the induced metric pulled back to the (u,v) chart; ≈ 0 for a
/// torus. Rejects immersions that are not doubly periodic.
double gauss_bonnet_check(const MetricField& g, const TorusImmersion& T,
                          int grid_n, const DerivativeStencil& st);

struct VariationReport {
  TorusResiduals hypothesis_residuals;
  FirstOrderIdentity first_order;
  double r1_integral = 0.0;   // ∫ R'_0 du dv (flags the R'_0 = 0 hypothesis)
  double r1_error = 0.0;
  std::vector<RVariationEntry> entries;
};

/// Full report: hypothesis residuals (reported, not assumed), first-order
/// pair, the R'₀ integral, and per-r entries for r = 2..r_max.
VariationReport theorem_a_verdict(const BlendPath& path, const TorusImmersion& T,
                                  int r_max, int grid_n,
                                  const DerivativeStencil& st);

/// Sign classification with a dead band of 3× the error estimate.
Verdict classify(double integral, double error);

}  // namespace blendcurv
