#include "blendcurv/torus_lab.hpp"

#include <cmath>

namespace blendcurv {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;

// Pointwise evaluation-noise allowance for quantities assembled from
// curvature-grade finite differences; feeds the verdict dead bands.
double stencil_noise_floor(double sample_scale) {
  return 1e-8 * std::max(1.0, sample_scale);
}

}  // namespace

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::positive: return "positive";
    case Verdict::negative: return "negative";
    default: return "zero";
  }
}

Verdict classify(double integral, double error) {
  if (std::abs(integral) <= 3.0 * error) return Verdict::zero;
  return integral > 0.0 ? Verdict::positive : Verdict::negative;
}

TorusImmersion make_torus_immersion(
    ChartPtr chart, std::function<Eigen::VectorXd(double, double)> map,
    std::function<std::pair<Eigen::VectorXd, Eigen::VectorXd>(double, double)>
        frame) {
  if (!chart || !map) throw std::invalid_argument("TorusImmersion: null input");
  TorusImmersion T{std::move(chart), std::move(map), std::move(frame)};
  if (!T.frame) {
    auto m = T.map;
    DerivativeStencil fd{4, 1e-5, 5e-5, true};
    T.frame = [m, fd](double u, double v) {
      auto fu = [&](double s) { return m(s, v); };
      auto fv = [&](double s) { return m(u, s); };
      return std::make_pair(curve_derivative(fu, u, fd),
                            curve_derivative(fv, v, fd));
    };
  }
  return T;
}

bool doubly_periodic(const TorusImmersion& T, double tol) {
  const auto probe = {std::make_pair(0.3, 1.1), std::make_pair(2.0, 4.9),
                      std::make_pair(5.7, 0.2)};
  for (auto [u, v] : probe) {
    const Eigen::VectorXd base = T.chart->canonicalize(T.map(u, v));
    for (const Eigen::VectorXd& shifted :
         {T.chart->canonicalize(T.map(u + kTwoPi, v)),
          T.chart->canonicalize(T.map(u, v + kTwoPi))}) {
      Eigen::VectorXd d = shifted - base;
      for (int i = 0; i < T.chart->dim(); ++i) {
        if (T.chart->periodic(i)) {
          const double len = T.chart->length(i);
          d[i] = std::remainder(d[i], len);
        }
      }
      if (d.cwiseAbs().maxCoeff() > tol) return false;
    }
  }
  return true;
}

Eigen::VectorXd frame_covariant_derivative(const MetricField& g,
                                           const TorusImmersion& T, double u,
                                           double v, FrameSlot slot,
                                           const DerivativeStencil& st) {
  const Point p(g.chart, T.map(u, v));
  const auto [X, Y] = T.frame(u, v);
  const Christoffel gamma = christoffel(g, p, st);

  // Derivative of the frame components along the direction curve.
  auto dframe = [&](bool along_u, bool second_vec) {
    auto curve = [&](double s) -> Eigen::VectorXd {
      const auto fr = along_u ? T.frame(s, v) : T.frame(u, s);
      return second_vec ? fr.second : fr.first;
    };
    return curve_derivative(curve, along_u ? u : v, st);
  };

  switch (slot) {
    case FrameSlot::XX:
      return dframe(true, false) + gamma.contract(X, X);
    case FrameSlot::XY:
      return dframe(true, true) + gamma.contract(X, Y);
    default:
      return dframe(false, true) + gamma.contract(Y, Y);
  }
}

TorusResiduals check_totally_geodesic_flat(const MetricField& g0,
                                           const TorusImmersion& T,
                                           const DerivativeStencil& st,
                                           int grid_n) {
  TorusResiduals res;
  for (int i = 0; i < grid_n; ++i)
    for (int j = 0; j < grid_n; ++j) {
      const double u = kTwoPi * i / grid_n;
      const double v = kTwoPi * j / grid_n;
      const Point p(g0.chart, T.map(u, v));
      const Eigen::MatrixXd G = metric_at(g0, p);
      for (FrameSlot slot : {FrameSlot::XX, FrameSlot::XY, FrameSlot::YY}) {
        const Eigen::VectorXd d = frame_covariant_derivative(g0, T, u, v, slot, st);
        res.connection = std::max(res.connection, std::sqrt(inner(G, d, d)));
      }
      const auto [X, Y] = T.frame(u, v);
      const CurvatureTensor R = riemann_tensor(g0, p, st);
      res.curvature = std::max(res.curvature, std::abs(R.contract(X, Y, Y, X)));
    }
  return res;
}

std::pair<double, double> integrate_torus(
    const std::function<double(double, double)>& f, int grid_n) {
  if (grid_n < 8) throw std::invalid_argument("integrate_torus: grid_n >= 8");
  auto rule = [&](int n) {
    double s = 0.0;
    const double h = kTwoPi / n;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const double val = f(h * i, h * j);
        if (!std::isfinite(val))
          throw NumericalError("integrate_torus: non-finite sample");
        s += val;
      }
    return s * h * h;
  };
  const double coarse = rule(grid_n);
  const double fine = rule(2 * grid_n);
  const double err = std::abs(fine - coarse) + 1e-15 * std::max(1.0, std::abs(fine));
  return {fine, err};
}

namespace {

struct FirstOrderSamples {
  std::function<double(double, double)> lhs;
  std::function<double(double, double)> rhs;
};

FirstOrderSamples first_order_integrands(const BlendPath& path,
                                         const TorusImmersion& T,
                                         const DerivativeStencil& st) {
  auto lhs = [&path, &T, st](double u, double v) {
    const Point p(path.g0.chart, T.map(u, v));
    const auto [X, Y] = T.frame(u, v);
    const TangentVector Xv(p, X), Yv(p, Y);
    const Eigen::MatrixXd G1 = metric_at(path.g1, p);
    const double wedge1 = inner(G1, X, X) * inner(G1, Y, Y) -
                          inner(G1, X, Y) * inner(G1, X, Y);
    return t_derivative_analytic(path, p, Xv, Yv, 1, st) / std::sqrt(wedge1);
  };
  auto rhs = [&path, &T, st](double u, double v) {
    const Point p(path.g0.chart, T.map(u, v));
    const auto [X, Y] = T.frame(u, v);
    const Eigen::MatrixXd G1 = metric_at(path.g1, p);

    const Eigen::VectorXd dxx =
        frame_covariant_derivative(path.g1, T, u, v, FrameSlot::XX, st);
    const Eigen::VectorXd dxy =
        frame_covariant_derivative(path.g1, T, u, v, FrameSlot::XY, st);
    const Eigen::VectorXd dyy =
        frame_covariant_derivative(path.g1, T, u, v, FrameSlot::YY, st);

    // g1-orthogonal projection onto span{X, Y}.
    Eigen::MatrixXd S(2, 2);
    S << inner(G1, X, X), inner(G1, X, Y), inner(G1, X, Y), inner(G1, Y, Y);
    const Eigen::Matrix2d Sinv = S.inverse();
    auto tangential = [&](const Eigen::VectorXd& w) -> Eigen::VectorXd {
      Eigen::Vector2d b(inner(G1, X, w), inner(G1, Y, w));
      Eigen::Vector2d cf = Sinv * b;
      return cf[0] * X + cf[1] * Y;
    };
    const Eigen::VectorXd txx = tangential(dxx), txy = tangential(dxy),
                          tyy = tangential(dyy);
    const double wedge1 = S(0, 0) * S(1, 1) - S(0, 1) * S(0, 1);
    return (inner(G1, txx, tyy) - inner(G1, txy, txy)) / std::sqrt(wedge1);
  };
  return {lhs, rhs};
}

}  // namespace

FirstOrderIdentity first_order_average(const BlendPath& path,
                                       const TorusImmersion& T, int grid_n,
                                       const DerivativeStencil& st) {
  const TorusResiduals res = check_totally_geodesic_flat(path.g0, T, st);
  if (res.max() > 1e-5)
    throw std::invalid_argument(
        "first_order_average: torus is not totally geodesic flat (residual " +
        std::to_string(res.max()) + ")");
  const auto integrands = first_order_integrands(path, T, st);
  FirstOrderIdentity out;
  auto [l, le] = integrate_torus(integrands.lhs, grid_n);
  auto [r, re] = integrate_torus(integrands.rhs, grid_n);
  out.lhs = l;
  out.rhs = r;
  const double floor = stencil_noise_floor(std::max(std::abs(l), std::abs(r))) *
                       kTwoPi * kTwoPi;
  out.lhs_error = le + floor;
  out.rhs_error = re + floor;
  return out;
}

RVariationEntry r_order_average(const BlendPath& path, const TorusImmersion& T,
                                int r, int grid_n, const DerivativeStencil& st) {
  if (r < 2) throw std::invalid_argument("r_order_average: r >= 2");
  RVariationEntry e;
  e.r = r;

  double max_dr = 0.0, max_spr = 0.0;
  auto dr = [&](double u, double v) {
    const Point p(path.g0.chart, T.map(u, v));
    const auto [X, Y] = T.frame(u, v);
    const double val =
        t_derivative_analytic(path, p, TangentVector(p, X), TangentVector(p, Y), r, st);
    max_dr = std::max(max_dr, std::abs(val));
    return val;
  };
  auto spr = [&](double u, double v) {
    const Point p(path.g0.chart, T.map(u, v));
    const auto [X, Y] = T.frame(u, v);
    const double val =
        s_p_r(path, p, TangentVector(p, X), TangentVector(p, Y), r, st);
    max_spr = std::max(max_spr, std::abs(val));
    return val;
  };
  auto dr_weighted = [&](double u, double v) {
    const Point p(path.g0.chart, T.map(u, v));
    const auto [X, Y] = T.frame(u, v);
    const Eigen::MatrixXd G0 = metric_at(path.g0, p);
    const double w = std::sqrt(inner(G0, X, X) * inner(G0, Y, Y) -
                               inner(G0, X, Y) * inner(G0, X, Y));
    return w * t_derivative_analytic(path, p, TangentVector(p, X),
                                     TangentVector(p, Y), r, st);
  };

  auto [di, de] = integrate_torus(dr, grid_n);
  auto [si, se] = integrate_torus(spr, grid_n);
  auto [dwi, dwe] = integrate_torus(dr_weighted, grid_n);
  (void)dwe;

  const double fr = factorial(r);
  e.dr_integral = di;
  e.dr_error = de + fr * stencil_noise_floor(max_dr / std::max(fr, 1.0)) * kTwoPi * kTwoPi;
  e.dr_integral_weighted = dwi;
  e.spr_integral = si;
  e.spr_error = se + stencil_noise_floor(max_spr) * kTwoPi * kTwoPi;
  e.verdict = classify(e.dr_integral, e.dr_error);
  e.spr_verdict = classify(e.spr_integral, e.spr_error);
  e.sign_equivalence_ok =
      (e.verdict == Verdict::zero && e.spr_verdict == Verdict::zero) ||
      (e.verdict == Verdict::positive && e.spr_verdict == Verdict::negative) ||
      (e.verdict == Verdict::negative && e.spr_verdict == Verdict::positive);
  return e;
}

double gauss_bonnet_check(const MetricField& g, const TorusImmersion& T,
                          int grid_n, const DerivativeStencil& st) {
  if (!doubly_periodic(T))
    throw std::invalid_argument("gauss_bonnet_check: immersion is not doubly periodic");

  Eigen::VectorXd lo(2), hi(2);
  lo << 0.0, 0.0;
  hi << kTwoPi, kTwoPi;
  ChartPtr uv_chart = make_chart(lo, hi, {true, true});

  auto map = T.map;
  auto frame = T.frame;
  auto geval = g.eval;
  auto gchart = g.chart;
  MatrixFn induced = [map, frame, geval, gchart](const Eigen::VectorXd& uv)
      -> Eigen::MatrixXd {
    const Eigen::VectorXd x = gchart->canonicalize(map(uv[0], uv[1]));
    const Eigen::MatrixXd G = geval(x);
    const auto [X, Y] = frame(uv[0], uv[1]);
    Eigen::MatrixXd h(2, 2);
    h(0, 0) = X.dot(G * X);
    h(0, 1) = h(1, 0) = X.dot(G * Y);
    h(1, 1) = Y.dot(G * Y);
    return h;
  };
  MetricField hfield = make_metric_field(uv_chart, induced, "induced(" + g.label + ")");

  auto integrand = [&](double u, double v) {
    Eigen::VectorXd uv(2);
    uv << u, v;
    const Point p(uv_chart, uv);
    const Eigen::MatrixXd h = metric_at(hfield, p);
    const double det = h(0, 0) * h(1, 1) - h(0, 1) * h(1, 0);
    if (!(det > 0.0))
      throw NumericalError("gauss_bonnet_check: degenerate induced metric");
    const CurvatureTensor R = riemann_tensor(hfield, p, st);
    const double K = R(0, 1, 1, 0) / det;
    return K * std::sqrt(det);
  };
  return integrate_torus(integrand, grid_n).first;
}

VariationReport theorem_a_verdict(const BlendPath& path, const TorusImmersion& T,
                                  int r_max, int grid_n,
                                  const DerivativeStencil& st) {
  if (r_max < 2) throw std::invalid_argument("theorem_a_verdict: r_max >= 2");
  VariationReport rep;
  rep.hypothesis_residuals = check_totally_geodesic_flat(path.g0, T, st);

  const auto integrands = first_order_integrands(path, T, st);
  auto [l, le] = integrate_torus(integrands.lhs, grid_n);
  auto [r, re] = integrate_torus(integrands.rhs, grid_n);
  const double floor = stencil_noise_floor(std::max(std::abs(l), std::abs(r))) *
                       kTwoPi * kTwoPi;
  rep.first_order = FirstOrderIdentity{l, r, le + floor, re + floor};

  auto r1 = [&](double u, double v) {
    const Point p(path.g0.chart, T.map(u, v));
    const auto [X, Y] = T.frame(u, v);
    return t_derivative_analytic(path, p, TangentVector(p, X),
                                 TangentVector(p, Y), 1, st);
  };
  auto [r1i, r1e] = integrate_torus(r1, grid_n);
  rep.r1_integral = r1i;
  rep.r1_error = r1e + floor;

  for (int rr = 2; rr <= r_max; ++rr)
    rep.entries.push_back(r_order_average(path, T, rr, grid_n, st));
  return rep;
}

}  // namespace blendcurv
