#include "blendcurv/deformations.hpp"

#include <array>

namespace blendcurv {

namespace {

using AlgebraField = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

Eigen::MatrixXd solve_spd(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                          const char* where) {
  Eigen::LDLT<Eigen::MatrixXd> ldlt(A);
  if (ldlt.info() != Eigen::Success)
    throw NumericalError(std::string(where) + ": singular solve");
  return ldlt.solve(B);
}

// Lie derivative of the metric along K at raw coordinates:
// (L_K g)_{ij} = K^l d_l g_{ij} + g_{lj} d_i K^l + g_{il} d_j K^l.
double killing_residual(const MetricField& g, const VectorField& K,
                        const Eigen::VectorXd& x, const DerivativeStencil& st) {
  const int n = static_cast<int>(x.size());
  const Eigen::MatrixXd G = metric_raw(g, x);
  const Eigen::VectorXd Kp = K(x);
  auto gf = [&](const Eigen::VectorXd& y) { return metric_raw(g, y); };
  MatrixFn Kf = [&](const Eigen::VectorXd& y) -> Eigen::MatrixXd { return K(y); };

  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n, n);
  std::vector<Eigen::VectorXd> dK(n);
  for (int i = 0; i < n; ++i) {
    dK[i] = partial_first(Kf, x, i, st);
    if (Kp[i] != 0.0) L += Kp[i] * partial_first(gf, x, i, st);
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int l = 0; l < n; ++l)
        L(i, j) += G(l, j) * dK[i][l] + G(i, l) * dK[j][l];
  return L.cwiseAbs().maxCoeff();
}

std::vector<Eigen::VectorXd> sample_lattice(const Chart& chart, int per_dim) {
  std::vector<Eigen::VectorXd> pts;
  const int n = chart.dim();
  Eigen::VectorXd x(n);
  std::function<void(int)> rec = [&](int d) {
    if (d == n) {
      pts.push_back(x);
      return;
    }
    for (int s = 0; s < per_dim; ++s) {
      const double frac =
          chart.periodic(d) ? (s + 0.5) / per_dim : 0.12 + 0.76 * (s + 0.5) / per_dim;
      x[d] = chart.lo(d) + frac * chart.length(d);
      rec(d + 1);
    }
  };
  rec(0);
  return pts;
}

// Directional derivative of a vector-valued coefficient function.
Eigen::VectorXd directional_vec(const AlgebraField& a, const Eigen::VectorXd& x,
                                const Eigen::VectorXd& dir,
                                const DerivativeStencil& st) {
  auto curve = [&](double s) -> Eigen::VectorXd { return a(x + s * dir); };
  return curve_derivative(curve, 0.0, st);
}

}  // namespace

GroupAction make_group_action(
    FoliationStructure foliation,
    std::vector<std::vector<std::vector<double>>> brackets, Eigen::MatrixXd Q,
    const DerivativeStencil& st) {
  const int k = foliation.leaf_dim();
  if (Q.rows() != k || Q.cols() != k)
    throw std::invalid_argument("GroupAction: Q must be k x k");
  Eigen::LDLT<Eigen::MatrixXd> ldlt(Q);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive())
    throw std::invalid_argument("GroupAction: Q must be positive-definite");
  if (static_cast<int>(brackets.size()) != k)
    throw std::invalid_argument("GroupAction: bracket table must be k^3");

  // Ad-invariance of Q: Q([e_k,e_i], e_j) + Q(e_i, [e_k,e_j]) = 0.
  for (int kk = 0; kk < k; ++kk)
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) {
        double s = 0.0;
        for (int m = 0; m < k; ++m)
          s += brackets[m][kk][i] * Q(m, j) + brackets[m][kk][j] * Q(i, m);
        if (std::abs(s) > 1e-10)
          throw std::invalid_argument("GroupAction: Q is not ad-invariant");
      }

  // Killing gate over a sample lattice.
  for (const auto& x : sample_lattice(*foliation.chart, 3)) {
    for (const auto& K : foliation.vertical_frame) {
      const double res = killing_residual(foliation.metric, K, x, st);
      if (res > 1e-6)
        throw std::invalid_argument(
            "GroupAction: frame field is not Killing (residual " +
            std::to_string(res) + ")");
    }
  }
  return GroupAction{std::move(foliation), std::move(brackets), std::move(Q)};
}

OrbitTensor orbit_tensor(const GroupAction& action, const Point& p) {
  const Eigen::MatrixXd B = action.foliation.frame_matrix(p.coords);
  const Eigen::MatrixXd G = metric_raw(action.foliation.metric, p.coords);
  const Eigen::MatrixXd M = B.transpose() * G * B;
  return OrbitTensor{p, solve_spd(action.Q, M, "orbit_tensor")};
}

Eigen::VectorXd algebra_coefficients(const GroupAction& action,
                                     const Eigen::VectorXd& coords,
                                     const Eigen::VectorXd& v) {
  const Eigen::MatrixXd B = action.foliation.frame_matrix(coords);
  const Eigen::MatrixXd G = metric_raw(action.foliation.metric, coords);
  const Eigen::MatrixXd M = B.transpose() * G * B;
  return solve_spd(M, Eigen::MatrixXd(B.transpose() * (G * v)),
                   "algebra_coefficients");
}

MetricField conformal_metric(const MetricField& g0, const ScalarField& h) {
  auto base = g0.eval;
  return make_metric_field(
      g0.chart,
      [base, h](const Eigen::VectorXd& x) -> Eigen::MatrixXd {
        return std::exp(2.0 * h(x)) * base(x);
      },
      "conformal(" + g0.label + ")");
}

namespace {

MetricField vertical_rescale(const FoliationStructure& F, const MetricField& g0,
                             const ScalarField& factor, std::string label) {
  auto base = g0.eval;
  FoliationStructure Fc = F;
  return make_metric_field(
      g0.chart,
      [Fc, base, factor](const Eigen::VectorXd& x) -> Eigen::MatrixXd {
        const Eigen::MatrixXd G = base(x);
        const Eigen::MatrixXd Pv = vertical_projector(Fc, x);
        return G + (factor(x) - 1.0) * (Pv.transpose() * G * Pv);
      },
      std::move(label));
}

}  // namespace

MetricField canonical_variation_metric(const FoliationStructure& F,
                                       const MetricField& g0, double s) {
  const double e2s = std::exp(2.0 * s);
  return vertical_rescale(F, g0, [e2s](const Eigen::VectorXd&) { return e2s; },
                          "canonical(s=" + std::to_string(s) + ")");
}

MetricField warped_metric(const FoliationStructure& F, const MetricField& g0,
                          const ScalarField& f, const DerivativeStencil& st) {
  if (!is_basic(F, f, st))
    throw std::invalid_argument("warped_metric: f must be basic");
  return vertical_rescale(
      F, g0, [f](const Eigen::VectorXd& x) { return std::exp(2.0 * f(x)); },
      "warped(" + g0.label + ")");
}

MetricField cheeger_metric(const GroupAction& action, const MetricField& g0,
                           double s) {
  if (s < 0.0) throw std::invalid_argument("cheeger_metric: s must be >= 0");
  if (s == 0.0) return g0;
  const FoliationStructure F = action.foliation;
  const Eigen::MatrixXd Q = action.Q;
  auto base = g0.eval;
  return make_metric_field(
      g0.chart,
      [F, Q, base, s](const Eigen::VectorXd& x) -> Eigen::MatrixXd {
        const Eigen::MatrixXd G = base(x);
        const Eigen::MatrixXd B = F.frame_matrix(x);
        const Eigen::MatrixXd M = B.transpose() * G * B;
        const int n = static_cast<int>(G.rows());
        // Vertical block in algebra coordinates: N_s = (M^{-1} + s Q^{-1})^{-1}
        // = Q (Q + sM)^{-1} M.
        Eigen::LDLT<Eigen::MatrixXd> qsm(Q + s * M);
        if (qsm.info() != Eigen::Success)
          throw NumericalError("cheeger_metric: singular Q + sM");
        const Eigen::MatrixXd Ns = Q * qsm.solve(M);
        const Eigen::MatrixXd C = solve_spd(M, Eigen::MatrixXd(B.transpose() * G),
                                            "cheeger_metric");
        const Eigen::MatrixXd Ph = Eigen::MatrixXd::Identity(n, n) - B * C;
        Eigen::MatrixXd out =
            Ph.transpose() * G * Ph + C.transpose() * (0.5 * (Ns + Ns.transpose())) * C;
        return out;
      },
      "cheeger(s=" + std::to_string(s) + ")");
}

double conformal_variation_integrand(const MetricField& g0, const ScalarField& h,
                                     const Point& p, const TangentVector& X,
                                     const TangentVector& Y,
                                     const DerivativeStencil& st) {
  const Eigen::MatrixXd G = metric_at(g0, p);
  const Eigen::VectorXd& Xc = X.components;
  const Eigen::VectorXd& Yc = Y.components;
  if (std::abs(inner(G, Xc, Xc) - 1.0) > 1e-8 ||
      std::abs(inner(G, Yc, Yc) - 1.0) > 1e-8 ||
      std::abs(inner(G, Xc, Yc)) > 1e-8)
    throw std::invalid_argument(
        "conformal_variation_integrand: X, Y must be g0-orthonormal");

  const Eigen::VectorXd dh = scalar_gradient(h, p.coords, st);
  const Eigen::VectorXd grad = solve_spd(G, Eigen::MatrixXd(dh), "conformal");
  auto D = [&](const Eigen::VectorXd& A, const Eigen::VectorXd& B) {
    return dh.dot(A) * B + dh.dot(B) * A - inner(G, A, B) * grad;
  };
  const double value =
      inner(G, D(Xc, Xc), D(Yc, Yc)) - inner(G, D(Xc, Yc), D(Xc, Yc));

  const Eigen::VectorXd tangential = dh.dot(Xc) * Xc + dh.dot(Yc) * Yc;
  const Eigen::VectorXd transverse = grad - tangential;
  const double decomposed = -2.0 * inner(G, tangential, tangential) +
                            inner(G, transverse, transverse);
  const double scale = std::max(1.0, inner(G, grad, grad));
  if (std::abs(value - decomposed) > 1e-8 * scale)
    throw NumericalError(
        "conformal_variation_integrand: decomposition cross-check failed");
  return value;
}

double canonical_connection_check(const FoliationStructure& F,
                                  const MetricField& g0, double s,
                                  const Point& p, const DerivativeStencil& st) {
  const double e2s = std::exp(2.0 * s);
  const MetricField gs = canonical_variation_metric(F, g0, s);
  const BlendPath path = make_blend_path(g0, gs);
  const ConnectionDiff D = connection_diff(path, p, st);
  const Eigen::MatrixXd G = metric_at(g0, p);
  auto norm0 = [&](const Eigen::VectorXd& v) { return std::sqrt(inner(G, v, v)); };

  const auto hbasis = horizontal_basis(F, p.coords);
  const Eigen::MatrixXd B = F.frame_matrix(p.coords);

  double res = 0.0;
  for (size_t i = 0; i < hbasis.size(); ++i) {
    for (size_t j = 0; j < hbasis.size(); ++j)
      res = std::max(res, norm0(D(hbasis[i], hbasis[j])));
    const TangentVector Xi(p, hbasis[i]);
    for (int a = 0; a < F.leaf_dim(); ++a) {
      const Eigen::VectorXd Ka = B.col(a);
      const Eigen::VectorXd astar =
          oneill_a_dual(F, Xi, TangentVector(p, Ka), st).components;
      res = std::max(res, norm0(D(hbasis[i], Ka) - (1.0 - e2s) * astar));
      res = std::max(res, norm0(D(Ka, hbasis[i]) - (1.0 - e2s) * astar));
    }
  }
  for (int a = 0; a < F.leaf_dim(); ++a)
    for (int b = 0; b < F.leaf_dim(); ++b) {
      const Eigen::VectorXd sigma =
          leaf_shape(F, TangentVector(p, B.col(a)), TangentVector(p, B.col(b)), st)
              .components;
      res = std::max(res, norm0(D(B.col(a), B.col(b)) - (e2s - 1.0) * sigma));
    }
  return res;
}

double warping_variation_integrand(const FoliationStructure& F,
                                   const MetricField& g0, const ScalarField& f,
                                   const Point& p, const TangentVector& X,
                                   const TangentVector& Y, int r,
                                   const DerivativeStencil& st) {
  if (r < 2) throw std::invalid_argument("warping_variation_integrand: r >= 2");
  const Eigen::MatrixXd G = metric_at(g0, p);
  const Eigen::VectorXd xv = vertical_part(F, X).components;
  const Eigen::VectorXd yh = horizontal_part(F, Y).components;
  if (std::sqrt(inner(G, xv, xv)) > 1e-8)
    throw std::invalid_argument("warping_variation_integrand: X must be horizontal");
  if (std::sqrt(inner(G, yh, yh)) > 1e-8)
    throw std::invalid_argument("warping_variation_integrand: Y must be vertical");
  if (std::abs(inner(G, X.components, X.components) - 1.0) > 1e-8 ||
      std::abs(inner(G, Y.components, Y.components) - 1.0) > 1e-8)
    throw std::invalid_argument("warping_variation_integrand: X, Y must be g0-unit");

  const double fv = f(p.coords);
  const double dfX = directional_derivative(f, p.coords, X.components, st);
  const double value = std::exp(4.0 * fv) *
                       std::pow(1.0 - std::exp(2.0 * fv), r - 2) * dfX * dfX;

  const MetricField gf = warped_metric(F, g0, f, st);
  const double spr = s_p_r(make_blend_path(g0, gf), p, X, Y, r, st);
  if (std::abs(value + spr) > 1e-5 * std::max(1.0, std::abs(value)))
    throw NumericalError(
        "warping_variation_integrand: S^P_r cross-check failed (value " +
        std::to_string(value) + ", s_p_r " + std::to_string(spr) + ")");
  return value;
}

Eigen::VectorXd nabla_q(const GroupAction& action, const Point& p,
                        const AlgebraField& u, const AlgebraField& v,
                        const DerivativeStencil& st) {
  const int k = action.foliation.leaf_dim();
  const Eigen::VectorXd x = p.coords;
  const Eigen::MatrixXd B = action.foliation.frame_matrix(x);
  const Eigen::MatrixXd& Q = action.Q;
  const auto& c = action.lie_brackets;

  const Eigen::VectorXd up = u(x), vp = v(x);
  const Eigen::VectorXd dirU = B * up, dirV = B * vp;

  auto bracket_const = [&](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    Eigen::VectorXd w = Eigen::VectorXd::Zero(k);
    for (int m = 0; m < k; ++m)
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) w[m] += c[m][i][j] * a[i] * b[j];
    return w;
  };

  const Eigen::VectorXd du_alongV = directional_vec(u, x, dirV, st);
  const Eigen::VectorXd dv_alongU = directional_vec(v, x, dirU, st);
  // [U, V] coefficients: structure-constant part plus coefficient derivatives.
  const Eigen::VectorXd w_uv = bracket_const(up, vp) + dv_alongU - du_alongV;

  Eigen::VectorXd rhs(k);
  for (int l = 0; l < k; ++l) {
    const Eigen::VectorXd el = Eigen::VectorXd::Unit(k, l);
    const Eigen::VectorXd dirL = B.col(l);
    auto qdot = [&](const AlgebraField& a, const Eigen::VectorXd& cst) {
      return [&a, cst, &Q](const Eigen::VectorXd& y) {
        return (Q * a(y)).dot(cst);
      };
    };
    const double t1 = directional_derivative(qdot(v, el), x, dirU, st);
    const double t2 = directional_derivative(qdot(u, el), x, dirV, st);
    auto quv = [&u, &v, &Q](const Eigen::VectorXd& y) {
      return (Q * v(y)).dot(u(y));
    };
    const double t3 = directional_derivative(quv, x, dirL, st);
    // [U, K_l] and [V, K_l]: constant second argument.
    const Eigen::VectorXd w_ul =
        bracket_const(up, el) - directional_vec(u, x, dirL, st);
    const Eigen::VectorXd w_vl =
        bracket_const(vp, el) - directional_vec(v, x, dirL, st);
    rhs[l] = t1 + t2 - t3 + (Q * w_uv).dot(el) - (Q * w_ul).dot(vp) -
             (Q * w_vl).dot(up);
  }
  return 0.5 * solve_spd(Q, Eigen::MatrixXd(rhs), "nabla_q");
}

double cheeger_limit_condition(const GroupAction& action, const MetricField& g0,
                               const Point& p, const TangentVector& X,
                               const TangentVector& Y,
                               const DerivativeStencil& st) {
  const Eigen::MatrixXd Q = action.Q;
  const Eigen::MatrixXd Bp = action.foliation.frame_matrix(p.coords);
  const Eigen::MatrixXd Mp = Bp.transpose() * metric_at(g0, p) * Bp;
  const Eigen::MatrixXd O = solve_spd(Q, Mp, "cheeger_limit_condition");

  auto weighted = [&](const Eigen::VectorXd& comp) -> AlgebraField {
    return [&action, comp](const Eigen::VectorXd& y) -> Eigen::VectorXd {
      const Eigen::MatrixXd B = action.foliation.frame_matrix(y);
      const Eigen::MatrixXd G = metric_raw(action.foliation.metric, y);
      const Eigen::MatrixXd M = B.transpose() * G * B;
      const Eigen::VectorXd coef =
          Eigen::LDLT<Eigen::MatrixXd>(M).solve(B.transpose() * (G * comp));
      // O(y) coef = Q^{-1} M coef.
      return Eigen::LDLT<Eigen::MatrixXd>(action.Q).solve(M * coef);
    };
  };
  const AlgebraField ox = weighted(X.components);
  const AlgebraField oy = weighted(Y.components);

  const Eigen::VectorXd nxx = nabla_q(action, p, ox, ox, st);
  const Eigen::VectorXd nyy = nabla_q(action, p, oy, oy, st);
  const Eigen::VectorXd nxy = nabla_q(action, p, ox, oy, st);

  Eigen::FullPivLU<Eigen::MatrixXd> lu(O);
  if (!lu.isInvertible())
    throw NumericalError("cheeger_limit_condition: singular orbit tensor");
  return (Q * lu.solve(nxx)).dot(nyy) - (Q * lu.solve(nxy)).dot(nxy);
}

std::vector<double> cheeger_koszul_convergence(
    const GroupAction& action, const MetricField& g0, const Point& p,
    const VectorField& U, const VectorField& V, const VectorField& W,
    const std::vector<double>& s_list, const DerivativeStencil& st) {
  const FoliationStructure& F = action.foliation;
  const Eigen::MatrixXd G = metric_at(g0, p);
  const std::array<std::pair<const VectorField*, const char*>, 3> fields = {
      {{&U, "U"}, {&V, "V"}, {&W, "W"}}};
  for (const auto& [field, name] : fields) {
    const Eigen::VectorXd val = (*field)(p.coords);
    const Eigen::VectorXd h = val - vertical_projector(F, p.coords) * val;
    if (std::sqrt(inner(G, h, h)) >
        1e-8 * (std::sqrt(inner(G, val, val)) + 1e-300))
      throw std::invalid_argument(std::string("cheeger_koszul_convergence: ") +
                                  name + " must be vertical");
  }

  auto coeffs = [&](const VectorField& A) -> AlgebraField {
    return [&action, &A](const Eigen::VectorXd& y) {
      return algebra_coefficients(action, y, A(y));
    };
  };
  const Eigen::VectorXd wq = algebra_coefficients(action, p.coords, W(p.coords));
  const double limit =
      2.0 * (action.Q * nabla_q(action, p, coeffs(U), coeffs(V), st)).dot(wq);

  std::vector<double> residuals;
  residuals.reserve(s_list.size());
  for (double s : s_list) {
    const MetricField gs = cheeger_metric(action, g0, s);
    const Eigen::VectorXd nab = covariant_derivative(gs, U, V, p, st).components;
    const Eigen::MatrixXd Gs = metric_at(gs, p);
    const double lhs = 2.0 * s * inner(Gs, nab, W(p.coords));
    residuals.push_back(std::abs(lhs - limit));
  }
  return residuals;
}

}  // namespace blendcurv
