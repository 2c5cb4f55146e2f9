#include "blendcurv/stencil.hpp"

#include <stdexcept>

namespace blendcurv {

namespace {

Eigen::MatrixXd central_first(const MatrixFn& f, const Eigen::VectorXd& x,
                              int i, double h, int order) {
  Eigen::VectorXd xp = x, xm = x;
  if (order == 2) {
    xp[i] = x[i] + h;
    xm[i] = x[i] - h;
    return (f(xp) - f(xm)) / (2.0 * h);
  }
  Eigen::VectorXd xp2 = x, xm2 = x;
  xp[i] = x[i] + h;
  xm[i] = x[i] - h;
  xp2[i] = x[i] + 2.0 * h;
  xm2[i] = x[i] - 2.0 * h;
  return (-f(xp2) + 8.0 * f(xp) - 8.0 * f(xm) + f(xm2)) / (12.0 * h);
}

Eigen::MatrixXd central_second(const MatrixFn& f, const Eigen::VectorXd& x,
                               int i, double h, int order) {
  Eigen::VectorXd xp = x, xm = x;
  xp[i] = x[i] + h;
  xm[i] = x[i] - h;
  if (order == 2) {
    return (f(xp) - 2.0 * f(x) + f(xm)) / (h * h);
  }
  Eigen::VectorXd xp2 = x, xm2 = x;
  xp2[i] = x[i] + 2.0 * h;
  xm2[i] = x[i] - 2.0 * h;
  return (-f(xp2) + 16.0 * f(xp) - 30.0 * f(x) + 16.0 * f(xm) - f(xm2)) /
         (12.0 * h * h);
}

void check_order(int order) {
  if (order != 2 && order != 4)
    throw std::invalid_argument("DerivativeStencil: order must be 2 or 4");
}

template <typename Rule>
Eigen::MatrixXd richardson(const Rule& rule, double h, int order, bool on) {
  if (!on) return rule(h);
  const double factor = (order == 2) ? 4.0 : 16.0;
  return (factor * rule(h / 2.0) - rule(h)) / (factor - 1.0);
}

}  // namespace

Eigen::MatrixXd partial_first(const MatrixFn& f, const Eigen::VectorXd& x,
                              int i, const DerivativeStencil& st) {
  check_order(st.order);
  if (!(st.step > 0.0)) throw std::invalid_argument("stencil step must be > 0");
  auto rule = [&](double h) { return central_first(f, x, i, h, st.order); };
  return richardson(rule, st.step, st.order, st.richardson);
}

Eigen::MatrixXd partial_second(const MatrixFn& f, const Eigen::VectorXd& x,
                               int i, int j, const DerivativeStencil& st) {
  check_order(st.order);
  if (!(st.step2 > 0.0)) throw std::invalid_argument("stencil step2 must be > 0");
  if (i == j) {
    auto rule = [&](double h) { return central_second(f, x, i, h, st.order); };
    return richardson(rule, st.step2, st.order, st.richardson);
  }
  auto outer = [&](double h) {
    auto inner = [&](const Eigen::VectorXd& y) {
      auto rule = [&](double hh) { return central_first(f, y, j, hh, st.order); };
      return richardson(rule, st.step2, st.order, st.richardson);
    };
    return central_first(inner, x, i, h, st.order);
  };
  return richardson(outer, st.step2, st.order, st.richardson);
}

Eigen::VectorXd curve_derivative(const std::function<Eigen::VectorXd(double)>& f,
                                 double t, const DerivativeStencil& st) {
  MatrixFn wrapped = [&](const Eigen::VectorXd& x) -> Eigen::MatrixXd {
    return f(x[0]);
  };
  Eigen::VectorXd x(1);
  x[0] = t;
  return partial_first(wrapped, x, 0, st);
}

double directional_derivative(const ScalarFn& f, const Eigen::VectorXd& x,
                              const Eigen::VectorXd& direction,
                              const DerivativeStencil& st) {
  auto curve = [&](double s) -> Eigen::VectorXd {
    Eigen::VectorXd v(1);
    v[0] = f(x + s * direction);
    return v;
  };
  return curve_derivative(curve, 0.0, st)[0];
}

Eigen::VectorXd scalar_gradient(const ScalarFn& f, const Eigen::VectorXd& x,
                                const DerivativeStencil& st) {
  Eigen::VectorXd g(x.size());
  MatrixFn wrapped = [&](const Eigen::VectorXd& y) -> Eigen::MatrixXd {
    Eigen::MatrixXd m(1, 1);
    m(0, 0) = f(y);
    return m;
  };
  for (int i = 0; i < x.size(); ++i) g[i] = partial_first(wrapped, x, i, st)(0, 0);
  return g;
}

}  // namespace blendcurv
