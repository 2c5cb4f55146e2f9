#pragma once

#include "blendcurv/geometry_catalog.hpp"
#include "blendcurv/metric_blend.hpp"

#include <random>

namespace bc_test {

using namespace blendcurv;

inline Point random_point(const ChartPtr& chart, std::mt19937_64& rng,
                          double inset = 0.12) {
  Eigen::VectorXd x(chart->dim());
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (int i = 0; i < chart->dim(); ++i) {
    const double frac =
        chart->periodic(i) ? uni(rng) : inset + (1.0 - 2.0 * inset) * uni(rng);
    x[i] = chart->lo(i) + frac * chart->length(i);
  }
  return Point(chart, x);
}

inline Eigen::VectorXd random_components(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  Eigen::VectorXd v(n);
  do {
    for (int i = 0; i < n; ++i) v[i] = uni(rng);
  } while (v.norm() < 0.1);
  return v;
}

// Fornberg's algorithm: weights of the m-th derivative at z on the grid x.
inline std::vector<double> fornberg_weights(double z,
                                            const std::vector<double>& x, int m) {
  const int nd = static_cast<int>(x.size()) - 1;
  std::vector<std::vector<double>> c(nd + 1, std::vector<double>(m + 1, 0.0));
  double c1 = 1.0, c4 = x[0] - z;
  c[0][0] = 1.0;
  for (int i = 1; i <= nd; ++i) {
    const int mn = std::min(i, m);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = x[i] - z;
    for (int j = 0; j < i; ++j) {
      const double c3 = x[i] - x[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k)
          c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (int k = mn; k >= 1; --k)
        c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(nd + 1);
  for (int i = 0; i <= nd; ++i) w[i] = c[i][m];
  return w;
}

// Independent oracle: r-th t-derivative of the blend curvature at t = 0 by
// central differences of blend_curvature_oracle (the direct curvature of the
// summed metric field).
inline double t_derivative_fd(const BlendPath& path, const Point& p,
                              const TangentVector& X, const TangentVector& Y,
                              int r, const DerivativeStencil& st,
                              double t_step = 0.05) {
  const int half = (r + 1) / 2 + 1;  // symmetric stencil wide enough for order 4
  std::vector<double> offsets;
  for (int k = -half; k <= half; ++k) offsets.push_back(k * t_step);
  const auto w = fornberg_weights(0.0, offsets, r);
  double acc = 0.0;
  for (size_t i = 0; i < offsets.size(); ++i) {
    if (w[i] == 0.0) continue;
    acc += w[i] * blend_curvature_oracle(path, offsets[i], p, X, Y, st);
  }
  return acc;
}

// FD-amplified evaluation-noise allowance for the oracle above.
inline double t_derivative_fd_noise(int r, double curvature_scale,
                                    double t_step = 0.05) {
  return 60.0 * 1e-10 * std::max(1.0, curvature_scale) / std::pow(t_step, r);
}

// Catalog blend paths used across the oracle-equivalence and Taylor tests.
struct NamedPath {
  std::string name;
  BlendPath path;
};

inline std::vector<NamedPath> catalog_blend_paths() {
  DerivativeStencil st;
  std::vector<NamedPath> out;
  {
    const auto& e = catalog_get("flat3torus");
    out.push_back({"flat3torus+warping(0.2 sin x1)",
                   make_blend_path(e.g0, warped_metric(
                                             *e.foliation, e.g0,
                                             [](const Eigen::VectorXd& x) {
                                               return 0.2 * std::sin(x[0]);
                                             },
                                             st))});
    out.push_back({"flat3torus+conformal(0.15(cos x1 + sin x3))",
                   make_blend_path(e.g0, conformal_metric(
                                             e.g0, [](const Eigen::VectorXd& x) {
                                               return 0.15 * (std::cos(x[0]) +
                                                              std::sin(x[2]));
                                             }))});
  }
  {
    const auto& e = catalog_get("s2xs2");
    out.push_back({"s2xs2+conformal(0.1 cos phi1 sin phi2)",
                   make_blend_path(e.g0, conformal_metric(
                                             e.g0, [](const Eigen::VectorXd& x) {
                                               return 0.1 * std::cos(x[1]) *
                                                      std::sin(x[3]);
                                             }))});
  }
  {
    const auto& e = catalog_get("s3hopf");
    out.push_back({"s3hopf+canonical(0.5)",
                   make_blend_path(
                       e.g0, canonical_variation_metric(*e.foliation, e.g0, 0.5))});
  }
  return out;
}

}  // namespace bc_test
