#include "test_support.hpp"

#include <doctest.h>

using namespace blendcurv;
using bc_test::random_components;
using bc_test::random_point;
using bc_test::t_derivative_fd;
using bc_test::t_derivative_fd_noise;

namespace {

const DerivativeStencil kSt;

// diag(1, 1, e^{2f(x1)}) over the flat 3-torus, f = 0.2 sin x1.
BlendPath warped_torus_path() {
  const MetricField g0 = flat_torus_metric(3);
  const MetricField g1 = make_metric_field(
      g0.chart,
      [](const Eigen::VectorXd& x) -> Eigen::MatrixXd {
        Eigen::MatrixXd G = Eigen::MatrixXd::Identity(3, 3);
        G(2, 2) = std::exp(2.0 * 0.2 * std::sin(x[0]));
        return G;
      },
      "diagwarp");
  return make_blend_path(g0, g1);
}

}  // namespace

TEST_SUITE_BEGIN("metric_blend");

TEST_CASE("p_tensor: identity, constant conformal, diagonal warp") {
  const MetricField g0 = flat_torus_metric(3);
  std::mt19937_64 rng(1);
  const Point p = random_point(g0.chart, rng);

  CHECK(p_tensor(make_blend_path(g0, g0), p).matrix.isIdentity(1e-13));

  const BlendPath conf = make_blend_path(g0, scale_metric(g0, std::exp(1.0)));
  CHECK((p_tensor(conf, p).matrix - std::exp(1.0) * Eigen::MatrixXd::Identity(3, 3))
            .cwiseAbs()
            .maxCoeff() <= 1e-12);

  const BlendPath warp = warped_torus_path();
  const Eigen::MatrixXd P = p_tensor(warp, p).matrix;
  CHECK(P(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(P(1, 1) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(P(2, 2) ==
        doctest::Approx(std::exp(0.4 * std::sin(p.coords[0]))).epsilon(1e-12));
}

TEST_CASE("p_tensor invariants: g0-self-adjoint, positive spectrum, defining identity") {
  std::mt19937_64 rng(2);
  for (const auto& [name, path] : bc_test::catalog_blend_paths()) {
    CAPTURE(name);
    const Point p = random_point(path.g0.chart, rng);
    const Eigen::MatrixXd P = p_tensor(path, p).matrix;
    const Eigen::MatrixXd G0 = metric_at(path.g0, p);
    const Eigen::MatrixXd G1 = metric_at(path.g1, p);
    const int n = path.g0.chart->dim();
    for (int trial = 0; trial < 5; ++trial) {
      const Eigen::VectorXd v = random_components(n, rng);
      const Eigen::VectorXd w = random_components(n, rng);
      const double scale = std::max(1.0, std::abs(inner(G0, v, w)));
      CHECK(std::abs(inner(G0, P * v, w) - inner(G0, v, P * w)) <= 1e-9 * scale);
      CHECK(std::abs(inner(G0, P * v, w) - inner(G1, v, w)) <= 1e-10 * scale *
                                                                   10.0);
    }
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(G1, G0);
    CHECK(es.eigenvalues().minCoeff() > 0.0);
  }
}

TEST_CASE("connection_diff: zero for equal and rescaled metrics, conformal closed form") {
  const MetricField g0 = flat_torus_metric(3);
  std::mt19937_64 rng(3);
  const Point p = random_point(g0.chart, rng);

  auto max_abs = [](const ConnectionDiff& D, int n) {
    double m = 0.0;
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          m = std::max(m, std::abs(D.components()(k, i, j)));
    return m;
  };
  CHECK(max_abs(connection_diff(make_blend_path(g0, g0), p, kSt), 3) <= 1e-12);
  CHECK(max_abs(connection_diff(make_blend_path(g0, scale_metric(g0, 3.0)), p, kSt),
                3) <= 1e-12);

  auto h = [](const Eigen::VectorXd& x) { return 0.3 * x[0]; };
  const BlendPath conf = make_blend_path(g0, conformal_metric(g0, h));
  const ConnectionDiff D = connection_diff(conf, p, kSt);
  Eigen::VectorXd grad(3);
  grad << 0.3, 0.0, 0.0;
  for (int trial = 0; trial < 5; ++trial) {
    const Eigen::VectorXd X = random_components(3, rng);
    const Eigen::VectorXd Y = random_components(3, rng);
    const Eigen::VectorXd expected =
        grad.dot(X) * Y + grad.dot(Y) * X - X.dot(Y) * grad;
    CHECK((D(X, Y) - expected).norm() <= 1e-6);
  }
}

TEST_CASE("blend_metric endpoints and arithmetic") {
  const MetricField g0 = flat_torus_metric(2);
  const MetricField g1 = scale_metric(g0, 2.0);
  const BlendPath path = make_blend_path(g0, g1);
  Eigen::VectorXd x(2);
  x << 0.5, 1.5;
  const Point p(path.g0.chart, x);
  CHECK(blend_metric(path, 0.0, p).isIdentity(1e-14));
  CHECK((blend_metric(path, 1.0, p) - 2.0 * Eigen::MatrixXd::Identity(2, 2))
            .norm() <= 1e-14);
  CHECK((blend_metric(path, 0.5, p) - 1.5 * Eigen::MatrixXd::Identity(2, 2))
            .norm() <= 1e-14);
  for (double t : {0.1, 0.5, 0.9})
    CHECK(positive_definite_at(blend_metric_field(path, t), p));
}

TEST_CASE("blend_curvature: trivial path, warped torus vs oracle, t -> 0 limit") {
  std::mt19937_64 rng(4);
  const BlendPath warp = warped_torus_path();
  const Point p = random_point(warp.g0.chart, rng);

  const MetricField g0 = warp.g0;
  const BlendPath trivial = make_blend_path(g0, g0);
  const TangentVector X(p, Eigen::VectorXd::Unit(3, 0));
  const TangentVector Y(p, Eigen::VectorXd::Unit(3, 2));
  for (double t : {0.2, 0.7})
    CHECK(std::abs(blend_curvature(trivial, t, p, X, Y, kSt)) <= 1e-10);

  const double t = 0.3;
  const double closed = blend_curvature(warp, t, p, X, Y, kSt);
  const double oracle = blend_curvature_oracle(warp, t, p, X, Y, kSt);
  CHECK(std::abs(closed - oracle) <= 1e-5 * std::max(1.0, std::abs(oracle)));

  // Linear approach to R0 as t -> 0+.
  const double r0 = riemann(warp.g0, p, X, Y, Y, X, kSt);
  const double gap3 = std::abs(blend_curvature(warp, 1e-3, p, X, Y, kSt) - r0);
  const double gap4 = std::abs(blend_curvature(warp, 1e-4, p, X, Y, kSt) - r0);
  CHECK(gap4 <= 0.15 * gap3 + 1e-12);
  const double r1 = riemann(warp.g1, p, X, Y, Y, X, kSt);
  const double gap3b = std::abs(blend_curvature(warp, 1.0 - 1e-3, p, X, Y, kSt) - r1);
  const double gap4b = std::abs(blend_curvature(warp, 1.0 - 1e-4, p, X, Y, kSt) - r1);
  CHECK(gap4b <= 0.15 * gap3b + 1e-12);
}

TEST_CASE("oracle equivalence across catalog paths, random data, t-grid") {
  std::mt19937_64 rng(5);
  for (const auto& [name, path] : bc_test::catalog_blend_paths()) {
    CAPTURE(name);
    const int n = path.g0.chart->dim();
    for (int i = 0; i < 10; ++i) {
      const Point p = random_point(path.g0.chart, rng);
      const TangentVector X(p, random_components(n, rng));
      const TangentVector Y(p, random_components(n, rng));
      for (double t : {0.1, 0.3, 0.5, 0.7, 0.9}) {
        const double closed = blend_curvature(path, t, p, X, Y, kSt);
        const double oracle = blend_curvature_oracle(path, t, p, X, Y, kSt);
        CHECK(std::abs(closed - oracle) <=
              1e-5 * std::max(1.0, std::abs(oracle)));
      }
    }
  }
}

TEST_CASE("sphere pair: rescaled round metric has curvature K/c") {
  const MetricField s2 = round_sphere_metric();
  const BlendPath path = make_blend_path(s2, scale_metric(s2, 2.0));
  std::mt19937_64 rng(6);
  const Point p = random_point(s2.chart, rng);
  const TangentVector X(p, random_components(2, rng));
  const TangentVector Y(p, random_components(2, rng));
  const double t = 0.4;
  // (1-t) + 2t = 1.4 scales the metric; sectional scales by 1/1.4.
  const MetricField gt = blend_metric_field(path, t);
  CHECK(sectional(gt, p, X, Y, kSt) == doctest::Approx(1.0 / 1.4).epsilon(1e-6));
  CHECK(std::abs(blend_curvature(path, t, p, X, Y, kSt) -
                 blend_curvature_oracle(path, t, p, X, Y, kSt)) <= 1e-6);
}

TEST_CASE("s_p_r: trivial path, power-zero case, symmetry, sign flips") {
  std::mt19937_64 rng(7);
  const BlendPath warp = warped_torus_path();
  const Point p = random_point(warp.g0.chart, rng);
  const TangentVector X(p, random_components(3, rng));
  const TangentVector Y(p, random_components(3, rng));

  const BlendPath trivial = make_blend_path(warp.g0, warp.g0);
  for (int r : {2, 3, 5})
    CHECK(std::abs(s_p_r(trivial, p, X, Y, r, kSt)) <= 1e-12);

  // r = 2: the power is the identity.
  const Eigen::MatrixXd P = p_tensor(warp, p).matrix;
  const ConnectionDiff D = connection_diff(warp, p, kSt);
  const Eigen::MatrixXd G1 = metric_at(warp.g1, p);
  const Eigen::VectorXd Dxx = D(X.components, X.components);
  const Eigen::VectorXd Dxy = D(X.components, Y.components);
  const Eigen::VectorXd Dyy = D(Y.components, Y.components);
  const double expected = inner(G1, P * Dxx, Dyy) - inner(G1, P * Dxy, Dxy);
  CHECK(s_p_r(warp, p, X, Y, 2, kSt) == doctest::Approx(expected).epsilon(1e-12));

  for (int r : {2, 3, 4}) {
    const double sxy = s_p_r(warp, p, X, Y, r, kSt);
    const double syx = s_p_r(warp, p, Y, X, r, kSt);
    CHECK(std::abs(sxy - syx) <= 1e-9 * std::max(1.0, std::abs(sxy)));
    const TangentVector Xm(p, (-X.components).eval());
    const TangentVector Ym(p, (-Y.components).eval());
    CHECK(s_p_r(warp, p, Xm, Ym, r, kSt) == doctest::Approx(sxy).epsilon(1e-12));
    CHECK(s_p_r(warp, p, Xm, Y, r, kSt) == doctest::Approx(sxy).epsilon(1e-12));
  }

  CHECK_THROWS_AS(s_p_r(warp, p, X, Y, 1, kSt), std::invalid_argument);
}

TEST_CASE("warped torus: s_p_r matches the third t-derivative of the oracle") {
  const BlendPath warp = warped_torus_path();
  Eigen::VectorXd x(3);
  x << 0.9, 2.2, 4.0;
  const Point p(warp.g0.chart, x);
  // Flat-torus frame: coordinate fields have vanishing ambient derivatives.
  const TangentVector X(p, Eigen::VectorXd::Unit(3, 0));
  const TangentVector Y(p, Eigen::VectorXd::Unit(3, 2));
  const double fd3 = t_derivative_fd(warp, p, X, Y, 3, kSt);
  const double analytic = -factorial(3) * s_p_r(warp, p, X, Y, 3, kSt);
  CHECK(std::abs(analytic - fd3) <=
        1e-3 * std::max(std::abs(analytic), std::abs(fd3)) +
            t_derivative_fd_noise(3, 1.0));
}

TEST_CASE("t_derivative_analytic matches the t-FD oracle for r = 1..4") {
  std::mt19937_64 rng(8);
  for (const auto& [name, path] : bc_test::catalog_blend_paths()) {
    CAPTURE(name);
    const int n = path.g0.chart->dim();
    const Point p = random_point(path.g0.chart, rng);
    const TangentVector X(p, random_components(n, rng));
    const TangentVector Y(p, random_components(n, rng));
    CHECK(std::abs(t_derivative_analytic(make_blend_path(path.g0, path.g0), p,
                                         X, Y, 3, kSt)) <= 1e-10);
    for (int r = 1; r <= 4; ++r) {
      const double tol_rel = (r == 4) ? 5e-3 : 1e-3;
      const double t_step = (r == 4) ? 0.075 : 0.05;
      const double analytic = t_derivative_analytic(path, p, X, Y, r, kSt);
      const double fd = t_derivative_fd(path, p, X, Y, r, kSt, t_step);
      CHECK(std::abs(analytic - fd) <=
            tol_rel * std::max(std::abs(analytic), std::abs(fd)) +
                t_derivative_fd_noise(r, 1.0, t_step));
    }
  }
  const BlendPath warp = warped_torus_path();
  std::mt19937_64 rng2(9);
  const Point p = random_point(warp.g0.chart, rng2);
  const TangentVector X(p, random_components(3, rng2));
  const TangentVector Y(p, random_components(3, rng2));
  CHECK_THROWS_AS(t_derivative_analytic(warp, p, X, Y, 0, kSt),
                  std::invalid_argument);
}

TEST_CASE("series_radius: trivial, conformal constants") {
  const MetricField g0 = flat_torus_metric(2);
  std::mt19937_64 rng(10);
  const Point p = random_point(g0.chart, rng);
  CHECK(std::isinf(series_radius(make_blend_path(g0, g0), p)));
  CHECK(series_radius(make_blend_path(g0, scale_metric(g0, std::exp(1.0))), p) ==
        doctest::Approx(1.0 / (std::exp(1.0) - 1.0)).epsilon(1e-10));
  CHECK(series_radius(make_blend_path(g0, scale_metric(g0, 0.5)), p) ==
        doctest::Approx(2.0).epsilon(1e-12));
}

TEST_SUITE_END();
