#include "blendcurv/geometry_catalog.hpp"

#include <cmath>
#include <map>
#include <mutex>

namespace blendcurv {

namespace {

constexpr double kMargin = 1e-2;
constexpr double kTwoPi = 2.0 * M_PI;

ChartPtr torus_chart(int n) {
  Eigen::VectorXd lo = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd hi = Eigen::VectorXd::Constant(n, kTwoPi);
  return make_chart(lo, hi, std::vector<bool>(n, true));
}

VectorField unit_field(int n, int i) {
  return constant_field(Eigen::VectorXd::Unit(n, i));
}

std::vector<std::vector<std::vector<double>>> abelian_brackets(int k) {
  return std::vector<std::vector<std::vector<double>>>(
      k, std::vector<std::vector<double>>(k, std::vector<double>(k, 0.0)));
}

TorusImmersion coordinate_torus(ChartPtr chart, int u_axis, int v_axis,
                                Eigen::VectorXd base) {
  const int n = chart->dim();
  auto map = [base, u_axis, v_axis](double u, double v) {
    Eigen::VectorXd x = base;
    x[u_axis] += u;
    x[v_axis] += v;
    return x;
  };
  auto frame = [n, u_axis, v_axis](double, double) {
    return std::make_pair(Eigen::VectorXd::Unit(n, u_axis).eval(),
                          Eigen::VectorXd::Unit(n, v_axis).eval());
  };
  return make_torus_immersion(std::move(chart), map, frame);
}

CatalogEntry build_flat3torus() {
  CatalogEntry e;
  e.name = "flat3torus";
  e.description = "flat 3-torus, coordinate (x1,x3) 2-torus, leaves along x3";
  e.chart = torus_chart(3);
  e.g0 = make_metric_field(
      e.chart,
      [](const Eigen::VectorXd&) -> Eigen::MatrixXd {
        return Eigen::MatrixXd::Identity(3, 3);
      },
      "flat3torus");
  e.foliation = make_foliation(e.chart, {unit_field(3, 2)}, e.g0);
  DerivativeStencil st;
  e.action = make_group_action(*e.foliation, abelian_brackets(1),
                               Eigen::MatrixXd::Identity(1, 1), st);
  Eigen::VectorXd base(3);
  base << 0.0, 0.8, 0.0;
  e.torus = coordinate_torus(e.chart, 0, 2, base);
  e.expected_connection_residual = 1e-10;
  e.expected_curvature_residual = 1e-10;
  return e;
}

CatalogEntry build_s2xs2() {
  CatalogEntry e;
  e.name = "s2xs2";
  e.description =
      "round S2 x S2, equator x equator torus, second factor vertical, "
      "T2 rotation action";
  Eigen::VectorXd lo(4), hi(4);
  lo << kMargin, 0.0, kMargin, 0.0;
  hi << M_PI - kMargin, kTwoPi, M_PI - kMargin, kTwoPi;
  e.chart = make_chart(lo, hi, {false, true, false, true});
  e.g0 = make_metric_field(
      e.chart,
      [](const Eigen::VectorXd& x) -> Eigen::MatrixXd {
        Eigen::MatrixXd G = Eigen::MatrixXd::Identity(4, 4);
        const double s1 = std::sin(x[0]), s2 = std::sin(x[2]);
        G(1, 1) = s1 * s1;
        G(3, 3) = s2 * s2;
        return G;
      },
      "s2xs2");
  e.foliation =
      make_foliation(e.chart, {unit_field(4, 2), unit_field(4, 3)}, e.g0);
  DerivativeStencil st;
  FoliationStructure orbits =
      make_foliation(e.chart, {unit_field(4, 1), unit_field(4, 3)}, e.g0);
  e.action = make_group_action(std::move(orbits), abelian_brackets(2),
                               Eigen::MatrixXd::Identity(2, 2), st);
  Eigen::VectorXd base(4);
  base << M_PI / 2.0, 0.0, M_PI / 2.0, 0.0;
  e.torus = coordinate_torus(e.chart, 1, 3, base);
  e.expected_connection_residual = 1e-6;
  e.expected_curvature_residual = 1e-6;
  return e;
}

CatalogEntry build_s3hopf() {
  CatalogEntry e;
  e.name = "s3hopf";
  e.description =
      "round S3 in Hopf coordinates, Hopf circle foliation and action; the "
      "Clifford torus is intrinsically flat and minimal but not totally "
      "geodesic (ambient plane curvature 1/4)";
  Eigen::VectorXd lo(3), hi(3);
  lo << kMargin, 0.0, 0.0;
  hi << M_PI / 2.0 - kMargin, kTwoPi, kTwoPi;
  e.chart = make_chart(lo, hi, {false, true, true});
  e.g0 = make_metric_field(
      e.chart,
      [](const Eigen::VectorXd& x) -> Eigen::MatrixXd {
        Eigen::MatrixXd G = Eigen::MatrixXd::Identity(3, 3);
        const double c = std::cos(x[0]), s = std::sin(x[0]);
        G(1, 1) = c * c;
        G(2, 2) = s * s;
        return G;
      },
      "s3round");
  Eigen::VectorXd hopf(3);
  hopf << 0.0, 1.0, 1.0;
  e.foliation = make_foliation(e.chart, {constant_field(hopf)}, e.g0);
  DerivativeStencil st;
  e.action = make_group_action(*e.foliation, abelian_brackets(1),
                               Eigen::MatrixXd::Identity(1, 1), st);
  Eigen::VectorXd base(3);
  base << M_PI / 4.0, 0.0, 0.0;
  e.torus = coordinate_torus(e.chart, 1, 2, base);
  e.claims_totally_geodesic_flat = false;
  e.expected_connection_residual = 0.80;  // ~ |II| = 1/2 per slot, frame norms 1/sqrt2
  e.expected_curvature_residual = 0.30;   // ambient R0(X,Y,Y,X) = 1/4
  return e;
}

CatalogEntry build_cheeger_modulated() {
  CatalogEntry e;
  e.name = "cheeger_modulated";
  e.description =
      "flat 3-torus with circle orbits along x3 whose length is modulated by "
      "x1; (x1,x2) torus stays totally geodesic flat";
  e.chart = torus_chart(3);
  e.g0 = make_metric_field(
      e.chart,
      [](const Eigen::VectorXd& x) -> Eigen::MatrixXd {
        Eigen::MatrixXd G = Eigen::MatrixXd::Identity(3, 3);
        const double ell = 1.0 + 0.3 * std::sin(x[0]);
        G(2, 2) = ell * ell;
        return G;
      },
      "modulated_orbits");
  e.foliation = make_foliation(e.chart, {unit_field(3, 2)}, e.g0);
  DerivativeStencil st;
  e.action = make_group_action(*e.foliation, abelian_brackets(1),
                               Eigen::MatrixXd::Identity(1, 1), st);
  Eigen::VectorXd base(3);
  base << 0.0, 0.0, 1.1;
  e.torus = coordinate_torus(e.chart, 0, 1, base);
  e.expected_connection_residual = 1e-8;
  e.expected_curvature_residual = 1e-8;
  return e;
}

void self_test(const CatalogEntry& e) {
  DerivativeStencil st;
  if (!doubly_periodic(e.torus))
    throw NumericalError("catalog " + e.name + ": torus is not doubly periodic");
  const TorusResiduals res = check_totally_geodesic_flat(e.g0, e.torus, st, 8);
  if (e.claims_totally_geodesic_flat && res.max() > 1e-5)
    throw NumericalError("catalog " + e.name +
                         ": declared totally geodesic flat torus has residual " +
                         std::to_string(res.max()));
  if (res.connection > e.expected_connection_residual ||
      res.curvature > e.expected_curvature_residual)
    throw NumericalError("catalog " + e.name + ": residuals exceed declaration");
}

const std::map<std::string, CatalogEntry>& registry() {
  static std::map<std::string, CatalogEntry> entries;
  static std::once_flag flag;
  std::call_once(flag, [] {
    for (auto builder : {build_flat3torus, build_s2xs2, build_s3hopf,
                         build_cheeger_modulated}) {
      CatalogEntry e = builder();
      self_test(e);
      entries.emplace(e.name, std::move(e));
    }
  });
  return entries;
}

}  // namespace

std::vector<std::string> catalog_list() {
  std::vector<std::string> names;
  for (const auto& [name, entry] : registry()) names.push_back(name);
  return names;
}

const CatalogEntry& catalog_get(const std::string& name) {
  const auto& reg = registry();
  auto it = reg.find(name);
  if (it == reg.end())
    throw std::invalid_argument("catalog_get: unknown geometry '" + name + "'");
  return it->second;
}

MetricField round_sphere_metric() {
  Eigen::VectorXd lo(2), hi(2);
  lo << kMargin, 0.0;
  hi << M_PI - kMargin, kTwoPi;
  ChartPtr chart = make_chart(lo, hi, {false, true});
  return make_metric_field(
      chart,
      [](const Eigen::VectorXd& x) -> Eigen::MatrixXd {
        Eigen::MatrixXd G = Eigen::MatrixXd::Identity(2, 2);
        const double s = std::sin(x[0]);
        G(1, 1) = s * s;
        return G;
      },
      "s2round");
}

MetricField flat_torus_metric(int n) {
  ChartPtr chart = torus_chart(n);
  return make_metric_field(
      chart,
      [n](const Eigen::VectorXd&) -> Eigen::MatrixXd {
        return Eigen::MatrixXd::Identity(n, n);
      },
      "flat" + std::to_string(n) + "torus");
}

}  // namespace blendcurv
