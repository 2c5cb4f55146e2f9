#include "blendcurv/geometry_catalog.hpp"

#include <benchmark/benchmark.h>

using namespace blendcurv;

namespace {

const DerivativeStencil kSt;

Point fixed_point(const ChartPtr& chart) {
  Eigen::VectorXd x(chart->dim());
  for (int i = 0; i < chart->dim(); ++i)
    x[i] = chart->lo(i) + 0.37 * chart->length(i);
  return Point(chart, x);
}

BlendPath warped_path() {
  const auto& e = catalog_get("flat3torus");
  return make_blend_path(
      e.g0, warped_metric(
                *e.foliation, e.g0,
                [](const Eigen::VectorXd& x) { return 0.2 * std::sin(x[0]); },
                kSt));
}

void BM_Christoffel(benchmark::State& state) {
  const MetricField g = catalog_get("s3hopf").g0;
  const Point p = fixed_point(g.chart);
  for (auto _ : state) {
    benchmark::DoNotOptimize(christoffel(g, p, kSt));
  }
}
BENCHMARK(BM_Christoffel);

void BM_RiemannTensor(benchmark::State& state) {
  const char* names[] = {"s3hopf", "s2xs2"};
  const MetricField g = catalog_get(names[state.range(0)]).g0;
  const Point p = fixed_point(g.chart);
  for (auto _ : state) {
    benchmark::DoNotOptimize(riemann_tensor(g, p, kSt));
  }
}
BENCHMARK(BM_RiemannTensor)->Arg(0)->Arg(1);

void BM_BlendCurvatureClosedForm(benchmark::State& state) {
  const BlendPath path = warped_path();
  const Point p = fixed_point(path.g0.chart);
  const TangentVector X(p, Eigen::VectorXd::Unit(3, 0));
  const TangentVector Y(p, Eigen::VectorXd::Unit(3, 2));
  for (auto _ : state) {
    benchmark::DoNotOptimize(blend_curvature(path, 0.3, p, X, Y, kSt));
  }
}
BENCHMARK(BM_BlendCurvatureClosedForm);

void BM_BlendCurvatureOracle(benchmark::State& state) {
  const BlendPath path = warped_path();
  const Point p = fixed_point(path.g0.chart);
  const TangentVector X(p, Eigen::VectorXd::Unit(3, 0));
  const TangentVector Y(p, Eigen::VectorXd::Unit(3, 2));
  for (auto _ : state) {
    benchmark::DoNotOptimize(blend_curvature_oracle(path, 0.3, p, X, Y, kSt));
  }
}
BENCHMARK(BM_BlendCurvatureOracle);

void BM_SPr(benchmark::State& state) {
  const BlendPath path = warped_path();
  const Point p = fixed_point(path.g0.chart);
  const TangentVector X(p, Eigen::VectorXd::Unit(3, 0));
  const TangentVector Y(p, Eigen::VectorXd::Unit(3, 2));
  const int r = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(s_p_r(path, p, X, Y, r, kSt));
  }
}
BENCHMARK(BM_SPr)->Arg(2)->Arg(4);

void BM_ROrderAverage(benchmark::State& state) {
  const BlendPath path = warped_path();
  const auto& torus = catalog_get("flat3torus").torus;
  const int grid = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(r_order_average(path, torus, 3, grid, kSt));
  }
}
BENCHMARK(BM_ROrderAverage)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
