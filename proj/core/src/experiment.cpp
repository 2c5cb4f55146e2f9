#include "blendcurv/experiment.hpp"

#include "blendcurv/expression.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <random>
#include <sstream>

namespace blendcurv {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;

bool power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

struct GeometryInstance {
  ChartPtr chart;
  MetricField g0;
  std::optional<FoliationStructure> foliation;
  std::optional<GroupAction> action;
  TorusImmersion torus;
};

MetricField metric_from_entries(ChartPtr chart,
                                const std::vector<std::vector<std::string>>& rows,
                                const std::string& label) {
  const int n = chart->dim();
  if (static_cast<int>(rows.size()) != n)
    throw std::invalid_argument("metric entries: expected " + std::to_string(n) +
                                " rows");
  std::vector<std::vector<ScalarField>> fns(n);
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(rows[i].size()) != n)
      throw std::invalid_argument("metric entries: row " + std::to_string(i) +
                                  " must have " + std::to_string(n) + " columns");
    for (int j = 0; j < n; ++j) fns[i].push_back(parse_expression(rows[i][j], n));
  }
  return make_metric_field(
      chart,
      [fns, n](const Eigen::VectorXd& x) -> Eigen::MatrixXd {
        Eigen::MatrixXd G(n, n);
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) G(i, j) = fns[i][j](x);
        return G;
      },
      label);
}

GeometryInstance resolve_geometry(const ExperimentConfig& cfg) {
  if (cfg.geometry != "inline") {
    const CatalogEntry& e = catalog_get(cfg.geometry);
    return GeometryInstance{e.chart, e.g0, e.foliation, e.action, e.torus};
  }
  const InlineGeometry& ig = *cfg.inline_geometry;
  ChartPtr chart = make_chart(ig.lo, ig.hi, ig.periodic);
  if (chart->dim() < 2 || chart->dim() > 8)
    throw std::invalid_argument("inline geometry: dim must be in [2,8]");
  GeometryInstance out{chart,
                       metric_from_entries(chart, ig.g0_entries, "inline-g0"),
                       std::nullopt,
                       std::nullopt,
                       TorusImmersion{}};
  if (ig.torus_u_axis == ig.torus_v_axis || ig.torus_u_axis < 0 ||
      ig.torus_v_axis < 0 || ig.torus_u_axis >= chart->dim() ||
      ig.torus_v_axis >= chart->dim())
    throw std::invalid_argument("inline geometry: bad torus axes");
  const Eigen::VectorXd base = ig.torus_base;
  const int ua = ig.torus_u_axis, va = ig.torus_v_axis, n = chart->dim();
  out.torus = make_torus_immersion(
      chart,
      [base, ua, va](double u, double v) {
        Eigen::VectorXd x = base;
        x[ua] += u;
        x[va] += v;
        return x;
      },
      [n, ua, va](double, double) {
        return std::make_pair(Eigen::VectorXd::Unit(n, ua).eval(),
                              Eigen::VectorXd::Unit(n, va).eval());
      });
  if (!ig.vertical_frame.empty()) {
    std::vector<VectorField> frame;
    for (const auto& comps : ig.vertical_frame) {
      if (static_cast<int>(comps.size()) != n)
        throw std::invalid_argument("inline geometry: frame field needs n components");
      std::vector<ScalarField> parsed;
      for (const auto& c : comps) parsed.push_back(parse_expression(c, n));
      frame.push_back([parsed, n](const Eigen::VectorXd& x) -> Eigen::VectorXd {
        Eigen::VectorXd v(n);
        for (int i = 0; i < n; ++i) v[i] = parsed[i](x);
        return v;
      });
    }
    out.foliation = make_foliation(chart, std::move(frame), out.g0);
  }
  return out;
}

MetricField build_g1(const ExperimentConfig& cfg, const GeometryInstance& geo) {
  const auto need_foliation = [&]() -> const FoliationStructure& {
    if (!geo.foliation)
      throw std::invalid_argument("deformation '" + cfg.deformation +
                                  "' needs a foliation on the geometry");
    return *geo.foliation;
  };
  if (cfg.deformation == "conformal") {
    if (cfg.h_expr.empty())
      throw std::invalid_argument("conformal deformation needs an 'h' expression");
    return conformal_metric(geo.g0,
                            parse_expression(cfg.h_expr, geo.chart->dim()));
  }
  if (cfg.deformation == "canonical")
    return canonical_variation_metric(need_foliation(), geo.g0, cfg.s);
  if (cfg.deformation == "warping") {
    if (cfg.f_expr.empty())
      throw std::invalid_argument("warping deformation needs an 'f' expression");
    return warped_metric(need_foliation(), geo.g0,
                         parse_expression(cfg.f_expr, geo.chart->dim()),
                         cfg.stencil);
  }
  if (cfg.deformation == "cheeger") {
    if (!geo.action)
      throw std::invalid_argument("cheeger deformation needs a group action");
    return cheeger_metric(*geo.action, geo.g0, cfg.s);
  }
  // custom-g1
  if (cfg.g1_is_g0) return geo.g0;
  if (cfg.g1_entries.empty())
    throw std::invalid_argument("custom-g1 needs 'g1' entries or \"g0\"");
  return metric_from_entries(geo.chart, cfg.g1_entries, "custom-g1");
}

std::string tag(const std::string& base, int r) {
  return base + "[r=" + std::to_string(r) + "]";
}

Point random_point(const ChartPtr& chart, std::mt19937_64& rng) {
  Eigen::VectorXd x(chart->dim());
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (int i = 0; i < chart->dim(); ++i) {
    const double frac = chart->periodic(i) ? uni(rng) : 0.12 + 0.76 * uni(rng);
    x[i] = chart->lo(i) + frac * chart->length(i);
  }
  return Point(chart, x);
}

}  // namespace

void ExperimentConfig::validate() const {
  if (r_max < 2 || r_max > 8)
    throw std::invalid_argument("rmax must be in [2, 8]");
  if (!power_of_two(grid_n) || grid_n < 16 || grid_n > 256)
    throw std::invalid_argument("grid must be a power of two in [16, 256]");
  const std::vector<std::string> kinds = {"conformal", "canonical", "warping",
                                          "cheeger", "custom-g1"};
  if (std::find(kinds.begin(), kinds.end(), deformation) == kinds.end())
    throw std::invalid_argument("unknown deformation '" + deformation + "'");
  if (geometry == "inline" && !inline_geometry)
    throw std::invalid_argument("inline geometry selected but not provided");
  for (double t : t_grid)
    if (!(t > 0.0 && t < 1.0))
      throw std::invalid_argument("t-grid values must lie in (0,1)");
  for (const auto& o : outputs)
    if (o != "report" && o != "oracle_table" && o != "integrand_samples")
      throw std::invalid_argument("unknown output kind '" + o + "'");
  if (stencil.order != 2 && stencil.order != 4)
    throw std::invalid_argument("stencil order must be 2 or 4");
  if (!(stencil.step > 0.0) || !(stencil.step2 > 0.0))
    throw std::invalid_argument("stencil steps must be positive");
}

ExperimentConfig config_from_json(const nlohmann::json& j) {
  ExperimentConfig cfg;
  if (j.contains("geometry")) {
    if (j["geometry"].is_string()) {
      cfg.geometry = j["geometry"].get<std::string>();
    } else {
      cfg.geometry = "inline";
      const auto& g = j["geometry"];
      InlineGeometry ig;
      ig.dim = g.at("dim").get<int>();
      const auto lo = g.at("lo").get<std::vector<double>>();
      const auto hi = g.at("hi").get<std::vector<double>>();
      const auto per = g.at("periodic").get<std::vector<bool>>();
      ig.lo = Eigen::Map<const Eigen::VectorXd>(lo.data(), lo.size());
      ig.hi = Eigen::Map<const Eigen::VectorXd>(hi.data(), hi.size());
      ig.periodic = per;
      ig.g0_entries = g.at("g0").get<std::vector<std::vector<std::string>>>();
      if (g.contains("torus")) {
        ig.torus_u_axis = g["torus"].at("u_axis").get<int>();
        ig.torus_v_axis = g["torus"].at("v_axis").get<int>();
        const auto base = g["torus"].at("base").get<std::vector<double>>();
        ig.torus_base = Eigen::Map<const Eigen::VectorXd>(base.data(), base.size());
      } else {
        ig.torus_base = Eigen::VectorXd::Zero(ig.dim);
      }
      if (g.contains("vertical_frame"))
        ig.vertical_frame =
            g["vertical_frame"].get<std::vector<std::vector<std::string>>>();
      cfg.inline_geometry = std::move(ig);
    }
  }
  if (j.contains("deformation")) cfg.deformation = j["deformation"].get<std::string>();
  if (j.contains("h")) cfg.h_expr = j["h"].get<std::string>();
  if (j.contains("f")) cfg.f_expr = j["f"].get<std::string>();
  if (j.contains("s")) cfg.s = j["s"].get<double>();
  if (j.contains("g1")) {
    if (j["g1"].is_string() && j["g1"].get<std::string>() == "g0")
      cfg.g1_is_g0 = true;
    else
      cfg.g1_entries = j["g1"].get<std::vector<std::vector<std::string>>>();
  }
  if (j.contains("rmax")) cfg.r_max = j["rmax"].get<int>();
  if (j.contains("grid")) cfg.grid_n = j["grid"].get<int>();
  if (j.contains("seed")) cfg.seed = j["seed"].get<unsigned long>();
  if (j.contains("tgrid")) cfg.t_grid = j["tgrid"].get<std::vector<double>>();
  if (j.contains("outputs"))
    cfg.outputs = j["outputs"].get<std::vector<std::string>>();
  if (j.contains("out")) cfg.out_path = j["out"].get<std::string>();
  if (j.contains("format")) {
    const std::string f = j["format"].get<std::string>();
    if (f == "csv") cfg.format = OutputFormat::csv;
    else if (f == "json") cfg.format = OutputFormat::json;
    else throw std::invalid_argument("format must be csv or json");
  }
  if (j.contains("stencil")) {
    const auto& s = j["stencil"];
    if (s.contains("order")) cfg.stencil.order = s["order"].get<int>();
    if (s.contains("step")) cfg.stencil.step = s["step"].get<double>();
    if (s.contains("step2")) cfg.stencil.step2 = s["step2"].get<double>();
    if (s.contains("richardson"))
      cfg.stencil.richardson = s["richardson"].get<bool>();
  }
  return cfg;
}

RunResult run(const ExperimentConfig& cfg) {
  cfg.validate();
  const GeometryInstance geo = resolve_geometry(cfg);
  const MetricField g1 = build_g1(cfg, geo);
  const BlendPath path = make_blend_path(geo.g0, g1);
  const DerivativeStencil& st = cfg.stencil;

  RunResult out;
  auto assert_row = [&](const std::string& quantity, double value, double err,
                        bool ok, const std::string& anchor) {
    out.table.add(quantity, value, err, ok ? "pass" : "fail", anchor);
    if (!ok) {
      out.status = 1;
      out.failures.push_back(quantity);
    }
  };

  const bool want_report = std::find(cfg.outputs.begin(), cfg.outputs.end(),
                                     "report") != cfg.outputs.end();
  const bool want_oracle = std::find(cfg.outputs.begin(), cfg.outputs.end(),
                                     "oracle_table") != cfg.outputs.end();
  const bool want_samples = std::find(cfg.outputs.begin(), cfg.outputs.end(),
                                      "integrand_samples") != cfg.outputs.end();

  if (want_report) {
    const VariationReport rep =
        theorem_a_verdict(path, geo.torus, cfg.r_max, cfg.grid_n, st);
    const bool qualifies = rep.hypothesis_residuals.max() <= 1e-5;
    out.table.add("hypothesis_connection_residual",
                  rep.hypothesis_residuals.connection, 0.0,
                  qualifies ? "pass" : "reported", "hypothesis");
    out.table.add("hypothesis_curvature_residual",
                  rep.hypothesis_residuals.curvature, 0.0,
                  qualifies ? "pass" : "reported", "hypothesis");
    out.table.add("r1_integral", rep.r1_integral, rep.r1_error,
                  to_string(classify(rep.r1_integral, rep.r1_error)),
                  "first-order");
    if (qualifies) {
      out.table.add("first_order_lhs", rep.first_order.lhs,
                    rep.first_order.lhs_error, "reported", "first-order");
      out.table.add("first_order_rhs", rep.first_order.rhs,
                    rep.first_order.rhs_error, "reported", "first-order");
      const double gap = std::abs(rep.first_order.lhs - rep.first_order.rhs);
      const double tol =
          3.0 * (rep.first_order.lhs_error + rep.first_order.rhs_error);
      assert_row("first_order_gap", gap, tol, gap <= tol, "first-order");
    } else {
      out.table.add("first_order_gap", 0.0, 0.0, "skipped", "first-order");
    }
    for (const auto& e : rep.entries) {
      out.table.add(tag("dr_integral", e.r), e.dr_integral, e.dr_error,
                    to_string(e.verdict), "r-variation");
      out.table.add(tag("dr_integral_weighted", e.r), e.dr_integral_weighted,
                    e.dr_error, to_string(e.verdict), "r-variation");
      out.table.add(tag("spr_integral", e.r), e.spr_integral, e.spr_error,
                    to_string(e.spr_verdict), "r-variation");
      assert_row(tag("sign_equivalence", e.r),
                 e.sign_equivalence_ok ? 1.0 : 0.0, 0.0, e.sign_equivalence_ok,
                 "sign-equivalence");
    }
    if (cfg.deformation == "cheeger" && geo.action) {
      auto integrand = [&](double u, double v) {
        const Point p(geo.chart, geo.torus.map(u, v));
        const auto [X, Y] = geo.torus.frame(u, v);
        return cheeger_limit_condition(*geo.action, geo.g0, p,
                                       TangentVector(p, X), TangentVector(p, Y),
                                       st);
      };
      auto [ci, ce] = integrate_torus(integrand, cfg.grid_n);
      out.table.add("cheeger_limit_integral", ci, ce,
                    to_string(classify(ci, ce + 1e-9)), "cheeger-limit");
    }
  }

  if (want_oracle) {
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> comp(-1.0, 1.0);
    const int n = geo.chart->dim();
    const int samples = 10;
    for (int i = 0; i < samples; ++i) {
      const Point p = random_point(geo.chart, rng);
      Eigen::VectorXd xc(n), yc(n);
      for (int k = 0; k < n; ++k) {
        xc[k] = comp(rng);
        yc[k] = comp(rng);
      }
      const TangentVector X(p, xc), Y(p, yc);
      for (double t : cfg.t_grid) {
        const double closed = blend_curvature(path, t, p, X, Y, st);
        const double oracle = blend_curvature_oracle(path, t, p, X, Y, st);
        const double tol = 1e-5 * std::max(1.0, std::abs(oracle));
        std::ostringstream q;
        q << "oracle_gap[i=" << i << ";t=" << t << "]";
        assert_row(q.str(), std::abs(closed - oracle), tol,
                   std::abs(closed - oracle) <= tol, "blend-oracle");
      }
    }
  }

  if (want_samples) {
    const int m = 8;
    for (int r = 2; r <= cfg.r_max; ++r)
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
          const double u = kTwoPi * i / m, v = kTwoPi * j / m;
          const Point p(geo.chart, geo.torus.map(u, v));
          const auto [X, Y] = geo.torus.frame(u, v);
          const double val = t_derivative_analytic(
              path, p, TangentVector(p, X), TangentVector(p, Y), r, st);
          std::ostringstream q;
          q << "integrand[r=" << r << "][" << i << ";" << j << "]";
          out.table.add(q.str(), val, 0.0, "sample", "integrand");
        }
  }

  return out;
}

}  // namespace blendcurv
