#pragma once

#include "blendcurv/geometry_catalog.hpp"
#include "blendcurv/result_table.hpp"

#include <nlohmann/json_fwd.hpp>

namespace blendcurv {

/// A user-defined geometry: chart + metric entries as expressions, a
/// coordinate 2-torus, and optionally a vertical frame.
struct InlineGeometry {
  int dim = 0;
  Eigen::VectorXd lo, hi;
  std::vector<bool> periodic;
  std::vector<std::vector<std::string>> g0_entries;
  int torus_u_axis = 0;
  int torus_v_axis = 1;
  Eigen::VectorXd torus_base;
  std::vector<std::vector<std::string>> vertical_frame;  // optional
};

struct ExperimentConfig {
  std::string geometry = "flat3torus";   // catalog name, or "inline"
  std::optional<InlineGeometry> inline_geometry;

  std::string deformation = "custom-g1";  // conformal|canonical|warping|cheeger|custom-g1
  std::string h_expr;                     // conformal
  std::string f_expr;                     // warping
  double s = 0.5;                         // canonical / cheeger
  std::vector<std::vector<std::string>> g1_entries;  // custom-g1 ("g0" shorthand below)
  bool g1_is_g0 = false;

  int r_max = 4;
  int grid_n = 32;
  unsigned long seed = 1;
  DerivativeStencil stencil;
  std::vector<double> t_grid = {0.1, 0.3, 0.5, 0.7, 0.9};
  std::vector<std::string> outputs = {"report"};

  std::string out_path;                  // empty: stdout
  OutputFormat format = OutputFormat::csv;

  /// Throws std::invalid_argument on contract violations (r_max in [2,8],
  /// grid a power of two in [16,256], known deformation, params present).
  void validate() const;
};

ExperimentConfig config_from_json(const nlohmann::json& j);

struct RunResult {
  ResultTable table;
  int status = 0;                       // 0 pass, 1 assertion failure
  std::vector<std::string> failures;    // quantities of failing rows
};

/// Executes the configured experiment: theorem report, optional oracle
/// cross-check table and integrand samples. Status 0 iff every internal
/// consistency assertion passed.
RunResult run(const ExperimentConfig& config);

}  // namespace blendcurv
