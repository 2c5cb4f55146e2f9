#include "blendcurv/experiment.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <fstream>
#include <iostream>

namespace {

constexpr int kUsageError = 2;

int run_cli(int argc, char** argv) {
  CLI::App app{
      "blendcurv: curvature of straight-line metric families, r-order "
      "variation averages over immersed tori, and oracle cross-checks"};

  std::string config_path, geometry, deformation, out_path, format;
  int rmax = -1, grid = -1;
  long long seed = -1;
  bool list = false;
  app.add_option("--config", config_path, "JSON config file");
  app.add_option("--geometry", geometry, "catalog geometry name");
  app.add_option("--deformation", deformation,
                 "conformal|canonical|warping|cheeger|custom-g1");
  app.add_option("--rmax", rmax, "highest variation order (2..8)");
  app.add_option("--grid", grid, "quadrature grid size (power of two, 16..256)");
  app.add_option("--seed", seed, "RNG seed for the oracle table");
  app.add_option("--out", out_path, "output file (default: stdout)");
  app.add_option("--format", format, "csv|json");
  app.add_flag("--list", list, "list catalog geometries and exit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsageError;
  }

  if (list) {
    for (const auto& name : blendcurv::catalog_list()) std::cout << name << "\n";
    return 0;
  }

  blendcurv::ExperimentConfig cfg;
  try {
    if (!config_path.empty()) {
      std::ifstream f(config_path);
      if (!f) {
        std::cerr << "cannot open config: " << config_path << "\n";
        return kUsageError;
      }
      cfg = blendcurv::config_from_json(nlohmann::json::parse(f));
    }
    // Flags mirror the top-level config keys and win over the file.
    if (!geometry.empty()) cfg.geometry = geometry;
    if (!deformation.empty()) cfg.deformation = deformation;
    if (rmax >= 0) cfg.r_max = rmax;
    if (grid >= 0) cfg.grid_n = grid;
    if (seed >= 0) cfg.seed = static_cast<unsigned long>(seed);
    if (!out_path.empty()) cfg.out_path = out_path;
    if (!format.empty()) {
      if (format == "csv") cfg.format = blendcurv::OutputFormat::csv;
      else if (format == "json") cfg.format = blendcurv::OutputFormat::json;
      else throw std::invalid_argument("format must be csv or json");
    }
    // Default parameters so the catalog experiments run without a config.
    if (cfg.deformation == "conformal" && cfg.h_expr.empty())
      cfg.h_expr = "0.2*cos(x2)";
    if (cfg.deformation == "warping" && cfg.f_expr.empty())
      cfg.f_expr = "0.2*sin(x1)";
    if (cfg.deformation == "custom-g1" && cfg.g1_entries.empty())
      cfg.g1_is_g0 = true;
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsageError;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kUsageError;
  }

  try {
    const blendcurv::RunResult result = blendcurv::run(cfg);
    if (cfg.out_path.empty()) {
      std::cout << blendcurv::render(result.table, cfg.format);
    } else {
      blendcurv::emit(result.table, cfg.format, cfg.out_path);
    }
    for (const auto& q : result.failures)
      std::cerr << "assertion failed: " << q << "\n";
    return result.status;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) { return run_cli(argc, argv); }
