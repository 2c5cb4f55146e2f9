#pragma once

#include "blendcurv/deformations.hpp"
#include "blendcurv/torus_lab.hpp"

#include <optional>

namespace blendcurv {

/// A pre-verified example geometry: base metric, an immersed torus, and
/// (when meaningful) a metric foliation and an isometric action.
struct CatalogEntry {
  std::string name;
  std::string description;
  ChartPtr chart;
  MetricField g0;
  std::optional<FoliationStructure> foliation;
  std::optional<GroupAction> action;
  TorusImmersion torus;
  /// Declared hypothesis bounds; `claims_totally_geodesic_flat` entries are
  /// load-checked against 1e−5, the rest record their true residual scale.
  bool claims_totally_geodesic_flat = true;
  double expected_connection_residual = 1e-5;
  double expected_curvature_residual = 1e-5;
};

std::vector<std::string> catalog_list();

/// Throws std::invalid_argument for unknown names. Entries are validated
/// once per process (residual self-test, Killing gates).
const CatalogEntry& catalog_get(const std::string& name);

// Loose geometries used by tests and docs.

/// Round unit 2-sphere in colatitude/longitude, poles trimmed by 1e−2.
MetricField round_sphere_metric();

/// Flat n-torus with the identity metric on [0, 2π)^n.
MetricField flat_torus_metric(int n);

}  // namespace blendcurv
