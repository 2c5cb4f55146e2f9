#include "blendcurv/chart.hpp"

#include <cmath>

namespace blendcurv {

Chart::Chart(Eigen::VectorXd lo, Eigen::VectorXd hi, std::vector<bool> periodic)
    : lo_(std::move(lo)), hi_(std::move(hi)), periodic_(std::move(periodic)) {
  const auto n = lo_.size();
  if (n < 2 || n > 16)
    throw std::invalid_argument("Chart: dimension must be in [2, 16]");
  if (hi_.size() != n || static_cast<Eigen::Index>(periodic_.size()) != n)
    throw std::invalid_argument("Chart: domain/periodic lists must match dim");
  for (Eigen::Index i = 0; i < n; ++i)
    if (!(hi_[i] - lo_[i] > 0.0))
      throw std::invalid_argument("Chart: every interval needs positive length");
}

Eigen::VectorXd Chart::canonicalize(Eigen::VectorXd coords) const {
  for (int i = 0; i < dim(); ++i) {
    if (!periodic_[i]) continue;
    const double len = length(i);
    double x = std::fmod(coords[i] - lo_[i], len);
    if (x < 0.0) x += len;
    coords[i] = lo_[i] + x;
  }
  return coords;
}

bool Chart::contains(const Eigen::VectorXd& coords) const {
  constexpr double kSlack = 1e-12;
  for (int i = 0; i < dim(); ++i) {
    if (periodic_[i]) continue;
    if (coords[i] < lo_[i] - kSlack || coords[i] > hi_[i] + kSlack) return false;
  }
  return true;
}

bool Chart::same_as(const Chart& other) const {
  if (dim() != other.dim()) return false;
  for (int i = 0; i < dim(); ++i) {
    if (periodic_[i] != other.periodic_[i]) return false;
    if (lo_[i] != other.lo_[i] || hi_[i] != other.hi_[i]) return false;
  }
  return true;
}

ChartPtr make_chart(Eigen::VectorXd lo, Eigen::VectorXd hi,
                    std::vector<bool> periodic) {
  return std::make_shared<const Chart>(std::move(lo), std::move(hi),
                                       std::move(periodic));
}

Point::Point(ChartPtr chart_in, Eigen::VectorXd coords_in)
    : chart(std::move(chart_in)), coords() {
  if (!chart) throw std::invalid_argument("Point: null chart");
  if (coords_in.size() != chart->dim())
    throw std::invalid_argument("Point: coordinate count must match chart dim");
  coords = chart->canonicalize(std::move(coords_in));
}

TangentVector::TangentVector(Point base_in, Eigen::VectorXd components_in)
    : base(std::move(base_in)), components(std::move(components_in)) {
  if (components.size() != base.chart->dim())
    throw std::invalid_argument("TangentVector: component count must match dim");
}

VectorField constant_field(const Eigen::VectorXd& components) {
  return [components](const Eigen::VectorXd&) { return components; };
}

}  // namespace blendcurv
