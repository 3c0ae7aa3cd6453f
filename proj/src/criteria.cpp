#include "shiftgeom/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace shiftgeom {

namespace {

// The partial-field convention: failed samples carry NaN and contribute nothing.
std::vector<double> usable_density(const DefectField& field) {
  std::vector<double> d(field.values.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    const double v = field.values[i];
    if (std::isnan(v)) {
      d[i] = 0.0;
      continue;
    }
    if (v < -kNonnegTolerance)
      throw Error(ErrorKind::data, "negative defect sample at index " + std::to_string(i), "field");
    d[i] = std::max(v, 0.0);
  }
  return d;
}

const ComplexGrid& grid_of(const DefectField& field) {
  if (!field.grid) throw Error(ErrorKind::parameter, "defect field has no grid", "field");
  if (field.values.size() != field.grid->size())
    throw Error(ErrorKind::data, "defect field length does not match its grid", "field");
  return *field.grid;
}

double potential_with(const ComplexGrid& grid, std::span<const double> density, cplx lambda) {
  if (std::abs(lambda) > 1.0 - grid.margin())
    throw Error(ErrorKind::domain, "green potential probe outside the grid coverage radius 1 - margin");
  return (2.0 / kPi) * green_quadrature(grid, density, lambda);
}

}  // namespace

double green_potential(const DefectField& field, cplx lambda) {
  const ComplexGrid& grid = grid_of(field);
  const std::vector<double> density = usable_density(field);
  return potential_with(grid, density, lambda);
}

double green_boundedness(const DefectField& field, std::span<const cplx> probes) {
  const ComplexGrid& grid = grid_of(field);
  if (probes.empty()) throw Error(ErrorKind::parameter, "no probe points", "probes");
  const std::vector<double> density = usable_density(field);
  std::vector<double> values(probes.size());
  parallel_for(probes.size(), [&](std::size_t i) { values[i] = potential_with(grid, density, probes[i]); });
  return *std::min_element(values.begin(), values.end());
}

double pointwise_bound(const DefectField& field) {
  const ComplexGrid& grid = grid_of(field);
  const std::vector<double> density = usable_density(field);
  double best = 0.0;
  for (std::size_t i = 0; i < density.size(); ++i)
    best = std::max(best, std::sqrt(density[i]) * (1.0 - std::abs(grid.points()[i])));
  return best;
}

double carleson_check(const DefectField& field, int max_depth) {
  const ComplexGrid& grid = grid_of(field);
  const std::vector<double> density = usable_density(field);
  return carleson_constant(density, grid, max_depth);
}

std::string CriteriaReport::verdict() const {
  if (partial) return "partial";
  if (gram_pass && green_pass && carleson_pass && pointwise_pass) return "similar_at_grid_scale";
  return "not_established";
}

CriteriaReport evaluate_criteria(const DefectField& field, const GramBounds& gram, const CriteriaOptions& options) {
  const ComplexGrid& grid = grid_of(field);
  const std::vector<double> density = usable_density(field);
  CriteriaReport r;
  r.gram = gram;
  r.thresholds = options.thresholds;
  r.carleson_depth = options.carleson_depth;
  r.failures = field.failures;
  r.partial = field.partial();

  const std::vector<std::size_t> idx = grid.coarse_indices(options.probe_stride);
  r.probes.resize(idx.size());
  parallel_for(idx.size(), [&](std::size_t p) {
    const std::size_t i = idx[p];
    r.probes[p] = {i, field.values[i], potential_with(grid, density, grid.points()[i])};
  });
  r.green_inf = 0.0;
  for (const auto& p : r.probes) r.green_inf = std::min(r.green_inf, p.potential);
  r.carleson_const = carleson_constant(density, grid, options.carleson_depth);
  r.pointwise_const = pointwise_bound(field);

  const double c = options.thresholds.constant;
  r.gram_pass = gram.c_min > 0.0 && gram.c_max <= c && 1.0 / gram.c_min <= c;
  r.green_pass = r.green_inf >= -options.thresholds.green_bound;
  r.carleson_pass = r.carleson_const <= c;
  r.pointwise_pass = r.pointwise_const <= c;
  return r;
}

CriteriaReport similarity_verdict(const AnalyticFrame& frame, std::shared_ptr<const ComplexGrid> grid,
                                  const CriteriaOptions& options) {
  const GramBounds gram = gram_bounds(frame, *grid);
  const DefectField field = defect_field(frame, grid);
  return evaluate_criteria(field, gram, options);
}

}  // namespace shiftgeom
