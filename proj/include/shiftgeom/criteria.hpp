#pragma once

#include "shiftgeom/bundle.hpp"
#include "shiftgeom/disk_calculus.hpp"

#include <span>
#include <string>
#include <vector>

namespace shiftgeom {

/// (2/pi) * integral of green_function(z, lambda) * defect(z) dA over the grid.
/// lambda must lie within the covered radius 1 - margin.
double green_potential(const DefectField& field, cplx lambda);

/// Smallest green_potential over the probe points.
double green_boundedness(const DefectField& field, std::span<const cplx> probes);

/// sup over the grid of sqrt(defect(z)) * (1 - |z|).
double pointwise_bound(const DefectField& field);

/// carleson_constant with density = defect.
double carleson_check(const DefectField& field, int max_depth);

struct Thresholds {
  double green_bound = 1e3;  // M: condition (3) holds at grid scale iff green_inf >= -M
  double constant = 1e3;     // C: Carleson, pointwise and Gram-equivalence constant
};

struct CriteriaOptions {
  Thresholds thresholds;
  int carleson_depth = 8;
  int probe_stride = 4;
};

struct GreenProbe {
  std::size_t index;  // grid point index
  double defect;
  double potential;
};

struct CriteriaReport {
  GramBounds gram;
  double green_inf = 0.0;
  double carleson_const = 0.0;
  double pointwise_const = 0.0;
  bool gram_pass = false;
  bool green_pass = false;
  bool carleson_pass = false;
  bool pointwise_pass = false;
  bool partial = false;
  std::vector<GreenProbe> probes;
  std::vector<PointFailure> failures;
  Thresholds thresholds;
  int carleson_depth = 0;

  /// "similar_at_grid_scale", "not_established", or "partial".
  std::string verdict() const;
};

CriteriaReport similarity_verdict(const AnalyticFrame& frame, std::shared_ptr<const ComplexGrid> grid,
                                  const CriteriaOptions& options = {});

/// Criteria for an already computed field; gram bounds supplied by the caller.
CriteriaReport evaluate_criteria(const DefectField& field, const GramBounds& gram,
                                 const CriteriaOptions& options = {});

}  // namespace shiftgeom
