#pragma once

#include "shiftgeom/common.hpp"
#include "shiftgeom/disk_calculus.hpp"
#include "shiftgeom/rational.hpp"

#include <memory>
#include <string>
#include <vector>

namespace shiftgeom {

/// Holomorphic frame lambda -> F(lambda), a rows x cols matrix of rational
/// functions with all poles outside the closed unit disk. The columns span E(lambda).
class AnalyticFrame {
 public:
  /// entries are row-major, entries.size() == rows * cols.
  AnalyticFrame(int rows, int cols, std::vector<Rational> entries);

  static AnalyticFrame constant(const CMatrix& value);
  /// Column vector frame with polynomial entries.
  static AnalyticFrame polynomial_column(const std::vector<Polynomial>& entries);
  /// Rank-one frame (1, lambda, ..., lambda^(N-1))^T: the Hardy-kernel line
  /// bundle k_{conj lambda} realized on the first N Taylor coefficients.
  static AnalyticFrame truncated_hardy(std::size_t truncation);

  int rows() const noexcept { return rows_; }
  int cols() const noexcept { return cols_; }
  const Rational& entry(int i, int j) const { return entries_[static_cast<std::size_t>(i * cols_ + j)]; }
  const std::vector<Rational>& entries() const noexcept { return entries_; }

  CMatrix eval(cplx lambda) const;
  CMatrix eval_dz(cplx lambda) const;

  friend bool operator==(const AnalyticFrame& a, const AnalyticFrame& b) = default;

 private:
  int rows_;
  int cols_;
  std::vector<Rational> entries_;
};

/// A frame value with its derivative at one point.
struct FrameSample {
  CMatrix value;
  CMatrix dz;
};

FrameSample sample(const AnalyticFrame& frame, cplx lambda);

inline constexpr double kMaxGramCondition = 1e12;

CMatrix gram(const AnalyticFrame& frame, cplx lambda);

/// Orthogonal projection onto ran F(lambda), F (F*F)^-1 F*.
CMatrix projection(const AnalyticFrame& frame, cplx lambda);
CMatrix projection(const FrameSample& s);

/// d Pi / dz = (I - Pi) F' (F*F)^-1 F*.
CMatrix projection_dz(const AnalyticFrame& frame, cplx lambda);
CMatrix projection_dz(const FrameSample& s);

/// ||d Pi/dz||^2_HS without forming the rows x rows matrix:
/// tr((F*F)^-1 F'* (I - Pi) F'). Used for the large tensored frames.
double projection_dz_hs_sq(const FrameSample& s);

/// trace(m* m).
double hs_norm_sq(const CMatrix& m);

/// Kronecker product a (x) b.
CMatrix kron(const CMatrix& a, const CMatrix& b);

/// ||d Pi_2 / dz||^2_HS for the subbundle spanned by the frame.
double curvature_defect(const AnalyticFrame& frame, cplx lambda);

inline constexpr std::size_t kDefaultTruncation = 512;

struct BundleCurvature {
  double total;            // shift_part + defect
  double shift_part;       // cols / (1 - |lambda|^2)^2
  double defect;           // curvature_defect
  double direct_total;     // ||d Pi/dz||^2 of k_{conj lambda} (x) F(lambda) on N coefficients
  double discrepancy;      // |direct_total - total|
  double truncation_error; // relative truncation bound of the coefficient realization
};

/// Curvature of the tensored bundle k_{conj lambda} (x) E(lambda), by the
/// sum formula and directly from the truncated tensored frame.
BundleCurvature full_bundle_curvature(const AnalyticFrame& frame, cplx lambda,
                                      std::size_t truncation = kDefaultTruncation);

struct GramBounds {
  double c_min;
  double c_max;
  double max_condition;
};

/// Extreme eigenvalues of F*F over the grid.
GramBounds gram_bounds(const AnalyticFrame& frame, const ComplexGrid& grid);

struct PointFailure {
  std::size_t index;
  std::string message;
};

/// ||d Pi_2/dz||^2 sampled on a grid. Failed points hold NaN and are listed.
struct DefectField {
  std::shared_ptr<const ComplexGrid> grid;
  std::vector<double> values;
  std::vector<PointFailure> failures;

  bool partial() const noexcept { return !failures.empty(); }
};

inline constexpr double kNonnegTolerance = 1e-10;

DefectField defect_field(const AnalyticFrame& frame, std::shared_ptr<const ComplexGrid> grid);

}  // namespace shiftgeom
