#include "shiftgeom/bundle.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>

namespace shiftgeom {

AnalyticFrame::AnalyticFrame(int rows, int cols, std::vector<Rational> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  if (rows_ < 1 || cols_ < 1) throw Error(ErrorKind::data, "frame needs rows, cols >= 1", "rows");
  if (cols_ > rows_) throw Error(ErrorKind::data, "frame rank cols exceeds rows", "cols");
  if (entries_.size() != static_cast<std::size_t>(rows_) * static_cast<std::size_t>(cols_))
    throw Error(ErrorKind::data, "frame entry count does not match rows * cols", "entries");
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j)
      if (!(entry(i, j).min_pole_modulus() > 1.0))
        throw Error(ErrorKind::data, "frame entry has a pole in the closed unit disk",
                    "entries[" + std::to_string(i) + "][" + std::to_string(j) + "].den");
}

AnalyticFrame AnalyticFrame::constant(const CMatrix& value) {
  std::vector<Rational> e;
  e.reserve(static_cast<std::size_t>(value.size()));
  for (Eigen::Index i = 0; i < value.rows(); ++i)
    for (Eigen::Index j = 0; j < value.cols(); ++j) e.push_back(Rational::constant(value(i, j)));
  return AnalyticFrame(static_cast<int>(value.rows()), static_cast<int>(value.cols()), std::move(e));
}

AnalyticFrame AnalyticFrame::polynomial_column(const std::vector<Polynomial>& entries) {
  std::vector<Rational> e;
  e.reserve(entries.size());
  for (const auto& p : entries) e.emplace_back(p);
  return AnalyticFrame(static_cast<int>(entries.size()), 1, std::move(e));
}

AnalyticFrame AnalyticFrame::truncated_hardy(std::size_t truncation) {
  if (truncation < 1) throw Error(ErrorKind::parameter, "truncation must be >= 1", "truncation");
  std::vector<Polynomial> e;
  e.reserve(truncation);
  for (std::size_t n = 0; n < truncation; ++n) e.push_back(Polynomial::monomial(n));
  return polynomial_column(e);
}

CMatrix AnalyticFrame::eval(cplx lambda) const {
  CMatrix m(rows_, cols_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) m(i, j) = entry(i, j)(lambda);
  return m;
}

CMatrix AnalyticFrame::eval_dz(cplx lambda) const {
  CMatrix m(rows_, cols_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) m(i, j) = entry(i, j).derivative_at(lambda);
  return m;
}

FrameSample sample(const AnalyticFrame& frame, cplx lambda) {
  if (!(std::abs(lambda) < 1.0)) throw Error(ErrorKind::parameter, "|lambda| must be < 1", "lambda");
  return {frame.eval(lambda), frame.eval_dz(lambda)};
}

CMatrix gram(const AnalyticFrame& frame, cplx lambda) {
  const CMatrix f = sample(frame, lambda).value;
  return f.adjoint() * f;
}

namespace {

// Cholesky factor of the Gram matrix with the conditioning gate applied.
struct GramFactor {
  Eigen::LLT<CMatrix> llt;
  double condition;
};

GramFactor factor_gram(const CMatrix& g) {
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(g, Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  const double cond = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
  if (!(cond <= kMaxGramCondition)) {
    std::ostringstream msg;
    msg << "Gram matrix ill-conditioned: eigenvalues in [" << lo << ", " << hi << "], condition " << cond
        << " exceeds " << kMaxGramCondition;
    throw Error(ErrorKind::conditioning, msg.str());
  }
  GramFactor out{Eigen::LLT<CMatrix>(g), cond};
  if (out.llt.info() != Eigen::Success) throw Error(ErrorKind::conditioning, "Cholesky factorization of Gram matrix failed");
  return out;
}

}  // namespace

CMatrix projection(const FrameSample& s) {
  const GramFactor gf = factor_gram(s.value.adjoint() * s.value);
  // Pi = Y* Y with Y = L^-1 F*, so Pi is Hermitian by construction.
  const CMatrix y = gf.llt.matrixL().solve(s.value.adjoint());
  return y.adjoint() * y;
}

CMatrix projection(const AnalyticFrame& frame, cplx lambda) { return projection(sample(frame, lambda)); }

CMatrix projection_dz(const FrameSample& s) {
  const GramFactor gf = factor_gram(s.value.adjoint() * s.value);
  const CMatrix w = gf.llt.solve(s.value.adjoint());          // (F*F)^-1 F*
  const CMatrix normal = s.dz - s.value * (w * s.dz);          // (I - Pi) F'
  return normal * w;
}

CMatrix projection_dz(const AnalyticFrame& frame, cplx lambda) { return projection_dz(sample(frame, lambda)); }

double projection_dz_hs_sq(const FrameSample& s) {
  const CMatrix g = s.value.adjoint() * s.value;
  const GramFactor gf = factor_gram(g);
  const CMatrix b = s.value.adjoint() * s.dz;                  // F* F'
  const CMatrix k = s.dz.adjoint() * s.dz - b.adjoint() * gf.llt.solve(b);
  return gf.llt.solve(k).trace().real();
}

double hs_norm_sq(const CMatrix& m) { return m.squaredNorm(); }

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

double curvature_defect(const AnalyticFrame& frame, cplx lambda) {
  return hs_norm_sq(projection_dz(frame, lambda));
}

namespace {

// Relative size of the coefficients dropped when k_{conj lambda} and its
// derivative are cut at `n` terms: the tails of sum x^m and sum m^2 x^(m-1).
double kernel_truncation_bound(double x, std::size_t n) {
  const double nn = static_cast<double>(n);
  const double d = 1.0 - x;
  const double g_tail = std::pow(x, nn);  // relative tail of sum x^m
  const double deriv_tail =
      std::pow(x, nn - 1.0) * (nn * nn / d + 2.0 * nn * x / (d * d) + x * (1.0 + x) / (d * d * d));
  const double deriv_full = (1.0 + x) / (d * d * d);
  return std::max(g_tail, deriv_tail / deriv_full);
}

constexpr double kMaxTruncationError = 1e-10;

}  // namespace

BundleCurvature full_bundle_curvature(const AnalyticFrame& frame, cplx lambda, std::size_t truncation) {
  if (truncation < 2) throw Error(ErrorKind::parameter, "truncation must be >= 2", "truncation");
  const FrameSample s = sample(frame, lambda);
  const double x = std::norm(lambda);
  const double trunc_err = kernel_truncation_bound(x, truncation);
  if (trunc_err > kMaxTruncationError) {
    std::ostringstream msg;
    msg << "truncation " << truncation << " too small for |lambda| = " << std::sqrt(x)
        << " (relative tail bound " << trunc_err << ")";
    throw Error(ErrorKind::accuracy, msg.str(), "truncation");
  }

  BundleCurvature out{};
  out.shift_part = frame.cols() / ((1.0 - x) * (1.0 - x));
  out.defect = hs_norm_sq(projection_dz(s));
  out.total = out.shift_part + out.defect;

  // k_{conj lambda}(z) = sum lambda^m z^m and its lambda-derivative.
  const auto n = static_cast<Eigen::Index>(truncation);
  CMatrix k(n, 1);
  CMatrix dk(n, 1);
  cplx p = 1.0;
  dk(0, 0) = 0.0;
  for (Eigen::Index m = 0; m < n; ++m) {
    k(m, 0) = p;
    if (m + 1 < n) dk(m + 1, 0) = static_cast<double>(m + 1) * p;
    p *= lambda;
  }
  FrameSample tensored{kron(k, s.value), kron(dk, s.value) + kron(k, s.dz)};
  out.direct_total = projection_dz_hs_sq(tensored);
  out.discrepancy = std::abs(out.direct_total - out.total);
  out.truncation_error = trunc_err;
  return out;
}

GramBounds gram_bounds(const AnalyticFrame& frame, const ComplexGrid& grid) {
  if (grid.size() == 0) throw Error(ErrorKind::parameter, "grid is empty", "grid");
  std::vector<double> lo(grid.size());
  std::vector<double> hi(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) {
    const CMatrix g = gram(frame, grid.points()[i]);
    Eigen::SelfAdjointEigenSolver<CMatrix> eig(g, Eigen::EigenvaluesOnly);
    lo[i] = eig.eigenvalues().minCoeff();
    hi[i] = eig.eigenvalues().maxCoeff();
  });
  GramBounds b{lo[0], hi[0], 0.0};
  for (std::size_t i = 0; i < grid.size(); ++i) {
    b.c_min = std::min(b.c_min, lo[i]);
    b.c_max = std::max(b.c_max, hi[i]);
    const double cond = lo[i] > 0.0 ? hi[i] / lo[i] : std::numeric_limits<double>::infinity();
    b.max_condition = std::max(b.max_condition, cond);
  }
  return b;
}

DefectField defect_field(const AnalyticFrame& frame, std::shared_ptr<const ComplexGrid> grid) {
  if (!grid) throw Error(ErrorKind::parameter, "defect_field needs a grid", "grid");
  DefectField field{grid, std::vector<double>(grid->size()), {}};
  std::vector<std::optional<std::string>> errors(grid->size());
  parallel_for(grid->size(), [&](std::size_t i) {
    try {
      const double v = curvature_defect(frame, grid->points()[i]);
      if (!(v >= -kNonnegTolerance)) {
        errors[i] = "negative curvature defect " + std::to_string(v);
        field.values[i] = std::numeric_limits<double>::quiet_NaN();
      } else {
        field.values[i] = v;
      }
    } catch (const Error& e) {
      errors[i] = e.what();
      field.values[i] = std::numeric_limits<double>::quiet_NaN();
    }
  });
  for (std::size_t i = 0; i < errors.size(); ++i)
    if (errors[i]) field.failures.push_back({i, *errors[i]});
  return field;
}

}  // namespace shiftgeom
