#include "shiftgeom/rational.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>

namespace shiftgeom {

Polynomial::Polynomial(std::vector<cplx> coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) coeffs_.push_back(0.0);
  trim();
}

Polynomial Polynomial::monomial(std::size_t degree, cplx c) {
  std::vector<cplx> v(degree + 1, cplx{0.0});
  v[degree] = c;
  return Polynomial(std::move(v));
}

Polynomial Polynomial::from_roots(std::span<const cplx> roots, cplx leading) {
  Polynomial p = constant(leading);
  for (cplx r : roots) p = p * Polynomial({-r, 1.0});
  return p;
}

void Polynomial::trim() {
  while (coeffs_.size() > 1 && coeffs_.back() == cplx{0.0}) coeffs_.pop_back();
}

bool Polynomial::is_zero() const noexcept {
  return coeffs_.size() == 1 && coeffs_[0] == cplx{0.0};
}

cplx Polynomial::operator()(cplx z) const {
  cplx acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * z + *it;
  return acc;
}

Polynomial Polynomial::derivative() const {
  if (coeffs_.size() == 1) return constant(0.0);
  std::vector<cplx> d(coeffs_.size() - 1);
  for (std::size_t n = 1; n < coeffs_.size(); ++n) d[n - 1] = static_cast<double>(n) * coeffs_[n];
  return Polynomial(std::move(d));
}

std::vector<cplx> Polynomial::roots() const {
  const std::size_t deg = degree();
  if (deg == 0) return {};
  // Exact zeros at the origin first; they are common (z^k factors) and the
  // companion matrix handles them poorly when repeated.
  std::size_t low = 0;
  while (coeffs_[low] == cplx{0.0}) ++low;
  std::vector<cplx> out(low, cplx{0.0});
  const std::size_t m = deg - low;
  if (m == 0) return out;
  const cplx lead = coeffs_.back();
  CMatrix companion = CMatrix::Zero(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
  for (std::size_t i = 1; i < m; ++i) companion(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i - 1)) = 1.0;
  for (std::size_t i = 0; i < m; ++i)
    companion(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(m - 1)) = -coeffs_[low + i] / lead;
  Eigen::ComplexEigenSolver<CMatrix> solver(companion, /*computeEigenvectors=*/false);
  const Polynomial dp = derivative();
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
    cplx r = solver.eigenvalues()(i);
    for (int it = 0; it < 3; ++it) {
      const cplx d = dp(r);
      if (std::abs(d) < 1e-300) break;
      const cplx step = (*this)(r) / d;
      if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) break;
      if (std::abs(step) > 1e-6 * (1.0 + std::abs(r))) break;  // multiple root; leave it
      r -= step;
    }
    out.push_back(r);
  }
  return out;
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
  std::vector<cplx> c(std::max(a.coeffs_.size(), b.coeffs_.size()), cplx{0.0});
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i) c[i] += a.coeffs_[i];
  for (std::size_t i = 0; i < b.coeffs_.size(); ++i) c[i] += b.coeffs_[i];
  return Polynomial(std::move(c));
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  std::vector<cplx> c(a.coeffs_.size() + b.coeffs_.size() - 1, cplx{0.0});
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j) c[i + j] += a.coeffs_[i] * b.coeffs_[j];
  return Polynomial(std::move(c));
}

Polynomial operator*(cplx s, const Polynomial& p) {
  std::vector<cplx> c = p.coeffs_;
  for (auto& x : c) x *= s;
  return Polynomial(std::move(c));
}

Rational::Rational(Polynomial num, Polynomial den) : num_(std::move(num)), den_(std::move(den)) {
  if (den_.is_zero()) throw Error(ErrorKind::data, "rational function with zero denominator", "den");
  num_dz_ = num_.derivative();
  den_dz_ = den_.derivative();
}

cplx Rational::operator()(cplx z) const {
  const cplx d = den_(z);
  if (d == cplx{0.0}) throw Error(ErrorKind::pole, "rational function evaluated at a pole");
  return num_(z) / d;
}

cplx Rational::derivative_at(cplx z) const {
  const cplx d = den_(z);
  if (d == cplx{0.0}) throw Error(ErrorKind::pole, "rational function differentiated at a pole");
  return (num_dz_(z) * d - num_(z) * den_dz_(z)) / (d * d);
}

double Rational::min_pole_modulus() const {
  double best = std::numeric_limits<double>::infinity();
  for (cplx p : poles()) best = std::min(best, std::abs(p));
  return best;
}

double Rational::min_pole_circle_distance() const {
  double best = std::numeric_limits<double>::infinity();
  for (cplx p : poles()) best = std::min(best, std::abs(std::abs(p) - 1.0));
  return best;
}

Rational operator+(const Rational& a, const Rational& b) {
  if (a.den_ == b.den_) return Rational(a.num_ + b.num_, a.den_);
  return Rational(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}

Rational operator*(const Rational& a, const Rational& b) {
  return Rational(a.num_ * b.num_, a.den_ * b.den_);
}

}  // namespace shiftgeom
