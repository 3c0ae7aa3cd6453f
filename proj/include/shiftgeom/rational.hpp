#pragma once

#include "shiftgeom/common.hpp"

#include <vector>

namespace shiftgeom {

/// Complex polynomial with ascending coefficients c[0] + c[1] z + ...
class Polynomial {
 public:
  Polynomial() : coeffs_{cplx{0.0}} {}
  explicit Polynomial(std::vector<cplx> coeffs);

  static Polynomial constant(cplx c) { return Polynomial({c}); }
  static Polynomial monomial(std::size_t degree, cplx c = 1.0);
  /// c * prod (z - r) over the given roots.
  static Polynomial from_roots(std::span<const cplx> roots, cplx leading = 1.0);

  const std::vector<cplx>& coeffs() const noexcept { return coeffs_; }
  std::size_t degree() const noexcept { return coeffs_.size() - 1; }
  bool is_zero() const noexcept;

  cplx operator()(cplx z) const;
  Polynomial derivative() const;

  /// Roots via the companion matrix, refined by a few Newton steps.
  std::vector<cplx> roots() const;

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(cplx s, const Polynomial& p);
  friend bool operator==(const Polynomial& a, const Polynomial& b) = default;

 private:
  void trim();
  std::vector<cplx> coeffs_;
};

/// num / den. Poles are whatever roots den has; callers validate their location.
class Rational {
 public:
  Rational() : Rational(Polynomial::constant(0.0), Polynomial::constant(1.0)) {}
  Rational(Polynomial num, Polynomial den);
  explicit Rational(Polynomial num) : Rational(std::move(num), Polynomial::constant(1.0)) {}
  static Rational constant(cplx c) { return Rational(Polynomial::constant(c)); }

  const Polynomial& num() const noexcept { return num_; }
  const Polynomial& den() const noexcept { return den_; }

  cplx operator()(cplx z) const;
  /// Exact complex derivative via the quotient rule.
  cplx derivative_at(cplx z) const;

  std::vector<cplx> poles() const { return den_.roots(); }
  /// Smallest |pole|, +infinity for a polynomial.
  double min_pole_modulus() const;
  /// Smallest ||pole| - 1|, +infinity for a polynomial.
  double min_pole_circle_distance() const;

  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend bool operator==(const Rational& a, const Rational& b) = default;

 private:
  Polynomial num_;
  Polynomial den_;
  Polynomial num_dz_;
  Polynomial den_dz_;
};

}  // namespace shiftgeom
