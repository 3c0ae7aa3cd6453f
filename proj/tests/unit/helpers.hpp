#pragma once

#include "shiftgeom/bundle.hpp"
#include "shiftgeom/common.hpp"

#include <cmath>
#include <random>
#include <vector>

namespace testing {

using shiftgeom::cplx;

inline std::mt19937_64& rng() {
  static std::mt19937_64 gen(20240611);
  return gen;
}

// Uniform in the disk of radius r_max.
inline cplx random_point(double r_max) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double r = r_max * std::sqrt(u(rng()));
  const double t = 2.0 * shiftgeom::kPi * u(rng());
  return std::polar(r, t);
}

inline shiftgeom::CMatrix random_matrix(int rows, int cols) {
  std::normal_distribution<double> g(0.0, 1.0);
  shiftgeom::CMatrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = cplx(g(rng()), g(rng()));
  return m;
}

inline double rel_err(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

inline shiftgeom::Polynomial poly(std::vector<cplx> c) { return shiftgeom::Polynomial(std::move(c)); }

// (1, lambda)^T
inline shiftgeom::AnalyticFrame line_frame() {
  return shiftgeom::AnalyticFrame::polynomial_column({poly({1.0}), poly({0.0, 1.0})});
}

// (1, lambda, lambda^2)^T
inline shiftgeom::AnalyticFrame quadratic_frame() {
  return shiftgeom::AnalyticFrame::polynomial_column({poly({1.0}), poly({0.0, 1.0}), poly({0.0, 0.0, 1.0})});
}

// (1, exp lambda)^T through its degree-12 Taylor polynomial
inline shiftgeom::AnalyticFrame exp_frame() {
  std::vector<cplx> c;
  double f = 1.0;
  for (int k = 0; k <= 12; ++k) {
    if (k > 0) f *= k;
    c.emplace_back(1.0 / f);
  }
  return shiftgeom::AnalyticFrame::polynomial_column({poly({1.0}), poly(c)});
}

// (1, 1/(1 - 0.5 lambda))^T
inline shiftgeom::AnalyticFrame rational_frame() {
  using shiftgeom::Rational;
  return shiftgeom::AnalyticFrame(2, 1, {Rational(poly({1.0})), Rational(poly({1.0}), poly({1.0, -0.5}))});
}

}  // namespace testing
