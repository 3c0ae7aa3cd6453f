#pragma once

#include "shiftgeom/common.hpp"
#include "shiftgeom/disk_calculus.hpp"
#include "shiftgeom/rational.hpp"

#include <vector>

namespace shiftgeom {

enum class SymbolClass {
  analytic,  // poles off the closed disk: H-infinity symbol
  general,   // poles off the unit circle
};

/// rows x cols matrix of rational functions of z, evaluated on the circle.
class MatrixSymbol {
 public:
  MatrixSymbol(int rows, int cols, std::vector<Rational> entries, SymbolClass cls);

  static MatrixSymbol scalar(Rational f, SymbolClass cls = SymbolClass::analytic);
  static MatrixSymbol constant(const CMatrix& value);

  int rows() const noexcept { return rows_; }
  int cols() const noexcept { return cols_; }
  SymbolClass symbol_class() const noexcept { return class_; }
  bool analytic() const noexcept { return class_ == SymbolClass::analytic; }
  const Rational& entry(int i, int j) const { return entries_[static_cast<std::size_t>(i * cols_ + j)]; }
  const std::vector<Rational>& entries() const noexcept { return entries_; }
  /// Sum of numerator and denominator degrees over all entries.
  std::size_t degree_sum() const;

  CMatrix operator()(cplx z) const;

  /// Phi*(z) on the circle: conj-transpose of Phi(z) with conj(z) = 1/z. General class.
  MatrixSymbol adjoint() const;

  friend MatrixSymbol operator*(const MatrixSymbol& a, const MatrixSymbol& b);
  friend bool operator==(const MatrixSymbol& a, const MatrixSymbol& b) = default;

 private:
  int rows_;
  int cols_;
  std::vector<Rational> entries_;
  SymbolClass class_;
};

/// Fourier blocks Phi^(k) for k in [-K, K] from one FFT of circle samples.
struct FourierTable {
  int max_index = 0;
  std::size_t samples = 0;
  double aliasing_bound = 0.0;  // max change in any coefficient when doubling the samples
  std::vector<CMatrix> blocks;  // blocks[k + max_index]

  const CMatrix& operator[](int k) const { return blocks.at(static_cast<std::size_t>(k + max_index)); }
};

FourierTable fourier_table(const MatrixSymbol& symbol, int max_index);

/// k-th Fourier coefficient, integral over the circle of Phi(z) z^-k |dz| / 2pi.
CMatrix fourier_block(const MatrixSymbol& symbol, int k);

/// Block Toeplitz section [Phi^(j - k)], j, k = 0..N-1.
struct ToeplitzSection {
  int order = 0;
  int block_rows = 0;
  int block_cols = 0;
  double aliasing_bound = 0.0;
  CMatrix matrix;
};

/// Analytic symbols whose negative coefficients exceed 1e-12 are rejected;
/// the strictly upper blocks of an analytic section are exactly zero.
ToeplitzSection toeplitz_section(const MatrixSymbol& symbol, int order);

/// Largest singular value.
double operator_norm(const CMatrix& m);

/// ||T_f T_g - T_{fg}|| on N-sections; both symbols analytic.
double multiplicativity_check(const MatrixSymbol& f, const MatrixSymbol& g, int order);

/// ||T_{F*} (k_lambda e) - k_lambda F(lambda)* e|| on N-sections. e has F.rows() entries.
double kernel_action_check(const MatrixSymbol& f, cplx lambda, const CVector& e, int order);

/// ||T_{F*} S* - S* T_{F*}|| on the leading (N-1) block rows of N-sections.
double intertwining_check(const MatrixSymbol& f, int order);

struct InnerOuter {
  std::vector<cplx> zeros;  // zeros in the disk, with multiplicity
  Rational inner;           // prod (z - a)/(1 - conj(a) z)
  Rational outer;           // f / inner
  double inner_modulus_error = 0.0;  // max | |inner| - 1 | on circle samples
  double modulus_error = 0.0;        // max | |outer| - |f| | on circle samples
  int outer_winding = 0;             // argument-principle zero count of outer in the disk
};

inline constexpr double kBoundaryZeroTolerance = 1e-10;

/// Inner-outer factorization of a scalar rational analytic function.
InnerOuter scalar_inner_outer(const Rational& f);

struct MarginResult {
  double delta = 0.0;  // min over grid of sigma_min(theta(z))
  cplx argmin = 0.0;
  std::vector<std::size_t> failures;
};

MarginResult left_invertibility_margin(const MatrixSymbol& theta, const ComplexGrid& grid);

/// Winding number of t -> f(e^{it}) around 0.
int winding_number(const Rational& f, std::size_t samples = 4096);

}  // namespace shiftgeom
