#include "shiftgeom/toeplitz.hpp"

#include "shiftgeom/bundle.hpp"
#include "shiftgeom/rkhs.hpp"

#include <Eigen/SVD>
#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <optional>
#include <sstream>

namespace shiftgeom {

namespace {

constexpr double kAnalyticNegativeTolerance = 1e-12;
constexpr std::size_t kMaxFourierSamples = std::size_t{1} << 22;

// Coefficients conj(c_k) in reverse order: z^p conj(p(z)) on the circle.
Polynomial conj_reversed(const Polynomial& p) {
  const auto& c = p.coeffs();
  std::vector<cplx> r(c.size());
  for (std::size_t k = 0; k < c.size(); ++k) r[c.size() - 1 - k] = std::conj(c[k]);
  return Polynomial(std::move(r));
}

Rational rational_adjoint(const Rational& f) {
  const std::size_t p = f.num().degree();
  const std::size_t q = f.den().degree();
  Polynomial num = conj_reversed(f.num());
  Polynomial den = conj_reversed(f.den());
  if (q >= p)
    num = Polynomial::monomial(q - p) * num;
  else
    den = Polynomial::monomial(p - q) * den;
  return Rational(std::move(num), std::move(den));
}

std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

// Forward DFT scaled by 1/M of t -> symbol entries at e^{2 pi i t/M}.
std::vector<std::vector<cplx>> sampled_dft(const MatrixSymbol& symbol, std::size_t samples) {
  const std::size_t entries = symbol.entries().size();
  std::vector<std::vector<cplx>> out(entries, std::vector<cplx>(samples));
  std::vector<cplx> in(samples);
  std::vector<cplx> res(samples);
  fftw_plan plan;
  {
    std::lock_guard lock(fftw_planner_mutex());
    plan = fftw_plan_dft_1d(static_cast<int>(samples), reinterpret_cast<fftw_complex*>(in.data()),
                            reinterpret_cast<fftw_complex*>(res.data()), FFTW_FORWARD, FFTW_ESTIMATE);
  }
  std::vector<cplx> nodes(samples);
  for (std::size_t t = 0; t < samples; ++t) nodes[t] = std::polar(1.0, 2.0 * kPi * static_cast<double>(t) / samples);
  for (std::size_t e = 0; e < entries; ++e) {
    const Rational& f = symbol.entries()[e];
    for (std::size_t t = 0; t < samples; ++t) in[t] = f(nodes[t]);
    fftw_execute(plan);
    const double scale = 1.0 / static_cast<double>(samples);
    for (std::size_t t = 0; t < samples; ++t) out[e][t] = res[t] * scale;
  }
  {
    std::lock_guard lock(fftw_planner_mutex());
    fftw_destroy_plan(plan);
  }
  return out;
}

cplx coefficient(const std::vector<cplx>& dft, int k) {
  const auto m = static_cast<long>(dft.size());
  long idx = k % m;
  if (idx < 0) idx += m;
  return dft[static_cast<std::size_t>(idx)];
}

}  // namespace

MatrixSymbol::MatrixSymbol(int rows, int cols, std::vector<Rational> entries, SymbolClass cls)
    : rows_(rows), cols_(cols), entries_(std::move(entries)), class_(cls) {
  if (rows_ < 1 || cols_ < 1) throw Error(ErrorKind::data, "symbol needs rows, cols >= 1", "rows");
  if (entries_.size() != static_cast<std::size_t>(rows_) * static_cast<std::size_t>(cols_))
    throw Error(ErrorKind::data, "symbol entry count does not match rows * cols", "entries");
  for (int i = 0; i < rows_; ++i) {
    for (int j = 0; j < cols_; ++j) {
      const Rational& f = entry(i, j);
      const std::string field = "entries[" + std::to_string(i) + "][" + std::to_string(j) + "].den";
      if (f.min_pole_circle_distance() <= 1e-12)
        throw Error(ErrorKind::symbol, "symbol has a pole on the unit circle", field);
      if (class_ == SymbolClass::analytic && !(f.min_pole_modulus() > 1.0))
        throw Error(ErrorKind::symbol, "analytic symbol has a pole inside the unit disk", field);
    }
  }
}

MatrixSymbol MatrixSymbol::scalar(Rational f, SymbolClass cls) { return MatrixSymbol(1, 1, {std::move(f)}, cls); }

MatrixSymbol MatrixSymbol::constant(const CMatrix& value) {
  std::vector<Rational> e;
  for (Eigen::Index i = 0; i < value.rows(); ++i)
    for (Eigen::Index j = 0; j < value.cols(); ++j) e.push_back(Rational::constant(value(i, j)));
  return MatrixSymbol(static_cast<int>(value.rows()), static_cast<int>(value.cols()), std::move(e),
                      SymbolClass::analytic);
}

std::size_t MatrixSymbol::degree_sum() const {
  std::size_t s = 0;
  for (const auto& f : entries_) s += f.num().degree() + f.den().degree();
  return s;
}

CMatrix MatrixSymbol::operator()(cplx z) const {
  CMatrix m(rows_, cols_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) m(i, j) = entry(i, j)(z);
  return m;
}

MatrixSymbol MatrixSymbol::adjoint() const {
  std::vector<Rational> e;
  e.reserve(entries_.size());
  for (int j = 0; j < cols_; ++j)
    for (int i = 0; i < rows_; ++i) e.push_back(rational_adjoint(entry(i, j)));
  return MatrixSymbol(cols_, rows_, std::move(e), SymbolClass::general);
}

MatrixSymbol operator*(const MatrixSymbol& a, const MatrixSymbol& b) {
  if (a.cols_ != b.rows_) throw Error(ErrorKind::parameter, "symbol product dimension mismatch", "symbol");
  std::vector<Rational> e;
  for (int i = 0; i < a.rows_; ++i) {
    for (int j = 0; j < b.cols_; ++j) {
      Rational acc = a.entry(i, 0) * b.entry(0, j);
      for (int k = 1; k < a.cols_; ++k) acc = acc + a.entry(i, k) * b.entry(k, j);
      e.push_back(std::move(acc));
    }
  }
  const SymbolClass cls = (a.analytic() && b.analytic()) ? SymbolClass::analytic : SymbolClass::general;
  return MatrixSymbol(a.rows_, b.cols_, std::move(e), cls);
}

FourierTable fourier_table(const MatrixSymbol& symbol, int max_index) {
  if (max_index < 0) throw Error(ErrorKind::parameter, "max_index must be >= 0", "max_index");
  std::size_t m = 64;
  const std::size_t need = std::max<std::size_t>(4 * symbol.degree_sum(), 4 * (static_cast<std::size_t>(max_index) + 1));
  while (m < need) m *= 2;

  auto coarse = sampled_dft(symbol, m);
  for (;;) {
    auto fine = sampled_dft(symbol, 2 * m);
    double change = 0.0;
    double scale = 1.0;
    for (std::size_t e = 0; e < fine.size(); ++e) {
      for (int k = -max_index; k <= max_index; ++k) {
        const cplx cf = coefficient(fine[e], k);
        change = std::max(change, std::abs(cf - coefficient(coarse[e], k)));
        scale = std::max(scale, std::abs(cf));
      }
    }
    m *= 2;
    coarse = std::move(fine);
    if (change <= 1e-14 * scale || 2 * m > kMaxFourierSamples) {
      FourierTable table;
      table.max_index = max_index;
      table.samples = m;
      table.aliasing_bound = change;
      table.blocks.reserve(2 * static_cast<std::size_t>(max_index) + 1);
      for (int k = -max_index; k <= max_index; ++k) {
        CMatrix b(symbol.rows(), symbol.cols());
        for (int i = 0; i < symbol.rows(); ++i)
          for (int j = 0; j < symbol.cols(); ++j)
            b(i, j) = coefficient(coarse[static_cast<std::size_t>(i * symbol.cols() + j)], k);
        table.blocks.push_back(std::move(b));
      }
      return table;
    }
  }
}

CMatrix fourier_block(const MatrixSymbol& symbol, int k) {
  return fourier_table(symbol, std::abs(k))[k];
}

ToeplitzSection toeplitz_section(const MatrixSymbol& symbol, int order) {
  if (order < 1) throw Error(ErrorKind::parameter, "section order must be >= 1", "N");
  const FourierTable table = fourier_table(symbol, order - 1);
  const int br = symbol.rows();
  const int bc = symbol.cols();
  if (symbol.analytic()) {
    for (int k = 1; k < order; ++k) {
      const double mag = table[-k].cwiseAbs().maxCoeff();
      if (mag > kAnalyticNegativeTolerance) {
        std::ostringstream msg;
        msg << "analytic-flagged symbol has Fourier coefficient of index " << -k << " with magnitude " << mag;
        throw Error(ErrorKind::symbol, msg.str(), "analytic");
      }
    }
  }
  ToeplitzSection s;
  s.order = order;
  s.block_rows = br;
  s.block_cols = bc;
  s.aliasing_bound = table.aliasing_bound;
  s.matrix = CMatrix::Zero(static_cast<Eigen::Index>(order) * br, static_cast<Eigen::Index>(order) * bc);
  for (int j = 0; j < order; ++j) {
    for (int k = 0; k < order; ++k) {
      if (symbol.analytic() && j < k) continue;
      s.matrix.block(static_cast<Eigen::Index>(j) * br, static_cast<Eigen::Index>(k) * bc, br, bc) = table[j - k];
    }
  }
  return s;
}

double operator_norm(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::BDCSVD<CMatrix> svd(m);
  return svd.singularValues()(0);
}

double multiplicativity_check(const MatrixSymbol& f, const MatrixSymbol& g, int order) {
  if (!f.analytic() || !g.analytic())
    throw Error(ErrorKind::precondition, "multiplicativity T_F T_G = T_FG requires analytic symbols", "analytic");
  const MatrixSymbol fg = f * g;
  const CMatrix lhs = toeplitz_section(f, order).matrix * toeplitz_section(g, order).matrix;
  return operator_norm(lhs - toeplitz_section(fg, order).matrix);
}

double kernel_action_check(const MatrixSymbol& f, cplx lambda, const CVector& e, int order) {
  if (!f.analytic()) throw Error(ErrorKind::precondition, "kernel action identity requires an analytic symbol", "analytic");
  if (!(std::abs(lambda) < 1.0)) throw Error(ErrorKind::parameter, "|lambda| must be < 1", "lambda");
  if (e.size() != f.rows()) throw Error(ErrorKind::parameter, "vector e must have F.rows() entries", "e");
  const ToeplitzSection adj = toeplitz_section(f.adjoint(), order);
  const std::vector<cplx> kc = hardy_kernel_coeffs(lambda, static_cast<std::size_t>(order));
  CMatrix k(order, 1);
  for (int m = 0; m < order; ++m) k(m, 0) = kc[static_cast<std::size_t>(m)];
  const CVector image = f(lambda).adjoint() * e;
  const CMatrix x = kron(k, e);
  const CMatrix expected = kron(k, image);
  return (adj.matrix * x - expected).norm();
}

namespace {

CMatrix block_backward_shift(int order, int block) {
  const Eigen::Index n = static_cast<Eigen::Index>(order) * block;
  CMatrix s = CMatrix::Zero(n, n);
  for (Eigen::Index i = 0; i + block < n; ++i) s(i, i + block) = 1.0;
  return s;
}

}  // namespace

double intertwining_check(const MatrixSymbol& f, int order) {
  if (order < 2) throw Error(ErrorKind::precondition, "intertwining check needs N >= 2", "N");
  if (!f.analytic()) throw Error(ErrorKind::precondition, "intertwining identity requires an analytic symbol", "analytic");
  const CMatrix a = toeplitz_section(f.adjoint(), order).matrix;  // (N cols) x (N rows)
  const CMatrix lhs = a * block_backward_shift(order, f.rows());
  const CMatrix rhs = block_backward_shift(order, f.cols()) * a;
  const Eigen::Index keep = static_cast<Eigen::Index>(order - 1) * f.cols();
  return operator_norm((lhs - rhs).topRows(keep));
}

int winding_number(const Rational& f, std::size_t samples) {
  double total = 0.0;
  cplx prev = f(1.0);
  for (std::size_t t = 1; t <= samples; ++t) {
    const cplx cur = f(std::polar(1.0, 2.0 * kPi * static_cast<double>(t) / samples));
    total += std::arg(cur / prev);
    prev = cur;
  }
  return static_cast<int>(std::lround(total / (2.0 * kPi)));
}

InnerOuter scalar_inner_outer(const Rational& f) {
  if (f.num().is_zero()) throw Error(ErrorKind::parameter, "inner-outer factorization of the zero function", "f");
  if (!(f.min_pole_modulus() > 1.0))
    throw Error(ErrorKind::precondition, "inner-outer factorization needs a function analytic on the closed disk", "f");
  std::vector<cplx> inside;
  std::vector<cplx> outside;
  for (cplx a : f.num().roots()) {
    const double dist = std::abs(std::abs(a) - 1.0);
    if (dist <= kBoundaryZeroTolerance) {
      std::ostringstream msg;
      msg << "zero " << a << " lies on the unit circle";
      throw Error(ErrorKind::boundary_zero, msg.str(), "f");
    }
    (std::abs(a) < 1.0 ? inside : outside).push_back(a);
  }
  Polynomial inner_num = Polynomial::constant(1.0);
  Polynomial inner_den = Polynomial::constant(1.0);
  for (cplx a : inside) {
    inner_num = inner_num * Polynomial({-a, 1.0});
    inner_den = inner_den * Polynomial({1.0, -std::conj(a)});
  }
  const cplx lead = f.num().coeffs().back();
  const Polynomial outer_num = Polynomial::from_roots(outside, lead) * inner_den;

  InnerOuter r{inside, Rational(inner_num, inner_den), Rational(outer_num, f.den()), 0.0, 0.0, 0};
  for (int t = 0; t < 64; ++t) {
    const cplx z = std::polar(1.0, 2.0 * kPi * t / 64.0);
    r.inner_modulus_error = std::max(r.inner_modulus_error, std::abs(std::abs(r.inner(z)) - 1.0));
    const double fz = std::abs(f(z));
    r.modulus_error = std::max(r.modulus_error, std::abs(std::abs(r.outer(z)) - fz) / std::max(1.0, fz));
  }
  r.outer_winding = winding_number(r.outer);
  if (r.modulus_error > 1e-10 || r.outer_winding != 0) {
    std::ostringstream msg;
    msg << "inner-outer verification failed: modulus error " << r.modulus_error << ", outer winding "
        << r.outer_winding;
    throw Error(ErrorKind::accuracy, msg.str(), "f");
  }
  return r;
}

MarginResult left_invertibility_margin(const MatrixSymbol& theta, const ComplexGrid& grid) {
  if (theta.rows() < theta.cols())
    throw Error(ErrorKind::precondition, "left invertibility margin needs rows >= cols", "theta");
  std::vector<double> sigma(grid.size(), std::numeric_limits<double>::quiet_NaN());
  parallel_for(grid.size(), [&](std::size_t i) {
    try {
      Eigen::JacobiSVD<CMatrix> svd(theta(grid.points()[i]));
      sigma[i] = svd.singularValues()(svd.singularValues().size() - 1);
    } catch (const Error&) {
    }
  });
  MarginResult r;
  r.delta = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!std::isfinite(sigma[i])) {
      r.failures.push_back(i);
      continue;
    }
    if (sigma[i] < r.delta) {
      r.delta = sigma[i];
      r.argmin = grid.points()[i];
    }
  }
  return r;
}

}  // namespace shiftgeom
