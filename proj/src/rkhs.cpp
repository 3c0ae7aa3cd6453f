#include "shiftgeom/rkhs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace shiftgeom {

WeightSequence::WeightSequence(std::vector<double> w, double tail, std::optional<SpikeMeta> meta)
    : w_(std::move(w)), tail_(tail), min_(tail), meta_(std::move(meta)) {
  if (!(tail_ > 0.0) || !std::isfinite(tail_))
    throw Error(ErrorKind::data, "weight tail must be positive and finite", "tail");
  for (std::size_t n = 0; n < w_.size(); ++n) {
    if (!(w_[n] > 0.0) || !std::isfinite(w_[n]))
      throw Error(ErrorKind::data, "non-positive weight at index " + std::to_string(n), "w[" + std::to_string(n) + "]");
    min_ = std::min(min_, w_[n]);
  }
}

double WeightSequence::at(std::size_t n) const {
  if (n >= w_.size())
    throw Error(ErrorKind::capacity,
                "weight index " + std::to_string(n) + " beyond stored length " + std::to_string(w_.size()));
  return w_[n];
}

namespace {

void require_in_disk(cplx lambda) {
  if (!(std::abs(lambda) < 1.0)) throw Error(ErrorKind::parameter, "|lambda| must be < 1", "lambda");
}

}  // namespace

cplx hardy_kernel(cplx lambda, cplx z) {
  require_in_disk(lambda);
  if (std::abs(z) > 1.0) throw Error(ErrorKind::domain, "hardy_kernel needs |z| <= 1");
  const cplx d = 1.0 - std::conj(lambda) * z;
  if (d == cplx{0.0}) throw Error(ErrorKind::pole, "hardy_kernel pole at conj(lambda) z = 1");
  return 1.0 / d;
}

cplx deriv_kernel(cplx lambda, cplx z) {
  require_in_disk(lambda);
  if (std::abs(z) > 1.0) throw Error(ErrorKind::domain, "deriv_kernel needs |z| <= 1");
  const cplx d = 1.0 - std::conj(lambda) * z;
  if (d == cplx{0.0}) throw Error(ErrorKind::pole, "deriv_kernel pole at conj(lambda) z = 1");
  return z / (d * d);
}

std::vector<cplx> hardy_kernel_coeffs(cplx lambda, std::size_t count) {
  std::vector<cplx> c(count);
  const cplx q = std::conj(lambda);
  cplx p = 1.0;
  for (std::size_t n = 0; n < count; ++n) {
    c[n] = p;
    p *= q;
  }
  return c;
}

std::vector<cplx> deriv_kernel_coeffs(cplx lambda, std::size_t count) {
  std::vector<cplx> c(count, cplx{0.0});
  const cplx q = std::conj(lambda);
  cplx p = 1.0;  // q^(n-1)
  for (std::size_t n = 1; n < count; ++n) {
    c[n] = static_cast<double>(n) * p;
    p *= q;
  }
  return c;
}

cplx h2_inner(std::span<const cplx> a, std::span<const cplx> b) {
  cplx s = 0.0;
  const std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) s += a[i] * std::conj(b[i]);
  return s;
}

KernelIdentities kernel_identities(cplx lambda) {
  require_in_disk(lambda);
  const double x = std::norm(lambda);
  const double d = 1.0 - x;
  return {1.0 / d, (1.0 + x) / (d * d * d), std::conj(lambda) / (d * d), 1.0 / d};
}

KernelDiag weighted_kernel_diag(const WeightSequence& w, cplx lambda) {
  require_in_disk(lambda);
  const double x = std::norm(lambda);
  const double tail_denominator = (1.0 - x) * w.min_value();
  // Neumaier-compensated partial sum.
  double sum = 0.0;
  double comp = 0.0;
  double power = 1.0;  // x^n
  std::size_t n = 0;
  double tail_bound = 0.0;
  for (;; ++n) {
    const double term = power / w[n];
    const double t = sum + term;
    comp += (std::abs(sum) >= std::abs(term)) ? (sum - t) + term : (term - t) + sum;
    sum = t;
    power *= x;
    tail_bound = power / tail_denominator;  // bound on sum_{m > n}
    if (tail_bound <= kKernelRelTol * (sum + comp)) break;
    if (n + 1 >= kKernelMaxTerms)
      throw Error(ErrorKind::accuracy,
                  "kernel series did not reach certified accuracy within " + std::to_string(kKernelMaxTerms) +
                      " terms (remaining tail bound " + std::to_string(tail_bound) + ")");
  }
  const double value = sum + comp;
  const double rounding = 4.0 * std::numeric_limits<double>::epsilon() * value;
  return {value, tail_bound + rounding, n + 1};
}

double h2w_norm_sq(std::span<const cplx> coeffs, const WeightSequence& w) {
  if (coeffs.size() > w.size())
    throw Error(ErrorKind::data,
                "coefficient length " + std::to_string(coeffs.size()) + " exceeds weight length " +
                    std::to_string(w.size()),
                "coeffs");
  std::vector<double> parts(coeffs.size());
  for (std::size_t n = 0; n < coeffs.size(); ++n) parts[n] = std::norm(coeffs[n]) * w.at(n);
  return tree_sum(parts);
}

}  // namespace shiftgeom
