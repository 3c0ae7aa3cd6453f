#pragma once

#include "shiftgeom/common.hpp"
#include "shiftgeom/weights.hpp"

#include <span>
#include <vector>

namespace shiftgeom {

/// Hardy-space reproducing kernel k_lambda(z) = 1 / (1 - conj(lambda) z).
cplx hardy_kernel(cplx lambda, cplx z);

/// z / (1 - conj(lambda) z)^2, the kernel reproducing f'(lambda).
/// The eigenvector derivative d/dlambda k_{conj(lambda)} is deriv_kernel(conj(lambda), .).
cplx deriv_kernel(cplx lambda, cplx z);

/// Taylor coefficients conj(lambda)^n, n < count.
std::vector<cplx> hardy_kernel_coeffs(cplx lambda, std::size_t count);
/// Taylor coefficients n conj(lambda)^(n-1), n < count.
std::vector<cplx> deriv_kernel_coeffs(cplx lambda, std::size_t count);

/// Coefficient-space H^2 inner product sum a_n conj(b_n) over the common length.
cplx h2_inner(std::span<const cplx> a, std::span<const cplx> b);

struct KernelIdentities {
  double k_norm_sq;       // ||k_lambda||^2 = (1 - |lambda|^2)^-1
  double ktilde_norm_sq;  // ||ktilde_lambda||^2 = (1 + |lambda|^2)(1 - |lambda|^2)^-3
  cplx mixed_inner;       // <ktilde_{conj lambda}, k_{conj lambda}> = conj(lambda)(1 - |lambda|^2)^-2
  double combo_norm_sq;   // ||-conj(lambda) k + (1 - |lambda|^2) ktilde||^2 = (1 - |lambda|^2)^-1
};

/// Closed forms of the four kernel identities behind the Hardy line-bundle curvature.
KernelIdentities kernel_identities(cplx lambda);

struct KernelDiag {
  double value;
  double error_bound;  // certified absolute bound on the truncation error
  std::size_t terms;
};

inline constexpr double kKernelRelTol = 1e-12;
inline constexpr std::size_t kKernelMaxTerms = 10'000'000;

/// sum_n |lambda|^(2n) / w_n with a certified geometric tail bound.
/// Throws accuracy error if the hard term cap is reached first.
KernelDiag weighted_kernel_diag(const WeightSequence& w, cplx lambda);

/// ||f||_w^2 = sum |a_n|^2 w_n over the stored weights.
double h2w_norm_sq(std::span<const cplx> coeffs, const WeightSequence& w);

}  // namespace shiftgeom
