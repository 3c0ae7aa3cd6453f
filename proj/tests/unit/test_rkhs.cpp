#include "helpers.hpp"

#include "shiftgeom/rkhs.hpp"

#include <doctest.h>

using namespace shiftgeom;
using testing::random_point;
using testing::rel_err;

namespace {

// Series oracle: truncated coefficient inner products, truncated where |lambda|^(2N) N^3 is negligible.
std::size_t series_length(cplx lambda) {
  const double x = std::norm(lambda);
  std::size_t n = 16;
  while (std::pow(x, static_cast<double>(n)) * static_cast<double>(n) * n * n > 1e-18) n *= 2;
  return n;
}

KernelIdentities series_identities(cplx lambda) {
  const std::size_t n = series_length(lambda);
  // eigenvector k_{conj lambda}: coefficients lambda^n; its derivative kernel: n lambda^(n-1)
  const std::vector<cplx> k = hardy_kernel_coeffs(std::conj(lambda), n);
  const std::vector<cplx> kt = deriv_kernel_coeffs(std::conj(lambda), n);
  std::vector<cplx> combo(n);
  const double s = 1.0 - std::norm(lambda);
  for (std::size_t i = 0; i < n; ++i) combo[i] = -std::conj(lambda) * k[i] + s * kt[i];
  return {h2_inner(k, k).real(), h2_inner(kt, kt).real(), h2_inner(kt, k), h2_inner(combo, combo).real()};
}

}  // namespace

TEST_CASE("hardy kernel values") {
  CHECK(hardy_kernel(0.0, cplx(0.3, 0.7)) == cplx(1.0));
  CHECK(std::abs(hardy_kernel(0.5, 0.5) - 4.0 / 3.0) < 1e-15);
  const cplx v = hardy_kernel(0.5, cplx(0.0, 0.5));
  CHECK(std::abs(v - cplx(1.0, 0.25) / 1.0625) < 1e-15);
  CHECK(std::abs(v - cplx(0.941176470588235, 0.235294117647059)) < 1e-12);
  CHECK_THROWS_AS(hardy_kernel(cplx(0.0, 1.0), cplx(0.0, 1.0)), Error);
}

TEST_CASE("kernel identities: closed forms") {
  const KernelIdentities z = kernel_identities(0.0);
  CHECK(z.k_norm_sq == 1.0);
  CHECK(z.ktilde_norm_sq == 1.0);
  CHECK(z.mixed_inner == cplx(0.0));
  CHECK(z.combo_norm_sq == 1.0);

  const KernelIdentities h = kernel_identities(0.5);
  CHECK(h.k_norm_sq == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
  CHECK(h.ktilde_norm_sq == doctest::Approx(1.25 / 0.421875).epsilon(1e-15));
  CHECK(h.ktilde_norm_sq == doctest::Approx(2.962963).epsilon(1e-6));
  CHECK(std::abs(h.mixed_inner - 0.888888888888889) < 1e-12);
  CHECK(h.combo_norm_sq == doctest::Approx(4.0 / 3.0).epsilon(1e-15));

  CHECK_THROWS_AS(kernel_identities(1.0), Error);
  CHECK_THROWS_AS(kernel_identities(cplx(0.8, 0.8)), Error);
}

TEST_CASE("kernel identities against the series oracle") {
  const auto compare = [](cplx l, double tol) {
    const KernelIdentities a = kernel_identities(l);
    const KernelIdentities b = series_identities(l);
    CHECK(rel_err(a.k_norm_sq, b.k_norm_sq) <= tol);
    CHECK(rel_err(a.ktilde_norm_sq, b.ktilde_norm_sq) <= tol);
    CHECK(std::abs(a.mixed_inner - b.mixed_inner) <= tol * std::max(std::abs(b.mixed_inner), 1e-300) + 1e-300);
    CHECK(rel_err(a.combo_norm_sq, b.combo_norm_sq) <= tol);
  };
  compare(0.5, 1e-10);
  for (int i = 0; i < 20; ++i) compare(random_point(0.95), 1e-9);
}

TEST_CASE("reproducing properties on polynomials") {
  for (int trial = 0; trial < 20; ++trial) {
    const cplx l = random_point(0.95);
    std::vector<cplx> p(11);
    for (cplx& c : p) c = random_point(1.0);
    const Polynomial poly(p);
    CHECK(std::abs(h2_inner(p, hardy_kernel_coeffs(l, 11)) - poly(l)) < 1e-12);
    CHECK(std::abs(h2_inner(p, deriv_kernel_coeffs(l, 11)) - poly.derivative()(l)) < 1e-10);
  }
  // the closed-form kernels agree with their coefficient sequences
  const cplx l(0.3, -0.4);
  const cplx z(0.5, 0.2);
  cplx sk = 0.0;
  cplx sd = 0.0;
  const auto kc = hardy_kernel_coeffs(l, 200);
  const auto dc = deriv_kernel_coeffs(l, 200);
  for (int n = 199; n >= 0; --n) {
    sk += kc[n] * std::pow(z, n);
    sd += dc[n] * std::pow(z, n);
  }
  CHECK(std::abs(sk - hardy_kernel(l, z)) < 1e-13);
  CHECK(std::abs(sd / z - deriv_kernel(l, z) / z) < 1e-12);
}

TEST_CASE("weighted kernel diagonal") {
  const WeightSequence one = WeightSequence::constant(4);
  const KernelDiag d = weighted_kernel_diag(one, 0.5);
  CHECK(std::abs(d.value - 4.0 / 3.0) <= 1e-12 * 4.0 / 3.0);
  CHECK(d.error_bound <= 1e-12 * d.value);
  CHECK(weighted_kernel_diag(one, 0.0).value == 1.0);
  for (int i = 0; i < 10; ++i) {
    const cplx l = random_point(0.999);
    const KernelDiag k = weighted_kernel_diag(one, l);
    const double exact = 1.0 / (1.0 - std::norm(l));
    CHECK(std::abs(k.value - exact) <= k.error_bound + 1e-15 * exact);
  }
  CHECK_THROWS_AS(WeightSequence({1.0, 0.0, 1.0}), Error);
  CHECK_THROWS_AS(weighted_kernel_diag(one, 1.0), Error);
}

TEST_CASE("h2w norm") {
  const WeightSequence w({1.0, 2.0, 4.0});
  const std::vector<cplx> c{1.0, 1.0, 1.0};
  CHECK(h2w_norm_sq(c, w) == 7.0);
  CHECK(h2w_norm_sq(std::vector<cplx>{1.0}, WeightSequence::constant(1)) == 1.0);
  CHECK_THROWS_AS(h2w_norm_sq(std::vector<cplx>(4, 1.0), w), Error);
  const WeightSequence one = WeightSequence::constant(200);
  const auto kc = hardy_kernel_coeffs(0.5, 200);
  CHECK(std::abs(h2w_norm_sq(kc, one) - 4.0 / 3.0) < 1e-14);
}
