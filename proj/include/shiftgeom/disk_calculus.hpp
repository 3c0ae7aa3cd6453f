#pragma once

#include "shiftgeom/common.hpp"

#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

namespace shiftgeom {

/// Polar tensor-product sampling of the disk |z| <= 1 - margin.
///
/// Cell (k, m) covers radii [radial_levels[k], radial_levels[k+1]] and angles
/// [m, m + 1] * 2*pi / angular_count. Its sample point sits at the radial and
/// angular midpoint and its weight is the exact cell area, so the weights sum
/// to pi (1 - margin)^2 up to rounding. Points are stored radial-major.
class ComplexGrid {
 public:
  ComplexGrid(std::vector<double> radial_levels, int angular_count, double margin);

  const std::vector<cplx>& points() const noexcept { return points_; }
  const std::vector<double>& area_weights() const noexcept { return weights_; }
  const std::vector<double>& radial_levels() const noexcept { return levels_; }
  int radial_count() const noexcept { return static_cast<int>(levels_.size()) - 1; }
  int angular_count() const noexcept { return angular_count_; }
  double margin() const noexcept { return margin_; }
  std::size_t size() const noexcept { return points_.size(); }

  int radial_index(std::size_t point) const { return static_cast<int>(point) / angular_count_; }
  int angular_index(std::size_t point) const { return static_cast<int>(point) % angular_count_; }
  double angular_step() const noexcept { return 2.0 * kPi / angular_count_; }

  /// Point indices on every `stride`-th radial level (levels 0, stride, 2*stride, ...).
  std::vector<std::size_t> coarse_indices(int stride) const;

 private:
  std::vector<double> levels_;
  int angular_count_;
  double margin_;
  std::vector<cplx> points_;
  std::vector<double> weights_;
};

/// Radii 1 - margin^(k/K), k = 0..K: geometric accumulation toward 1 - margin.
ComplexGrid build_grid(int radial_count, int angular_count, double margin);

/// Grid used when nothing else is configured.
struct GridParams {
  int radial_count = 32;
  int angular_count = 128;
  double margin = 1e-3;
};
ComplexGrid build_grid(const GridParams& params);

/// CSV `re,im,weight`, one row per point.
void write_grid_csv(const ComplexGrid& grid, std::ostream& out);

enum class Stencil {
  disk,   // f is only defined on the open disk; the stencil must stay inside
  plane,  // f is defined everywhere
};

inline constexpr double kDefaultStep = 1e-4;

/// Central-difference d/dz = (d/dx - i d/dy) / 2.
cplx wirtinger_dz(const std::function<cplx(cplx)>& f, cplx z, double h = kDefaultStep,
                  Stencil stencil = Stencil::disk);
/// Central-difference d/dzbar = (d/dx + i d/dy) / 2.
cplx wirtinger_dzbar(const std::function<cplx(cplx)>& f, cplx z, double h = kDefaultStep,
                     Stencil stencil = Stencil::disk);

/// Normalized Laplacian (1/4)(d_xx + d_yy) by the 5-point stencil.
double laplacian(const std::function<double(cplx)>& f, cplx z, double h = kDefaultStep,
                 Stencil stencil = Stencil::disk);

/// ln |(z - lambda) / (1 - conj(lambda) z)|; throws on z == lambda.
double green_function(cplx z, cplx lambda);

/// Integral over the covered disk of green_function(., lambda) * density,
/// density being piecewise constant on grid cells. Cells close to lambda
/// are subdivided and the sub-cell holding lambda is integrated exactly.
double green_quadrature(const ComplexGrid& grid, std::span<const double> density, cplx lambda);

/// Box {1 - side <= |z| < 1, theta0 <= arg z < theta0 + 2 pi side}.
struct CarlesonBox {
  double side;
  double theta0;

  CarlesonBox(double side, double theta0);
  bool contains(cplx z) const;
};

inline constexpr double kDensityTolerance = 1e-10;

/// max over dyadic boxes (depth 0..max_depth) of
///   sum_{z in box} density(z) (1 - |z|) weight(z) / side.
double carleson_constant(std::span<const double> density, const ComplexGrid& grid, int max_depth);

}  // namespace shiftgeom
