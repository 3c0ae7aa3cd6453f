#include "shiftgeom/disk_calculus.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace shiftgeom {

namespace {

double wrap_angle(double theta) {
  theta = std::fmod(theta, 2.0 * kPi);
  if (theta < 0.0) theta += 2.0 * kPi;
  return theta;
}

void check_stencil(cplx z, double h, Stencil stencil) {
  if (!(h > 0.0)) throw Error(ErrorKind::parameter, "finite-difference step must be positive", "h");
  if (stencil == Stencil::disk && std::abs(z) + h >= 1.0)
    throw Error(ErrorKind::domain, "finite-difference stencil leaves the unit disk");
}

}  // namespace

ComplexGrid::ComplexGrid(std::vector<double> radial_levels, int angular_count, double margin)
    : levels_(std::move(radial_levels)), angular_count_(angular_count), margin_(margin) {
  if (levels_.size() < 2) throw Error(ErrorKind::parameter, "grid needs at least one radial cell", "radial_count");
  if (angular_count_ < 1) throw Error(ErrorKind::parameter, "angular_count must be >= 1", "angular_count");
  if (!(margin_ > 0.0 && margin_ < 1.0)) throw Error(ErrorKind::parameter, "margin must lie in (0, 1)", "margin");
  if (levels_.front() != 0.0 || levels_.back() > 1.0 - margin_ + 1e-15)
    throw Error(ErrorKind::parameter, "radial levels must start at 0 and end inside 1 - margin", "radial_levels");
  for (std::size_t k = 1; k < levels_.size(); ++k)
    if (!(levels_[k] > levels_[k - 1]))
      throw Error(ErrorKind::parameter, "radial levels must be strictly increasing", "radial_levels");

  const double dtheta = angular_step();
  points_.reserve((levels_.size() - 1) * static_cast<std::size_t>(angular_count_));
  weights_.reserve(points_.capacity());
  for (std::size_t k = 0; k + 1 < levels_.size(); ++k) {
    const double r0 = levels_[k];
    const double r1 = levels_[k + 1];
    const double r = 0.5 * (r0 + r1);
    for (int m = 0; m < angular_count_; ++m) {
      const double theta = (m + 0.5) * dtheta;
      points_.push_back(std::polar(r, theta));
      weights_.push_back(r * (r1 - r0) * dtheta);
    }
  }
}

std::vector<std::size_t> ComplexGrid::coarse_indices(int stride) const {
  if (stride < 1) throw Error(ErrorKind::parameter, "probe stride must be >= 1", "probe_stride");
  std::vector<std::size_t> out;
  for (int k = 0; k < radial_count(); k += stride)
    for (int m = 0; m < angular_count_; ++m)
      out.push_back(static_cast<std::size_t>(k) * static_cast<std::size_t>(angular_count_) + static_cast<std::size_t>(m));
  return out;
}

ComplexGrid build_grid(int radial_count, int angular_count, double margin) {
  if (radial_count < 1) throw Error(ErrorKind::parameter, "radial_count must be >= 1", "radial_count");
  if (angular_count < 1) throw Error(ErrorKind::parameter, "angular_count must be >= 1", "angular_count");
  if (!(margin > 0.0 && margin < 1.0)) throw Error(ErrorKind::parameter, "margin must lie in (0, 1)", "margin");
  std::vector<double> levels(static_cast<std::size_t>(radial_count) + 1);
  levels[0] = 0.0;
  for (int k = 1; k < radial_count; ++k)
    levels[static_cast<std::size_t>(k)] = 1.0 - std::pow(margin, static_cast<double>(k) / radial_count);
  levels.back() = 1.0 - margin;
  return ComplexGrid(std::move(levels), angular_count, margin);
}

ComplexGrid build_grid(const GridParams& params) {
  return build_grid(params.radial_count, params.angular_count, params.margin);
}

void write_grid_csv(const ComplexGrid& grid, std::ostream& out) {
  std::ostringstream row;
  row.imbue(std::locale::classic());
  row << std::setprecision(17);
  row << "re,im,weight\n";
  for (std::size_t i = 0; i < grid.size(); ++i)
    row << grid.points()[i].real() << ',' << grid.points()[i].imag() << ',' << grid.area_weights()[i] << '\n';
  out << row.str();
}

cplx wirtinger_dz(const std::function<cplx(cplx)>& f, cplx z, double h, Stencil stencil) {
  check_stencil(z, h, stencil);
  const cplx ih{0.0, h};
  const cplx dx = (f(z + h) - f(z - h)) / (2.0 * h);
  const cplx dy = (f(z + ih) - f(z - ih)) / (2.0 * h);
  return 0.5 * (dx - cplx{0.0, 1.0} * dy);
}

cplx wirtinger_dzbar(const std::function<cplx(cplx)>& f, cplx z, double h, Stencil stencil) {
  check_stencil(z, h, stencil);
  const cplx ih{0.0, h};
  const cplx dx = (f(z + h) - f(z - h)) / (2.0 * h);
  const cplx dy = (f(z + ih) - f(z - ih)) / (2.0 * h);
  return 0.5 * (dx + cplx{0.0, 1.0} * dy);
}

double laplacian(const std::function<double(cplx)>& f, cplx z, double h, Stencil stencil) {
  check_stencil(z, h, stencil);
  const cplx ih{0.0, h};
  return 0.25 * (f(z + h) + f(z - h) + f(z + ih) + f(z - ih) - 4.0 * f(z)) / (h * h);
}

double green_function(cplx z, cplx lambda) {
  if (std::abs(z) >= 1.0 || std::abs(lambda) >= 1.0)
    throw Error(ErrorKind::domain, "green_function needs both points in the open disk");
  if (z == lambda) throw Error(ErrorKind::singularity, "green_function evaluated on the diagonal z == lambda");
  return std::log(std::abs(z - lambda)) - std::log(std::abs(1.0 - std::conj(lambda) * z));
}

namespace {

constexpr int kSubdivision = 8;

// Integral of ln|(z - lambda)/(1 - conj(lambda) z)| over the polar cell
// [r0, r1] x [t0, t0 + dt], split into kSubdivision^2 polar sub-cells.
double near_cell_integral(double r0, double r1, double t0, double dt, cplx lambda) {
  const double dr = (r1 - r0) / kSubdivision;
  const double ds = dt / kSubdivision;
  const double lam_abs = std::abs(lambda);
  const double lam_arg = wrap_angle(std::arg(lambda));
  double total = 0.0;
  for (int a = 0; a < kSubdivision; ++a) {
    const double s0 = r0 + a * dr;
    const double s1 = (a + 1 == kSubdivision) ? r1 : s0 + dr;
    const double rm = 0.5 * (s0 + s1);
    for (int b = 0; b < kSubdivision; ++b) {
      const double u0 = t0 + b * ds;
      const double um = u0 + 0.5 * ds;
      const cplx zm = std::polar(rm, um);
      const double area = rm * (s1 - s0) * ds;
      const double smooth = -std::log(std::abs(1.0 - std::conj(lambda) * zm));
      bool holds = false;
      bool at_origin = false;
      if (lam_abs == 0.0) {
        holds = at_origin = (s0 == 0.0);
      } else if (lam_abs >= s0 && lam_abs < s1) {
        const double off = wrap_angle(lam_arg - u0);
        holds = off < ds;
      }
      if (!holds) {
        total += area * (std::log(std::abs(zm - lambda)) + smooth);
      } else if (at_origin) {
        // Exact: int_0^rho r ln r dr over an angular wedge of width ds.
        total += ds * (0.5 * s1 * s1 * std::log(s1) - 0.25 * s1 * s1);
      } else {
        // Exact integral over the equal-area disk centred on lambda.
        const double rho = std::sqrt(area / kPi);
        total += area * (std::log(rho) - 0.5 + smooth);
      }
    }
  }
  return total;
}

}  // namespace

double green_quadrature(const ComplexGrid& grid, std::span<const double> density, cplx lambda) {
  if (density.size() != grid.size())
    throw Error(ErrorKind::data, "density length does not match the grid", "density");
  if (std::abs(lambda) >= 1.0) throw Error(ErrorKind::domain, "green potential evaluated outside the disk");
  const double dtheta = grid.angular_step();
  const auto& levels = grid.radial_levels();
  std::vector<double> parts(grid.size(), 0.0);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double rho = density[i];
    if (rho == 0.0) continue;
    const cplx z = grid.points()[i];
    const int k = grid.radial_index(i);
    const double r0 = levels[static_cast<std::size_t>(k)];
    const double r1 = levels[static_cast<std::size_t>(k) + 1];
    const double diam = std::max(r1 - r0, r1 * dtheta);
    if (std::abs(z - lambda) < 2.0 * diam) {
      const double t0 = grid.angular_index(i) * dtheta;
      parts[i] = rho * near_cell_integral(r0, r1, t0, dtheta, lambda);
    } else {
      parts[i] = rho * grid.area_weights()[i] * green_function(z, lambda);
    }
  }
  return tree_sum(parts);
}

CarlesonBox::CarlesonBox(double side_, double theta0_) : side(side_), theta0(theta0_) {
  if (!(side > 0.0 && side <= 1.0)) throw Error(ErrorKind::parameter, "Carleson box side must lie in (0, 1]", "side");
}

bool CarlesonBox::contains(cplx z) const {
  const double r = std::abs(z);
  if (r < 1.0 - side || r >= 1.0) return false;
  const double off = wrap_angle(std::arg(z) - theta0);
  return off < 2.0 * kPi * side;
}

double carleson_constant(std::span<const double> density, const ComplexGrid& grid, int max_depth) {
  if (density.size() != grid.size())
    throw Error(ErrorKind::data, "density length does not match the grid", "density");
  if (max_depth < 0) throw Error(ErrorKind::parameter, "max_depth must be >= 0", "max_depth");
  if (max_depth > 30) throw Error(ErrorKind::parameter, "max_depth must be <= 30", "max_depth");
  std::vector<double> mass(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(density[i] >= -kDensityTolerance))
      throw Error(ErrorKind::data, "negative density sample at index " + std::to_string(i), "density");
    const double rho = std::max(density[i], 0.0);
    mass[i] = rho * (1.0 - std::abs(grid.points()[i])) * grid.area_weights()[i];
  }
  double best = 0.0;
  for (int depth = 0; depth <= max_depth; ++depth) {
    const double side = std::ldexp(1.0, -depth);
    const std::size_t bins = std::size_t{1} << depth;
    std::vector<std::vector<double>> in_box(bins);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const cplx z = grid.points()[i];
      if (std::abs(z) < 1.0 - side) continue;
      const double theta = wrap_angle(std::arg(z));
      auto bin = static_cast<std::size_t>(theta / (2.0 * kPi * side));
      bin = std::min(bin, bins - 1);
      in_box[bin].push_back(mass[i]);
    }
    for (const auto& box : in_box) best = std::max(best, tree_sum(box) / side);
  }
  return best;
}

}  // namespace shiftgeom
