#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace shiftgeom {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

inline constexpr double kPi = 3.14159265358979323846;

enum class ErrorKind {
  parameter,      // invalid argument value
  domain,         // evaluation point outside the admissible region
  singularity,    // evaluation on a singular point
  data,           // malformed or out-of-range input data
  pole,           // rational function evaluated at a pole
  precondition,   // operation preconditions not met
  capacity,       // finite sequence too short
  symbol,         // symbol not admissible (pole on the circle, ...)
  boundary_zero,  // zero on the unit circle
  conditioning,   // ill-conditioned linear algebra
  accuracy,       // requested accuracy not attainable
  partial,        // incomplete result where a complete one is required
  io,
};

std::string_view to_string(ErrorKind kind);

/// All library failures. `field()` names the offending input where known.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message, std::string field = {})
      : std::runtime_error(message), kind_(kind), field_(std::move(field)) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& field() const noexcept { return field_; }

  /// Numerical failures (as opposed to bad input) map to a separate exit status.
  bool is_numerical() const noexcept {
    return kind_ == ErrorKind::conditioning || kind_ == ErrorKind::accuracy ||
           kind_ == ErrorKind::partial;
  }

 private:
  ErrorKind kind_;
  std::string field_;
};

// Pairwise summation; result depends only on the order of `values`.
double tree_sum(std::span<const double> values);

// Worker count: TOOL_THREADS if set (>= 1), else hardware concurrency.
unsigned worker_count();

// Runs body(i) for i in [0, n). Each index is handled by exactly one worker,
// so writing into per-index slots keeps results independent of scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace shiftgeom
