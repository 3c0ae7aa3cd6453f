#pragma once

#include "shiftgeom/common.hpp"
#include "shiftgeom/rkhs.hpp"
#include "shiftgeom/weights.hpp"

#include <iosfwd>
#include <span>
#include <vector>

namespace shiftgeom {

/// alpha = 1 - (1 + epsilon)^-2, the largest value allowed by 1 - alpha >= (1 + epsilon)^-2.
double spike_alpha(double epsilon);

/// Smallest admissible spike start N_j given the previous start (j >= 2) or none (j == 1).
long minimal_spike_start(int j, double alpha, long previous_start);

/// Weight equal to 1 except on spikes [N_j, N_j + 2j], where ln w_n rises with
/// slope 2 ln(1 + epsilon) to 2j ln(1 + epsilon) at N_j + j and falls back.
/// N_j is the smallest integer with N_{j-1} + 2(j-1) < N_j and
/// (2j - 1)/(N_j + 2j) <= alpha / 2^j. Capacity error if the spikes do not fit.
WeightSequence build_spike_weight(double epsilon, int spike_count, std::size_t length);

/// Stored length needed to hold every spike.
std::size_t required_spike_length(double epsilon, int spike_count);

struct RatioCheck {
  double max_ratio;  // max_n max(w_{n+1}/w_n, w_n/w_{n+1})
  double bound;      // (1 + epsilon)^2
  bool holds;
};

RatioCheck ratio_bound_check(const WeightSequence& w, double epsilon);

struct KernelRatio {
  double min_ratio;
  double max_ratio;
  double max_error;    // certified bound on the error of any reported ratio
  double lower_bound;  // 1 - alpha
  bool holds;          // lower_bound <= min <= max <= 1, allowing for max_error
};

/// Ratio of the weighted kernel diagonal to the Hardy one, (1 - r^2) * sum r^(2n)/w_n.
KernelRatio kernel_ratio_check(const WeightSequence& w, std::span<const double> radii, double epsilon);

struct SpikeBound {
  int j;
  long start;        // N_j
  double peak;       // A_j, closed form
  double x_star;     // maximiser of x^(N_j+1) - x^(N_j+2j)
  double grid_peak;  // A_j by grid search
  double bound;      // (2j - 1)/(N_j + 2j)
};

/// A_j = max over [0,1] of x^(N_j+1) - x^(N_j+2j), closed form and grid search.
SpikeBound spike_peak_bound(long start, int j);

/// Coefficients of the weighted kernel k_lambda: conj(lambda)^n / w_n.
std::vector<cplx> weighted_kernel_coeffs(const WeightSequence& w, cplx lambda, std::size_t count);

/// (S* f)_n = (w_{n+1}/w_n) a_{n+1}; output has one entry fewer than coeffs.
std::vector<cplx> backward_shift_apply(const WeightSequence& w, std::span<const cplx> coeffs);

struct EigenCheck {
  double residual;    // ||S* P k - lambda P' k||_w on the truncated kernel of conj(lambda)
  double tail_bound;  // ||k - P k||_w upper bound
  double bound;       // tail_bound plus a rounding allowance
};

/// Eigenvector equation S* k_{conj lambda} = lambda k_{conj lambda} on `count` coefficients.
EigenCheck eigenvector_check(const WeightSequence& w, cplx lambda, std::size_t count);

struct GrowthWitness {
  std::vector<double> norms_sq;  // ||S^n f||_w^2, n = 0..n_max
  double max_norm_sq;
  std::size_t argmax;
  bool reaches_peak;  // max >= |a_m|^2 max_n w_n for some a_m != 0
};

GrowthWitness shift_growth_witness(const WeightSequence& w, std::span<const cplx> coeffs, std::size_t n_max);

struct IsometryCheck {
  double max_ratio;  // max over trials of max(||Sf||/||f||, ||f||/||Sf||)
  double bound;      // 1 + epsilon
  bool holds;
};

IsometryCheck almost_isometry_check(const WeightSequence& w, double epsilon,
                                    const std::vector<std::vector<cplx>>& trials);

struct CounterexampleReport {
  double epsilon;
  double alpha;
  std::size_t length;
  std::vector<SpikeBound> spikes;
  RatioCheck ratio;
  KernelRatio kernel;
  std::vector<double> radii;
  double max_weight;
  double growth_max;
  IsometryCheck isometry;
};

/// Builds the spike weight and runs every check. length == 0 picks the required length.
CounterexampleReport build_counterexample(double epsilon, int spike_count, std::size_t length,
                                          std::span<const double> radii);

/// CSV `n,w_n,ln_w_n`.
void write_weight_csv(const WeightSequence& w, std::ostream& out);
/// Parses the CSV written by write_weight_csv; tail is 1.
WeightSequence read_weight_csv(std::istream& in);

}  // namespace shiftgeom
