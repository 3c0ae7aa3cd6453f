#include "shiftgeom/weighted_shift.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <locale>
#include <ostream>
#include <sstream>
#include <string>

namespace shiftgeom {

namespace {

constexpr int kMaxSpikes = 40;

void require_epsilon(double epsilon) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon))
    throw Error(ErrorKind::parameter, "epsilon must be a positive finite number", "epsilon");
}

bool start_ok(long n, int j, double alpha) {
  return static_cast<double>(2 * j - 1) / static_cast<double>(n + 2 * j) <= alpha / std::ldexp(1.0, j);
}

std::vector<long> spike_starts(double epsilon, int spike_count) {
  require_epsilon(epsilon);
  if (spike_count < 1 || spike_count > kMaxSpikes)
    throw Error(ErrorKind::parameter, "spike_count must lie in [1, " + std::to_string(kMaxSpikes) + "]",
                "spike_count");
  const double alpha = spike_alpha(epsilon);
  std::vector<long> starts;
  long prev = -1;
  for (int j = 1; j <= spike_count; ++j) {
    prev = minimal_spike_start(j, alpha, prev);
    starts.push_back(prev);
  }
  return starts;
}

double peak_objective(double x, long start, int j) {
  return std::pow(x, static_cast<double>(start + 1)) - std::pow(x, static_cast<double>(start + 2 * j));
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

double spike_alpha(double epsilon) {
  require_epsilon(epsilon);
  // same as 1 - (1 + eps)^-2 without the cancellation for small eps
  return epsilon * (2.0 + epsilon) / ((1.0 + epsilon) * (1.0 + epsilon));
}

long minimal_spike_start(int j, double alpha, long previous_start) {
  if (j < 1) throw Error(ErrorKind::parameter, "spike index must be >= 1", "j");
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorKind::parameter, "alpha must lie in (0, 1)", "alpha");
  // strictly past the previous spike [N_{j-1}, N_{j-1} + 2(j-1)]
  const long lower = j == 1 ? 0 : previous_start + 2 * (j - 1) + 1;
  const double guess = std::ceil(static_cast<double>(2 * j - 1) * std::ldexp(1.0, j) / alpha) - 2.0 * j;
  long n = std::max(lower, static_cast<long>(std::max(guess, 0.0)));
  while (n > lower && start_ok(n - 1, j, alpha)) --n;
  while (!start_ok(n, j, alpha)) ++n;
  return n;
}

std::size_t required_spike_length(double epsilon, int spike_count) {
  const std::vector<long> starts = spike_starts(epsilon, spike_count);
  return static_cast<std::size_t>(starts.back() + 2 * spike_count + 1);
}

WeightSequence build_spike_weight(double epsilon, int spike_count, std::size_t length) {
  const std::vector<long> starts = spike_starts(epsilon, spike_count);
  const std::size_t required = static_cast<std::size_t>(starts.back() + 2 * spike_count + 1);
  if (length < required)
    throw Error(ErrorKind::capacity,
                "length " + std::to_string(length) + " cannot hold " + std::to_string(spike_count) +
                    " spikes; required length " + std::to_string(required),
                "length");

  SpikeMeta meta;
  meta.epsilon = epsilon;
  meta.alpha = spike_alpha(epsilon);
  meta.spike_starts = starts;
  meta.spike_count = spike_count;
  meta.levels.assign(length, 0);
  for (int j = 1; j <= spike_count; ++j) {
    const long s = starts[static_cast<std::size_t>(j - 1)];
    for (int m = 0; m <= j; ++m) {
      meta.levels[static_cast<std::size_t>(s + m)] = m;
      meta.levels[static_cast<std::size_t>(s + j + m)] = j - m;
    }
  }
  std::vector<double> w(length);
  for (std::size_t n = 0; n < length; ++n) w[n] = std::pow(1.0 + epsilon, 2.0 * meta.levels[n]);
  return WeightSequence(std::move(w), 1.0, std::move(meta));
}

RatioCheck ratio_bound_check(const WeightSequence& w, double epsilon) {
  require_epsilon(epsilon);
  RatioCheck r{1.0, (1.0 + epsilon) * (1.0 + epsilon), true};
  const auto& vals = w.values();
  const auto& spike = w.spike();
  if (spike && spike->epsilon == epsilon) {
    // exact: adjacent levels differ by at most one step of 2 ln(1 + epsilon)
    int step = 0;
    for (std::size_t n = 0; n + 1 < spike->levels.size(); ++n)
      step = std::max(step, std::abs(spike->levels[n + 1] - spike->levels[n]));
    step = std::max(step, std::abs(spike->levels.back()));  // into the unit tail
    r.max_ratio = std::pow(1.0 + epsilon, 2.0 * step);
  } else {
    for (std::size_t n = 0; n < vals.size(); ++n) {
      const double a = vals[n];
      const double b = w[n + 1];
      r.max_ratio = std::max({r.max_ratio, b / a, a / b});
    }
  }
  r.holds = r.max_ratio <= r.bound * (1.0 + 4e-16);
  return r;
}

KernelRatio kernel_ratio_check(const WeightSequence& w, std::span<const double> radii, double epsilon) {
  require_epsilon(epsilon);
  if (radii.empty()) throw Error(ErrorKind::parameter, "no radii", "radii");
  for (double r : radii)
    if (!(r >= 0.0 && r < 1.0)) throw Error(ErrorKind::parameter, "radii must lie in [0, 1)", "radii");
  std::vector<double> ratio(radii.size());
  std::vector<double> err(radii.size());
  parallel_for(radii.size(), [&](std::size_t i) {
    const double r = radii[i];
    const KernelDiag d = weighted_kernel_diag(w, cplx(r, 0.0));
    const double scale = 1.0 - r * r;
    ratio[i] = d.value * scale;
    err[i] = d.error_bound * scale;
  });
  KernelRatio k;
  k.min_ratio = *std::min_element(ratio.begin(), ratio.end());
  k.max_ratio = *std::max_element(ratio.begin(), ratio.end());
  k.max_error = *std::max_element(err.begin(), err.end());
  k.lower_bound = 1.0 - spike_alpha(epsilon);
  k.holds = k.min_ratio + k.max_error >= k.lower_bound && k.max_ratio - k.max_error <= 1.0;
  return k;
}

SpikeBound spike_peak_bound(long start, int j) {
  if (start < 1) throw Error(ErrorKind::parameter, "N_j must be >= 1", "N_j");
  if (j < 1) throw Error(ErrorKind::parameter, "j must be >= 1", "j");
  SpikeBound b;
  b.j = j;
  b.start = start;
  const double n1 = static_cast<double>(start + 1);
  const double n2 = static_cast<double>(start + 2 * j);
  const double q = static_cast<double>(2 * j - 1);
  b.x_star = std::pow(n1 / n2, 1.0 / q);
  b.peak = std::pow(n1 / n2, n1 / q) * q / n2;
  b.bound = q / n2;

  // The objective is unimodal on [0, 1], so the neighbours of the best grid
  // point bracket the maximiser. Zoom until the bracket collapses.
  constexpr int kPoints = 2000;
  double lo = 0.0;
  double hi = 1.0;
  double best = 0.0;
  for (int pass = 0; pass < 60 && hi - lo > 1e-15; ++pass) {
    const double h = (hi - lo) / kPoints;
    int arg = 0;
    double val = -1.0;
    for (int i = 0; i <= kPoints; ++i) {
      const double f = peak_objective(lo + h * i, start, j);
      if (f > val) {
        val = f;
        arg = i;
      }
    }
    best = std::max(best, val);
    const double centre = lo + h * arg;
    lo = std::max(0.0, centre - h);
    hi = std::min(1.0, centre + h);
  }
  b.grid_peak = best;
  return b;
}

std::vector<cplx> weighted_kernel_coeffs(const WeightSequence& w, cplx lambda, std::size_t count) {
  if (count > w.size())
    throw Error(ErrorKind::capacity,
                "kernel truncation " + std::to_string(count) + " exceeds weight length " + std::to_string(w.size()),
                "count");
  std::vector<cplx> c(count);
  const cplx lb = std::conj(lambda);
  cplx p = 1.0;
  for (std::size_t n = 0; n < count; ++n) {
    c[n] = p / w.at(n);
    p *= lb;
  }
  return c;
}

std::vector<cplx> backward_shift_apply(const WeightSequence& w, std::span<const cplx> coeffs) {
  if (coeffs.size() > w.size())
    throw Error(ErrorKind::capacity,
                "coefficient length " + std::to_string(coeffs.size()) + " exceeds weight length " +
                    std::to_string(w.size()),
                "coeffs");
  if (coeffs.empty()) return {};
  std::vector<cplx> out(coeffs.size() - 1);
  for (std::size_t n = 0; n + 1 < coeffs.size(); ++n) out[n] = (w.at(n + 1) / w.at(n)) * coeffs[n + 1];
  return out;
}

EigenCheck eigenvector_check(const WeightSequence& w, cplx lambda, std::size_t count) {
  if (std::abs(lambda) >= 1.0) throw Error(ErrorKind::parameter, "|lambda| must be < 1", "lambda");
  if (count < 2) throw Error(ErrorKind::parameter, "truncation must be >= 2", "count");
  const std::vector<cplx> k = weighted_kernel_coeffs(w, std::conj(lambda), count);
  const std::vector<cplx> out = backward_shift_apply(w, k);
  std::vector<cplx> diff(out.size());
  for (std::size_t n = 0; n < out.size(); ++n) diff[n] = out[n] - lambda * k[n];
  EigenCheck e;
  e.residual = std::sqrt(h2w_norm_sq(diff, w));
  // sum_{n >= count} |lambda|^(2n) / w_n
  const double x = std::norm(lambda);
  e.tail_bound = std::sqrt(std::pow(x, static_cast<double>(count)) / ((1.0 - x) * w.min_value()));
  e.bound = e.tail_bound + 8.0 * std::numeric_limits<double>::epsilon() * std::sqrt(h2w_norm_sq(k, w));
  return e;
}

GrowthWitness shift_growth_witness(const WeightSequence& w, std::span<const cplx> coeffs, std::size_t n_max) {
  if (coeffs.empty()) throw Error(ErrorKind::parameter, "coefficients must be nonzero", "coeffs");
  bool nonzero = false;
  for (const cplx& a : coeffs) {
    if (!std::isfinite(a.real()) || !std::isfinite(a.imag()))
      throw Error(ErrorKind::parameter, "coefficients must be finite", "coeffs");
    nonzero = nonzero || a != 0.0;
  }
  if (!nonzero) throw Error(ErrorKind::parameter, "coefficients must be nonzero", "coeffs");
  if (coeffs.size() - 1 + n_max >= w.size())
    throw Error(ErrorKind::capacity,
                "growth witness needs weight length " + std::to_string(coeffs.size() + n_max) + ", have " +
                    std::to_string(w.size()),
                "n_max");

  GrowthWitness g;
  g.norms_sq.resize(n_max + 1);
  std::vector<double> parts(coeffs.size());
  for (std::size_t n = 0; n <= n_max; ++n) {
    for (std::size_t j = 0; j < coeffs.size(); ++j) parts[j] = std::norm(coeffs[j]) * w.at(j + n);
    g.norms_sq[n] = tree_sum(parts);
  }
  const auto it = std::max_element(g.norms_sq.begin(), g.norms_sq.end());
  g.max_norm_sq = *it;
  g.argmax = static_cast<std::size_t>(it - g.norms_sq.begin());
  const double peak = *std::max_element(w.values().begin(), w.values().end());
  g.reaches_peak = false;
  for (const cplx& a : coeffs)
    if (a != 0.0 && g.max_norm_sq >= std::norm(a) * peak * (1.0 - 1e-15)) g.reaches_peak = true;
  return g;
}

IsometryCheck almost_isometry_check(const WeightSequence& w, double epsilon,
                                    const std::vector<std::vector<cplx>>& trials) {
  require_epsilon(epsilon);
  if (trials.empty()) throw Error(ErrorKind::parameter, "no trial sequences", "trials");
  IsometryCheck r{1.0, 1.0 + epsilon, true};
  for (std::size_t t = 0; t < trials.size(); ++t) {
    const auto& a = trials[t];
    if (a.size() + 1 > w.size())
      throw Error(ErrorKind::capacity, "trial " + std::to_string(t) + " exceeds weight length", "trials");
    std::vector<double> num(a.size());
    std::vector<double> den(a.size());
    for (std::size_t n = 0; n < a.size(); ++n) {
      num[n] = std::norm(a[n]) * w.at(n + 1);
      den[n] = std::norm(a[n]) * w.at(n);
    }
    const double d = tree_sum(den);
    if (!(d > 0.0)) throw Error(ErrorKind::parameter, "trial " + std::to_string(t) + " is zero", "trials");
    const double ratio = std::sqrt(tree_sum(num) / d);
    r.max_ratio = std::max({r.max_ratio, ratio, 1.0 / ratio});
  }
  r.holds = r.max_ratio <= r.bound * (1.0 + 4e-16);
  return r;
}

CounterexampleReport build_counterexample(double epsilon, int spike_count, std::size_t length,
                                          std::span<const double> radii) {
  if (length == 0) length = required_spike_length(epsilon, spike_count);
  const WeightSequence w = build_spike_weight(epsilon, spike_count, length);
  const SpikeMeta& meta = *w.spike();

  CounterexampleReport rep;
  rep.epsilon = epsilon;
  rep.alpha = meta.alpha;
  rep.length = length;
  for (int j = 1; j <= spike_count; ++j) rep.spikes.push_back(spike_peak_bound(meta.spike_starts[j - 1], j));
  rep.ratio = ratio_bound_check(w, epsilon);
  rep.radii.assign(radii.begin(), radii.end());
  rep.kernel = kernel_ratio_check(w, radii, epsilon);
  rep.max_weight = *std::max_element(w.values().begin(), w.values().end());

  const std::vector<cplx> one{1.0};
  rep.growth_max = shift_growth_witness(w, one, length - 1).max_norm_sq;

  std::vector<std::vector<cplx>> trials;
  for (std::size_t n = 0; n + 1 < length; ++n) {
    std::vector<cplx> e(n + 1, 0.0);
    e[n] = 1.0;
    trials.push_back(std::move(e));
  }
  trials.emplace_back(length - 1, cplx(1.0));
  rep.isometry = almost_isometry_check(w, epsilon, trials);
  return rep;
}

void write_weight_csv(const WeightSequence& w, std::ostream& out) {
  out << "n,w_n,ln_w_n\n";
  const auto& spike = w.spike();
  for (std::size_t n = 0; n < w.size(); ++n) {
    const double lnw = spike ? 2.0 * spike->levels[n] * std::log1p(spike->epsilon) : std::log(w.at(n));
    out << n << ',' << fmt17(w.at(n)) << ',' << fmt17(lnw) << '\n';
  }
  if (!out) throw Error(ErrorKind::io, "failed writing weight CSV");
}

WeightSequence read_weight_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorKind::data, "empty weight CSV", "header");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "n,w_n,ln_w_n") throw Error(ErrorKind::data, "weight CSV header must be n,w_n,ln_w_n", "header");
  std::vector<double> w;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream ss(line);
    ss.imbue(std::locale::classic());
    long n = -1;
    double value = 0.0;
    char c1 = 0;
    if (!(ss >> n >> c1 >> value) || c1 != ',')
      throw Error(ErrorKind::data, "malformed weight CSV row " + std::to_string(row + 1), "row " + std::to_string(row + 1));
    if (n != static_cast<long>(row))
      throw Error(ErrorKind::data, "weight CSV indices must run 0, 1, 2, ...", "n[" + std::to_string(row) + "]");
    if (!(value > 0.0) || !std::isfinite(value))
      throw Error(ErrorKind::data, "weights must be positive", "w_n[" + std::to_string(row) + "]");
    w.push_back(value);
    ++row;
  }
  if (w.empty()) throw Error(ErrorKind::data, "weight CSV has no rows", "rows");
  return WeightSequence(std::move(w));
}

}  // namespace shiftgeom
