#pragma once

#include "shiftgeom/common.hpp"

#include <optional>
#include <vector>

namespace shiftgeom {

/// Construction data recorded for spike weights.
struct SpikeMeta {
  double epsilon = 0.0;
  double alpha = 0.0;
  std::vector<long> spike_starts;  // N_1, N_2, ...
  int spike_count = 0;
  // ln w_n = levels[n] * 2 ln(1 + epsilon), integer levels.
  std::vector<int> levels;
};

/// Positive weight sequence {w_n} defining H^2_w.
///
/// Stored explicitly on [0, size()); beyond that the sequence continues with
/// the constant `tail` (1 for every sequence the spike constructor builds).
/// Only infinite sums (the kernel diagonal) read the tail; finite operators
/// that need w_n past size() raise capacity errors.
class WeightSequence {
 public:
  explicit WeightSequence(std::vector<double> w, double tail = 1.0, std::optional<SpikeMeta> meta = std::nullopt);

  static WeightSequence constant(std::size_t length, double value = 1.0) {
    return WeightSequence(std::vector<double>(length, value), value);
  }

  std::size_t size() const noexcept { return w_.size(); }
  double operator[](std::size_t n) const { return n < w_.size() ? w_[n] : tail_; }
  /// Stored value; capacity error past the stored range.
  double at(std::size_t n) const;
  const std::vector<double>& values() const noexcept { return w_; }
  double tail() const noexcept { return tail_; }
  double min_value() const noexcept { return min_; }
  const std::optional<SpikeMeta>& spike() const noexcept { return meta_; }

  friend bool operator==(const WeightSequence& a, const WeightSequence& b) {
    return a.w_ == b.w_ && a.tail_ == b.tail_;
  }

 private:
  std::vector<double> w_;
  double tail_;
  double min_;
  std::optional<SpikeMeta> meta_;
};

}  // namespace shiftgeom
