#pragma once

// Single-neuron view of the first hidden layer. Under direct encoding the
// neuron sees the constant drive z = <w, x> + b at every step, and at step t
// it fires iff z >= z*(t, history) for a threshold location that depends
// only on its own earlier spikes. The pre-activation axis therefore splits
// into intervals, each with one spike pattern.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "spike_regions/scalar.hpp"
#include "spike_regions/simulate.hpp"

namespace spike_regions {

using Pattern = std::vector<std::uint8_t>;

inline std::string pattern_string(std::span<const std::uint8_t> p) {
  std::string s;
  for (auto b : p) s.push_back(b ? '1' : '0');
  return s;
}

/// Firing threshold location at step t (1-based) after history h = (s(1), ..., s(t-1)):
///   z* = (-beta^t u0 + theta (1 + sum_{i=1}^{t-1} beta^i h_{t-i})) / sum_{i=0}^{t-1} beta^i
template <Scalar S>
S shift_value(int t, std::span<const std::uint8_t> history, const S& beta, const S& theta, const S& u0) {
  if (t < 1) throw ValidationError("shift_value: t must be >= 1");
  if (history.size() != static_cast<std::size_t>(t - 1))
    throw ValidationError("shift_value: history must have length t-1");
  S decayed_spikes(0);
  S denom(0);
  S beta_i(1);
  for (int i = 0; i < t; ++i) {
    denom += beta_i;
    if (i >= 1 && history[static_cast<std::size_t>(t - 1 - i)]) decayed_spikes += beta_i;
    beta_i *= beta;
  }
  // beta_i == beta^t here
  return (theta * (S(1) + decayed_spikes) - beta_i * u0) / denom;
}

/// Brute-force reference: iterate the scalar recurrence
/// u(t) = beta u(t-1) + z - theta s(t), s(t) = H(beta u(t-1) + z - theta).
template <Scalar S>
Pattern pattern_oracle(const S& z, const S& beta, const S& theta, const S& u0, int T) {
  Pattern p(static_cast<std::size_t>(T), 0);
  S u = u0;
  for (int t = 0; t < T; ++t) {
    const S arg = beta * u + z - theta;
    const bool fire = heaviside(arg);
    p[static_cast<std::size_t>(t)] = fire;
    u = fire ? arg : S(beta * u + z);
  }
  return p;
}

inline long temporal_bound(int T) {
  if (T < 1) throw ValidationError("temporal_bound: T must be >= 1");
  return (static_cast<long>(T) * T + T + 2) / 2;
}

/// Sorted boundaries z*_1 < ... < z*_{r-1} and one pattern per interval
/// (-inf, z*_1), [z*_1, z*_2), ..., [z*_{r-1}, inf). A boundary belongs to the
/// interval on its right.
template <Scalar S>
struct TemporalPartition {
  std::vector<S> boundaries;
  std::vector<Pattern> patterns;

  std::size_t region_count() const { return patterns.size(); }

  // Index of the interval holding z.
  std::size_t locate(const S& z) const {
    return static_cast<std::size_t>(
        std::upper_bound(boundaries.begin(), boundaries.end(), z) - boundaries.begin());
  }
  const Pattern& pattern_at(const S& z) const { return patterns[locate(z)]; }
};

/// Event-driven refinement: each live interval is split at most once per step,
/// at the threshold its own history produces.
template <Scalar S>
TemporalPartition<S> neuron_partition(const S& beta, const S& theta, const S& u0, int T) {
  if (T < 1) throw ValidationError("neuron_partition: T must be >= 1");
  TemporalPartition<S> part;
  part.patterns.emplace_back();
  for (int t = 1; t <= T; ++t) {
    TemporalPartition<S> next;
    next.boundaries.reserve(part.boundaries.size() + part.patterns.size());
    next.patterns.reserve(part.patterns.size() * 2);
    for (std::size_t k = 0; k < part.patterns.size(); ++k) {
      const Pattern& hist = part.patterns[k];
      const S zs = shift_value<S>(t, hist, beta, theta, u0);
      const S* lo = k > 0 ? &part.boundaries[k - 1] : nullptr;
      const S* hi = k < part.boundaries.size() ? &part.boundaries[k] : nullptr;
      if (k > 0) next.boundaries.push_back(*lo);
      // Coincident thresholds (exact equality, or within tolerance in float
      // mode) snap to the existing endpoint and produce no split.
      const bool at_or_below_lo = lo && (zs <= *lo || scalar_equal(zs, *lo));
      const bool at_or_above_hi = hi && (zs >= *hi || scalar_equal(zs, *hi));
      Pattern left = hist;
      if (at_or_below_lo) {
        left.push_back(1);
        next.patterns.push_back(std::move(left));
      } else if (at_or_above_hi) {
        left.push_back(0);
        next.patterns.push_back(std::move(left));
      } else {
        Pattern right = hist;
        left.push_back(0);
        right.push_back(1);
        next.patterns.push_back(std::move(left));
        next.boundaries.push_back(zs);
        next.patterns.push_back(std::move(right));
      }
    }
    part = std::move(next);
  }
  return part;
}

/// Partition export: one CSV row per interval (interval_lo, interval_hi, pattern).
template <Scalar S>
std::string partition_csv(const TemporalPartition<S>& part) {
  std::ostringstream os;
  os << "interval_lo,interval_hi,pattern\n";
  for (std::size_t k = 0; k < part.patterns.size(); ++k) {
    os << (k == 0 ? std::string("-inf") : format_scalar(part.boundaries[k - 1])) << ','
       << (k == part.boundaries.size() ? std::string("inf") : format_scalar(part.boundaries[k])) << ','
       << pattern_string(part.patterns[k]) << '\n';
  }
  return os.str();
}

/// One step of a realised trajectory at a fixed drive z.
template <Scalar S>
struct ShiftStep {
  int t = 0;
  Pattern history;
  S threshold;  // z*(t, history)
  bool spike = false;
  std::optional<int> repeats;  // earliest step with the identical threshold value
};

/// Thresholds visited by the trajectory actually taken at drive z.
template <Scalar S>
std::vector<ShiftStep<S>> shift_trajectory(const S& z, const S& beta, const S& theta, const S& u0, int T) {
  if (T < 1) throw ValidationError("shift_trajectory: T must be >= 1");
  std::vector<ShiftStep<S>> steps;
  Pattern history;
  for (int t = 1; t <= T; ++t) {
    ShiftStep<S> st;
    st.t = t;
    st.history = history;
    st.threshold = shift_value<S>(t, history, beta, theta, u0);
    st.spike = !(z < st.threshold);
    for (const auto& prev : steps)
      if (scalar_equal(prev.threshold, st.threshold)) {
        st.repeats = prev.t;
        break;
      }
    history.push_back(st.spike);
    steps.push_back(std::move(st));
  }
  return steps;
}

}  // namespace spike_regions
