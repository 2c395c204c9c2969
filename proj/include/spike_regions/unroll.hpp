#pragma once

#include <vector>

#include "spike_regions/network.hpp"
#include "spike_regions/simulate.hpp"

namespace spike_regions {

/// One LIF layer rewritten as a Heaviside layer on time-vectorised signals.
///
/// Signals are stacked time-major, v = (v(1); ...; v(T)). The weight is
/// block-diagonal with W repeated T times. The pre-activation at step t is
///
///   z(t) = a(t) + static_bias(t) + sum_{i=1}^{t-1} beta^i a(t-i)
///          - theta sum_{i=1}^{t-1} beta^i s(t-i)
///
/// with a = block_weight * v_in and
/// static_bias(t) = beta^t u0 + b sum_{i=0}^{t-1} beta^i - theta, so the bias
/// depends on the layer's own spike history and must be evaluated step by step.
template <Scalar S>
struct UnrolledLayer {
  Matrix<S> block_weight;        // (n T) x (n_prev T)
  std::vector<S> static_bias;    // n T, time-major
  std::vector<S> history_decay;  // beta^0 .. beta^{T-1}
  S theta{1};
  std::size_t width = 0;
};

template <Scalar S>
struct UnrolledNetwork {
  std::vector<UnrolledLayer<S>> layers;
  int T = 1;
  std::size_t input_dim = 0;
};

template <Scalar S>
UnrolledNetwork<S> unroll_to_heaviside(const Network<S>& net) {
  UnrolledNetwork<S> out;
  out.T = net.T;
  out.input_dim = net.input_dim();
  const auto T = static_cast<std::size_t>(net.T);
  for (const auto& p : net.layers) {
    const std::size_t n = p.width();
    const std::size_t m = p.input_width();
    UnrolledLayer<S> u;
    u.width = n;
    u.theta = p.theta;
    u.block_weight = Matrix<S>(n * T, m * T);
    for (std::size_t t = 0; t < T; ++t)
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j) u.block_weight(t * n + i, t * m + j) = p.W(i, j);
    u.history_decay.resize(T);
    for (std::size_t k = 0; k < T; ++k) u.history_decay[k] = power(p.beta, static_cast<int>(k));
    u.static_bias.resize(n * T);
    for (std::size_t t = 1; t <= T; ++t) {
      S geometric(0);
      for (std::size_t k = 0; k < t; ++k) geometric += u.history_decay[k];
      const S decay_t = power(p.beta, static_cast<int>(t));
      for (std::size_t i = 0; i < n; ++i)
        u.static_bias[(t - 1) * n + i] = decay_t * p.u0[i] + p.b[i] * geometric - p.theta;
    }
    out.layers.push_back(std::move(u));
  }
  return out;
}

/// Evaluates the unrolled network on x and returns each layer's spikes.
template <Scalar S>
std::vector<SpikeTrain> evaluate_unrolled(const UnrolledNetwork<S>& net, std::span<const S> x) {
  if (x.size() != net.input_dim) throw DimensionError("input dimension mismatch");
  const auto T = static_cast<std::size_t>(net.T);
  std::vector<S> signal;
  signal.reserve(x.size() * T);
  for (std::size_t t = 0; t < T; ++t) signal.insert(signal.end(), x.begin(), x.end());

  std::vector<SpikeTrain> result;
  for (const auto& layer : net.layers) {
    const std::size_t n = layer.width;
    const auto drive = multiply(layer.block_weight, std::span<const S>(signal));
    SpikeTrain spikes(n, T);
    std::vector<S> next(n * T, S(0));
    for (std::size_t t = 0; t < T; ++t) {
      for (std::size_t i = 0; i < n; ++i) {
        S z = drive[t * n + i] + layer.static_bias[t * n + i];
        for (std::size_t k = 1; k <= t; ++k) {
          z += layer.history_decay[k] * drive[(t - k) * n + i];
          if (spikes(i, t - k)) z -= layer.theta * layer.history_decay[k];
        }
        const bool fire = heaviside(z);
        spikes.set(i, t, fire);
        next[t * n + i] = S(fire ? 1 : 0);
      }
    }
    result.push_back(std::move(spikes));
    signal = std::move(next);
  }
  return result;
}

template <Scalar S>
std::vector<SpikeTrain> evaluate_unrolled(const UnrolledNetwork<S>& net, const std::vector<S>& x) {
  return evaluate_unrolled(net, std::span<const S>(x));
}

}  // namespace spike_regions
