#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "spike_regions/matrix.hpp"
#include "spike_regions/network.hpp"

namespace spike_regions {

/// Binary n x T matrix, neuron-major. Time steps are 0-based here: column t
/// holds s(t+1).
class SpikeTrain {
 public:
  SpikeTrain() = default;
  SpikeTrain(std::size_t neurons, std::size_t steps) : n_(neurons), T_(steps), bits_(neurons * steps, 0) {}
  SpikeTrain(std::size_t neurons, std::size_t steps, std::vector<std::uint8_t> bits)
      : n_(neurons), T_(steps), bits_(std::move(bits)) {
    if (bits_.size() != n_ * T_) throw DimensionError("spike train size mismatch");
    for (auto b : bits_)
      if (b > 1) throw ValidationError("spike entries must be 0 or 1");
  }

  std::size_t neurons() const { return n_; }
  std::size_t steps() const { return T_; }

  std::uint8_t operator()(std::size_t neuron, std::size_t t) const { return bits_[neuron * T_ + t]; }
  void set(std::size_t neuron, std::size_t t, bool v) { bits_[neuron * T_ + t] = v ? 1 : 0; }

  std::span<const std::uint8_t> neuron(std::size_t i) const { return {bits_.data() + i * T_, T_}; }
  const std::vector<std::uint8_t>& bits() const { return bits_; }

  // One '0'/'1' character per entry, neurons separated by '|'.
  std::string to_string() const {
    std::string s;
    for (std::size_t i = 0; i < n_; ++i) {
      if (i) s.push_back('|');
      for (std::size_t t = 0; t < T_; ++t) s.push_back(bits_[i * T_ + t] ? '1' : '0');
    }
    return s;
  }

  friend bool operator==(const SpikeTrain&, const SpikeTrain&) = default;
  friend auto operator<=>(const SpikeTrain& a, const SpikeTrain& b) {
    if (auto c = a.n_ <=> b.n_; c != 0) return c;
    if (auto c = a.T_ <=> b.T_; c != 0) return c;
    return a.bits_ <=> b.bits_;
  }

 private:
  std::size_t n_ = 0;
  std::size_t T_ = 0;
  std::vector<std::uint8_t> bits_;
};

template <Scalar S>
struct LayerTrace {
  SpikeTrain spikes;
  Matrix<S> potential;  // n x (T+1); column 0 is u(0)
};

template <Scalar S>
struct SimulationTrace {
  std::vector<LayerTrace<S>> layers;
  const SpikeTrain& output_spikes() const { return layers.back().spikes; }
};

/// H(z) = 1 iff z >= 0.
template <Scalar S>
bool heaviside(const S& z) {
  return !(z < S(0));
}

template <Scalar S>
Matrix<S> encode_direct(std::span<const S> x, int T) {
  if (T < 1) throw ValidationError("T must be >= 1");
  Matrix<S> out(x.size(), static_cast<std::size_t>(T));
  for (std::size_t i = 0; i < x.size(); ++i)
    for (int t = 0; t < T; ++t) out(i, static_cast<std::size_t>(t)) = x[i];
  return out;
}

namespace detail {

// One layer of the LIF recurrence driven by an n_in x T input matrix.
template <Scalar S>
LayerTrace<S> run_layer(const LayerParams<S>& layer, const Matrix<S>& input, int T) {
  const std::size_t n = layer.width();
  LayerTrace<S> trace{SpikeTrain(n, static_cast<std::size_t>(T)), Matrix<S>(n, static_cast<std::size_t>(T) + 1)};
  for (std::size_t i = 0; i < n; ++i) trace.potential(i, 0) = layer.u0[i];
  std::vector<S> column(input.rows());
  for (int t = 0; t < T; ++t) {
    const auto tc = static_cast<std::size_t>(t);
    for (std::size_t j = 0; j < input.rows(); ++j) column[j] = input(j, tc);
    const auto drive = multiply(layer.W, std::span<const S>(column));
    for (std::size_t i = 0; i < n; ++i) {
      const S integrated = layer.beta * trace.potential(i, tc) + drive[i] + layer.b[i];
      const bool fire = heaviside(S(integrated - layer.theta));
      trace.spikes.set(i, tc, fire);
      trace.potential(i, tc + 1) = fire ? S(integrated - layer.theta) : integrated;
    }
  }
  return trace;
}

template <Scalar S>
Matrix<S> spikes_as_matrix(const SpikeTrain& s) {
  Matrix<S> m(s.neurons(), s.steps());
  for (std::size_t i = 0; i < s.neurons(); ++i)
    for (std::size_t t = 0; t < s.steps(); ++t) m(i, t) = S(s(i, t));
  return m;
}

}  // namespace detail

/// Runs the discrete-time LIF dynamics on the directly encoded input.
template <Scalar S>
SimulationTrace<S> simulate(const Network<S>& net, std::span<const S> x) {
  if (x.size() != net.input_dim())
    throw DimensionError("input has dimension " + std::to_string(x.size()) + ", network expects " +
                         std::to_string(net.input_dim()));
  SimulationTrace<S> trace;
  trace.layers.reserve(net.layers.size());
  Matrix<S> input = encode_direct(x, net.T);
  for (const auto& layer : net.layers) {
    trace.layers.push_back(detail::run_layer(layer, input, net.T));
    input = detail::spikes_as_matrix<S>(trace.layers.back().spikes);
  }
  return trace;
}

template <Scalar S>
SimulationTrace<S> simulate(const Network<S>& net, const std::vector<S>& x) {
  return simulate(net, std::span<const S>(x));
}

/// Feeds a binary spike train directly into layer 1 (used for identity checks).
template <Scalar S>
SimulationTrace<S> simulate_spike_input(const Network<S>& net, const SpikeTrain& s0) {
  if (s0.neurons() != net.input_dim() || s0.steps() != static_cast<std::size_t>(net.T))
    throw DimensionError("input spike train shape does not match network");
  SimulationTrace<S> trace;
  Matrix<S> input = detail::spikes_as_matrix<S>(s0);
  for (const auto& layer : net.layers) {
    trace.layers.push_back(detail::run_layer(layer, input, net.T));
    input = detail::spikes_as_matrix<S>(trace.layers.back().spikes);
  }
  return trace;
}

template <Scalar S>
std::vector<S> decode(const DecoderSpec<S>& spec, const SpikeTrain& s) {
  const std::size_t n = s.neurons();
  const std::size_t T = s.steps();
  return std::visit(
      [&](const auto& d) -> std::vector<S> {
        using D = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<D, MembranePotentialDecoder<S>>) {
          if (d.a.size() != T || d.V.cols() != n) throw DimensionError("decoder shape mismatch");
          std::vector<S> out(d.V.rows(), S(0));
          std::vector<S> column(n);
          for (std::size_t t = 0; t < T; ++t) {
            for (std::size_t i = 0; i < n; ++i) column[i] = S(s(i, t));
            const auto y = multiply(d.V, std::span<const S>(column));
            for (std::size_t o = 0; o < out.size(); ++o) out[o] += d.a[t] * (y[o] + d.c[o]);
          }
          return out;
        } else if constexpr (std::is_same_v<D, FirstSpikeTimeDecoder<S>>) {
          const S f0 = d.f0 ? *d.f0 : S(static_cast<long>(T) + 1);
          std::vector<S> out(n);
          for (std::size_t i = 0; i < n; ++i) {
            S f = f0;
            for (std::size_t t = 0; t < T; ++t)
              if (s(i, t)) {
                f = S(static_cast<long>(t) + 1);
                break;
              }
            out[i] = d.transform == SpikeTimeTransform::Reciprocal ? S(S(1) / f) : f;
          }
          return out;
        } else {
          std::vector<S> out(n, S(0));
          for (std::size_t i = 0; i < n; ++i) {
            long count = 0;
            for (std::size_t t = 0; t < T; ++t) count += s(i, t);
            out[i] = S(count);
            if constexpr (std::is_same_v<D, RateDecoder>) out[i] /= S(static_cast<long>(T));
          }
          return out;
        }
      },
      spec);
}

template <Scalar S>
std::vector<S> realize(const Network<S>& net, std::span<const S> x) {
  return decode(net.decoder, simulate(net, x).output_spikes());
}

template <Scalar S>
std::vector<S> realize(const Network<S>& net, const std::vector<S>& x) {
  return realize(net, std::span<const S>(x));
}

/// Re-derives every potential and spike in `trace` from the parameters and
/// the input. Exact equality in exact mode, tolerance in float mode.
template <Scalar S>
bool replay_matches(const Network<S>& net, std::span<const S> x, const SimulationTrace<S>& trace) {
  if (trace.layers.size() != net.layers.size()) return false;
  Matrix<S> input = encode_direct(x, net.T);
  for (std::size_t l = 0; l < net.layers.size(); ++l) {
    const auto& p = net.layers[l];
    const auto& tr = trace.layers[l];
    for (std::size_t i = 0; i < p.width(); ++i) {
      if (!scalar_equal(tr.potential(i, 0), p.u0[i])) return false;
      for (int t = 1; t <= net.T; ++t) {
        const auto tc = static_cast<std::size_t>(t);
        S drive(0);
        for (std::size_t j = 0; j < p.input_width(); ++j) drive += p.W(i, j) * input(j, tc - 1);
        const S membrane_arg = p.beta * tr.potential(i, tc - 1) + drive + p.b[i] - p.theta;
        const bool s = tr.spikes(i, tc - 1) != 0;
        if (s != heaviside(membrane_arg)) return false;
        const S expected = p.beta * tr.potential(i, tc - 1) + drive + p.b[i] - (s ? p.theta : S(0));
        if (!scalar_equal(tr.potential(i, tc), expected)) return false;
      }
    }
    input = detail::spikes_as_matrix<S>(tr.spikes);
  }
  return true;
}

}  // namespace spike_regions
