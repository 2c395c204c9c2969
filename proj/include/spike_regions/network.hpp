#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "spike_regions/errors.hpp"
#include "spike_regions/matrix.hpp"
#include "spike_regions/scalar.hpp"

namespace spike_regions {

/// Parameters of one LIF layer: W is n_l x n_{l-1}, b and u0 have length n_l.
/// beta is the leak in [0,1] and theta > 0 the firing threshold, both shared
/// by the layer.
template <Scalar S>
struct LayerParams {
  Matrix<S> W;
  std::vector<S> b;
  std::vector<S> u0;
  S beta{1};
  S theta{1};

  std::size_t width() const { return W.rows(); }
  std::size_t input_width() const { return W.cols(); }

  friend bool operator==(const LayerParams&, const LayerParams&) = default;
};

// The only encoder in scope: feed the analog input unchanged at every step.
struct DirectEncoder {
  friend bool operator==(const DirectEncoder&, const DirectEncoder&) = default;
};
using EncoderSpec = std::variant<DirectEncoder>;

/// Output = sum_t a_t (V s(t) + c).
template <Scalar S>
struct MembranePotentialDecoder {
  std::vector<S> a;
  Matrix<S> V;
  std::vector<S> c;
  friend bool operator==(const MembranePotentialDecoder&, const MembranePotentialDecoder&) = default;
};

struct RateDecoder {
  friend bool operator==(const RateDecoder&, const RateDecoder&) = default;
};

struct CountDecoder {
  friend bool operator==(const CountDecoder&, const CountDecoder&) = default;
};

enum class SpikeTimeTransform { Identity, Reciprocal };

/// Output = transform(first firing step), or transform(f0) for a silent neuron.
/// f0 defaults to T + 1 and transform to 1/x.
template <Scalar S>
struct FirstSpikeTimeDecoder {
  std::optional<S> f0;
  SpikeTimeTransform transform = SpikeTimeTransform::Reciprocal;
  friend bool operator==(const FirstSpikeTimeDecoder&, const FirstSpikeTimeDecoder&) = default;
};

template <Scalar S>
using DecoderSpec =
    std::variant<MembranePotentialDecoder<S>, RateDecoder, CountDecoder, FirstSpikeTimeDecoder<S>>;

template <Scalar S>
struct Network {
  std::vector<LayerParams<S>> layers;
  int T = 1;
  EncoderSpec encoder = DirectEncoder{};
  DecoderSpec<S> decoder = RateDecoder{};

  std::size_t depth() const { return layers.size(); }
  std::size_t input_dim() const { return layers.empty() ? 0 : layers.front().input_width(); }
  std::size_t output_width() const { return layers.empty() ? 0 : layers.back().width(); }

  std::size_t output_dim() const {
    if (const auto* m = std::get_if<MembranePotentialDecoder<S>>(&decoder)) return m->V.rows();
    return output_width();
  }

  std::vector<std::size_t> widths() const {
    std::vector<std::size_t> w;
    for (const auto& l : layers) w.push_back(l.width());
    return w;
  }

  friend bool operator==(const Network&, const Network&) = default;
};

/// Throws ValidationError (or DimensionError) when a model invariant fails.
template <Scalar S>
void validate(const Network<S>& net) {
  if (net.T < 1) throw ValidationError("latency T must be >= 1");
  if (net.layers.empty()) throw ValidationError("network needs at least one layer");
  for (std::size_t l = 0; l < net.layers.size(); ++l) {
    const auto& layer = net.layers[l];
    const std::string where = "layer " + std::to_string(l + 1) + ": ";
    if (layer.width() == 0 || layer.input_width() == 0)
      throw DimensionError(where + "empty weight matrix");
    if (layer.b.size() != layer.width() || layer.u0.size() != layer.width())
      throw DimensionError(where + "b/u0 length does not match W rows");
    if (l > 0 && layer.input_width() != net.layers[l - 1].width())
      throw DimensionError(where + "input width does not match previous layer width");
    if (layer.beta < S(0) || layer.beta > S(1))
      throw ValidationError(where + "beta must lie in [0,1]");
    if (!(layer.theta > S(0))) throw ValidationError(where + "theta must be > 0");
  }
  if (const auto* m = std::get_if<MembranePotentialDecoder<S>>(&net.decoder)) {
    if (m->a.size() != static_cast<std::size_t>(net.T))
      throw DimensionError("decoder: a must have T entries");
    if (m->V.cols() != net.output_width())
      throw DimensionError("decoder: V columns must equal the last layer width");
    if (m->c.size() != m->V.rows()) throw DimensionError("decoder: c length must equal V rows");
  }
}

template <Scalar To, Scalar From>
Network<To> network_cast(const Network<From>& net) {
  auto vec = [](const std::vector<From>& v) {
    std::vector<To> out;
    out.reserve(v.size());
    for (const auto& x : v) out.push_back(scalar_cast<To>(x));
    return out;
  };
  auto mat = [](const Matrix<From>& m) {
    Matrix<To> out(m.rows(), m.cols());
    for (std::size_t r = 0; r < m.rows(); ++r)
      for (std::size_t c = 0; c < m.cols(); ++c) out(r, c) = scalar_cast<To>(m(r, c));
    return out;
  };
  Network<To> out;
  out.T = net.T;
  out.encoder = net.encoder;
  for (const auto& l : net.layers)
    out.layers.push_back({mat(l.W), vec(l.b), vec(l.u0), scalar_cast<To>(l.beta),
                          scalar_cast<To>(l.theta)});
  std::visit(
      [&](const auto& d) {
        using D = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<D, MembranePotentialDecoder<From>>) {
          out.decoder = MembranePotentialDecoder<To>{vec(d.a), mat(d.V), vec(d.c)};
        } else if constexpr (std::is_same_v<D, FirstSpikeTimeDecoder<From>>) {
          FirstSpikeTimeDecoder<To> f;
          if (d.f0) f.f0 = scalar_cast<To>(*d.f0);
          f.transform = d.transform;
          out.decoder = f;
        } else {
          out.decoder = d;
        }
      },
      net.decoder);
  return out;
}

/// Membrane decoder with a_t = 1 for all t.
template <Scalar S>
MembranePotentialDecoder<S> membrane_decoder(int T, Matrix<S> V, std::vector<S> c) {
  return {std::vector<S>(static_cast<std::size_t>(T), S(1)), std::move(V), std::move(c)};
}

}  // namespace spike_regions
