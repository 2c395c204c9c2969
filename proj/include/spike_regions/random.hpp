#pragma once

// Reproducible random parameters. The standard distributions are
// implementation-defined, so integers and unit reals are mapped from raw
// mt19937_64 output by hand; identical seeds give identical networks on every
// platform.

#include <cstdint>
#include <random>
#include <vector>

#include "spike_regions/network.hpp"

namespace spike_regions {

using Rng = std::mt19937_64;

// Uniform integer in [lo, hi] by rejection.
inline long uniform_int(Rng& rng, long lo, long hi) {
  if (hi < lo) throw ValidationError("uniform_int: empty range");
  const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
  const std::uint64_t limit = Rng::max() - Rng::max() % span;
  std::uint64_t v;
  do {
    v = rng();
  } while (v >= limit);
  return lo + static_cast<long>(v % span);
}

// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

struct RandomNetOptions {
  long grid = 64;  // weights, biases and u0 are multiples of 1/grid
  long beta_steps = 8;  // beta in {0, 1/8, ..., 1}
  bool random_leak = true;  // otherwise beta = theta = 1
};

/// Random LIF network with parameters on a rational grid: W and b in [-1, 1],
/// u0 in [0, 1), beta in {k/8}, theta in {k/8 : 4 <= k <= 12}. Decoder is a
/// membrane readout with a_t = 1 and random V.
template <Scalar S>
Network<S> random_network(Rng& rng, std::size_t n_in, const std::vector<std::size_t>& widths, int T,
                          const RandomNetOptions& opt = {}) {
  if (widths.empty()) throw ValidationError("random_network: need at least one layer");
  const S g(opt.grid);
  auto grid_value = [&](long lo, long hi) { return S(uniform_int(rng, lo, hi)) / g; };
  Network<S> net;
  net.T = T;
  std::size_t prev = n_in;
  for (auto n : widths) {
    LayerParams<S> p{Matrix<S>(n, prev), std::vector<S>(n), std::vector<S>(n), S(1), S(1)};
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < prev; ++j) p.W(i, j) = grid_value(-opt.grid, opt.grid);
    for (auto& v : p.b) v = grid_value(-opt.grid, opt.grid);
    for (auto& v : p.u0) v = grid_value(0, opt.grid - 1);
    if (opt.random_leak) {
      p.beta = S(uniform_int(rng, 0, opt.beta_steps)) / S(opt.beta_steps);
      p.theta = S(uniform_int(rng, 4, 12)) / S(8);
    }
    net.layers.push_back(std::move(p));
    prev = n;
  }
  Matrix<S> V(1, prev);
  for (std::size_t j = 0; j < prev; ++j) V(0, j) = grid_value(-opt.grid, opt.grid);
  net.decoder = membrane_decoder<S>(T, std::move(V), {S(0)});
  validate(net);
  return net;
}

}  // namespace spike_regions
