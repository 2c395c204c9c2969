#pragma once

#include <boost/random/sobol.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "spike_regions/arrangement2d.hpp"
#include "spike_regions/constructors.hpp"
#include "spike_regions/counting.hpp"
#include "spike_regions/random.hpp"
#include "spike_regions/simulate.hpp"
#include "spike_regions/temporal_partition.hpp"

namespace spike_regions {

/// Region statistics of one network. Layer counts are numbers of distinct
/// spike trains of each layer's own neurons.
struct CountReport {
  std::vector<std::uint64_t> layer_counts;
  std::uint64_t distinct_outputs = 0;
  std::optional<std::uint64_t> connected_constant_regions;
  BigInt bound{0};
  std::string method;  // "exact2d" or "sampled"
  std::size_t layer = 1;  // layer used for the connected-component key
  std::optional<std::uint64_t> arrangement_regions;  // exact2d: whole-plane first-layer count
  std::optional<std::uint64_t> cells;                // exact2d: cells inside the clip box
  std::optional<std::uint64_t> samples;
  std::optional<std::uint64_t> seed;
};

namespace detail {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) { parent_[find(a)] = find(b); }
  std::size_t components() {
    std::size_t c = 0;
    for (std::size_t i = 0; i < parent_.size(); ++i) c += find(i) == i;
    return c;
  }

 private:
  std::vector<std::size_t> parent_;
};

template <Scalar S>
bool vectors_equal(const std::vector<S>& a, const std::vector<S>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!scalar_equal(a[i], b[i])) return false;
  return true;
}

template <Scalar S>
std::uint64_t count_distinct_vectors(std::vector<std::vector<S>> v) {
  std::sort(v.begin(), v.end());
  std::uint64_t n = 0;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (i == 0 || !vectors_equal(v[i], v[i - 1])) ++n;
  return n;
}

inline void check_layer(std::size_t layer, std::size_t depth) {
  if (layer < 1 || layer > depth)
    throw ValidationError("layer must lie in [1, " + std::to_string(depth) + "]");
}

}  // namespace detail

template <Scalar S>
BigInt network_bound(const Network<S>& net) {
  return count_bound(static_cast<long>(net.layers.front().width()), static_cast<long>(net.input_dim()), net.T);
}

template <Scalar S>
struct ConstantRegions2D {
  CountReport report;
  CellComplex2D<S> complex;
};

/// Evaluates the network at one interior point of every cell of the clipped
/// first-layer arrangement. Connected constant regions merge adjacent cells
/// with equal key: the decoded output when `layer` is the last layer, the
/// layer's spike train otherwise. `box` defaults to enclosing_box.
template <Scalar S>
ConstantRegions2D<S> constant_regions_2d(const Network<S>& net, std::optional<Box2<S>> box = std::nullopt,
                                         std::optional<std::size_t> layer = std::nullopt) {
  validate(net);
  if (net.input_dim() != 2) throw DimensionError("exact region counting requires n_in = 2");
  const std::size_t L = net.depth();
  const std::size_t ell = layer.value_or(L);
  detail::check_layer(ell, L);

  auto arr = count_exact_2d(first_layer_families(net), true, box);
  ConstantRegions2D<S> out{{}, std::move(*arr.complex)};
  auto& cx = out.complex;
  const std::size_t ncell = cx.cells.size();
  cx.patterns.resize(ncell);
  cx.outputs.resize(ncell);
  std::vector<std::set<SpikeTrain>> per_layer(L);
  for (std::size_t c = 0; c < ncell; ++c) {
    const auto& r = cx.cells[c].representative;
    const auto trace = simulate(net, std::vector<S>{r.x, r.y});
    for (std::size_t l = 0; l < L; ++l) {
      cx.patterns[c].push_back(trace.layers[l].spikes);
      per_layer[l].insert(trace.layers[l].spikes);
    }
    cx.outputs[c] = decode(net.decoder, trace.output_spikes());
  }

  auto same_key = [&](std::size_t a, std::size_t b) {
    if (ell == L) return detail::vectors_equal(cx.outputs[a], cx.outputs[b]);
    return cx.patterns[a][ell - 1] == cx.patterns[b][ell - 1];
  };
  detail::DisjointSets dsu(ncell);
  for (const auto& [a, b] : cx.adjacency)
    if (same_key(a, b)) dsu.unite(a, b);

  auto& rep = out.report;
  rep.method = "exact2d";
  rep.layer = ell;
  for (const auto& s : per_layer) rep.layer_counts.push_back(s.size());
  rep.distinct_outputs = detail::count_distinct_vectors(cx.outputs);
  rep.connected_constant_regions = dsu.components();
  rep.bound = network_bound(net);
  rep.arrangement_regions = arr.regions;
  rep.cells = ncell;
  return out;
}

/// Calls fn(point) for N quasi-random points in `box`: a Sobol sequence with a
/// Cranley-Patterson rotation drawn from `seed`.
template <typename Fn>
void for_each_sobol_point(const Box<double>& box, std::size_t N, std::uint64_t seed, Fn&& fn) {
  const std::size_t d = box.size();
  if (d == 0) throw ValidationError("sampling box must have at least one coordinate");
  boost::random::sobol qrng(static_cast<unsigned>(d));
  Rng rng(seed);
  std::vector<double> shift(d), pt(d);
  for (auto& s : shift) s = uniform01(rng);
  for (std::size_t k = 0; k < N; ++k) {
    for (std::size_t j = 0; j < d; ++j) {
      double u = std::ldexp(static_cast<double>(qrng()), -64) + shift[j];
      u -= std::floor(u);
      pt[j] = box[j].lo + (box[j].hi - box[j].lo) * u;
    }
    fn(static_cast<const std::vector<double>&>(pt));
  }
}

/// Lower bounds on region counts from N quasi-uniform samples of `box`.
template <Scalar S>
CountReport sample_patterns(const Network<S>& net, const Box<double>& box, std::size_t N, std::uint64_t seed,
                            std::optional<std::size_t> layer = std::nullopt) {
  validate(net);
  if (N < 1) throw ValidationError("sample count must be >= 1");
  if (box.size() != net.input_dim()) throw DimensionError("sampling box dimension does not match the network");
  const std::size_t L = net.depth();
  const std::size_t ell = layer.value_or(L);
  detail::check_layer(ell, L);
  std::vector<std::set<SpikeTrain>> per_layer(L);
  std::set<SpikeTrain> outputs_by_train;
  std::vector<std::vector<S>> outputs;
  std::vector<S> x(net.input_dim());
  for_each_sobol_point(box, N, seed, [&](const std::vector<double>& p) {
    for (std::size_t j = 0; j < p.size(); ++j) x[j] = scalar_cast<S>(p[j]);
    const auto trace = simulate(net, x);
    for (std::size_t l = 0; l < L; ++l) per_layer[l].insert(trace.layers[l].spikes);
    // the output is a function of the last layer's train; decode once per train
    if (outputs_by_train.insert(trace.output_spikes()).second)
      outputs.push_back(decode(net.decoder, trace.output_spikes()));
  });
  CountReport rep;
  rep.method = "sampled";
  rep.layer = ell;
  for (const auto& s : per_layer) rep.layer_counts.push_back(s.size());
  rep.distinct_outputs = detail::count_distinct_vectors(std::move(outputs));
  rep.bound = network_bound(net);
  rep.samples = N;
  rep.seed = seed;
  return rep;
}

/// Pairwise non-parallel primitive integer directions, shortest first:
/// (1,0), (0,1), (1,1), (1,-1), (2,1), (1,2), (2,-1), (1,-2), ...
inline std::vector<std::pair<long, long>> distinct_directions(std::size_t count) {
  std::vector<std::pair<long, long>> dirs{{1, 0}, {0, 1}, {1, 1}, {1, -1}};
  for (long h = 2; dirs.size() < count; ++h)
    for (long k = 1; k < h; ++k)
      if (std::gcd(h, k) == 1) {
        dirs.push_back({h, k});
        dirs.push_back({k, h});
        dirs.push_back({h, -k});
        dirs.push_back({k, -h});
      }
  dirs.resize(count);
  return dirs;
}

/// Initial potentials p/q for which a beta = theta = 1 neuron attains the
/// temporal bound, ordered by largest minimum gap between its thresholds.
template <Scalar S>
std::vector<S> tight_initial_potentials(int T, std::size_t count) {
  struct Candidate {
    S u0, gap;
  };
  const long target = temporal_bound(T);
  for (long qmax = 2 * T + 4;; qmax *= 2) {
    std::vector<Candidate> found;
    std::set<std::pair<long, long>> seen;
    for (long q = 2; q <= qmax; ++q)
      for (long p = 1; p < q; ++p) {
        const long g = std::gcd(p, q);
        if (!seen.insert({p / g, q / g}).second) continue;
        const S u0 = S(p / g) / S(q / g);
        const auto part = neuron_partition(S(1), S(1), u0, T);
        if (static_cast<long>(part.region_count()) != target) continue;
        S gap(1);
        for (std::size_t i = 1; i < part.boundaries.size(); ++i)
          if (part.boundaries[i] - part.boundaries[i - 1] < gap) gap = part.boundaries[i] - part.boundaries[i - 1];
        found.push_back({u0, gap});
      }
    if (found.size() >= count) {
      std::stable_sort(found.begin(), found.end(), [](const Candidate& a, const Candidate& b) {
        if (!scalar_equal(a.gap, b.gap)) return b.gap < a.gap;
        return a.u0 < b.u0;
      });
      std::vector<S> out;
      for (std::size_t i = 0; i < count; ++i) out.push_back(found[i].u0);
      return out;
    }
  }
}

/// Single-layer network on R^2 whose parallel families are in general
/// position, so its first-layer region count equals count_bound(n1, 2, T).
/// Each family after the first is translated past every existing
/// intersection point; the translation margin doubles if the exact
/// certificate fails.
template <Scalar S = Rational>
Network<S> general_position_layer(std::size_t n1, int T) {
  if (n1 < 2) throw ValidationError("general_position_layer: n1 must be >= 2");
  if (T < 1) throw ValidationError("general_position_layer: T must be >= 1");
  const auto dirs = distinct_directions(n1);
  const auto u0s = tight_initial_potentials<S>(T, n1);

  LayerParams<S> layer{Matrix<S>(n1, 2), std::vector<S>(n1, S(0)), u0s, S(1), S(1)};
  std::vector<ParallelFamily<S>> fams;
  for (std::size_t k = 0; k < n1; ++k) {
    layer.W(k, 0) = S(dirs[k].first);
    layer.W(k, 1) = S(dirs[k].second);
    const auto part = neuron_partition(layer.beta, layer.theta, layer.u0[k], T);
    ParallelFamily<S> fam{{layer.W(k, 0), layer.W(k, 1)}, {}, k};
    auto place = [&](const S& bias) {
      fam.offsets.clear();
      for (const auto& z : part.boundaries) fam.offsets.push_back(z - bias);
    };
    if (k == 0) {
      place(S(0));
      fams.push_back(fam);
      continue;
    }
    const auto verts = arrangement_vertices(distinct_lines(fams));
    S reach(0), margin(1);
    bool first = true;
    for (const auto& [v, mult] : verts) {
      const S proj = fam.direction[0] * v.x + fam.direction[1] * v.y;
      if (first || reach < proj) reach = proj;
      first = false;
      if (margin < S(1) + abs_value(v.x)) margin = S(1) + abs_value(v.x);
      if (margin < S(1) + abs_value(v.y)) margin = S(1) + abs_value(v.y);
    }
    for (;;) {
      layer.b[k] = part.boundaries.front() - reach - margin;
      place(layer.b[k]);
      fams.push_back(fam);
      if (in_general_position(fams)) break;
      fams.pop_back();
      margin *= S(2);
    }
  }

  Network<S> net;
  net.T = T;
  net.layers.push_back(std::move(layer));
  MembranePotentialDecoder<S> dec{std::vector<S>(static_cast<std::size_t>(T)), Matrix<S>::identity(n1),
                                  std::vector<S>(n1, S(0))};
  for (int t = 0; t < T; ++t) dec.a[static_cast<std::size_t>(t)] = power(S(2), t);
  net.decoder = std::move(dec);
  validate(net);
  return net;
}

/// Exact check that a network's first-layer families are in general position
/// and its arrangement attains count_bound.
template <Scalar S>
bool general_position_certificate(const Network<S>& net) {
  if (net.input_dim() != 2) return false;
  const auto fams = first_layer_families(net);
  if (!in_general_position(fams)) return false;
  return BigInt(count_exact_2d(fams).regions) == network_bound(net);
}

}  // namespace spike_regions
