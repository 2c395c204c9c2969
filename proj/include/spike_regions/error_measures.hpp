#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "spike_regions/arrangement2d.hpp"
#include "spike_regions/constructors.hpp"
#include "spike_regions/simulate.hpp"

namespace spike_regions {

// Piecewise-linear target on the real line. Pieces are disjoint and sorted;
// the include flags say whether each piece owns its endpoints.
template <Scalar S>
struct PiecewiseLinear1D {
  struct Piece {
    S lo, hi, slope, intercept;
    bool include_lo = true, include_hi = false;

    bool contains(const S& x) const {
      if (x < lo || hi < x) return false;
      if (x == lo && !include_lo) return false;
      if (x == hi && !include_hi) return false;
      return true;
    }
    S at(const S& x) const { return slope * x + intercept; }
  };
  std::vector<Piece> pieces;

  const Piece* find(const S& x) const {
    for (const auto& p : pieces)
      if (p.contains(x)) return &p;
    return nullptr;
  }
  std::optional<S> value(const S& x) const {
    if (const auto* p = find(x)) return p->at(x);
    return std::nullopt;
  }
  S operator()(const S& x) const {
    if (auto v = value(x)) return *v;
    throw ValidationError("target undefined at " + format_scalar(x));
  }
};

// [lo, hi) by default.
template <Scalar S>
struct Domain1D {
  S lo, hi;
  bool include_hi = false;
  bool contains(const S& x) const { return !(x < lo) && (x < hi || (include_hi && x == hi)); }
};

template <Scalar S>
PiecewiseLinear1D<S> ramp_target(const S& gamma, const S& lo, const S& hi) {
  return {{{lo, hi, gamma, S(0), true, true}}};
}

template <Scalar S>
PiecewiseLinear1D<S> constant_target(const S& value, const S& lo, const S& hi) {
  return {{{lo, hi, S(0), value, true, true}}};
}

/// Staircase on [0, K] with d = eps/100: value k eps on [k-1+d, k-d] and
/// 100 x + eps (k + 1/2) - 100 k on (k-d, k+d), taken literally.
template <Scalar S>
PiecewiseLinear1D<S> staircase_target(long K, const S& eps) {
  if (K < 1) throw ValidationError("staircase: K must be >= 1");
  if (!(ScalarTraits<S>::sign(eps) > 0) || !(eps < S(1))) throw ValidationError("staircase: eps must lie in (0, 1)");
  const S d = eps / S(100);
  const S slope(100);
  PiecewiseLinear1D<S> f;
  for (long k = 0; k <= K; ++k) {
    const S ks(k);
    const S intercept = eps * (ks + S(1) / S(2)) - slope * ks;
    const S lo = k == 0 ? S(0) : S(ks - d);
    const S hi = k == K ? S(ks) : S(ks + d);
    f.pieces.push_back({lo, hi, slope, intercept, k == 0, k == K});
    if (k < K) f.pieces.push_back({ks + d, ks + S(1) - d, S(0), eps * (ks + S(1)), true, true});
  }
  return f;
}

/// step_network on the unit cells [k-1, k) with values k eps.
template <Scalar S>
Network<S> staircase_net(long K, const S& eps) {
  if (K < 1) throw ValidationError("staircase: K must be >= 1");
  StepFunctionSpec<S> spec;
  spec.breakpoints.emplace_back();
  for (long k = 0; k <= K; ++k) spec.breakpoints[0].push_back(S(k));
  for (long k = 1; k <= K; ++k) spec.values.push_back(eps * S(k));
  return step_network(spec);
}

namespace detail {

// Every point where realize or the target may change, clipped to the domain.
template <Scalar S>
std::vector<S> error_breakpoints(const Network<S>& net, const PiecewiseLinear1D<S>& target, const Domain1D<S>& dom) {
  if (net.input_dim() != 1) throw DimensionError("1D error measures need n_in = 1");
  if (net.output_dim() != 1) throw DimensionError("1D error measures need a scalar output");
  if (!(dom.lo < dom.hi)) throw ValidationError("error domain must have lo < hi");
  std::vector<S> pts{dom.lo, dom.hi};
  auto add = [&](const S& x) {
    if (dom.lo < x && x < dom.hi) pts.push_back(x);
  };
  for (const auto& fam : first_layer_families(net))
    for (const auto& c : fam.offsets) add(S(c / fam.direction[0]));
  for (const auto& p : target.pieces) {
    add(p.lo);
    add(p.hi);
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end(), [](const S& a, const S& b) { return scalar_equal(a, b); }),
            pts.end());
  return pts;
}

template <Scalar S>
S realize_scalar(const Network<S>& net, const S& x) {
  return realize(net, std::vector<S>{x})[0];
}

}  // namespace detail

/// Exact sup of |realize - target| over the domain. Realize is constant on
/// each open gap between breakpoints, so the sup is the max of one-sided
/// endpoint limits and of the values at the breakpoints themselves.
template <Scalar S>
S sup_error_exact(const Network<S>& net, const PiecewiseLinear1D<S>& target, const Domain1D<S>& dom) {
  const auto pts = detail::error_breakpoints(net, target, dom);
  S best(0);
  auto update = [&best](const S& v) {
    const S a = abs_value(v);
    if (best < a) best = a;
  };
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const S mid = (pts[i] + pts[i + 1]) / S(2);
    const auto* piece = target.find(mid);
    if (!piece) throw ValidationError("target undefined on part of the domain");
    const S c = detail::realize_scalar(net, mid);
    update(piece->at(pts[i]) - c);
    update(piece->at(pts[i + 1]) - c);
  }
  for (const auto& p : pts)
    if (dom.contains(p))
      if (auto v = target.value(p)) update(*v - detail::realize_scalar(net, p));
  return best;
}

/// Exact integral of |realize - target|^2 over the domain, one closed-form
/// term per piece: int_a^b (m x + q)^2 dx = ((m b + q)^3 - (m a + q)^3) / (3 m).
template <Scalar S>
S l2_error_exact(const Network<S>& net, const PiecewiseLinear1D<S>& target, const Domain1D<S>& dom) {
  const auto pts = detail::error_breakpoints(net, target, dom);
  S total(0);
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const S &a = pts[i], &b = pts[i + 1];
    const S mid = (a + b) / S(2);
    const auto* piece = target.find(mid);
    if (!piece) throw ValidationError("target undefined on part of the domain");
    const S q = piece->intercept - detail::realize_scalar(net, mid);
    const S& m = piece->slope;
    if (ScalarTraits<S>::sign(m) == 0) {
      total += q * q * (b - a);
    } else {
      const S gb = m * b + q, ga = m * a + q;
      total += (gb * gb * gb - ga * ga * ga) / (S(3) * m);
    }
  }
  return total;
}

template <Scalar S>
S l2_error_staircase(const Network<S>& net, long K, const S& eps) {
  return l2_error_exact(net, staircase_target(K, eps), Domain1D<S>{S(0), S(K), true});
}

}  // namespace spike_regions
