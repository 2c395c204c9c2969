#pragma once

#include <algorithm>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "spike_regions/network.hpp"
#include "spike_regions/scalar.hpp"

namespace spike_regions {

/// Closed interval [lo, hi] of one input coordinate.
template <Scalar S>
struct Interval {
  S lo, hi;
  friend bool operator==(const Interval&, const Interval&) = default;
};

template <Scalar S>
using Box = std::vector<Interval<S>>;

/// {x : A x <= b}.
template <Scalar S>
struct PolyhedronSpec {
  Matrix<S> A;
  std::vector<S> b;

  void validate() const {
    if (A.rows() == 0 || A.cols() == 0) throw ValidationError("polyhedron needs at least one constraint");
    if (b.size() != A.rows()) throw DimensionError("polyhedron: b length must equal rows of A");
    for (std::size_t r = 0; r < A.rows(); ++r) {
      const auto row = A.row(r);
      if (std::all_of(row.begin(), row.end(), [](const S& v) { return ScalarTraits<S>::sign(v) == 0; }))
        throw ValidationError("polyhedron: constraint row " + std::to_string(r) + " is zero");
    }
  }

  bool contains(std::span<const S> x) const {
    const auto ax = multiply(A, x);
    for (std::size_t r = 0; r < ax.size(); ++r)
      if (b[r] < ax[r]) return false;
    return true;
  }
};

/// Piecewise-constant function on a grid of half-open boxes
/// prod_j [r_{j,i}, r_{j,i+1}); `outside_value` everywhere else.
/// `values` is row-major over the N^n cells with coordinate 1 most significant.
template <Scalar S>
struct StepFunctionSpec {
  std::vector<std::vector<S>> breakpoints;
  std::vector<S> values;
  S outside_value{0};

  std::size_t dim() const { return breakpoints.size(); }
  std::size_t cells_per_axis() const { return breakpoints.empty() ? 0 : breakpoints.front().size() - 1; }

  std::size_t cell_count() const {
    std::size_t m = 1;
    for (std::size_t j = 0; j < dim(); ++j) m *= cells_per_axis();
    return m;
  }

  void validate() const {
    if (breakpoints.empty()) throw ValidationError("step function needs at least one coordinate");
    const std::size_t count = breakpoints.front().size();
    if (count < 2) throw ValidationError("each coordinate needs at least two breakpoints");
    for (const auto& axis : breakpoints) {
      if (axis.size() != count) throw ValidationError("all coordinates must have the same number of cells");
      for (std::size_t i = 1; i < axis.size(); ++i)
        if (!(axis[i - 1] < axis[i])) throw ValidationError("breakpoints must be strictly increasing");
    }
    if (values.size() != cell_count())
      throw DimensionError("step function: expected " + std::to_string(cell_count()) + " values, got " +
                           std::to_string(values.size()));
  }

  // Direct lookup, independent of any network.
  S evaluate(std::span<const S> x) const {
    if (x.size() != dim()) throw DimensionError("step function: input dimension mismatch");
    std::size_t flat = 0;
    for (std::size_t j = 0; j < dim(); ++j) {
      const auto& axis = breakpoints[j];
      if (x[j] < axis.front() || !(x[j] < axis.back())) return outside_value;
      const auto i = static_cast<std::size_t>(std::upper_bound(axis.begin(), axis.end(), x[j]) - axis.begin()) - 1;
      flat = flat * cells_per_axis() + i;
    }
    return values[flat];
  }
};

/// W = (1+eps) I in every layer, b = u0 = 0, beta = theta = 1. Input spike
/// trains pass through unchanged. eps defaults to 1/(2T).
template <Scalar S>
Network<S> identity_network(std::size_t n, int T, std::size_t L, std::optional<S> eps = std::nullopt) {
  if (n < 1 || L < 1 || T < 1) throw ValidationError("identity network: n, T, L must be >= 1");
  const S Ts(static_cast<long>(T));
  const S e = eps ? *eps : S(S(1) / (S(2) * Ts));
  if (!(ScalarTraits<S>::sign(e) > 0) || !(e < S(S(1) / Ts)))
    throw ValidationError("identity network: eps must lie in (0, 1/T)");
  Network<S> net;
  net.T = T;
  for (std::size_t l = 0; l < L; ++l)
    net.layers.push_back({Matrix<S>::identity(n, S(1) + e), std::vector<S>(n, S(0)), std::vector<S>(n, S(0)),
                          S(1), S(1)});
  net.decoder = membrane_decoder<S>(T, Matrix<S>::identity(n), std::vector<S>(n, S(0)));
  validate(net);
  return net;
}

/// Two-layer, single-step network realising the indicator of {Ax <= b}.
/// Layer 1: neuron i fires iff b_i - <a_i, x> >= 0. Layer 2: one AND neuron.
template <Scalar S>
Network<S> indicator_network(const PolyhedronSpec<S>& P) {
  P.validate();
  const std::size_t p = P.A.rows(), n = P.A.cols();
  LayerParams<S> first{Matrix<S>(p, n), std::vector<S>(p), std::vector<S>(p, S(0)), S(1), S(1)};
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = 0; j < n; ++j) first.W(i, j) = -P.A(i, j);
    first.b[i] = P.b[i] + first.theta;
  }
  LayerParams<S> second{Matrix<S>(1, p, S(1)), {S(1) - S(static_cast<long>(p))}, {S(0)}, S(1), S(1)};
  Network<S> net;
  net.T = 1;
  net.layers = {std::move(first), std::move(second)};
  net.decoder = membrane_decoder<S>(1, Matrix<S>(1, 1, S(1)), {S(0)});
  validate(net);
  return net;
}

inline std::size_t step_first_width(std::size_t N, std::size_t n) { return (N + 1) * n; }

inline std::size_t step_second_width(std::size_t N, std::size_t n) {
  std::size_t m = 1;
  for (std::size_t j = 0; j < n; ++j) m *= N;
  return m;
}

/// Two-layer, single-step network realising a step function exactly.
/// Layer 1 has one neuron H(x_j - r_{j,i}) per coordinate and breakpoint; layer
/// 2 has one AND neuron per cell over chi_j = H(x_j - r_{j,i}) - H(x_j - r_{j,i+1}).
template <Scalar S>
Network<S> step_network(const StepFunctionSpec<S>& spec) {
  spec.validate();
  const std::size_t n = spec.dim(), N = spec.cells_per_axis();
  const std::size_t n1 = step_first_width(N, n), n2 = step_second_width(N, n);
  const S theta(1);

  LayerParams<S> first{Matrix<S>(n1, n), std::vector<S>(n1), std::vector<S>(n1, S(0)), S(1), theta};
  auto neuron = [N](std::size_t j, std::size_t i) { return j * (N + 1) + i; };
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i <= N; ++i) {
      first.W(neuron(j, i), j) = S(1);
      first.b[neuron(j, i)] = theta - spec.breakpoints[j][i];
    }

  LayerParams<S> second{Matrix<S>(n2, n1), std::vector<S>(n2, S(1) - S(static_cast<long>(n))),
                        std::vector<S>(n2, S(0)), S(1), theta};
  Matrix<S> V(1, n2);
  for (std::size_t cell = 0; cell < n2; ++cell) {
    std::size_t rest = cell;
    for (std::size_t jj = n; jj-- > 0;) {
      const std::size_t i = rest % N;
      rest /= N;
      second.W(cell, neuron(jj, i)) = S(1);
      second.W(cell, neuron(jj, i + 1)) = S(-1);
    }
    V(0, cell) = spec.values[cell] - spec.outside_value;
  }

  Network<S> net;
  net.T = 1;
  net.layers = {std::move(first), std::move(second)};
  net.decoder = membrane_decoder<S>(1, std::move(V), {spec.outside_value});
  validate(net);
  return net;
}

template <Scalar S>
struct ApproxReport {
  std::optional<S> sup_error;
  std::optional<S> l2_error_sq;
  std::size_t n1 = 0, n2 = 0;
  std::size_t cells_per_axis = 0;
  std::vector<std::vector<S>> breakpoints;
  S guaranteed_bound{0};  // Gamma * (largest cell side) / 2
};

/// Uniform N^n grid over `box` with cell value f(center).
template <Scalar S>
StepFunctionSpec<S> grid_approximant(const std::function<S(std::span<const S>)>& f, const Box<S>& box,
                                     std::size_t N) {
  if (box.empty()) throw ValidationError("box must have at least one coordinate");
  if (N < 1) throw ValidationError("grid needs at least one cell per axis");
  StepFunctionSpec<S> spec;
  const S Ns(static_cast<long>(N));
  for (const auto& iv : box) {
    if (!(iv.lo < iv.hi)) throw ValidationError("box sides must have lo < hi");
    std::vector<S> axis;
    for (std::size_t i = 0; i <= N; ++i) axis.push_back(iv.lo + (iv.hi - iv.lo) * S(static_cast<long>(i)) / Ns);
    spec.breakpoints.push_back(std::move(axis));
  }
  const std::size_t n = box.size();
  const std::size_t m = step_second_width(N, n);
  spec.values.reserve(m);
  std::vector<S> center(n);
  for (std::size_t cell = 0; cell < m; ++cell) {
    std::size_t rest = cell;
    for (std::size_t jj = n; jj-- > 0;) {
      const std::size_t i = rest % N;
      rest /= N;
      center[jj] = (spec.breakpoints[jj][i] + spec.breakpoints[jj][i + 1]) / S(2);
    }
    spec.values.push_back(f(std::span<const S>(center)));
  }
  return spec;
}

/// Cells per axis for a Gamma-Lipschitz target: max(ceil(diam Gamma / eps), 1),
/// where diam is the longest side of the box.
template <Scalar S>
std::size_t lipschitz_cells(const S& gamma, const S& eps, const Box<S>& box) {
  if (!(ScalarTraits<S>::sign(eps) > 0)) throw ValidationError("eps must be > 0");
  if (gamma < S(0)) throw ValidationError("Lipschitz constant must be >= 0");
  if (box.empty()) throw ValidationError("box must have at least one coordinate");
  S diam(0);
  for (const auto& iv : box) {
    if (!(iv.lo < iv.hi)) throw ValidationError("box sides must have lo < hi");
    if (iv.hi - iv.lo > diam) diam = iv.hi - iv.lo;
  }
  const BigInt c = ScalarTraits<S>::ceil(S(diam * gamma / eps));
  return c < 1 ? 1 : c.template convert_to<std::size_t>();
}

template <Scalar S>
struct LipschitzResult {
  Network<S> net;
  StepFunctionSpec<S> spec;
  ApproxReport<S> report;
};

/// Step-function approximant of a Gamma-Lipschitz f (sup norm on coordinate
/// differences) with sup error at most eps on the half-open box.
template <Scalar S>
LipschitzResult<S> lipschitz_network(const std::function<S(std::span<const S>)>& f, const S& gamma, const S& eps,
                                     const Box<S>& box) {
  const std::size_t N = lipschitz_cells(gamma, eps, box);
  LipschitzResult<S> out{{}, grid_approximant(f, box, N), {}};
  out.net = step_network(out.spec);
  out.report.n1 = step_first_width(N, box.size());
  out.report.n2 = step_second_width(N, box.size());
  out.report.cells_per_axis = N;
  out.report.breakpoints = out.spec.breakpoints;
  S side(0);
  for (const auto& iv : box)
    if (iv.hi - iv.lo > side) side = iv.hi - iv.lo;
  out.report.guaranteed_bound = gamma * side / S(static_cast<long>(2 * N));
  return out;
}

}  // namespace spike_regions
