#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <utility>
#include <vector>

#include "spike_regions/network.hpp"
#include "spike_regions/scalar.hpp"
#include "spike_regions/temporal_partition.hpp"

namespace spike_regions {

/// Hyperplanes {x : <direction, x> = offset_j} contributed by one neuron.
template <Scalar S>
struct ParallelFamily {
  std::vector<S> direction;
  std::vector<S> offsets;  // strictly increasing
  std::size_t neuron = 0;
};

/// Families induced by the first layer: neuron k with weights w_k and bias b_k
/// fires at step t iff <w_k, x> + b_k >= z*, so every partition boundary
/// z*_j becomes the hyperplane <w_k, x> = z*_j - b_k.
template <Scalar S>
std::vector<ParallelFamily<S>> first_layer_families(const Network<S>& net) {
  validate(net);
  const auto& layer = net.layers.front();
  std::vector<ParallelFamily<S>> out;
  for (std::size_t k = 0; k < layer.width(); ++k) {
    ParallelFamily<S> fam;
    fam.neuron = k;
    fam.direction.assign(layer.W.row(k).begin(), layer.W.row(k).end());
    const bool constant = std::all_of(fam.direction.begin(), fam.direction.end(),
                                      [](const S& v) { return ScalarTraits<S>::sign(v) == 0; });
    if (!constant) {
      const auto part = neuron_partition(layer.beta, layer.theta, layer.u0[k], net.T);
      for (const auto& z : part.boundaries) fam.offsets.push_back(z - layer.b[k]);
    }
    out.push_back(std::move(fam));
  }
  return out;
}

template <Scalar S>
struct Point2 {
  S x, y;
  friend bool operator==(const Point2&, const Point2&) = default;
};

template <Scalar S>
struct PointLess {
  bool operator()(const Point2<S>& p, const Point2<S>& q) const {
    if (p.x < q.x) return true;
    if (q.x < p.x) return false;
    return p.y < q.y;
  }
};

/// a x + b y = c, normalised so the first nonzero of (a, b) equals 1.
template <Scalar S>
struct Line2 {
  S a, b, c;
  std::vector<std::size_t> families;  // every family that contributed this line

  S eval(const Point2<S>& p) const { return a * p.x + b * p.y - c; }
  // Coordinate used to order points along the line.
  const S& along(const Point2<S>& p) const { return ScalarTraits<S>::sign(b) != 0 ? p.x : p.y; }
};

template <Scalar S>
std::optional<Point2<S>> intersect(const Line2<S>& l, const Line2<S>& m) {
  const S det = l.a * m.b - m.a * l.b;
  if (ScalarTraits<S>::sign(det) == 0) return std::nullopt;
  return Point2<S>{(l.c * m.b - m.c * l.b) / det, (l.a * m.c - m.a * l.c) / det};
}

/// Flattens families into distinct lines. Coincident hyperplanes from
/// different neurons are merged; `families` records every contributor.
template <Scalar S>
std::vector<Line2<S>> distinct_lines(const std::vector<ParallelFamily<S>>& families) {
  std::vector<Line2<S>> raw;
  for (std::size_t f = 0; f < families.size(); ++f) {
    const auto& fam = families[f];
    if (fam.direction.size() != 2) throw DimensionError("exact region counting requires n_in = 2");
    if (fam.offsets.empty()) continue;
    S a = fam.direction[0], b = fam.direction[1];
    S scale = ScalarTraits<S>::sign(a) != 0 ? a : b;
    if (ScalarTraits<S>::sign(scale) == 0) throw ValidationError("family with zero direction has hyperplanes");
    for (const auto& c : fam.offsets) raw.push_back({a / scale, b / scale, c / scale, {f}});
  }
  auto key_less = [](const Line2<S>& p, const Line2<S>& q) {
    if (!scalar_equal(p.a, q.a)) return p.a < q.a;
    if (!scalar_equal(p.b, q.b)) return p.b < q.b;
    if (!scalar_equal(p.c, q.c)) return p.c < q.c;
    return false;
  };
  std::stable_sort(raw.begin(), raw.end(), key_less);
  std::vector<Line2<S>> out;
  for (auto& l : raw) {
    if (!out.empty() && scalar_equal(out.back().a, l.a) && scalar_equal(out.back().b, l.b) &&
        scalar_equal(out.back().c, l.c)) {
      for (auto f : l.families)
        if (std::find(out.back().families.begin(), out.back().families.end(), f) == out.back().families.end())
          out.back().families.push_back(f);
      continue;
    }
    out.push_back(std::move(l));
  }
  return out;
}

template <Scalar S>
struct Box2 {
  S xlo, xhi, ylo, yhi;
};

/// A convex cell of the clipped arrangement. edge_line[i] labels the edge
/// from vertices[i] to vertices[i+1]: line index, or -1 for the clip box.
template <Scalar S>
struct Cell2 {
  std::vector<Point2<S>> vertices;
  std::vector<long> edge_line;
  Point2<S> representative;
};

template <Scalar S>
struct CellComplex2D {
  Box2<S> box;
  std::vector<Cell2<S>> cells;
  std::vector<std::pair<std::size_t, std::size_t>> adjacency;  // i < j, sorted
  // Filled by constant_regions_2d: spike train of each layer at the cell's
  // representative point, and the decoded output.
  std::vector<std::vector<SpikeTrain>> patterns;
  std::vector<std::vector<S>> outputs;
};

namespace detail {

template <Scalar S>
Point2<S> vertex_average(const std::vector<Point2<S>>& pts) {
  S sx(0), sy(0);
  for (const auto& p : pts) {
    sx += p.x;
    sy += p.y;
  }
  const S n(static_cast<long>(pts.size()));
  return {sx / n, sy / n};
}

// Splits a convex polygon by `line`. Returns nothing unless vertices lie
// strictly on both sides.
template <Scalar S>
std::optional<std::pair<Cell2<S>, Cell2<S>>> split_cell(const Cell2<S>& cell, const Line2<S>& line, long label) {
  const std::size_t n = cell.vertices.size();
  std::vector<int> side(n);
  bool pos = false, neg = false;
  for (std::size_t i = 0; i < n; ++i) {
    side[i] = ScalarTraits<S>::sign(line.eval(cell.vertices[i]));
    pos |= side[i] > 0;
    neg |= side[i] < 0;
  }
  if (!pos || !neg) return std::nullopt;
  Cell2<S> P, N;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = (i + 1) % n;
    const auto& cur = cell.vertices[i];
    const long lab = cell.edge_line[i];
    const int sc = side[i], sn = side[j];
    if (sc > 0) {
      P.vertices.push_back(cur);
      P.edge_line.push_back(lab);
    } else if (sc < 0) {
      N.vertices.push_back(cur);
      N.edge_line.push_back(lab);
    } else {
      P.vertices.push_back(cur);
      P.edge_line.push_back(sn > 0 ? lab : label);
      N.vertices.push_back(cur);
      N.edge_line.push_back(sn < 0 ? lab : label);
    }
    if ((sc > 0 && sn < 0) || (sc < 0 && sn > 0)) {
      const auto& nxt = cell.vertices[j];
      const S fc = line.eval(cur), fn = line.eval(nxt);
      const S t = fc / (fc - fn);
      const Point2<S> q{cur.x + t * (nxt.x - cur.x), cur.y + t * (nxt.y - cur.y)};
      auto& leaving = sc > 0 ? P : N;
      auto& entering = sc > 0 ? N : P;
      leaving.vertices.push_back(q);
      leaving.edge_line.push_back(label);
      entering.vertices.push_back(q);
      entering.edge_line.push_back(lab);
    }
  }
  P.representative = vertex_average(P.vertices);
  N.representative = vertex_average(N.vertices);
  return std::make_pair(std::move(P), std::move(N));
}

}  // namespace detail

/// Clips the arrangement of `lines` to `box` and returns its convex cells
/// and their shared-edge adjacency.
template <Scalar S>
CellComplex2D<S> build_cell_complex(const std::vector<Line2<S>>& lines, const Box2<S>& box) {
  if (!(box.xlo < box.xhi) || !(box.ylo < box.yhi)) throw ValidationError("degenerate clip box");
  CellComplex2D<S> cx;
  cx.box = box;
  Cell2<S> root;
  root.vertices = {{box.xlo, box.ylo}, {box.xhi, box.ylo}, {box.xhi, box.yhi}, {box.xlo, box.yhi}};
  root.edge_line = {-1, -1, -1, -1};
  root.representative = detail::vertex_average(root.vertices);
  cx.cells.push_back(std::move(root));
  for (std::size_t li = 0; li < lines.size(); ++li) {
    std::vector<Cell2<S>> next;
    next.reserve(cx.cells.size() + 16);
    for (auto& cell : cx.cells) {
      if (auto parts = detail::split_cell(cell, lines[li], static_cast<long>(li))) {
        next.push_back(std::move(parts->first));
        next.push_back(std::move(parts->second));
      } else {
        next.push_back(std::move(cell));
      }
    }
    cx.cells = std::move(next);
  }

  struct EdgeSpan {
    S lo, hi;
    std::size_t cell;
  };
  std::vector<std::vector<EdgeSpan>> on_line(lines.size());
  for (std::size_t ci = 0; ci < cx.cells.size(); ++ci) {
    const auto& c = cx.cells[ci];
    for (std::size_t e = 0; e < c.vertices.size(); ++e) {
      const long lab = c.edge_line[e];
      if (lab < 0) continue;
      const auto& line = lines[static_cast<std::size_t>(lab)];
      S a = line.along(c.vertices[e]);
      S b = line.along(c.vertices[(e + 1) % c.vertices.size()]);
      if (b < a) std::swap(a, b);
      on_line[static_cast<std::size_t>(lab)].push_back({a, b, ci});
    }
  }
  std::set<std::pair<std::size_t, std::size_t>> adj;
  for (auto& spans : on_line) {
    std::sort(spans.begin(), spans.end(), [](const EdgeSpan& p, const EdgeSpan& q) { return p.lo < q.lo; });
    for (std::size_t i = 0; i < spans.size(); ++i)
      for (std::size_t j = i + 1; j < spans.size() && spans[j].lo < spans[i].hi; ++j) {
        const S& lo = spans[j].lo;
        const S& hi = spans[i].hi < spans[j].hi ? spans[i].hi : spans[j].hi;
        if (spans[i].cell != spans[j].cell && ScalarTraits<S>::sign(S(hi - lo)) > 0)
          adj.insert(std::minmax(spans[i].cell, spans[j].cell));
      }
  }
  cx.adjacency.assign(adj.begin(), adj.end());
  return cx;
}

/// Intersection points with the number of distinct lines through each.
template <Scalar S>
std::map<Point2<S>, std::size_t, PointLess<S>> arrangement_vertices(const std::vector<Line2<S>>& lines) {
  std::map<Point2<S>, std::set<std::size_t>, PointLess<S>> through;
  for (std::size_t i = 0; i < lines.size(); ++i)
    for (std::size_t j = i + 1; j < lines.size(); ++j)
      if (auto p = intersect(lines[i], lines[j])) {
        auto& s = through[*p];
        s.insert(i);
        s.insert(j);
      }
  std::map<Point2<S>, std::size_t, PointLess<S>> out;
  for (auto& [p, s] : through) out.emplace(p, s.size());
  return out;
}

/// Box strictly containing every vertex plus one point of each line, so that
/// every region of the arrangement meets its interior.
template <Scalar S>
Box2<S> enclosing_box(const std::vector<Line2<S>>& lines) {
  std::vector<Point2<S>> pts;
  for (const auto& [p, m] : arrangement_vertices(lines)) pts.push_back(p);
  for (const auto& l : lines) {
    // foot of the perpendicular from the origin
    const S nn = l.a * l.a + l.b * l.b;
    pts.push_back({l.a * l.c / nn, l.b * l.c / nn});
  }
  if (pts.empty()) return {S(-1), S(1), S(-1), S(1)};
  Box2<S> b{pts[0].x, pts[0].x, pts[0].y, pts[0].y};
  for (const auto& p : pts) {
    if (p.x < b.xlo) b.xlo = p.x;
    if (p.x > b.xhi) b.xhi = p.x;
    if (p.y < b.ylo) b.ylo = p.y;
    if (p.y > b.yhi) b.yhi = p.y;
  }
  S span = b.xhi - b.xlo;
  if (b.yhi - b.ylo > span) span = b.yhi - b.ylo;
  const S margin = S(1) + span / S(10);
  return {b.xlo - margin, b.xhi + margin, b.ylo - margin, b.yhi + margin};
}

template <Scalar S>
struct ArrangementCount {
  std::uint64_t regions = 0;
  std::vector<Line2<S>> lines;
  std::optional<CellComplex2D<S>> complex;
};

/// Counts regions of a planar arrangement by incremental insertion: each new
/// line adds 1 + (number of distinct points where it meets earlier,
/// non-parallel lines). With `with_complex`, also builds the cell complex
/// clipped to `box` (default: enclosing_box).
template <Scalar S>
ArrangementCount<S> count_exact_2d(const std::vector<ParallelFamily<S>>& families, bool with_complex = false,
                                   std::optional<Box2<S>> box = std::nullopt) {
  ArrangementCount<S> res;
  res.lines = distinct_lines(families);
  std::uint64_t regions = 1;
  std::vector<S> params;
  for (std::size_t j = 0; j < res.lines.size(); ++j) {
    params.clear();
    for (std::size_t i = 0; i < j; ++i)
      if (auto p = intersect(res.lines[i], res.lines[j])) params.push_back(res.lines[j].along(*p));
    std::sort(params.begin(), params.end());
    std::size_t distinct = 0;
    for (std::size_t k = 0; k < params.size(); ++k)
      if (k == 0 || !scalar_equal(params[k], params[k - 1])) ++distinct;
    regions += 1 + distinct;
  }
  res.regions = regions;
  if (with_complex) res.complex = build_cell_complex(res.lines, box ? *box : enclosing_box(res.lines));
  return res;
}

/// Exact certificate that families are in general position in the plane:
/// cross-family pairs are never parallel and no point lies on three lines.
template <Scalar S>
bool in_general_position(const std::vector<ParallelFamily<S>>& families) {
  std::vector<std::pair<std::vector<S>, std::size_t>> dirs;
  for (std::size_t f = 0; f < families.size(); ++f)
    if (!families[f].offsets.empty()) dirs.push_back({families[f].direction, f});
  for (std::size_t i = 0; i < dirs.size(); ++i)
    for (std::size_t j = i + 1; j < dirs.size(); ++j) {
      const S det = dirs[i].first[0] * dirs[j].first[1] - dirs[j].first[0] * dirs[i].first[1];
      if (ScalarTraits<S>::sign(det) == 0) return false;
    }
  const auto lines = distinct_lines(families);
  std::size_t total = 0;
  for (const auto& f : families) total += f.offsets.size();
  if (lines.size() != total) return false;  // a hyperplane shared by two families
  for (const auto& [p, mult] : arrangement_vertices(lines))
    if (mult >= 3) return false;
  return true;
}

template <Scalar S>
std::string cell_complex_csv(const CellComplex2D<S>& cx) {
  std::ostringstream os;
  os << "cell_id,rep_x,rep_y,pattern,output\n";
  for (std::size_t i = 0; i < cx.cells.size(); ++i) {
    const auto& r = cx.cells[i].representative;
    os << i << ',' << format_scalar(r.x) << ',' << format_scalar(r.y) << ',';
    if (i < cx.patterns.size()) {
      for (std::size_t l = 0; l < cx.patterns[i].size(); ++l) {
        if (l) os << '/';
        os << cx.patterns[i][l].to_string();
      }
    }
    os << ',';
    if (i < cx.outputs.size()) {
      for (std::size_t o = 0; o < cx.outputs[i].size(); ++o) {
        if (o) os << ' ';
        os << format_scalar(cx.outputs[i][o]);
      }
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace spike_regions
