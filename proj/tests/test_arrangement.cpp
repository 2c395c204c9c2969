#include <gtest/gtest.h>

#include <map>
#include <set>

#include "helpers.hpp"

using namespace spike_regions;
using testing_util::Q;

namespace {

ParallelFamily<Rational> family(Rational a, Rational b, std::vector<Rational> offsets, std::size_t id = 0) {
  return {{a, b}, std::move(offsets), id};
}

// Regions of a planar arrangement from its vertices: 1 + lines + sum over
// vertices of (lines through the vertex - 1).
std::uint64_t vertex_formula(const std::vector<ParallelFamily<Rational>>& fams) {
  struct L {
    Rational a, b, c;
  };
  std::vector<L> lines;
  for (const auto& f : fams)
    for (const auto& c : f.offsets) {
      bool dup = false;
      for (const auto& l : lines)  // same line iff proportional
        if (l.a * f.direction[1] == l.b * f.direction[0] && l.a * c == l.c * f.direction[0] &&
            l.b * c == l.c * f.direction[1])
          dup = true;
      if (!dup) lines.push_back({f.direction[0], f.direction[1], c});
    }
  std::map<std::pair<Rational, Rational>, std::set<std::size_t>> through;
  for (std::size_t i = 0; i < lines.size(); ++i)
    for (std::size_t j = i + 1; j < lines.size(); ++j) {
      const Rational det = lines[i].a * lines[j].b - lines[j].a * lines[i].b;
      if (det == 0) continue;
      const Rational x = (lines[i].c * lines[j].b - lines[j].c * lines[i].b) / det;
      const Rational y = (lines[i].a * lines[j].c - lines[j].a * lines[i].c) / det;
      through[{x, y}].insert(i);
      through[{x, y}].insert(j);
    }
  std::uint64_t r = 1 + lines.size();
  for (const auto& [p, s] : through) r += s.size() - 1;
  return r;
}

Network<Rational> first_layer(Matrix<Rational> W, std::vector<Rational> b, std::vector<Rational> u0, Rational beta,
                              int T) {
  Network<Rational> net;
  net.T = T;
  const std::size_t n = W.rows();
  net.layers.push_back({std::move(W), std::move(b), std::move(u0), beta, Q(1)});
  net.decoder = membrane_decoder<Rational>(T, Matrix<Rational>(1, n, Q(1)), {Q(0)});
  return net;
}

}  // namespace

TEST(Families, SingleStepLine) {
  const auto fams = first_layer_families(first_layer(Matrix<Rational>{{Q(1), Q(0)}}, {Q(-1)}, {Q(0)}, Q(1), 1));
  ASSERT_EQ(fams.size(), 1u);
  EXPECT_EQ(fams[0].offsets, std::vector<Rational>{Q(2)});
}

TEST(Families, TwoStepParallelLines) {
  const auto fams = first_layer_families(first_layer(Matrix<Rational>{{Q(0), Q(1)}}, {Q(0)}, {Q(1, 10)}, Q(1), 2));
  EXPECT_EQ(fams[0].offsets, (std::vector<Rational>{Q(45, 100), Q(9, 10), Q(95, 100)}));
  EXPECT_EQ(fams[0].direction, (std::vector<Rational>{Q(0), Q(1)}));
}

TEST(Families, ZeroWeightNeuronIsEmpty) {
  const auto fams = first_layer_families(
      first_layer(Matrix<Rational>{{Q(0), Q(0)}, {Q(1), Q(1)}}, {Q(5), Q(0)}, {Q(0), Q(0)}, Q(1), 3));
  EXPECT_TRUE(fams[0].offsets.empty());
  EXPECT_FALSE(fams[1].offsets.empty());
  EXPECT_EQ(count_exact_2d(std::vector{fams[0]}).regions, 1u);
}

TEST(CountExact2D, BasicArrangements) {
  EXPECT_EQ(count_exact_2d<Rational>({family(Q(1), Q(2), {Q(3)})}).regions, 2u);
  EXPECT_EQ(count_exact_2d<Rational>({family(Q(1), Q(0), {Q(0), Q(1)}), family(Q(0), Q(1), {Q(0), Q(1)}, 1)}).regions,
            9u);
  EXPECT_EQ(count_exact_2d<Rational>({family(Q(1), Q(0), {Q(0), Q(1), Q(2)}),
                                      family(Q(1), Q(1), {Q(10), Q(11), Q(12)}, 1)})
                .regions,
            16u);
}

TEST(CountExact2D, SingleFamilyOfKLines) {
  for (int k = 1; k <= 12; ++k) {
    std::vector<Rational> offs;
    for (int i = 0; i < k; ++i) offs.push_back(Q(i * i, 3));
    EXPECT_EQ(count_exact_2d<Rational>({family(Q(2), Q(-1), offs)}).regions, static_cast<std::uint64_t>(k + 1));
  }
}

TEST(CountExact2D, ConcurrentAndDuplicateLines) {
  // three lines through the origin: 6 regions
  const std::vector fams{family(Q(1), Q(0), {Q(0)}), family(Q(0), Q(1), {Q(0)}, 1), family(Q(1), Q(1), {Q(0)}, 2)};
  EXPECT_EQ(count_exact_2d(fams).regions, 6u);
  EXPECT_FALSE(in_general_position(fams));
  // the same line contributed by two neurons with scaled directions
  const std::vector dup{family(Q(1), Q(1), {Q(1)}), family(Q(2), Q(2), {Q(2)}, 1)};
  EXPECT_EQ(count_exact_2d(dup).regions, 2u);
  EXPECT_EQ(distinct_lines(dup).front().families.size(), 2u);
}

TEST(CountExact2D, MatchesVertexFormulaOnRandomNetworks) {
  Rng rng(23);
  for (int k = 0; k < 60; ++k) {
    const auto net = random_network<Rational>(rng, 2, {static_cast<std::size_t>(uniform_int(rng, 1, 4))},
                                              static_cast<int>(uniform_int(rng, 1, 5)), {8});
    const auto fams = first_layer_families(net);
    EXPECT_EQ(count_exact_2d(fams).regions, vertex_formula(fams));
  }
}

TEST(CellComplex, CellsMatchCountAndAdjacencyCrossesOneLine) {
  Rng rng(8);
  for (int k = 0; k < 20; ++k) {
    const auto net = random_network<Rational>(rng, 2, {static_cast<std::size_t>(uniform_int(rng, 1, 3))},
                                              static_cast<int>(uniform_int(rng, 1, 3)));
    const auto res = count_exact_2d(first_layer_families(net), true);
    const auto& cx = *res.complex;
    ASSERT_EQ(cx.cells.size(), res.regions);
    std::set<std::vector<int>> signs;
    std::vector<std::vector<int>> per_cell;
    for (const auto& c : cx.cells) {
      std::vector<int> s;
      for (const auto& l : res.lines) {
        s.push_back(l.eval(c.representative).sign());
        EXPECT_NE(s.back(), 0);  // representative strictly inside
      }
      signs.insert(s);
      per_cell.push_back(s);
    }
    EXPECT_EQ(signs.size(), cx.cells.size());
    for (const auto& [a, b] : cx.adjacency) {
      ASSERT_LT(a, b);
      int differ = 0;
      for (std::size_t l = 0; l < res.lines.size(); ++l) differ += per_cell[a][l] != per_cell[b][l];
      EXPECT_EQ(differ, 1);
    }
  }
}

TEST(CellComplex, ClippedGridHasExpectedAdjacency) {
  const std::vector fams{family(Q(1), Q(0), {Q(0), Q(1)}), family(Q(0), Q(1), {Q(0), Q(1)}, 1)};
  const auto res = count_exact_2d(fams, true, std::optional{Box2<Rational>{Q(-1), Q(2), Q(-1), Q(2)}});
  EXPECT_EQ(res.complex->cells.size(), 9u);
  EXPECT_EQ(res.complex->adjacency.size(), 12u);  // 3x3 grid graph
  const auto part = count_exact_2d(fams, true, std::optional{Box2<Rational>{Q(-1), Q(1, 2), Q(-1), Q(1, 2)}});
  EXPECT_EQ(part.complex->cells.size(), 4u);
}

TEST(CountExact2D, RejectsNonPlanarFamilies) {
  EXPECT_THROW(count_exact_2d<Rational>({{{Q(1), Q(0), Q(0)}, {Q(1)}, 0}}), DimensionError);
}
