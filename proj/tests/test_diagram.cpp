#include <gtest/gtest.h>

#include <algorithm>
#include <functional>
#include <optional>
#include <set>

#include "ufckit/diagram.hpp"

using namespace ufckit;

namespace ufckit {
void PrintTo(const Node& n, std::ostream* os) { *os << print(n); }
}  // namespace ufckit

namespace {

Node tree(const std::string& s) { return parse_formula(s).trees.at(0); }
CompositionGraph graph_of(const Node& n) { return box_to_composition_graph(formula_to_box(n)); }
const char* kBoxcell = "(_6 o (_3 * (_5 o _4)) o (_1 * _2))";

int count(const std::string& s, const std::string& needle) {
  int c = 0;
  for (size_t p = s.find(needle); p != std::string::npos; p = s.find(needle, p + 1)) ++c;
  return c;
}

// Geometric oracle: a tiling is decomposable iff it has a straight full cut whose sides
// are decomposable (guillotine property).
bool guillotine(const std::vector<Rect>& rs) {
  if (rs.size() <= 1) return true;
  int X0 = rs[0].x0, X1 = rs[0].x1, Y0 = rs[0].y0, Y1 = rs[0].y1;
  for (const auto& r : rs) X0 = std::min(X0, r.x0), X1 = std::max(X1, r.x1), Y0 = std::min(Y0, r.y0), Y1 = std::max(Y1, r.y1);
  for (int c = X0 + 1; c < X1; ++c) {
    std::vector<Rect> a, b;
    bool ok = true;
    for (const auto& r : rs) {
      if (r.x1 <= c) a.push_back(r);
      else if (r.x0 >= c) b.push_back(r);
      else ok = false;
    }
    if (ok && guillotine(a) && guillotine(b)) return true;
  }
  for (int c = Y0 + 1; c < Y1; ++c) {
    std::vector<Rect> a, b;
    bool ok = true;
    for (const auto& r : rs) {
      if (r.y1 <= c) a.push_back(r);
      else if (r.y0 >= c) b.push_back(r);
      else ok = false;
    }
    if (ok && guillotine(a) && guillotine(b)) return true;
  }
  return false;
}

// Port-by-port wiring of a formula typed by the graph's port counts: producer slot of every
// input port and consumer slot of every output port (-1 for the boundary).
using Wiring = std::pair<std::vector<std::vector<int>>, std::vector<std::vector<int>>>;

std::optional<Wiring> formula_wiring(const Node& f, const CompositionGraph& g) {
  int n = static_cast<int>(g.whites.size());
  std::vector<int> white_of(n);
  for (int w = 0; w < n; ++w) white_of[g.whites[w].slot] = w;
  Wiring out{std::vector<std::vector<int>>(n), std::vector<std::vector<int>>(n)};
  for (int s = 0; s < n; ++s) {
    out.first[s].assign(g.inputs(white_of[s]), -2);
    out.second[s].assign(g.outputs(white_of[s]), -2);
  }
  using Port = std::pair<int, int>;
  struct Io {
    std::vector<Port> in, out;
  };
  bool ok = true;
  auto link = [&](Port producer, Port consumer) {
    out.second[producer.first][producer.second] = consumer.first;
    out.first[consumer.first][consumer.second] = producer.first;
  };
  std::function<Io(const Node&)> go = [&](const Node& x) {
    Io io;
    if (x.is_leaf()) {
      for (int k = 0; k < static_cast<int>(out.first[x.slot].size()); ++k) io.in.push_back({x.slot, k});
      for (int k = 0; k < static_cast<int>(out.second[x.slot].size()); ++k) io.out.push_back({x.slot, k});
      return io;
    }
    if (x.op == Op::Otimes) {
      for (const auto& k : x.kids) {
        auto sub = go(k);
        io.in.insert(io.in.end(), sub.in.begin(), sub.in.end());
        io.out.insert(io.out.end(), sub.out.begin(), sub.out.end());
      }
      return io;
    }
    io = go(x.kids.back());
    for (int i = static_cast<int>(x.kids.size()) - 2; i >= 0; --i) {
      auto up = go(x.kids[i]);
      if (up.in.size() != io.out.size()) {
        ok = false;
        return io;
      }
      for (size_t k = 0; k < up.in.size(); ++k) link(io.out[k], up.in[k]);
      io.out = up.out;
    }
    return io;
  };
  auto io = go(f);
  for (auto p : io.in) out.first[p.first][p.second] = -1;
  for (auto p : io.out) out.second[p.first][p.second] = -1;
  if (!ok) return std::nullopt;
  return out;
}

Wiring graph_wiring(const CompositionGraph& g) {
  int n = static_cast<int>(g.whites.size());
  Wiring out{std::vector<std::vector<int>>(n), std::vector<std::vector<int>>(n)};
  for (int w = 0; w < n; ++w) {
    std::vector<const Black*> ins, outs;
    for (const auto& b : g.blacks) {
      if (b.upper == w) ins.push_back(&b);
      if (b.lower == w) outs.push_back(&b);
    }
    auto by_x = [](const Black* a, const Black* b) { return std::tie(a->x0, a->x1) < std::tie(b->x0, b->x1); };
    std::stable_sort(ins.begin(), ins.end(), by_x);
    std::stable_sort(outs.begin(), outs.end(), by_x);
    int s = g.whites[w].slot;
    for (auto b : ins) out.first[s].push_back(b->lower < 0 ? -1 : g.whites[b->lower].slot);
    for (auto b : outs) out.second[s].push_back(b->upper < 0 ? -1 : g.whites[b->upper].slot);
  }
  return out;
}

// Random tiling of [x0,x1]x[y0,y1]: guillotine splits, occasionally a scaled pinwheel.
void random_tiling(int x0, int x1, int y0, int y1, Rng& rng, std::vector<Rect>& out, int depth) {
  int w = x1 - x0, h = y1 - y0;
  if (w % 3 == 0 && h % 3 == 0 && rng() % 4 == 0) {
    int sx = w / 3, sy = h / 3;
    for (auto r : pinwheel())
      out.push_back({0, x0 + r.x0 * sx, y0 + r.y0 * sy, x0 + r.x1 * sx, y0 + r.y1 * sy});
    return;
  }
  if (depth == 0 || (w == 1 && h == 1) || rng() % 5 == 0) {
    out.push_back({0, x0, y0, x1, y1});
    return;
  }
  bool vertical = h == 1 || (w > 1 && rng() % 2);
  if (vertical) {
    int c = x0 + 1 + static_cast<int>(rng() % (w - 1));
    random_tiling(x0, c, y0, y1, rng, out, depth - 1);
    random_tiling(c, x1, y0, y1, rng, out, depth - 1);
  } else {
    int c = y0 + 1 + static_cast<int>(rng() % (h - 1));
    random_tiling(x0, x1, y0, c, rng, out, depth - 1);
    random_tiling(x0, x1, c, y1, rng, out, depth - 1);
  }
}

}  // namespace

TEST(Box, FromFormula) {
  auto b = formula_to_box(tree(kBoxcell));
  ASSERT_EQ(b.kind, BoxDiagram::VStack);
  ASSERT_EQ(b.kids.size(), 3u);
  EXPECT_EQ(b.kids[1].kind, BoxDiagram::HRow);
  EXPECT_EQ(b.kids[1].kids[1].kind, BoxDiagram::VStack);
  EXPECT_EQ(formula_to_box(tree("_1")).kind, BoxDiagram::Cell);
  auto two = formula_to_box(tree("(_1 o _2)"));
  EXPECT_EQ(two.kind, BoxDiagram::VStack);
  EXPECT_EQ(two.kids.size(), 2u);
  EXPECT_EQ(box_to_formula(b), tree(kBoxcell));
}

TEST(Graph, Chain) {
  auto g = graph_of(tree("(_1 o _2)"));
  ASSERT_EQ(g.whites.size(), 2u);
  ASSERT_EQ(g.blacks.size(), 3u);
  // bottom -> lower cell -> upper cell -> top
  EXPECT_EQ(g.blacks[0].lower, -1);
  EXPECT_EQ(g.blacks[0].upper, 1);
  EXPECT_EQ(g.blacks[1].lower, 1);
  EXPECT_EQ(g.blacks[1].upper, 0);
  EXPECT_EQ(g.blacks[2].lower, 0);
  EXPECT_EQ(g.blacks[2].upper, -1);
}

TEST(Graph, Boxcell) {
  auto g = graph_of(tree(kBoxcell));
  EXPECT_EQ(g.whites.size(), 6u);
  EXPECT_EQ(g.blacks.size(), 9u);
  std::multiset<std::pair<int, int>> edges;
  for (const auto& b : g.blacks)
    edges.insert({b.lower < 0 ? 0 : g.whites[b.lower].slot + 1, b.upper < 0 ? 0 : g.whites[b.upper].slot + 1});
  std::multiset<std::pair<int, int>> expect{{0, 1}, {0, 2}, {1, 3}, {1, 4}, {2, 4}, {4, 5}, {3, 6}, {5, 6}, {6, 0}};
  EXPECT_EQ(edges, expect);
  EXPECT_EQ(connected_split(g).size(), 1u);
}

TEST(Graph, SideBySideStrands) {
  auto g = graph_of(tree("(_1 * _2)"));
  EXPECT_EQ(g.blacks.size(), 4u);
  auto parts = connected_split(g);
  ASSERT_EQ(parts.size(), 2u);
  EXPECT_EQ(tensor(parts[0], parts[1]), g);
  EXPECT_TRUE(connected_split(CompositionGraph{}).empty());
  auto chains = graph_of(tree("((_1 o _2) * (_3 o _4 o _5))"));
  EXPECT_EQ(connected_split(chains).size(), 2u);
}

TEST(Decompose, FormulaImagesRoundTrip) {
  Rng rng(5);
  for (int t = 0; t < 200; ++t) {
    auto f = random_formula(1 + rng() % 8, rng);
    auto g = graph_of(f);
    auto d = is_decomposable(g);
    ASSERT_TRUE(d.decomposable) << print(f);
    EXPECT_EQ(static_cast<int>(d.trace.size()), f.arity() - 1);
    ASSERT_EQ(graph_to_formula(g), f);
    EXPECT_EQ(box_to_formula(formula_to_box(graph_to_formula(g))), f);
  }
}

TEST(Decompose, SingleCellHasEmptyTrace) {
  auto d = is_decomposable(graph_of(tree("_1")));
  EXPECT_TRUE(d.decomposable);
  EXPECT_TRUE(d.trace.empty());
}

TEST(Decompose, Pinwheel) {
  auto g = layout_graph(pinwheel());
  EXPECT_EQ(g.whites.size(), 5u);
  EXPECT_FALSE(guillotine(pinwheel()));
  auto d = is_decomposable(g);
  EXPECT_FALSE(d.decomposable);
  EXPECT_TRUE(d.trace.empty());
  EXPECT_THROW(graph_to_formula(g), DomainError);
  EXPECT_THROW(standard_enumeration(g), DomainError);
}

TEST(Decompose, CappedPinwheelIsDecomposable) {
  // Topologically the bar beside the centre square can serve as the missing strand.
  std::vector<Rect> rs = pinwheel();
  rs.push_back({5, 0, 3, 1, 4});
  rs.push_back({6, 1, 3, 2, 4});
  rs.push_back({7, 2, 3, 3, 4});
  auto g = layout_graph(rs);
  EXPECT_FALSE(guillotine(rs));
  ASSERT_TRUE(is_decomposable(g).decomposable);
  auto w = formula_wiring(graph_to_formula(g), g);
  ASSERT_TRUE(w);
  EXPECT_EQ(*w, graph_wiring(g));
}

TEST(Decompose, SoundAndCompleteOnTilings) {
  Rng rng(17);
  int positives = 0, negatives = 0;
  for (int t = 0; t < 300; ++t) {
    std::vector<Rect> rs;
    int w = 1 + rng() % 6, h = 1 + rng() % 6;
    if (rng() % 3 == 0) w = 3 * (1 + rng() % 2), h = 3 * (1 + rng() % 2);
    random_tiling(0, w, 0, h, rng, rs, 4);
    if (rs.size() > 12) continue;
    for (size_t i = 0; i < rs.size(); ++i) rs[i].slot = static_cast<int>(i);
    auto g = layout_graph(rs);
    bool dec = is_decomposable(g).decomposable;
    // A straight full cut always yields a decomposition.
    if (guillotine(rs)) ASSERT_TRUE(dec) << to_literal(g);
    (dec ? positives : negatives)++;
    if (!dec) continue;
    // Every decomposition found realizes exactly the tiling's wiring.
    for (const auto& f : decompositions(g)) {
      auto w = formula_wiring(f, g);
      ASSERT_TRUE(w) << print(f);
      ASSERT_EQ(*w, graph_wiring(g)) << print(f) << " for " << to_literal(g);
    }
  }
  EXPECT_GT(positives, 50);
  EXPECT_GT(negatives, 5);
}

TEST(Enumerations, PaperFigures) {
  auto box = graph_of(tree(kBoxcell));
  auto e = graph_enumerations(box);
  ASSERT_EQ(e.size(), 1u);
  EXPECT_EQ(standard_enumeration(box), (std::vector<int>{0, 1, 2, 3, 4, 5}));
  auto square = graph_of(tree("((_1 o _2) * (_3 o _4))"));
  EXPECT_EQ(graph_enumerations(square).size(), 2u);
  // Vertical compositions first: the bottom row, then the top row.
  EXPECT_EQ(standard_enumeration(square), (std::vector<int>{1, 3, 0, 2}));
  EXPECT_EQ(graph_enumerations(graph_of(tree("((_3 * _4) o (_1 * _2))"))).size(), 1u);
  std::vector<Rect> grid{{0, 0, 0, 1, 1}, {1, 1, 0, 2, 1}, {2, 0, 1, 1, 2}, {3, 1, 1, 2, 2}};
  EXPECT_EQ(graph_enumerations(layout_graph(grid)).size(), 2u);
  EXPECT_EQ(standard_enumeration(graph_of(tree("_1"))), std::vector<int>{0});
}

TEST(Enumerations, AgreeWithFormulaOrbit) {
  Rng rng(23);
  for (int t = 0; t < 200; ++t) {
    auto f = random_formula(1 + rng() % 7, rng);
    auto g = graph_of(f);
    auto sh = generic_shapes(f);
    ASSERT_EQ(graph_enumerations(g), compatible_enumerations(f, sh)) << print(f);
    auto sf = standard_form(f, sh);
    EXPECT_EQ(standard_enumeration(g), traversal(relabel(sf.formula, sf.perm.inverse()))) << print(f);
  }
}

TEST(Suspension, InterchangeSquareMergesMiddleSegment) {
  auto g = graph_of(tree("((_1 o _2) * (_3 o _4))"));
  auto s = suspension(g);
  EXPECT_EQ(g.blacks.size(), 6u);
  EXPECT_EQ(s.segments, 3);
  auto box = suspension(graph_of(tree(kBoxcell)));
  EXPECT_EQ(box.segments, 5);
}

TEST(Dot, NodeCounts) {
  auto one = to_dot(graph_of(tree("_1")));
  EXPECT_EQ(count(one, "shape="), 3);
  EXPECT_EQ(one.rfind("digraph", 0), 0u);
  auto box = to_dot(graph_of(tree(kBoxcell)));
  EXPECT_EQ(count(box, "shape="), 15);
  EXPECT_EQ(box, to_dot(graph_of(tree(kBoxcell))));
  auto forest = parse_formula("(_1 o _2) # (_3 * _4)");
  std::vector<CompositionGraph> gs;
  for (const auto& b : formula_to_box(forest)) gs.push_back(box_to_composition_graph(b));
  auto fd = to_dot(gs);
  EXPECT_EQ(count(fd, "subgraph cluster_"), 2);
  EXPECT_EQ(count(fd, "shape="), 2 + 3 + 2 + 4);
}

TEST(Literal, RoundTrip) {
  Rng rng(2);
  for (int t = 0; t < 50; ++t) {
    auto g = graph_of(random_formula(1 + rng() % 6, rng));
    EXPECT_EQ(parse_graph(to_literal(g)), g);
  }
  auto p = layout_graph(pinwheel());
  EXPECT_EQ(parse_graph(to_literal(p)), p);
  EXPECT_THROW(parse_graph("1 0 1 0 1"), DomainError);
  EXPECT_THROW(parse_graph("1 0 1 0 1 | 0 0 0 1 0"), DomainError);
}
