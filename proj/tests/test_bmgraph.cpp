#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <set>

#include "ufckit/bmgraph.hpp"
#include "ufckit/instances.hpp"
#include "ufckit/ufc.hpp"

using namespace ufckit;

namespace {

const Instance& CO = get_instance("cospan");

using EdgeSet = std::set<std::pair<int, int>>;

EdgeSet as_set(const std::vector<std::pair<int, int>>& v) { return {v.begin(), v.end()}; }

std::pair<int, int> ordered(int a, int b) { return {std::min(a, b), std::max(a, b)}; }

/// A cospan m -> n with a single apex point: connected.
Morphism point(int m, int n) {
  return make_cospan(m, n, 1, FinMap(1, std::vector<int>(m, 0)), FinMap(1, std::vector<int>(n, 0)));
}

}  // namespace

TEST(Graph, ValidateRejectsBrokenInvolution) {
  Graph g = corolla(3);
  g.inv = {1, 2, 0};
  EXPECT_THROW(validate(g), DomainError);
  Graph d = directed_corolla(1, 1);
  d.inv = {1, 0};
  EXPECT_NO_THROW(validate(d));
  d.io = {1, 1};
  EXPECT_THROW(validate(d), DomainError);
}

TEST(Graph, LoopHasTwoAutomorphisms) {
  EXPECT_EQ(automorphisms(loop_graph()).size(), 2u);
  EXPECT_EQ(automorphisms(corolla(3)).size(), 6u);
  // two vertices joined by one edge, with a tail at the first: only the identity
  Graph g;
  g.nv = 2;
  g.vertex = {0, 0, 1};
  g.inv = {0, 2, 1};
  EXPECT_EQ(automorphisms(g).size(), 1u);
}

TEST(Graph, CorollaPredicates) {
  EXPECT_TRUE(is_corolla(corolla(4)));
  EXPECT_TRUE(is_aggregate(disjoint_union(corolla(1), corolla(2))));
  EXPECT_FALSE(is_corolla(disjoint_union(corolla(1), corolla(2))));
  EXPECT_FALSE(is_corolla(loop_graph()));
  EXPECT_TRUE(is_connected(loop_graph()));
  EXPECT_FALSE(is_connected(disjoint_union(corolla(1), corolla(1))));
}

TEST(Graph, TextRoundTrip) {
  Rng rng(5);
  for (int i = 0; i < 200; ++i) {
    Graph g = random_graph(8, 4, rng, i % 2 == 0);
    if (i % 3 == 0) {
      g.clr.resize(g.nflags());
      for (int f = 0; f < g.nflags(); ++f) g.clr[f] = std::min(f, g.inv[f]) % 3;
    }
    EXPECT_EQ(read_graph(write_graph(g)), g) << write_graph(g);
  }
  EXPECT_THROW(read_graph("graph 1 2\n1 2 - -\n"), DomainError);
  EXPECT_THROW(read_graph("1 1 - -\n"), DomainError);
  EXPECT_THROW(read_graph("graph 1 1\n1 1 up -\n"), DomainError);
  EXPECT_NE(to_dot(loop_graph()).find("v1 -- v1"), std::string::npos);
}

TEST(GraphMorphism, RandomMorphismsAreValid) {
  Rng rng(11);
  for (int i = 0; i < 500; ++i) {
    Graph g = random_graph(8, 4, rng, i % 2 == 0);
    EXPECT_NO_THROW(validate(random_morphism(g, rng))) << write_graph(g);
  }
}

TEST(GraphMorphism, ValidateRejectsCutEdges) {
  // Dropping an edge without contracting it is not a morphism.
  GraphMorphism m = identity_morphism(loop_graph());
  m.target = corolla(0);
  m.fmap = {};
  EXPECT_THROW(validate(m), DomainError);
  m.ghost = {1, 0};
  EXPECT_NO_THROW(validate(m));
}

TEST(GraphMorphism, GhostEdgesOfComposite) {
  Rng rng(2024);
  for (int i = 0; i < 600; ++i) {
    Graph g = random_graph(8, 4, rng, i % 2 == 1);
    GraphMorphism phi = random_morphism(g, rng);
    GraphMorphism psi = random_morphism(phi.target, rng);
    GraphMorphism c = compose_graph_morphisms(psi, phi);
    ASSERT_NO_THROW(validate(c));
    EdgeSet expect = as_set(ghost_edges(phi));
    for (auto [a, b] : ghost_edges(psi)) expect.insert(ordered(phi.fmap[a], phi.fmap[b]));
    EXPECT_EQ(as_set(ghost_edges(c)), expect);
    // survivors of the composite are exactly the flags never paired
    EXPECT_EQ(static_cast<int>(c.fmap.size() + 2 * expect.size()), g.nflags());
    GraphMorphism chi = random_morphism(psi.target, rng);
    EXPECT_EQ(compose_graph_morphisms(chi, c), compose_graph_morphisms(compose_graph_morphisms(chi, psi), phi));
    EXPECT_EQ(compose_graph_morphisms(identity_morphism(psi.target), psi), psi);
    EXPECT_EQ(compose_graph_morphisms(psi, identity_morphism(psi.source)), psi);
  }
}

TEST(GraphMorphism, TensorIsValid) {
  Rng rng(8);
  for (int i = 0; i < 100; ++i) {
    auto a = random_morphism(random_graph(4, 2, rng), rng);
    auto b = random_morphism(random_graph(4, 2, rng), rng);
    auto t = tensor(a, b);
    EXPECT_NO_THROW(validate(t));
    EXPECT_EQ(ghost_edges(t).size(), ghost_edges(a).size() + ghost_edges(b).size());
  }
}

TEST(GraphMorphism, TwoLevelFull) {
  // two lower vertices, each 1 -> 1, feeding one upper vertex 2 -> 1
  GraphMorphism m;
  Graph& s = m.source;
  s.nv = 3;
  s.vertex = {0, 0, 1, 1, 2, 2, 2};
  s.io = {1, -1, 1, -1, 1, 1, -1};
  s.inv = {0, 1, 2, 3, 4, 5, 6};
  m.target = directed_corolla(2, 1);
  m.vmap = FinMap(1, {0, 0, 0});
  m.fmap = {0, 2, 6};
  m.ghost = {-1, 4, -1, 5, 1, 3, -1};
  ASSERT_NO_THROW(validate(m));
  EXPECT_TRUE(is_two_level_full(m));
  EXPECT_FALSE(is_isomorphism(m));
  // leaving an upper input on the boundary breaks fullness
  m.fmap = {0, 2, 3, 5, 6};
  m.target = corolla(5);
  m.target.io = {1, 1, -1, 1, -1};
  m.ghost = {-1, 4, -1, -1, 1, -1, -1};
  ASSERT_NO_THROW(validate(m));
  EXPECT_FALSE(is_two_level_full(m));
  EXPECT_TRUE(is_isomorphism(identity_morphism(s)));
}

TEST(ColoredGraph, CompositeKeepsReorientation) {
  Rng rng(31);
  for (const Groupoid& G : {Groupoid::codiscrete(2), Groupoid::cyclic(3), Groupoid::discrete(2)}) {
    ASSERT_NO_THROW(validate(G));
    for (int i = 0; i < 300; ++i) {
      ColoredGraph g = random_colored_graph(G, 8, rng);
      ASSERT_NO_THROW(validate(g, G));
      ColoredMorphism phi = random_colored_morphism(g, G, rng);
      ASSERT_NO_THROW(validate(phi, G));
      ColoredMorphism psi = random_colored_morphism(phi.target, G, rng);
      ColoredMorphism c = compose_colored(psi, phi, G);
      ASSERT_NO_THROW(validate(c, G));
      for (auto [f, h] : ghost_edges(c.map)) EXPECT_EQ(c.ghost_sigma[h], G.inverse(c.ghost_sigma[f]));
    }
  }
}

TEST(Graphical, IdentityGluingIsComposition) {
  Rng rng(3);
  for (int i = 0; i < 200; ++i) {
    int a = static_cast<int>(rng() % 3), b = static_cast<int>(rng() % 3), c = static_cast<int>(rng() % 3);
    Morphism f = CO.random(a, b, rng), g = CO.random(b, c, rng);
    DecoratedCorolla lo{{}, {}, f}, up{{}, {}, g};
    for (int x = 0; x < a; ++x) lo.ins.push_back(x);
    for (int y = 0; y < b; ++y) lo.outs.push_back(10 + y);
    for (int y = 0; y < b; ++y) up.ins.push_back(20 + y);
    for (int z = 0; z < c; ++z) up.outs.push_back(30 + z);
    std::vector<std::pair<int, int>> glue;
    for (int y = 0; y < b; ++y) glue.emplace_back(10 + y, 20 + y);
    EXPECT_EQ(graphical_compose(CO, {lo}, {up}, glue).deco, CO.compose(g, f));
    // a twisted gluing inserts the permutation
    std::vector<int> p(b);
    std::iota(p.begin(), p.end(), 0);
    std::shuffle(p.begin(), p.end(), rng);
    glue.clear();
    for (int y = 0; y < b; ++y) glue.emplace_back(10 + y, 20 + p[y]);
    EXPECT_EQ(graphical_compose(CO, {lo}, {up}, glue).deco,
              CO.compose(g, CO.compose(CO.permutation(FinMap(b, p)), f)));
  }
}

TEST(Graphical, ConnectedPairMatchesComponents) {
  Rng rng(4);
  for (int i = 0; i < 100; ++i) {
    int a = 1 + static_cast<int>(rng() % 3), b = 1 + static_cast<int>(rng() % 3), c = 1 + static_cast<int>(rng() % 3);
    Morphism f = point(a, b), g = point(b, c);
    DecoratedCorolla lo{{}, {}, f}, up{{}, {}, g};
    std::vector<std::pair<int, int>> glue;
    for (int x = 0; x < a; ++x) lo.ins.push_back(x);
    for (int y = 0; y < b; ++y) {
      lo.outs.push_back(a + y);
      up.ins.push_back(a + b + y);
      glue.emplace_back(a + y, a + b + y);
    }
    for (int z = 0; z < c; ++z) up.outs.push_back(a + 2 * b + z);
    auto report = connected_components(CO, {f, g});
    ASSERT_EQ(report.u_count, 1);
    EXPECT_EQ(graphical_compose(CO, {lo}, {up}, glue).deco, report.component_morphisms[0]);
  }
}

TEST(Graphical, ConvertedMorphismsEvaluateLikePlus) {
  Rng rng(77);
  int checked = 0;
  for (int i = 0; i < 200; ++i) {
    Variant v = i % 2 ? Variant::Gcp : Variant::Strong;
    PlusMorphism g = random_plus(v, CO, 1 + static_cast<int>(rng() % 4), rng);
    GraphicalMorphism m = convert_plus_to_colored(g);
    auto values = evaluate_graphical(m);
    ASSERT_EQ(values.size(), m.target_deco.size());
    for (size_t k = 0; k < values.size(); ++k) EXPECT_EQ(values[k], m.target_deco[k]) << print(g);
    auto whole = evaluate(canonical_form(g));
    ASSERT_EQ(whole.size(), 1u);
    EXPECT_EQ(assemble_target(m, values), whole[0]) << print(g);
    ++checked;
  }
  EXPECT_EQ(checked, 200);
}

TEST(Graphical, SingleGammaHasTwoVerticesOverOneCorolla) {
  GraphicalMorphism m = convert_plus_to_colored(gamma(Variant::Strong, CO, point(2, 1), point(1, 2)));
  EXPECT_EQ(m.map.source.nv, 2);
  EXPECT_EQ(m.map.target.nv, 1);
  EXPECT_TRUE(is_two_level_full(m.map));
  GraphicalMorphism id = convert_plus_to_colored(plus_identity(Variant::Strong, CO, {point(2, 1)}));
  EXPECT_TRUE(is_isomorphism(id.map));
}

TEST(Graphical, ThreeLevelFormula) {
  PreFormula shape = parse_formula("((_1 * _2 * _3) o (_4 * _5) o (_6 * _7 * _8))");
  // bottom 3 -> 5, middle 5 -> 5, top 5 -> 3, every factor connected
  std::vector<Morphism> phis = {point(2, 1), point(2, 1), point(1, 1), point(3, 1),
                                point(2, 4), point(1, 2), point(1, 2), point(1, 1)};
  PlusMorphism g = from_formula(Variant::Strong, populate(shape, CO, phis));
  GraphicalMorphism m = convert_plus_to_colored(g);
  EXPECT_EQ(m.map.source.nv, 8);
  EXPECT_EQ(ghost_edges(m.map).size(), 10u);
  EXPECT_EQ(evaluate_graphical(m), m.target_deco);
}

TEST(Graphical, UnitVerticesAreInvisible) {
  Rng rng(99);
  for (int i = 0; i < 200; ++i) {
    PlusMorphism g = random_plus(Variant::Gcp, CO, 1 + static_cast<int>(rng() % 3), rng);
    GraphicalMorphism m = convert_plus_to_colored(g);
    if (m.map.source.nflags() == 0) continue;
    int f = static_cast<int>(rng() % m.map.source.nflags());
    GraphicalMorphism u = insert_unit_vertex(m, f);
    EXPECT_EQ(evaluate_graphical(u), m.target_deco);
    GraphicalMorphism back = remove_unit_vertex(u, u.map.source.nv - 1);
    EXPECT_EQ(evaluate_graphical(back), m.target_deco);
    EXPECT_EQ(back.map.source.nv, m.map.source.nv);
  }
  // a unit vertex alone on a boundary wire cannot go
  GraphicalMorphism loose = convert_plus_to_colored(plus_identity(Variant::Gcp, CO, {CO.identity(1)}));
  for (int v = 0; v < loose.map.source.nv; ++v)
    if (loose.unit[v]) EXPECT_THROW(remove_unit_vertex(loose, v), DomainError);
}

TEST(Graphical, RejectsNonHereditaryInstances) {
  Rng rng(1);
  const Instance& SP = get_instance("span");
  PlusMorphism g = plus_identity(Variant::Strong, SP, {SP.identity(1)});
  EXPECT_THROW(convert_plus_to_colored(g), DomainError);
}
