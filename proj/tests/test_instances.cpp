#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "ufckit/instances.hpp"

using namespace ufckit;

namespace {

const Instance& CO = get_instance("cospan");
const Instance& SP = get_instance("span");
const Instance& FS = get_instance("finset");
const Instance& TI = get_instance("ties");

// Label-free description of a cospan: which source/target points share a middle
// element, and how many middle elements are untouched.
std::pair<std::set<std::set<int>>, int> shape(const Cospan& c) {
  std::vector<std::set<int>> by(c.k);
  for (int i = 0; i < c.m; ++i) by[c.l(i)].insert(i);
  for (int j = 0; j < c.n; ++j) by[c.r(j)].insert(1000 + j);
  std::set<std::set<int>> blocks;
  int empty = 0;
  for (auto& b : by) b.empty() ? ++empty : (blocks.insert(b), 0);
  return {blocks, empty};
}

// Composite by explicit graph search over f.k ⊔ g.k.
std::pair<std::set<std::set<int>>, int> oracle_compose(const Cospan& g, const Cospan& f) {
  int n = f.k + g.k;
  std::vector<std::vector<int>> adj(n);
  for (int c = 0; c < f.n; ++c) {
    adj[f.r(c)].push_back(f.k + g.l(c));
    adj[f.k + g.l(c)].push_back(f.r(c));
  }
  std::vector<int> comp(n, -1);
  int nc = 0;
  for (int s = 0; s < n; ++s) {
    if (comp[s] >= 0) continue;
    std::vector<int> st{s};
    comp[s] = nc;
    while (!st.empty()) {
      int x = st.back();
      st.pop_back();
      for (int y : adj[x])
        if (comp[y] < 0) comp[y] = nc, st.push_back(y);
    }
    ++nc;
  }
  std::vector<std::set<int>> by(nc);
  for (int i = 0; i < f.m; ++i) by[comp[f.l(i)]].insert(i);
  for (int j = 0; j < g.n; ++j) by[comp[f.k + g.r(j)]].insert(1000 + j);
  std::set<std::set<int>> blocks;
  int empty = 0;
  for (auto& b : by) b.empty() ? ++empty : (blocks.insert(b), 0);
  return {blocks, empty};
}

Cospan C(const Morphism& m) { return std::get<Cospan>(m); }

}  // namespace

TEST(Cospan, SwapSquaredIsIdentity) {
  auto swap = CO.parse("2 2 2 / 1 2 / 2 1");
  auto id = CO.compose(swap, swap);
  EXPECT_EQ(id, CO.identity(2));
  EXPECT_EQ(CO.print(id), "2 2 2 / 1 2 / 1 2");
}

TEST(Cospan, BlockSwap32) {
  auto b = CO.permutation(block_swap(3, 2));
  EXPECT_EQ(CO.print(b), "5 5 5 / 1 2 3 4 5 / 4 5 1 2 3");
}

TEST(Cospan, IdentityIsUnit) {
  Rng rng(1);
  for (int t = 0; t < 200; ++t) {
    int m = rng() % 5, n = rng() % 5;
    auto f = CO.random(m, n, rng);
    EXPECT_EQ(CO.compose(CO.identity(n), f), f);
    EXPECT_EQ(CO.compose(f, CO.identity(m)), f);
  }
}

TEST(Cospan, ComposeMatchesGraphOracle) {
  Rng rng(2);
  for (int t = 0; t < 1000; ++t) {
    int a = rng() % 6, b = rng() % 6, c = rng() % 6;
    auto f = C(CO.random(a, b, rng)), g = C(CO.random(b, c, rng));
    EXPECT_EQ(shape(cospan_compose(g, f)), oracle_compose(g, f));
  }
}

TEST(Cospan, RejectsBoundaryMismatch) {
  EXPECT_THROW(CO.compose(CO.identity(2), CO.identity(3)), DomainError);
}

TEST(Cospan, FigureMorphismHasFourComponents) {
  // Four middle boxes with feet (0,1), (2,1), (1,2), (1,0).
  auto f = CO.parse("4 4 4 / 1 1 2 3 / 4 1 2 2");
  auto d = CO.decompose(f);
  ASSERT_EQ(d.factors.size(), 4u);
  std::multiset<std::pair<int, int>> types, want{{0, 1}, {2, 1}, {1, 2}, {1, 0}};
  for (auto& x : d.factors) types.insert({CO.src(x), CO.tgt(x)});
  EXPECT_EQ(types, want);
  EXPECT_EQ(CO.reassemble(d), f);
}

TEST(Cospan, DecomposeTrivialCases) {
  EXPECT_EQ(CO.decompose(CO.identity(3)).factors.size(), 3u);
  EXPECT_TRUE(CO.decompose(CO.identity(0)).factors.empty());
  auto conn = CO.parse("3 2 1 / 1 1 1 / 1 1");
  auto d = CO.decompose(conn);
  ASSERT_EQ(d.factors.size(), 1u);
  EXPECT_EQ(d.factors[0], conn);
  EXPECT_EQ(degree_data(CO, conn), (DegreeData{3, 2, 1, 1}));
}

TEST(Span, DecomposeExamples) {
  // Surjective feet inducing {{1,2},{3}} on the left and {{1},{2,3}} on the right.
  auto s = SP.parse("2 2 3 / 1 1 2 / 1 2 2");
  EXPECT_EQ(SP.decompose(s).factors.size(), 1u);
  EXPECT_EQ(SP.decompose(SP.identity(3)).factors.size(), 3u);
  auto empty = SP.parse("1 1 0 / - / -");
  auto d = SP.decompose(empty);
  ASSERT_EQ(d.factors.size(), 2u);
  EXPECT_EQ(SP.src(d.factors[0]), 1);
  EXPECT_EQ(SP.tgt(d.factors[0]), 0);
  EXPECT_EQ(SP.src(d.factors[1]), 0);
  EXPECT_EQ(SP.tgt(d.factors[1]), 1);
}

TEST(Span, PullbackCounts) {
  auto f = SP.parse("1 2 2 / 1 1 / 1 2");
  auto g = SP.parse("2 1 2 / 1 2 / 1 1");
  auto h = SP.compose(g, f);
  EXPECT_EQ(std::get<Span>(h).k, 2);
}

TEST(SpanSurj, ClosedSubcategory) {
  const auto& SS = get_instance("span_surj");
  EXPECT_THROW(SS.parse("2 1 1 / 1 / 1"), DomainError);
  Rng rng(5);
  for (int t = 0; t < 300; ++t) {
    int a = 1 + rng() % 4, b = 1 + rng() % 4, c = 1 + rng() % 4;
    auto g = SS.compose(SS.random(b, c, rng), SS.random(a, b, rng));
    const auto& x = std::get<Span>(g);
    EXPECT_TRUE(x.l.is_surjection() && x.r.is_surjection());
    for (const auto& h : SS.decompose(g).factors) EXPECT_NO_THROW(SS.parse(SS.print(h)));
  }
}

TEST(FinSet, Decompose) {
  auto f = FS.parse("4 2 / 1 1 2 2");
  auto d = FS.decompose(f);
  ASSERT_EQ(d.factors.size(), 2u);
  for (auto& x : d.factors) {
    EXPECT_EQ(FS.src(x), 2);
    EXPECT_EQ(FS.tgt(x), 1);
  }
  EXPECT_EQ(FS.decompose(FS.identity(4)).factors.size(), 4u);
  auto e = FS.decompose(FS.parse("0 1 / -"));
  ASSERT_EQ(e.factors.size(), 1u);
  EXPECT_EQ(FS.src(e.factors[0]), 0);
  EXPECT_EQ(FS.tgt(e.factors[0]), 1);
}

TEST(FinSet, DegreeAdditiveUnderComposition) {
  Rng rng(5);
  for (int t = 0; t < 300; ++t) {
    int a = rng() % 5, b = 1 + rng() % 4, c = 1 + rng() % 4;
    auto f = FS.random(a, b, rng), g = FS.random(b, c, rng);
    EXPECT_EQ(degree_data(FS, FS.compose(g, f)).degree,
              degree_data(FS, g).degree + degree_data(FS, f).degree);
  }
}

TEST(Ties, CounterexampleComposite) {
  auto f = TI.parse("3 / 1 2 3 / - / {1,2}{3}");
  auto g = TI.parse("3 / 1 2 3 / - / {1}{2,3}");
  EXPECT_EQ(TI.print(TI.compose(g, f)), "3 / 1 2 3 / - / {1}{2}{3}");
  EXPECT_EQ(TI.decompose(f).factors.size(), 2u);
}

TEST(Ties, IdentityAndSingleTie) {
  Rng rng(9);
  for (int t = 0; t < 200; ++t) {
    int n = rng() % 5;
    auto f = TI.random(n, n, rng);
    EXPECT_EQ(TI.compose(f, TI.identity(n)), f);
    EXPECT_EQ(TI.compose(TI.identity(n), f), f);
  }
  auto tied = TI.parse("1 / 1 / - / {1}");
  EXPECT_EQ(TI.compose(tied, TI.identity(1)), tied);
  EXPECT_FALSE(TI.is_iso(tied));
}

TEST(Ties, LiteralRoundTrip) {
  for (const char* s : {"3 / 1 2 3 / - / {1,2}{3}", "2 / 2 1 / 1 2 / -", "3 / 3 1 2 / 2 / {1,3}"})
    EXPECT_EQ(TI.print(TI.parse(s)), s);
  EXPECT_THROW(TI.parse("2 / 1 2 / 1 / -"), DomainError);
}

class AllInstances : public ::testing::TestWithParam<std::string> {};

TEST_P(AllInstances, CategoryLaws) {
  const auto& I = get_instance(GetParam());
  Rng rng(42);
  int trials = 0;
  while (trials < 1000) {
    int a = rng() % 6, b = rng() % 6, c = rng() % 6, d = rng() % 6;
    if (GetParam() == "ties") b = c = d = a;
    if (!I.has_morphisms(a, b) || !I.has_morphisms(b, c) || !I.has_morphisms(c, d)) continue;
    auto f = I.random(a, b, rng), g = I.random(b, c, rng), h = I.random(c, d, rng);
    ASSERT_EQ(I.compose(I.compose(h, g), f), I.compose(h, I.compose(g, f)));
    ASSERT_EQ(I.compose(I.identity(b), f), f);
    ASSERT_EQ(I.compose(f, I.identity(a)), f);
    ASSERT_EQ(I.tensor(f, I.identity(0)), f);
    ++trials;
  }
}

TEST_P(AllInstances, Interchange) {
  const auto& I = get_instance(GetParam());
  Rng rng(43);
  int trials = 0;
  while (trials < 1000) {
    int a = rng() % 4, b = rng() % 4, c = rng() % 4, x = rng() % 4, y = rng() % 4, z = rng() % 4;
    if (GetParam() == "ties") b = c = a, y = z = x;
    if (!I.has_morphisms(a, b) || !I.has_morphisms(b, c) || !I.has_morphisms(x, y) ||
        !I.has_morphisms(y, z))
      continue;
    auto f1 = I.random(a, b, rng), f2 = I.random(b, c, rng);
    auto g1 = I.random(x, y, rng), g2 = I.random(y, z, rng);
    ASSERT_EQ(I.tensor(I.compose(f2, f1), I.compose(g2, g1)),
              I.compose(I.tensor(f2, g2), I.tensor(f1, g1)));
    ++trials;
  }
}

TEST_P(AllInstances, DecomposeReassembles) {
  const auto& I = get_instance(GetParam());
  Rng rng(44);
  for (int t = 0; t < 500; ++t) {
    int a = rng() % 6, b = rng() % 6;
    if (GetParam() == "ties") b = a;
    if (GetParam() == "finset" && b == 0) b = 1;
    if (!I.has_morphisms(a, b)) continue;
    auto f = I.random(a, b, rng);
    auto d = I.decompose(f);
    ASSERT_EQ(I.reassemble(d), f) << I.print(f);
    ASSERT_EQ(d.src_assign.dom(), a);
    ASSERT_EQ(d.tgt_assign.dom(), b);
    ASSERT_EQ(d.factors.empty(), a == 0 && b == 0 && f == I.identity(0));
    for (const auto& x : d.factors) EXPECT_EQ(I.decompose(x).factors.size(), 1u) << I.print(x);
    auto dd = degree_data(I, I.tensor(f, f));
    EXPECT_EQ(dd.depth, 2 * degree_data(I, f).depth);
    EXPECT_EQ(dd.degree, 2 * degree_data(I, f).degree);
    if (GetParam() != "ties") {
      auto dg = degree_data(I, f);
      bool all_unit = std::all_of(d.factors.begin(), d.factors.end(), [&](const Morphism& x) {
        return I.src(x) == 1 && I.tgt(x) == 1 && I.is_iso(x);
      });
      EXPECT_EQ(I.is_iso(f), all_unit);
      if (I.is_iso(f)) EXPECT_TRUE(dg.degree == 0 && dg.depth == dg.src);
    }
  }
}

TEST_P(AllInstances, IsoActionIsGroupAction) {
  const auto& I = get_instance(GetParam());
  Rng rng(45);
  auto rperm = [&](int n) {
    std::vector<int> v(n);
    std::iota(v.begin(), v.end(), 0);
    std::shuffle(v.begin(), v.end(), rng);
    return I.permutation(FinMap(n, v));
  };
  for (int t = 0; t < 300; ++t) {
    int a = rng() % 4, b = rng() % 4;
    if (GetParam() == "ties") b = a;
    if (GetParam() == "finset" && b == 0) b = 1;
    if (!I.has_morphisms(a, b)) continue;
    auto f = I.random(a, b, rng);
    auto s = rperm(a), sp = rperm(b), u = rperm(a), up = rperm(b);
    EXPECT_EQ(iso_act(I, {I.identity(a), I.identity(b)}, f), f);
    auto once = iso_act(I, {s, sp}, f);
    auto twice = iso_act(I, {u, up}, once);
    EXPECT_EQ(twice, iso_act(I, {I.compose(u, s), I.compose(up, sp)}, f));
    EXPECT_EQ(I.is_iso(once), I.is_iso(f));
    if (a == b) EXPECT_EQ(iso_act(I, {s, s}, I.identity(a)), I.identity(a));
  }
}

TEST_P(AllInstances, HomEnumerationIsDistinct) {
  const auto& I = get_instance(GetParam());
  for (int a = 0; a <= 2; ++a)
    for (int b = 0; b <= 2; ++b) {
      auto hs = I.hom(a, b, 3);
      std::set<Morphism> uniq(hs.begin(), hs.end());
      EXPECT_EQ(uniq.size(), hs.size());
      EXPECT_EQ(hs.empty(), !I.has_morphisms(a, b));
      for (const auto& f : hs) EXPECT_EQ(I.parse(I.print(f)), f);
    }
}

INSTANTIATE_TEST_SUITE_P(Instances, AllInstances,
                         ::testing::Values("cospan", "span", "span_surj", "finset", "ties"));
