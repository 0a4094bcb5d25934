#include <gtest/gtest.h>

#include <set>

#include "ufckit/instances.hpp"
#include "ufckit/ufc.hpp"

using namespace ufckit;

namespace {

const Instance& CO = get_instance("cospan");
const Instance& SP = get_instance("span");
const Instance& FS = get_instance("finset");
const Instance& TI = get_instance("ties");

int depth(const Instance& I, const Morphism& f) { return static_cast<int>(I.decompose(f).factors.size()); }

// Number of classes of the factor graph, linking factors that share a wire at a middle object.
int oracle_classes(const Instance& I, const std::vector<Morphism>& seq) {
  std::vector<Decomposition> d;
  std::vector<int> base{0};
  for (const auto& f : seq) {
    d.push_back(I.decompose(f));
    base.push_back(base.back() + static_cast<int>(d.back().factors.size()));
  }
  int n = base.back();
  std::vector<std::vector<int>> adj(n);
  for (size_t i = 0; i + 1 < seq.size(); ++i)
    for (int x = 0; x < d[i].tgt_assign.dom(); ++x) {
      int a = base[i] + d[i].tgt_assign(x), b = base[i + 1] + d[i + 1].src_assign(x);
      adj[a].push_back(b);
      adj[b].push_back(a);
    }
  std::vector<bool> seen(n);
  int c = 0;
  for (int s = 0; s < n; ++s) {
    if (seen[s]) continue;
    ++c;
    std::vector<int> st{s};
    seen[s] = true;
    while (!st.empty()) {
      int x = st.back();
      st.pop_back();
      for (int y : adj[x])
        if (!seen[y]) seen[y] = true, st.push_back(y);
    }
  }
  return c;
}

}  // namespace

TEST(Components, CospanPairGluesIntoOneClass) {
  // Two factors each; the second morphism's factors straddle the first's.
  auto h = CO.parse("3 3 2 / 1 2 2 / 1 1 2");
  auto k = CO.parse("3 3 2 / 1 2 2 / 1 2 2");
  ASSERT_EQ(depth(CO, h), 2);
  ASSERT_EQ(depth(CO, k), 2);
  auto r = connected_components(CO, {h, k});
  EXPECT_EQ(r.u_count, oracle_classes(CO, {h, k}));
  EXPECT_EQ(r.u_count, 1);
  EXPECT_EQ(r.component_morphisms[0], CO.compose(k, h));
}

TEST(Components, IdentitiesSplitPerWire) {
  auto id = CO.identity(3);
  auto r = connected_components(CO, {id, id, id});
  EXPECT_EQ(r.u_count, 3);
  for (const auto& c : r.component_morphisms) EXPECT_EQ(c, CO.identity(1));
}

TEST(Components, TiesCounterexampleIsOneReducibleClass) {
  auto f = TI.parse("3 / 1 2 3 / - / {1,2}{3}");
  auto g = TI.parse("3 / 1 2 3 / - / {1}{2,3}");
  auto r = connected_components(TI, {f, g});
  EXPECT_EQ(r.u_count, 1);
  EXPECT_EQ(depth(TI, r.component_morphisms[0]), 3);
  auto v = is_hereditary_pair(TI, f, g);
  EXPECT_FALSE(v.hereditary);
  ASSERT_TRUE(v.counterexample);
  EXPECT_EQ(v.counterexample->component_depth, 3);
  EXPECT_EQ(TI.print(v.counterexample->component), "3 / 1 2 3 / - / {1}{2}{3}");
}

TEST(Components, RejectsBoundaryMismatch) {
  EXPECT_THROW(connected_components(CO, {CO.identity(2), CO.identity(3)}), DomainError);
  EXPECT_THROW(connected_components(CO, {}), DomainError);
}

TEST(Hereditary, IdentityPair) {
  EXPECT_TRUE(is_hereditary_pair(SP, SP.identity(2), SP.identity(2)).hereditary);
}

TEST(Hereditary, BoundThreeVerdicts) {
  EXPECT_TRUE(check_hereditary(CO, 3, 5'000'000).hereditary);
  EXPECT_TRUE(check_hereditary(get_instance("span_surj"), 3, 5'000'000).hereditary);
  EXPECT_TRUE(check_hereditary(FS, 3, 5'000'000).hereditary);
  auto v = check_hereditary(TI, 3, 5'000'000);
  EXPECT_FALSE(v.hereditary);
  ASSERT_TRUE(v.counterexample);
  EXPECT_GE(v.counterexample->component_depth, 2);
}

TEST(Hereditary, FullSpanHasEmptyMiddleWitness) {
  // 2 <- 2 -> 1 (connected) followed by 1 <- 0 -> 0 (connected) pulls back to 2 <- 0 -> 0.
  auto f = SP.parse("2 1 2 / 1 2 / 1 1");
  auto g = SP.parse("1 0 0 / - / -");
  ASSERT_EQ(depth(SP, f), 1);
  ASSERT_EQ(depth(SP, g), 1);
  auto v = is_hereditary_pair(SP, f, g);
  EXPECT_FALSE(v.hereditary);
  EXPECT_EQ(v.counterexample->component_depth, 2);
  auto w = check_hereditary(SP, 3, 5'000'000);
  EXPECT_FALSE(w.hereditary);
  ASSERT_TRUE(w.counterexample);
  EXPECT_NE(w.counterexample->component_depth, 1);
}

TEST(Hereditary, SamplingIsReproducible) {
  auto a = check_hereditary(CO, 3, 500, 7), b = check_hereditary(CO, 3, 500, 7);
  EXPECT_TRUE(a.sampled);
  EXPECT_EQ(a.pairs_checked, 500u);
  EXPECT_EQ(a.pairs_checked, b.pairs_checked);
  auto t1 = check_hereditary(TI, 3, 200, 3), t2 = check_hereditary(TI, 3, 200, 3);
  EXPECT_EQ(t1.hereditary, t2.hereditary);
  if (!t1.hereditary) EXPECT_EQ(t1.counterexample->phi0, t2.counterexample->phi0);
}

TEST(Idx, Examples) {
  auto f = FS.parse("4 2 / 1 1 2 2");
  auto c = idx(FS, f);
  EXPECT_EQ(c, canonical(make_cospan(4, 2, 2, FinMap(2, {0, 0, 1, 1}), FinMap(2, {0, 1}))));
  EXPECT_EQ(idx(SP, SP.identity(3)), cospan_identity(3));
  EXPECT_EQ(idx(CO, CO.identity(2)), cospan_identity(2));
  auto conn = CO.parse("3 2 1 / 1 1 1 / 1 1");
  EXPECT_EQ(idx(CO, conn).k, 1);
}

class HereditaryInstances : public ::testing::TestWithParam<std::string> {};

TEST_P(HereditaryInstances, IdxIsFunctorial) {
  const auto& I = get_instance(GetParam());
  Rng rng(11);
  int trials = 0;
  while (trials < 500) {
    int a = rng() % 5, b = rng() % 5, c = rng() % 5;
    if (!I.has_morphisms(a, b) || !I.has_morphisms(b, c)) continue;
    auto f = I.random(a, b, rng), g = I.random(b, c, rng);
    ASSERT_EQ(idx(I, I.compose(g, f)), cospan_compose(idx(I, g), idx(I, f)))
        << I.print(f) << " ; " << I.print(g);
    ++trials;
  }
}

TEST_P(HereditaryInstances, ComponentsReassembleAndRefine) {
  const auto& I = get_instance(GetParam());
  Rng rng(12);
  int trials = 0;
  while (trials < 300) {
    int a = rng() % 4, b = rng() % 4, c = rng() % 4, e = rng() % 4;
    if (!I.has_morphisms(a, b) || !I.has_morphisms(b, c) || !I.has_morphisms(c, e)) continue;
    auto f = I.random(a, b, rng), g = I.random(b, c, rng), h = I.random(c, e, rng);
    auto r = connected_components(I, {f, g, h});
    ASSERT_EQ(r.u_count, oracle_classes(I, {f, g, h}));
    ASSERT_EQ(reassemble_components(I, r), I.compose(h, I.compose(g, f)));
    for (int u = 0; u < r.u_count; ++u) {
      const auto& s = r.component_factor_sequences[u];
      EXPECT_EQ(I.compose(s[2], I.compose(s[1], s[0])), r.component_morphisms[u]);
      EXPECT_EQ(depth(I, r.component_morphisms[u]), 1);
    }
    // Coarsening never increases the class count and equals a fresh computation.
    auto coarse = connected_components(I, {I.compose(g, f), h});
    EXPECT_LE(coarse.u_count, r.u_count);
    EXPECT_EQ(coarse.u_count, oracle_classes(I, {I.compose(g, f), h}));
    auto single = connected_components(I, {f});
    EXPECT_EQ(single.u_count, depth(I, f));
    ++trials;
  }
}

INSTANTIATE_TEST_SUITE_P(Ufc, HereditaryInstances, ::testing::Values("cospan", "span_surj", "finset"));
