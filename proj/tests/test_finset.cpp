#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "ufckit/finset.hpp"

using namespace ufckit;

namespace {

// Connected components of k1 ⊔ k2 by depth-first search over the glue edges.
std::vector<int> dfs_classes(int k1, int k2, const std::vector<std::pair<int, int>>& glue) {
  int n = k1 + k2;
  std::vector<std::vector<int>> adj(n);
  for (auto [a, b] : glue) {
    adj[a].push_back(k1 + b);
    adj[k1 + b].push_back(a);
  }
  std::vector<int> label(n, -1);
  int next = 0;
  for (int s = 0; s < n; ++s) {
    if (label[s] >= 0) continue;
    std::vector<int> stack{s};
    label[s] = next;
    while (!stack.empty()) {
      int x = stack.back();
      stack.pop_back();
      for (int y : adj[x])
        if (label[y] < 0) {
          label[y] = next;
          stack.push_back(y);
        }
    }
    ++next;
  }
  return label;
}

}  // namespace

TEST(Pushout, SwapGlue) {
  auto r = pushout(2, 2, {{1, 0}, {0, 1}});
  EXPECT_EQ(r.u, 2);
  EXPECT_EQ(r.p1.img, (std::vector<int>{0, 1}));
  EXPECT_EQ(r.p2.img, (std::vector<int>{1, 0}));
}

TEST(Pushout, NoGlueIsDisjointUnion) {
  auto r = pushout(3, 0, {});
  EXPECT_EQ(r.u, 3);
  EXPECT_EQ(r.p1, FinMap::identity(3));
  EXPECT_EQ(r.p2.dom(), 0);
}

TEST(Pushout, SingleClass) { EXPECT_EQ(pushout(1, 1, {{0, 0}}).u, 1); }

TEST(Pushout, OutOfRange) { EXPECT_THROW(pushout(1, 1, {{0, 1}}), DomainError); }

TEST(Pushout, MatchesDfsOracleAndIsSymmetric) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 500; ++trial) {
    int k1 = rng() % 6, k2 = rng() % 6;
    std::vector<std::pair<int, int>> glue, flipped;
    if (k1 && k2)
      for (int g = rng() % 5; g > 0; --g) {
        int a = rng() % k1, b = rng() % k2;
        glue.emplace_back(a, b);
        flipped.emplace_back(b, a);
      }
    auto r = pushout(k1, k2, glue);
    auto oracle = dfs_classes(k1, k2, glue);
    for (int i = 0; i < k1; ++i) EXPECT_EQ(r.p1(i), oracle[i]);
    for (int j = 0; j < k2; ++j) EXPECT_EQ(r.p2(j), oracle[k1 + j]);
    auto s = pushout(k2, k1, flipped);
    ASSERT_EQ(r.u, s.u);
    auto sizes = [](const PushoutResult& p) {
      std::vector<size_t> v;
      for (auto& f : fibers(FinMap(p.u, [&] {
             auto x = p.p1.img;
             x.insert(x.end(), p.p2.img.begin(), p.p2.img.end());
             return x;
           }())))
        v.push_back(f.size());
      std::sort(v.begin(), v.end());
      return v;
    };
    EXPECT_EQ(sizes(r), sizes(s));
  }
}

TEST(Pullback, Identities) {
  auto r = pullback(FinMap::identity(2), FinMap::identity(2));
  EXPECT_EQ(r.p, 2);
  EXPECT_EQ(r.pi1, FinMap::identity(2));
  EXPECT_EQ(r.pi2, FinMap::identity(2));
}

TEST(Pullback, ConstantMapsGiveProduct) {
  EXPECT_EQ(pullback(FinMap(1, {0, 0}), FinMap(1, {0, 0})).p, 4);
}

TEST(Pullback, Empty) { EXPECT_EQ(pullback(FinMap(2, {0}), FinMap(2, {1})).p, 0); }

TEST(Pullback, CodomainMismatch) {
  EXPECT_THROW(pullback(FinMap(2, {0}), FinMap(3, {1})), DomainError);
}

TEST(Pullback, AlongIdentityIsDomain) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 100; ++t) {
    int m = rng() % 5, k = 1 + rng() % 4;
    std::vector<int> img(m);
    for (auto& x : img) x = rng() % k;
    FinMap f(k, img);
    auto r = pullback(f, FinMap::identity(k));
    EXPECT_EQ(r.p, m);
    EXPECT_EQ(r.pi1, FinMap::identity(m));
    EXPECT_EQ(r.pi2, f);
  }
}

TEST(Fibers, Examples) {
  EXPECT_EQ(fibers(FinMap(2, {0, 0, 1, 1})), (std::vector<std::vector<int>>{{0, 1}, {2, 3}}));
  EXPECT_EQ(fibers(FinMap::identity(3)), (std::vector<std::vector<int>>{{0}, {1}, {2}}));
  EXPECT_EQ(fibers(FinMap(1, {})), (std::vector<std::vector<int>>{{}}));
}

TEST(Fibers, SizesSumToDomain) {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 200; ++t) {
    int m = rng() % 7, k = 1 + rng() % 4;
    std::vector<int> img(m);
    for (auto& x : img) x = rng() % k;
    size_t total = 0;
    for (auto& f : fibers(FinMap(k, img))) total += f.size();
    EXPECT_EQ(static_cast<int>(total), m);
  }
}

TEST(FinMap, RejectsOutOfRange) { EXPECT_THROW(FinMap(2, {0, 2}), DomainError); }

TEST(Partition, FromLabels) {
  auto p = Partition::from_labels({5, 3, 5, 1});
  EXPECT_TRUE(p.valid());
  EXPECT_EQ(p.blocks, (std::vector<std::vector<int>>{{0, 2}, {1}, {3}}));
}

TEST(Lists, RoundTrip) {
  EXPECT_EQ(to_string({0, 2, 1}), "1 3 2");
  EXPECT_EQ(to_string({}), "-");
  EXPECT_EQ(parse_list("1 3 2"), (std::vector<int>{0, 2, 1}));
  EXPECT_TRUE(parse_list("-").empty());
  EXPECT_THROW(parse_list("0"), DomainError);
}
