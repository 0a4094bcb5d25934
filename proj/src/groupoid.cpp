#include "ufckit/groupoid.hpp"

#include <functional>

#include "ufckit/finset.hpp"

namespace ufckit {

int Groupoid::compose(int g, int f) const {
  int h = comp.at(g).at(f);
  if (h < 0)
    throw DomainError("groupoid: arrows " + std::to_string(g + 1) + " and " + std::to_string(f + 1) +
                      " are not composable");
  return h;
}

std::vector<int> Groupoid::hom(int a, int b) const {
  std::vector<int> out;
  for (int f = 0; f < narrows(); ++f)
    if (src[f] == a && tgt[f] == b) out.push_back(f);
  return out;
}

namespace {

Groupoid from_product(int nobj, int group_order, const std::function<int(int, int)>& mult,
                      const std::function<int(int)>& invert) {
  // arrows (a, b, x): a -> b labeled by group element x; composition multiplies labels.
  Groupoid G;
  G.nobj = nobj;
  auto id_of = [&](int a, int b, int x) { return (a * nobj + b) * group_order + x; };
  const int n = nobj * nobj * group_order;
  G.src.resize(n);
  G.tgt.resize(n);
  G.inv.resize(n);
  G.comp.assign(n, std::vector<int>(n, -1));
  for (int a = 0; a < nobj; ++a)
    for (int b = 0; b < nobj; ++b)
      for (int x = 0; x < group_order; ++x) {
        int f = id_of(a, b, x);
        G.src[f] = a;
        G.tgt[f] = b;
        G.inv[f] = id_of(b, a, invert(x));
        for (int c = 0; c < nobj; ++c)
          for (int y = 0; y < group_order; ++y) G.comp[id_of(b, c, y)][f] = id_of(a, c, mult(y, x));
      }
  for (int a = 0; a < nobj; ++a) G.ident.push_back(id_of(a, a, 0));
  return G;
}

}  // namespace

Groupoid Groupoid::discrete(int n) {
  Groupoid G;
  G.nobj = n;
  G.comp.assign(n, std::vector<int>(n, -1));
  for (int a = 0; a < n; ++a) {
    G.src.push_back(a);
    G.tgt.push_back(a);
    G.inv.push_back(a);
    G.ident.push_back(a);
    G.comp[a][a] = a;
  }
  return G;
}

Groupoid Groupoid::cyclic(int k) {
  return from_product(1, k, [k](int y, int x) { return (x + y) % k; }, [k](int x) { return (k - x) % k; });
}

Groupoid Groupoid::codiscrete(int n) {
  return from_product(n, 1, [](int, int) { return 0; }, [](int) { return 0; });
}

void validate(const Groupoid& G) {
  const int n = G.narrows();
  if (static_cast<int>(G.tgt.size()) != n || static_cast<int>(G.inv.size()) != n ||
      static_cast<int>(G.comp.size()) != n || static_cast<int>(G.ident.size()) != G.nobj)
    throw DomainError("groupoid: table sizes disagree");
  for (int f = 0; f < n; ++f)
    for (int g = 0; g < n; ++g) {
      int h = G.comp[g][f];
      if ((h >= 0) != (G.src[g] == G.tgt[f])) throw DomainError("groupoid: composability mismatch");
      if (h >= 0 && (G.src[h] != G.src[f] || G.tgt[h] != G.tgt[g]))
        throw DomainError("groupoid: composite has the wrong ends");
    }
  for (int a = 0; a < G.nobj; ++a) {
    int e = G.ident[a];
    if (G.src[e] != a || G.tgt[e] != a) throw DomainError("groupoid: identity has the wrong ends");
    for (int f = 0; f < n; ++f) {
      if (G.src[f] == a && G.comp[f][e] != f) throw DomainError("groupoid: right unit law fails");
      if (G.tgt[f] == a && G.comp[e][f] != f) throw DomainError("groupoid: left unit law fails");
    }
  }
  for (int f = 0; f < n; ++f) {
    if (G.comp[G.inv[f]][f] != G.ident[G.src[f]] || G.comp[f][G.inv[f]] != G.ident[G.tgt[f]])
      throw DomainError("groupoid: arrow " + std::to_string(f + 1) + " has no inverse");
    for (int g = 0; g < n; ++g) {
      if (G.comp[g][f] < 0) continue;
      for (int h = 0; h < n; ++h)
        if (G.comp[h][g] >= 0 && G.comp[h][G.comp[g][f]] != G.comp[G.comp[h][g]][f])
          throw DomainError("groupoid: composition is not associative");
    }
  }
}

}  // namespace ufckit
