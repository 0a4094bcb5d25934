#include "ufckit/instances.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <numeric>
#include <sstream>

namespace ufckit {

namespace {

std::vector<std::string> split_slash(const std::string& text) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : text) {
    if (c == '/') {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(cur);
  return parts;
}

std::vector<int> parse_sizes(const std::string& text, size_t want, const std::string& what) {
  std::istringstream is(text);
  std::vector<int> out;
  int x;
  while (is >> x) {
    if (x < 0) throw DomainError(what + ": negative size");
    out.push_back(x);
  }
  if (out.size() != want || !(is.eof()))
    throw DomainError(what + ": expected " + std::to_string(want) + " sizes in '" + text + "'");
  return out;
}

FinMap checked_map(const std::vector<int>& img, int dom, int cod, const std::string& what) {
  if (static_cast<int>(img.size()) != dom)
    throw DomainError(what + ": expected " + std::to_string(dom) + " entries, got " +
                      std::to_string(img.size()));
  return FinMap(cod, img);
}

int rand_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

FinMap random_map(Rng& rng, int dom, int cod) {
  std::vector<int> v(dom);
  for (auto& x : v) x = rand_int(rng, 0, cod - 1);
  return FinMap(cod, v);
}

FinMap random_perm(Rng& rng, int n) {
  std::vector<int> v(n);
  std::iota(v.begin(), v.end(), 0);
  std::shuffle(v.begin(), v.end(), rng);
  return FinMap(n, v);
}

std::vector<FinMap> all_maps(int dom, int cod) {
  std::vector<FinMap> out;
  if (dom > 0 && cod == 0) return out;
  std::vector<int> v(dom, 0);
  while (true) {
    out.emplace_back(cod, v);
    int i = dom - 1;
    while (i >= 0 && v[i] == cod - 1) v[i--] = 0;
    if (i < 0) break;
    ++v[i];
  }
  return out;
}

std::vector<FinMap> all_perms(int n) {
  std::vector<int> v(n);
  std::iota(v.begin(), v.end(), 0);
  std::vector<FinMap> out;
  do out.emplace_back(n, v);
  while (std::next_permutation(v.begin(), v.end()));
  return out;
}

/// Local positions of a restricted set of ports inside the concatenation of factors.
FinMap block_offsets_perm(const std::vector<int>& assign) {
  return sorting_permutation(assign);
}

}  // namespace

FinMap sorting_permutation(const std::vector<int>& key) {
  std::vector<int> idx(key.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return key[a] < key[b]; });
  std::vector<int> rank(key.size());
  for (size_t r = 0; r < idx.size(); ++r) rank[idx[r]] = static_cast<int>(r);
  return FinMap(static_cast<int>(key.size()), rank);
}

std::vector<std::vector<int>> restricted_growth_strings(int n) {
  std::vector<std::vector<int>> out;
  std::vector<int> a(n, 0);
  std::function<void(int, int)> rec = [&](int i, int mx) {
    if (i == n) {
      out.push_back(a);
      return;
    }
    for (int v = 0; v <= mx + 1; ++v) {
      a[i] = v;
      rec(i + 1, std::max(mx, v));
    }
  };
  if (n == 0) {
    out.push_back({});
    return out;
  }
  a[0] = 0;
  rec(1, 0);
  return out;
}

FinMap block_swap(int n, int m) {
  std::vector<int> v(n + m);
  for (int i = 0; i < n; ++i) v[i] = i + m;
  for (int j = 0; j < m; ++j) v[n + j] = j;
  return FinMap(n + m, v);
}

// ---------------------------------------------------------------- cospans

Cospan canonical(Cospan c) {
  std::vector<int> relabel(c.k, -1);
  int next = 0;
  for (int x : c.l.img)
    if (relabel[x] < 0) relabel[x] = next++;
  for (int x : c.r.img)
    if (relabel[x] < 0) relabel[x] = next++;
  for (auto& x : relabel)
    if (x < 0) x = next++;
  for (auto& x : c.l.img) x = relabel[x];
  for (auto& x : c.r.img) x = relabel[x];
  return c;
}

Cospan make_cospan(int m, int n, int k, FinMap l, FinMap r) {
  if (l.dom() != m || r.dom() != n || l.cod != k || r.cod != k)
    throw DomainError("cospan: leg sizes do not match (m,n,k)");
  return canonical(Cospan{m, n, k, std::move(l), std::move(r)});
}

Cospan cospan_identity(int n) { return make_cospan(n, n, n, FinMap::identity(n), FinMap::identity(n)); }

Cospan cospan_compose(const Cospan& g, const Cospan& f) {
  if (f.n != g.m)
    throw DomainError("cospan compose: target " + std::to_string(f.n) + " of first vs source " +
                      std::to_string(g.m) + " of second");
  std::vector<std::pair<int, int>> glue;
  for (int c = 0; c < f.n; ++c) glue.emplace_back(f.r(c), g.l(c));
  auto po = pushout(f.k, g.k, glue);
  return make_cospan(f.m, g.n, po.u, compose(po.p1, f.l), compose(po.p2, g.r));
}

Cospan cospan_tensor(const Cospan& f, const Cospan& g) {
  return make_cospan(f.m + g.m, f.n + g.n, f.k + g.k, coproduct(f.l, g.l), coproduct(f.r, g.r));
}

Cospan cospan_permutation(const FinMap& pi) {
  int n = pi.dom();
  return make_cospan(n, n, n, FinMap::identity(n), pi.inverse());
}

Decomposition cospan_connected_decompose(const Cospan& f) {
  Decomposition d;
  auto sf = fibers(f.l), tf = fibers(f.r);
  for (int v = 0; v < f.k; ++v) {
    int a = static_cast<int>(sf[v].size()), b = static_cast<int>(tf[v].size());
    d.factors.push_back(make_cospan(a, b, 1, FinMap(1, std::vector<int>(a, 0)),
                                    FinMap(1, std::vector<int>(b, 0))));
  }
  d.src_assign = f.l;
  d.tgt_assign = f.r;
  d.left_iso = cospan_permutation(block_offsets_perm(f.l.img));
  d.right_iso = cospan_permutation(block_offsets_perm(f.r.img).inverse());
  return d;
}

// ---------------------------------------------------------------- spans

Span make_span(int m, int n, FinMap l, FinMap r) {
  if (l.cod != m || r.cod != n || l.dom() != r.dom())
    throw DomainError("span: leg sizes do not match (m,n,k)");
  int k = l.dom();
  std::vector<std::pair<int, int>> pairs;
  for (int c = 0; c < k; ++c) pairs.emplace_back(l(c), r(c));
  std::sort(pairs.begin(), pairs.end());
  Span s{m, n, k, FinMap(m, {}), FinMap(n, {})};
  for (auto [a, b] : pairs) {
    s.l.img.push_back(a);
    s.r.img.push_back(b);
  }
  return s;
}

Span span_compose(const Span& g, const Span& f) {
  if (f.n != g.m)
    throw DomainError("span compose: target " + std::to_string(f.n) + " of first vs source " +
                      std::to_string(g.m) + " of second");
  auto pb = pullback(f.r, g.l);
  return make_span(f.m, g.n, compose(f.l, pb.pi1), compose(g.r, pb.pi2));
}

Span span_tensor(const Span& f, const Span& g) {
  return make_span(f.m + g.m, f.n + g.n, coproduct(f.l, g.l), coproduct(f.r, g.r));
}

Decomposition span_connected_decompose(const Span& f) {
  UnionFind uf(f.m + f.n);
  for (int c = 0; c < f.k; ++c) uf.unite(f.l(c), f.m + f.r(c));
  int u = 0;
  auto cls = uf.classes(&u);
  std::vector<int> sa(cls.begin(), cls.begin() + f.m), ta(cls.begin() + f.m, cls.end());
  Decomposition d;
  d.src_assign = FinMap(u, sa);
  d.tgt_assign = FinMap(u, ta);
  auto S = fibers(d.src_assign), T = fibers(d.tgt_assign);
  for (int w = 0; w < u; ++w) {
    std::vector<int> ls, rs;
    for (int c = 0; c < f.k; ++c) {
      if (sa[f.l(c)] != w) continue;
      ls.push_back(static_cast<int>(std::find(S[w].begin(), S[w].end(), f.l(c)) - S[w].begin()));
      rs.push_back(static_cast<int>(std::find(T[w].begin(), T[w].end(), f.r(c)) - T[w].begin()));
    }
    int a = static_cast<int>(S[w].size()), b = static_cast<int>(T[w].size());
    d.factors.push_back(make_span(a, b, FinMap(a, ls), FinMap(b, rs)));
  }
  auto perm = [](const FinMap& pi) -> Morphism {
    int n = pi.dom();
    return make_span(n, n, FinMap::identity(n), pi);
  };
  d.left_iso = perm(sorting_permutation(sa));
  d.right_iso = perm(sorting_permutation(ta).inverse());
  return d;
}

// ---------------------------------------------------------------- ties

std::vector<int> TiesMor::untied() const {
  std::vector<int> out;
  for (int y = 0; y < n(); ++y)
    if (tie[y] < 0) out.push_back(y);
  return out;
}

std::vector<std::vector<int>> TiesMor::blocks() const {
  int nb = 0;
  for (int t : tie) nb = std::max(nb, t + 1);
  std::vector<std::vector<int>> out(nb);
  for (int y = 0; y < n(); ++y)
    if (tie[y] >= 0) out[tie[y]].push_back(y);
  return out;
}

TiesMor make_ties(FinMap perm, std::vector<int> tie) {
  if (!perm.is_bijection()) throw DomainError("ties: first component is not a permutation");
  if (static_cast<int>(tie.size()) != perm.dom()) throw DomainError("ties: tie has wrong length");
  std::map<int, int> relabel;
  for (auto& t : tie) {
    if (t < 0) {
      t = -1;
      continue;
    }
    auto it = relabel.find(t);
    if (it == relabel.end()) it = relabel.emplace(t, static_cast<int>(relabel.size())).first;
    t = it->second;
  }
  return TiesMor{std::move(perm), std::move(tie)};
}

TiesMor ties_compose(const TiesMor& g, const TiesMor& f) {
  if (f.n() != g.n())
    throw DomainError("ties compose: sizes " + std::to_string(f.n()) + " and " +
                      std::to_string(g.n()) + " differ");
  int n = f.n();
  std::vector<int> pushed(n);
  for (int x = 0; x < n; ++x) pushed[g.perm(x)] = f.tie[x];
  std::map<std::pair<int, int>, int> key;
  std::vector<int> tie(n);
  for (int y = 0; y < n; ++y) {
    if (pushed[y] < 0 && g.tie[y] < 0) {
      tie[y] = -1;
      continue;
    }
    auto k = std::make_pair(pushed[y], g.tie[y]);
    auto it = key.find(k);
    if (it == key.end()) it = key.emplace(k, static_cast<int>(key.size())).first;
    tie[y] = it->second;
  }
  return make_ties(compose(g.perm, f.perm), tie);
}

TiesMor ties_tensor(const TiesMor& f, const TiesMor& g) {
  int off = 0;
  for (int t : f.tie) off = std::max(off, t + 1);
  auto tie = f.tie;
  for (int t : g.tie) tie.push_back(t < 0 ? -1 : t + off);
  return make_ties(coproduct(f.perm, g.perm), tie);
}

Decomposition ties_decompose(const TiesMor& f) {
  int n = f.n();
  std::vector<int> factor(n);
  std::map<int, int> block_factor;
  int next = 0;
  Decomposition d;
  for (int y = 0; y < n; ++y) {
    if (f.tie[y] < 0) {
      factor[y] = next++;
      d.factors.push_back(make_ties(FinMap::identity(1), {-1}));
      continue;
    }
    auto it = block_factor.find(f.tie[y]);
    if (it == block_factor.end()) {
      it = block_factor.emplace(f.tie[y], next++).first;
      int size = static_cast<int>(std::count(f.tie.begin(), f.tie.end(), f.tie[y]));
      d.factors.push_back(make_ties(FinMap::identity(size), std::vector<int>(size, 0)));
    }
    factor[y] = it->second;
  }
  auto Pt = sorting_permutation(factor);
  std::vector<int> sa(n);
  for (int x = 0; x < n; ++x) sa[x] = factor[f.perm(x)];
  d.src_assign = FinMap(next, sa);
  d.tgt_assign = FinMap(next, factor);
  d.left_iso = make_ties(compose(Pt, f.perm), std::vector<int>(n, -1));
  d.right_iso = make_ties(Pt.inverse(), std::vector<int>(n, -1));
  return d;
}

// ---------------------------------------------------------------- finset

FinSetMor finset_compose(const FinSetMor& g, const FinSetMor& f) {
  if (f.f.cod != g.f.dom())
    throw DomainError("finset compose: target " + std::to_string(f.f.cod) + " of first vs source " +
                      std::to_string(g.f.dom()) + " of second");
  return FinSetMor{compose(g.f, f.f)};
}

Decomposition finset_decompose(const FinSetMor& f) {
  Decomposition d;
  for (const auto& fib : fibers(f.f))
    d.factors.push_back(FinSetMor{FinMap(1, std::vector<int>(fib.size(), 0))});
  d.src_assign = f.f;
  d.tgt_assign = FinMap::identity(f.f.cod);
  d.left_iso = FinSetMor{sorting_permutation(f.f.img)};
  d.right_iso = FinSetMor{FinMap::identity(f.f.cod)};
  return d;
}

// ---------------------------------------------------------------- instances

namespace {

template <class T>
const T& as(const Morphism& f, const char* inst) {
  if (auto p = std::get_if<T>(&f)) return *p;
  throw DomainError(std::string("morphism does not belong to instance ") + inst);
}

class CospanInstance final : public Instance {
 public:
  std::string name() const override { return "cospan"; }
  int src(const Morphism& f) const override { return c(f).m; }
  int tgt(const Morphism& f) const override { return c(f).n; }
  Morphism identity(int n) const override { return cospan_identity(n); }
  Morphism compose(const Morphism& g, const Morphism& f) const override {
    return cospan_compose(c(g), c(f));
  }
  Morphism tensor(const Morphism& f, const Morphism& g) const override {
    return cospan_tensor(c(f), c(g));
  }
  Morphism permutation(const FinMap& pi) const override { return cospan_permutation(pi); }
  std::optional<FinMap> as_permutation(const Morphism& f) const override {
    const auto& x = c(f);
    if (x.m != x.n || x.k != x.m || !x.l.is_bijection() || !x.r.is_bijection()) return std::nullopt;
    return ufckit::compose(x.r.inverse(), x.l);
  }
  Decomposition decompose(const Morphism& f) const override {
    return cospan_connected_decompose(c(f));
  }
  Morphism parse(const std::string& text) const override {
    auto p = split_slash(text);
    if (p.size() != 3) throw DomainError("cospan literal must be 'm n k / l / r': '" + text + "'");
    auto s = parse_sizes(p[0], 3, "cospan literal");
    return make_cospan(s[0], s[1], s[2], checked_map(parse_list(p[1]), s[0], s[2], "cospan l"),
                       checked_map(parse_list(p[2]), s[1], s[2], "cospan r"));
  }
  std::string print(const Morphism& f) const override {
    const auto& x = c(f);
    return std::to_string(x.m) + " " + std::to_string(x.n) + " " + std::to_string(x.k) + " / " +
           to_string(x.l.img) + " / " + to_string(x.r.img);
  }
  std::vector<Morphism> hom(int m, int n, int bound) const override {
    std::vector<Morphism> out;
    for (const auto& rgs : restricted_growth_strings(m + n)) {
      int used = rgs.empty() ? 0 : *std::max_element(rgs.begin(), rgs.end()) + 1;
      for (int extra = 0; extra <= 1 && used + extra <= std::max(bound, used); ++extra) {
        int k = used + extra;
        out.push_back(make_cospan(m, n, k, FinMap(k, {rgs.begin(), rgs.begin() + m}),
                                  FinMap(k, {rgs.begin() + m, rgs.end()})));
      }
    }
    return out;
  }
  bool has_morphisms(int, int) const override { return true; }
  Morphism random(int m, int n, Rng& rng) const override {
    int k = rand_int(rng, (m + n) > 0 ? 1 : 0, m + n + 1);
    return make_cospan(m, n, k, random_map(rng, m, k), random_map(rng, n, k));
  }

 private:
  static const Cospan& c(const Morphism& f) { return as<Cospan>(f, "cospan"); }
};

/// Spans; with `surjective` set, the subcategory of spans whose legs are both onto.
class SpanInstance final : public Instance {
 public:
  explicit SpanInstance(bool surjective) : surjective_(surjective) {}
  std::string name() const override { return surjective_ ? "span_surj" : "span"; }
  int src(const Morphism& f) const override { return s(f).m; }
  int tgt(const Morphism& f) const override { return s(f).n; }
  Morphism identity(int n) const override {
    return make_span(n, n, FinMap::identity(n), FinMap::identity(n));
  }
  Morphism compose(const Morphism& g, const Morphism& f) const override {
    return span_compose(s(g), s(f));
  }
  Morphism tensor(const Morphism& f, const Morphism& g) const override {
    return span_tensor(s(f), s(g));
  }
  Morphism permutation(const FinMap& pi) const override {
    int n = pi.dom();
    return make_span(n, n, FinMap::identity(n), pi);
  }
  std::optional<FinMap> as_permutation(const Morphism& f) const override {
    const auto& x = s(f);
    if (x.m != x.n || x.k != x.m || !x.l.is_bijection() || !x.r.is_bijection()) return std::nullopt;
    return ufckit::compose(x.r, x.l.inverse());
  }
  Decomposition decompose(const Morphism& f) const override {
    return span_connected_decompose(s(f));
  }
  Morphism parse(const std::string& text) const override {
    auto p = split_slash(text);
    if (p.size() != 3) throw DomainError("span literal must be 'm n k / l / r': '" + text + "'");
    auto z = parse_sizes(p[0], 3, "span literal");
    auto x = make_span(z[0], z[1], checked_map(parse_list(p[1]), z[2], z[0], "span l"),
                       checked_map(parse_list(p[2]), z[2], z[1], "span r"));
    if (surjective_ && !(x.l.is_surjection() && x.r.is_surjection()))
      throw DomainError("span_surj: legs must be surjective: '" + text + "'");
    return x;
  }
  std::string print(const Morphism& f) const override {
    const auto& x = s(f);
    return std::to_string(x.m) + " " + std::to_string(x.n) + " " + std::to_string(x.k) + " / " +
           to_string(x.l.img) + " / " + to_string(x.r.img);
  }
  std::vector<Morphism> hom(int m, int n, int bound) const override {
    std::vector<Morphism> out;
    int cells = m * n;
    // multisets of (a,b) pairs of size <= bound, as non-decreasing index sequences
    std::vector<int> seq;
    std::function<void(int)> rec = [&](int start) {
      std::vector<int> l, r;
      for (int x : seq) {
        l.push_back(x / n);
        r.push_back(x % n);
      }
      FinMap lm(m, l), rm(n, r);
      if (!surjective_ || (lm.is_surjection() && rm.is_surjection()))
        out.push_back(make_span(m, n, std::move(lm), std::move(rm)));
      if (static_cast<int>(seq.size()) == bound) return;
      for (int x = start; x < cells; ++x) {
        seq.push_back(x);
        rec(x);
        seq.pop_back();
      }
    };
    rec(0);
    return out;
  }
  bool has_morphisms(int m, int n) const override { return !surjective_ || (m == 0) == (n == 0); }
  Morphism random(int m, int n, Rng& rng) const override {
    if (!surjective_) {
      int k = (m == 0 || n == 0) ? 0 : rand_int(rng, 0, std::max(m, n) + 1);
      return make_span(m, n, random_map(rng, k, m), random_map(rng, k, n));
    }
    if (!has_morphisms(m, n))
      throw DomainError("span_surj: no morphisms " + std::to_string(m) + " -> " + std::to_string(n));
    int k = m == 0 ? 0 : rand_int(rng, std::max(m, n), std::max(m, n) + 1);
    return make_span(m, n, random_onto(rng, k, m), random_onto(rng, k, n));
  }

 private:
  bool surjective_;
  static const Span& s(const Morphism& f) { return as<Span>(f, "span"); }
  // k >= n: every target hit, the rest uniform.
  static FinMap random_onto(Rng& rng, int k, int n) {
    std::vector<int> img(k);
    for (int i = 0; i < k; ++i) img[i] = i < n ? i : rand_int(rng, 0, n - 1);
    std::shuffle(img.begin(), img.end(), rng);
    return FinMap(n, img);
  }
};

class FinSetInstance final : public Instance {
 public:
  std::string name() const override { return "finset"; }
  int src(const Morphism& f) const override { return m(f).f.dom(); }
  int tgt(const Morphism& f) const override { return m(f).f.cod; }
  Morphism identity(int n) const override { return FinSetMor{FinMap::identity(n)}; }
  Morphism compose(const Morphism& g, const Morphism& f) const override {
    return finset_compose(m(g), m(f));
  }
  Morphism tensor(const Morphism& f, const Morphism& g) const override {
    return FinSetMor{coproduct(m(f).f, m(g).f)};
  }
  Morphism permutation(const FinMap& pi) const override { return FinSetMor{pi}; }
  std::optional<FinMap> as_permutation(const Morphism& f) const override {
    if (!m(f).f.is_bijection()) return std::nullopt;
    return m(f).f;
  }
  Decomposition decompose(const Morphism& f) const override { return finset_decompose(m(f)); }
  Morphism parse(const std::string& text) const override {
    auto p = split_slash(text);
    if (p.size() != 2) throw DomainError("finset literal must be 'm n / img': '" + text + "'");
    auto z = parse_sizes(p[0], 2, "finset literal");
    return FinSetMor{checked_map(parse_list(p[1]), z[0], z[1], "finset img")};
  }
  std::string print(const Morphism& f) const override {
    const auto& x = m(f).f;
    return std::to_string(x.dom()) + " " + std::to_string(x.cod) + " / " + to_string(x.img);
  }
  std::vector<Morphism> hom(int a, int b, int) const override {
    std::vector<Morphism> out;
    for (auto& f : all_maps(a, b)) out.push_back(FinSetMor{f});
    return out;
  }
  bool has_morphisms(int a, int b) const override { return a == 0 || b > 0; }
  Morphism random(int a, int b, Rng& rng) const override {
    if (!has_morphisms(a, b)) throw DomainError("finset: no maps " + std::to_string(a) + " -> 0");
    return FinSetMor{random_map(rng, a, b)};
  }

 private:
  static const FinSetMor& m(const Morphism& f) { return as<FinSetMor>(f, "finset"); }
};

class TiesInstance final : public Instance {
 public:
  std::string name() const override { return "ties"; }
  int src(const Morphism& f) const override { return t(f).n(); }
  int tgt(const Morphism& f) const override { return t(f).n(); }
  Morphism identity(int n) const override {
    return make_ties(FinMap::identity(n), std::vector<int>(n, -1));
  }
  Morphism compose(const Morphism& g, const Morphism& f) const override {
    return ties_compose(t(g), t(f));
  }
  Morphism tensor(const Morphism& f, const Morphism& g) const override {
    return ties_tensor(t(f), t(g));
  }
  Morphism permutation(const FinMap& pi) const override {
    return make_ties(pi, std::vector<int>(pi.dom(), -1));
  }
  std::optional<FinMap> as_permutation(const Morphism& f) const override {
    const auto& x = t(f);
    if (std::any_of(x.tie.begin(), x.tie.end(), [](int v) { return v >= 0; })) return std::nullopt;
    return x.perm;
  }
  Decomposition decompose(const Morphism& f) const override { return ties_decompose(t(f)); }
  Morphism parse(const std::string& text) const override {
    auto p = split_slash(text);
    if (p.size() != 4)
      throw DomainError("ties literal must be 'n / perm / untied / blocks': '" + text + "'");
    int n = parse_sizes(p[0], 1, "ties literal")[0];
    auto perm = checked_map(parse_list(p[1]), n, n, "ties perm");
    std::vector<int> tie(n, -2);
    for (int y : parse_list(p[2])) {
      if (y >= n) throw DomainError("ties: untied element out of range");
      tie[y] = -1;
    }
    int b = 0;
    std::string blocks = p[3];
    size_t i = 0;
    auto skip = [&] {
      while (i < blocks.size() && std::isspace(static_cast<unsigned char>(blocks[i]))) ++i;
    };
    skip();
    if (i < blocks.size() && blocks[i] == '-') {
      ++i;
      skip();
    }
    while (i < blocks.size()) {
      if (blocks[i] != '{') throw DomainError("ties: expected '{' in blocks '" + blocks + "'");
      size_t j = blocks.find('}', i);
      if (j == std::string::npos) throw DomainError("ties: unterminated block in '" + blocks + "'");
      std::string inner = blocks.substr(i + 1, j - i - 1);
      std::replace(inner.begin(), inner.end(), ',', ' ');
      auto elems = parse_list(inner);
      if (elems.empty()) throw DomainError("ties: empty block");
      for (int y : elems) {
        if (y >= n || tie[y] != -2) throw DomainError("ties: element " + std::to_string(y + 1) +
                                                      " repeated or out of range");
        tie[y] = b;
      }
      ++b;
      i = j + 1;
      skip();
    }
    for (int y = 0; y < n; ++y)
      if (tie[y] == -2)
        throw DomainError("ties: element " + std::to_string(y + 1) + " neither untied nor tied");
    return make_ties(perm, tie);
  }
  std::string print(const Morphism& f) const override {
    const auto& x = t(f);
    std::string blocks;
    for (const auto& b : x.blocks()) {
      blocks += "{";
      for (size_t i = 0; i < b.size(); ++i) blocks += (i ? "," : "") + std::to_string(b[i] + 1);
      blocks += "}";
    }
    if (blocks.empty()) blocks = "-";
    return std::to_string(x.n()) + " / " + to_string(x.perm.img) + " / " + to_string(x.untied()) +
           " / " + blocks;
  }
  std::vector<Morphism> hom(int m, int n, int) const override {
    std::vector<Morphism> out;
    if (m != n) return out;
    auto parts = restricted_growth_strings(n + 1);
    for (const auto& p : all_perms(n))
      for (const auto& rgs : parts) {
        std::vector<int> tie(n);
        for (int y = 0; y < n; ++y) tie[y] = rgs[y] == rgs[n] ? -1 : rgs[y];
        out.push_back(make_ties(p, tie));
      }
    return out;
  }
  bool has_morphisms(int a, int b) const override { return a == b; }
  Morphism random(int a, int b, Rng& rng) const override {
    if (a != b) throw DomainError("ties: no morphisms between different sizes");
    std::vector<int> tie(a);
    for (auto& x : tie) x = rand_int(rng, -1, a - 1);
    return make_ties(random_perm(rng, a), tie);
  }

 private:
  static const TiesMor& t(const Morphism& f) { return as<TiesMor>(f, "ties"); }
};

}  // namespace

const Instance& get_instance(const std::string& name) {
  static const CospanInstance cospan;
  static const SpanInstance span(false);
  static const SpanInstance span_surj(true);
  static const FinSetInstance finset;
  static const TiesInstance ties;
  if (name == "cospan") return cospan;
  if (name == "span") return span;
  if (name == "span_surj") return span_surj;
  if (name == "finset") return finset;
  if (name == "ties") return ties;
  throw DomainError("unknown instance '" + name + "'");
}

std::vector<std::string> instance_names() { return {"cospan", "span", "span_surj", "finset", "ties"}; }

// ---------------------------------------------------------------- generic

Morphism Instance::inverse(const Morphism& iso) const {
  auto p = as_permutation(iso);
  if (!p) throw DomainError("not an isomorphism: " + print(iso));
  return permutation(p->inverse());
}

Morphism Instance::tensor_all(const std::vector<Morphism>& fs) const {
  Morphism acc = identity(0);
  for (const auto& f : fs) acc = tensor(acc, f);
  return acc;
}

Morphism Instance::reassemble(const Decomposition& d) const {
  return compose(d.right_iso, compose(tensor_all(d.factors), d.left_iso));
}

Morphism Instance::braiding(int a, int b) const { return permutation(block_swap(a, b)); }

Morphism iso_act(const Instance& I, const TwoCell& cell, const Morphism& f) {
  if (!I.is_iso(cell.sigma) || !I.is_iso(cell.sigma_prime))
    throw DomainError("iso_act: 2-cell components must be isomorphisms");
  if (I.src(cell.sigma) != I.src(f) || I.src(cell.sigma_prime) != I.tgt(f))
    throw DomainError("iso_act: boundary mismatch for " + I.print(f));
  return I.compose(cell.sigma_prime, I.compose(f, I.inverse(cell.sigma)));
}

DegreeData degree_data(const Instance& I, const Morphism& f) {
  DegreeData d;
  d.src = I.src(f);
  d.tgt = I.tgt(f);
  d.degree = d.src - d.tgt;
  d.depth = static_cast<int>(I.decompose(f).factors.size());
  return d;
}

}  // namespace ufckit
