#include "ufckit/finset.hpp"

#include <boost/pending/disjoint_sets.hpp>

#include <algorithm>
#include <numeric>
#include <sstream>

namespace ufckit {

FinMap::FinMap(int cod_, std::vector<int> img_) : cod(cod_), img(std::move(img_)) {
  if (cod < 0) throw DomainError("FinMap: negative codomain");
  for (int x : img)
    if (x < 0 || x >= cod)
      throw DomainError("FinMap: entry " + std::to_string(x + 1) + " outside [1," +
                        std::to_string(cod) + "]");
}

FinMap FinMap::identity(int n) {
  std::vector<int> v(n);
  std::iota(v.begin(), v.end(), 0);
  return FinMap(n, std::move(v));
}

bool FinMap::is_bijection() const { return dom() == cod && is_injection(); }

bool FinMap::is_surjection() const {
  std::vector<char> hit(cod, 0);
  for (int x : img) hit[x] = 1;
  return std::all_of(hit.begin(), hit.end(), [](char c) { return c != 0; });
}

bool FinMap::is_injection() const {
  std::vector<char> hit(cod, 0);
  for (int x : img) {
    if (hit[x]) return false;
    hit[x] = 1;
  }
  return true;
}

FinMap FinMap::inverse() const {
  if (!is_bijection()) throw DomainError("FinMap::inverse: not a bijection");
  std::vector<int> v(cod);
  for (int i = 0; i < dom(); ++i) v[img[i]] = i;
  return FinMap(dom(), std::move(v));
}

FinMap compose(const FinMap& g, const FinMap& f) {
  if (f.cod != g.dom())
    throw DomainError("compose: codomain " + std::to_string(f.cod) + " vs domain " +
                      std::to_string(g.dom()));
  std::vector<int> v(f.dom());
  for (int i = 0; i < f.dom(); ++i) v[i] = g(f(i));
  return FinMap(g.cod, std::move(v));
}

FinMap coproduct(const FinMap& f, const FinMap& g) {
  std::vector<int> v = f.img;
  for (int x : g.img) v.push_back(x + f.cod);
  return FinMap(f.cod + g.cod, std::move(v));
}

Partition Partition::from_labels(const std::vector<int>& label) {
  Partition p;
  p.ground = static_cast<int>(label.size());
  std::vector<int> slot;
  std::vector<int> seen;
  for (int i = 0; i < p.ground; ++i) {
    auto it = std::find(seen.begin(), seen.end(), label[i]);
    if (it == seen.end()) {
      seen.push_back(label[i]);
      p.blocks.push_back({i});
    } else {
      p.blocks[it - seen.begin()].push_back(i);
    }
  }
  return p;
}

bool Partition::valid() const {
  std::vector<int> hit(ground, 0);
  for (const auto& b : blocks) {
    if (b.empty()) return false;
    for (int x : b) {
      if (x < 0 || x >= ground || hit[x]++) return false;
    }
  }
  return std::all_of(hit.begin(), hit.end(), [](int c) { return c == 1; });
}

UnionFind::UnionFind(int n) : rank_(n, 0), parent_(n) {
  std::iota(parent_.begin(), parent_.end(), 0);
}

int UnionFind::find(int x) {
  boost::disjoint_sets<int*, int*> ds(rank_.data(), parent_.data());
  return ds.find_set(x);
}

void UnionFind::unite(int a, int b) {
  boost::disjoint_sets<int*, int*> ds(rank_.data(), parent_.data());
  ds.union_set(a, b);
}

std::vector<int> UnionFind::classes(int* count) {
  int n = size();
  std::vector<int> rep_label(n, -1), label(n);
  int next = 0;
  for (int x = 0; x < n; ++x) {
    int r = find(x);
    if (rep_label[r] < 0) rep_label[r] = next++;
    label[x] = rep_label[r];
  }
  if (count) *count = next;
  return label;
}

PushoutResult pushout(int k1, int k2, const std::vector<std::pair<int, int>>& glue) {
  if (k1 < 0 || k2 < 0) throw DomainError("pushout: negative size");
  UnionFind uf(k1 + k2);
  for (auto [a, b] : glue) {
    if (a < 0 || a >= k1 || b < 0 || b >= k2)
      throw DomainError("pushout: glue pair (" + std::to_string(a + 1) + "," +
                        std::to_string(b + 1) + ") out of range");
    uf.unite(a, k1 + b);
  }
  PushoutResult r;
  auto label = uf.classes(&r.u);
  r.p1 = FinMap(r.u, std::vector<int>(label.begin(), label.begin() + k1));
  r.p2 = FinMap(r.u, std::vector<int>(label.begin() + k1, label.end()));
  return r;
}

PullbackResult pullback(const FinMap& f, const FinMap& g) {
  if (f.cod != g.cod)
    throw DomainError("pullback: codomains " + std::to_string(f.cod) + " and " +
                      std::to_string(g.cod) + " differ");
  std::vector<int> a, b;
  for (int i = 0; i < f.dom(); ++i)
    for (int j = 0; j < g.dom(); ++j)
      if (f(i) == g(j)) {
        a.push_back(i);
        b.push_back(j);
      }
  PullbackResult r;
  r.p = static_cast<int>(a.size());
  r.pi1 = FinMap(f.dom(), std::move(a));
  r.pi2 = FinMap(g.dom(), std::move(b));
  return r;
}

std::vector<std::vector<int>> fibers(const FinMap& f) {
  std::vector<std::vector<int>> out(f.cod);
  for (int i = 0; i < f.dom(); ++i) out[f(i)].push_back(i);
  return out;
}

std::string to_string(const std::vector<int>& v) {
  if (v.empty()) return "-";
  std::ostringstream os;
  for (size_t i = 0; i < v.size(); ++i) os << (i ? " " : "") << v[i] + 1;
  return os.str();
}

std::vector<int> parse_list(const std::string& text) {
  std::istringstream is(text);
  std::vector<int> out;
  std::string tok;
  while (is >> tok) {
    if (tok == "-") continue;
    size_t pos = 0;
    int x = 0;
    try {
      x = std::stoi(tok, &pos);
    } catch (const std::exception&) {
      throw DomainError("expected a number, got '" + tok + "'");
    }
    if (pos != tok.size() || x < 1) throw DomainError("expected a positive index, got '" + tok + "'");
    out.push_back(x - 1);
  }
  return out;
}

}  // namespace ufckit
