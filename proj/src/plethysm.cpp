#include "ufckit/plethysm.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>
#include <tuple>

#include "ufckit/finset.hpp"

namespace ufckit {

namespace {

std::string elt(const Bimodule& B, int e) {
  return e >= 0 && e < static_cast<int>(B.names.size()) ? B.names[e] : "#" + std::to_string(e + 1);
}

Report fail(Report r, const std::string& why) {
  r.ok = false;
  r.witness = why;
  return r;
}

}  // namespace

// ---------------------------------------------------------------------------
// Finite categories

int FiniteCategory::compose(int g, int f) const {
  int h = comp.at(g).at(f);
  if (h < 0) throw DomainError("category: " + names[g] + " ∘ " + names[f] + " is not composable");
  return h;
}

int FiniteCategory::inverse(int f) const {
  for (int g = 0; g < narrows(); ++g)
    if (src[g] == tgt[f] && tgt[g] == src[f] && comp[g][f] == ident[src[f]] && comp[f][g] == ident[tgt[f]])
      return g;
  return -1;
}

int FiniteCategory::find(const std::string& name) const {
  for (int f = 0; f < narrows(); ++f)
    if (names[f] == name) return f;
  return -1;
}

FiniteCategory parse_category(const std::string& text) {
  FiniteCategory C;
  std::map<std::string, int> objs;
  std::vector<std::tuple<int, std::string, std::string, std::string>> comps;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string kind;
    if (!(ls >> kind)) continue;
    auto where = "table line " + std::to_string(lineno) + ": ";
    if (kind == "obj") {
      std::string x;
      if (!(ls >> x) || objs.count(x)) throw DomainError(where + "expected a new object name");
      int o = C.nobj();
      objs[x] = o;
      C.obj_names.push_back(x);
      C.ident.push_back(C.narrows());
      C.src.push_back(o);
      C.tgt.push_back(o);
      C.names.push_back("1_" + x);
      C.over.push_back("1_" + x);
    } else if (kind == "mor") {
      std::string f, x, y, kw, base;
      if (!(ls >> f >> x >> y)) throw DomainError(where + "expected 'mor name src tgt'");
      if (!objs.count(x) || !objs.count(y)) throw DomainError(where + "unknown object in arrow " + f);
      if (C.find(f) >= 0) throw DomainError(where + "duplicate arrow " + f);
      if (ls >> kw) {
        if (kw != "over" || !(ls >> base)) throw DomainError(where + "expected 'over <base arrow>'");
      }
      C.src.push_back(objs[x]);
      C.tgt.push_back(objs[y]);
      C.names.push_back(f);
      C.over.push_back(base);
    } else if (kind == "comp") {
      std::string g, f, eq, h;
      if (!(ls >> g >> f >> eq >> h) || eq != "=") throw DomainError(where + "expected 'comp g f = h'");
      comps.emplace_back(lineno, g, f, h);
    } else {
      throw DomainError(where + "unknown record '" + kind + "'");
    }
  }
  const int n = C.narrows();
  C.comp.assign(n, std::vector<int>(n, -1));
  for (int f = 0; f < n; ++f) {
    C.comp[C.ident[C.tgt[f]]][f] = f;
    C.comp[f][C.ident[C.src[f]]] = f;
  }
  for (auto& [ln, g, f, h] : comps) {
    auto where = "table line " + std::to_string(ln) + ": ";
    int gi = C.find(g), fi = C.find(f), hi = C.find(h);
    if (gi < 0 || fi < 0 || hi < 0) throw DomainError(where + "unknown arrow in composite");
    if (C.src[gi] != C.tgt[fi]) throw DomainError(where + g + " ∘ " + f + " is not composable");
    if (C.src[hi] != C.src[fi] || C.tgt[hi] != C.tgt[gi]) throw DomainError(where + h + " has the wrong ends");
    int& slot = C.comp[gi][fi];
    if (slot >= 0 && slot != hi) throw DomainError(where + "conflicting composite " + g + " ∘ " + f);
    slot = hi;
  }
  for (int g = 0; g < n; ++g)
    for (int f = 0; f < n; ++f)
      if (C.src[g] == C.tgt[f] && C.comp[g][f] < 0)
        throw DomainError("table: missing composite " + C.names[g] + " ∘ " + C.names[f]);
  validate(C);
  return C;
}

FiniteCategory load_category(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot read table " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_category(ss.str());
}

void validate(const FiniteCategory& C) {
  const int n = C.narrows();
  for (int o = 0; o < C.nobj(); ++o) {
    int e = C.ident[o];
    for (int f = 0; f < n; ++f) {
      if (C.tgt[f] == o && C.comp[e][f] != f) throw DomainError("category: left unit law fails at " + C.names[f]);
      if (C.src[f] == o && C.comp[f][e] != f) throw DomainError("category: right unit law fails at " + C.names[f]);
    }
  }
  for (int f = 0; f < n; ++f)
    for (int g = 0; g < n; ++g) {
      if (C.src[g] != C.tgt[f]) continue;
      int gf = C.comp[g][f];
      for (int h = 0; h < n; ++h)
        if (C.src[h] == C.tgt[g] && C.comp[h][gf] != C.comp[C.comp[h][g]][f])
          throw DomainError("category: composition is not associative at (" + C.names[h] + ", " + C.names[g] + ", " +
                            C.names[f] + ")");
    }
}

IsoGroupoid iso_groupoid(const FiniteCategory& C) {
  IsoGroupoid r;
  Groupoid& G = r.G;
  G.nobj = C.nobj();
  r.from_cat.assign(C.narrows(), -1);
  for (int f = 0; f < C.narrows(); ++f)
    if (C.inverse(f) >= 0) {
      r.from_cat[f] = static_cast<int>(r.to_cat.size());
      r.to_cat.push_back(f);
      G.src.push_back(C.src[f]);
      G.tgt.push_back(C.tgt[f]);
      G.names.push_back(C.names[f]);
    }
  const int k = G.narrows();
  G.comp.assign(k, std::vector<int>(k, -1));
  for (int a = 0; a < k; ++a) {
    G.inv.push_back(r.from_cat[C.inverse(r.to_cat[a])]);
    for (int b = 0; b < k; ++b)
      if (G.src[b] == G.tgt[a]) G.comp[b][a] = r.from_cat[C.comp[r.to_cat[b]][r.to_cat[a]]];
  }
  for (int o = 0; o < C.nobj(); ++o) G.ident.push_back(r.from_cat[C.ident[o]]);
  validate(G);
  return r;
}

// ---------------------------------------------------------------------------
// Bimodules

int Bimodule::act(const Groupoid& G, int sigma, int sigma_prime, int e) const {
  int x = pre.at(G.inverse(sigma)).at(e);
  if (x < 0) throw DomainError("bimodule: source isomorphism does not match element " + elt(*this, e));
  int y = post.at(sigma_prime).at(x);
  if (y < 0) throw DomainError("bimodule: target isomorphism does not match element " + elt(*this, e));
  return y;
}

void validate(const Bimodule& B, const Groupoid& G) {
  const int n = B.size(), k = G.narrows();
  if (static_cast<int>(B.tgt.size()) != n || static_cast<int>(B.post.size()) != k || static_cast<int>(B.pre.size()) != k)
    throw DomainError("bimodule: table sizes disagree with the groupoid");
  for (int a = 0; a < k; ++a) {
    if (static_cast<int>(B.post[a].size()) != n || static_cast<int>(B.pre[a].size()) != n)
      throw DomainError("bimodule: action table has the wrong size");
    for (int e = 0; e < n; ++e) {
      int p = B.post[a][e], q = B.pre[a][e];
      if ((p >= 0) != (G.src[a] == B.tgt[e]) || (q >= 0) != (G.tgt[a] == B.src[e]))
        throw DomainError("bimodule: action defined on the wrong elements at " + elt(B, e));
      if (p >= 0 && (B.src[p] != B.src[e] || B.tgt[p] != G.tgt[a]))
        throw DomainError("bimodule: left action lands in the wrong set at " + elt(B, e));
      if (q >= 0 && (B.tgt[q] != B.tgt[e] || B.src[q] != G.src[a]))
        throw DomainError("bimodule: right action lands in the wrong set at " + elt(B, e));
    }
  }
  for (int e = 0; e < n; ++e) {
    if (B.post[G.ident[B.tgt[e]]][e] != e || B.pre[G.ident[B.src[e]]][e] != e)
      throw DomainError("bimodule: identities do not act trivially on " + elt(B, e));
    for (int a = 0; a < k; ++a)
      for (int b = 0; b < k; ++b) {
        if (G.src[b] != G.tgt[a]) continue;
        int ba = G.comp[b][a];
        if (B.post[a][e] >= 0 && B.post[b][B.post[a][e]] != B.post[ba][e])
          throw DomainError("bimodule: left action is not functorial at " + elt(B, e));
        if (B.pre[b][e] >= 0 && B.pre[a][B.pre[b][e]] != B.pre[ba][e])
          throw DomainError("bimodule: right action is not functorial at " + elt(B, e));
      }
    for (int a = 0; a < k; ++a)
      for (int b = 0; b < k; ++b)
        if (B.post[b][e] >= 0 && B.pre[a][e] >= 0 && B.post[b][B.pre[a][e]] != B.pre[a][B.post[b][e]])
          throw DomainError("bimodule: left and right actions do not commute at " + elt(B, e));
  }
}

Bimodule groupoid_bimodule(const Groupoid& G) {
  Bimodule B;
  const int k = G.narrows();
  B.src = G.src;
  B.tgt = G.tgt;
  B.names = G.names;
  B.post.assign(k, std::vector<int>(k, -1));
  B.pre.assign(k, std::vector<int>(k, -1));
  for (int a = 0; a < k; ++a)
    for (int e = 0; e < k; ++e) {
      B.post[a][e] = G.comp[a][e];
      B.pre[a][e] = G.comp[e][a];
    }
  return B;
}

Bimodule trivial_bimodule(const Groupoid& G) {
  Bimodule B;
  const int n = G.nobj;
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      B.src.push_back(x);
      B.tgt.push_back(y);
      B.names.push_back("*" + std::to_string(x + 1) + std::to_string(y + 1));
    }
  B.post.assign(G.narrows(), std::vector<int>(n * n, -1));
  B.pre = B.post;
  for (int a = 0; a < G.narrows(); ++a)
    for (int e = 0; e < n * n; ++e) {
      int x = B.src[e], y = B.tgt[e];
      if (G.src[a] == y) B.post[a][e] = x * n + G.tgt[a];
      if (G.tgt[a] == x) B.pre[a][e] = G.src[a] * n + y;
    }
  return B;
}

TensorProduct relative_tensor(const Bimodule& F, const Bimodule& H, const Groupoid& G) {
  if (static_cast<int>(F.post.size()) != G.narrows() || static_cast<int>(H.post.size()) != G.narrows())
    throw DomainError("relative tensor: bimodules over different groupoids");
  const int nf = F.size(), nh = H.size();
  std::vector<std::vector<int>> pair_id(nf, std::vector<int>(nh, -1));
  std::vector<std::pair<int, int>> pairs;
  for (int f = 0; f < nf; ++f)
    for (int h = 0; h < nh; ++h)
      if (F.src[f] == H.tgt[h]) {
        pair_id[f][h] = static_cast<int>(pairs.size());
        pairs.emplace_back(f, h);
      }
  UnionFind uf(static_cast<int>(pairs.size()));
  for (size_t p = 0; p < pairs.size(); ++p) {
    auto [f, h] = pairs[p];
    for (int s = 0; s < G.narrows(); ++s)
      if (G.src[s] == H.tgt[h]) {
        // (f ∘ σ⁻¹, σ ∘ h) ~ (f, h)
        int f2 = F.pre[G.inverse(s)][f], h2 = H.post[s][h];
        uf.unite(static_cast<int>(p), pair_id[f2][h2]);
      }
  }
  int count = 0;
  auto label = uf.classes(&count);
  TensorProduct T;
  T.rep.assign(count, {-1, -1});
  T.cls.assign(nf, std::vector<int>(nh, -1));
  for (size_t p = 0; p < pairs.size(); ++p) {
    auto [f, h] = pairs[p];
    T.cls[f][h] = label[p];
    if (T.rep[label[p]].first < 0) T.rep[label[p]] = pairs[p];
  }
  Bimodule& R = T.result;
  for (int c = 0; c < count; ++c) {
    auto [f, h] = T.rep[c];
    R.src.push_back(H.src[h]);
    R.tgt.push_back(F.tgt[f]);
    std::string a = f < static_cast<int>(F.names.size()) ? F.names[f] : std::to_string(f + 1);
    std::string b = h < static_cast<int>(H.names.size()) ? H.names[h] : std::to_string(h + 1);
    R.names.push_back("[" + a + "|" + b + "]");
  }
  const int k = G.narrows();
  R.post.assign(k, std::vector<int>(count, -1));
  R.pre.assign(k, std::vector<int>(count, -1));
  for (size_t p = 0; p < pairs.size(); ++p) {
    auto [f, h] = pairs[p];
    int c = label[p];
    for (int a = 0; a < k; ++a) {
      if (F.post[a][f] >= 0) {
        int v = T.cls[F.post[a][f]][h];
        if (R.post[a][c] >= 0 && R.post[a][c] != v) throw DomainError("relative tensor: left action is not well defined");
        R.post[a][c] = v;
      }
      if (H.pre[a][h] >= 0) {
        int v = T.cls[f][H.pre[a][h]];
        if (R.pre[a][c] >= 0 && R.pre[a][c] != v) throw DomainError("relative tensor: right action is not well defined");
        R.pre[a][c] = v;
      }
    }
  }
  return T;
}

// ---------------------------------------------------------------------------
// Monoids

BimoduleMonoid hom_bimodule(const FiniteCategory& C) {
  IsoGroupoid iso = iso_groupoid(C);
  BimoduleMonoid m;
  m.G = iso.G;
  Bimodule& B = m.rho;
  const int n = C.narrows(), k = m.G.narrows();
  B.src = C.src;
  B.tgt = C.tgt;
  B.names = C.names;
  B.post.assign(k, std::vector<int>(n, -1));
  B.pre.assign(k, std::vector<int>(n, -1));
  for (int a = 0; a < k; ++a)
    for (int e = 0; e < n; ++e) {
      B.post[a][e] = C.comp[iso.to_cat[a]][e];
      B.pre[a][e] = C.comp[e][iso.to_cat[a]];
    }
  m.gamma = C.comp;
  m.unit = iso.to_cat;
  validate(B, m.G);
  return m;
}

std::vector<int> base_projection(const FiniteCategory& hat, const FiniteCategory& base) {
  if (hat.obj_names != base.obj_names) throw DomainError("enrichment: the tables have different objects");
  std::vector<int> b(hat.narrows());
  for (int e = 0; e < hat.narrows(); ++e) {
    if (hat.over[e].empty()) throw DomainError("enrichment: arrow " + hat.names[e] + " lies over nothing");
    b[e] = base.find(hat.over[e]);
    if (b[e] < 0) throw DomainError("enrichment: arrow " + hat.names[e] + " lies over unknown " + hat.over[e]);
  }
  return b;
}

BimoduleMonoid enriched_bimodule(const FiniteCategory& hat, const FiniteCategory& base) {
  auto b = base_projection(hat, base);
  IsoGroupoid iso = iso_groupoid(base);
  BimoduleMonoid m;
  m.G = iso.G;
  const int k = m.G.narrows(), n = hat.narrows();
  for (int a = 0; a < k; ++a) {
    int found = -1, count = 0;
    for (int e = 0; e < n; ++e)
      if (b[e] == iso.to_cat[a] && hat.inverse(e) >= 0) {
        found = e;
        ++count;
      }
    if (count != 1)
      throw DomainError("enrichment: isomorphism " + base.names[iso.to_cat[a]] + " has " + std::to_string(count) +
                        " invertible lifts");
    m.unit.push_back(found);
  }
  Bimodule& B = m.rho;
  B.src = hat.src;
  B.tgt = hat.tgt;
  B.names = hat.names;
  B.post.assign(k, std::vector<int>(n, -1));
  B.pre.assign(k, std::vector<int>(n, -1));
  for (int a = 0; a < k; ++a)
    for (int e = 0; e < n; ++e) {
      B.post[a][e] = hat.comp[m.unit[a]][e];
      B.pre[a][e] = hat.comp[e][m.unit[a]];
    }
  m.gamma = hat.comp;
  validate(B, m.G);
  return m;
}

Report check_monoid(const BimoduleMonoid& m) {
  Report r;
  const Bimodule& B = m.rho;
  const Groupoid& G = m.G;
  const int n = B.size();
  TensorProduct T = relative_tensor(B, B, G);
  std::vector<int> value(T.rep.size(), -1);
  for (int f = 0; f < n; ++f)
    for (int h = 0; h < n; ++h) {
      int c = T.cls[f][h];
      if (c < 0) continue;
      ++r.checked;
      int v = m.gamma[f][h];
      if (v < 0) return fail(r, "γ undefined on (" + elt(B, f) + ", " + elt(B, h) + ")");
      if (B.src[v] != B.src[h] || B.tgt[v] != B.tgt[f])
        return fail(r, "γ(" + elt(B, f) + ", " + elt(B, h) + ") has the wrong ends");
      if (value[c] >= 0 && value[c] != v)
        return fail(r, "γ does not descend to the plethysm product at (" + elt(B, f) + ", " + elt(B, h) + ")");
      value[c] = v;
      for (int a = 0; a < G.narrows(); ++a) {
        if (B.post[a][f] >= 0 && m.gamma[B.post[a][f]][h] != B.post[a][v])
          return fail(r, "γ is not left equivariant at (" + elt(B, f) + ", " + elt(B, h) + ")");
        if (B.pre[a][h] >= 0 && m.gamma[f][B.pre[a][h]] != B.pre[a][v])
          return fail(r, "γ is not right equivariant at (" + elt(B, f) + ", " + elt(B, h) + ")");
      }
    }
  for (int f = 0; f < n; ++f)
    for (int g = 0; g < n; ++g) {
      if (B.src[f] != B.tgt[g]) continue;
      for (int h = 0; h < n; ++h) {
        if (B.src[g] != B.tgt[h]) continue;
        ++r.checked;
        if (m.gamma[m.gamma[f][g]][h] != m.gamma[f][m.gamma[g][h]])
          return fail(r, "γ is not associative at (" + elt(B, f) + ", " + elt(B, g) + ", " + elt(B, h) + ")");
      }
    }
  return r;
}

std::vector<int> unit_pointing(const BimoduleMonoid& m) {
  if (m.unit.empty()) throw DomainError("bimodule monoid has no unit");
  std::vector<int> p;
  for (int o = 0; o < m.G.nobj; ++o) p.push_back(m.unit[m.G.ident[o]]);
  return p;
}

Report check_unit(const BimoduleMonoid& m, const std::vector<int>& pointing) {
  Report r;
  const Bimodule& B = m.rho;
  const Groupoid& G = m.G;
  if (static_cast<int>(pointing.size()) != G.nobj) return fail(r, "pointing needs one element per object");
  for (int o = 0; o < G.nobj; ++o) {
    int p = pointing[o];
    if (p < 0 || p >= B.size() || B.src[p] != o || B.tgt[p] != o)
      return fail(r, "pointing of object " + std::to_string(o + 1) + " is not an endomorphism element");
  }
  std::vector<int> u(G.narrows());
  for (int s = 0; s < G.narrows(); ++s) {
    u[s] = B.post[s][pointing[G.src[s]]];
    ++r.checked;
    if (B.pre[s][pointing[G.tgt[s]]] != u[s])
      return fail(r, "σ ∘ u(id) differs from u(id) ∘ σ for σ = " + elt(groupoid_bimodule(G), s));
    if (!m.unit.empty() && m.unit[s] != u[s])
      return fail(r, "extended pointing differs from the unit at σ = " + elt(groupoid_bimodule(G), s));
  }
  for (int f = 0; f < B.size(); ++f) {
    ++r.checked;
    if (m.gamma[pointing[B.tgt[f]]][f] != f) return fail(r, "u(id) is not a left unit for " + elt(B, f));
    if (m.gamma[f][pointing[B.src[f]]] != f) return fail(r, "u(id) is not a right unit for " + elt(B, f));
    for (int s = 0; s < G.narrows(); ++s) {
      if (G.src[s] == B.tgt[f] && m.gamma[u[s]][f] != B.post[s][f])
        return fail(r, "γ(u_σ, " + elt(B, f) + ") is not σ ∘ " + elt(B, f));
      if (G.tgt[s] == B.src[f] && m.gamma[f][u[s]] != B.pre[s][f])
        return fail(r, "γ(" + elt(B, f) + ", u_σ) is not " + elt(B, f) + " ∘ σ");
    }
  }
  return r;
}

Report check_unit_laws(const Bimodule& F, const Groupoid& G) {
  Report r;
  Bimodule Hom = groupoid_bimodule(G);
  for (int side = 0; side < 2; ++side) {
    TensorProduct T = side == 0 ? relative_tensor(F, Hom, G) : relative_tensor(Hom, F, G);
    std::vector<int> image(T.rep.size(), -1), hit(F.size(), 0);
    for (size_t f = 0; f < T.cls.size(); ++f)
      for (size_t h = 0; h < T.cls[f].size(); ++h) {
        int c = T.cls[f][h];
        if (c < 0) continue;
        ++r.checked;
        int v = side == 0 ? F.pre[h][f] : F.post[f][h];
        if (image[c] >= 0 && image[c] != v)
          return fail(r, std::string(side == 0 ? "F ⊗ Hom" : "Hom ⊗ F") + " → F is not well defined");
        image[c] = v;
      }
    for (int v : image) ++hit[v];
    for (int e = 0; e < F.size(); ++e)
      if (hit[e] != 1)
        return fail(r, std::string(side == 0 ? "F ⊗ Hom" : "Hom ⊗ F") + " → F is not a bijection at " + elt(F, e));
  }
  return r;
}

Report check_tensor_associativity(const Bimodule& F, const Bimodule& H, const Bimodule& K, const Groupoid& G) {
  Report r;
  TensorProduct FH = relative_tensor(F, H, G);
  TensorProduct FH_K = relative_tensor(FH.result, K, G);
  TensorProduct HK = relative_tensor(H, K, G);
  TensorProduct F_HK = relative_tensor(F, HK.result, G);
  std::vector<int> image(FH_K.rep.size(), -1);
  for (int f = 0; f < F.size(); ++f)
    for (int h = 0; h < H.size(); ++h) {
      int x = FH.cls[f][h];
      if (x < 0) continue;
      for (int k = 0; k < K.size(); ++k) {
        int c = FH_K.cls[x][k];
        if (c < 0) continue;
        ++r.checked;
        int v = F_HK.cls[f][HK.cls[h][k]];
        if (image[c] >= 0 && image[c] != v) return fail(r, "associator is not well defined");
        image[c] = v;
      }
    }
  std::vector<int> hit(F_HK.rep.size(), 0);
  for (int v : image) {
    if (v < 0) return fail(r, "associator misses a class");
    ++hit[v];
  }
  for (int h : hit)
    if (h != 1) return fail(r, "associator is not a bijection");
  return r;
}

// ---------------------------------------------------------------------------
// Indexing data

IndexingData indexing_from_bimodule(const BimoduleMonoid& m, const FiniteCategory& base, const std::vector<int>& b) {
  const Bimodule& B = m.rho;
  const Groupoid& G = m.G;
  IsoGroupoid iso = iso_groupoid(base);
  if (iso.G.narrows() != G.narrows() || iso.G.nobj != G.nobj)
    throw DomainError("indexing: the bimodule is not over the isomorphisms of the base");
  if (static_cast<int>(b.size()) != B.size()) throw DomainError("indexing: b must send every element to a base arrow");
  IndexingData d;
  d.fiber.assign(base.narrows(), {});
  for (int e = 0; e < B.size(); ++e) {
    int phi = b[e];
    if (phi < 0 || phi >= base.narrows() || base.src[phi] != B.src[e] || base.tgt[phi] != B.tgt[e])
      throw DomainError("indexing: " + elt(B, e) + " lies over an arrow with other ends");
    d.fiber[phi].push_back(e);
    // action: (σ ⇓ σ′) maps D(φ) to D(σ′φσ⁻¹)
    for (int a = 0; a < G.narrows(); ++a) {
      ++d.checked;
      if (B.post[a][e] >= 0 && b[B.post[a][e]] != base.comp[iso.to_cat[a]][phi])
        throw DomainError("indexing: b is not left equivariant at " + elt(B, e));
      if (B.pre[a][e] >= 0 && b[B.pre[a][e]] != base.comp[phi][iso.to_cat[a]])
        throw DomainError("indexing: b is not right equivariant at " + elt(B, e));
    }
  }
  // γ^D: D(φ1) × D(φ0) → D(φ1 ∘ φ0)
  for (int f = 0; f < B.size(); ++f)
    for (int h = 0; h < B.size(); ++h) {
      if (B.src[f] != B.tgt[h]) continue;
      ++d.checked;
      if (b[m.gamma[f][h]] != base.comp[b[f]][b[h]])
        throw DomainError("indexing: γ(" + elt(B, f) + ", " + elt(B, h) + ") leaves the fiber over the composite");
    }
  Report mon = check_monoid(m);
  d.checked += mon.checked;
  if (!mon.ok) throw DomainError("indexing: " + mon.witness);
  if (!m.unit.empty()) {
    for (int s = 0; s < G.narrows(); ++s) {
      ++d.checked;
      if (b[m.unit[s]] != iso.to_cat[s]) throw DomainError("indexing: u_σ does not lie over σ");
      for (int a = 0; a < G.narrows(); ++a)
        for (int c = 0; c < G.narrows(); ++c) {
          if (G.tgt[a] != G.src[s] || G.src[c] != G.tgt[s]) continue;
          // (σ ⇓ σ′)(u_τ) = u_{σ′τσ⁻¹} with σ = a⁻¹ acting on the source
          int moved = B.act(G, G.inverse(a), c, m.unit[s]);
          int conj = G.compose(c, G.compose(s, a));
          if (moved != m.unit[conj]) throw DomainError("indexing: units are not equivariant at " + G.names[s]);
        }
    }
    Report u = check_unit(m, unit_pointing(m));
    d.checked += u.checked;
    if (!u.ok) throw DomainError("indexing: " + u.witness);
    d.unit = m.unit;
  }
  return d;
}

FiniteCategory category_from_indexing(const BimoduleMonoid& m, const FiniteCategory& base, const IndexingData& d,
                                      const std::vector<int>& b) {
  if (d.unit.empty()) throw DomainError("indexing: a unit is needed to rebuild the category");
  FiniteCategory C;
  C.obj_names = base.obj_names;
  std::vector<int> index(m.rho.size(), -1), element;
  for (int phi = 0; phi < base.narrows(); ++phi)
    for (int e : d.fiber[phi]) {
      index[e] = static_cast<int>(element.size());
      element.push_back(e);
      C.src.push_back(base.src[phi]);
      C.tgt.push_back(base.tgt[phi]);
      C.names.push_back(elt(m.rho, e));
      C.over.push_back(base.names[b[e]]);
    }
  if (std::find(index.begin(), index.end(), -1) != index.end())
    throw DomainError("indexing: the fibers do not cover the bimodule");
  const int n = C.narrows();
  C.comp.assign(n, std::vector<int>(n, -1));
  for (int g = 0; g < n; ++g)
    for (int f = 0; f < n; ++f)
      if (C.src[g] == C.tgt[f]) C.comp[g][f] = index[m.gamma[element[g]][element[f]]];
  for (int o = 0; o < C.nobj(); ++o) C.ident.push_back(index[d.unit[m.G.ident[o]]]);
  validate(C);
  return C;
}

}  // namespace ufckit
