#include "ufckit/bmgraph.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <numeric>
#include <set>
#include <sstream>

#include "ufckit/ufc.hpp"

namespace ufckit {

namespace {

std::string n1(int i) { return std::to_string(i + 1); }

std::vector<int> shuffled(int n, Rng& rng) {
  std::vector<int> v(n);
  std::iota(v.begin(), v.end(), 0);
  std::shuffle(v.begin(), v.end(), rng);
  return v;
}

std::vector<int> inverse_injection(const std::vector<int>& fmap, int n) {
  std::vector<int> inv(n, -1);
  for (size_t i = 0; i < fmap.size(); ++i) inv.at(fmap[i]) = static_cast<int>(i);
  return inv;
}

}  // namespace

// ---------------------------------------------------------------------------
// Graphs

std::vector<std::pair<int, int>> Graph::edges() const {
  std::vector<std::pair<int, int>> out;
  for (int f = 0; f < nflags(); ++f)
    if (inv[f] > f) out.emplace_back(f, inv[f]);
  return out;
}

std::vector<int> Graph::tails() const {
  std::vector<int> out;
  for (int f = 0; f < nflags(); ++f)
    if (inv[f] == f) out.push_back(f);
  return out;
}

std::vector<int> Graph::flags_at(int v) const {
  std::vector<int> out;
  for (int f = 0; f < nflags(); ++f)
    if (vertex[f] == v) out.push_back(f);
  return out;
}

void validate(const Graph& g) {
  const int n = g.nflags();
  if (static_cast<int>(g.inv.size()) != n) throw DomainError("graph: ∂ and ι have different sizes");
  for (int f = 0; f < n; ++f) {
    if (g.vertex[f] < 0 || g.vertex[f] >= g.nv) throw DomainError("graph: flag " + n1(f) + " has no vertex");
    if (g.inv[f] < 0 || g.inv[f] >= n || g.inv[g.inv[f]] != f)
      throw DomainError("graph: ι is not an involution at flag " + n1(f));
  }
  if (g.directed()) {
    if (static_cast<int>(g.io.size()) != n) throw DomainError("graph: io has the wrong size");
    for (int f = 0; f < n; ++f) {
      if (g.io[f] != 1 && g.io[f] != -1) throw DomainError("graph: io must be in or out");
      if (g.inv[f] != f && g.io[g.inv[f]] != -g.io[f])
        throw DomainError("graph: edge at flag " + n1(f) + " does not join an output to an input");
    }
  }
  if (g.colored() && static_cast<int>(g.clr.size()) != n) throw DomainError("graph: clr has the wrong size");
}

Graph corolla(int nflags) {
  Graph g;
  g.nv = 1;
  g.vertex.assign(nflags, 0);
  g.inv.resize(nflags);
  std::iota(g.inv.begin(), g.inv.end(), 0);
  return g;
}

Graph directed_corolla(int nin, int nout) {
  Graph g = corolla(nin + nout);
  g.io.assign(nin, 1);
  g.io.insert(g.io.end(), nout, -1);
  return g;
}

Graph disjoint_union(const Graph& a, const Graph& b) {
  if (a.directed() != b.directed() || a.colored() != b.colored())
    throw DomainError("graph: disjoint union of differently structured graphs");
  Graph g = a;
  g.nv += b.nv;
  for (int f = 0; f < b.nflags(); ++f) {
    g.vertex.push_back(b.vertex[f] + a.nv);
    g.inv.push_back(b.inv[f] + a.nflags());
  }
  g.io.insert(g.io.end(), b.io.begin(), b.io.end());
  g.clr.insert(g.clr.end(), b.clr.begin(), b.clr.end());
  return g;
}

Graph loop_graph() {
  Graph g;
  g.nv = 1;
  g.vertex = {0, 0};
  g.inv = {1, 0};
  return g;
}

bool is_aggregate(const Graph& g) { return g.edges().empty(); }

bool is_corolla(const Graph& g) { return g.nv == 1 && is_aggregate(g); }

bool is_connected(const Graph& g) {
  if (g.nv == 0) return false;
  UnionFind uf(g.nv);
  for (auto [f, h] : g.edges()) uf.unite(g.vertex[f], g.vertex[h]);
  int count = 0;
  uf.classes(&count);
  return count == 1;
}

bool is_full(const Graph& g) {
  if (!g.directed()) throw DomainError("is_full: the graph is not directed");
  for (int v = 0; v < g.nv; ++v)
    for (int dir : {1, -1}) {
      int on_edge = 0, total = 0;
      for (int f : g.flags_at(v))
        if (g.io[f] == dir) {
          ++total;
          if (g.inv[f] != f) ++on_edge;
        }
      if (on_edge != 0 && on_edge != total) return false;
    }
  return true;
}

// ---------------------------------------------------------------------------
// Morphisms

void validate(const GraphMorphism& m, bool check_colors) {
  const Graph& s = m.source;
  const Graph& t = m.target;
  validate(s);
  validate(t);
  if (m.vmap.dom() != s.nv || m.vmap.cod != t.nv) throw DomainError("graph morphism: vertex map has the wrong type");
  if (!m.vmap.is_surjection()) throw DomainError("graph morphism: vertex map is not surjective");
  if (static_cast<int>(m.fmap.size()) != t.nflags()) throw DomainError("graph morphism: flag map has the wrong size");
  if (static_cast<int>(m.ghost.size()) != s.nflags()) throw DomainError("graph morphism: ghost involution has the wrong size");
  std::vector<int> pre(s.nflags(), -1);
  for (int a = 0; a < t.nflags(); ++a) {
    int f = m.fmap[a];
    if (f < 0 || f >= s.nflags() || pre[f] >= 0) throw DomainError("graph morphism: flag map is not injective");
    pre[f] = a;
    if (m.vmap(s.vertex[f]) != t.vertex[a])
      throw DomainError("graph morphism: flag " + n1(a) + " is attached to the wrong vertex");
    if (s.directed() && s.io[f] != t.io[a]) throw DomainError("graph morphism: flag " + n1(a) + " changes direction");
    if (check_colors && s.colored() && s.clr[f] != t.clr[a])
      throw DomainError("graph morphism: flag " + n1(a) + " changes color");
  }
  for (int f = 0; f < s.nflags(); ++f) {
    int g = m.ghost[f];
    if (pre[f] >= 0) {
      if (g != -1) throw DomainError("graph morphism: surviving flag " + n1(f) + " is on a ghost edge");
      continue;
    }
    if (g < 0 || g >= s.nflags() || g == f || m.ghost[g] != f || pre[g] >= 0)
      throw DomainError("graph morphism: vanished flag " + n1(f) + " is not paired by a fixed-point-free involution");
    if (m.vmap(s.vertex[f]) != m.vmap(s.vertex[g]))
      throw DomainError("graph morphism: ghost edge at flag " + n1(f) + " joins different fibers");
    if (s.directed() && s.io[g] != -s.io[f])
      throw DomainError("graph morphism: ghost edge at flag " + n1(f) + " does not join an output to an input");
    if (check_colors && s.colored() && s.clr[f] != s.clr[g])
      throw DomainError("graph morphism: ghost edge at flag " + n1(f) + " joins different colors");
  }
  for (int f = 0; f < s.nflags(); ++f) {
    int e = s.inv[f];
    if (e != f) {
      // an edge is either contracted (a ghost edge) or survives as an edge
      if (pre[f] < 0) {
        if (m.ghost[f] != e) throw DomainError("graph morphism: edge at flag " + n1(f) + " is cut");
      } else if (pre[e] < 0 || t.inv[pre[f]] != pre[e]) {
        throw DomainError("graph morphism: edge at flag " + n1(f) + " does not survive");
      }
    } else if (pre[f] >= 0) {
      int a = pre[f], b = t.inv[a];
      if (b != a && s.inv[m.fmap[b]] != m.fmap[b])
        throw DomainError("graph morphism: tail " + n1(f) + " is grafted onto a half-edge");
    }
  }
}

GraphMorphism identity_morphism(const Graph& g) {
  GraphMorphism m;
  m.source = m.target = g;
  m.vmap = FinMap::identity(g.nv);
  m.fmap.resize(g.nflags());
  std::iota(m.fmap.begin(), m.fmap.end(), 0);
  m.ghost.assign(g.nflags(), -1);
  return m;
}

GraphMorphism compose_graph_morphisms(const GraphMorphism& psi, const GraphMorphism& phi) {
  if (!(phi.target == psi.source)) throw DomainError("graph morphism: target of the first is not the source of the second");
  GraphMorphism m;
  m.source = phi.source;
  m.target = psi.target;
  m.vmap = compose(psi.vmap, phi.vmap);
  for (int a : psi.fmap) m.fmap.push_back(phi.fmap[a]);
  // î_{ψφ}(f) = φ^F(î_ψ(f′)) if f = φ^F(f′), else î_φ(f); restricted to vanished flags.
  std::vector<int> pre = inverse_injection(phi.fmap, phi.source.nflags());
  m.ghost.assign(phi.source.nflags(), -1);
  for (int f = 0; f < phi.source.nflags(); ++f) {
    if (pre[f] >= 0) {
      int g = psi.ghost[pre[f]];
      m.ghost[f] = g < 0 ? -1 : phi.fmap[g];
    } else {
      m.ghost[f] = phi.ghost[f];
    }
  }
  return m;
}

GraphMorphism tensor(const GraphMorphism& a, const GraphMorphism& b) {
  GraphMorphism m;
  m.source = disjoint_union(a.source, b.source);
  m.target = disjoint_union(a.target, b.target);
  m.vmap = coproduct(a.vmap, b.vmap);
  m.fmap = a.fmap;
  for (int f : b.fmap) m.fmap.push_back(f + a.source.nflags());
  m.ghost = a.ghost;
  for (int g : b.ghost) m.ghost.push_back(g < 0 ? -1 : g + a.source.nflags());
  return m;
}

std::vector<std::pair<int, int>> ghost_edges(const GraphMorphism& m) {
  std::vector<std::pair<int, int>> out;
  for (int f = 0; f < static_cast<int>(m.ghost.size()); ++f)
    if (m.ghost[f] > f) out.emplace_back(f, m.ghost[f]);
  return out;
}

Graph ghost_graph(const GraphMorphism& m) {
  Graph g = m.source;
  for (int f = 0; f < g.nflags(); ++f) g.inv[f] = m.ghost[f] < 0 ? f : m.ghost[f];
  return g;
}

bool is_isomorphism(const GraphMorphism& m) {
  return m.vmap.is_bijection() && m.fmap.size() == m.ghost.size() &&
         std::all_of(m.ghost.begin(), m.ghost.end(), [](int g) { return g < 0; });
}

std::vector<GraphMorphism> automorphisms(const Graph& g) {
  if (g.nflags() > 8 || g.nv > 6) throw DomainError("automorphisms: graph too large for brute force");
  std::vector<GraphMorphism> out;
  std::vector<int> vp(g.nv);
  std::iota(vp.begin(), vp.end(), 0);
  do {
    std::vector<int> fp(g.nflags());
    std::iota(fp.begin(), fp.end(), 0);
    do {
      GraphMorphism m = identity_morphism(g);
      m.vmap = FinMap(g.nv, vp);
      m.fmap = fp;
      // isomorphisms must also carry edges to edges in both directions
      bool edges_ok = true;
      for (int a = 0; a < g.nflags(); ++a)
        if (g.inv[m.fmap[a]] != m.fmap[g.inv[a]]) edges_ok = false;
      if (!edges_ok) continue;
      try {
        validate(m);
      } catch (const DomainError&) {
        continue;
      }
      out.push_back(m);
    } while (std::next_permutation(fp.begin(), fp.end()));
  } while (std::next_permutation(vp.begin(), vp.end()));
  return out;
}

bool is_two_level_full(const GraphMorphism& m) {
  const Graph& s = m.source;
  if (m.target.nv != 1 || !s.directed() || !is_aggregate(s)) return false;
  Graph gg = ghost_graph(m);
  if (!is_connected(gg) || !is_full(gg)) return false;
  std::vector<bool> lower(s.nv, false), upper(s.nv, false);
  for (int f = 0; f < s.nflags(); ++f)
    if (m.ghost[f] >= 0) (s.io[f] == -1 ? lower : upper)[s.vertex[f]] = true;
  for (int v = 0; v < s.nv; ++v)
    if (lower[v] == upper[v]) return false;
  // every output of a lower vertex and every input of an upper vertex is matched
  for (int f = 0; f < s.nflags(); ++f) {
    int v = s.vertex[f];
    bool must = (s.io[f] == -1 && lower[v]) || (s.io[f] == 1 && upper[v]);
    if (must != (m.ghost[f] >= 0)) return false;
  }
  return true;
}

Graph random_graph(int max_flags, int max_vertices, Rng& rng, bool directed) {
  Graph g;
  g.nv = 1 + static_cast<int>(rng() % max_vertices);
  const int n = static_cast<int>(rng() % (max_flags + 1));
  for (int f = 0; f < n; ++f) g.vertex.push_back(static_cast<int>(rng() % g.nv));
  g.inv.resize(n);
  std::iota(g.inv.begin(), g.inv.end(), 0);
  if (directed) {
    g.io.resize(n);
    for (auto& x : g.io) x = rng() % 2 ? 1 : -1;
  }
  auto order = shuffled(n, rng);
  for (int i = 0; i + 1 < n; i += 2) {
    if (rng() % 2) continue;
    int a = order[i], b = order[i + 1];
    g.inv[a] = b;
    g.inv[b] = a;
    if (directed) {
      g.io[a] = -1;
      g.io[b] = 1;
    }
  }
  return g;
}

GraphMorphism random_morphism(const Graph& g, Rng& rng) {
  const int n = g.nflags();
  std::vector<int> ghost(n, -1), new_inv(n, -1);
  std::vector<bool> vanish(n, false);
  for (auto [f, h] : g.edges()) {
    if (rng() % 2) {
      vanish[f] = vanish[h] = true;
      ghost[f] = h;
      ghost[h] = f;
    } else {
      new_inv[f] = h;
      new_inv[h] = f;
    }
  }
  auto tails = g.tails();
  std::shuffle(tails.begin(), tails.end(), rng);
  for (size_t i = 0; i < tails.size(); ++i) {
    int a = tails[i];
    if (new_inv[a] >= 0 || vanish[a]) continue;
    new_inv[a] = a;
    if (i + 1 >= tails.size()) continue;
    int b = tails[i + 1];
    bool compatible = (!g.directed() || g.io[a] == -g.io[b]) && (!g.colored() || g.clr[a] == g.clr[b]);
    int choice = static_cast<int>(rng() % 3);
    if (!compatible || choice == 2) continue;
    ++i;
    if (choice == 0) {  // glue then contract: a ghost edge
      vanish[a] = vanish[b] = true;
      ghost[a] = b;
      ghost[b] = a;
      new_inv[a] = -1;
    } else {  // graft into an edge
      new_inv[a] = b;
      new_inv[b] = a;
    }
  }
  UnionFind uf(g.nv);
  for (int f = 0; f < n; ++f)
    if (vanish[f]) uf.unite(g.vertex[f], g.vertex[ghost[f]]);
  const int merges = static_cast<int>(rng() % 2);
  for (int i = 0; i < merges; ++i)
    uf.unite(static_cast<int>(rng() % g.nv), static_cast<int>(rng() % g.nv));
  int classes = 0;
  auto label = uf.classes(&classes);
  auto vperm = shuffled(classes, rng);
  GraphMorphism m;
  m.source = g;
  std::vector<int> vimg(g.nv);
  for (int v = 0; v < g.nv; ++v) vimg[v] = vperm[label[v]];
  m.vmap = FinMap(classes, vimg);
  std::vector<int> survivors;
  for (int f = 0; f < n; ++f)
    if (!vanish[f]) survivors.push_back(f);
  std::shuffle(survivors.begin(), survivors.end(), rng);
  m.fmap = survivors;
  std::vector<int> pos = inverse_injection(survivors, n);
  Graph& t = m.target;
  t.nv = classes;
  for (int f : survivors) {
    t.vertex.push_back(vimg[g.vertex[f]]);
    t.inv.push_back(pos[new_inv[f]]);
    if (g.directed()) t.io.push_back(g.io[f]);
    if (g.colored()) t.clr.push_back(g.clr[f]);
  }
  m.ghost = ghost;
  return m;
}

// ---------------------------------------------------------------------------
// Text and DOT

std::string write_graph(const Graph& g) {
  std::ostringstream os;
  os << "graph " << g.nv << " " << g.nflags() << "\n";
  for (int f = 0; f < g.nflags(); ++f) {
    os << g.vertex[f] + 1 << " " << g.inv[f] + 1 << " ";
    os << (g.directed() ? (g.io[f] == 1 ? "in" : "out") : "-") << " ";
    if (g.colored())
      os << g.clr[f];
    else
      os << "-";
    os << "\n";
  }
  return os.str();
}

Graph read_graph(const std::string& text) {
  std::istringstream is(text);
  std::string line, word;
  Graph g;
  int nflags = -1;
  std::vector<std::string> io, clr;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    if (!(ls >> word)) continue;
    auto fail = [&](const std::string& why) {
      throw DomainError("graph file line " + std::to_string(lineno) + ": " + why);
    };
    if (nflags < 0) {
      if (word != "graph" || !(ls >> g.nv >> nflags) || g.nv < 0 || nflags < 0)
        fail("expected 'graph <vertices> <flags>'");
      continue;
    }
    if (g.nflags() == nflags) fail("more flag lines than declared");
    int v, p;
    std::string d, c;
    try {
      v = std::stoi(word);
    } catch (const std::exception&) {
      fail("expected a vertex number");
    }
    if (!(ls >> p >> d >> c)) fail("expected 'vertex partner io clr'");
    if (d != "in" && d != "out" && d != "-") fail("io must be in, out or -");
    g.vertex.push_back(v - 1);
    g.inv.push_back(p - 1);
    io.push_back(d);
    clr.push_back(c);
  }
  if (nflags < 0) throw DomainError("graph file: missing header");
  if (g.nflags() != nflags) throw DomainError("graph file: fewer flag lines than declared");
  auto all_dash = [](const std::vector<std::string>& v) {
    return std::all_of(v.begin(), v.end(), [](const std::string& s) { return s == "-"; });
  };
  if (nflags > 0 && !all_dash(io)) {
    for (const auto& d : io) {
      if (d == "-") throw DomainError("graph file: io must be given for every flag or none");
      g.io.push_back(d == "in" ? 1 : -1);
    }
  }
  if (nflags > 0 && !all_dash(clr)) {
    for (const auto& c : clr) {
      try {
        g.clr.push_back(std::stoi(c));
      } catch (const std::exception&) {
        throw DomainError("graph file: clr must be given for every flag or none");
      }
    }
  }
  validate(g);
  return g;
}

std::string to_dot(const Graph& g) {
  std::ostringstream os;
  os << (g.directed() ? "digraph" : "graph") << " G {\n  node [shape=circle];\n";
  const std::string arrow = g.directed() ? " -> " : " -- ";
  for (int v = 0; v < g.nv; ++v) os << "  v" << v + 1 << " [label=\"" << v + 1 << "\"];\n";
  for (int f = 0; f < g.nflags(); ++f) {
    std::string label = std::to_string(f + 1);
    if (g.colored()) label += ":" + std::to_string(g.clr[f]);
    if (g.inv[f] == f) {
      os << "  t" << f + 1 << " [shape=point];\n";
      bool in = g.directed() && g.io[f] == 1;
      if (in)
        os << "  t" << f + 1 << arrow << "v" << g.vertex[f] + 1;
      else
        os << "  v" << g.vertex[f] + 1 << arrow << "t" << f + 1;
      os << " [label=\"" << label << "\"];\n";
    } else if (f < g.inv[f]) {
      int a = f, b = g.inv[f];
      if (g.directed() && g.io[a] == 1) std::swap(a, b);
      os << "  v" << g.vertex[a] + 1 << arrow << "v" << g.vertex[b] + 1 << " [label=\"" << a + 1 << "/" << b + 1
         << "\"];\n";
    }
  }
  os << "}\n";
  return os.str();
}

std::string to_dot(const GraphMorphism& m) {
  const Graph& s = m.source;
  std::ostringstream os;
  const std::string arrow = s.directed() ? " -> " : " -- ";
  os << (s.directed() ? "digraph" : "graph") << " M {\n  node [shape=circle];\n";
  for (int w = 0; w < m.target.nv; ++w) {
    os << "  subgraph cluster_" << w + 1 << " {\n    label=\"target vertex " << w + 1 << "\";\n";
    for (int v = 0; v < s.nv; ++v)
      if (m.vmap(v) == w) os << "    v" << v + 1 << ";\n";
    os << "  }\n";
  }
  for (auto [f, h] : s.edges()) os << "  v" << s.vertex[f] + 1 << arrow << "v" << s.vertex[h] + 1 << ";\n";
  for (auto [f, h] : ghost_edges(m)) {
    int a = f, b = h;
    if (s.directed() && s.io[a] == 1) std::swap(a, b);
    os << "  v" << s.vertex[a] + 1 << arrow << "v" << s.vertex[b] + 1 << " [style=dashed];\n";
  }
  std::vector<int> pre = inverse_injection(m.fmap, s.nflags());
  for (int f = 0; f < s.nflags(); ++f)
    if (pre[f] >= 0 && m.target.inv[pre[f]] == pre[f]) {
      os << "  t" << f + 1 << " [shape=point];\n";
      bool in = s.directed() && s.io[f] == 1;
      if (in)
        os << "  t" << f + 1 << arrow << "v" << s.vertex[f] + 1 << ";\n";
      else
        os << "  v" << s.vertex[f] + 1 << arrow << "t" << f + 1 << ";\n";
    }
  os << "}\n";
  return os.str();
}

// ---------------------------------------------------------------------------
// Groupoid-colored graphs

void validate(const ColoredGraph& g, const Groupoid& G) {
  validate(g.graph);
  const Graph& x = g.graph;
  if (!x.colored() && x.nflags() > 0) throw DomainError("colored graph: missing colors");
  if (static_cast<int>(g.sigma.size()) != x.nflags()) throw DomainError("colored graph: sigma has the wrong size");
  for (int f = 0; f < x.nflags(); ++f) {
    if (x.clr[f] < 0 || x.clr[f] >= G.nobj) throw DomainError("colored graph: color out of range");
    int e = x.inv[f];
    if (e == f) {
      if (g.sigma[f] != -1) throw DomainError("colored graph: tail " + n1(f) + " carries an isomorphism");
      continue;
    }
    int a = g.sigma[f];
    if (a < 0 || a >= G.narrows() || G.src[a] != x.clr[f] || G.tgt[a] != x.clr[e])
      throw DomainError("colored graph: edge isomorphism at flag " + n1(f) + " has the wrong colors");
    if (g.sigma[e] != G.inverse(a)) throw DomainError("colored graph: reorientation at flag " + n1(f) + " is not the inverse");
  }
}

void validate(const ColoredMorphism& m, const Groupoid& G) {
  validate(m.source, G);
  validate(m.target, G);
  if (!(m.map.source == m.source.graph) || !(m.map.target == m.target.graph))
    throw DomainError("colored morphism: graph morphism does not match the colored graphs");
  validate(m.map, false);
  const Graph& s = m.source.graph;
  const Graph& t = m.target.graph;
  if (static_cast<int>(m.ghost_sigma.size()) != s.nflags() || static_cast<int>(m.tau.size()) != t.nflags())
    throw DomainError("colored morphism: isomorphism lists have the wrong size");
  for (int f = 0; f < s.nflags(); ++f) {
    int g = m.map.ghost[f];
    if (g < 0) {
      if (m.ghost_sigma[f] != -1) throw DomainError("colored morphism: surviving flag carries a ghost isomorphism");
      continue;
    }
    int a = m.ghost_sigma[f];
    if (a < 0 || G.src[a] != s.clr[f] || G.tgt[a] != s.clr[g])
      throw DomainError("colored morphism: ghost isomorphism at flag " + n1(f) + " has the wrong colors");
    if (m.ghost_sigma[g] != G.inverse(a)) throw DomainError("colored morphism: ghost reorientation is not the inverse");
  }
  for (int a = 0; a < t.nflags(); ++a) {
    int r = m.tau[a];
    if (r < 0 || G.src[r] != t.clr[a] || G.tgt[r] != s.clr[m.map.fmap[a]])
      throw DomainError("colored morphism: recoloring of flag " + n1(a) + " has the wrong colors");
  }
  // surviving edges carry conjugate isomorphisms
  for (int a = 0; a < t.nflags(); ++a) {
    int b = t.inv[a];
    int f = m.map.fmap[a];
    if (b == a || s.inv[f] == f) continue;
    int expect = G.compose(m.tau[b], G.compose(m.target.sigma[a], G.inverse(m.tau[a])));
    if (m.source.sigma[f] != expect) throw DomainError("colored morphism: edge isomorphism at flag " + n1(a) + " is not preserved");
  }
}

ColoredMorphism compose_colored(const ColoredMorphism& psi, const ColoredMorphism& phi, const Groupoid& G) {
  ColoredMorphism m;
  m.source = phi.source;
  m.target = psi.target;
  m.map = compose_graph_morphisms(psi.map, phi.map);
  const int n = phi.source.graph.nflags();
  std::vector<int> pre = inverse_injection(phi.map.fmap, n);
  m.ghost_sigma.assign(n, -1);
  for (int f = 0; f < n; ++f) {
    if (pre[f] < 0) {
      m.ghost_sigma[f] = phi.ghost_sigma[f];
      continue;
    }
    int a = pre[f], b = psi.map.ghost[a];
    if (b < 0) continue;
    m.ghost_sigma[f] = G.compose(phi.tau[b], G.compose(psi.ghost_sigma[a], G.inverse(phi.tau[a])));
  }
  for (int c = 0; c < psi.target.graph.nflags(); ++c)
    m.tau.push_back(G.compose(phi.tau[psi.map.fmap[c]], psi.tau[c]));
  return m;
}

namespace {

int random_arrow(const Groupoid& G, int a, int b, Rng& rng) {
  auto h = G.hom(a, b);
  if (h.empty()) throw DomainError("colored graph: no isomorphism between the colors");
  return h[rng() % h.size()];
}

int random_arrow_into(const Groupoid& G, int b, Rng& rng) {
  std::vector<int> in;
  for (int f = 0; f < G.narrows(); ++f)
    if (G.tgt[f] == b) in.push_back(f);
  return in[rng() % in.size()];
}

/// Colors up to isomorphism: the connected component of each object.
std::vector<int> object_components(const Groupoid& G) {
  UnionFind uf(G.nobj);
  for (int f = 0; f < G.narrows(); ++f) uf.unite(G.src[f], G.tgt[f]);
  return uf.classes();
}

}  // namespace

ColoredGraph random_colored_graph(const Groupoid& G, int max_flags, Rng& rng) {
  ColoredGraph c;
  c.graph = random_graph(max_flags, 3, rng);
  Graph& x = c.graph;
  x.clr.assign(x.nflags(), 0);
  c.sigma.assign(x.nflags(), -1);
  for (int f = 0; f < x.nflags(); ++f) {
    if (x.inv[f] < f) continue;
    x.clr[f] = static_cast<int>(rng() % G.nobj);
    if (x.inv[f] == f) continue;
    int a = G.src.size() ? -1 : -1;
    std::vector<int> out;
    for (int g = 0; g < G.narrows(); ++g)
      if (G.src[g] == x.clr[f]) out.push_back(g);
    a = out[rng() % out.size()];
    x.clr[x.inv[f]] = G.tgt[a];
    c.sigma[f] = a;
    c.sigma[x.inv[f]] = G.inverse(a);
  }
  return c;
}

ColoredMorphism random_colored_morphism(const ColoredGraph& g, const Groupoid& G, Rng& rng) {
  // Pair flags only when their colors are isomorphic.
  auto comp = object_components(G);
  Graph shadow = g.graph;
  for (auto& c : shadow.clr) c = comp[c];
  GraphMorphism base = random_morphism(shadow, rng);
  ColoredMorphism m;
  m.source = g;
  m.map = base;
  m.map.source = g.graph;
  Graph& t = m.map.target;
  const Graph& s = g.graph;
  m.tau.resize(t.nflags());
  for (int a = 0; a < t.nflags(); ++a) {
    m.tau[a] = random_arrow_into(G, s.clr[m.map.fmap[a]], rng);
    t.clr[a] = G.src[m.tau[a]];
  }
  m.ghost_sigma.assign(s.nflags(), -1);
  for (auto [f, h] : ghost_edges(m.map)) {
    m.ghost_sigma[f] = random_arrow(G, s.clr[f], s.clr[h], rng);
    m.ghost_sigma[h] = G.inverse(m.ghost_sigma[f]);
  }
  m.target.graph = t;
  m.target.sigma.assign(t.nflags(), -1);
  for (int a = 0; a < t.nflags(); ++a) {
    int b = t.inv[a];
    if (b <= a) continue;
    int f = m.map.fmap[a];
    int arrow;
    if (s.inv[f] != f)  // surviving edge: conjugate the source isomorphism
      arrow = G.compose(G.inverse(m.tau[b]), G.compose(g.sigma[f], m.tau[a]));
    else
      arrow = random_arrow(G, t.clr[a], t.clr[b], rng);
    m.target.sigma[a] = arrow;
    m.target.sigma[b] = G.inverse(arrow);
  }
  return m;
}

// ---------------------------------------------------------------------------
// Graphical plus construction

namespace {

/// The tensor of the corollas, read from inputs in label order to outputs in label order.
Morphism sorted_tensor(const Instance& I, const std::vector<DecoratedCorolla>& cs, std::vector<int>& ins,
                       std::vector<int>& outs) {
  std::vector<int> cin, cout_;
  std::vector<Morphism> decos;
  for (const auto& c : cs) {
    if (!std::is_sorted(c.ins.begin(), c.ins.end()) || !std::is_sorted(c.outs.begin(), c.outs.end()))
      throw DomainError("graphical: corolla flags must be listed in label order");
    if (I.src(c.deco) != static_cast<int>(c.ins.size()) || I.tgt(c.deco) != static_cast<int>(c.outs.size()))
      throw DomainError("graphical: decoration does not match the corolla's flags");
    cin.insert(cin.end(), c.ins.begin(), c.ins.end());
    cout_.insert(cout_.end(), c.outs.begin(), c.outs.end());
    decos.push_back(c.deco);
  }
  ins = cin;
  outs = cout_;
  std::sort(ins.begin(), ins.end());
  std::sort(outs.begin(), outs.end());
  if (std::adjacent_find(ins.begin(), ins.end()) != ins.end() || std::adjacent_find(outs.begin(), outs.end()) != outs.end())
    throw DomainError("graphical: repeated flag label");
  auto position = [](const std::vector<int>& v, int x) {
    return static_cast<int>(std::lower_bound(v.begin(), v.end(), x) - v.begin());
  };
  std::vector<int> pin(ins.size()), pout(cout_.size());
  for (size_t i = 0; i < cin.size(); ++i) pin[position(ins, cin[i])] = static_cast<int>(i);
  for (size_t j = 0; j < cout_.size(); ++j) pout[j] = position(outs, cout_[j]);
  Morphism t = I.tensor_all(decos);
  return I.compose(I.permutation(FinMap(static_cast<int>(pout.size()), pout)),
                   I.compose(t, I.permutation(FinMap(static_cast<int>(pin.size()), pin))));
}

const Instance& graph_instance(const GraphicalMorphism& m) {
  if (!m.instance) throw DomainError("graphical morphism without a base instance");
  return *m.instance;
}

bool hereditary_cached(const Instance& I) {
  static std::mutex mu;
  static std::map<std::string, bool> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(I.name());
  if (it != cache.end()) return it->second;
  bool h = check_hereditary(I, 2, 20000).hereditary;
  cache[I.name()] = h;
  return h;
}

}  // namespace

DecoratedCorolla graphical_compose(const Instance& I, const std::vector<DecoratedCorolla>& lower,
                                   const std::vector<DecoratedCorolla>& upper,
                                   const std::vector<std::pair<int, int>>& gluing) {
  std::vector<int> lin, lout, uin, uout;
  Morphism phi = sorted_tensor(I, lower, lin, lout);
  DecoratedCorolla r;
  r.ins = lin;
  if (upper.empty() && gluing.empty()) {
    r.outs = lout;
    r.deco = phi;
    return r;
  }
  Morphism phi2 = sorted_tensor(I, upper, uin, uout);
  if (gluing.size() != lout.size() || gluing.size() != uin.size())
    throw DomainError("graphical: the gluing must match all lower outputs with all upper inputs");
  std::vector<int> img(lout.size(), -1);
  std::vector<bool> hit(uin.size(), false);
  for (auto [a, b] : gluing) {
    auto ia = std::lower_bound(lout.begin(), lout.end(), a);
    auto ib = std::lower_bound(uin.begin(), uin.end(), b);
    if (ia == lout.end() || *ia != a || ib == uin.end() || *ib != b)
      throw DomainError("graphical: gluing refers to an unknown flag");
    int i = static_cast<int>(ia - lout.begin()), j = static_cast<int>(ib - uin.begin());
    if (img[i] >= 0 || hit[j]) throw DomainError("graphical: gluing is not a bijection");
    img[i] = j;
    hit[j] = true;
  }
  Morphism sigma = I.permutation(FinMap(static_cast<int>(img.size()), img));
  r.outs = uout;
  r.deco = I.compose(phi2, I.compose(sigma, phi));
  return r;
}

GraphicalMorphism convert_plus_to_colored(const PlusMorphism& g0) {
  if (g0.variant != Variant::Strong && g0.variant != Variant::Gcp)
    throw DomainError("convert: StrongPlus or Gcp morphisms only");
  const Instance& I = *g0.instance;
  if (!hereditary_cached(I)) throw DomainError("convert: instance " + I.name() + " is not hereditary");
  PlusMorphism g = canonical_form(g0);
  auto comps = plus_components(g);
  const int nin = I.src(g.target[0]), nout = I.tgt(g.target[0]);
  const int nc = static_cast<int>(g.cells.size());

  GraphicalMorphism m;
  m.instance = &I;
  Graph& s = m.map.source;
  s.nv = 0;
  std::vector<std::vector<int>> in_flag(nc), out_flag(nc);
  auto add_flag = [&](int v, int io) {
    s.vertex.push_back(v);
    s.inv.push_back(s.nflags() - 1);
    s.io.push_back(io);
    s.clr.push_back(0);
    return s.nflags() - 1;
  };
  for (int c = 0; c < nc; ++c) {
    int v = s.nv++;
    for (int p = 0; p < I.src(g.cells[c].deco); ++p) in_flag[c].push_back(add_flag(v, 1));
    for (int q = 0; q < I.tgt(g.cells[c].deco); ++q) out_flag[c].push_back(add_flag(v, -1));
    m.source_deco.push_back(g.cells[c].deco);
    m.unit.push_back(false);
  }
  // wires running straight from an input to an output carry a unit vertex
  std::vector<int> unit_in(nin, -1), unit_out(nout, -1), unit_vertex(nin, -1);
  for (int y = 0; y < nout; ++y) {
    const Port& p = g.feed_out[0][y];
    if (!p.boundary) continue;
    int v = s.nv++;
    unit_vertex[p.index] = v;
    unit_in[p.index] = add_flag(v, 1);
    unit_out[y] = add_flag(v, -1);
    m.source_deco.push_back(I.identity(1));
    m.unit.push_back(true);
  }
  // target: one corolla per component; input x has label x, output y has label nin + y
  Graph& t = m.map.target;
  t.nv = static_cast<int>(comps.size());
  std::vector<int> comp_of_in(nin), comp_of_out(nout), comp_of_cell(nc, -1);
  for (size_t k = 0; k < comps.size(); ++k) {
    for (int x : comps[k].inputs) comp_of_in[x] = static_cast<int>(k);
    for (int y : comps[k].outputs) comp_of_out[y] = static_cast<int>(k);
    for (int c : comps[k].cells) comp_of_cell[c] = static_cast<int>(k);
    m.target_deco.push_back(comps[k].value);
  }
  for (int x = 0; x < nin; ++x) {
    t.vertex.push_back(comp_of_in[x]);
    t.io.push_back(1);
  }
  for (int y = 0; y < nout; ++y) {
    t.vertex.push_back(comp_of_out[y]);
    t.io.push_back(-1);
  }
  t.inv.resize(nin + nout);
  std::iota(t.inv.begin(), t.inv.end(), 0);
  t.clr.assign(nin + nout, 0);

  std::vector<int> vimg(s.nv);
  for (int c = 0; c < nc; ++c) vimg[c] = comp_of_cell[c];
  for (int x = 0; x < nin; ++x)
    if (unit_vertex[x] >= 0) vimg[unit_vertex[x]] = comp_of_in[x];
  m.map.vmap = FinMap(t.nv, vimg);
  m.map.fmap.assign(nin + nout, -1);
  m.map.ghost.assign(s.nflags(), -1);
  for (int c = 0; c < nc; ++c)
    for (size_t p = 0; p < g.feed_in[c].size(); ++p) {
      const Port& src = g.feed_in[c][p];
      int f = in_flag[c][p];
      if (src.boundary) {
        m.map.fmap[src.index] = f;
      } else {
        int h = out_flag[src.owner][src.index];
        m.map.ghost[f] = h;
        m.map.ghost[h] = f;
      }
    }
  for (int x = 0; x < nin; ++x)
    if (unit_in[x] >= 0) m.map.fmap[x] = unit_in[x];
  for (int y = 0; y < nout; ++y) {
    const Port& p = g.feed_out[0][y];
    m.map.fmap[nin + y] = p.boundary ? unit_out[y] : out_flag[p.owner][p.index];
  }
  validate(m.map);
  return m;
}

std::vector<Morphism> evaluate_graphical(const GraphicalMorphism& m) {
  const Instance& I = graph_instance(m);
  validate(m.map);
  const Graph& s = m.map.source;
  const Graph& t = m.map.target;
  if (!s.directed() || !is_aggregate(s)) throw DomainError("graphical: the source must be a directed aggregate");
  std::vector<int> pre = inverse_injection(m.map.fmap, s.nflags());
  std::vector<Morphism> result;
  for (int w = 0; w < t.nv; ++w) {
    std::vector<int> fiber;
    for (int v = 0; v < s.nv; ++v)
      if (m.map.vmap(v) == w) fiber.push_back(v);
    // levels: one more than the highest producer feeding the vertex
    std::map<int, int> level;
    for (size_t round = 0; round <= fiber.size(); ++round) {
      bool changed = false;
      for (int v : fiber) {
        int l = 1;
        for (int f : s.flags_at(v))
          if (s.io[f] == 1 && m.map.ghost[f] >= 0) {
            auto it = level.find(s.vertex[m.map.ghost[f]]);
            l = std::max(l, (it == level.end() ? 1 : it->second) + 1);
          }
        if (level[v] != l) {
          level[v] = l;
          changed = true;
        }
      }
      if (!changed) break;
      if (round == fiber.size()) throw DomainError("graphical: the ghost graph has a directed cycle");
    }
    int L = 1;
    for (auto& [v, l] : level) L = std::max(L, l);
    std::vector<std::vector<DecoratedCorolla>> rows(L + 1);
    std::vector<std::vector<std::pair<int, int>>> glue(L + 1);
    for (int v : fiber) {
      DecoratedCorolla c;
      for (int f : s.flags_at(v)) (s.io[f] == 1 ? c.ins : c.outs).push_back(f);
      c.deco = m.source_deco[v];
      c.unit = m.unit[v];
      rows[level[v]].push_back(c);
    }
    int fresh = s.nflags();
    std::map<int, int> alias;  // scaffolded boundary label -> original flag
    // a unit at level l on a strand; returns its (in, out) labels
    auto scaffold = [&](int l) {
      DecoratedCorolla u;
      u.ins = {fresh++};
      u.outs = {fresh++};
      u.deco = I.identity(1);
      u.unit = true;
      rows[l].push_back(u);
      return std::make_pair(u.ins[0], u.outs[0]);
    };
    for (int v : fiber)
      for (int f : s.flags_at(v)) {
        const int lv = level[v];
        if (s.io[f] == 1 && m.map.ghost[f] >= 0) {
          int a = m.map.ghost[f];
          int lu = level[s.vertex[a]];
          int prev = a;
          for (int l = lu + 1; l < lv; ++l) {
            auto [in, out] = scaffold(l);
            glue[l - 1].emplace_back(prev, in);
            prev = out;
          }
          glue[lv - 1].emplace_back(prev, f);
        } else if (s.io[f] == 1 && lv > 1) {
          int prev = -1;
          for (int l = 1; l < lv; ++l) {
            auto [in, out] = scaffold(l);
            if (prev < 0)
              alias[in] = f;
            else
              glue[l - 1].emplace_back(prev, in);
            prev = out;
          }
          glue[lv - 1].emplace_back(prev, f);
        } else if (s.io[f] == -1 && m.map.ghost[f] < 0 && lv < L) {
          int prev = f;
          for (int l = lv + 1; l <= L; ++l) {
            auto [in, out] = scaffold(l);
            glue[l - 1].emplace_back(prev, in);
            prev = out;
          }
          alias[prev] = f;
        }
      }
    for (auto& row : rows)
      std::sort(row.begin(), row.end(), [](const DecoratedCorolla& a, const DecoratedCorolla& b) {
        auto key = [](const DecoratedCorolla& c) {
          return c.ins.empty() ? (c.outs.empty() ? -1 : c.outs[0]) : c.ins[0];
        };
        return key(a) < key(b);
      });
    DecoratedCorolla acc = L == 1 ? graphical_compose(I, rows[1], {}, {}) : graphical_compose(I, rows[1], rows[2], glue[1]);
    for (int l = 2; l < L; ++l) acc = graphical_compose(I, {acc}, rows[l + 1], glue[l]);
    // reorder to the target corolla's flags in label order
    auto original = [&](int label) {
      auto it = alias.find(label);
      return it == alias.end() ? label : it->second;
    };
    std::vector<int> tin, tout;
    for (int a : t.flags_at(w)) (t.io[a] == 1 ? tin : tout).push_back(a);
    auto order = [&](const std::vector<int>& acc_labels, const std::vector<int>& target_flags, bool inputs) {
      if (acc_labels.size() != target_flags.size())
        throw DomainError("graphical: boundary flags of target vertex " + n1(w) + " do not match");
      std::vector<int> img(acc_labels.size(), -1);
      for (size_t i = 0; i < acc_labels.size(); ++i) {
        int f = original(acc_labels[i]);
        if (pre[f] < 0) throw DomainError("graphical: an unmatched flag is not a boundary flag");
        auto it = std::find(target_flags.begin(), target_flags.end(), pre[f]);
        if (it == target_flags.end()) throw DomainError("graphical: flag lands on another target vertex");
        img[i] = static_cast<int>(it - target_flags.begin());
      }
      FinMap pi(static_cast<int>(img.size()), img);
      // inputs: target order -> acc order is pi^-1 ; outputs: acc order -> target order is pi
      return inputs ? I.permutation(pi.inverse()) : I.permutation(pi);
    };
    Morphism in_perm = order(acc.ins, tin, true);
    Morphism out_perm = order(acc.outs, tout, false);
    result.push_back(I.compose(out_perm, I.compose(acc.deco, in_perm)));
  }
  return result;
}

Morphism assemble_target(const GraphicalMorphism& m, const std::vector<Morphism>& target_deco) {
  const Instance& I = graph_instance(m);
  const Graph& t = m.map.target;
  std::vector<DecoratedCorolla> cs(t.nv);
  for (int a = 0; a < t.nflags(); ++a) (t.io[a] == 1 ? cs[t.vertex[a]].ins : cs[t.vertex[a]].outs).push_back(a);
  for (int w = 0; w < t.nv; ++w) cs[w].deco = target_deco.at(w);
  return graphical_compose(I, cs, {}, {}).deco;
}

GraphicalMorphism insert_unit_vertex(const GraphicalMorphism& m0, int flag) {
  const Instance& I = graph_instance(m0);
  GraphicalMorphism m = m0;
  Graph& s = m.map.source;
  if (flag < 0 || flag >= s.nflags()) throw DomainError("insert_unit_vertex: no such flag");
  // orient the strand: out flag a feeding in flag b (either may be boundary)
  int a = -1, b = -1;
  std::vector<int> pre = inverse_injection(m.map.fmap, s.nflags());
  if (s.io[flag] == -1) {
    a = flag;
    b = m.map.ghost[flag];
  } else {
    b = flag;
    a = m.map.ghost[flag];
  }
  const int v = s.nv++;
  const int w = m.map.vmap(s.vertex[flag]);
  auto add_flag = [&](int io) {
    s.vertex.push_back(v);
    s.inv.push_back(s.nflags() - 1);
    s.io.push_back(io);
    if (s.colored()) s.clr.push_back(s.clr[flag]);
    m.map.ghost.push_back(-1);
    return s.nflags() - 1;
  };
  int uin = add_flag(1), uout = add_flag(-1);
  std::vector<int> img = m.map.vmap.img;
  img.push_back(w);
  m.map.vmap = FinMap(m.map.vmap.cod, img);
  auto link = [&](int x, int y) {
    m.map.ghost[x] = y;
    m.map.ghost[y] = x;
  };
  if (a >= 0) {
    link(a, uin);
  } else {
    int tf = pre[b];
    m.map.fmap[tf] = uin;
  }
  if (b >= 0) {
    link(uout, b);
  } else {
    int tf = pre[a];
    m.map.fmap[tf] = uout;
  }
  if (a >= 0 && b < 0) m.map.ghost[a] = uin;
  m.source_deco.push_back(I.identity(1));
  m.unit.push_back(true);
  validate(m.map);
  return m;
}

GraphicalMorphism remove_unit_vertex(const GraphicalMorphism& m0, int v) {
  const Graph& s0 = m0.map.source;
  if (v < 0 || v >= s0.nv || !m0.unit.at(v)) throw DomainError("remove_unit_vertex: not a unit vertex");
  auto flags = s0.flags_at(v);
  if (flags.size() != 2) throw DomainError("remove_unit_vertex: unit vertex must be bivalent");
  int x = s0.io[flags[0]] == 1 ? flags[0] : flags[1];
  int y = x == flags[0] ? flags[1] : flags[0];
  int p = m0.map.ghost[x], c = m0.map.ghost[y];
  if (p < 0 && c < 0) throw DomainError("remove_unit_vertex: a loose unit edge cannot be removed");
  GraphicalMorphism m = m0;
  std::vector<int> pre = inverse_injection(m.map.fmap, s0.nflags());
  if (p >= 0 && c >= 0) {
    m.map.ghost[p] = c;
    m.map.ghost[c] = p;
  } else if (p < 0) {
    m.map.fmap[pre[x]] = c;
    m.map.ghost[c] = -1;
  } else {
    m.map.fmap[pre[y]] = p;
    m.map.ghost[p] = -1;
  }
  // drop vertex v and flags x, y
  std::vector<int> fnew(s0.nflags(), -1);
  int nf = 0;
  for (int f = 0; f < s0.nflags(); ++f)
    if (f != x && f != y) fnew[f] = nf++;
  Graph s;
  s.nv = s0.nv - 1;
  std::vector<int> ghost;
  for (int f = 0; f < s0.nflags(); ++f) {
    if (fnew[f] < 0) continue;
    s.vertex.push_back(s0.vertex[f] > v ? s0.vertex[f] - 1 : s0.vertex[f]);
    s.inv.push_back(fnew[s0.inv[f]]);
    s.io.push_back(s0.io[f]);
    if (s0.colored()) s.clr.push_back(s0.clr[f]);
    int g = m.map.ghost[f];
    ghost.push_back(g < 0 ? -1 : fnew[g]);
  }
  for (auto& f : m.map.fmap) f = fnew[f];
  std::vector<int> img;
  for (int u = 0; u < s0.nv; ++u)
    if (u != v) img.push_back(m.map.vmap(u));
  m.map.vmap = FinMap(m.map.vmap.cod, img);
  m.map.source = s;
  m.map.ghost = ghost;
  m.source_deco.erase(m.source_deco.begin() + v);
  m.unit.erase(m.unit.begin() + v);
  validate(m.map);
  return m;
}

}  // namespace ufckit
