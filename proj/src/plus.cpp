#include "ufckit/plus.hpp"

#include "ufckit/instances.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace ufckit {

std::string to_string(Variant v) {
  switch (v) {
    case Variant::Box: return "box";
    case Variant::Nc: return "nc";
    case Variant::Strong: return "strong";
    case Variant::Gcp: return "gcp";
    case Variant::Hyp: return "hyp";
  }
  return "?";
}

Variant parse_variant(const std::string& s) {
  for (Variant v : {Variant::Box, Variant::Nc, Variant::Strong, Variant::Gcp, Variant::Hyp})
    if (to_string(v) == s) return v;
  throw DomainError("unknown plus variant '" + s + "' (expected box, nc, strong, gcp, hyp)");
}

bool is_strong_based(Variant v) {
  return v == Variant::Strong || v == Variant::Gcp || v == Variant::Hyp;
}

namespace {

const Instance& inst(const PlusMorphism& g) {
  if (!g.instance) throw DomainError("plus morphism without a base instance");
  return *g.instance;
}

Morphism tensor_word(const Instance& I, const std::vector<Morphism>& w) {
  return I.tensor_all(w);
}

FinMap iota_map(int n) { return FinMap::identity(n); }

std::vector<int> iota_vec(int n) {
  std::vector<int> v(n);
  std::iota(v.begin(), v.end(), 0);
  return v;
}

FinMap random_perm(int n, Rng& rng) {
  auto v = iota_vec(n);
  std::shuffle(v.begin(), v.end(), rng);
  return FinMap(n, v);
}

PlusMorphism skeleton(Variant v, const Instance& I, std::vector<Morphism> source,
                      std::vector<Morphism> target) {
  PlusMorphism g;
  g.variant = v;
  g.instance = &I;
  g.source = std::move(source);
  g.target = std::move(target);
  g.feed_out.resize(g.target.size());
  for (size_t j = 0; j < g.target.size(); ++j) g.feed_out[j].resize(I.tgt(g.target[j]));
  return g;
}

/// A cell standing for a whole source entry.
int add_whole_cell(PlusMorphism& g, int entry, int basic) {
  const Instance& I = inst(g);
  PlusCell c;
  c.entry = entry;
  c.basic = basic;
  c.deco = g.source[entry];
  c.ins = iota_vec(I.src(c.deco));
  c.outs = iota_vec(I.tgt(c.deco));
  g.cells.push_back(c);
  g.feed_in.emplace_back(c.ins.size());
  return static_cast<int>(g.cells.size()) - 1;
}

int cell_in(const PlusMorphism& g, int c) { return inst(g).src(g.cells[c].deco); }
int cell_out(const PlusMorphism& g, int c) { return inst(g).tgt(g.cells[c].deco); }

// ---------------------------------------------------------------------------
// Structural checks and evaluation

void check_structure(const PlusMorphism& g) {
  const Instance& I = inst(g);
  const int nc = static_cast<int>(g.cells.size());
  const int nb = static_cast<int>(g.target.size());
  if (static_cast<int>(g.feed_in.size()) != nc) throw DomainError("plus: feed_in size mismatch");
  if (static_cast<int>(g.feed_out.size()) != nb) throw DomainError("plus: feed_out size mismatch");
  auto check_producer = [&](const Port& p) {
    if (p.is_dangling()) {
      if (g.variant != Variant::Hyp) throw DomainError("plus: dangling wire outside hyp");
      return;
    }
    if (p.boundary) {
      if (p.owner >= nb || p.index < 0 || p.index >= I.src(g.target[p.owner]))
        throw DomainError("plus: boundary port out of range");
    } else {
      if (p.owner < 0 || p.owner >= nc || p.index < 0 || p.index >= cell_out(g, p.owner))
        throw DomainError("plus: cell port out of range");
    }
  };
  for (int c = 0; c < nc; ++c) {
    const PlusCell& cell = g.cells[c];
    if (static_cast<int>(g.feed_in[c].size()) != I.src(cell.deco))
      throw DomainError("plus: cell " + std::to_string(c + 1) + " has the wrong number of inputs");
    if (cell.entry >= 0) {
      if (cell.entry >= static_cast<int>(g.source.size()))
        throw DomainError("plus: cell entry out of range");
      if (static_cast<int>(cell.ins.size()) != I.src(cell.deco) ||
          static_cast<int>(cell.outs.size()) != I.tgt(cell.deco))
        throw DomainError("plus: cell wire lists do not match its decoration");
    } else {
      if (g.variant != Variant::Gcp && g.variant != Variant::Hyp)
        throw DomainError("plus: unit markers exist only in gcp and hyp");
      if (!I.is_iso(cell.deco) || *I.as_permutation(cell.deco) != iota_map(I.src(cell.deco)))
        throw DomainError("plus: unit marker must be decorated by an identity");
    }
    if (cell.basic < -1 || cell.basic >= nb) throw DomainError("plus: cell basic out of range");
    if (cell.basic == -1 && g.variant != Variant::Hyp)
      throw DomainError("plus: absorbed cells exist only in hyp");
    for (const auto& p : g.feed_in[c]) check_producer(p);
  }
  for (int j = 0; j < nb; ++j) {
    if (static_cast<int>(g.feed_out[j].size()) != I.tgt(g.target[j]))
      throw DomainError("plus: basic " + std::to_string(j + 1) + " has the wrong number of outputs");
    for (const auto& p : g.feed_out[j]) {
      check_producer(p);
      if (p.is_dangling()) throw DomainError("plus: dangling boundary output");
    }
  }
}

/// Cells of `cells` ordered so that every cell comes after its producers.
std::vector<int> topo_order(const PlusMorphism& g, const std::vector<int>& cells) {
  std::set<int> pending(cells.begin(), cells.end());
  std::vector<int> order;
  while (!pending.empty()) {
    bool progress = false;
    for (auto it = pending.begin(); it != pending.end();) {
      bool ready = true;
      for (const auto& p : g.feed_in[*it])
        if (!p.boundary && pending.count(p.owner)) ready = false;
      if (ready) {
        order.push_back(*it);
        it = pending.erase(it);
        progress = true;
      } else {
        ++it;
      }
    }
    if (!progress) throw DomainError("plus: the wiring has a cycle");
  }
  return order;
}

/// Composite of `cells` from the ordered producers `inputs` to the ordered producers `outputs`.
Morphism eval_ports(const PlusMorphism& g, const std::vector<int>& cells,
                    const std::vector<Port>& inputs, const std::vector<Port>& outputs) {
  const Instance& I = inst(g);
  std::vector<Port> live = inputs;
  Morphism F = I.identity(static_cast<int>(live.size()));
  for (int c : topo_order(g, cells)) {
    const auto& feeds = g.feed_in[c];
    const int nin = static_cast<int>(feeds.size());
    std::vector<int> img(live.size(), -1);
    std::vector<Port> rest;
    std::vector<bool> found(nin, false);
    for (size_t i = 0; i < live.size(); ++i) {
      auto it = std::find(feeds.begin(), feeds.end(), live[i]);
      if (it != feeds.end()) {
        int p = static_cast<int>(it - feeds.begin());
        img[i] = p;
        found[p] = true;
      } else {
        img[i] = nin + static_cast<int>(rest.size());
        rest.push_back(live[i]);
      }
    }
    for (int p = 0; p < nin; ++p)
      if (!found[p]) throw DomainError("plus: input of cell " + std::to_string(c + 1) + " is not produced in its basic");
    const int nrest = static_cast<int>(rest.size());
    F = I.compose(I.permutation(FinMap(static_cast<int>(live.size()), img)), F);
    F = I.compose(I.tensor(g.cells[c].deco, I.identity(nrest)), F);
    live.clear();
    for (int q = 0; q < cell_out(g, c); ++q) live.push_back(Port::cell(c, q));
    live.insert(live.end(), rest.begin(), rest.end());
  }
  if (live.size() != outputs.size()) throw DomainError("plus: produced wires do not match the outputs");
  std::vector<int> img(live.size());
  for (size_t i = 0; i < live.size(); ++i) {
    auto it = std::find(outputs.begin(), outputs.end(), live[i]);
    if (it == outputs.end()) throw DomainError("plus: a produced wire is never consumed");
    img[i] = static_cast<int>(it - outputs.begin());
  }
  FinMap pi(static_cast<int>(live.size()), img);
  if (!pi.is_bijection()) throw DomainError("plus: a wire is consumed twice");
  return I.compose(I.permutation(pi), F);
}

std::vector<int> cells_of_basic(const PlusMorphism& g, int j) {
  std::vector<int> out;
  for (size_t c = 0; c < g.cells.size(); ++c)
    if (g.cells[c].basic == j) out.push_back(static_cast<int>(c));
  return out;
}

std::vector<Port> basic_inputs(const PlusMorphism& g, int j) {
  std::vector<Port> in;
  for (int x = 0; x < inst(g).src(g.target[j]); ++x) in.push_back(Port::bnd(j, x));
  return in;
}

// ---------------------------------------------------------------------------
// Composition trees (Box / Nc)

uint64_t leaf_mask(const Node& n) {
  if (n.is_leaf()) return uint64_t{1} << n.slot;
  uint64_t m = 0;
  for (const auto& k : n.kids) m |= leaf_mask(k);
  return m;
}

int min_leaf(const Node& n) {
  if (n.is_leaf()) return n.slot;
  int m = 1 << 30;
  for (const auto& k : n.kids) m = std::min(m, min_leaf(k));
  return m;
}

/// Reduced, with tensor children ordered by their least cell (the symmetry absorbs the order).
Node normalize_tree(const Node& n) {
  if (n.is_leaf()) return n;
  std::vector<Node> kids;
  for (const auto& k : n.kids) {
    Node nk = normalize_tree(k);
    if (nk.op == n.op)
      kids.insert(kids.end(), nk.kids.begin(), nk.kids.end());
    else
      kids.push_back(std::move(nk));
  }
  if (n.op == Op::Otimes)
    std::sort(kids.begin(), kids.end(),
              [](const Node& a, const Node& b) { return min_leaf(a) < min_leaf(b); });
  if (kids.size() == 1) return kids[0];
  return Node::make(n.op, std::move(kids));
}

Node group(Op op, std::vector<Node> kids) {
  if (kids.size() == 1) return kids[0];
  return Node::make(op, std::move(kids));
}

/// adj[c] = cells sharing a wire with c.
using Adjacency = std::vector<uint64_t>;

Adjacency adjacency(const PlusMorphism& g) {
  Adjacency adj(g.cells.size(), 0);
  for (size_t c = 0; c < g.cells.size(); ++c)
    for (const auto& p : g.feed_in[c])
      if (!p.boundary) {
        adj[c] |= uint64_t{1} << p.owner;
        adj[p.owner] |= uint64_t{1} << c;
      }
  return adj;
}

bool wired(const Adjacency& adj, uint64_t a, uint64_t b) {
  for (size_t c = 0; c < adj.size(); ++c)
    if ((a >> c & 1) && (adj[c] & b)) return true;
  return false;
}

/// Trees reachable from n by one interchange move at some subtree.
std::vector<Node> tree_moves(const Node& n, const Adjacency& adj) {
  std::vector<Node> out;
  if (n.is_leaf()) return out;
  for (size_t i = 0; i < n.kids.size(); ++i)
    for (auto& m : tree_moves(n.kids[i], adj)) {
      Node copy = n;
      copy.kids[i] = std::move(m);
      out.push_back(normalize_tree(copy));
    }
  if (n.op == Op::Otimes) {
    // Vertical cut: tensor of composites -> composite of tensors.
    std::vector<int> circ;
    for (size_t i = 0; i < n.kids.size(); ++i)
      if (n.kids[i].op == Op::Circ) circ.push_back(static_cast<int>(i));
    const int nc = static_cast<int>(circ.size());
    for (uint32_t mask = 0; mask < (1u << nc); ++mask) {
      if (__builtin_popcount(mask) < 2) continue;
      std::vector<int> chosen;
      for (int b = 0; b < nc; ++b)
        if (mask >> b & 1) chosen.push_back(circ[b]);
      std::vector<int> cut(chosen.size(), 1);
      while (true) {
        std::vector<Node> tops, bottoms, others;
        for (size_t i = 0; i < n.kids.size(); ++i) {
          auto it = std::find(chosen.begin(), chosen.end(), static_cast<int>(i));
          if (it == chosen.end()) {
            others.push_back(n.kids[i]);
            continue;
          }
          const auto& ks = n.kids[i].kids;
          int k = cut[it - chosen.begin()];
          tops.push_back(group(Op::Circ, {ks.begin(), ks.begin() + k}));
          bottoms.push_back(group(Op::Circ, {ks.begin() + k, ks.end()}));
        }
        Node circ_node = Node::make(Op::Circ, {group(Op::Otimes, tops), group(Op::Otimes, bottoms)});
        others.push_back(circ_node);
        out.push_back(normalize_tree(group(Op::Otimes, others)));
        size_t d = 0;
        while (d < chosen.size()) {
          if (++cut[d] < static_cast<int>(n.kids[chosen[d]].kids.size())) break;
          cut[d] = 1;
          ++d;
        }
        if (d == chosen.size()) break;
      }
    }
  }
  if (n.op == Op::Circ) {
    // Horizontal cut: composite of tensors -> tensor of composites, if no wire crosses.
    const int r = static_cast<int>(n.kids.size());
    for (int a = 0; a < r; ++a)
      for (int b = a + 1; b < r; ++b) {
        bool ok = true;
        for (int i = a; i <= b; ++i) ok = ok && n.kids[i].op == Op::Otimes;
        if (!ok) break;
        std::vector<uint32_t> part(b - a + 1, 1);
        while (true) {
          uint64_t left = 0, right = 0;
          std::vector<Node> lefts, rights;
          for (int i = a; i <= b; ++i) {
            std::vector<Node> l, rr;
            const auto& ks = n.kids[i].kids;
            for (size_t k = 0; k < ks.size(); ++k) {
              if (part[i - a] >> k & 1) {
                l.push_back(ks[k]);
                left |= leaf_mask(ks[k]);
              } else {
                rr.push_back(ks[k]);
                right |= leaf_mask(ks[k]);
              }
            }
            lefts.push_back(group(Op::Otimes, l));
            rights.push_back(group(Op::Otimes, rr));
          }
          if (!wired(adj, left, right)) {
            std::vector<Node> kids(n.kids.begin(), n.kids.begin() + a);
            kids.push_back(Node::make(Op::Otimes, {group(Op::Circ, lefts), group(Op::Circ, rights)}));
            kids.insert(kids.end(), n.kids.begin() + b + 1, n.kids.end());
            out.push_back(normalize_tree(group(Op::Circ, kids)));
          }
          int d = 0;
          while (d <= b - a) {
            uint32_t full = (1u << n.kids[a + d].kids.size()) - 1;
            if (++part[d] < full) break;
            part[d] = 1;
            ++d;
          }
          if (d > b - a) break;
        }
      }
  }
  return out;
}

Node canonical_tree(const Node& t, const Adjacency& adj) {
  std::set<Node> seen{normalize_tree(t)};
  std::vector<Node> frontier(seen.begin(), seen.end());
  while (!frontier.empty()) {
    std::vector<Node> next;
    for (const auto& n : frontier)
      for (auto& m : tree_moves(n, adj))
        if (seen.insert(m).second) next.push_back(std::move(m));
    frontier = std::move(next);
  }
  return *seen.begin();
}

bool is_chain(const Node& t) {
  if (t.is_leaf()) return true;
  if (t.op != Op::Circ) return false;
  for (const auto& k : t.kids)
    if (!k.is_leaf()) return false;
  return true;
}

/// Checks that the tree can be read as a formula for the wiring of basic j.
void check_tree(const PlusMorphism& g, int j) {
  const Node& t = g.trees[j];
  auto cells = cells_of_basic(g, j);
  uint64_t want = 0;
  for (int c : cells) want |= uint64_t{1} << c;
  std::vector<int> slots = traversal(t);
  uint64_t have = 0;
  for (int s : slots) {
    if (s < 0 || s >= 64 || (have >> s & 1)) throw DomainError("plus: tree leaves must be distinct cells");
    have |= uint64_t{1} << s;
  }
  if (have != want) throw DomainError("plus: tree of basic " + std::to_string(j + 1) + " does not list its cells");
  if (g.variant == Variant::Box && !is_chain(normalize_tree(t)))
    throw DomainError("plus: box basics must be linear chains");
  // consumer of each producer
  std::map<Port, std::pair<bool, int>> consumer_cell;  // producer -> (is cell, cell)
  for (size_t c = 0; c < g.cells.size(); ++c)
    for (const auto& p : g.feed_in[c]) consumer_cell[p] = {true, static_cast<int>(c)};
  for (const auto& p : g.feed_out[j]) consumer_cell[p] = {false, -1};
  std::function<void(const Node&)> rec = [&](const Node& n) {
    if (n.is_leaf()) return;
    std::vector<uint64_t> masks;
    for (const auto& k : n.kids) masks.push_back(leaf_mask(k));
    uint64_t all = leaf_mask(n);
    auto inside = [](uint64_t m, int c) { return c >= 0 && (m >> c & 1); };
    for (size_t i = 0; i < masks.size(); ++i) {
      for (int c = 0; c < 64; ++c) {
        if (!(masks[i] >> c & 1)) continue;
        for (const auto& p : g.feed_in[c]) {
          int from = p.boundary ? -1 : p.owner;
          if (inside(masks[i], from)) continue;
          bool ok;
          if (n.op == Op::Otimes)
            ok = !inside(all, from);
          else
            ok = i + 1 < masks.size() ? inside(masks[i + 1], from) : !inside(all, from);
          if (!ok) throw DomainError("plus: wiring does not follow the composition tree");
        }
        for (int q = 0; q < cell_out(g, c); ++q) {
          auto it = consumer_cell.find(Port::cell(c, q));
          int to = it != consumer_cell.end() && it->second.first ? it->second.second : -1;
          if (inside(masks[i], to)) continue;
          bool ok;
          if (n.op == Op::Otimes)
            ok = !inside(all, to);
          else
            ok = i > 0 ? inside(masks[i - 1], to) : !inside(all, to);
          if (!ok) throw DomainError("plus: wiring does not follow the composition tree");
        }
      }
    }
    for (const auto& k : n.kids) rec(k);
  };
  rec(t);
}

// ---------------------------------------------------------------------------
// Rewiring helpers

/// Rebuilds g with the cells listed in `keep` (in that order); producers of dropped
/// cells are resolved by `through`.
PlusMorphism select_cells(const PlusMorphism& g, const std::vector<int>& keep,
                          const std::function<Port(const Port&)>& through) {
  std::vector<int> pos(g.cells.size(), -1);
  for (size_t i = 0; i < keep.size(); ++i) pos[keep[i]] = static_cast<int>(i);
  auto remap = [&](const Port& p) {
    Port q = through(p);
    if (!q.boundary) {
      if (pos[q.owner] < 0) throw DomainError("plus: internal error, dropped producer");
      q.owner = pos[q.owner];
    }
    return q;
  };
  PlusMorphism out = g;
  out.cells.clear();
  out.feed_in.clear();
  for (int c : keep) {
    out.cells.push_back(g.cells[c]);
    std::vector<Port> f;
    for (const auto& p : g.feed_in[c]) f.push_back(remap(p));
    out.feed_in.push_back(f);
  }
  for (auto& row : out.feed_out)
    for (auto& p : row) p = remap(p);
  for (auto& t : out.trees) {
    std::function<void(Node&)> rel = [&](Node& n) {
      if (n.is_leaf()) n.slot = pos[n.slot];
      for (auto& k : n.kids) rel(k);
    };
    rel(t);
  }
  return out;
}

/// Removes cells whose decoration is an isomorphism selected by `drop`, rewiring through them.
PlusMorphism remove_iso_cells(const PlusMorphism& g, const std::function<bool(int)>& drop) {
  const Instance& I = inst(g);
  std::vector<int> keep;
  std::vector<std::optional<FinMap>> inv(g.cells.size());
  for (size_t c = 0; c < g.cells.size(); ++c) {
    if (drop(static_cast<int>(c))) {
      inv[c] = I.as_permutation(g.cells[c].deco)->inverse();
    } else {
      keep.push_back(static_cast<int>(c));
    }
  }
  std::function<Port(const Port&)> through = [&](const Port& p) -> Port {
    if (p.boundary || !inv[p.owner]) return p;
    return through(g.feed_in[p.owner][(*inv[p.owner])(p.index)]);
  };
  return select_cells(g, keep, through);
}

/// Orders local ports by the entry wires they carry.
void normalize_cells(PlusMorphism& g) {
  const Instance& I = inst(g);
  std::map<Port, Port> moved;
  for (size_t c = 0; c < g.cells.size(); ++c) {
    PlusCell& cell = g.cells[c];
    if (cell.entry < 0) continue;
    auto rank = [](const std::vector<int>& w) {
      std::vector<int> order = iota_vec(static_cast<int>(w.size()));
      std::sort(order.begin(), order.end(), [&](int a, int b) { return w[a] < w[b]; });
      std::vector<int> img(w.size());
      for (size_t i = 0; i < order.size(); ++i) img[order[i]] = static_cast<int>(i);
      return FinMap(static_cast<int>(w.size()), img);
    };
    FinMap sin = rank(cell.ins), sout = rank(cell.outs);
    if (sin == iota_map(sin.dom()) && sout == iota_map(sout.dom())) continue;
    cell.deco = iso_act(I, TwoCell{I.permutation(sin), I.permutation(sout)}, cell.deco);
    std::vector<int> ins(cell.ins.size()), outs(cell.outs.size());
    std::vector<Port> feeds(cell.ins.size());
    for (int p = 0; p < sin.dom(); ++p) {
      ins[sin(p)] = cell.ins[p];
      feeds[sin(p)] = g.feed_in[c][p];
    }
    for (int q = 0; q < sout.dom(); ++q) {
      outs[sout(q)] = cell.outs[q];
      moved[Port::cell(static_cast<int>(c), q)] = Port::cell(static_cast<int>(c), sout(q));
    }
    cell.ins = ins;
    cell.outs = outs;
    g.feed_in[c] = feeds;
  }
  auto fix = [&](Port& p) {
    auto it = moved.find(p);
    if (it != moved.end()) p = it->second;
  };
  for (auto& row : g.feed_in)
    for (auto& p : row) fix(p);
  for (auto& row : g.feed_out)
    for (auto& p : row) fix(p);
}

void sort_cells(PlusMorphism& g) {
  std::vector<int> order = iota_vec(static_cast<int>(g.cells.size()));
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    const auto& x = g.cells[a];
    const auto& y = g.cells[b];
    return std::tie(x.basic, x.entry, x.ins, x.outs, x.deco) <
           std::tie(y.basic, y.entry, y.ins, y.outs, y.deco);
  });
  g = select_cells(g, order, [](const Port& p) { return p; });
}

/// Merges the source and target words into single tensor entries.
void tensor_words(PlusMorphism& g) {
  const Instance& I = inst(g);
  if (g.source.size() == 1 && g.target.size() == 1) return;
  std::vector<int> sin_off, sout_off, tin_off;
  int a = 0, b = 0;
  for (const auto& s : g.source) {
    sin_off.push_back(a);
    sout_off.push_back(b);
    a += I.src(s);
    b += I.tgt(s);
  }
  int t = 0;
  for (const auto& x : g.target) {
    tin_off.push_back(t);
    t += I.src(x);
  }
  auto remap = [&](Port p) {
    if (p.boundary && p.owner >= 0) p = Port::bnd(0, tin_off[p.owner] + p.index);
    return p;
  };
  for (auto& c : g.cells) {
    if (c.entry >= 0) {
      for (auto& w : c.ins) w += sin_off[c.entry];
      for (auto& w : c.outs) w += sout_off[c.entry];
      c.entry = 0;
    }
    if (c.basic >= 0) c.basic = 0;
  }
  for (auto& row : g.feed_in)
    for (auto& p : row) p = remap(p);
  std::vector<Port> out;
  for (const auto& row : g.feed_out)
    for (const auto& p : row) out.push_back(remap(p));
  g.feed_out = {out};
  g.source = {tensor_word(I, g.source)};
  g.target = {tensor_word(I, g.target)};
  g.trees.clear();
}

/// Replaces every entry cell by the irreducible factors of its decoration.
void split_cells(PlusMorphism& g) {
  const Instance& I = inst(g);
  PlusMorphism out = g;
  out.cells.clear();
  out.feed_in.clear();
  std::map<Port, Port> moved;
  for (size_t c = 0; c < g.cells.size(); ++c) {
    const PlusCell& cell = g.cells[c];
    if (cell.entry < 0) {
      for (int q = 0; q < cell_out(g, static_cast<int>(c)); ++q)
        moved[Port::cell(static_cast<int>(c), q)] = Port::cell(static_cast<int>(out.cells.size()), q);
      out.cells.push_back(cell);
      out.feed_in.push_back(g.feed_in[c]);
      continue;
    }
    Decomposition d = I.decompose(cell.deco);
    FinMap L = *I.as_permutation(d.left_iso);
    FinMap R = *I.as_permutation(d.right_iso);
    FinMap Linv = L.inverse(), Rinv = R.inverse();
    int a = 0, b = 0;
    std::vector<int> first_new(d.factors.size());
    for (size_t i = 0; i < d.factors.size(); ++i) {
      PlusCell f;
      f.entry = cell.entry;
      f.basic = cell.basic;
      f.deco = d.factors[i];
      std::vector<Port> feeds;
      for (int p = 0; p < I.src(f.deco); ++p) {
        int old = Linv(a + p);
        f.ins.push_back(cell.ins[old]);
        feeds.push_back(g.feed_in[c][old]);
      }
      for (int q = 0; q < I.tgt(f.deco); ++q) f.outs.push_back(cell.outs[R(b + q)]);
      first_new[i] = static_cast<int>(out.cells.size());
      out.cells.push_back(f);
      out.feed_in.push_back(feeds);
      a += I.src(f.deco);
      b += I.tgt(f.deco);
    }
    for (int q = 0; q < cell_out(g, static_cast<int>(c)); ++q) {
      int pos = Rinv(q);
      size_t i = 0;
      int off = 0;
      while (off + I.tgt(d.factors[i]) <= pos) off += I.tgt(d.factors[i++]);
      moved[Port::cell(static_cast<int>(c), q)] = Port::cell(first_new[i], pos - off);
    }
  }
  auto fix = [&](Port& p) {
    if (p.boundary) return;
    p = moved.at(p);
  };
  for (auto& row : out.feed_in)
    for (auto& p : row) fix(p);
  for (auto& row : out.feed_out)
    for (auto& p : row) fix(p);
  g = std::move(out);
}

/// Union-find labels over cells and single-basic boundary wires of a Strong-based morphism.
struct Wiring {
  int ncells = 0, nin = 0, nout = 0;
  std::vector<int> label;  // cells, then inputs, then outputs
  int count = 0;
};

Wiring components_of(const PlusMorphism& g, bool include_sinks) {
  const Instance& I = inst(g);
  Wiring w;
  w.ncells = static_cast<int>(g.cells.size());
  w.nin = I.src(g.target[0]);
  w.nout = I.tgt(g.target[0]);
  UnionFind uf(w.ncells + w.nin + w.nout);
  auto node = [&](const Port& p) { return p.boundary ? w.ncells + p.index : p.owner; };
  for (int c = 0; c < w.ncells; ++c) {
    if (!include_sinks && g.cells[c].basic < 0) continue;
    for (const auto& p : g.feed_in[c])
      if (!p.is_dangling()) uf.unite(c, node(p));
  }
  for (int y = 0; y < w.nout; ++y) uf.unite(w.ncells + w.nin + y, node(g.feed_out[0][y]));
  w.label = uf.classes(&w.count);
  return w;
}

/// Finds the least convex block of live cells evaluating to an isomorphism and absorbs it.
bool sink_iso_block(PlusMorphism& g) {
  const Instance& I = inst(g);
  std::vector<int> live;
  for (size_t c = 0; c < g.cells.size(); ++c)
    if (g.cells[c].basic >= 0) live.push_back(static_cast<int>(c));
  const int n = static_cast<int>(live.size());
  if (n == 0) return false;
  if (n > 16) throw DomainError("hyp: too many live cells to reduce");
  std::vector<int> pos(g.cells.size(), -1);
  for (int i = 0; i < n; ++i) pos[live[i]] = i;
  // succ[i]: live cells consuming an output of live cell i.
  std::vector<uint32_t> succ(n, 0), nbr(n, 0);
  for (int i = 0; i < n; ++i)
    for (const auto& p : g.feed_in[live[i]])
      if (!p.boundary && pos[p.owner] >= 0) {
        succ[pos[p.owner]] |= 1u << i;
        nbr[pos[p.owner]] |= 1u << i;
        nbr[i] |= 1u << pos[p.owner];
      }
  std::vector<uint32_t> reach(n);  // strict descendants
  for (int i = 0; i < n; ++i) {
    uint32_t r = succ[i], frontier = succ[i];
    while (frontier) {
      uint32_t next = 0;
      for (int j = 0; j < n; ++j)
        if (frontier >> j & 1) next |= succ[j];
      frontier = next & ~r;
      r |= next;
    }
    reach[i] = r;
  }
  std::vector<uint32_t> masks;
  for (uint32_t m = 1; m < (1u << n); ++m) masks.push_back(m);
  std::stable_sort(masks.begin(), masks.end(),
                   [](uint32_t a, uint32_t b) { return __builtin_popcount(a) < __builtin_popcount(b); });
  for (uint32_t m : masks) {
    // connected
    uint32_t seen = m & -m, frontier = seen;
    while (frontier) {
      uint32_t next = 0;
      for (int j = 0; j < n; ++j)
        if (frontier >> j & 1) next |= nbr[j] & m;
      frontier = next & ~seen;
      seen |= next;
    }
    if (seen != m) continue;
    // convex: nothing outside lies on a path between two cells of the block
    uint32_t below = 0;
    for (int j = 0; j < n; ++j)
      if (m >> j & 1) below |= reach[j] & ~m;
    bool convex = true;
    for (int j = 0; j < n && convex; ++j)
      if ((below >> j & 1) && (reach[j] & m)) convex = false;
    if (!convex) continue;
    std::vector<int> cells;
    for (int j = 0; j < n; ++j)
      if (m >> j & 1) cells.push_back(live[j]);
    std::vector<Port> ins;
    std::set<Port> inside_outs;
    for (int c : cells) {
      for (const auto& p : g.feed_in[c])
        if (p.boundary || !(m >> pos[p.owner] & 1)) ins.push_back(p);
      for (int q = 0; q < cell_out(g, c); ++q) inside_outs.insert(Port::cell(c, q));
    }
    // external consumers of the block's outputs, in port order
    std::vector<Port*> consumers;
    std::vector<Port> outs;
    for (const Port& o : inside_outs) {
      Port* slot = nullptr;
      for (size_t c = 0; c < g.cells.size() && !slot; ++c) {
        if (pos[c] < 0 || (m >> pos[c] & 1)) continue;
        for (auto& p : g.feed_in[c])
          if (p == o) slot = &p;
      }
      for (auto& p : g.feed_out[0])
        if (!slot && p == o) slot = &p;
      if (!slot) continue;
      consumers.push_back(slot);
      outs.push_back(o);
    }
    if (ins.size() != outs.size()) continue;
    auto pi = I.as_permutation(eval_ports(g, cells, ins, outs));
    if (!pi) continue;
    for (size_t i = 0; i < ins.size(); ++i) *consumers[(*pi)(static_cast<int>(i))] = ins[i];
    for (int c : cells) g.cells[c].basic = -1;
    return true;
  }
  return false;
}

/// Hyp: components fed by a dangling wire or feeding nothing are absorbed by r_σ, as are
/// convex blocks evaluating to an isomorphism. Absorbed cells keep no wiring, and the
/// invertible ones are dropped.
PlusMorphism hyp_reduce(PlusMorphism g) {
  const Instance& I = inst(g);
  Wiring w = components_of(g, true);
  std::set<Port> consumed;
  for (const auto& row : g.feed_in)
    for (const auto& p : row) consumed.insert(p);
  for (const auto& p : g.feed_out[0]) consumed.insert(p);
  std::vector<bool> absorbed(w.count, false), has_boundary(w.count, false);
  for (int c = 0; c < w.ncells; ++c) {
    int k = w.label[c];
    if (g.cells[c].basic < 0) absorbed[k] = true;
    for (const auto& p : g.feed_in[c])
      if (p.is_dangling()) absorbed[k] = true;
    for (int q = 0; q < cell_out(g, c); ++q)
      if (!consumed.count(Port::cell(c, q))) absorbed[k] = true;
  }
  for (int i = 0; i < w.nin + w.nout; ++i) has_boundary[w.label[w.ncells + i]] = true;
  for (int k = 0; k < w.count; ++k)
    if (absorbed[k] && has_boundary[k])
      throw DomainError("hyp: a component is partly absorbed by r (instance not hereditary?)");
  for (int c = 0; c < w.ncells; ++c)
    if (absorbed[w.label[c]]) g.cells[c].basic = -1;
  // A convex block of live cells with an invertible composite σ equals i_σ ∘ r_σ applied
  // to it: the block is absorbed and its consumers read the permuted inputs directly.
  // Smallest blocks first, so the result does not depend on the order of the cells.
  while (sink_iso_block(g)) {
  }
  for (int c = 0; c < w.ncells; ++c)
    if (g.cells[c].basic < 0) {
      for (auto& p : g.feed_in[c]) p = Port::dangling();
      std::fill(g.cells[c].ins.begin(), g.cells[c].ins.end(), -1);
      std::fill(g.cells[c].outs.begin(), g.cells[c].outs.end(), -1);
    }
  return remove_iso_cells(g, [&](int c) {
    return g.cells[c].basic < 0 && g.cells[c].entry >= 0 && I.is_iso(g.cells[c].deco);
  });
}

int factor_count(const Instance& I, const Morphism& f, bool non_iso_only) {
  int n = 0;
  for (const auto& x : I.decompose(f).factors)
    if (!non_iso_only || !I.is_iso(x)) ++n;
  return n;
}

}  // namespace

// ---------------------------------------------------------------------------

int PlusMorphism::degree() const {
  if (variant == Variant::Box || variant == Variant::Nc)
    return static_cast<int>(source.size()) - static_cast<int>(target.size());
  const Instance& I = inst(*this);
  const bool hyp = variant == Variant::Hyp;
  int d = 0;
  for (const auto& s : source) d += factor_count(I, s, hyp);
  for (const auto& t : target) d -= factor_count(I, t, hyp);
  return d;
}

bool PlusMorphism::operator==(const PlusMorphism& o) const {
  return variant == o.variant && instance == o.instance && source == o.source &&
         target == o.target && cells == o.cells && feed_in == o.feed_in &&
         feed_out == o.feed_out && trees == o.trees;
}

void validate(const PlusMorphism& g) {
  const Instance& I = inst(g);
  check_structure(g);
  const int nc = static_cast<int>(g.cells.size());
  // Source coverage: every entry wire is carried by exactly one cell (hyp may absorb).
  for (size_t e = 0; e < g.source.size(); ++e) {
    std::vector<int> in_seen(I.src(g.source[e]), 0), out_seen(I.tgt(g.source[e]), 0);
    std::vector<int> cells;
    for (int c = 0; c < nc; ++c) {
      if (g.cells[c].entry != static_cast<int>(e) || g.cells[c].basic < 0) continue;
      cells.push_back(c);
      for (int w : g.cells[c].ins) {
        if (w < 0 || w >= static_cast<int>(in_seen.size())) throw DomainError("plus: entry wire out of range");
        ++in_seen[w];
      }
      for (int w : g.cells[c].outs) {
        if (w < 0 || w >= static_cast<int>(out_seen.size())) throw DomainError("plus: entry wire out of range");
        ++out_seen[w];
      }
    }
    bool complete = true;
    for (int s : in_seen) {
      if (s > 1) throw DomainError("plus: an entry wire is used twice");
      complete = complete && s == 1;
    }
    for (int s : out_seen) {
      if (s > 1) throw DomainError("plus: an entry wire is used twice");
      complete = complete && s == 1;
    }
    if (!complete && g.variant != Variant::Hyp)
      throw DomainError("plus: source entry " + std::to_string(e + 1) + " is not used");
    if (complete && !(g.variant == Variant::Hyp && cells.empty())) {
      // The cells of the entry must tensor back to it.
      PlusMorphism probe = skeleton(g.variant, I, {}, {g.source[e]});
      for (int c : cells) {
        PlusCell pc = g.cells[c];
        pc.entry = -1;
        pc.basic = 0;
        probe.cells.push_back(pc);
        std::vector<Port> f;
        for (int w : g.cells[c].ins) f.push_back(Port::bnd(0, w));
        probe.feed_in.push_back(f);
        for (size_t q = 0; q < pc.outs.size(); ++q)
          probe.feed_out[0][pc.outs[q]] = Port::cell(static_cast<int>(probe.cells.size()) - 1, static_cast<int>(q));
      }
      std::vector<int> all = iota_vec(static_cast<int>(cells.size()));
      Morphism v = eval_ports(probe, all, basic_inputs(probe, 0), probe.feed_out[0]);
      if (!(v == g.source[e]))
        throw DomainError("plus: cells of source entry " + std::to_string(e + 1) + " do not tensor to it");
    }
  }
  // Producers: consumed at most once; live ones exactly once and within their basic.
  std::map<Port, int> uses;
  auto use = [&](const Port& p, int basic) {
    if (p.is_dangling()) {
      if (basic >= 0) throw DomainError("plus: live cell fed by a dangling wire");
      return;
    }
    int pb = p.boundary ? p.owner : g.cells[p.owner].basic;
    if (pb != basic) throw DomainError("plus: a wire crosses between basics");
    if (++uses[p] > 1) throw DomainError("plus: a wire is consumed twice");
  };
  for (int c = 0; c < nc; ++c)
    for (const auto& p : g.feed_in[c]) use(p, g.cells[c].basic);
  for (size_t j = 0; j < g.target.size(); ++j)
    for (const auto& p : g.feed_out[j]) use(p, static_cast<int>(j));
  for (size_t j = 0; j < g.target.size(); ++j)
    for (int x = 0; x < I.src(g.target[j]); ++x)
      if (!uses.count(Port::bnd(static_cast<int>(j), x)))
        throw DomainError("plus: boundary input " + std::to_string(x + 1) + " of basic " + std::to_string(j + 1) + " is unused");
  for (int c = 0; c < nc; ++c)
    if (g.cells[c].basic >= 0)
      for (int q = 0; q < cell_out(g, c); ++q)
        if (!uses.count(Port::cell(c, q)))
          throw DomainError("plus: output of cell " + std::to_string(c + 1) + " is unused");
  // Decoration: each basic composes to its target.
  for (size_t j = 0; j < g.target.size(); ++j) {
    Morphism v = eval_ports(g, cells_of_basic(g, static_cast<int>(j)), basic_inputs(g, static_cast<int>(j)), g.feed_out[j]);
    if (!(v == g.target[j]))
      throw DomainError("plus: basic " + std::to_string(j + 1) + " composes to " + I.print(v) +
                        ", not to its target " + I.print(g.target[j]));
  }
  if (g.variant == Variant::Box || g.variant == Variant::Nc) {
    if (g.trees.size() != g.target.size()) throw DomainError("plus: one composition tree per basic is required");
    if (nc > 64) throw DomainError("plus: at most 64 cells");
    for (size_t j = 0; j < g.target.size(); ++j) {
      if (cells_of_basic(g, static_cast<int>(j)).empty()) throw DomainError("plus: empty basic outside gcp/hyp");
      check_tree(g, static_cast<int>(j));
    }
  }
}

PlusMorphism canonical_form(const PlusMorphism& g0) {
  const Instance& I = inst(g0);
  check_structure(g0);
  PlusMorphism g = g0;
  if (is_strong_based(g.variant)) {
    g.trees.clear();
    tensor_words(g);
    split_cells(g);
    g = remove_iso_cells(g, [&](int c) { return g.cells[c].entry < 0; });
    if (g.variant == Variant::Hyp) g = hyp_reduce(g);
    normalize_cells(g);
    sort_cells(g);
  } else {
    normalize_cells(g);
    sort_cells(g);
    validate(g);
    Adjacency adj = adjacency(g);
    for (auto& t : g.trees) t = canonical_tree(t, adj);
  }
  validate(g);
  (void)I;
  return g;
}

bool equals_plus(const PlusMorphism& g, const PlusMorphism& h) {
  if (g.variant != h.variant || g.instance != h.instance) return false;
  return canonical_form(g) == canonical_form(h);
}

// ---------------------------------------------------------------------------
// Generators

PlusMorphism plus_identity(Variant v, const Instance& I, const std::vector<Morphism>& word) {
  PlusMorphism g = skeleton(v, I, word, word);
  for (size_t e = 0; e < word.size(); ++e) {
    int c = add_whole_cell(g, static_cast<int>(e), static_cast<int>(e));
    for (int p = 0; p < I.src(word[e]); ++p) g.feed_in[c][p] = Port::bnd(static_cast<int>(e), p);
    for (int y = 0; y < I.tgt(word[e]); ++y) g.feed_out[e][y] = Port::cell(c, y);
    g.trees.push_back(Node::leaf(c));
  }
  if (is_strong_based(v)) g.trees.clear();
  return canonical_form(g);
}

PlusMorphism gamma(Variant v, const Instance& I, const Morphism& phi1, const Morphism& phi0) {
  if (I.tgt(phi0) != I.src(phi1))
    throw DomainError("gamma: " + I.print(phi1) + " and " + I.print(phi0) + " are not composable");
  PlusMorphism g = skeleton(v, I, {phi1, phi0}, {I.compose(phi1, phi0)});
  int c1 = add_whole_cell(g, 0, 0), c0 = add_whole_cell(g, 1, 0);
  for (int p = 0; p < I.src(phi0); ++p) g.feed_in[c0][p] = Port::bnd(0, p);
  for (int p = 0; p < I.src(phi1); ++p) g.feed_in[c1][p] = Port::cell(c0, p);
  for (int y = 0; y < I.tgt(phi1); ++y) g.feed_out[0][y] = Port::cell(c1, y);
  if (!is_strong_based(v)) g.trees = {Node::make(Op::Circ, {Node::leaf(c1), Node::leaf(c0)})};
  return canonical_form(g);
}

PlusMorphism mu(Variant v, const Instance& I, const Morphism& phi1, const Morphism& phi2) {
  if (v == Variant::Box || v == Variant::Strong)
    throw DomainError("mu: not a generator of the " + to_string(v) + " variant");
  PlusMorphism g = skeleton(v, I, {phi1, phi2}, {I.tensor(phi1, phi2)});
  int c1 = add_whole_cell(g, 0, 0), c2 = add_whole_cell(g, 1, 0);
  const int m1 = I.src(phi1), n1 = I.tgt(phi1);
  for (int p = 0; p < m1; ++p) g.feed_in[c1][p] = Port::bnd(0, p);
  for (int p = 0; p < I.src(phi2); ++p) g.feed_in[c2][p] = Port::bnd(0, m1 + p);
  for (int y = 0; y < n1; ++y) g.feed_out[0][y] = Port::cell(c1, y);
  for (int y = 0; y < I.tgt(phi2); ++y) g.feed_out[0][n1 + y] = Port::cell(c2, y);
  if (!is_strong_based(v)) g.trees = {Node::make(Op::Otimes, {Node::leaf(c1), Node::leaf(c2)})};
  return canonical_form(g);
}

PlusMorphism iso2(Variant v, const Instance& I, const TwoCell& cell, const Morphism& phi) {
  auto s = I.as_permutation(cell.sigma), sp = I.as_permutation(cell.sigma_prime);
  if (!s || !sp) throw DomainError("iso2: the 2-cell must consist of isomorphisms");
  PlusMorphism g = skeleton(v, I, {phi}, {iso_act(I, cell, phi)});
  int c = add_whole_cell(g, 0, 0);
  for (int p = 0; p < I.src(phi); ++p) g.feed_in[c][p] = Port::bnd(0, (*s)(p));
  for (int q = 0; q < I.tgt(phi); ++q) g.feed_out[0][(*sp)(q)] = Port::cell(c, q);
  if (!is_strong_based(v)) g.trees = {Node::leaf(c)};
  return canonical_form(g);
}

PlusMorphism box_permutation(Variant v, const Instance& I, const std::vector<Morphism>& word,
                             const FinMap& pi) {
  if (pi.dom() != static_cast<int>(word.size()) || pi.cod != pi.dom() || !pi.is_bijection())
    throw DomainError("box_permutation: not a permutation of the word");
  std::vector<Morphism> target(word.size());
  for (size_t i = 0; i < word.size(); ++i) target[pi(static_cast<int>(i))] = word[i];
  PlusMorphism g = skeleton(v, I, word, target);
  g.trees.resize(word.size());
  for (size_t i = 0; i < word.size(); ++i) {
    int j = pi(static_cast<int>(i));
    int c = add_whole_cell(g, static_cast<int>(i), j);
    for (int p = 0; p < I.src(word[i]); ++p) g.feed_in[c][p] = Port::bnd(j, p);
    for (int y = 0; y < I.tgt(word[i]); ++y) g.feed_out[j][y] = Port::cell(c, y);
    g.trees[j] = Node::leaf(c);
  }
  if (is_strong_based(v)) g.trees.clear();
  return canonical_form(g);
}

PlusMorphism unit(Variant v, const Instance& I, const Morphism& sigma) {
  if (v != Variant::Gcp && v != Variant::Hyp) throw DomainError("unit: i_sigma exists only in gcp and hyp");
  auto s = I.as_permutation(sigma);
  if (!s) throw DomainError("unit: " + I.print(sigma) + " is not an isomorphism");
  PlusMorphism g = skeleton(v, I, {}, {sigma});
  for (int x = 0; x < s->dom(); ++x) g.feed_out[0][(*s)(x)] = Port::bnd(0, x);
  return canonical_form(g);
}

PlusMorphism counit(Variant v, const Instance& I, const Morphism& sigma) {
  if (v != Variant::Hyp) throw DomainError("counit: r_sigma exists only in hyp");
  if (!I.is_iso(sigma)) throw DomainError("counit: " + I.print(sigma) + " is not an isomorphism");
  PlusMorphism g = skeleton(v, I, {sigma}, {});
  int c = add_whole_cell(g, 0, -1);
  for (auto& p : g.feed_in[c]) p = Port::dangling();
  return canonical_form(g);
}

PlusMorphism from_formula(Variant v, const ValidFormula& f) {
  const Instance& I = *f.instance;
  PlusMorphism g = skeleton(v, I, f.population, f.values);
  for (size_t e = 0; e < f.population.size(); ++e) add_whole_cell(g, static_cast<int>(e), 0);
  struct Iface {
    std::vector<std::pair<int, int>> ins;  // consumer (cell, port)
    std::vector<Port> outs;
  };
  std::function<Iface(const Node&, int)> build = [&](const Node& n, int j) -> Iface {
    Iface r;
    if (n.is_leaf()) {
      g.cells[n.slot].basic = j;
      for (int p = 0; p < cell_in(g, n.slot); ++p) r.ins.push_back({n.slot, p});
      for (int q = 0; q < cell_out(g, n.slot); ++q) r.outs.push_back(Port::cell(n.slot, q));
      return r;
    }
    if (n.op == Op::Otimes) {
      for (const auto& k : n.kids) {
        Iface x = build(k, j);
        r.ins.insert(r.ins.end(), x.ins.begin(), x.ins.end());
        r.outs.insert(r.outs.end(), x.outs.begin(), x.outs.end());
      }
      return r;
    }
    Iface cur = build(n.kids.back(), j);
    for (int i = static_cast<int>(n.kids.size()) - 2; i >= 0; --i) {
      Iface up = build(n.kids[i], j);
      if (up.ins.size() != cur.outs.size()) throw DomainError("from_formula: interfaces do not match");
      for (size_t k = 0; k < up.ins.size(); ++k) g.feed_in[up.ins[k].first][up.ins[k].second] = cur.outs[k];
      cur.outs = up.outs;
    }
    return cur;
  };
  for (size_t j = 0; j < f.pre.trees.size(); ++j) {
    Iface r = build(f.pre.trees[j], static_cast<int>(j));
    for (size_t x = 0; x < r.ins.size(); ++x)
      g.feed_in[r.ins[x].first][r.ins[x].second] = Port::bnd(static_cast<int>(j), static_cast<int>(x));
    for (size_t y = 0; y < r.outs.size(); ++y) g.feed_out[j][y] = r.outs[y];
    if (!is_strong_based(v)) g.trees.push_back(f.pre.trees[j]);
  }
  return canonical_form(g);
}

PlusMorphism insert_unit(const PlusMorphism& g0, const std::vector<Port>& consumers) {
  if (g0.variant != Variant::Gcp && g0.variant != Variant::Hyp)
    throw DomainError("insert_unit: unit markers exist only in gcp and hyp");
  const Instance& I = inst(g0);
  PlusMorphism g = g0;
  int basic = -2;
  std::vector<Port*> slots;
  for (const auto& c : consumers) {
    Port* slot;
    int b;
    if (c.boundary) {
      slot = &g.feed_out.at(c.owner).at(c.index);
      b = c.owner;
    } else {
      slot = &g.feed_in.at(c.owner).at(c.index);
      b = g.cells[c.owner].basic;
    }
    if (basic != -2 && b != basic) throw DomainError("insert_unit: consumers from different basics");
    basic = b;
    slots.push_back(slot);
  }
  PlusCell u;
  u.entry = -1;
  u.basic = basic == -2 ? 0 : basic;
  u.deco = I.identity(static_cast<int>(consumers.size()));
  int idx = static_cast<int>(g.cells.size());
  std::vector<Port> feeds;
  for (size_t i = 0; i < slots.size(); ++i) {
    feeds.push_back(*slots[i]);
    *slots[i] = Port::cell(idx, static_cast<int>(i));
  }
  g.cells.push_back(u);
  g.feed_in.push_back(feeds);
  validate(g);
  return g;
}

// ---------------------------------------------------------------------------
// Composition

PlusMorphism compose_plus(const PlusMorphism& g0, const PlusMorphism& h0) {
  if (g0.variant != h0.variant) throw DomainError("compose_plus: variant mismatch");
  if (g0.instance != h0.instance) throw DomainError("compose_plus: instance mismatch");
  PlusMorphism G = canonical_form(g0), H = canonical_form(h0);
  if (H.target != G.source) throw DomainError("compose_plus: target of the first factor is not the source of the second");
  PlusMorphism R = H;
  R.target = G.target;
  R.feed_out.assign(G.target.size(), {});
  R.trees.clear();
  // G cell carrying input wire x of B-entry e.
  std::map<std::pair<int, int>, std::pair<int, int>> cover;
  for (size_t c = 0; c < G.cells.size(); ++c)
    for (size_t p = 0; p < G.cells[c].ins.size(); ++p)
      cover[{G.cells[c].entry, G.cells[c].ins[p]}] = {static_cast<int>(c), static_cast<int>(p)};
  std::function<Port(const Port&)> resolveG;
  std::function<Port(const Port&, int)> resolveH = [&](const Port& p, int e) -> Port {
    if (p.is_dangling()) return p;
    if (!p.boundary) return p;
    auto it = cover.find({e, p.index});
    if (it == cover.end()) return Port::dangling();
    return resolveG(G.feed_in[it->second.first][it->second.second]);
  };
  resolveG = [&](const Port& p) -> Port {
    if (p.is_dangling()) return p;
    if (p.boundary) return p;
    const PlusCell& c = G.cells[p.owner];
    return resolveH(H.feed_out[c.entry][c.outs[p.index]], c.entry);
  };
  std::vector<int> entry_cell(G.source.size(), -1);
  for (size_t c = 0; c < G.cells.size(); ++c) entry_cell[G.cells[c].entry] = static_cast<int>(c);
  for (size_t d = 0; d < H.cells.size(); ++d) {
    int e = H.cells[d].basic;
    for (auto& p : R.feed_in[d]) p = resolveH(p, e);
    if (is_strong_based(R.variant)) {
      R.cells[d].basic = e < 0 ? -1 : 0;
    } else {
      R.cells[d].basic = G.cells[entry_cell[e]].basic;
    }
  }
  for (size_t j = 0; j < G.target.size(); ++j)
    for (const auto& p : G.feed_out[j]) R.feed_out[j].push_back(resolveG(p));
  if (!is_strong_based(R.variant)) {
    std::function<Node(const Node&)> subst = [&](const Node& n) -> Node {
      if (n.is_leaf()) return H.trees[G.cells[n.slot].entry];
      Node out = Node::make(n.op, {});
      for (const auto& k : n.kids) out.kids.push_back(subst(k));
      return out;
    };
    for (const auto& t : G.trees) R.trees.push_back(reduce(subst(t)));
  }
  if (is_strong_based(R.variant) && R.target.empty()) {
    // Everything is absorbed; keep a single empty basic so the words tensor consistently.
  }
  return canonical_form(R);
}

PlusMorphism tensor_plus(const PlusMorphism& g0, const PlusMorphism& h0) {
  if (g0.variant != h0.variant) throw DomainError("tensor_plus: variant mismatch");
  if (g0.instance != h0.instance) throw DomainError("tensor_plus: instance mismatch");
  PlusMorphism G = canonical_form(g0), H = canonical_form(h0);
  const int ns = static_cast<int>(G.source.size()), nt = static_cast<int>(G.target.size());
  const int nc = static_cast<int>(G.cells.size());
  PlusMorphism R = G;
  R.source.insert(R.source.end(), H.source.begin(), H.source.end());
  R.target.insert(R.target.end(), H.target.begin(), H.target.end());
  auto shift = [&](Port p) {
    if (p.is_dangling()) return p;
    p.owner += p.boundary ? nt : nc;
    return p;
  };
  for (size_t d = 0; d < H.cells.size(); ++d) {
    PlusCell c = H.cells[d];
    if (c.entry >= 0) c.entry += ns;
    if (c.basic >= 0) c.basic += nt;
    R.cells.push_back(c);
    std::vector<Port> f;
    for (const auto& p : H.feed_in[d]) f.push_back(shift(p));
    R.feed_in.push_back(f);
  }
  for (const auto& row : H.feed_out) {
    std::vector<Port> r;
    for (const auto& p : row) r.push_back(shift(p));
    R.feed_out.push_back(r);
  }
  for (const auto& t : H.trees) {
    std::vector<int> img(64);
    std::iota(img.begin(), img.end(), nc);
    R.trees.push_back(relabel(t, FinMap(64 + nc, img)));
  }
  return canonical_form(R);
}

// ---------------------------------------------------------------------------
// Evaluation

std::vector<Morphism> evaluate(const PlusMorphism& g) {
  check_structure(g);
  std::vector<Morphism> out;
  for (size_t j = 0; j < g.target.size(); ++j)
    out.push_back(eval_ports(g, cells_of_basic(g, static_cast<int>(j)), basic_inputs(g, static_cast<int>(j)), g.feed_out[j]));
  return out;
}

std::vector<Cospan> evaluate_by_gluing(const PlusMorphism& g) {
  const Instance& I = inst(g);
  if (I.name() != "cospan") throw DomainError("evaluate_by_gluing: cospan instance only");
  check_structure(g);
  std::vector<Cospan> out;
  for (size_t j = 0; j < g.target.size(); ++j) {
    const int jj = static_cast<int>(j);
    auto cells = cells_of_basic(g, jj);
    std::map<Port, int> wire;
    int next = 0;
    auto wid = [&](const Port& p) {
      auto it = wire.find(p);
      if (it != wire.end()) return it->second;
      return wire[p] = next++;
    };
    const int m = I.src(g.target[j]), n = I.tgt(g.target[j]);
    for (int x = 0; x < m; ++x) wid(Port::bnd(jj, x));
    for (int c : cells)
      for (int q = 0; q < cell_out(g, c); ++q) wid(Port::cell(c, q));
    std::vector<int> apex_off;
    int total = next;
    for (int c : cells) {
      apex_off.push_back(total);
      total += std::get<Cospan>(g.cells[c].deco).k;
    }
    UnionFind uf(total);
    for (size_t i = 0; i < cells.size(); ++i) {
      const Cospan& d = std::get<Cospan>(g.cells[cells[i]].deco);
      for (int p = 0; p < d.m; ++p) uf.unite(wid(g.feed_in[cells[i]][p]), apex_off[i] + d.l(p));
      for (int q = 0; q < d.n; ++q) uf.unite(wid(Port::cell(cells[i], q)), apex_off[i] + d.r(q));
    }
    int k = 0;
    auto label = uf.classes(&k);
    std::vector<int> l(m), r(n);
    for (int x = 0; x < m; ++x) l[x] = label[wid(Port::bnd(jj, x))];
    for (int y = 0; y < n; ++y) r[y] = label[wid(g.feed_out[j][y])];
    out.push_back(make_cospan(m, n, k, FinMap(k, l), FinMap(k, r)));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Components and roofs

std::vector<PlusComponent> plus_components(const PlusMorphism& g0) {
  if (!is_strong_based(g0.variant)) throw DomainError("plus_components: Strong-based variants only");
  PlusMorphism g = canonical_form(g0);
  Wiring w = components_of(g, false);
  std::vector<PlusComponent> comps(w.count);
  std::vector<bool> used(w.count, false);
  for (int c = 0; c < w.ncells; ++c)
    if (g.cells[c].basic >= 0) {
      comps[w.label[c]].cells.push_back(c);
      used[w.label[c]] = true;
    }
  for (int x = 0; x < w.nin; ++x) {
    comps[w.label[w.ncells + x]].inputs.push_back(x);
    used[w.label[w.ncells + x]] = true;
  }
  for (int y = 0; y < w.nout; ++y) {
    comps[w.label[w.ncells + w.nin + y]].outputs.push_back(y);
    used[w.label[w.ncells + w.nin + y]] = true;
  }
  std::vector<PlusComponent> out;
  for (int k = 0; k < w.count; ++k) {
    if (!used[k]) continue;
    auto& pc = comps[k];
    std::vector<Port> ins, outs;
    for (int x : pc.inputs) ins.push_back(Port::bnd(0, x));
    for (int y : pc.outputs) outs.push_back(g.feed_out[0][y]);
    pc.value = eval_ports(g, pc.cells, ins, outs);
    out.push_back(pc);
  }
  return out;
}

Roof strong_plus_morphism(const std::vector<Morphism>& source_decomposition, const PlusMorphism& body) {
  if (body.variant != Variant::Strong) throw DomainError("roof: the body must be a StrongPlus morphism");
  const Instance& I = inst(body);
  Roof r;
  r.body = canonical_form(body);
  if (!(I.tensor_all(source_decomposition) == r.body.source[0]))
    throw DomainError("roof: the split does not tensor to the source of the body");
  for (const auto& s : source_decomposition)
    if (I.decompose(s).factors.size() > 1) r.refined = true;
  for (const auto& c : r.body.cells) r.split.push_back(c.deco);
  r.basics = plus_components(r.body);
  Decomposition d = I.decompose(r.body.target[0]);
  std::vector<int> owner(d.factors.size(), -1);
  for (size_t k = 0; k < r.basics.size(); ++k) {
    std::set<int> fs;
    for (int x : r.basics[k].inputs) fs.insert(d.src_assign(x));
    for (int y : r.basics[k].outputs) fs.insert(d.tgt_assign(y));
    if (fs.size() > 1)
      throw DomainError("roof: a connected basic has a reducible target (instance not hereditary)");
    for (int f : fs) {
      if (owner[f] >= 0 && owner[f] != static_cast<int>(k))
        throw DomainError("roof: disconnected basic for an irreducible target factor");
      owner[f] = static_cast<int>(k);
    }
  }
  return r;
}

bool roof_equals(const Roof& a, const Roof& b) { return a.split == b.split && a.body == b.body; }

// ---------------------------------------------------------------------------
// Enumeration

std::vector<PlusMorphism> enumerate_hom(Variant v, const Instance& I, const std::vector<Morphism>& source,
                                        const std::vector<Morphism>& target) {
  if (!is_strong_based(v)) throw DomainError("enumerate_hom: Strong-based variants only");
  const Morphism s = I.tensor_all(source), t = I.tensor_all(target);
  PlusMorphism base = skeleton(v, I, {s}, {t});
  add_whole_cell(base, 0, 0);
  for (auto& p : base.feed_in[0]) p = Port::bnd(0, 0);  // placeholder, rewired below
  {
    // Split with placeholder wiring; only the cell list is used.
    PlusMorphism tmp = base;
    tmp.feed_out[0].assign(I.tgt(t), Port::bnd(0, 0));
    tmp.feed_in[0].assign(I.src(s), Port::bnd(0, 0));
    if (I.src(t) == 0) {
      tmp.target = {I.identity(0)};
      tmp.feed_out = {{}};
      // ports referring to bnd(0,0) are invalid without boundary inputs; use cells only
    }
    // split_cells only reads feeds to copy them, so placeholders are harmless
    std::vector<PlusCell> cells;
    Decomposition d = I.decompose(s);
    FinMap L = *I.as_permutation(d.left_iso), R = *I.as_permutation(d.right_iso);
    FinMap Linv = L.inverse();
    int a = 0, b = 0;
    for (const auto& f : d.factors) {
      PlusCell c;
      c.entry = 0;
      c.deco = f;
      for (int p = 0; p < I.src(f); ++p) c.ins.push_back(Linv(a + p));
      for (int q = 0; q < I.tgt(f); ++q) c.outs.push_back(R(b + q));
      a += I.src(f);
      b += I.tgt(f);
      cells.push_back(c);
    }
    base.cells = cells;
    base.feed_in.assign(cells.size(), {});
  }
  const int nf = static_cast<int>(base.cells.size());
  std::vector<PlusMorphism> found;
  auto record = [&](const PlusMorphism& g) {
    PlusMorphism c;
    try {
      c = canonical_form(g);
    } catch (const DomainError&) {
      return;
    }
    if (std::find(found.begin(), found.end(), c) == found.end()) found.push_back(c);
  };
  for (uint32_t mask = 0; mask < (1u << nf); ++mask) {
    // mask bit set: absorbed by r_σ (hyp, isomorphism factors only)
    if (mask && v != Variant::Hyp) break;
    bool ok = true;
    for (int c = 0; c < nf; ++c)
      if ((mask >> c & 1) && !I.is_iso(base.cells[c].deco)) ok = false;
    if (!ok) continue;
    PlusMorphism g = base;
    std::vector<Port> producers, consumers;
    for (int x = 0; x < I.src(t); ++x) producers.push_back(Port::bnd(0, x));
    for (int c = 0; c < nf; ++c) {
      g.cells[c].basic = (mask >> c & 1) ? -1 : 0;
      g.feed_in[c].assign(I.src(g.cells[c].deco), Port::dangling());
      if (mask >> c & 1) continue;
      for (int q = 0; q < I.tgt(g.cells[c].deco); ++q) producers.push_back(Port::cell(c, q));
      for (int p = 0; p < I.src(g.cells[c].deco); ++p) consumers.push_back(Port::cell(c, p));
    }
    for (int y = 0; y < I.tgt(t); ++y) consumers.push_back(Port::bnd(0, y));
    if (producers.size() != consumers.size()) continue;
    if (producers.size() > 9) throw DomainError("enumerate_hom: too many wires to enumerate");
    std::vector<int> perm = iota_vec(static_cast<int>(producers.size()));
    do {
      PlusMorphism x = g;
      for (size_t i = 0; i < consumers.size(); ++i) {
        const Port& c = consumers[i];
        if (c.boundary)
          x.feed_out[0][c.index] = producers[perm[i]];
        else
          x.feed_in[c.owner][c.index] = producers[perm[i]];
      }
      try {
        validate(x);
      } catch (const DomainError&) {
        continue;
      }
      record(x);
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  return found;
}

// ---------------------------------------------------------------------------
// Random morphisms

ValidFormula random_valid_formula(const Instance& I, int arity, Rng& rng, int max_width) {
  for (int attempt = 0; attempt < 1000; ++attempt) {
    Node t = random_formula(arity, rng, true);
    std::vector<Morphism> pop(arity);
    bool ok = true;
    auto pick = [&](int lo) { return lo + static_cast<int>(rng() % (max_width - lo + 1)); };
    std::function<void(const Node&, int, int)> fill = [&](const Node& n, int m, int k) {
      if (!ok) return;
      if (n.is_leaf()) {
        if (!I.has_morphisms(m, k)) {
          ok = false;
          return;
        }
        pop[n.slot] = I.random(m, k, rng);
        return;
      }
      const int r = static_cast<int>(n.kids.size());
      if (n.op == Op::Otimes) {
        std::vector<int> ms(r, 0), ks(r, 0);
        for (int i = 0; i < m; ++i) ++ms[rng() % r];
        for (int i = 0; i < k; ++i) ++ks[rng() % r];
        for (int i = 0; i < r; ++i) fill(n.kids[i], ms[i], ks[i]);
        return;
      }
      std::vector<int> w(r + 1);
      w[0] = k;
      w[r] = m;
      for (int i = 1; i < r; ++i) w[i] = pick(1);
      for (int i = 0; i < r; ++i) fill(n.kids[i], w[i + 1], w[i]);
    };
    fill(t, pick(1), pick(1));
    if (!ok) continue;
    return populate(PreFormula{{t}}, I, pop);
  }
  throw DomainError("random_valid_formula: no valid population found");
}

PlusMorphism random_plus(Variant v, const Instance& I, int arity, Rng& rng) {
  ValidFormula f;
  if (v == Variant::Box) {
    for (int attempt = 0;; ++attempt) {
      if (attempt > 1000) throw DomainError("random_plus: no chain found");
      std::vector<int> w(arity + 1);
      for (auto& x : w) x = 1 + static_cast<int>(rng() % 2);
      Node t = arity == 1 ? Node::leaf(0) : Node::make(Op::Circ, {});
      std::vector<Morphism> pop(arity);
      bool ok = true;
      for (int i = 0; i < arity; ++i) {
        if (arity > 1) t.kids.push_back(Node::leaf(i));
        if (!I.has_morphisms(w[i + 1], w[i])) ok = false;
        else pop[i] = I.random(w[i + 1], w[i], rng);
      }
      if (!ok) continue;
      f = populate(PreFormula{{t}}, I, pop);
      break;
    }
  } else {
    f = random_valid_formula(I, arity, rng);
  }
  PlusMorphism g = from_formula(v, f);
  // Conjugate the source entries and the target by random 2-cells.
  std::vector<Morphism> pre_src;
  PlusMorphism pre;
  for (size_t e = 0; e < g.source.size(); ++e) {
    const Morphism& phi = g.source[e];
    FinMap s = random_perm(I.src(phi), rng), sp = random_perm(I.tgt(phi), rng);
    TwoCell inv{I.permutation(s.inverse()), I.permutation(sp.inverse())};
    Morphism pre_phi = iso_act(I, inv, phi);
    PlusMorphism step = iso2(v, I, TwoCell{I.permutation(s), I.permutation(sp)}, pre_phi);
    pre = e == 0 ? step : tensor_plus(pre, step);
  }
  g = compose_plus(g, pre);
  const Morphism& psi = g.target[0];
  if (g.target.size() == 1) {
    FinMap s = random_perm(I.src(psi), rng), sp = random_perm(I.tgt(psi), rng);
    g = compose_plus(iso2(v, I, TwoCell{I.permutation(s), I.permutation(sp)}, psi), g);
  }
  return g;
}

// ---------------------------------------------------------------------------

std::string print(const PlusMorphism& g) {
  const Instance& I = inst(g);
  std::ostringstream os;
  auto port = [](const Port& p) {
    std::ostringstream s;
    if (p.is_dangling())
      s << "r";
    else if (p.boundary)
      s << "in" << p.owner + 1 << "." << p.index + 1;
    else
      s << "c" << p.owner + 1 << "." << p.index + 1;
    return s.str();
  };
  os << "variant " << to_string(g.variant) << " instance " << I.name() << "\n";
  os << "source:";
  for (const auto& s : g.source) os << " [" << I.print(s) << "]";
  os << "\ntarget:";
  for (const auto& t : g.target) os << " [" << I.print(t) << "]";
  os << "\n";
  for (size_t c = 0; c < g.cells.size(); ++c) {
    const auto& cell = g.cells[c];
    os << "c" << c + 1 << ": ";
    if (cell.entry < 0)
      os << "unit";
    else
      os << "entry " << cell.entry + 1;
    os << " basic " << (cell.basic < 0 ? std::string("r") : std::to_string(cell.basic + 1));
    os << " [" << I.print(cell.deco) << "] <-";
    for (const auto& p : g.feed_in[c]) os << " " << port(p);
    os << "\n";
  }
  for (size_t j = 0; j < g.target.size(); ++j) {
    os << "out" << j + 1 << " <-";
    for (const auto& p : g.feed_out[j]) os << " " << port(p);
    if (j < g.trees.size()) {
      std::vector<int> img(64);
      std::iota(img.begin(), img.end(), 0);
      os << "  tree " << print(g.trees[j]);
    }
    os << "\n";
  }
  return os.str();
}

}  // namespace ufckit
