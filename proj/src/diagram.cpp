#include "ufckit/diagram.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_map>

namespace ufckit {

// ---------------------------------------------------------------- boxes

BoxDiagram formula_to_box(const Node& n) {
  if (n.is_leaf()) return BoxDiagram{BoxDiagram::Cell, n.slot, {}};
  Node r = reduce(n);
  BoxDiagram b{r.op == Op::Circ ? BoxDiagram::VStack : BoxDiagram::HRow, -1, {}};
  for (const auto& k : r.kids) b.kids.push_back(formula_to_box(k));
  return b;
}

std::vector<BoxDiagram> formula_to_box(const PreFormula& f) {
  std::vector<BoxDiagram> out;
  for (const auto& t : f.trees) out.push_back(formula_to_box(t));
  return out;
}

Node box_to_formula(const BoxDiagram& b) {
  if (b.kind == BoxDiagram::Cell) return Node::leaf(b.slot);
  if (b.kids.size() < 2) throw DomainError("box diagram: stacks and rows need at least two children");
  Node n = Node::make(b.kind == BoxDiagram::VStack ? Op::Circ : Op::Otimes, {});
  for (const auto& k : b.kids) n.kids.push_back(box_to_formula(k));
  return reduce(n);
}

int CompositionGraph::inputs(int w) const {
  return static_cast<int>(std::count_if(blacks.begin(), blacks.end(), [w](const Black& b) { return b.upper == w; }));
}

int CompositionGraph::outputs(int w) const {
  return static_cast<int>(std::count_if(blacks.begin(), blacks.end(), [w](const Black& b) { return b.lower == w; }));
}

namespace {

void sort_blacks(CompositionGraph& g) {
  std::stable_sort(g.blacks.begin(), g.blacks.end(), [](const Black& a, const Black& b) { return a.y < b.y; });
}

struct Drawer {
  CompositionGraph g;

  struct Edges {
    std::vector<int> bottom, top;  // whites along the lower and upper edge, left to right
  };

  Edges draw(const BoxDiagram& b, Rational x0, Rational x1, Rational y0, Rational y1) {
    if (b.kind == BoxDiagram::Cell) {
      int w = static_cast<int>(g.whites.size());
      g.whites.push_back({b.slot, x0, x1, y0, y1});
      return {{w}, {w}};
    }
    long long r = static_cast<long long>(b.kids.size());
    std::vector<Edges> parts;
    for (long long i = 0; i < r; ++i) {
      if (b.kind == BoxDiagram::HRow) {
        Rational w = (x1 - x0) / r;
        parts.push_back(draw(b.kids[i], x0 + w * i, x0 + w * (i + 1), y0, y1));
      } else {
        Rational h = (y1 - y0) / r;
        parts.push_back(draw(b.kids[i], x0, x1, y1 - h * (i + 1), y1 - h * i));
      }
    }
    Edges out;
    if (b.kind == BoxDiagram::HRow) {
      for (auto& p : parts) {
        out.bottom.insert(out.bottom.end(), p.bottom.begin(), p.bottom.end());
        out.top.insert(out.top.end(), p.top.begin(), p.top.end());
      }
      return out;
    }
    for (long long i = 0; i + 1 < r; ++i)
      sweep(parts[i + 1].top, parts[i].bottom, y1 - (y1 - y0) / r * (i + 1));
    return {parts.back().bottom, parts.front().top};
  }

  // Pieces of one interface. An upper break is placed just before a coinciding lower one.
  void sweep(const std::vector<int>& lower, const std::vector<int>& upper, Rational y) {
    size_t i = 0, j = 0;
    for (;;) {
      const White &L = g.whites[lower[i]], &U = g.whites[upper[j]];
      g.blacks.push_back({lower[i], upper[j], std::max(L.x0, U.x0), std::min(L.x1, U.x1), y});
      bool lastL = i + 1 == lower.size(), lastU = j + 1 == upper.size();
      if (lastL && lastU) break;
      if (!lastU && (lastL || U.x1 <= L.x1))
        ++j;
      else
        ++i;
    }
  }
};

}  // namespace

CompositionGraph box_to_composition_graph(const BoxDiagram& b) {
  Drawer d;
  auto e = d.draw(b, 0, 1, 0, 1);
  std::vector<Black> bottom, top;
  for (int w : e.bottom) bottom.push_back({-1, w, d.g.whites[w].x0, d.g.whites[w].x1, 0});
  for (int w : e.top) top.push_back({w, -1, d.g.whites[w].x0, d.g.whites[w].x1, 1});
  d.g.blacks.insert(d.g.blacks.begin(), bottom.begin(), bottom.end());
  d.g.blacks.insert(d.g.blacks.end(), top.begin(), top.end());
  sort_blacks(d.g);
  return d.g;
}

CompositionGraph layout_graph(const std::vector<Rect>& rects) {
  if (rects.empty()) return {};
  int X0 = rects[0].x0, X1 = rects[0].x1, Y0 = rects[0].y0, Y1 = rects[0].y1;
  long long area = 0;
  for (const auto& r : rects) {
    if (r.x1 <= r.x0 || r.y1 <= r.y0) throw DomainError("layout: empty rectangle for slot " + std::to_string(r.slot + 1));
    X0 = std::min(X0, r.x0), X1 = std::max(X1, r.x1), Y0 = std::min(Y0, r.y0), Y1 = std::max(Y1, r.y1);
    area += static_cast<long long>(r.x1 - r.x0) * (r.y1 - r.y0);
  }
  for (size_t a = 0; a < rects.size(); ++a)
    for (size_t b = a + 1; b < rects.size(); ++b) {
      const auto &p = rects[a], &q = rects[b];
      if (std::min(p.x1, q.x1) > std::max(p.x0, q.x0) && std::min(p.y1, q.y1) > std::max(p.y0, q.y0))
        throw DomainError("layout: rectangles overlap");
    }
  if (area != static_cast<long long>(X1 - X0) * (Y1 - Y0)) throw DomainError("layout: rectangles do not tile their bounding box");
  CompositionGraph g;
  for (const auto& r : rects) g.whites.push_back({r.slot, r.x0, r.x1, r.y0, r.y1});
  int n = static_cast<int>(rects.size());
  for (int a = 0; a < n; ++a)
    if (rects[a].y0 == Y0) g.blacks.push_back({-1, a, rects[a].x0, rects[a].x1, Y0});
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      const auto &L = rects[a], &U = rects[b];
      int lo = std::max(L.x0, U.x0), hi = std::min(L.x1, U.x1);
      if (L.y1 == U.y0 && hi > lo) g.blacks.push_back({a, b, lo, hi, L.y1});
    }
  for (int a = 0; a < n; ++a)
    if (rects[a].y1 == Y1) g.blacks.push_back({a, -1, rects[a].x0, rects[a].x1, Y1});
  std::stable_sort(g.blacks.begin(), g.blacks.end(),
                   [](const Black& a, const Black& b) { return std::tie(a.y, a.x0) < std::tie(b.y, b.x0); });
  return g;
}

std::vector<Rect> pinwheel() {
  return {{0, 0, 0, 2, 1}, {1, 2, 0, 3, 2}, {2, 1, 1, 2, 2}, {3, 0, 1, 1, 3}, {4, 1, 2, 3, 3}};
}

Shapes generic_shapes(const Node& n) {
  auto g = box_to_composition_graph(formula_to_box(n));
  Shapes sh(n.arity());
  for (int w = 0; w < static_cast<int>(g.whites.size()); ++w) sh[g.whites[w].slot] = {g.inputs(w), g.outputs(w)};
  return sh;
}

// ---------------------------------------------------------------- decomposition

namespace {

constexpr int kMaxWhites = 14;

class Decomposer {
 public:
  explicit Decomposer(const CompositionGraph& g) : g_(g), n_(static_cast<int>(g.whites.size())) {
    if (n_ > kMaxWhites)
      throw DomainError("diagram has " + std::to_string(n_) + " boxes; the decomposition search is limited to " +
                        std::to_string(kMaxWhites));
    for (const auto& b : g.blacks) {
      lo_.push_back(b.lower < 0 ? 0u : 1u << b.lower);
      up_.push_back(b.upper < 0 ? 0u : 1u << b.upper);
    }
  }

  uint32_t full() const { return n_ == 0 ? 0u : (1u << n_) - 1; }

  bool circ_ok(uint32_t S, uint32_t Lo) const {
    uint32_t U = S & ~Lo;
    for (size_t p = 0; p < lo_.size(); ++p) {
      if ((lo_[p] & Lo) && !(up_[p] & S)) return false;
      if ((up_[p] & U) && !(lo_[p] & S)) return false;
      if ((lo_[p] & U) && (up_[p] & Lo)) return false;
    }
    return true;
  }

  bool otimes_ok(uint32_t L, uint32_t R) const {
    for (size_t p = 0; p < lo_.size(); ++p)
      if (((lo_[p] & L) && (up_[p] & R)) || ((lo_[p] & R) && (up_[p] & L))) return false;
    Rational right_of_L = 0, left_of_R = 0;
    bool first = true;
    for (int w = 0; w < n_; ++w)
      if (L >> w & 1) right_of_L = first ? g_.whites[w].x1 : std::max(right_of_L, g_.whites[w].x1), first = false;
    first = true;
    for (int w = 0; w < n_; ++w)
      if (R >> w & 1) left_of_R = first ? g_.whites[w].x0 : std::min(left_of_R, g_.whites[w].x0), first = false;
    return right_of_L <= left_of_R;
  }

  bool decomposable(uint32_t S) {
    if ((S & (S - 1)) == 0) return S != 0;
    if (auto it = memo_.find(S); it != memo_.end()) return it->second;
    bool ok = false;
    for (uint32_t sub = (S - 1) & S; sub && !ok; sub = (sub - 1) & S) {
      uint32_t rest = S & ~sub;
      if (circ_ok(S, sub) && decomposable(sub) && decomposable(rest)) ok = true;
      if (!ok && otimes_ok(sub, rest) && decomposable(sub) && decomposable(rest)) ok = true;
    }
    return memo_[S] = ok;
  }

  /// Reduced trees with leaves labeled by white index.
  const std::vector<Node>& trees(uint32_t S) {
    if (auto it = trees_.find(S); it != trees_.end()) return it->second;
    std::set<Node> out;
    if ((S & (S - 1)) == 0) {
      if (S) out.insert(Node::leaf(__builtin_ctz(S)));
    } else {
      for (uint32_t sub = (S - 1) & S; sub; sub = (sub - 1) & S) {
        uint32_t rest = S & ~sub;
        bool circ = circ_ok(S, sub), ot = otimes_ok(sub, rest);
        if (!circ && !ot) continue;
        if (!decomposable(sub) || !decomposable(rest)) continue;
        const auto& A = trees(sub);
        const auto& B = trees(rest);
        for (const auto& a : A)
          for (const auto& b : B) {
            if (circ) out.insert(reduce(Node::make(Op::Circ, {b, a})));
            if (ot) out.insert(reduce(Node::make(Op::Otimes, {a, b})));
          }
      }
    }
    return trees_[S] = std::vector<Node>(out.begin(), out.end());
  }

 private:
  const CompositionGraph& g_;
  int n_;
  std::vector<uint32_t> lo_, up_;
  std::unordered_map<uint32_t, bool> memo_;
  std::unordered_map<uint32_t, std::vector<Node>> trees_;
};

Node to_slots(const Node& n, const CompositionGraph& g) {
  std::vector<int> img;
  for (const auto& w : g.whites) img.push_back(w.slot);
  return relabel(n, FinMap(static_cast<int>(img.size()), img));
}

std::vector<int> reading_order(const Node& n) {
  std::vector<int> out;
  std::function<void(const Node&)> go = [&](const Node& x) {
    if (x.is_leaf()) out.push_back(x.slot);
    for (const auto& k : x.kids) go(k);
  };
  go(n);
  return out;
}

void post_order(const Node& n, std::vector<std::string>& out) {
  if (n.is_leaf()) return;
  for (const auto& k : n.kids) post_order(k, out);
  out.push_back(print(n));
}

}  // namespace

Decomposability is_decomposable(const CompositionGraph& g) {
  Decomposer d(g);
  Decomposability r;
  r.decomposable = d.decomposable(d.full());
  if (r.decomposable) {
    auto t = to_slots(graph_to_formula(g), g);
    post_order(fully_bracketed(t), r.trace);
  }
  return r;
}

std::vector<Node> decompositions(const CompositionGraph& g) {
  Decomposer d(g);
  std::vector<Node> out;
  for (const auto& t : d.trees(d.full())) out.push_back(to_slots(t, g));
  return out;
}

Node graph_to_formula(const CompositionGraph& g) {
  Decomposer d(g);
  const auto& ts = d.trees(d.full());
  if (ts.empty()) throw DomainError("graph_to_formula: the diagram is not decomposable");
  std::vector<int> order(g.whites.size());
  std::iota(order.begin(), order.end(), 0);
  for (const auto& t : ts)
    if (reading_order(t) == order) return to_slots(t, g);
  std::vector<Node> labeled;
  for (const auto& t : ts) labeled.push_back(to_slots(t, g));
  return *std::min_element(labeled.begin(), labeled.end(), standard_less);
}

std::vector<int> standard_enumeration(const CompositionGraph& g) {
  auto ts = decompositions(g);
  if (ts.empty()) throw DomainError("standard_enumeration: the diagram is not decomposable");
  return traversal(*std::min_element(ts.begin(), ts.end(), standard_less));
}

std::vector<std::vector<int>> graph_enumerations(const CompositionGraph& g) {
  std::set<std::vector<int>> out;
  for (const auto& t : decompositions(g)) out.insert(traversal(t));
  return {out.begin(), out.end()};
}

// ---------------------------------------------------------------- components

std::vector<CompositionGraph> connected_split(const CompositionGraph& g) {
  int n = static_cast<int>(g.whites.size());
  UnionFind uf(n);
  for (const auto& b : g.blacks)
    if (b.lower >= 0 && b.upper >= 0) uf.unite(b.lower, b.upper);
  int count = 0;
  auto cls = uf.classes(&count);
  std::vector<Rational> left(count);
  std::vector<bool> seen(count, false);
  for (int w = 0; w < n; ++w) {
    int c = cls[w];
    if (!seen[c] || g.whites[w].x0 < left[c]) left[c] = g.whites[w].x0;
    seen[c] = true;
  }
  std::vector<int> order(count);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return left[a] < left[b]; });
  std::vector<CompositionGraph> out;
  for (int c : order) {
    CompositionGraph h;
    std::vector<int> index(n, -1);
    for (int w = 0; w < n; ++w)
      if (cls[w] == c) {
        index[w] = static_cast<int>(h.whites.size());
        White x = g.whites[w];
        x.x0 -= left[c], x.x1 -= left[c];
        h.whites.push_back(x);
      }
    for (const auto& b : g.blacks) {
      int owner = b.lower >= 0 ? b.lower : b.upper;
      if (owner < 0 || cls[owner] != c) continue;
      h.blacks.push_back({b.lower < 0 ? -1 : index[b.lower], b.upper < 0 ? -1 : index[b.upper], b.x0 - left[c],
                          b.x1 - left[c], b.y});
    }
    out.push_back(std::move(h));
  }
  return out;
}

CompositionGraph tensor(const CompositionGraph& a, const CompositionGraph& b) {
  Rational shift = 0;
  for (const auto& w : a.whites) shift = std::max(shift, w.x1);
  CompositionGraph g = a;
  int off = static_cast<int>(a.whites.size());
  for (auto w : b.whites) {
    w.x0 += shift, w.x1 += shift;
    g.whites.push_back(w);
  }
  for (auto x : b.blacks) {
    if (x.lower >= 0) x.lower += off;
    if (x.upper >= 0) x.upper += off;
    x.x0 += shift, x.x1 += shift;
    g.blacks.push_back(x);
  }
  sort_blacks(g);
  return g;
}

SuspensionGraph suspension(const CompositionGraph& g) {
  SuspensionGraph s{g, std::vector<int>(g.blacks.size(), -1), 0};
  std::vector<int> order(g.blacks.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return std::tie(g.blacks[a].y, g.blacks[a].x0) < std::tie(g.blacks[b].y, g.blacks[b].x0);
  });
  for (size_t i = 0; i < order.size(); ++i) {
    const auto& cur = g.blacks[order[i]];
    if (i > 0) {
      const auto& prev = g.blacks[order[i - 1]];
      if (prev.y == cur.y && prev.x1 >= cur.x0) {
        s.segment[order[i]] = s.segment[order[i - 1]];
        continue;
      }
    }
    s.segment[order[i]] = s.segments++;
  }
  return s;
}

// ---------------------------------------------------------------- output

namespace {

std::string rat(const Rational& r) {
  return r.denominator() == 1 ? std::to_string(r.numerator())
                              : std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

void dot_body(std::ostringstream& os, const CompositionGraph& g, const std::vector<int>& black_id, int blacks,
              const std::string& p, const std::string& indent) {
  for (size_t w = 0; w < g.whites.size(); ++w)
    os << indent << p << "w" << w << " [shape=circle, label=\"" << g.whites[w].slot + 1 << "\"];\n";
  std::vector<Rational> level(blacks);
  for (size_t i = 0; i < g.blacks.size(); ++i) level[black_id[i]] = g.blacks[i].y;
  for (int b = 0; b < blacks; ++b)
    os << indent << p << "b" << b << " [shape=point, width=0.12, style=filled, fillcolor=black];\n";
  std::set<std::pair<std::string, std::string>> edges;
  std::vector<std::pair<std::string, std::string>> ordered;
  auto edge = [&](std::string a, std::string b) {
    if (edges.insert({a, b}).second) ordered.emplace_back(a, b);
  };
  for (size_t i = 0; i < g.blacks.size(); ++i) {
    std::string b = p + "b" + std::to_string(black_id[i]);
    if (g.blacks[i].upper >= 0) edge(p + "w" + std::to_string(g.blacks[i].upper), b);
    if (g.blacks[i].lower >= 0) edge(b, p + "w" + std::to_string(g.blacks[i].lower));
  }
  for (const auto& [a, b] : ordered) os << indent << a << " -> " << b << ";\n";
  std::map<Rational, std::vector<int>> by_level;
  for (int b = 0; b < blacks; ++b) by_level[level[b]].push_back(b);
  for (const auto& [y, bs] : by_level) {
    os << indent << "{ rank=same;";
    for (int b : bs) os << " " << p << "b" << b << ";";
    os << " }\n";
  }
}

std::vector<int> identity_ids(size_t n) {
  std::vector<int> v(n);
  std::iota(v.begin(), v.end(), 0);
  return v;
}

}  // namespace

std::string to_dot(const CompositionGraph& g, const std::string& name) {
  std::ostringstream os;
  os << "digraph " << name << " {\n  ordering=out;\n";
  dot_body(os, g, identity_ids(g.blacks.size()), static_cast<int>(g.blacks.size()), "", "  ");
  os << "}\n";
  return os.str();
}

std::string to_dot(const SuspensionGraph& s, const std::string& name) {
  std::ostringstream os;
  os << "digraph " << name << " {\n  ordering=out;\n";
  dot_body(os, s.base, s.segment, s.segments, "", "  ");
  os << "}\n";
  return os.str();
}

std::string to_dot(const std::vector<CompositionGraph>& forest, const std::string& name) {
  std::ostringstream os;
  os << "digraph " << name << " {\n  ordering=out;\n";
  for (size_t k = 0; k < forest.size(); ++k) {
    os << "  subgraph cluster_" << k << " {\n";
    dot_body(os, forest[k], identity_ids(forest[k].blacks.size()), static_cast<int>(forest[k].blacks.size()),
             "c" + std::to_string(k) + "_", "    ");
    os << "  }\n";
  }
  os << "}\n";
  return os.str();
}

std::string to_literal(const CompositionGraph& g) {
  std::ostringstream os;
  for (size_t w = 0; w < g.whites.size(); ++w) {
    const auto& x = g.whites[w];
    os << (w ? "; " : "") << x.slot + 1 << " " << rat(x.x0) << " " << rat(x.x1) << " " << rat(x.y0) << " "
       << rat(x.y1);
  }
  os << " |";
  for (size_t b = 0; b < g.blacks.size(); ++b) {
    const auto& x = g.blacks[b];
    os << (b ? "; " : " ") << x.lower + 1 << " " << x.upper + 1 << " " << rat(x.x0) << " " << rat(x.x1) << " "
       << rat(x.y);
  }
  return os.str();
}

namespace {

Rational parse_rat(const std::string& t) {
  try {
    size_t slash = t.find('/');
    if (slash == std::string::npos) return Rational(std::stoll(t));
    return Rational(std::stoll(t.substr(0, slash)), std::stoll(t.substr(slash + 1)));
  } catch (const std::exception&) {
    throw DomainError("graph literal: bad number '" + t + "'");
  }
}

std::vector<std::vector<std::string>> records(const std::string& part) {
  std::vector<std::vector<std::string>> out;
  std::stringstream ss(part);
  std::string rec;
  while (std::getline(ss, rec, ';')) {
    std::stringstream rs(rec);
    std::vector<std::string> f;
    std::string tok;
    while (rs >> tok) f.push_back(tok);
    if (!f.empty()) out.push_back(std::move(f));
  }
  return out;
}

}  // namespace

CompositionGraph parse_graph(const std::string& text) {
  auto bar = text.find('|');
  if (bar == std::string::npos) throw DomainError("graph literal needs 'whites | blacks': '" + text + "'");
  CompositionGraph g;
  for (const auto& r : records(text.substr(0, bar))) {
    if (r.size() != 5) throw DomainError("graph literal: a white needs 'slot x0 x1 y0 y1'");
    g.whites.push_back({std::stoi(r[0]) - 1, parse_rat(r[1]), parse_rat(r[2]), parse_rat(r[3]), parse_rat(r[4])});
  }
  int n = static_cast<int>(g.whites.size());
  for (const auto& r : records(text.substr(bar + 1))) {
    if (r.size() != 5) throw DomainError("graph literal: a black needs 'lower upper x0 x1 y'");
    int lo = std::stoi(r[0]) - 1, up = std::stoi(r[1]) - 1;
    if (lo < -1 || lo >= n || up < -1 || up >= n || (lo < 0 && up < 0))
      throw DomainError("graph literal: black endpoints out of range");
    g.blacks.push_back({lo, up, parse_rat(r[2]), parse_rat(r[3]), parse_rat(r[4])});
  }
  std::vector<bool> used(n, false);
  for (const auto& w : g.whites) {
    if (w.slot < 0 || w.slot >= n || used[w.slot]) throw DomainError("graph literal: slots must be a permutation");
    used[w.slot] = true;
  }
  return g;
}

}  // namespace ufckit
