#include "ufckit/formula.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <functional>
#include <numeric>
#include <set>

namespace ufckit {

int Node::arity() const {
  if (is_leaf()) return 1;
  int a = 0;
  for (const auto& k : kids) a += k.arity();
  return a;
}

int PreFormula::arity() const {
  int a = 0;
  for (const auto& t : trees) a += t.arity();
  return a;
}

// ---------------------------------------------------------------- parsing

namespace {

class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  PreFormula run() {
    PreFormula f;
    f.trees.push_back(expr());
    skip();
    while (pos_ < s_.size() && s_[pos_] == '#') {
      ++pos_;
      f.trees.push_back(expr());
      skip();
    }
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    number(f);
    return f;
  }

 private:
  const std::string& s_;
  size_t pos_ = 0;
  int explicit_ = 0, anonymous_ = 0;

  [[noreturn]] void fail(const std::string& what) const {
    throw DomainError("formula syntax error at position " + std::to_string(pos_ + 1) + ": " + what +
                      " in '" + s_ + "'");
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  Node expr() {
    skip();
    if (pos_ >= s_.size()) fail("expected a slot or '('");
    char c = s_[pos_];
    if (c == '-') {
      ++pos_;
      ++anonymous_;
      return Node::leaf(-1);
    }
    if (c == '_') {
      size_t start = ++pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (start == pos_) fail("expected digits after '_'");
      int v = std::stoi(s_.substr(start, pos_ - start));
      if (v < 1) fail("slot numbers start at 1");
      ++explicit_;
      return Node::leaf(v - 1);
    }
    if (c != '(') fail("expected a slot or '('");
    ++pos_;
    std::vector<Node> kids{expr()};
    std::optional<Op> op;
    for (;;) {
      skip();
      if (pos_ >= s_.size()) fail("unclosed '('");
      char d = s_[pos_];
      if (d == ')') {
        ++pos_;
        break;
      }
      Op here;
      if (d == 'o')
        here = Op::Circ;
      else if (d == '*')
        here = Op::Otimes;
      else if (d == '#')
        fail("'#' is only allowed at top level");
      else
        fail("expected 'o', '*' or ')'");
      if (op && *op != here) fail("mixed operators inside one bracket");
      op = here;
      ++pos_;
      kids.push_back(expr());
    }
    if (!op) fail("a bracket needs at least two operands");
    return Node::make(*op, std::move(kids));
  }

  void number(PreFormula& f) {
    if (explicit_ && anonymous_) throw DomainError("formula mixes '_k' and '-' slots: '" + s_ + "'");
    int n = f.arity();
    if (anonymous_) {
      int next = 0;
      std::function<void(Node&)> go = [&](Node& x) {
        if (x.is_leaf()) x.slot = next++;
        for (auto& k : x.kids) go(k);
      };
      for (auto& t : f.trees) go(t);
      return;
    }
    std::vector<int> seen(n, 0);
    std::function<void(const Node&)> go = [&](const Node& x) {
      if (x.is_leaf()) {
        if (x.slot >= n || seen[x.slot]++)
          throw DomainError("formula slots must be a permutation of 1.." + std::to_string(n) + ": '" +
                            s_ + "'");
      }
      for (const auto& k : x.kids) go(k);
    };
    for (const auto& t : f.trees) go(t);
  }
};

}  // namespace

PreFormula parse_formula(const std::string& text) { return Parser(text).run(); }

std::string print(const Node& n) {
  if (n.is_leaf()) return "_" + std::to_string(n.slot + 1);
  std::string sep = n.op == Op::Circ ? " o " : " * ", out = "(";
  for (size_t i = 0; i < n.kids.size(); ++i) out += (i ? sep : "") + print(n.kids[i]);
  return out + ")";
}

std::string print(const PreFormula& f) {
  std::string out;
  for (size_t i = 0; i < f.trees.size(); ++i) out += (i ? " # " : "") + print(f.trees[i]);
  return out;
}

// ---------------------------------------------------------------- structure

Node reduce(const Node& n) {
  if (n.is_leaf()) return n;
  Node out = Node::make(n.op, {});
  for (const auto& k : n.kids) {
    Node r = reduce(k);
    if (r.op == n.op)
      for (auto& g : r.kids) out.kids.push_back(std::move(g));
    else
      out.kids.push_back(std::move(r));
  }
  return out;
}

PreFormula reduce(const PreFormula& f) {
  PreFormula out;
  for (const auto& t : f.trees) out.trees.push_back(reduce(t));
  return out;
}

Node fully_bracketed(const Node& n) {
  if (n.is_leaf()) return n;
  Node acc = fully_bracketed(n.kids[0]);
  for (size_t i = 1; i < n.kids.size(); ++i)
    acc = Node::make(n.op, {std::move(acc), fully_bracketed(n.kids[i])});
  return acc;
}

bool is_reduced(const Node& n) {
  for (const auto& k : n.kids)
    if (k.op == n.op || !is_reduced(k)) return false;
  return true;
}

namespace {
void traverse(const Node& n, std::vector<int>& out) {
  if (n.is_leaf()) {
    out.push_back(n.slot);
  } else if (n.op == Op::Circ) {
    for (auto it = n.kids.rbegin(); it != n.kids.rend(); ++it) traverse(*it, out);
  } else {
    for (const auto& k : n.kids) traverse(k, out);
  }
}
}  // namespace

std::vector<int> traversal(const Node& n) {
  std::vector<int> out;
  traverse(n, out);
  return out;
}

std::vector<int> traversal(const PreFormula& f) {
  std::vector<int> out;
  for (const auto& t : f.trees) traverse(t, out);
  return out;
}

Node relabel(const Node& n, const FinMap& perm) {
  if (n.is_leaf()) return Node::leaf(perm(n.slot));
  Node out = Node::make(n.op, {});
  for (const auto& k : n.kids) out.kids.push_back(relabel(k, perm));
  return out;
}

// ---------------------------------------------------------------- population

Morphism evaluate(const Node& n, const Instance& I, const std::vector<Morphism>& phis) {
  if (n.is_leaf()) return phis.at(n.slot);
  std::vector<Morphism> v;
  for (const auto& k : n.kids) v.push_back(evaluate(k, I, phis));
  if (n.op == Op::Otimes) return I.tensor_all(v);
  Morphism acc = v.back();
  for (int i = static_cast<int>(v.size()) - 2; i >= 0; --i) {
    if (I.src(v[i]) != I.tgt(acc))
      throw DomainError("formula not valid at node " + print(n) + ": operand " + std::to_string(i + 1) +
                        " has source " + std::to_string(I.src(v[i])) + " but the part below has target " +
                        std::to_string(I.tgt(acc)));
    acc = I.compose(v[i], acc);
  }
  return acc;
}

ValidFormula populate(const PreFormula& f, const Instance& I, std::vector<Morphism> phis) {
  if (static_cast<int>(phis.size()) != f.arity())
    throw DomainError("formula has arity " + std::to_string(f.arity()) + " but " +
                      std::to_string(phis.size()) + " morphisms were given");
  ValidFormula v{f, &I, std::move(phis), {}};
  for (const auto& t : f.trees) v.values.push_back(evaluate(t, I, v.population));
  return v;
}

Shapes shapes_of(const ValidFormula& f) {
  Shapes s;
  for (const auto& p : f.population) s.emplace_back(f.instance->src(p), f.instance->tgt(p));
  return s;
}

// ---------------------------------------------------------------- interchange orbit

namespace {

int src_of(const Node& n, const Shapes& sh) {
  if (n.is_leaf()) return sh.at(n.slot).first;
  if (n.op == Op::Circ) return src_of(n.kids.back(), sh);
  int s = 0;
  for (const auto& k : n.kids) s += src_of(k, sh);
  return s;
}

int tgt_of(const Node& n, const Shapes& sh) {
  if (n.is_leaf()) return sh.at(n.slot).second;
  if (n.op == Op::Circ) return tgt_of(n.kids.front(), sh);
  int s = 0;
  for (const auto& k : n.kids) s += tgt_of(k, sh);
  return s;
}

Node group(Op op, std::vector<Node> parts) {
  if (parts.size() == 1) return std::move(parts[0]);
  return Node::make(op, std::move(parts));
}

Node splice(const Node& n, size_t a, size_t b, Node mid) {
  if (a == 0 && b == n.kids.size()) return mid;
  Node out = Node::make(n.op, {});
  for (size_t i = 0; i < a; ++i) out.kids.push_back(n.kids[i]);
  out.kids.push_back(std::move(mid));
  for (size_t i = b; i < n.kids.size(); ++i) out.kids.push_back(n.kids[i]);
  return reduce(out);
}

/// (a o b) * (c o d) -> (a * c) o (b * d), generalized to runs of columns and any cut heights.
void vertical_cuts(const Node& n, std::vector<Node>& out) {
  for (size_t a = 0; a < n.kids.size(); ++a) {
    for (size_t b = a + 2; b <= n.kids.size(); ++b) {
      if (n.kids[b - 1].op != Op::Circ) break;
      if (n.kids[a].op != Op::Circ) break;
      std::vector<size_t> cut(b - a, 1);
      for (;;) {
        std::vector<Node> tops, bottoms;
        for (size_t i = a; i < b; ++i) {
          const auto& rows = n.kids[i].kids;
          size_t c = cut[i - a];
          tops.push_back(group(Op::Circ, {rows.begin(), rows.begin() + c}));
          bottoms.push_back(group(Op::Circ, {rows.begin() + c, rows.end()}));
        }
        out.push_back(splice(n, a, b,
                             reduce(Node::make(Op::Circ, {Node::make(Op::Otimes, std::move(tops)),
                                                          Node::make(Op::Otimes, std::move(bottoms))}))));
        size_t i = 0;
        while (i < cut.size() && ++cut[i] == n.kids[a + i].kids.size()) cut[i++] = 1;
        if (i == cut.size()) break;
      }
    }
  }
}

/// (a * c) o (b * d) -> (a o b) * (c o d) when no wire crosses the split.
void horizontal_cuts(const Node& n, const Shapes& sh, std::vector<Node>& out) {
  size_t R = n.kids.size();
  for (size_t a = 0; a < R; ++a) {
    for (size_t b = a + 2; b <= R; ++b) {
      if (n.kids[a].op != Op::Otimes || n.kids[b - 1].op != Op::Otimes) break;
      // Prefix widths of each row: bottom (src) and top (tgt) after j children.
      std::vector<size_t> split(b - a);
      std::function<void(size_t)> rec = [&](size_t i) {
        if (i == b) {
          std::vector<Node> lefts, rights;
          for (size_t r = a; r < b; ++r) {
            const auto& row = n.kids[r].kids;
            size_t j = split[r - a];
            lefts.push_back(group(Op::Otimes, {row.begin(), row.begin() + j}));
            rights.push_back(group(Op::Otimes, {row.begin() + j, row.end()}));
          }
          out.push_back(splice(n, a, b,
                               reduce(Node::make(Op::Otimes, {Node::make(Op::Circ, std::move(lefts)),
                                                              Node::make(Op::Circ, std::move(rights))}))));
          return;
        }
        const auto& row = n.kids[i].kids;
        int tleft = 0;
        for (size_t j = 1; j < row.size(); ++j) {
          tleft += tgt_of(row[j - 1], sh);
          if (i > a) {
            const auto& above = n.kids[i - 1].kids;
            int sleft = 0;
            for (size_t t = 0; t < split[i - 1 - a]; ++t) sleft += src_of(above[t], sh);
            if (sleft != tleft) continue;
          }
          split[i - a] = j;
          rec(i + 1);
        }
      };
      rec(a);
    }
  }
}

void moves(const Node& n, const Shapes& sh, std::vector<Node>& out) {
  if (n.is_leaf()) return;
  if (n.op == Op::Otimes)
    vertical_cuts(n, out);
  else
    horizontal_cuts(n, sh, out);
  for (size_t i = 0; i < n.kids.size(); ++i) {
    std::vector<Node> sub;
    moves(n.kids[i], sh, sub);
    for (auto& m : sub) {
      Node copy = n;
      copy.kids[i] = std::move(m);
      out.push_back(reduce(copy));
    }
  }
}

int cmp_key(const Node& a, const Node& b) {
  auto rank = [](Op o) { return o == Op::Circ ? 0 : o == Op::Otimes ? 1 : 2; };
  if (rank(a.op) != rank(b.op)) return rank(a.op) < rank(b.op) ? -1 : 1;
  if (a.kids.size() != b.kids.size()) return a.kids.size() > b.kids.size() ? -1 : 1;
  for (size_t i = 0; i < a.kids.size(); ++i)
    if (int c = cmp_key(a.kids[i], b.kids[i])) return c;
  return 0;
}

}  // namespace

std::vector<Node> interchange_orbit(const Node& n, const Shapes& shapes) {
  if (static_cast<int>(shapes.size()) < n.arity()) throw DomainError("interchange_orbit: missing slot shapes");
  Node start = reduce(n);
  std::set<Node> seen{start};
  std::deque<Node> todo{start};
  std::vector<Node> orbit{start};
  while (!todo.empty()) {
    Node cur = std::move(todo.front());
    todo.pop_front();
    std::vector<Node> next;
    moves(cur, shapes, next);
    for (auto& m : next)
      if (seen.insert(m).second) {
        orbit.push_back(m);
        todo.push_back(std::move(m));
      }
  }
  return orbit;
}

bool standard_less(const Node& a, const Node& b) {
  int c = cmp_key(a, b);
  if (c) return c < 0;
  return traversal(a) < traversal(b);
}

StandardForm standard_form(const Node& n, const Shapes& shapes) {
  auto orbit = interchange_orbit(n, shapes);
  const Node& best = *std::min_element(orbit.begin(), orbit.end(), standard_less);
  auto trav = traversal(best);
  std::vector<int> img(trav.size());
  for (size_t i = 0; i < trav.size(); ++i) img[trav[i]] = static_cast<int>(i);
  FinMap perm(static_cast<int>(trav.size()), img);
  return {relabel(best, perm), perm};
}

StandardForm standard_form(const ValidFormula& f) {
  if (f.pre.trees.size() != 1) throw DomainError("standard_form: formula must be irreducible (no '#')");
  return standard_form(f.pre.trees[0], shapes_of(f));
}

std::vector<std::vector<int>> compatible_enumerations(const Node& n, const Shapes& shapes, int bound) {
  if (n.arity() > bound)
    throw DomainError("compatible_enumerations: arity " + std::to_string(n.arity()) + " exceeds bound " +
                      std::to_string(bound));
  std::set<std::vector<int>> out;
  for (const auto& m : interchange_orbit(n, shapes)) out.insert(traversal(m));
  return {out.begin(), out.end()};
}

// ---------------------------------------------------------------- flowcharts

int Flowchart::count(Kind k) const {
  return static_cast<int>(std::count_if(vertices.begin(), vertices.end(),
                                        [k](const Vertex& v) { return v.kind == k; }));
}

Flowchart to_flowchart(const PreFormula& f, bool binary) {
  Flowchart fc;
  std::function<int(const Node&)> add = [&](const Node& n) {
    int id = static_cast<int>(fc.vertices.size());
    if (n.is_leaf()) {
      fc.vertices.push_back({Flowchart::Leaf, n.slot, {}});
      return id;
    }
    fc.vertices.push_back({n.op == Op::Circ ? Flowchart::White : Flowchart::Black, -1, {}});
    for (const auto& k : n.kids) {
      int c = add(k);
      fc.vertices[id].kids.push_back(c);
    }
    return id;
  };
  for (const auto& t : f.trees) fc.roots.push_back(add(binary ? fully_bracketed(t) : reduce(t)));
  return fc;
}

PreFormula from_flowchart(const Flowchart& fc) {
  std::function<Node(int)> build = [&](int v) {
    const auto& x = fc.vertices.at(v);
    if (x.kind == Flowchart::Leaf) return Node::leaf(x.slot);
    if (x.kids.size() < 2) throw DomainError("flowchart: internal vertex with fewer than two children");
    Node n = Node::make(x.kind == Flowchart::White ? Op::Circ : Op::Otimes, {});
    for (int k : x.kids) n.kids.push_back(build(k));
    return n;
  };
  PreFormula f;
  for (int r : fc.roots) f.trees.push_back(build(r));
  return f;
}

Node random_formula(int arity, Rng& rng, bool shuffle_labels) {
  if (arity < 1) throw DomainError("random_formula: arity must be positive");
  std::function<Node(int, Op)> gen = [&](int n, Op parent) {
    if (n == 1) return Node::leaf(0);
    Op op = parent == Op::Circ ? Op::Otimes
            : parent == Op::Otimes ? Op::Circ
                                   : (rng() % 2 ? Op::Circ : Op::Otimes);
    int r = 2 + static_cast<int>(rng() % (n - 1));
    // Random composition of n into r positive parts.
    std::vector<int> cuts(n - 1);
    std::iota(cuts.begin(), cuts.end(), 1);
    std::shuffle(cuts.begin(), cuts.end(), rng);
    cuts.resize(r - 1);
    std::sort(cuts.begin(), cuts.end());
    cuts.insert(cuts.begin(), 0);
    cuts.push_back(n);
    Node out = Node::make(op, {});
    for (int i = 0; i < r; ++i) out.kids.push_back(gen(cuts[i + 1] - cuts[i], op));
    return out;
  };
  Node t = gen(arity, Op::Slot);
  std::vector<int> labels(arity);
  std::iota(labels.begin(), labels.end(), 0);
  if (shuffle_labels) std::shuffle(labels.begin(), labels.end(), rng);
  int next = 0;
  std::function<void(Node&)> number = [&](Node& x) {
    if (x.is_leaf()) x.slot = labels[next++];
    for (auto& k : x.kids) number(k);
  };
  number(t);
  return t;
}

}  // namespace ufckit
