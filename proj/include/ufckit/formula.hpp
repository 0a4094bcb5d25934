#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ufckit/basecat.hpp"

namespace ufckit {

enum class Op { Slot, Circ, Otimes };

/// Expression node. Circ children are listed top first: (a o b) applies b, then a.
struct Node {
  Op op = Op::Slot;
  int slot = -1;  ///< 0-based slot label, leaves only
  std::vector<Node> kids;

  static Node leaf(int s) { return Node{Op::Slot, s, {}}; }
  static Node make(Op op, std::vector<Node> kids) { return Node{op, -1, std::move(kids)}; }

  bool is_leaf() const { return op == Op::Slot; }
  int arity() const;
  friend bool operator==(const Node& a, const Node& b) {
    return a.op == b.op && a.slot == b.slot && a.kids == b.kids;
  }
  friend bool operator<(const Node& a, const Node& b) {
    if (a.op != b.op) return a.op < b.op;
    if (a.slot != b.slot) return a.slot < b.slot;
    return a.kids < b.kids;
  }
};

/// A ⊠-sequence of irreducible expression trees.
struct PreFormula {
  std::vector<Node> trees;

  int arity() const;
  bool operator==(const PreFormula&) const = default;
};

/// Grammar: slot := _<digits> | - ; expr := slot | ( expr (op expr)+ ) ; top := expr (# expr)*.
/// Ops: o = ∘, * = ⊗, # = ⊠ (top level only). A bracket holds a single operator.
PreFormula parse_formula(const std::string& text);
std::string print(const Node& n);
std::string print(const PreFormula& f);

/// Flattens nested brackets of the same operator.
Node reduce(const Node& n);
PreFormula reduce(const PreFormula& f);
/// Binary, left-nested bracketing.
Node fully_bracketed(const Node& n);
bool is_reduced(const Node& n);

/// Slots in enumeration order: Circ children bottom to top, Otimes children left to right.
std::vector<int> traversal(const Node& n);
std::vector<int> traversal(const PreFormula& f);
/// Relabels slot s as perm(s).
Node relabel(const Node& n, const FinMap& perm);

struct ValidFormula {
  PreFormula pre;
  const Instance* instance = nullptr;
  std::vector<Morphism> population;  ///< indexed by slot
  std::vector<Morphism> values;      ///< one per ⊠ factor

  const Morphism& value() const { return values.at(0); }
};

/// Checks and evaluates; errors name the failing node.
ValidFormula populate(const PreFormula& f, const Instance& I, std::vector<Morphism> phis);

/// Evaluates a single tree.
Morphism evaluate(const Node& n, const Instance& I, const std::vector<Morphism>& phis);

/// Interface sizes (src, tgt) of each slot.
using Shapes = std::vector<std::pair<int, int>>;
Shapes shapes_of(const ValidFormula& f);

/// All reduced trees reachable by associativity and well-typed interchange moves.
std::vector<Node> interchange_orbit(const Node& n, const Shapes& shapes);

/// Total order on trees used to pick the standard member of an orbit.
bool standard_less(const Node& a, const Node& b);

struct StandardForm {
  Node formula;  ///< relabeled so that its enumeration is 1..n
  FinMap perm;   ///< old slot -> new slot
};
StandardForm standard_form(const Node& n, const Shapes& shapes);
StandardForm standard_form(const ValidFormula& f);

constexpr int kEnumerationBound = 10;
/// Distinct enumerations (slot sequences) over the interchange orbit.
std::vector<std::vector<int>> compatible_enumerations(const Node& n, const Shapes& shapes,
                                                      int bound = kEnumerationBound);

struct Flowchart {
  enum Kind { White, Black, Leaf };
  struct Vertex {
    Kind kind;
    int slot = -1;
    std::vector<int> kids;
  };
  std::vector<Vertex> vertices;
  std::vector<int> roots;  ///< one per ⊠ factor

  int count(Kind k) const;
};

/// Whites for ∘, blacks for ⊗. Reduced input gives a bipartite tree; fully_bracketed a binary one.
Flowchart to_flowchart(const PreFormula& f, bool fully_bracketed = false);
PreFormula from_flowchart(const Flowchart& fc);

/// Random reduced irreducible tree with the given arity, slots labeled by a random permutation.
Node random_formula(int arity, Rng& rng, bool shuffle_labels = true);

}  // namespace ufckit
