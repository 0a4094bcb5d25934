#pragma once

#include <boost/rational.hpp>
#include <string>
#include <vector>

#include "ufckit/formula.hpp"

namespace ufckit {

using Rational = boost::rational<long long>;

/// Box diagram: Cell, VStack (children top to bottom) or HRow (children left to right).
struct BoxDiagram {
  enum Kind { Cell, VStack, HRow };
  Kind kind = Cell;
  int slot = -1;
  std::vector<BoxDiagram> kids;

  bool operator==(const BoxDiagram&) const = default;
};

BoxDiagram formula_to_box(const Node& n);
std::vector<BoxDiagram> formula_to_box(const PreFormula& f);  ///< one diagram per ⊠ factor
Node box_to_formula(const BoxDiagram& b);

/// A box, dual to a white vertex. Whites are stored in the reading order of their source.
struct White {
  int slot = -1;
  Rational x0, x1, y0, y1;
  bool operator==(const White&) const = default;
};

/// A horizontal segment piece between two boxes; -1 marks the bottom or top boundary.
struct Black {
  int lower = -1, upper = -1;
  Rational x0, x1, y;  ///< extent along the line; x0 == x1 for a piece squeezed between two breaks
  bool operator==(const Black&) const = default;
};

struct CompositionGraph {
  std::vector<White> whites;
  std::vector<Black> blacks;  ///< bottom-to-top, then left-to-right within an interface

  int inputs(int w) const;   ///< blacks directly below w
  int outputs(int w) const;  ///< blacks directly above w
  bool operator==(const CompositionGraph&) const = default;
};

/// Generic drawing: equal widths in rows, equal heights in stacks. Where breaks of two
/// stacked rows coincide, the upper break is taken first.
CompositionGraph box_to_composition_graph(const BoxDiagram& b);

struct Rect {
  int slot;
  int x0, y0, x1, y1;
};
/// Graph of an explicit tiling of a rectangle by integer rectangles.
CompositionGraph layout_graph(const std::vector<Rect>& rects);
/// The 3x3 pinwheel tiling: four 2x1 bars around a unit square, no full cut.
std::vector<Rect> pinwheel();

/// Interface sizes of each slot read off the generic drawing: one wire per black.
Shapes generic_shapes(const Node& n);

struct Decomposability {
  bool decomposable = false;
  std::vector<std::string> trace;  ///< elementary compositions, innermost first
};
Decomposability is_decomposable(const CompositionGraph& g);

/// All reduced formulas (slots = white slots) realizing g.
std::vector<Node> decompositions(const CompositionGraph& g);
/// Formula whose reading order matches the white order, else the standard one.
Node graph_to_formula(const CompositionGraph& g);
/// Slots in the order of the standard decomposition.
std::vector<int> standard_enumeration(const CompositionGraph& g);
/// Distinct enumerations over all decompositions.
std::vector<std::vector<int>> graph_enumerations(const CompositionGraph& g);

/// Connected components, left to right, each shifted to start at x = 0.
std::vector<CompositionGraph> connected_split(const CompositionGraph& g);
/// Side-by-side juxtaposition.
CompositionGraph tensor(const CompositionGraph& a, const CompositionGraph& b);

/// Blacks merged along full horizontal line segments.
struct SuspensionGraph {
  CompositionGraph base;
  std::vector<int> segment;  ///< segment id per black of base
  int segments = 0;
};
SuspensionGraph suspension(const CompositionGraph& g);

std::string to_dot(const CompositionGraph& g, const std::string& name = "G");
std::string to_dot(const SuspensionGraph& s, const std::string& name = "S");
std::string to_dot(const std::vector<CompositionGraph>& forest, const std::string& name = "F");

/// Text form "slot x0 x1 y0 y1; ... | lower upper x0 x1 y; ...": slots and white
/// indices 1-based, 0 for the boundary, coordinates as p or p/q.
std::string to_literal(const CompositionGraph& g);
CompositionGraph parse_graph(const std::string& text);

}  // namespace ufckit
