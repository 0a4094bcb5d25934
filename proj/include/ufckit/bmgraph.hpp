#pragma once

#include <string>
#include <utility>
#include <vector>

#include "ufckit/basecat.hpp"
#include "ufckit/groupoid.hpp"
#include "ufckit/plus.hpp"

namespace ufckit {

/// Borisov–Manin graph (V, F, ∂, ι). Flags are 0..F-1, vertices 0..V-1.
struct Graph {
  int nv = 0;
  std::vector<int> vertex;  ///< ∂
  std::vector<int> inv;     ///< ι; tails are fixed points
  std::vector<int> io;      ///< empty (undirected) or per flag: +1 in, -1 out
  std::vector<int> clr;     ///< empty (uncolored) or per flag color

  int nflags() const { return static_cast<int>(vertex.size()); }
  bool directed() const { return !io.empty(); }
  bool colored() const { return !clr.empty(); }
  /// Edges as (f, ι f) with f < ι f, by increasing f.
  std::vector<std::pair<int, int>> edges() const;
  std::vector<int> tails() const;
  std::vector<int> flags_at(int v) const;
  bool operator==(const Graph&) const = default;
};

void validate(const Graph& g);
Graph corolla(int nflags);
/// Directed corolla: flags 0..nin-1 are inputs, then nout outputs.
Graph directed_corolla(int nin, int nout);
Graph disjoint_union(const Graph& a, const Graph& b);
/// The simple loop: one vertex, two flags forming an edge.
Graph loop_graph();

bool is_aggregate(const Graph& g);
bool is_corolla(const Graph& g);
bool is_connected(const Graph& g);
/// At each vertex, either all or none of the out flags lie on edges, and likewise for in flags.
bool is_full(const Graph& g);

/// φ: Γ → Γ′ with φ_V surjective, φ^F: F′ ↪ F and ι_φ pairing the vanished flags.
struct GraphMorphism {
  Graph source, target;
  FinMap vmap;             ///< V → V′
  std::vector<int> fmap;   ///< F′ → F
  std::vector<int> ghost;  ///< per source flag: ι_φ partner, -1 if the flag survives

  bool operator==(const GraphMorphism&) const = default;
};

/// Borisov–Manin compatibility: ∂ commutes with the flag map, ghost pairs lie in one
/// vertex fiber, edges survive as edges or vanish as ghost edges, surviving tails stay
/// tails or are grafted pairwise; directions are respected, and set colors too unless
/// `check_colors` is false (groupoid colorings recolor flags).
void validate(const GraphMorphism& m, bool check_colors = true);
GraphMorphism identity_morphism(const Graph& g);
/// ψ ∘ φ.
GraphMorphism compose_graph_morphisms(const GraphMorphism& psi, const GraphMorphism& phi);
GraphMorphism tensor(const GraphMorphism& a, const GraphMorphism& b);
/// Ghost edges (f, ι_φ f) with f < ι_φ f.
std::vector<std::pair<int, int>> ghost_edges(const GraphMorphism& m);
/// (V, F, ∂, î_φ): vanished flags paired by ι_φ, surviving flags fixed.
Graph ghost_graph(const GraphMorphism& m);
bool is_isomorphism(const GraphMorphism& m);
/// All automorphisms, by brute force (small graphs only).
std::vector<GraphMorphism> automorphisms(const Graph& g);
/// A basic morphism of directed corollas whose ghost graph is full, connected and
/// two-level: lower out flags are matched bijectively with upper in flags.
bool is_two_level_full(const GraphMorphism& m);

Graph random_graph(int max_flags, int max_vertices, Rng& rng, bool directed = false);
/// A random morphism out of g: edges contracted, tails glued or contracted in pairs,
/// vertices merged, then everything relabeled.
GraphMorphism random_morphism(const Graph& g, Rng& rng);

/// Text format: "graph V F" then one line per flag "vertex partner io clr" (1-based,
/// partner = self for tails, io in {in,out,-}, clr an integer or -).
std::string write_graph(const Graph& g);
Graph read_graph(const std::string& text);
std::string to_dot(const Graph& g);
std::string to_dot(const GraphMorphism& m);

// ---------------------------------------------------------------------------
// Groupoid-colored graphs

struct ColoredGraph {
  Graph graph;
  std::vector<int> sigma;  ///< per flag on an edge: arrow clr(f) -> clr(ι f); -1 on tails
};
void validate(const ColoredGraph& g, const Groupoid& G);

struct ColoredMorphism {
  ColoredGraph source, target;
  GraphMorphism map;
  std::vector<int> ghost_sigma;  ///< per vanished flag f: arrow clr(f) -> clr(ι_φ f)
  std::vector<int> tau;          ///< per target flag f′: arrow clr′(f′) -> clr(φ^F f′)
};
void validate(const ColoredMorphism& m, const Groupoid& G);
ColoredMorphism compose_colored(const ColoredMorphism& psi, const ColoredMorphism& phi, const Groupoid& G);
ColoredMorphism random_colored_morphism(const ColoredGraph& g, const Groupoid& G, Rng& rng);
ColoredGraph random_colored_graph(const Groupoid& G, int max_flags, Rng& rng);

// ---------------------------------------------------------------------------
// Graphical plus construction over a single-colored instance

/// A decorated corolla: inputs and outputs are flag labels; the decoration maps the
/// inputs in increasing label order to the outputs in increasing label order.
struct DecoratedCorolla {
  std::vector<int> ins, outs;
  Morphism deco;
  bool unit = false;  ///< bivalent unit vertex i_id (gcp scaffolding)
};

/// φ′ ∘ σ ∘ φ for a two-level contraction: `gluing` pairs every output label of the
/// lower aggregate with an input label of the upper aggregate.
DecoratedCorolla graphical_compose(const Instance& I, const std::vector<DecoratedCorolla>& lower,
                                   const std::vector<DecoratedCorolla>& upper,
                                   const std::vector<std::pair<int, int>>& gluing);

/// A morphism of decorated directed aggregates: source vertex decorations plus the graph
/// morphism to the target aggregate; target decorations are what the morphism produces.
struct GraphicalMorphism {
  const Instance* instance = nullptr;
  GraphMorphism map;
  std::vector<Morphism> source_deco;
  std::vector<bool> unit;  ///< per source vertex
  std::vector<Morphism> target_deco;
};

/// Splits a canonical StrongPlus/Gcp morphism into irreducible vertices, one flag per wire.
GraphicalMorphism convert_plus_to_colored(const PlusMorphism& g);
/// Target decorations recomputed by leveled two-level contractions with unit scaffolding.
std::vector<Morphism> evaluate_graphical(const GraphicalMorphism& m);
/// The base morphism of the whole target, target input flags in label order.
Morphism assemble_target(const GraphicalMorphism& m, const std::vector<Morphism>& target_deco);
/// Splits the wire at a flag (a ghost edge or a boundary flag) by a new unit vertex.
GraphicalMorphism insert_unit_vertex(const GraphicalMorphism& m, int flag);
/// Removes a unit vertex whose two flags are not both boundary (gcp relation).
GraphicalMorphism remove_unit_vertex(const GraphicalMorphism& m, int v);

}  // namespace ufckit
