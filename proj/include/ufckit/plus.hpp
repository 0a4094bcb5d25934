#pragma once

#include <string>
#include <vector>

#include "ufckit/basecat.hpp"
#include "ufckit/formula.hpp"

namespace ufckit {

/// Box: C^{⊠+}; Nc: M^{nc+}; Strong: M^+; Gcp and Hyp: unital and hyper versions of M^+.
enum class Variant { Box, Nc, Strong, Gcp, Hyp };

std::string to_string(Variant v);
Variant parse_variant(const std::string& s);
/// Strong, Gcp and Hyp identify a ⊠-word with its tensor product.
bool is_strong_based(Variant v);

/// A wire end. Producers: boundary inputs of a basic, cell outputs.
/// Consumers: cell inputs, boundary outputs of a basic.
struct Port {
  bool boundary = false;
  int owner = -1;  ///< basic for boundary ports (-1: dangling, hyp sinks only), else cell
  int index = 0;

  static Port bnd(int basic, int i) { return Port{true, basic, i}; }
  static Port cell(int c, int i) { return Port{false, c, i}; }
  static Port dangling() { return Port{true, -1, 0}; }
  bool is_dangling() const { return boundary && owner < 0; }
  bool operator==(const Port&) const = default;
  auto operator<=>(const Port&) const = default;
};

/// A white vertex: a source entry (or an irreducible factor of one) or a unit marker.
struct PlusCell {
  int entry = -1;  ///< source word position; -1 for a unit marker i_{id}
  int basic = 0;   ///< target entry it feeds; -1 for cells absorbed by some r_σ (hyp)
  Morphism deco;
  std::vector<int> ins, outs;  ///< entry wires carried by the local ports

  bool operator==(const PlusCell&) const = default;
  auto operator<=>(const PlusCell&) const = default;
};

/// A morphism of a plus construction: one basic per target entry, isomorphisms
/// recorded as the wiring between cells.
struct PlusMorphism {
  Variant variant = Variant::Nc;
  const Instance* instance = nullptr;
  std::vector<Morphism> source, target;
  std::vector<PlusCell> cells;
  std::vector<std::vector<Port>> feed_in;   ///< producer of each cell input
  std::vector<std::vector<Port>> feed_out;  ///< producer of each boundary output, per basic
  std::vector<Node> trees;                  ///< Box/Nc: composition tree of each basic

  /// Number of γ's and μ's: ⊠-length lost (Box/Nc) or irreducible factors lost
  /// (Strong/Gcp; Hyp counts non-isomorphism factors only).
  int degree() const;
  bool operator==(const PlusMorphism& o) const;
};

PlusMorphism plus_identity(Variant v, const Instance& I, const std::vector<Morphism>& word);
/// γ_{φ1,φ0}: φ1 ⊠ φ0 -> φ1 ∘ φ0.
PlusMorphism gamma(Variant v, const Instance& I, const Morphism& phi1, const Morphism& phi0);
/// μ_{φ1,φ2}: φ1 ⊠ φ2 -> φ1 ⊗ φ2 (Nc, Gcp, Hyp).
PlusMorphism mu(Variant v, const Instance& I, const Morphism& phi1, const Morphism& phi2);
/// (σ ⇓ σ′): φ -> σ′ ∘ φ ∘ σ⁻¹.
PlusMorphism iso2(Variant v, const Instance& I, const TwoCell& cell, const Morphism& phi);
/// Moves entry i of the word to position pi(i).
PlusMorphism box_permutation(Variant v, const Instance& I, const std::vector<Morphism>& word,
                             const FinMap& pi);
/// i_σ: ∅ -> σ (Gcp, Hyp).
PlusMorphism unit(Variant v, const Instance& I, const Morphism& sigma);
/// r_σ: σ -> ∅ (Hyp).
PlusMorphism counit(Variant v, const Instance& I, const Morphism& sigma);
/// The morphism denoted by a valid formula: one basic per ⊠ factor, slot s = entry s.
PlusMorphism from_formula(Variant v, const ValidFormula& f);
/// Inserts a unit cell i_{id} intercepting the given consumer ports of one basic (Gcp, Hyp).
PlusMorphism insert_unit(const PlusMorphism& g, const std::vector<Port>& consumers);

/// g after h, by substituting the basics of h into the cells of g.
PlusMorphism compose_plus(const PlusMorphism& g, const PlusMorphism& h);
PlusMorphism tensor_plus(const PlusMorphism& g, const PlusMorphism& h);

/// Idempotent normal form; equality of morphisms is equality of normal forms.
PlusMorphism canonical_form(const PlusMorphism& g);
bool equals_plus(const PlusMorphism& g, const PlusMorphism& h);

/// Throws DomainError on a malformed or invalidly decorated morphism.
void validate(const PlusMorphism& g);

/// Composite base morphism of each basic, by applying cells in topological order.
std::vector<Morphism> evaluate(const PlusMorphism& g);
/// Cospan-only oracle: glues all cell apexes along the wires with union-find.
std::vector<Cospan> evaluate_by_gluing(const PlusMorphism& g);

/// Connected components of the live part of a canonical Strong-based morphism.
struct PlusComponent {
  std::vector<int> cells;
  std::vector<int> inputs;   ///< boundary input wires, ascending
  std::vector<int> outputs;  ///< boundary output wires, ascending
  Morphism value;            ///< composite from inputs to outputs
};
std::vector<PlusComponent> plus_components(const PlusMorphism& g);

/// A right roof (μ_n, body) of M^+ with the maximal split of the source.
struct Roof {
  std::vector<Morphism> split;  ///< irreducible factors of the source, one per body cell
  PlusMorphism body;            ///< canonical Strong form
  std::vector<PlusComponent> basics;
  bool refined = false;  ///< the supplied split was not maximal
};
/// source_decomposition must tensor to the body's source; errors if some irreducible
/// target factor is produced by a disconnected basic.
Roof strong_plus_morphism(const std::vector<Morphism>& source_decomposition,
                          const PlusMorphism& body);
bool roof_equals(const Roof& a, const Roof& b);

/// All distinct canonical morphisms source -> target of a Strong-based variant
/// (Hyp includes absorption of factors by r_σ). Small sizes only.
std::vector<PlusMorphism> enumerate_hom(Variant v, const Instance& I,
                                        const std::vector<Morphism>& source,
                                        const std::vector<Morphism>& target);

/// Random valid formula tree populated with random morphisms of small interface sizes.
ValidFormula random_valid_formula(const Instance& I, int arity, Rng& rng, int max_width = 2);
/// Random morphism built from a random formula, pre- and post-composed with random isos.
PlusMorphism random_plus(Variant v, const Instance& I, int arity, Rng& rng);

std::string print(const PlusMorphism& g);

}  // namespace ufckit
