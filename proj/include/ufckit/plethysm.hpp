#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "ufckit/groupoid.hpp"

namespace ufckit {

/// A finite category given by explicit tables. comp[g][f] = g ∘ f or -1.
struct FiniteCategory {
  std::vector<std::string> obj_names;
  std::vector<int> src, tgt;
  std::vector<std::string> names;
  std::vector<std::vector<int>> comp;
  std::vector<int> ident;
  std::vector<std::string> over;  ///< optional base morphism name per arrow (enrichment tables)

  int nobj() const { return static_cast<int>(obj_names.size()); }
  int narrows() const { return static_cast<int>(src.size()); }
  int compose(int g, int f) const;
  /// The inverse arrow, or -1.
  int inverse(int f) const;
  int find(const std::string& name) const;
};

/// Table format, one record per line ('#' starts a comment):
///   obj X            an object; its identity is named 1_X
///   mor f X Y        an arrow f: X -> Y (optionally followed by "over φ")
///   comp g f = h     g ∘ f = h; every composable pair of non-identities needs one
FiniteCategory parse_category(const std::string& text);
FiniteCategory load_category(const std::string& path);
/// Unit laws and associativity; throws DomainError with the failing arrows.
void validate(const FiniteCategory& C);

/// Iso(C) together with the inclusion of its arrows into C.
struct IsoGroupoid {
  Groupoid G;
  std::vector<int> to_cat;    ///< groupoid arrow -> category arrow
  std::vector<int> from_cat;  ///< category arrow -> groupoid arrow or -1
};
IsoGroupoid iso_groupoid(const FiniteCategory& C);

/// A Set-valued G-bimodule: elements e ∈ ρ(src e, tgt e) with σ′∘e = post[σ′][e] and
/// e∘σ = pre[σ][e] (-1 where the ends do not match).
struct Bimodule {
  std::vector<int> src, tgt;
  std::vector<std::vector<int>> post, pre;
  std::vector<std::string> names;

  int size() const { return static_cast<int>(src.size()); }
  /// (σ ⇓ σ′)(e) = σ′ ∘ e ∘ σ⁻¹.
  int act(const Groupoid& G, int sigma, int sigma_prime, int e) const;
};

void validate(const Bimodule& B, const Groupoid& G);
/// Hom_G with its two-sided action; the unit for ⊗_G.
Bimodule groupoid_bimodule(const Groupoid& G);
/// One element per pair of objects.
Bimodule trivial_bimodule(const Groupoid& G);

/// F ⊗_G H: pairs (f, h) with src f = tgt h modulo (f∘σ, h) ~ (f, σ∘h).
struct TensorProduct {
  Bimodule result;
  std::vector<std::pair<int, int>> rep;  ///< a representative pair per class
  std::vector<std::vector<int>> cls;     ///< cls[f][h]: class of the pair or -1
};
TensorProduct relative_tensor(const Bimodule& F, const Bimodule& H, const Groupoid& G);

/// A bimodule monoid: γ on composable pairs of ρ and an optional unit per arrow of G.
struct BimoduleMonoid {
  Groupoid G;
  Bimodule rho;
  std::vector<std::vector<int>> gamma;  ///< gamma[f][h] = γ(f, h) or -1
  std::vector<int> unit;                ///< u(σ) per groupoid arrow, empty if none
};

/// Hom_C over Iso(C): γ is composition, u the inclusion of isomorphisms.
BimoduleMonoid hom_bimodule(const FiniteCategory& C);
/// Hom of an enriched table over Iso(base), acting through the section of isomorphisms
/// (each base isomorphism must have exactly one invertible arrow lying over it).
BimoduleMonoid enriched_bimodule(const FiniteCategory& hat, const FiniteCategory& base);

struct Report {
  bool ok = true;
  std::string witness;
  std::uint64_t checked = 0;
};

/// γ descends to ρ ⊗_G ρ, is equivariant, and is associative on all composable triples.
Report check_monoid(const BimoduleMonoid& m);
/// Extends a pointing (one element of ρ(X,X) per object) to u_σ by the action and checks
/// the two-sided unit laws, u(id_Y) ∘ σ = σ ∘ u(id_X), and γ(u_σ, f) = σ∘f, γ(f, u_σ) = f∘σ.
Report check_unit(const BimoduleMonoid& m, const std::vector<int>& pointing);
/// The identity pointing u(id_X) of a monoid with a unit.
std::vector<int> unit_pointing(const BimoduleMonoid& m);
/// F ⊗_G Hom_G ≅ F and Hom_G ⊗_G F ≅ F through the action maps, checked to be bijections.
Report check_unit_laws(const Bimodule& F, const Groupoid& G);
/// ((f, g), h) ↦ (f, (g, h)) is a well-defined bijection (F⊗G)⊗H ≅ F⊗(G⊗H).
Report check_tensor_associativity(const Bimodule& F, const Bimodule& H, const Bimodule& K, const Groupoid& G);

/// Fibers D(φ) of b: ρ → Hom_C with their action, composition and units.
struct IndexingData {
  std::vector<std::vector<int>> fiber;  ///< per base arrow, the elements over it
  std::vector<int> unit;                ///< u_σ per groupoid arrow (in D(σ)), empty if none
  std::uint64_t checked = 0;            ///< axiom instances verified
};

/// Checks that b is a map of bimodule monoids over Hom_C and reads off the indexing data;
/// throws DomainError with a witness on any axiom violation. `base` must be the category
/// whose isomorphism groupoid is m.G (arrow numbering as in iso_groupoid).
IndexingData indexing_from_bimodule(const BimoduleMonoid& m, const FiniteCategory& base, const std::vector<int>& b);
/// Rebuilds the category C(ρ) from indexing data: arrows ⊔_φ D(φ), composition γ^D.
FiniteCategory category_from_indexing(const BimoduleMonoid& m, const FiniteCategory& base, const IndexingData& d,
                                      const std::vector<int>& b);
/// The base arrow of each element of an enriched table (from its "over" names).
std::vector<int> base_projection(const FiniteCategory& hat, const FiniteCategory& base);

}  // namespace ufckit
