#pragma once

#include <optional>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "ufckit/finset.hpp"

namespace ufckit {

/// Skeletal cospan m -> k <- n (l: m->k, r: n->k), middle labeled canonically.
struct Cospan {
  int m = 0, n = 0, k = 0;
  FinMap l, r;
  bool operator==(const Cospan&) const = default;
  auto operator<=>(const Cospan&) const = default;
};

/// Skeletal span m <- k -> n, middle sorted by (l(c), r(c)).
struct Span {
  int m = 0, n = 0, k = 0;
  FinMap l, r;
  bool operator==(const Span&) const = default;
  auto operator<=>(const Span&) const = default;
};

/// Morphism of finite sets.
struct FinSetMor {
  FinMap f;
  bool operator==(const FinSetMor&) const = default;
  auto operator<=>(const FinSetMor&) const = default;
};

/// Permutation with a tie on the target: tie[y] = -1 for untied, else the block
/// number (blocks numbered by their minimum element).
struct TiesMor {
  FinMap perm;
  std::vector<int> tie;
  int n() const { return perm.dom(); }
  std::vector<int> untied() const;
  std::vector<std::vector<int>> blocks() const;
  bool operator==(const TiesMor&) const = default;
  auto operator<=>(const TiesMor&) const = default;
};

using Morphism = std::variant<Cospan, Span, FinSetMor, TiesMor>;

/// f = right_iso ∘ (⊗ factors) ∘ left_iso, with src_assign/tgt_assign the cospan idx(f).
struct Decomposition {
  Morphism left_iso, right_iso;
  std::vector<Morphism> factors;
  FinMap src_assign, tgt_assign;
};

/// (σ ⇓ σ′) acting by φ ↦ σ′ ∘ φ ∘ σ⁻¹.
struct TwoCell {
  Morphism sigma, sigma_prime;
};

struct DegreeData {
  int src = 0, tgt = 0, degree = 0, depth = 0;
  bool operator==(const DegreeData&) const = default;
};

using Rng = std::mt19937_64;

/// A strict skeletal symmetric monoidal base category with a single color;
/// objects are word lengths.
class Instance {
 public:
  virtual ~Instance() = default;
  virtual std::string name() const = 0;
  virtual int src(const Morphism& f) const = 0;
  virtual int tgt(const Morphism& f) const = 0;
  virtual Morphism identity(int n) const = 0;
  virtual Morphism compose(const Morphism& g, const Morphism& f) const = 0;
  virtual Morphism tensor(const Morphism& f, const Morphism& g) const = 0;
  /// The isomorphism sending wire i to position pi(i).
  virtual Morphism permutation(const FinMap& pi) const = 0;
  virtual std::optional<FinMap> as_permutation(const Morphism& f) const = 0;
  virtual Decomposition decompose(const Morphism& f) const = 0;
  virtual Morphism parse(const std::string& text) const = 0;
  virtual std::string print(const Morphism& f) const = 0;
  /// All morphisms m -> n whose auxiliary size (middle, ties) stays within bound.
  virtual std::vector<Morphism> hom(int m, int n, int bound) const = 0;
  virtual bool has_morphisms(int m, int n) const = 0;
  virtual Morphism random(int m, int n, Rng& rng) const = 0;

  bool is_iso(const Morphism& f) const { return as_permutation(f).has_value(); }
  Morphism inverse(const Morphism& iso) const;
  Morphism tensor_all(const std::vector<Morphism>& fs) const;
  /// Rebuilds right_iso ∘ (⊗ factors) ∘ left_iso.
  Morphism reassemble(const Decomposition& d) const;
  /// Symmetry C_{a,b}: a+b -> b+a.
  Morphism braiding(int a, int b) const;
};

const Instance& get_instance(const std::string& name);
std::vector<std::string> instance_names();

Morphism iso_act(const Instance& I, const TwoCell& cell, const Morphism& f);
DegreeData degree_data(const Instance& I, const Morphism& f);

/// Permutation sorting positions by key (ties broken by position): result(i) = rank of i.
FinMap sorting_permutation(const std::vector<int>& key);

}  // namespace ufckit
