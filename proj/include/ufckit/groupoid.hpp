#pragma once

#include <string>
#include <vector>

namespace ufckit {

/// A finite groupoid given by its arrows. comp[g][f] = g ∘ f, or -1 when not composable.
struct Groupoid {
  int nobj = 0;
  std::vector<int> src, tgt;
  std::vector<int> ident;  ///< identity arrow of each object
  std::vector<std::vector<int>> comp;
  std::vector<int> inv;
  std::vector<std::string> names;  ///< optional arrow names

  int narrows() const { return static_cast<int>(src.size()); }
  int compose(int g, int f) const;  ///< throws when not composable
  int inverse(int f) const { return inv.at(f); }
  /// Arrows from a to b.
  std::vector<int> hom(int a, int b) const;

  /// Only identities.
  static Groupoid discrete(int n);
  /// One object with automorphism group Z/k.
  static Groupoid cyclic(int k);
  /// n objects with exactly one arrow between any two.
  static Groupoid codiscrete(int n);
};

/// Checks identities, associativity and inverses; throws DomainError.
void validate(const Groupoid& G);

}  // namespace ufckit
