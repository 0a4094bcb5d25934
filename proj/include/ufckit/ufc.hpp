#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ufckit/basecat.hpp"

namespace ufckit {

/// Connected components of a composable sequence seq[0], seq[1], ... (seq[0] applied first).
struct ComponentReport {
  int u_count = 0;
  std::vector<Morphism> component_morphisms;                   ///< φ_u
  std::vector<std::vector<Morphism>> component_factor_sequences;  ///< ψ_{i,u}, application order
  std::vector<std::vector<int>> partition;  ///< partition[i][j] = class of factor j of seq[i]
  /// level_class[i][x]: class of position x of the i-th object (i = 0..n).
  std::vector<std::vector<int>> level_class;
};

ComponentReport connected_components(const Instance& I, const std::vector<Morphism>& seq);

/// The composite of the sequence rebuilt from its components.
Morphism reassemble_components(const Instance& I, const ComponentReport& r);

struct Counterexample {
  Morphism phi0, phi1, component;
  int component_depth = 0;
};

struct HereditaryVerdict {
  bool hereditary = true;
  std::optional<Counterexample> counterexample;
  std::uint64_t pairs_checked = 0;
  bool sampled = false;
  std::uint64_t seed = 0;
};

/// Checks the pair φ1 ∘ φ0: every component must have depth exactly 1.
HereditaryVerdict is_hereditary_pair(const Instance& I, const Morphism& phi0, const Morphism& phi1);

/// Exhaustive over composable pairs with object lengths <= size_bound, or a seeded
/// sample of trial_budget pairs when the enumeration is larger.
HereditaryVerdict check_hereditary(const Instance& I, int size_bound, std::uint64_t trial_budget,
                                   std::uint64_t seed = 1);

Cospan idx(const Instance& I, const Morphism& phi);

}  // namespace ufckit
