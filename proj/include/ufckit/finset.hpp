#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ufckit {

/// Raised for any violated precondition on mathematical input.
struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A map {0..dom-1} -> {0..cod-1}. Printed 1-based.
struct FinMap {
  int cod = 0;
  std::vector<int> img;

  FinMap() = default;
  FinMap(int cod_, std::vector<int> img_);

  int dom() const { return static_cast<int>(img.size()); }
  int operator()(int i) const { return img[i]; }

  static FinMap identity(int n);
  static FinMap empty(int cod) { return FinMap(cod, {}); }

  bool is_bijection() const;
  bool is_surjection() const;
  bool is_injection() const;
  FinMap inverse() const;  ///< requires a bijection

  bool operator==(const FinMap&) const = default;
  auto operator<=>(const FinMap&) const = default;
};

/// g after f.
FinMap compose(const FinMap& g, const FinMap& f);
/// f ⊔ g as a map dom f + dom g -> cod f + cod g.
FinMap coproduct(const FinMap& f, const FinMap& g);

/// Blocks of a partition of {0..ground-1}, each sorted, ordered by minimum.
struct Partition {
  int ground = 0;
  std::vector<std::vector<int>> blocks;

  static Partition from_labels(const std::vector<int>& label);
  bool valid() const;
  bool operator==(const Partition&) const = default;
};

/// Union-find over {0..n-1}; classes() renumbers by first occurrence.
class UnionFind {
 public:
  explicit UnionFind(int n);
  int find(int x);
  void unite(int a, int b);
  int size() const { return static_cast<int>(parent_.size()); }
  /// label[x] in 0..count-1, numbered by first occurrence of the class.
  std::vector<int> classes(int* count = nullptr);

 private:
  std::vector<int> rank_, parent_;
};

struct PushoutResult {
  int u = 0;
  FinMap p1, p2;
};

/// Relative coproduct of k1 and k2 over the glued pairs.
PushoutResult pushout(int k1, int k2, const std::vector<std::pair<int, int>>& glue);

struct PullbackResult {
  int p = 0;
  FinMap pi1, pi2;
};

PullbackResult pullback(const FinMap& f, const FinMap& g);

std::vector<std::vector<int>> fibers(const FinMap& f);

/// 1-based, space separated; "-" for the empty list.
std::string to_string(const std::vector<int>& v);
std::vector<int> parse_list(const std::string& text);

}  // namespace ufckit
