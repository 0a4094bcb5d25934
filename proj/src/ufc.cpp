#include "ufckit/ufc.hpp"

#include <algorithm>
#include <numeric>
#include <tuple>

#include "ufckit/instances.hpp"

namespace ufckit {

namespace {

/// Restriction of φ = R ∘ (⊗F) ∘ L to the factors with class u.
Morphism restrict(const Instance& I, const Decomposition& d, const std::vector<int>& fclass, int u) {
  auto L = *I.as_permutation(d.left_iso);
  auto R = *I.as_permutation(d.right_iso);
  int nf = static_cast<int>(d.factors.size());
  std::vector<int> soff(nf + 1, 0), toff(nf + 1, 0), slocal(nf, 0), tlocal(nf, 0);
  std::vector<Morphism> sub;
  int sl = 0, tl = 0;
  for (int j = 0; j < nf; ++j) {
    soff[j + 1] = soff[j] + I.src(d.factors[j]);
    toff[j + 1] = toff[j] + I.tgt(d.factors[j]);
    if (fclass[j] == u) {
      slocal[j] = sl;
      tlocal[j] = tl;
      sl += I.src(d.factors[j]);
      tl += I.tgt(d.factors[j]);
      sub.push_back(d.factors[j]);
    }
  }
  auto block_of = [&](const std::vector<int>& off, int p) {
    return static_cast<int>(std::upper_bound(off.begin(), off.end(), p) - off.begin()) - 1;
  };
  std::vector<int> lmap;
  for (int x = 0; x < d.src_assign.dom(); ++x) {
    if (fclass[d.src_assign(x)] != u) continue;
    int p = L(x), j = block_of(soff, p);
    lmap.push_back(slocal[j] + p - soff[j]);
  }
  std::vector<int> rank_t(d.tgt_assign.dom(), -1);
  int r = 0;
  for (int y = 0; y < d.tgt_assign.dom(); ++y)
    if (fclass[d.tgt_assign(y)] == u) rank_t[y] = r++;
  std::vector<int> rmap(tl);
  for (int j = 0; j < nf; ++j) {
    if (fclass[j] != u) continue;
    for (int q = toff[j]; q < toff[j + 1]; ++q) rmap[tlocal[j] + q - toff[j]] = rank_t[R(q)];
  }
  return I.compose(I.permutation(FinMap(tl, rmap)),
                   I.compose(I.tensor_all(sub), I.permutation(FinMap(sl, lmap))));
}

}  // namespace

ComponentReport connected_components(const Instance& I, const std::vector<Morphism>& seq) {
  if (seq.empty()) throw DomainError("connected_components: empty sequence");
  for (size_t i = 0; i + 1 < seq.size(); ++i)
    if (I.tgt(seq[i]) != I.src(seq[i + 1]))
      throw DomainError("connected_components: entry " + std::to_string(i + 1) + " (" +
                        I.print(seq[i]) + ") does not compose with entry " + std::to_string(i + 2) +
                        " (" + I.print(seq[i + 1]) + ")");
  int n = static_cast<int>(seq.size());
  std::vector<Decomposition> dec;
  std::vector<int> base(n + 1, 0);
  for (int i = 0; i < n; ++i) {
    dec.push_back(I.decompose(seq[i]));
    base[i + 1] = base[i] + static_cast<int>(dec[i].factors.size());
  }
  UnionFind uf(base[n]);
  for (int i = 0; i + 1 < n; ++i)
    for (int x = 0; x < dec[i].tgt_assign.dom(); ++x)
      uf.unite(base[i] + dec[i].tgt_assign(x), base[i + 1] + dec[i + 1].src_assign(x));
  ComponentReport rep;
  auto cls = uf.classes(&rep.u_count);
  for (int i = 0; i < n; ++i)
    rep.partition.emplace_back(cls.begin() + base[i], cls.begin() + base[i + 1]);
  rep.level_class.resize(n + 1);
  for (int x = 0; x < dec[0].src_assign.dom(); ++x)
    rep.level_class[0].push_back(rep.partition[0][dec[0].src_assign(x)]);
  for (int i = 0; i < n; ++i)
    for (int x = 0; x < dec[i].tgt_assign.dom(); ++x)
      rep.level_class[i + 1].push_back(rep.partition[i][dec[i].tgt_assign(x)]);
  for (int u = 0; u < rep.u_count; ++u) {
    std::vector<Morphism> psis;
    for (int i = 0; i < n; ++i) psis.push_back(restrict(I, dec[i], rep.partition[i], u));
    Morphism acc = psis[0];
    for (int i = 1; i < n; ++i) acc = I.compose(psis[i], acc);
    rep.component_factor_sequences.push_back(std::move(psis));
    rep.component_morphisms.push_back(std::move(acc));
  }
  return rep;
}

Morphism reassemble_components(const Instance& I, const ComponentReport& r) {
  auto Q0 = sorting_permutation(r.level_class.front());
  auto Qn = sorting_permutation(r.level_class.back());
  return I.compose(I.permutation(Qn.inverse()),
                   I.compose(I.tensor_all(r.component_morphisms), I.permutation(Q0)));
}

HereditaryVerdict is_hereditary_pair(const Instance& I, const Morphism& phi0, const Morphism& phi1) {
  HereditaryVerdict v;
  v.pairs_checked = 1;
  auto rep = connected_components(I, {phi0, phi1});
  for (const auto& c : rep.component_morphisms) {
    int depth = static_cast<int>(I.decompose(c).factors.size());
    if (depth != 1) {
      v.hereditary = false;
      v.counterexample = Counterexample{phi0, phi1, c, depth};
      break;
    }
  }
  return v;
}

HereditaryVerdict check_hereditary(const Instance& I, int size_bound, std::uint64_t trial_budget,
                                   std::uint64_t seed) {
  if (size_bound <= 0 || trial_budget == 0) throw DomainError("check_hereditary: bounds must be positive");
  std::vector<std::tuple<int, int, int>> triples;
  for (int a = 0; a <= size_bound; ++a)
    for (int b = 0; b <= size_bound; ++b)
      for (int c = 0; c <= size_bound; ++c)
        if (I.has_morphisms(a, b) && I.has_morphisms(b, c)) triples.emplace_back(a, b, c);
  std::stable_sort(triples.begin(), triples.end(), [](const auto& x, const auto& y) {
    auto s = [](const auto& t) { return std::get<0>(t) + std::get<1>(t) + std::get<2>(t); };
    return s(x) < s(y);
  });
  std::vector<std::vector<std::vector<Morphism>>> homs(size_bound + 1,
                                                        std::vector<std::vector<Morphism>>(size_bound + 1));
  for (int a = 0; a <= size_bound; ++a)
    for (int b = 0; b <= size_bound; ++b) homs[a][b] = I.hom(a, b, size_bound);
  std::uint64_t total = 0;
  for (auto [a, b, c] : triples) total += homs[a][b].size() * homs[b][c].size();

  HereditaryVerdict v;
  v.seed = seed;
  v.sampled = total > trial_budget;
  auto check = [&](const Morphism& f, const Morphism& g) {
    ++v.pairs_checked;
    auto p = is_hereditary_pair(I, f, g);
    if (!p.hereditary) {
      v.hereditary = false;
      v.counterexample = p.counterexample;
      return false;
    }
    return true;
  };
  if (!v.sampled) {
    for (auto [a, b, c] : triples)
      for (const auto& f : homs[a][b])
        for (const auto& g : homs[b][c])
          if (!check(f, g)) return v;
    return v;
  }
  // Seeded sample: draw pair indices, then visit them in enumeration order.
  Rng rng(seed);
  std::uniform_int_distribution<std::uint64_t> pick(0, total - 1);
  std::vector<std::uint64_t> idxs(trial_budget);
  for (auto& x : idxs) x = pick(rng);
  std::sort(idxs.begin(), idxs.end());
  std::uint64_t offset = 0;
  size_t k = 0;
  for (auto [a, b, c] : triples) {
    std::uint64_t block = homs[a][b].size() * homs[b][c].size();
    while (k < idxs.size() && idxs[k] < offset + block) {
      std::uint64_t local = idxs[k] - offset;
      if (!check(homs[a][b][local / homs[b][c].size()], homs[b][c][local % homs[b][c].size()]))
        return v;
      ++k;
    }
    offset += block;
  }
  return v;
}

Cospan idx(const Instance& I, const Morphism& phi) {
  auto d = I.decompose(phi);
  int k = static_cast<int>(d.factors.size());
  return canonical(make_cospan(I.src(phi), I.tgt(phi), k, d.src_assign, d.tgt_assign));
}

}  // namespace ufckit
