// Acceptance run: one PASS/FAIL line per criterion. Sample counts and seeds are pinned
// below; every comparison is exact.

#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <filesystem>
#include <functional>
#include <iostream>
#include <numeric>
#include <set>
#include <sstream>

#include "ufckit/bmgraph.hpp"
#include "ufckit/diagram.hpp"
#include "ufckit/instances.hpp"
#include "ufckit/plethysm.hpp"
#include "ufckit/plus.hpp"
#include "ufckit/ufc.hpp"

using namespace ufckit;

namespace {

constexpr int kHereditaryBound = 3;
constexpr std::uint64_t kHereditaryBudget = 5'000'000;  ///< large enough to stay exhaustive
constexpr int kLawSamples = 1000;
constexpr int kMaxObject = 5;
constexpr int kSwapBound = 4;
constexpr int kIdxPairs = 500;
constexpr int kRoundTrips = 200;
constexpr int kMaxArity = 8;
constexpr int kRelationSamples = 500;
constexpr int kUnitTrials = 200;
constexpr int kHypSize = 3;
constexpr int kGraphicalSamples = 200;
constexpr int kGhostPairs = 500;
constexpr int kGhostFlags = 8;
constexpr int kMaxTableArrows = 40;

const Instance& CO = get_instance("cospan");

struct Verdict {
  bool pass = true;
  std::string detail;
};

int depth(const Instance& I, const Morphism& f) { return degree_data(I, f).depth; }

// ---------------------------------------------------------------- 1

Verdict hereditary_verdicts() {
  Verdict v;
  std::ostringstream d;
  for (const std::string name : {"cospan", "span", "finset", "span_surj"}) {
    auto h = check_hereditary(get_instance(name), kHereditaryBound, kHereditaryBudget);
    d << name << (h.hereditary ? " hereditary" : " NOT hereditary") << " (" << h.pairs_checked << " pairs"
      << (h.sampled ? ", sampled" : "") << "); ";
    if (name != "span_surj") v.pass = v.pass && h.hereditary && !h.sampled;
  }
  // finset basics are all of type (n, 1)
  const Instance& FS = get_instance("finset");
  Rng rng(101);
  bool many_to_one = true;
  for (int t = 0; t < kLawSamples; ++t) {
    int m = static_cast<int>(rng() % (kMaxObject + 1)), n = 1 + static_cast<int>(rng() % kMaxObject);
    for (const auto& f : FS.decompose(FS.random(m, n, rng)).factors) many_to_one = many_to_one && FS.tgt(f) == 1;
  }
  d << "finset basics (n,1): " << (many_to_one ? "yes" : "no") << "; ";
  v.pass = v.pass && many_to_one;
  const Instance& TI = get_instance("ties");
  auto ties = check_hereditary(TI, kHereditaryBound, kHereditaryBudget);
  Morphism f = TI.parse("3 / 1 2 3 / - / {1,2}{3}"), g = TI.parse("3 / 1 2 3 / - / {1}{2,3}");
  auto pair = is_hereditary_pair(TI, f, g);
  bool witness = !pair.hereditary && pair.counterexample && depth(TI, f) == 2 && depth(TI, g) == 2 &&
                 depth(TI, TI.compose(g, f)) == 3 && pair.counterexample->component_depth == 3;
  d << "ties " << (ties.hereditary ? "hereditary" : "NOT hereditary") << ", witness factors 2,2 -> composite "
    << depth(TI, TI.compose(g, f));
  v.pass = v.pass && !ties.hereditary && witness;
  v.detail = d.str();
  return v;
}

// ---------------------------------------------------------------- 2

Verdict base_algebra() {
  Verdict v;
  std::ostringstream d;
  for (const std::string name : {"cospan", "span"}) {
    const Instance& I = get_instance(name);
    Rng rng(202);
    int bad = 0;
    auto sz = [&] { return static_cast<int>(rng() % (kMaxObject + 1)); };
    for (int t = 0; t < kLawSamples; ++t) {
      int a = sz(), b = sz(), c = sz(), e = sz();
      auto f = I.random(a, b, rng), g = I.random(b, c, rng), h = I.random(c, e, rng);
      if (I.compose(I.compose(h, g), f) != I.compose(h, I.compose(g, f))) ++bad;
      if (I.compose(I.identity(b), f) != f || I.compose(f, I.identity(a)) != f) ++bad;
      if (I.tensor(I.tensor(f, g), h) != I.tensor(f, I.tensor(g, h))) ++bad;
      // interchange on a second, independent pair
      int x = sz(), y = sz(), z = sz();
      auto p = I.random(x, y, rng), q = I.random(y, z, rng);
      if (I.tensor(I.compose(g, f), I.compose(q, p)) != I.compose(I.tensor(g, q), I.tensor(f, p))) ++bad;
    }
    d << name << " " << bad << " violations/" << kLawSamples << "; ";
    v.pass = v.pass && bad == 0;
  }
  v.detail = d.str();
  return v;
}

// ---------------------------------------------------------------- 3

Verdict block_swaps() {
  Verdict v;
  int checked = 0;
  for (const std::string name : {"cospan", "span", "finset"}) {
    const Instance& I = get_instance(name);
    for (int n = 0; n <= kSwapBound; ++n)
      for (int m = 0; m <= kSwapBound; ++m) {
        ++checked;
        if (I.compose(I.permutation(block_swap(m, n)), I.permutation(block_swap(n, m))) != I.identity(n + m))
          v.pass = false;
      }
  }
  // B_{3,2}: left i <= 3 meets right i + 2, left 4, 5 meet right 1, 2
  Cospan b = std::get<Cospan>(CO.permutation(block_swap(3, 2)));
  bool pairing = true;
  for (int i = 0; i < 5; ++i) {
    int j = i < 3 ? i + 2 : i - 3;
    pairing = pairing && b.l(i) == b.r(j);
  }
  v.pass = v.pass && pairing;
  v.detail = std::to_string(checked) + " commutators; B_{3,2} = " + CO.print(b) + (pairing ? "" : " (wrong pairing)");
  return v;
}

// ---------------------------------------------------------------- 4

Verdict idx_functoriality() {
  Verdict v;
  std::ostringstream d;
  for (const std::string name : {"cospan", "span", "finset", "span_surj"}) {
    const Instance& I = get_instance(name);
    Rng rng(404);
    int bad = 0, trials = 0;
    while (trials < kIdxPairs) {
      int a = static_cast<int>(rng() % 5), b = static_cast<int>(rng() % 5), c = static_cast<int>(rng() % 5);
      if (!I.has_morphisms(a, b) || !I.has_morphisms(b, c)) continue;
      auto f = I.random(a, b, rng), g = I.random(b, c, rng);
      if (idx(I, I.compose(g, f)) != cospan_compose(idx(I, g), idx(I, f))) ++bad;
      ++trials;
    }
    d << name << " " << bad << " failures/" << trials << "; ";
    if (name != "span_surj") v.pass = v.pass && bad == 0;
  }
  v.detail = d.str();
  return v;
}

// ---------------------------------------------------------------- 5

Verdict formula_calculus() {
  auto tree = [](const std::string& s) { return parse_formula(s).trees.at(0); };
  auto graph_of = [](const Node& n) { return box_to_composition_graph(formula_to_box(n)); };
  Node square = tree("((_1 o _2) * (_3 o _4))");
  Node boxcell = tree("(_6 o (_3 * (_5 o _4)) o (_1 * _2))");
  // two routes: enumerations from the drawing and from the interchange orbit
  size_t sq_g = graph_enumerations(graph_of(square)).size();
  size_t sq_f = compatible_enumerations(square, generic_shapes(square)).size();
  size_t bc_g = graph_enumerations(graph_of(boxcell)).size();
  size_t bc_f = compatible_enumerations(boxcell, generic_shapes(boxcell)).size();
  Rng rng(505);
  int bad = 0;
  for (int t = 0; t < kRoundTrips; ++t) {
    Node f = random_formula(1 + static_cast<int>(rng() % kMaxArity), rng);
    if (graph_to_formula(graph_of(f)) != f) ++bad;
  }
  Verdict v;
  v.pass = sq_g == 2 && sq_f == 2 && bc_g == 1 && bc_f == 1 && bad == 0;
  std::ostringstream d;
  d << "square " << sq_g << "/" << sq_f << " enumerations (graph/formula), boxcell " << bc_g << "/" << bc_f
    << ", round trip " << kRoundTrips - bad << "/" << kRoundTrips;
  v.detail = d.str();
  return v;
}

// ---------------------------------------------------------------- 6

struct PlusSampler {
  Variant v;
  Rng rng;
  int degree_checked = 0, degree_bad = 0;

  int width() { return static_cast<int>(rng() % 3); }
  Morphism rnd(int m, int n) { return CO.random(m, n, rng); }
  Morphism iso(int n) {
    std::vector<int> p(n);
    std::iota(p.begin(), p.end(), 0);
    std::shuffle(p.begin(), p.end(), rng);
    return CO.permutation(FinMap(n, p));
  }
  PlusMorphism C(const PlusMorphism& g, const PlusMorphism& h) {
    PlusMorphism r = compose_plus(g, h);
    ++degree_checked;
    if (r.degree() != g.degree() + h.degree()) ++degree_bad;
    return r;
  }
  PlusMorphism T(const PlusMorphism& g, const PlusMorphism& h) {
    PlusMorphism r = tensor_plus(g, h);
    ++degree_checked;
    if (r.degree() != g.degree() + h.degree()) ++degree_bad;
    return r;
  }

  bool inner() {
    int a = width(), b = width(), c = width();
    Morphism p0 = rnd(a, b), p1 = rnd(b, c), s = iso(b), sinv = CO.inverse(s);
    auto lhs = C(gamma(v, CO, CO.compose(p1, sinv), CO.compose(s, p0)),
                 T(iso2(v, CO, {s, CO.identity(c)}, p1), iso2(v, CO, {CO.identity(a), s}, p0)));
    return equals_plus(lhs, gamma(v, CO, p1, p0));
  }
  bool outer() {
    int a = width(), b = width(), c = width();
    Morphism p0 = rnd(a, b), p1 = rnd(b, c), s = iso(a), sp = iso(c);
    auto lhs = C(iso2(v, CO, {s, sp}, CO.compose(p1, p0)), gamma(v, CO, p1, p0));
    auto rhs = C(gamma(v, CO, CO.compose(sp, p1), CO.compose(p0, CO.inverse(s))),
                 T(iso2(v, CO, {CO.identity(b), sp}, p1), iso2(v, CO, {s, CO.identity(b)}, p0)));
    return equals_plus(lhs, rhs);
  }
  bool assoc() {
    int a = width(), b = width(), c = width(), d = width();
    Morphism p0 = rnd(a, b), p1 = rnd(b, c), p2 = rnd(c, d);
    auto lhs = C(gamma(v, CO, p2, CO.compose(p1, p0)), T(plus_identity(v, CO, {p2}), gamma(v, CO, p1, p0)));
    auto rhs = C(gamma(v, CO, CO.compose(p2, p1), p0), T(gamma(v, CO, p2, p1), plus_identity(v, CO, {p0})));
    return equals_plus(lhs, rhs);
  }
  bool interchange() {
    int a = width(), b = width(), c = width(), d = width(), e = width(), f = width();
    Morphism f1 = rnd(a, b), f0 = rnd(b, c), g1 = rnd(d, e), g0 = rnd(e, f);
    auto lhs = C(gamma(v, CO, CO.tensor(f0, g0), CO.tensor(f1, g1)), T(mu(v, CO, f0, g0), mu(v, CO, f1, g1)));
    auto tau = box_permutation(v, CO, {f0, g0, f1, g1}, FinMap(4, {0, 2, 1, 3}));
    auto rhs = C(mu(v, CO, CO.compose(f0, f1), CO.compose(g0, g1)),
                 C(T(gamma(v, CO, f0, f1), gamma(v, CO, g0, g1)), tau));
    return equals_plus(lhs, rhs);
  }
  bool commutator() {
    int a = width(), b = width(), c = width(), d = width();
    Morphism p1 = rnd(a, b), p2 = rnd(c, d);
    auto lhs = C(mu(v, CO, p2, p1), box_permutation(v, CO, {p1, p2}, FinMap(2, {1, 0})));
    auto rhs = C(iso2(v, CO, {CO.braiding(a, c), CO.braiding(b, d)}, CO.tensor(p1, p2)), mu(v, CO, p1, p2));
    return equals_plus(lhs, rhs);
  }
};

Verdict plus_relations() {
  Verdict v;
  std::ostringstream d;
  for (Variant var : {Variant::Nc, Variant::Gcp}) {
    PlusSampler s{var, Rng(606)};
    int bad[5] = {0, 0, 0, 0, 0};
    for (int t = 0; t < kRelationSamples; ++t) {
      bad[0] += !s.inner();
      bad[1] += !s.outer();
      bad[2] += !s.assoc();
      bad[3] += !s.interchange();
      bad[4] += !s.commutator();
    }
    int total = bad[0] + bad[1] + bad[2] + bad[3] + bad[4];
    d << to_string(var) << ": " << total << " relation failures/" << 5 * kRelationSamples << ", degree " << s.degree_bad
      << "/" << s.degree_checked << "; ";
    v.pass = v.pass && total == 0 && s.degree_bad == 0;
  }
  v.detail = d.str();
  return v;
}

// ---------------------------------------------------------------- 7

/// Consumers of the wires crossing a random level of a canonical morphism.
std::vector<Port> random_level(const PlusMorphism& g, Rng& rng) {
  const int n = static_cast<int>(g.cells.size());
  std::vector<bool> before(n, false);
  int cut = static_cast<int>(rng() % (n + 1));
  for (int placed = 0; placed < cut; ++placed) {
    std::vector<int> ready;
    for (int c = 0; c < n; ++c) {
      if (before[c]) continue;
      bool ok = true;
      for (const auto& p : g.feed_in[c]) ok = ok && (p.boundary || before[p.owner]);
      if (ok) ready.push_back(c);
    }
    before[ready[rng() % ready.size()]] = true;
  }
  auto crosses = [&](const Port& p) { return p.boundary || before[p.owner]; };
  std::vector<Port> consumers;
  for (int c = 0; c < n; ++c)
    for (size_t p = 0; p < g.feed_in[c].size(); ++p)
      if (!before[c] && crosses(g.feed_in[c][p])) consumers.push_back(Port::cell(c, static_cast<int>(p)));
  for (size_t y = 0; y < g.feed_out[0].size(); ++y)
    if (crosses(g.feed_out[0][y])) consumers.push_back(Port::bnd(0, static_cast<int>(y)));
  return consumers;
}

Verdict units_and_hyp() {
  Rng rng(707);
  int unit_bad = 0;
  for (int t = 0; t < kUnitTrials; ++t) {
    auto g = canonical_form(random_plus(Variant::Gcp, CO, 1 + static_cast<int>(rng() % 4), rng));
    if (canonical_form(insert_unit(g, random_level(g, rng))) != g) ++unit_bad;
  }
  // words of isomorphisms with total size at most kHypSize
  std::vector<Morphism> isos;
  for (int n = 0; n <= kHypSize; ++n)
    for (const auto& f : CO.hom(n, n, n))
      if (CO.is_iso(f)) isos.push_back(f);
  std::vector<std::vector<Morphism>> words{{}};
  for (const auto& s : isos) {
    words.push_back({s});
    for (const auto& t : isos)
      if (CO.src(s) + CO.src(t) <= kHypSize) words.push_back({s, t});
  }
  int hom_bad = 0, hom_checked = 0;
  for (const auto& a : words)
    for (const auto& b : words) {
      int na = 0, nb = 0;
      for (const auto& f : a) na += CO.src(f);
      for (const auto& f : b) nb += CO.src(f);
      if (na != nb) continue;
      ++hom_checked;
      if (enumerate_hom(Variant::Hyp, CO, a, b).size() != 1) ++hom_bad;
    }
  Verdict v;
  v.pass = unit_bad == 0 && hom_bad == 0;
  v.detail = "unit insertions " + std::to_string(kUnitTrials - unit_bad) + "/" + std::to_string(kUnitTrials) +
             " invisible; hyp iso hom-sets " + std::to_string(hom_checked - hom_bad) + "/" +
             std::to_string(hom_checked) + " singletons";
  return v;
}

// ---------------------------------------------------------------- 8

Verdict graphical_round_trip() {
  Rng rng(808);
  int bad = 0;
  for (int i = 0; i < kGraphicalSamples; ++i) {
    Variant var = i % 2 ? Variant::Gcp : Variant::Strong;
    PlusMorphism g = random_plus(var, CO, 1 + static_cast<int>(rng() % 4), rng);
    GraphicalMorphism m = convert_plus_to_colored(g);
    auto values = evaluate_graphical(m);
    auto whole = evaluate(canonical_form(g));
    if (values != m.target_deco || whole.size() != 1 || assemble_target(m, values) != whole[0]) ++bad;
  }
  Verdict v;
  v.pass = bad == 0;
  v.detail = std::to_string(kGraphicalSamples - bad) + "/" + std::to_string(kGraphicalSamples) + " agree";
  return v;
}

// ---------------------------------------------------------------- 9

Verdict ghost_graphs() {
  Rng rng(909);
  int bad = 0;
  for (int i = 0; i < kGhostPairs; ++i) {
    Graph g = random_graph(kGhostFlags, 4, rng, i % 2 == 1);
    GraphMorphism phi = random_morphism(g, rng), psi = random_morphism(phi.target, rng);
    GraphMorphism c = compose_graph_morphisms(psi, phi);
    std::set<std::pair<int, int>> expect;
    for (auto e : ghost_edges(phi)) expect.insert(e);
    for (auto [x, y] : ghost_edges(psi))
      expect.insert({std::min(phi.fmap[x], phi.fmap[y]), std::max(phi.fmap[x], phi.fmap[y])});
    auto got = ghost_edges(c);
    if (std::set<std::pair<int, int>>(got.begin(), got.end()) != expect) ++bad;
  }
  size_t aut = automorphisms(loop_graph()).size();
  Verdict v;
  v.pass = bad == 0 && aut == 2;
  v.detail = std::to_string(kGhostPairs - bad) + "/" + std::to_string(kGhostPairs) + " composites; |Aut(loop)| = " +
             std::to_string(aut);
  return v;
}

// ---------------------------------------------------------------- 10

Verdict plethysm(const std::string& data) {
  Verdict v;
  std::ostringstream d;
  std::vector<std::filesystem::path> tables;
  for (const auto& e : std::filesystem::directory_iterator(data + "/tables"))
    if (e.path().extension() == ".cat") tables.push_back(e.path());
  std::sort(tables.begin(), tables.end());
  std::uint64_t checks = 0;
  for (const auto& p : tables) {
    FiniteCategory C = load_category(p.string());
    BimoduleMonoid m = hom_bimodule(C);
    Report mon = check_monoid(m), unit = check_unit(m, unit_pointing(m)), laws = check_unit_laws(m.rho, m.G);
    checks += mon.checked + unit.checked + laws.checked;
    bool ok = C.narrows() <= kMaxTableArrows && mon.ok && unit.ok && laws.ok;
    if (!ok) d << p.stem().string() << " FAILED " << mon.witness << unit.witness << laws.witness << "; ";
    v.pass = v.pass && ok;
  }
  v.pass = v.pass && !tables.empty();
  d << tables.size() << " tables, " << checks << " checks";
  v.detail = d.str();
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  std::string data = UFCKIT_DATA_DIR;
  std::vector<int> allowed;
  app.add_option("--data", data, "data directory");
  app.add_option("--allow-fail", allowed, "criteria whose FAIL does not affect the exit code")->delimiter(',');
  CLI11_PARSE(app, argc, argv);

  std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
      {"hereditary verdicts at bound 3", hereditary_verdicts},
      {"cospan/span algebra", base_algebra},
      {"block swap commutators", block_swaps},
      {"idx functoriality", idx_functoriality},
      {"formula/diagram calculus", formula_calculus},
      {"plus relations and degree", plus_relations},
      {"gcp units and hyp hom-sets", units_and_hyp},
      {"graphical plus round trip", graphical_round_trip},
      {"graph category", ghost_graphs},
      {"plethysm monoids", [&] { return plethysm(data); }},
  };
  int failed = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    int n = static_cast<int>(i) + 1;
    bool excused = std::find(allowed.begin(), allowed.end(), n) != allowed.end();
    std::cout << (v.pass ? "PASS" : "FAIL") << " " << n << " " << criteria[i].first << ": " << v.detail << " ["
              << std::fixed << std::setprecision(1) << secs << "s]" << (!v.pass && excused ? " (known)" : "")
              << std::endl;
    if (!v.pass && !excused) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
