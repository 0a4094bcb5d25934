#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "ufckit/instances.hpp"
#include "ufckit/plus.hpp"

using namespace ufckit;

namespace {

const Instance& CO = get_instance("cospan");

constexpr int kSamples = 500;

Morphism rnd(int m, int n, Rng& rng) { return CO.random(m, n, rng); }
int width(Rng& rng) { return static_cast<int>(rng() % 3); }

Morphism random_iso(int n, Rng& rng) {
  std::vector<int> v(n);
  std::iota(v.begin(), v.end(), 0);
  std::shuffle(v.begin(), v.end(), rng);
  return CO.permutation(FinMap(n, v));
}

#define EXPECT_PLUS_EQ(a, b) EXPECT_TRUE(equals_plus(a, b)) << print(canonical_form(a)) << "vs\n" << print(canonical_form(b))

void inner_equivariance(Variant v, Rng& rng) {
  int a = width(rng), b = width(rng), c = width(rng);
  Morphism p0 = rnd(a, b, rng), p1 = rnd(b, c, rng), s = random_iso(b, rng);
  Morphism sinv = CO.inverse(s);
  auto lhs = compose_plus(gamma(v, CO, CO.compose(p1, sinv), CO.compose(s, p0)),
                          tensor_plus(iso2(v, CO, {s, CO.identity(c)}, p1),
                                      iso2(v, CO, {CO.identity(a), s}, p0)));
  EXPECT_PLUS_EQ(lhs, gamma(v, CO, p1, p0));
}

void outer_equivariance(Variant v, Rng& rng) {
  int a = width(rng), b = width(rng), c = width(rng);
  Morphism p0 = rnd(a, b, rng), p1 = rnd(b, c, rng);
  Morphism s = random_iso(a, rng), sp = random_iso(c, rng);
  auto lhs = compose_plus(iso2(v, CO, {s, sp}, CO.compose(p1, p0)), gamma(v, CO, p1, p0));
  auto rhs = compose_plus(
      gamma(v, CO, CO.compose(sp, p1), CO.compose(p0, CO.inverse(s))),
      tensor_plus(iso2(v, CO, {CO.identity(b), sp}, p1), iso2(v, CO, {s, CO.identity(b)}, p0)));
  EXPECT_PLUS_EQ(lhs, rhs);
}

void associativity(Variant v, Rng& rng) {
  int a = width(rng), b = width(rng), c = width(rng), d = width(rng);
  Morphism p0 = rnd(a, b, rng), p1 = rnd(b, c, rng), p2 = rnd(c, d, rng);
  auto lhs = compose_plus(gamma(v, CO, p2, CO.compose(p1, p0)),
                          tensor_plus(plus_identity(v, CO, {p2}), gamma(v, CO, p1, p0)));
  auto rhs = compose_plus(gamma(v, CO, CO.compose(p2, p1), p0),
                          tensor_plus(gamma(v, CO, p2, p1), plus_identity(v, CO, {p0})));
  EXPECT_PLUS_EQ(lhs, rhs);
}

void interchange(Variant v, Rng& rng) {
  int a = width(rng), b = width(rng), c = width(rng), d = width(rng), e = width(rng), f = width(rng);
  Morphism f1 = rnd(a, b, rng), f0 = rnd(b, c, rng), g1 = rnd(d, e, rng), g0 = rnd(e, f, rng);
  auto lhs = compose_plus(gamma(v, CO, CO.tensor(f0, g0), CO.tensor(f1, g1)),
                          tensor_plus(mu(v, CO, f0, g0), mu(v, CO, f1, g1)));
  auto tau = box_permutation(v, CO, {f0, g0, f1, g1}, FinMap(4, {0, 2, 1, 3}));
  auto rhs = compose_plus(mu(v, CO, CO.compose(f0, f1), CO.compose(g0, g1)),
                          compose_plus(tensor_plus(gamma(v, CO, f0, f1), gamma(v, CO, g0, g1)), tau));
  EXPECT_PLUS_EQ(lhs, rhs);
}

void commutator(Variant v, Rng& rng) {
  int a = width(rng), b = width(rng), c = width(rng), d = width(rng);
  Morphism p1 = rnd(a, b, rng), p2 = rnd(c, d, rng);
  auto lhs = compose_plus(mu(v, CO, p2, p1), box_permutation(v, CO, {p1, p2}, FinMap(2, {1, 0})));
  TwoCell C{CO.braiding(a, c), CO.braiding(b, d)};
  auto rhs = compose_plus(iso2(v, CO, C, CO.tensor(p1, p2)), mu(v, CO, p1, p2));
  EXPECT_PLUS_EQ(lhs, rhs);
}

}  // namespace

TEST(PlusRelations, Nc) {
  Rng rng(11);
  for (int i = 0; i < kSamples; ++i) {
    inner_equivariance(Variant::Nc, rng);
    outer_equivariance(Variant::Nc, rng);
    associativity(Variant::Nc, rng);
    interchange(Variant::Nc, rng);
    commutator(Variant::Nc, rng);
  }
}

TEST(PlusRelations, BoxStrongGcp) {
  Rng rng(12);
  for (Variant v : {Variant::Box, Variant::Strong, Variant::Gcp})
    for (int i = 0; i < kSamples / 5; ++i) {
      inner_equivariance(v, rng);
      outer_equivariance(v, rng);
      associativity(v, rng);
    }
  for (int i = 0; i < kSamples / 5; ++i) {
      interchange(Variant::Gcp, rng);
      commutator(Variant::Gcp, rng);
  }
}

TEST(Plus, MuOnlyWhereGenerated) {
  Morphism f = CO.identity(1);
  EXPECT_THROW(mu(Variant::Box, CO, f, f), DomainError);
  EXPECT_THROW(mu(Variant::Strong, CO, f, f), DomainError);
  EXPECT_EQ(mu(Variant::Nc, CO, f, f).degree(), 1);
  EXPECT_EQ(mu(Variant::Gcp, CO, f, f).degree(), 0);
}

TEST(Plus, SwapConjugateIsNotIdentity) {
  Morphism id2 = CO.identity(2), sw = CO.braiding(1, 1);
  for (Variant v : {Variant::Box, Variant::Nc, Variant::Strong, Variant::Gcp}) {
    auto g = iso2(v, CO, {sw, sw}, id2);
    EXPECT_EQ(g.target[0], Morphism(id2));
    EXPECT_FALSE(equals_plus(g, plus_identity(v, CO, {id2}))) << to_string(v);
  }
}

TEST(Plus, DegreeIsAdditive) {
  Rng rng(13);
  for (Variant v : {Variant::Nc, Variant::Strong, Variant::Gcp}) {
    for (int i = 0; i < 100; ++i) {
      int a = width(rng), b = width(rng), c = width(rng), d = width(rng);
      Morphism p0 = rnd(a, b, rng), p1 = rnd(b, c, rng), p2 = rnd(c, d, rng);
      auto h = tensor_plus(plus_identity(v, CO, {p2}), gamma(v, CO, p1, p0));
      auto g = gamma(v, CO, p2, CO.compose(p1, p0));
      EXPECT_EQ(compose_plus(g, h).degree(), g.degree() + h.degree());
      EXPECT_EQ(tensor_plus(g, h).degree(), g.degree() + h.degree());
    }
  }
}

TEST(Plus, EvaluationMatchesGluing) {
  Rng rng(14);
  for (Variant v : {Variant::Box, Variant::Nc, Variant::Strong, Variant::Gcp}) {
    for (int i = 0; i < 100; ++i) {
      auto g = random_plus(v, CO, 1 + static_cast<int>(rng() % 4), rng);
      auto a = evaluate(g);
      auto b = evaluate_by_gluing(g);
      ASSERT_EQ(a.size(), b.size());
      for (size_t j = 0; j < a.size(); ++j) {
        EXPECT_EQ(a[j], Morphism(b[j]));
        EXPECT_EQ(a[j], g.target[j]);
      }
    }
  }
}

TEST(Plus, FromFormulaEvaluatesLikeTheFormula) {
  Rng rng(15);
  for (int i = 0; i < 200; ++i) {
    auto f = random_valid_formula(CO, 1 + static_cast<int>(rng() % 5), rng);
    for (Variant v : {Variant::Nc, Variant::Strong}) {
      auto g = from_formula(v, f);
      EXPECT_EQ(evaluate(g)[0], f.value());
    }
  }
}

TEST(Plus, CanonicalFormIsIdempotent) {
  Rng rng(16);
  for (Variant v : {Variant::Box, Variant::Nc, Variant::Strong, Variant::Gcp, Variant::Hyp})
    for (int i = 0; i < 100; ++i) {
      auto g = canonical_form(random_plus(v, CO, 1 + static_cast<int>(rng() % 4), rng));
      EXPECT_EQ(canonical_form(g), g);
    }
}

TEST(Plus, NcTreesModuloInterchange) {
  // (a*b) o (c*d) with a over c and b over d: the interchange reading is the same morphism.
  Morphism x = CO.identity(1);
  auto lhs = compose_plus(gamma(Variant::Nc, CO, CO.tensor(x, x), CO.tensor(x, x)),
                          tensor_plus(mu(Variant::Nc, CO, x, x), mu(Variant::Nc, CO, x, x)));
  EXPECT_EQ(lhs.degree(), 3);
  EXPECT_EQ(canonical_form(lhs).trees.size(), 1u);
}

TEST(Plus, BoxRejectsTensorShapes) {
  Rng rng(17);
  ValidFormula f = populate(parse_formula("(_1 * _2)"), CO, {rnd(1, 1, rng), rnd(1, 1, rng)});
  EXPECT_THROW(from_formula(Variant::Box, f), DomainError);
  EXPECT_NO_THROW(from_formula(Variant::Nc, f));
}

TEST(Gcp, UnitCompatibility) {
  Rng rng(18);
  const Variant v = Variant::Gcp;
  for (int i = 0; i < 100; ++i) {
    int m = width(rng), n = width(rng);
    Morphism phi = rnd(m, n, rng);
    auto id_phi = plus_identity(v, CO, {phi});
    auto right = compose_plus(gamma(v, CO, phi, CO.identity(m)),
                              tensor_plus(id_phi, unit(v, CO, CO.identity(m))));
    EXPECT_PLUS_EQ(right, id_phi);
    auto left = compose_plus(gamma(v, CO, CO.identity(n), phi),
                             tensor_plus(unit(v, CO, CO.identity(n)), id_phi));
    EXPECT_PLUS_EQ(left, id_phi);
    Morphism s = random_iso(m, rng);
    auto twisted = compose_plus(gamma(v, CO, phi, s), tensor_plus(id_phi, unit(v, CO, s)));
    EXPECT_PLUS_EQ(twisted, iso2(v, CO, {CO.inverse(s), CO.identity(n)}, phi));
  }
}

TEST(Gcp, InsertedUnitsAreInvisible) {
  Rng rng(19);
  for (int i = 0; i < 200; ++i) {
    auto g = canonical_form(random_plus(Variant::Gcp, CO, 1 + static_cast<int>(rng() % 4), rng));
    // A level: the wires crossing a cut after a prefix of some topological order.
    const int n = static_cast<int>(g.cells.size());
    std::vector<bool> before(n, false);
    int placed = 0, cut = static_cast<int>(rng() % (n + 1));
    while (placed < cut) {
      std::vector<int> ready;
      for (int c = 0; c < n; ++c) {
        if (before[c]) continue;
        bool ok = true;
        for (const auto& p : g.feed_in[c]) ok = ok && (p.boundary || before[p.owner]);
        if (ok) ready.push_back(c);
      }
      before[ready[rng() % ready.size()]] = true;
      ++placed;
    }
    auto crosses = [&](const Port& p) { return p.boundary || before[p.owner]; };
    std::vector<Port> consumers;
    for (int c = 0; c < n; ++c)
      for (size_t p = 0; p < g.feed_in[c].size(); ++p)
        if (!before[c] && crosses(g.feed_in[c][p])) consumers.push_back(Port::cell(c, static_cast<int>(p)));
    for (size_t y = 0; y < g.feed_out[0].size(); ++y)
      if (crosses(g.feed_out[0][y])) consumers.push_back(Port::bnd(0, static_cast<int>(y)));
    auto h = insert_unit(g, consumers);
    EXPECT_EQ(h.cells.size(), g.cells.size() + 1);
    EXPECT_EQ(canonical_form(h), g);
  }
}

TEST(Gcp, HomSetsCanHaveSeveralElements) {
  Morphism x = CO.identity(1);
  // Side by side in either order, or stacked in either order on either wire while
  // a unit covers the other wire.
  EXPECT_EQ(enumerate_hom(Variant::Gcp, CO, {x, x}, {CO.identity(2)}).size(), 2u + 2u * 2u);
  EXPECT_EQ(enumerate_hom(Variant::Hyp, CO, {x, x}, {CO.identity(2)}).size(), 1u);
  EXPECT_EQ(enumerate_hom(Variant::Gcp, CO, {}, {x}).size(), 1u);
}

TEST(Hyp, IsoHomSetsAreSingletons) {
  std::vector<Morphism> isos;
  for (int n = 0; n <= 3; ++n)
    for (const auto& f : CO.hom(n, n, n))
      if (CO.is_iso(f)) isos.push_back(f);
  int checked = 0;
  for (const auto& s : isos)
    for (const auto& t : isos) {
      if (CO.src(s) + CO.src(t) > 3) continue;
      EXPECT_EQ(enumerate_hom(Variant::Hyp, CO, {s}, {t}).size(), 1u) << CO.print(s) << " -> " << CO.print(t);
      ++checked;
    }
  for (const auto& s1 : isos)
    for (const auto& s2 : isos) {
      if (CO.src(s1) + CO.src(s2) > 3) continue;
      EXPECT_EQ(enumerate_hom(Variant::Hyp, CO, {s1, s2}, {CO.identity(1)}).size(), 1u);
    }
  EXPECT_GT(checked, 10);
}

TEST(Hyp, CounitThenUnit) {
  Morphism s = CO.braiding(1, 1);
  auto g = compose_plus(unit(Variant::Hyp, CO, CO.identity(2)), counit(Variant::Hyp, CO, s));
  EXPECT_EQ(g.degree(), 0);
  EXPECT_PLUS_EQ(g, iso2(Variant::Hyp, CO, {CO.identity(2), CO.inverse(s)}, s));
}

TEST(Roof, RefinementGivesTheSameRoof) {
  Rng rng(20);
  for (int i = 0; i < 100; ++i) {
    Morphism a = make_cospan(1, 1, 1, FinMap(1, {0}), FinMap(1, {0}));
    Morphism b = rnd(width(rng), width(rng), rng);
    Morphism ab = CO.tensor(a, b);
    Roof coarse = strong_plus_morphism({ab}, plus_identity(Variant::Strong, CO, {ab}));
    Roof fine = strong_plus_morphism({a, b}, plus_identity(Variant::Strong, CO, {a, b}));
    EXPECT_EQ(coarse.refined, CO.decompose(ab).factors.size() > 1);
    EXPECT_TRUE(roof_equals(coarse, fine));
    EXPECT_EQ(coarse.split.size(), CO.decompose(ab).factors.size());
  }
}

TEST(Roof, ConnectedCompositeHasOneBasic) {
  Cospan f1 = make_cospan(2, 1, 1, FinMap(1, {0, 0}), FinMap(1, {0}));
  Cospan f0 = make_cospan(1, 2, 1, FinMap(1, {0}), FinMap(1, {0, 0}));
  auto g = gamma(Variant::Strong, CO, f1, f0);
  Roof r = strong_plus_morphism({f1, f0}, g);
  EXPECT_FALSE(r.refined);
  ASSERT_EQ(r.basics.size(), 1u);
  EXPECT_EQ(r.basics[0].value, Morphism(cospan_compose(f1, f0)));
}

TEST(Plus, ValidateRejectsBrokenWiring) {
  Morphism x = CO.identity(1);
  auto g = gamma(Variant::Nc, CO, x, x);
  auto bad = g;
  bad.feed_in[0][0] = Port::bnd(0, 0);
  bad.feed_in[1][0] = Port::bnd(0, 0);
  EXPECT_THROW(validate(bad), DomainError);
  bad = g;
  bad.feed_out[0][0] = Port::bnd(0, 0);
  EXPECT_THROW(validate(bad), DomainError);
}
