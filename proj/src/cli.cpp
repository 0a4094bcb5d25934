#include "ufckit/cli.hpp"

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <json.hpp>
#include <ostream>
#include <sstream>

#include "ufckit/bmgraph.hpp"
#include "ufckit/diagram.hpp"
#include "ufckit/formula.hpp"
#include "ufckit/instances.hpp"
#include "ufckit/plethysm.hpp"
#include "ufckit/plus.hpp"
#include "ufckit/ufc.hpp"

namespace ufckit {

namespace {

using json = nlohmann::ordered_json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Ctx {
  json j = json::object();
  std::ostringstream text;
  std::string dot;
  std::uint64_t seed = 1;
  bool seeded = false;

  Rng rng() {
    seeded = true;
    return Rng(seed);
  }
};

void need(const std::vector<std::string>& args, size_t n, const std::string& usage) {
  if (args.size() != n) throw UsageError("usage: " + usage);
}

int to_int(const std::string& s) {
  try {
    size_t pos = 0;
    int v = std::stoi(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw UsageError("expected an integer, got '" + s + "'");
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// 1-based copy for JSON; to_string already prints 1-based.
std::vector<int> plus_one(std::vector<int> v) {
  for (auto& x : v) ++x;
  return v;
}

// ---------------------------------------------------------------- base categories

void run_base(Ctx& c, const Instance& I, const std::string& op, const std::vector<std::string>& a) {
  c.j["instance"] = I.name();
  c.j["op"] = op;
  auto show = [&](const std::string& key, const Morphism& f) {
    c.j[key] = I.print(f);
    c.text << key << ": " << I.print(f) << "\n";
  };
  if (op == "identity") {
    need(a, 1, "identity N");
    show("result", I.identity(to_int(a[0])));
  } else if (op == "canon") {
    need(a, 1, "canon F");
    show("result", I.parse(a[0]));
  } else if (op == "compose") {
    need(a, 2, "compose G F   (prints G ∘ F)");
    show("result", I.compose(I.parse(a[0]), I.parse(a[1])));
  } else if (op == "tensor") {
    need(a, 2, "tensor F G");
    show("result", I.tensor(I.parse(a[0]), I.parse(a[1])));
  } else if (op == "inverse") {
    need(a, 1, "inverse F");
    show("result", I.inverse(I.parse(a[0])));
  } else if (op == "perm") {
    need(a, 1, "perm \"i1 i2 ...\"   (1-based images)");
    auto img = parse_list(a[0]);
    show("result", I.permutation(FinMap(static_cast<int>(img.size()), img)));
  } else if (op == "decompose") {
    need(a, 1, "decompose F");
    Decomposition d = I.decompose(I.parse(a[0]));
    show("left_iso", d.left_iso);
    c.j["factors"] = json::array();
    for (const auto& f : d.factors) {
      c.j["factors"].push_back(I.print(f));
      c.text << "factor: " << I.print(f) << "\n";
    }
    show("right_iso", d.right_iso);
  } else if (op == "degree") {
    need(a, 1, "degree F");
    DegreeData d = degree_data(I, I.parse(a[0]));
    c.j["src"] = d.src;
    c.j["tgt"] = d.tgt;
    c.j["degree"] = d.degree;
    c.j["depth"] = d.depth;
    c.text << "src " << d.src << " tgt " << d.tgt << " degree " << d.degree << " depth " << d.depth << "\n";
  } else if (op == "idx") {
    need(a, 1, "idx F");
    Cospan x = idx(I, I.parse(a[0]));
    c.j["result"] = get_instance("cospan").print(x);
    c.text << "result: " << get_instance("cospan").print(x) << "\n";
  } else if (op == "random") {
    need(a, 2, "random M N");
    Rng rng = c.rng();
    show("result", I.random(to_int(a[0]), to_int(a[1]), rng));
  } else {
    throw UsageError("unknown " + I.name() + " operation '" + op + "'");
  }
}

// ---------------------------------------------------------------- ufc

void run_ufc(Ctx& c, const std::string& op, const std::vector<std::string>& a, int bound, std::uint64_t trials) {
  if (a.empty()) throw UsageError("usage: ufc " + op + " INSTANCE ...");
  const Instance& I = get_instance(a[0]);
  c.j["instance"] = I.name();
  if (op == "hereditary") {
    need(a, 1, "ufc hereditary INSTANCE [--bound B] [--trials T]");
    HereditaryVerdict v = check_hereditary(I, bound, trials, c.seed);
    if (v.sampled) c.seeded = true;
    c.j["bound"] = bound;
    c.j["hereditary"] = v.hereditary;
    c.j["pairs_checked"] = v.pairs_checked;
    c.j["sampled"] = v.sampled;
    c.text << I.name() << ": " << (v.hereditary ? "hereditary" : "NOT hereditary") << " (bound " << bound << ", "
           << v.pairs_checked << " pairs" << (v.sampled ? ", sampled" : ", exhaustive") << ")\n";
    if (v.counterexample) {
      const auto& w = *v.counterexample;
      c.j["witness"] = {{"phi0", I.print(w.phi0)},
                        {"phi1", I.print(w.phi1)},
                        {"component", I.print(w.component)},
                        {"component_depth", w.component_depth}};
      c.text << "witness phi0: " << I.print(w.phi0) << "\n"
             << "witness phi1: " << I.print(w.phi1) << "\n"
             << "component: " << I.print(w.component) << " (depth " << w.component_depth << ")\n";
    }
  } else if (op == "components") {
    if (a.size() < 2) throw UsageError("usage: ufc components INSTANCE F1 F2 ...   (F1 applied first)");
    std::vector<Morphism> seq;
    for (size_t i = 1; i < a.size(); ++i) seq.push_back(I.parse(a[i]));
    ComponentReport r = connected_components(I, seq);
    c.j["components"] = json::array();
    c.text << r.u_count << " connected components\n";
    for (int u = 0; u < r.u_count; ++u) {
      DegreeData d = degree_data(I, r.component_morphisms[u]);
      c.j["components"].push_back({{"morphism", I.print(r.component_morphisms[u])}, {"depth", d.depth}});
      c.text << "component " << u + 1 << ": " << I.print(r.component_morphisms[u]) << " (depth " << d.depth << ")\n";
    }
  } else if (op == "idx") {
    need(a, 2, "ufc idx INSTANCE F");
    c.j["result"] = get_instance("cospan").print(idx(I, I.parse(a[1])));
    c.text << "result: " << c.j["result"].get<std::string>() << "\n";
  } else {
    throw UsageError("unknown ufc operation '" + op + "'");
  }
}

// ---------------------------------------------------------------- formula and diagram

Node single_tree(const std::string& text) {
  PreFormula f = reduce(parse_formula(text));
  if (f.trees.size() != 1) throw DomainError("expected a single expression without ⊠: " + text);
  return f.trees[0];
}

void print_enumerations(Ctx& c, const std::vector<std::vector<int>>& e) {
  c.j["count"] = e.size();
  c.j["enumerations"] = json::array();
  c.text << e.size() << " compatible enumeration" << (e.size() == 1 ? "" : "s") << "\n";
  for (auto seq : e) {
    c.j["enumerations"].push_back(plus_one(seq));
    c.text << to_string(seq) << "\n";
  }
}

void run_formula(Ctx& c, const std::string& op, const std::vector<std::string>& a) {
  c.j["op"] = op;
  if (op == "random") {
    need(a, 1, "formula random ARITY");
    Rng rng = c.rng();
    Node n = random_formula(to_int(a[0]), rng);
    c.j["result"] = print(n);
    c.text << print(n) << "\n";
    return;
  }
  need(a, 1, "formula " + op + " FORMULA");
  PreFormula f = parse_formula(a[0]);
  if (op == "parse" || op == "reduce") {
    PreFormula g = op == "reduce" ? reduce(f) : f;
    c.j["result"] = print(g);
    c.j["arity"] = g.arity();
    c.text << print(g) << "\n";
  } else if (op == "traversal") {
    auto t = traversal(f);
    c.j["result"] = plus_one(t);
    c.text << to_string(t) << "\n";
  } else if (op == "enumerate") {
    Node n = single_tree(a[0]);
    print_enumerations(c, compatible_enumerations(n, generic_shapes(n)));
  } else if (op == "standard") {
    Node n = single_tree(a[0]);
    StandardForm s = standard_form(n, generic_shapes(n));
    c.j["result"] = print(s.formula);
    c.text << print(s.formula) << "\n";
  } else if (op == "flowchart") {
    Flowchart fc = to_flowchart(reduce(f));
    c.j["white"] = fc.count(Flowchart::White);
    c.j["black"] = fc.count(Flowchart::Black);
    c.j["leaves"] = fc.count(Flowchart::Leaf);
    c.j["round_trip"] = print(from_flowchart(fc));
    c.text << "white " << fc.count(Flowchart::White) << " black " << fc.count(Flowchart::Black) << " leaves "
           << fc.count(Flowchart::Leaf) << "\nround trip: " << print(from_flowchart(fc)) << "\n";
  } else {
    throw UsageError("unknown formula operation '" + op + "'");
  }
}

void run_diagram(Ctx& c, const std::string& op, const std::vector<std::string>& a) {
  need(a, 1, "diagram " + op + " FORMULA|pinwheel");
  CompositionGraph g = a[0] == "pinwheel" ? layout_graph(pinwheel()) : box_to_composition_graph(formula_to_box(single_tree(a[0])));
  c.j["op"] = op;
  c.dot = to_dot(g);
  if (op == "graph") {
    c.j["whites"] = g.whites.size();
    c.j["blacks"] = g.blacks.size();
    c.j["literal"] = to_literal(g);
    c.text << to_literal(g) << "\n";
  } else if (op == "decompose") {
    Decomposability d = is_decomposable(g);
    c.j["decomposable"] = d.decomposable;
    c.j["trace"] = d.trace;
    c.text << (d.decomposable ? "decomposable" : "NOT decomposable") << "\n";
    for (const auto& t : d.trace) c.text << "  " << t << "\n";
    if (d.decomposable) {
      c.j["formula"] = print(graph_to_formula(g));
      c.text << "formula: " << print(graph_to_formula(g)) << "\n";
    }
  } else if (op == "dot") {
    c.j["dot"] = c.dot;
    c.text << c.dot;
  } else if (op == "enumerate") {
    print_enumerations(c, graph_enumerations(g));
  } else if (op == "suspension") {
    SuspensionGraph s = suspension(g);
    c.dot = to_dot(s);
    c.j["segments"] = s.segments;
    c.text << s.segments << " horizontal segments\n";
  } else {
    throw UsageError("unknown diagram operation '" + op + "'");
  }
}

// ---------------------------------------------------------------- plus

PlusMorphism plus_from_args(Variant v, const Instance& I, const std::vector<std::string>& a, size_t from) {
  if (a.size() <= from) throw UsageError("usage: plus ... FORMULA PHI1 PHI2 ...");
  std::vector<Morphism> phis;
  for (size_t i = from + 1; i < a.size(); ++i) phis.push_back(I.parse(a[i]));
  return from_formula(v, populate(parse_formula(a[from]), I, phis));
}

void describe_plus(Ctx& c, const PlusMorphism& g) {
  const Instance& I = *g.instance;
  PlusMorphism canon = canonical_form(g);
  c.j["variant"] = to_string(g.variant);
  c.j["degree"] = canon.degree();
  c.j["canonical"] = print(canon);
  c.j["values"] = json::array();
  for (const auto& v : evaluate(canon)) c.j["values"].push_back(I.print(v));
  c.text << "degree " << canon.degree() << "\n" << print(canon);
  for (const auto& v : evaluate(canon)) c.text << "value: " << I.print(v) << "\n";
}

void run_plus(Ctx& c, const std::string& op, const std::vector<std::string>& a, Variant v, const Instance& I,
              int arity) {
  c.j["op"] = op;
  c.j["instance"] = I.name();
  if (op == "formula") {
    describe_plus(c, plus_from_args(v, I, a, 0));
  } else if (op == "gamma" || op == "mu") {
    need(a, 2, "plus " + op + " PHI1 PHI0");
    Morphism p = I.parse(a[0]), q = I.parse(a[1]);
    describe_plus(c, op == "gamma" ? gamma(v, I, p, q) : mu(v, I, p, q));
  } else if (op == "eq") {
    if (a.size() < 2) throw UsageError("usage: plus eq FORMULA1 FORMULA2 PHI1 PHI2 ...");
    std::vector<std::string> left = {a[0]}, right = {a[1]};
    left.insert(left.end(), a.begin() + 2, a.end());
    right.insert(right.end(), a.begin() + 2, a.end());
    bool eq = equals_plus(plus_from_args(v, I, left, 0), plus_from_args(v, I, right, 0));
    c.j["equal"] = eq;
    c.text << (eq ? "equal" : "NOT equal") << "\n";
  } else if (op == "random") {
    need(a, 0, "plus random [--arity N]");
    Rng rng = c.rng();
    describe_plus(c, random_plus(v, I, arity, rng));
  } else {
    throw UsageError("unknown plus operation '" + op + "'");
  }
}

// ---------------------------------------------------------------- graphs

void describe_graph(Ctx& c, const Graph& g) {
  c.j["vertices"] = g.nv;
  c.j["flags"] = g.nflags();
  c.j["edges"] = g.edges().size();
  c.j["tails"] = g.tails().size();
  c.j["connected"] = is_connected(g);
  c.text << g.nv << " vertices, " << g.nflags() << " flags, " << g.edges().size() << " edges, " << g.tails().size()
         << " tails" << (is_connected(g) ? ", connected" : "") << "\n";
  if (g.nflags() <= 8 && g.nv <= 6) {
    c.j["automorphisms"] = automorphisms(g).size();
    c.text << automorphisms(g).size() << " automorphisms\n";
  }
  c.dot = to_dot(g);
}

void run_graph(Ctx& c, const std::string& op, const std::vector<std::string>& a, Variant v, const Instance& I,
               int flags, int trials, bool directed) {
  c.j["op"] = op;
  if (op == "show") {
    need(a, 1, "graph show FILE");
    Graph g = read_graph(read_file(a[0]));
    describe_graph(c, g);
  } else if (op == "loop") {
    describe_graph(c, loop_graph());
  } else if (op == "random") {
    need(a, 0, "graph random [--flags F] [--directed]");
    Rng rng = c.rng();
    Graph g = random_graph(flags, 4, rng, directed);
    c.j["graph"] = write_graph(g);
    c.text << write_graph(g);
    c.dot = to_dot(g);
  } else if (op == "compose") {
    need(a, 0, "graph compose [--trials T] [--flags F]");
    Rng rng = c.rng();
    int ok = 0;
    for (int t = 0; t < trials; ++t) {
      Graph g = random_graph(flags, 4, rng, directed);
      GraphMorphism phi = random_morphism(g, rng), psi = random_morphism(phi.target, rng);
      GraphMorphism comp = compose_graph_morphisms(psi, phi);
      validate(comp);
      std::set<std::pair<int, int>> expect;
      for (auto e : ghost_edges(phi)) expect.insert(e);
      for (auto [x, y] : ghost_edges(psi)) expect.insert({std::min(phi.fmap[x], phi.fmap[y]), std::max(phi.fmap[x], phi.fmap[y])});
      auto got = ghost_edges(comp);
      if (std::set<std::pair<int, int>>(got.begin(), got.end()) == expect) ++ok;
    }
    c.j["trials"] = trials;
    c.j["agree"] = ok;
    c.text << ok << "/" << trials << " composites have ghost edges = ghost(φ) ∪ φ(ghost(ψ))\n";
  } else if (op == "convert") {
    GraphicalMorphism m = convert_plus_to_colored(plus_from_args(v, I, a, 0));
    auto values = evaluate_graphical(m);
    c.j["source"] = write_graph(m.map.source);
    c.j["target"] = write_graph(m.map.target);
    c.j["ghost_edges"] = ghost_edges(m.map).size();
    c.j["target_decorations"] = json::array();
    bool agree = values == m.target_deco;
    for (const auto& d : m.target_deco) c.j["target_decorations"].push_back(I.print(d));
    c.j["graphical_evaluation_agrees"] = agree;
    c.text << "source aggregate:\n" << write_graph(m.map.source) << "target aggregate:\n" << write_graph(m.map.target)
           << ghost_edges(m.map).size() << " ghost edges\n";
    for (size_t k = 0; k < m.target_deco.size(); ++k)
      c.text << "target vertex " << k + 1 << ": " << I.print(m.target_deco[k]) << "\n";
    c.text << "graphical evaluation " << (agree ? "agrees" : "DISAGREES") << "\n";
    c.dot = to_dot(m.map);
  } else {
    throw UsageError("unknown graph operation '" + op + "'");
  }
}

// ---------------------------------------------------------------- plethysm

void report(Ctx& c, const std::string& key, const Report& r) {
  c.j[key] = {{"ok", r.ok}, {"checked", r.checked}, {"witness", r.witness}};
  c.text << key << ": " << (r.ok ? "ok" : "FAIL") << " (" << r.checked << " checks)";
  if (!r.ok) c.text << " " << r.witness;
  c.text << "\n";
}

void run_plethysm(Ctx& c, const std::string& op, const std::vector<std::string>& a) {
  c.j["op"] = op;
  if (a.empty()) throw UsageError("usage: plethysm " + op + " TABLE [BASE]");
  FiniteCategory C = load_category(a[0]);
  c.j["arrows"] = C.narrows();
  if (op == "tensor") {
    need(a, 1, "plethysm tensor TABLE");
    BimoduleMonoid m = hom_bimodule(C);
    TensorProduct T = relative_tensor(m.rho, m.rho, m.G);
    c.j["isomorphisms"] = m.G.narrows();
    c.j["classes"] = T.result.size();
    c.text << C.narrows() << " arrows, " << m.G.narrows() << " isomorphisms\nHom ⊗ Hom: " << T.result.size()
           << " classes\n";
    for (const auto& n : T.result.names) c.text << "  " << n << "\n";
  } else if (op == "unit") {
    need(a, 1, "plethysm unit TABLE");
    BimoduleMonoid m = hom_bimodule(C);
    report(c, "monoid", check_monoid(m));
    report(c, "unit", check_unit(m, unit_pointing(m)));
    report(c, "unit_laws", check_unit_laws(m.rho, m.G));
  } else if (op == "indexing") {
    if (a.size() > 2) throw UsageError("usage: plethysm indexing TABLE [BASE]");
    FiniteCategory base = a.size() == 2 ? load_category(a[1]) : C;
    BimoduleMonoid m = a.size() == 2 ? enriched_bimodule(C, base) : hom_bimodule(C);
    std::vector<int> b(C.narrows());
    if (a.size() == 2)
      b = base_projection(C, base);
    else
      for (int f = 0; f < C.narrows(); ++f) b[f] = f;
    IndexingData d = indexing_from_bimodule(m, base, b);
    category_from_indexing(m, base, d, b);
    c.j["checked"] = d.checked;
    c.j["fibers"] = json::object();
    c.text << "indexing data verified (" << d.checked << " checks); category rebuilt from fibers\n";
    for (int phi = 0; phi < base.narrows(); ++phi) {
      std::vector<std::string> names;
      for (int e : d.fiber[phi]) names.push_back(C.names[e]);
      c.j["fibers"][base.names[phi]] = names;
      c.text << "D(" << base.names[phi] << ") =";
      for (const auto& n : names) c.text << " " << n;
      c.text << "\n";
    }
  } else {
    throw UsageError("unknown plethysm operation '" + op + "'");
  }
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"ufckit: unique factorization categories, plus constructions, graphs and plethysm"};
  app.require_subcommand(1);
  app.fallthrough();
  bool as_json = false, as_dot = false;
  std::uint64_t seed = 1;
  app.add_flag("--json", as_json, "machine-readable output");
  app.add_flag("--dot", as_dot, "Graphviz output where available");
  app.add_option("--seed", seed, "random seed (UFCKIT_SEED overrides)");

  std::string op;
  std::vector<std::string> args;
  int bound = 3, arity = 3, flags = 8, trials = 500;
  std::uint64_t budget = 200000;
  bool surj = false, directed = false;
  std::string variant = "strong", instance = "cospan";

  std::map<std::string, CLI::App*> subs;
  auto add = [&](const std::string& name, const std::string& help) {
    CLI::App* s = app.add_subcommand(name, help);
    s->add_option("op", op, "operation")->required();
    s->add_option("args", args, "operands");
    subs[name] = s;
    return s;
  };
  for (std::string inst : {"cospan", "span", "ties", "finset"})
    add(inst, inst + " morphisms: identity|canon|compose|tensor|inverse|perm|decompose|degree|idx|random");
  subs["span"]->add_flag("--surj", surj, "use spans with surjective legs");
  auto* ufc = add("ufc", "hereditary|components|idx");
  ufc->add_option("--bound", bound, "object size bound");
  ufc->add_option("--trials", budget, "sampling budget when the enumeration is larger");
  add("formula", "parse|reduce|traversal|enumerate|standard|flowchart|random");
  add("diagram", "graph|dot|decompose|enumerate|suspension");
  for (std::string name : {"plus", "graph"}) {
    CLI::App* s = add(name, name == "plus" ? "formula|gamma|mu|eq|random" : "show|loop|random|compose|convert");
    s->add_option("--variant", variant, "box|nc|strong|gcp|hyp");
    s->add_option("--instance", instance, "base instance");
    s->add_option("--arity", arity, "arity for random morphisms");
    s->add_option("--flags", flags, "flag bound for random graphs");
    s->add_option("--trials", trials, "number of random trials");
    s->add_flag("--directed", directed, "directed random graphs");
  }
  add("plethysm", "tensor|unit|indexing");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }
  Ctx c;
  c.seed = seed;
  if (const char* env = std::getenv("UFCKIT_SEED")) {
    try {
      c.seed = std::stoull(env);
    } catch (const std::exception&) {
      err << "error: UFCKIT_SEED must be an unsigned integer\n";
      return 2;
    }
  }
  std::string which = app.get_subcommands().front()->get_name();
  try {
    if (which == "cospan" || which == "span" || which == "ties" || which == "finset")
      run_base(c, get_instance(which == "span" && surj ? "span_surj" : which), op, args);
    else if (which == "ufc")
      run_ufc(c, op, args, bound, budget);
    else if (which == "formula")
      run_formula(c, op, args);
    else if (which == "diagram")
      run_diagram(c, op, args);
    else if (which == "plus" || which == "graph") {
      Variant v;
      const Instance* I;
      try {
        v = parse_variant(variant);
        I = &get_instance(instance);
      } catch (const DomainError& e) {
        throw UsageError(e.what());
      }
      if (which == "plus")
        run_plus(c, op, args, v, *I, arity);
      else
        run_graph(c, op, args, v, *I, flags, trials, directed);
    } else if (which == "plethysm")
      run_plethysm(c, op, args);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  if (as_dot) {
    if (c.dot.empty()) {
      err << "error: no DOT output for " << which << " " << op << "\n";
      return 2;
    }
    out << c.dot;
    return 0;
  }
  if (c.seeded) c.j["seed"] = c.seed;
  if (as_json) {
    out << c.j.dump(2) << "\n";
  } else {
    if (c.seeded) out << "seed: " << c.seed << "\n";
    out << c.text.str();
  }
  return 0;
}

}  // namespace ufckit
