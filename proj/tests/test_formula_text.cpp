#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <functional>

#include "hglc/embed.hpp"
#include "hglc/formula.hpp"
#include "hglc/text.hpp"

using namespace hglc;

namespace {

FormulaPtr prim(const std::string& name, int rank) {
  return Formula::primitive(name, rank);
}

error::code thrown_code(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const error& e) {
    return e.kind();
  }
  FAIL("expected an hglc::error");
  return error::code::invalid;
}

Signature case2_sig() {
  Signature s;
  s.modes = {"x", "c"};
  s.modalities = {"j"};
  s.commutative = {"c"};
  return s;
}

bool contains_formula(const std::vector<FormulaPtr>& fs, const FormulaPtr& f) {
  return std::any_of(fs.begin(), fs.end(),
                     [&](const FormulaPtr& g) { return same_formula(g, f); });
}

}  // namespace

TEST_CASE("formula constructors, ranks and accessors") {
  FormulaPtr p = prim("p", 1);
  CHECK(p->kind() == FormulaKind::primitive);
  CHECK(p->rank() == 1);
  CHECK(p->name() == "p");
  CHECK(same_formula(p, prim("p", 1)));
  CHECK_FALSE(same_formula(p, prim("p", 2)));
  CHECK_FALSE(same_formula(p, prim("q", 1)));

  FormulaPtr h2 = Formula::hole(2);
  CHECK(h2->kind() == FormulaKind::hole);
  CHECK(h2->rank() == 2);
  CHECK_FALSE(same_formula(h2, Formula::hole(1)));

  FormulaPtr x = Formula::product(string_graph({prim("a", 2), prim("b", 2)}));
  CHECK(x->kind() == FormulaKind::product);
  CHECK(x->rank() == 2);  // rank of the body
  CHECK(x->body().edge_count() == 2);

  Hypergraph denom = shared_branch("c", prim("q", 1), Formula::hole(1));
  FormulaPtr d = Formula::division(p, denom);
  CHECK(d->kind() == FormulaKind::division);
  CHECK(d->rank() == 1);  // rank of the hole edge
  CHECK(same_formula(d->numerator(), p));
  CHECK(label_is_hole(denom.edges()[d->hole_edge()].label));

  CHECK(thrown_code([] { prim("", 1); }) == error::code::invalid);
  CHECK(thrown_code([] { prim("p", -1); }) == error::code::invalid);
  CHECK(thrown_code([] { Formula::hole(-2); }) == error::code::invalid);
  // accessor misuse
  CHECK(thrown_code([&] { x->name(); }) == error::code::invalid);
  CHECK(thrown_code([&] { p->body(); }) == error::code::invalid);
  CHECK(thrown_code([&] { x->numerator(); }) == error::code::invalid);
  CHECK(thrown_code([&] { p->hole_edge(); }) == error::code::invalid);
}

TEST_CASE("product and division validation") {
  // no holes inside a product body
  CHECK(thrown_code([] {
          Formula::product(handle(Formula::hole(1)));
        }) == error::code::invalid);
  // exactly one hole edge in a denominator
  CHECK(thrown_code([] {
          Formula::division(prim("p", 1), handle(prim("q", 1)));
        }) == error::code::invalid);
  CHECK(thrown_code([] {
          Formula::division(
              prim("p", 1),
              shared_branch("c", Formula::hole(1), Formula::hole(1)));
        }) == error::code::invalid);
  // rk(numerator) must equal rk(denominator)
  CHECK(thrown_code([] {
          Formula::division(prim("p", 2),
                            shared_branch("c", prim("q", 1), Formula::hole(1)));
        }) == error::code::rank_mismatch);
  // holes cannot be numerators
  CHECK(thrown_code([] {
          Formula::division(Formula::hole(1),
                            shared_branch("c", prim("q", 1), Formula::hole(1)));
        }) == error::code::invalid);
  // one rank per primitive name across numerator and denominator
  CHECK(thrown_code([] {
          Formula::division(prim("p", 1),
                            shared_branch("c", prim("p", 2), Formula::hole(1)));
        }) == error::code::rank_mismatch);
}

TEST_CASE("formula identity is structural, bodies up to isomorphism") {
  // the same shared branch built with the slots given in either order
  Hypergraph b1 = shared_branch("c", prim("p", 1), prim("q", 1));
  Hypergraph b2 = shared_branch("c", prim("q", 1), prim("p", 1));
  CHECK(isomorphic(b1, b2));
  CHECK(same_formula(Formula::product(b1), Formula::product(b2)));

  // tree branches are ordered, so the products differ
  Hypergraph t1 = tree_branch("x", prim("p", 1), prim("q", 1));
  Hypergraph t2 = tree_branch("x", prim("q", 1), prim("p", 1));
  CHECK_FALSE(same_formula(Formula::product(t1), Formula::product(t2)));

  // a node-renamed copy of a division denominator gives the same formula
  Hypergraph denom = tree_branch("x", Formula::hole(1), prim("q", 1));
  std::vector<Edge> edges;
  for (const Edge& e : denom.edges()) {
    Edge ne;
    ne.label = e.label;
    for (int v : e.att) ne.att.push_back(denom.node_count() - 1 - v);
    edges.push_back(std::move(ne));
  }
  std::reverse(edges.begin(), edges.end());
  std::vector<int> ext;
  for (int v : denom.ext()) ext.push_back(denom.node_count() - 1 - v);
  Hypergraph renamed(denom.node_count(), std::move(edges), std::move(ext));
  CHECK(same_formula(Formula::division(prim("p", 1), denom),
                     Formula::division(prim("p", 1), renamed)));
}

TEST_CASE("subformulas, head and skeleton freeness") {
  Signature sig = case2_sig();
  FormulaPtr p = atom_label("p", sig);
  FormulaPtr q = atom_label("q", sig);
  // mu(q *c (p /c q)) under the commutative translation
  NLMFormulaPtr t = NLMFormula::prod(
      "c", NLMFormula::atom("q"),
      NLMFormula::over("c", NLMFormula::atom("p"), NLMFormula::atom("q")));
  FormulaPtr img = mu(t, sig);

  std::vector<FormulaPtr> subs = subformulas(img);
  CHECK(contains_formula(subs, img));
  CHECK(contains_formula(subs, p));
  CHECK(contains_formula(subs, q));
  CHECK(contains_formula(subs, mode_label("c", sig)));
  // holes are not subformulas
  for (const FormulaPtr& s : subs) CHECK(s->kind() != FormulaKind::hole);

  // head(div(N, D)) = head(N); head(x(M)) = union over the labels
  CHECK(head(p).size() == 1);
  CHECK(same_formula(head(p)[0], p));
  FormulaPtr dv = Formula::division(
      p, shared_branch("c", q, Formula::hole(1)));
  CHECK(head(dv).size() == 1);
  CHECK(same_formula(head(dv)[0], p));
  std::vector<FormulaPtr> hx = head(img);
  CHECK(contains_formula(hx, q));
  CHECK(contains_formula(hx, p));
  CHECK(contains_formula(hx, mode_label("c", sig)));

  CHECK(is_skeleton_free(img));
  // a product over an edge-free graph is a skeleton
  FormulaPtr skel = Formula::product(Hypergraph(1, {}, {0, 0}));
  CHECK_FALSE(is_skeleton_free(skel));
  CHECK_FALSE(is_skeleton_free(
      Formula::division(skel, handle(Formula::hole(2)))));
}

TEST_CASE("parse_formula and format_formula round-trip") {
  CHECK(same_formula(parse_formula("p"), prim("p", 1)));
  CHECK(same_formula(parse_formula("p:3"), prim("p", 3)));
  CHECK(same_formula(parse_formula("$"), Formula::hole(1)));
  CHECK(same_formula(parse_formula("$:2"), Formula::hole(2)));
  // namespaced primitive names keep their segments
  CHECK(same_formula(parse_formula("mode:c:2"), prim("mode:c", 2)));
  CHECK(same_formula(parse_formula("mode:c"), prim("mode:c", 1)));
  // 'x' and 'div' are only keywords before '('
  CHECK(same_formula(parse_formula("x"), prim("x", 1)));
  CHECK(same_formula(parse_formula("div"), prim("div", 1)));

  std::vector<std::string> samples = {
      "p:1",
      "x(sg(p:2, q:2))",
      "div(p:1, K[c](q:1, $:1))",
      "div(x(K[c](p:1, q:1)), R[x]($:1, q:1))",
      "div(p:2, RbO(q:2, $:2))",
  };
  for (const std::string& s : samples) {
    CAPTURE(s);
    FormulaPtr f = parse_formula(s);
    std::string printed = format_formula(f);
    CHECK(same_formula(parse_formula(printed), f));
    // printing is a fixed point
    CHECK(format_formula(parse_formula(printed)) == printed);
  }

  CHECK(thrown_code([] { parse_formula(""); }) == error::code::parse);
  CHECK(thrown_code([] { parse_formula("p:"); }) == error::code::parse);
  CHECK(thrown_code([] { parse_formula("div(p)"); }) == error::code::parse);
  CHECK(thrown_code([] { parse_formula("x(sg(p:2)"); }) == error::code::parse);
  CHECK(thrown_code([] { parse_formula("p q"); }) == error::code::parse);
  CHECK(thrown_code([] { parse_formula("p:100000000"); }) ==
        error::code::parse);
}

TEST_CASE("parse_graph constructor forms") {
  CHECK(isomorphic(parse_graph("handle(p)"), handle(prim("p", 1))));
  CHECK(isomorphic(parse_graph("handle(p:3)"), handle(prim("p", 3))));
  // bare slot labels take the slot rank
  CHECK(isomorphic(parse_graph("sg(p, q)"),
                   string_graph({prim("p", 2), prim("q", 2)})));
  CHECK(isomorphic(parse_graph("sg()"), string_graph({})));
  CHECK(isomorphic(parse_graph("R[x](p, q)"),
                   tree_branch("x", prim("p", 1), prim("q", 1))));
  CHECK(isomorphic(parse_graph("K[c](p, $)"),
                   shared_branch("c", prim("p", 1), Formula::hole(1))));
  CHECK(isomorphic(parse_graph("U[j](p)"),
                   unary_branch("j", prim("p", 1))));
  CHECK(isomorphic(parse_graph("KO(p, q)"),
                   hub_branch("O", prim("p", 1), prim("q", 1))));
  CHECK(isomorphic(parse_graph("KO[w](p, q)"),
                   hub_branch("w", prim("p", 1), prim("q", 1))));
  CHECK(isomorphic(parse_graph("Rb[x](p, q)"),
                   wide_branch("x", prim("p", 2), prim("q", 2))));
  CHECK(isomorphic(parse_graph("Kb[c](p, q)"),
                   parallel_branch("c", prim("p", 2), prim("q", 2))));
  CHECK(isomorphic(parse_graph("Ub[j](p)"),
                   unary_wide_branch("j", prim("p", 2))));
  CHECK(isomorphic(parse_graph("RbO(p, $)"),
                   series_pair("O", prim("p", 2), Formula::hole(2))));

  // explicit rank that does not fit the slot fails at construction
  CHECK_THROWS_AS(parse_graph("sg(p:1, q)"), error);
  CHECK(thrown_code([] { parse_graph("sg(p, $:1)"); }) == error::code::parse);
  CHECK(thrown_code([] { parse_graph("blob(p)"); }) == error::code::parse);
  CHECK(thrown_code([] { parse_graph("R[x](p)"); }) == error::code::parse);
  CHECK(thrown_code([] { parse_graph("R[](p, q)"); }) == error::code::parse);
}

TEST_CASE("parse_graph accepts inline JSON and round-trips it") {
  Hypergraph g = tree_branch("x", prim("p", 1), prim("q", 1));
  CHECK(isomorphic(parse_graph(to_json(g)), g));
  Hypergraph sg2 = string_graph({prim("p", 2), prim("q", 2)});
  CHECK(isomorphic(parse_graph(to_json(sg2)), sg2));
  CHECK(thrown_code([] { parse_graph("{\"nodes\":"); }) == error::code::parse);
}

TEST_CASE("graph pretty-printing picks constructor syntax when it fits") {
  auto graph_text = [](const Hypergraph& g) {
    // format_hl_sequent prints "<graph> -> <formula>"
    std::string s =
        format_hl_sequent(HLSequent(g, prim("z", g.rank())));
    return s.substr(0, s.rfind(" -> "));
  };
  CHECK(graph_text(handle(prim("p", 1))) == "handle(p:1)");
  CHECK(graph_text(string_graph({prim("p", 2), prim("q", 2)})) ==
        "sg(p:2, q:2)");
  CHECK(graph_text(tree_branch("x", prim("p", 1), prim("q", 1))) ==
        "R[x](p:1, q:1)");
  CHECK(graph_text(hub_branch("O", prim("p", 1), prim("q", 1))) ==
        "KO(p:1, q:1)");
  CHECK(graph_text(series_pair("O2", prim("p", 2), prim("q", 2))) ==
        "RbO[O2](p:2, q:2)");
  // an arbitrary graph falls back to JSON
  Hypergraph odd(2, {{prim("a", 1), {0}}, {prim("b", 1), {0}}}, {1});
  std::string s = graph_text(odd);
  CHECK(s.front() == '{');
  CHECK(isomorphic(parse_graph(s), odd));
}

TEST_CASE("HL sequent text and JSON round-trips") {
  std::vector<std::string> samples = {
      "handle(p) -> p",
      "sg(p, q) -> x(sg(p, q))",
      "K[c](q, div(p, K[c](q, $))) -> p:1",
      "RbO(p, q) -> x(RbO(p, q))",
  };
  for (const std::string& s : samples) {
    CAPTURE(s);
    HLSequent seq = parse_hl_sequent(s);
    HLSequent back = parse_hl_sequent(format_hl_sequent(seq));
    CHECK(isomorphic(back.antecedent, seq.antecedent));
    CHECK(same_formula(back.succedent, seq.succedent));
    HLSequent jback = hl_sequent_from_json(hl_sequent_to_json(seq));
    CHECK(isomorphic(jback.antecedent, seq.antecedent));
    CHECK(same_formula(jback.succedent, seq.succedent));
  }
  // rank law of sequents is enforced at construction
  CHECK_THROWS_AS(parse_hl_sequent("sg(p, q) -> p:1"), error);
  CHECK(thrown_code([] { parse_hl_sequent("handle(p) p"); }) ==
        error::code::parse);
  CHECK(thrown_code([] { hl_sequent_from_json("{\"antecedent\":3}"); }) ==
        error::code::parse);
  // holes are not allowed as antecedent labels
  CHECK_THROWS_AS(parse_hl_sequent("K[c](p, $) -> p"), error);
}

TEST_CASE("NL<> formula and database parsing") {
  Signature sig = case2_sig();
  CHECK(parse_nlm_formula("p", sig)->kind() == NLMKind::atom);
  NLMFormulaPtr f = parse_nlm_formula("(p *x q) \\c <>j p", sig);
  CHECK(f->kind() == NLMKind::under);
  CHECK(f->index() == "c");
  CHECK(f->left()->kind() == NLMKind::prod);
  CHECK(f->right()->kind() == NLMKind::dia);
  CHECK(f->connective_count() == 3);

  std::vector<std::string> fsamples = {
      "p", "(p *x q)", "(p \\c q)", "(p /x (q *c q))", "<>j []j p",
  };
  for (const std::string& s : fsamples) {
    CAPTURE(s);
    NLMFormulaPtr g = parse_nlm_formula(s, sig);
    CHECK(same_nlm_formula(parse_nlm_formula(format_nlm_formula(g), sig), g));
  }

  std::vector<std::string> dsamples = {
      "p",
      "(p , q)^x",
      "((p , q)^c , < p >^j)^x",
      "< < (p \\c q) >^j >^j",
  };
  for (const std::string& s : dsamples) {
    CAPTURE(s);
    DatabasePtr d = parse_database(s, sig);
    CHECK(same_database(parse_database(format_database(d), sig), d));
  }
  DatabasePtr db = parse_database("((p , q)^c , < p >^j)^x", sig);
  CHECK(db->kind() == DBKind::pair);
  CHECK(db->index() == "x");
  CHECK(db->leaf_count() == 3);
  CHECK(db->bracket_count() == 3);

  NLMSequent seq = parse_nlm_sequent("(q , (p /c q))^c -> p", sig);
  CHECK(seq.antecedent->kind() == DBKind::pair);
  CHECK(seq.succedent->kind() == NLMKind::atom);
  CHECK(format_nlm_sequent(seq) == "(q , (p /c q))^c -> p");

  // modes and modalities are checked against the signature
  CHECK(thrown_code([&] { parse_nlm_formula("p *y q", sig); }) ==
        error::code::parse);
  CHECK(thrown_code([&] { parse_nlm_formula("<>k p", sig); }) ==
        error::code::parse);
  CHECK(thrown_code([&] { parse_database("(p , q)^k", sig); }) ==
        error::code::parse);
  CHECK(thrown_code([&] { parse_database("< p >^x", sig); }) ==
        error::code::parse);
  // chained connectives need parentheses
  CHECK(thrown_code([&] { parse_nlm_formula("p *x q *x p", sig); }) ==
        error::code::parse);
  CHECK(thrown_code([&] { parse_nlm_sequent("p -> ", sig); }) ==
        error::code::parse);
}

TEST_CASE("HL derivation JSON round-trip replays") {
  HLProver prover;
  HLSequent goal = parse_hl_sequent("K[c](q, div(p, K[c](q, $))) -> p:1");
  HLProveResult res = prover.prove(goal);
  REQUIRE(res.verdict == Verdict::derivable);
  REQUIRE(res.derivation.has_value());
  CHECK(check_derivation(*res.derivation));

  std::string json = hl_derivation_to_json(*res.derivation);
  HLDerivation back = hl_derivation_from_json(json);
  std::string why;
  CHECK(check_derivation(back, &why));
  CAPTURE(why);
  CHECK(isomorphic(back.conclusion.antecedent, goal.antecedent));
  CHECK(same_formula(back.conclusion.succedent, goal.succedent));
  // the dump is stable across one round-trip
  CHECK(hl_derivation_to_json(back) == json);

  std::string text = hl_derivation_to_text(back);
  CHECK(text.find("(div_l)") != std::string::npos);
  CHECK(text.find("(ax)") != std::string::npos);

  CHECK(thrown_code([] { hl_derivation_from_json("{}"); }) ==
        error::code::parse);
  CHECK(thrown_code([] { hl_derivation_from_json("not json"); }) ==
        error::code::parse);
  CHECK(thrown_code([&] {
          hl_derivation_from_json(
              "{\"rule\":\"frobnicate\",\"antecedent\":" +
              to_json(goal.antecedent) +
              ",\"succedent\":\"p:1\",\"premises\":[]}");
        }) == error::code::parse);
}

TEST_CASE("NL<> derivation JSON round-trip replays") {
  Signature sig = case2_sig();
  NLMProver prover(sig);
  NLMSequent goal = parse_nlm_sequent("((p /c q) , q)^c -> p", sig);
  NLMProveResult res = prover.prove(goal);
  REQUIRE(res.verdict == Verdict::derivable);
  REQUIRE(res.derivation.has_value());
  CHECK(check_derivation_nlm(*res.derivation, sig));

  std::string json = nlm_derivation_to_json(*res.derivation);
  NLMDerivation back = nlm_derivation_from_json(json, sig);
  std::string why;
  CHECK(check_derivation_nlm(back, sig, &why));
  CAPTURE(why);
  CHECK(same_database(back.conclusion.antecedent, goal.antecedent));
  CHECK(same_nlm_formula(back.conclusion.succedent, goal.succedent));
  CHECK(nlm_derivation_to_json(back) == json);

  std::string text = nlm_derivation_to_text(back);
  CHECK(text.find("(ax)") != std::string::npos);

  CHECK(thrown_code([&] { nlm_derivation_from_json("[]", sig); }) ==
        error::code::parse);
  CHECK(thrown_code([&] {
          nlm_derivation_from_json(
              "{\"rule\":\"zap\",\"sequent\":\"p -> p\",\"premises\":[]}",
              sig);
        }) == error::code::parse);
}

TEST_CASE("signature JSON round-trip") {
  Signature sig = case2_sig();
  Signature back = signature_from_json(signature_to_json(sig));
  CHECK(back.modes == sig.modes);
  CHECK(back.modalities == sig.modalities);
  CHECK(back.commutative == sig.commutative);
  CHECK(back.associative == sig.associative);
  CHECK(thrown_code([] { signature_from_json("{"); }) == error::code::parse);
  // C must be inside I
  CHECK(thrown_code([] {
          signature_from_json(
              "{\"modes\":[\"x\"],\"commutative\":[\"c\"]}");
        }) == error::code::signature);
}

TEST_CASE("classical Lambek translation tr") {
  LCFormulaPtr p = LCFormula::atom("p");
  LCFormulaPtr q = LCFormula::atom("q");
  CHECK(same_formula(tr_classic(p), prim("p", 2)));
  CHECK(same_formula(tr_classic(LCFormula::prod(p, q)),
                     Formula::product(string_graph({prim("p", 2),
                                                    prim("q", 2)}))));
  // A / B: hole first; B \ A: hole second
  CHECK(same_formula(
      tr_classic(LCFormula::over(p, q)),
      Formula::division(prim("p", 2),
                        string_graph({Formula::hole(2), prim("q", 2)}))));
  CHECK(same_formula(
      tr_classic(LCFormula::under(q, p)),
      Formula::division(prim("p", 2),
                        string_graph({prim("q", 2), Formula::hole(2)}))));

  HLSequent s = tr_classic_sequent({p, q}, LCFormula::prod(p, q));
  CHECK(isomorphic(s.antecedent, string_graph({prim("p", 2), prim("q", 2)})));
  CHECK(same_formula(s.succedent, tr_classic(LCFormula::prod(p, q))));
}
