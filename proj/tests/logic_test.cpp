#include "doctest.h"
#include "fopkit/error.hpp"
#include "fopkit/eval.hpp"
#include "fopkit/formula.hpp"
#include "fopkit/normal_form.hpp"
#include "fopkit/problems.hpp"
#include "fopkit/reductions.hpp"

using namespace fopkit;

namespace {

Formula g(const char* text) { return parse_formula(text, vocab::graph()); }

Structure graph_structure(Element n, const std::vector<Tuple>& e) {
  return make_structure(vocab::graph(), n, {{"E", e}});
}

Structure k3() {
  return encode_graph(Graph::complete(3));
}

}  // namespace

TEST_CASE("parse_formula shapes") {
  const Formula f = g("forall x forall y (!(x=y) -> E(x,y))");
  CHECK(f.kind() == FormulaKind::Forall);
  CHECK(f.child().kind() == FormulaKind::Forall);
  CHECK(f.child().child().kind() == FormulaKind::Implies);

  const Formula s = g("exists2 S/1 forall2 T/1 exists x (S(x) & !T(x))");
  CHECK(s.kind() == FormulaKind::SoExists);
  CHECK(s.arity() == 1);
  CHECK(s.child().kind() == FormulaKind::SoForall);
  CHECK(s.child().child().child().kind() == FormulaKind::And);
}

TEST_CASE("parse_formula errors") {
  CHECK_THROWS_AS(g("E(x)"), Error);
  CHECK_THROWS_AS(g("F(x,y)"), Error);
  CHECK_THROWS_AS(g("forall x (E(x,y)"), ParseError);
  CHECK_THROWS_AS(g("BIT(x)"), Error);
}

TEST_CASE("precedence: & over | over (+) over -> over <->") {
  CHECK(g("E(x,y) | E(y,x) & x = y") == g("E(x,y) | (E(y,x) & x = y)"));
  CHECK(g("x = y -> E(x,y) <-> E(y,x)") == g("(x = y -> E(x,y)) <-> E(y,x)"));
  CHECK(g("x = 0 | x = 1 (+) x = max") == g("(x = 0 | x = 1) (+) x = max"));
}

TEST_CASE("to_string parses back to the same formula") {
  for (const char* text :
       {"forall x forall y (!(x=y) -> E(x,y))", "exists2 S/1 forall2 T/2 exists x (S(x) & !T(x,max))",
        "x = 0 & BIT(y,1) | SUC(x,y)", "forall x (E(x,x) (+) x <= 1)", "true & !false",
        "exists i (i <= 3 & PLUS(i,i,x))", "x != y <-> E(x,y)"}) {
    const Formula f = g(text);
    CHECK_MESSAGE(g(to_string(f).c_str()) == f, text);
  }
}

TEST_CASE("free variables and substitution") {
  const Formula f = g("exists x (E(x,y) & x = z)");
  CHECK(free_variables(f) == std::set<std::string>{"y", "z"});
  CHECK_FALSE(is_sentence(f));
  const Formula s = substitute(f, {{"y", Term::num(1)}, {"x", Term::num(0)}});
  CHECK(free_variables(s) == std::set<std::string>{"z"});
  CHECK(s == g("exists x (E(x,1) & x = z)"));
}

TEST_CASE("is_numeric") {
  CHECK(is_numeric(g("x=0 & BIT(y,1)")));
  CHECK_FALSE(is_numeric(g("E(x,y)")));
  CHECK(is_numeric(g("exists i (i <= 3 & PLUS(i,i,x))")));
}

TEST_CASE("eval_fo examples") {
  CHECK(eval_fo(k3(), g("forall x forall y (!(x=y) -> E(x,y))")));
  const Structure two = graph_structure(2, {{0, 1}, {1, 0}});
  CHECK_FALSE(eval_fo(two, g("exists x E(x,x)")));
  const Structure k = make_structure(vocab::vcsat(), 4, {{"P", {}}, {"N", {}}, {"V", {}}, {"K", {{3}}}});
  CHECK(eval_fo(k, vcsat_cost_sentence()));
  CHECK(eval_fo(two, g("E(x,y)"), {{"x", 1}, {"y", 0}}));
  CHECK_THROWS_AS(eval_fo(two, g("E(x,y)"), {{"x", 1}}), EvalError);
  CHECK_THROWS_AS(eval_fo(two, g("exists2 S/1 S(0)")), EvalError);
}

TEST_CASE("numeric literals outside the universe make atoms false") {
  const Structure two = graph_structure(2, {{0, 1}});
  CHECK_FALSE(eval_fo(two, g("E(0,3)")));
  CHECK(eval_fo(two, g("!E(0,3)")));
  CHECK_FALSE(eval_fo(two, g("3 = 3")));
  CHECK(eval_fo(two, g("max = 1")));
}

TEST_CASE("eval_so2 examples") {
  const Structure one = graph_structure(1, {});
  const Structure two = graph_structure(2, {{0, 1}});
  CHECK(eval_so2(two, g("exists2 S/1 forall x (S(x) | !S(x))")));
  CHECK(eval_so2(one, g("exists2 S/1 forall x (S(x) | !S(x))")));
  CHECK_FALSE(eval_so2(one, g("exists2 S/1 forall2 T/1 exists x (S(x) & !T(x))")));
  CHECK_THROWS_AS(eval_so2(one, g("forall2 T/1 exists2 S/1 (S(0) | T(0))")), EvalError);
  CHECK(eval_pi2(one, g("forall2 T/1 exists2 S/1 forall x (S(x) <-> T(x))")));
  CHECK_THROWS_AS(eval_so(graph_structure(3, {}), g("exists2 S/3 S(0,0,0)"), 20), BudgetExceeded);
}

TEST_CASE("the 2CC sentence agrees with decide_2cc on graphs with at most 3 nodes") {
  const Formula phi = two_cc_sentence();
  int graphs = 0;
  for (Element n = 1; n <= 3; ++n) {
    std::vector<std::pair<Element, Element>> pairs;
    for (Element u = 0; u < n; ++u) {
      for (Element v = u + 1; v < n; ++v) pairs.push_back({u, v});
    }
    for (unsigned mask = 0; mask < (1u << pairs.size()); ++mask) {
      Graph gr(n);
      for (std::size_t i = 0; i < pairs.size(); ++i) {
        if ((mask >> i) & 1u) gr.add_edge(pairs[i].first, pairs[i].second);
      }
      CHECK(eval_so2(encode_graph(gr), phi) == decide_2cc(gr).accepted);
      ++graphs;
    }
  }
  CHECK(graphs == 1 + 2 + 8);
}

TEST_CASE("validate_normal_form accepts the shape") {
  const Formula s = g(
      "exists2 S/1 forall2 T/1 exists x1 exists x2 ((S(x1) & !T(x2)) | (T(x1) & E(x1,x2)))");
  const NormalFormSentence nf = validate_normal_form(s, vocab::graph());
  CHECK(nf.g() == 1);
  CHECK(nf.h() == 1);
  CHECK(nf.c() == 2);
  CHECK(nf.r() == 2);
  CHECK(nf.implicants[1][1].kind == MatrixLiteral::Kind::Sigma);
  CHECK(assemble(nf) == s);
}

TEST_CASE("validate_normal_form rejections") {
  auto reason = [](const char* text) {
    try {
      validate_normal_form(g(text), vocab::graph());
    } catch (const NormalFormError& e) {
      return e.reason();
    }
    FAIL("accepted " << text);
    return NormalFormError::Reason::NotSentence;
  };
  CHECK(reason("exists2 S/1 exists x ((S(x) | E(x,x)) & (!S(x) | x = 0))") ==
        NormalFormError::Reason::NotDnf);
  CHECK(reason("exists x1 exists x2 (E(x1,x2) & E(x2,x1))") ==
        NormalFormError::Reason::MultipleSigmaLiterals);
  CHECK(reason("forall2 T/1 exists2 S/1 exists x S(x)") == NormalFormError::Reason::PrefixShape);
  CHECK(reason("exists x E(x,y)") == NormalFormError::Reason::NotSentence);
}
