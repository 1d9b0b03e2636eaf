#include "doctest.h"
#include "fopkit/error.hpp"
#include "fopkit/problems.hpp"
#include "reference_instance.hpp"

using namespace fopkit;
using fopkit::testing::reference_dnf;
using fopkit::testing::term;

TEST_CASE("encode_dnf transcribes the instance") {
  const Qbf2Dnf inst{2, {0}, {term({0}, {1})}};
  const Structure a = encode_dnf(inst);
  CHECK(a.size() == 2);
  CHECK(a.relation("E").tuples() == std::vector<Tuple>{{0}});
  CHECK(a.relation("Q").tuples() == std::vector<Tuple>{{0, 0}});
  CHECK(a.relation("M").tuples() == std::vector<Tuple>{{0, 1}});
  const Qbf2Dnf back = decode_dnf(a);
  CHECK(back.implicants.size() == 2);
  CHECK(back.implicants[1] == BoolTerm{});
}

TEST_CASE("dnf and cnf structures round trip at n = 2") {
  enumerate_structures(vocab::dnf(), 2, [](const Structure& a) {
    CHECK(encode_dnf(decode_dnf(a)) == a);
  });
  enumerate_structures(vocab::cnf(), 2, [](const Structure& a) {
    CHECK(encode_cnf(decode_cnf(a)) == a);
  });
}

TEST_CASE("empty Q and M decode to empty implicants") {
  const Qbf2Dnf d = decode_dnf(Structure::empty(vocab::dnf(), 3));
  CHECK(d.implicants.size() == 3);
  for (const auto& t : d.implicants) CHECK(t == BoolTerm{});
  CHECK(decide_qsat2(d));
}

TEST_CASE("decide_qsat2") {
  const auto w = qsat2_witness(reference_dnf());
  REQUIRE(w.has_value());
  CHECK(decide_qsat2(reference_dnf()));
  CHECK_FALSE(decide_qsat2({2, {0}, {}}));
  CHECK_FALSE(decide_qsat2({1, {}, {term({}, {0})}}));
  std::set<Element> all;
  for (Element v = 0; v < 30; ++v) all.insert(v);
  CHECK_THROWS_AS(decide_qsat2({30, {}, {term(all, {})}}), BudgetExceeded);
  CHECK_NOTHROW(decide_qsat2({30, {}, {term(all, {})}}, 30));
}

TEST_CASE("decide_qunsat2") {
  CHECK(decide_qunsat2({1, {}, {term({0}, {}), term({}, {0})}}));
  CHECK_FALSE(decide_qunsat2({1, {}, {}}));
  CHECK_FALSE(decide_qunsat2({1, {}, {term({0}, {0})}}));
}

TEST_CASE("decide_unique_ext") {
  CHECK(decide_unique_ext({1, {}, {term({0}, {})}}));
  CHECK_FALSE(decide_unique_ext({1, {}, {term({0}, {0})}}));
  CHECK(count_models({1, {}, {term({0}, {0})}}) == 2);
  // Existential x0 can force a unique completion of x1.
  CHECK(decide_unique_ext({2, {0}, {term({1}, {0}), term({0}, {})}}));
}

TEST_CASE("maximal cliques") {
  CHECK(maximal_cliques(Graph::complete(4)) == std::vector<std::vector<Element>>{{0, 1, 2, 3}});
  CHECK(maximal_cliques(Graph::cycle(5)) ==
        std::vector<std::vector<Element>>{{0, 1}, {0, 4}, {1, 2}, {2, 3}, {3, 4}});
  CHECK(maximal_cliques(Graph(2)) == std::vector<std::vector<Element>>{{0}, {1}});
}

TEST_CASE("decide_2cc") {
  for (Element m = 2; m <= 6; ++m) {
    const TwoCliqueColoring c = decide_2cc(Graph::complete(m));
    CHECK(c.accepted);
    CHECK(is_2cc_coloring(Graph::complete(m), c.red));
  }
  CHECK_FALSE(decide_2cc(Graph::cycle(5)).accepted);
  const TwoCliqueColoring p = decide_2cc(Graph::path(3));
  REQUIRE(p.accepted);
  CHECK(p.red[0] == p.red[2]);
  CHECK(p.red[1] != p.red[0]);
  CHECK(decide_2cc(Graph(1)).accepted);
  CHECK_THROWS_AS(decide_2cc(Graph::cycle(25)), BudgetExceeded);
}

TEST_CASE("decide_2cc_n") {
  CHECK(decide_2cc_n(Graph::cycle(5), 6));
  CHECK_FALSE(decide_2cc_n(Graph::cycle(5), 5));
  CHECK(decide_2cc_n(Graph::complete(2), 2));
}

TEST_CASE("decide_vcsat") {
  VcsatInstance zero{4, reference_dnf().implicants, {0, 0, 0, 0}, 0};
  CHECK(decide_vcsat(zero));
  VcsatInstance forced{1, {term({0}, {})}, {5}, 3};
  CHECK_FALSE(decide_vcsat(forced));
  forced.cost = 5;
  CHECK(decide_vcsat(forced));
  for (std::uint64_t k : {0u, 1u, 100u}) CHECK_FALSE(decide_vcsat({2, {}, {1, 1}, k}));
}

TEST_CASE("graph decoding symmetrizes and drops loops") {
  const Structure a = make_structure(vocab::graph(), 3, {{"E", {{0, 1}, {2, 2}}}});
  std::vector<std::string> warnings;
  const Graph g = decode_graph(a, &warnings);
  CHECK(g.adjacent(1, 0));
  CHECK(g.edges().size() == 1);
  CHECK(warnings.size() == 1);
}

TEST_CASE("square_dnf keeps the meaning") {
  const Qbf2Dnf f = reference_dnf();
  const Qbf2Dnf sq = square_dnf({6, f.existential, f.implicants});
  CHECK(sq.implicants.size() == 6);
  CHECK(decide_qsat2(sq) == decide_qsat2(f));
  CHECK(decode_dnf(encode_dnf(sq)) == sq);
  const Qbf2Cnf c = square_cnf({1, {}, {term({0}, {}), term({}, {0}), term({0}, {0})}});
  CHECK(c.var_count == 3);
  CHECK(decide_qunsat2(c));
}

TEST_CASE("instance shorthand round trip") {
  const Qbf2Dnf f = reference_dnf();
  CHECK(parse_qdnf(serialize_qdnf(f)) == f);
  const Qbf2Cnf c{2, {1}, {term({0}, {1}), term({}, {})}};
  CHECK(parse_qcnf(serialize_qcnf(c)) == c);
  const VcsatInstance v{2, {term({0}, {1})}, {3, 4}, 7};
  CHECK(parse_vcsat(serialize_vcsat(v)) == v);
  CHECK(parse_graph(serialize_graph(Graph::cycle(5))) == Graph::cycle(5));
  CHECK_THROWS_AS(parse_qdnf("qdnf { vars = 2 ; imp = (+3) }"), ParseError);
  CHECK_THROWS_AS(parse_graph("graph { edges = { } }"), ParseError);
}
