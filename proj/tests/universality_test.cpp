#include <algorithm>

#include "doctest.h"
#include "fopkit/error.hpp"
#include "fopkit/universality.hpp"

using namespace fopkit;

TEST_CASE("condition text") {
  const auto c = parse_conditions("E(0,1) !E(2,3), -E(1,1)");
  REQUIRE(c.size() == 3);
  CHECK(c[0] == LiteralCondition{"E", true, {0, 1}});
  CHECK_FALSE(c[1].positive);
  CHECK_FALSE(c[2].positive);
  CHECK(to_string(c) == "E(0,1) !E(2,3) !E(1,1)");
  CHECK(to_string(std::vector<LiteralCondition>{}) == "(none)");
}

TEST_CASE("is_consistent_graph") {
  CHECK(is_consistent_graph(parse_conditions("E(0,1) !E(2,3)"), 4));
  CHECK_FALSE(is_consistent_graph(parse_conditions("E(0,1) !E(1,0)"), 3));
  CHECK(is_consistent_graph(parse_conditions("E(0,1) !E(1,0)"), 3, true));
  CHECK_FALSE(is_consistent_graph(parse_conditions("E(0,0)"), 2));
  CHECK(is_consistent_graph(parse_conditions("!E(0,0)"), 2));
  CHECK_THROWS_AS(is_consistent_graph(parse_conditions("E(0,4)"), 4), ValidationError);
}

TEST_CASE("witness_2cc") {
  const ColoredWitness k5 = witness_2cc(parse_conditions("E(0,1) E(2,3)"), 5);
  CHECK(k5.graph == Graph::complete(5));
  CHECK(is_2cc_coloring(k5.graph, k5.red));

  const ColoredWitness w = witness_2cc(parse_conditions("!E(0,1)"), 3);
  Graph expected = Graph::complete(3);
  expected.remove_edge(0, 1);
  CHECK(w.graph == expected);
  CHECK(w.red == std::vector<bool>{false, false, true});
  CHECK(is_2cc_coloring(w.graph, w.red));
  CHECK(decide_2cc(w.graph).accepted);

  CHECK_THROWS_AS(witness_2cc(parse_conditions("E(0,1) !E(0,1)"), 3), ValidationError);
}

TEST_CASE("witness_2cc_complement") {
  const Graph g = witness_2cc_complement(parse_conditions("E(0,1)"), 7);
  Graph expected(7);
  expected.add_edge(0, 1);
  for (Element i = 0; i < 5; ++i) expected.add_edge(2 + i, 2 + (i + 1) % 5);
  CHECK(g == expected);
  CHECK_FALSE(decide_2cc(g).accepted);

  CHECK(witness_2cc_complement({}, 5) == Graph::cycle(5));
  CHECK_THROWS_AS(witness_2cc_complement(parse_conditions("!E(0,1)"), 6), ValidationError);
  CHECK_FALSE(decide_2cc(witness_2cc_complement(parse_conditions("!E(0,1)"), 7)).accepted);
}

TEST_CASE("2CC is (3,1)-universal up to 5 nodes") {
  const UniversalityReport r = check_universality(graph_problem("2cc"), 3, 1, 5);
  CHECK(r.pass);
  CHECK(r.witness_failures == 0);
  CHECK(r.witnesses_validated == r.consistent);
  CHECK(r.full_sequences == 18 + 32 + 50);
}

TEST_CASE("the complement is not universal from 2 nodes") {
  const UniversalityReport r = check_universality(graph_problem("2cc-c"), 2, 1, 4);
  CHECK_FALSE(r.pass);
  REQUIRE(r.counterexample.has_value());
  CHECK(r.counterexample->first == 2);
  CHECK(to_string(r.counterexample->second) == "E(0,1)");
}

TEST_CASE("search without witnesses reaches the same verdict") {
  UniversalityOptions options;
  options.use_witnesses = false;
  const UniversalityReport r = check_universality(graph_problem("2cc"), 3, 1, 4, options);
  CHECK(r.pass);
  CHECK(r.searched == r.consistent);
}

TEST_CASE("monotonicity") {
  const GraphProblem p = graph_problem("2cc");
  const UniversalityReport r31 = check_universality(p, 3, 1, 5);
  REQUIRE(r31.pass);
  CHECK(check_universality(p, 4, 1, 5).pass);
  CHECK(check_monotone(p, r31, 5));
  const UniversalityReport r52 = check_universality(p, 5, 2, 6);
  REQUIRE(r52.pass);
  CHECK(check_universality(p, 5, 1, 6).pass);
  const UniversalityReport r0 = check_universality(p, 1, 0, 3);
  CHECK(r0.pass);
  CHECK(r0.sequences == 3);
  CHECK_THROWS_AS(check_monotone(p, r0, 3), ValidationError);
}

TEST_CASE("a superset of conditions is no easier") {
  // Any witness for a sequence also witnesses every subsequence.
  const auto conds = parse_conditions("E(0,1) !E(2,3) E(3,4)");
  const ColoredWitness w = witness_2cc(conds, 7);
  for (std::size_t drop = 0; drop < conds.size(); ++drop) {
    auto sub = conds;
    sub.erase(sub.begin() + static_cast<long>(drop));
    CHECK(satisfies(w.graph, sub));
  }
}

TEST_CASE("padded problem witnesses") {
  const GraphProblem p = graph_problem("2cc-n:6");
  const auto small = p.witness(parse_conditions("E(0,1)"), 4);
  REQUIRE(small.has_value());
  CHECK(p.member(*small));
  CHECK(check_universality(p, 3, 1, 6).pass);
  CHECK_THROWS_AS(graph_problem("3col"), ValidationError);
}

namespace {

// Every multiset of k literals over m nodes, unordered pairs.
template <typename F>
void each_sequence(Element m, std::size_t k, F&& visit) {
  std::vector<LiteralCondition> literals;
  for (bool positive : {true, false}) {
    for (Element u = 0; u < m; ++u) {
      for (Element v = u; v < m; ++v) literals.push_back({"E", positive, {u, v}});
    }
  }
  std::vector<std::size_t> idx(k, 0);
  while (true) {
    std::vector<LiteralCondition> conds;
    for (std::size_t i : idx) conds.push_back(literals[i]);
    visit(conds);
    std::size_t pos = k;
    while (pos > 0 && idx[pos - 1] + 1 == literals.size()) --pos;
    if (pos == 0) return;
    ++idx[pos - 1];
    for (std::size_t i = pos; i < k; ++i) idx[i] = idx[pos - 1];
  }
}

}  // namespace

TEST_CASE("witness_2cc validates for k <= 2 and m <= 7") {
  std::uint64_t validated = 0;
  for (std::size_t k = 1; k <= 2; ++k) {
    for (Element m = static_cast<Element>(2 * k + 1); m <= 7; ++m) {
      each_sequence(m, k, [&](const std::vector<LiteralCondition>& conds) {
        if (!is_consistent_graph(conds, m)) return;
        const ColoredWitness w = witness_2cc(conds, m);
        CHECK(satisfies(w.graph, conds));
        CHECK(is_2cc_coloring(w.graph, w.red));
        CHECK(decide_2cc(w.graph).accepted);
        ++validated;
      });
    }
  }
  CHECK(validated > 1000);
}

TEST_CASE("structural facts of R when a condition is negative") {
  for (Element m = 5; m <= 7; ++m) {
    each_sequence(m, 2, [&](const std::vector<LiteralCondition>& conds) {
      if (!is_consistent_graph(conds, m)) return;
      if (std::all_of(conds.begin(), conds.end(), [](const auto& c) { return c.positive; })) return;
      const ColoredWitness w = witness_2cc(conds, m);
      const auto red_count = std::count(w.red.begin(), w.red.end(), true);
      CHECK(red_count > 0);
      CHECK(red_count < static_cast<long>(m));
      for (Element u = 0; u < m; ++u) {
        for (Element v = u + 1; v < m; ++v) {
          // R is a clique and every R to non-R pair is an edge.
          if (w.red[u] || w.red[v]) CHECK(w.graph.adjacent(u, v));
        }
      }
    });
  }
}

TEST_CASE("witness_2cc_complement validates for k <= 1 and m in {7, 8}") {
  for (Element m = 7; m <= 8; ++m) {
    for (std::size_t k = 0; k <= 1; ++k) {
      each_sequence(m, k, [&](const std::vector<LiteralCondition>& conds) {
        if (!is_consistent_graph(conds, m)) return;
        const Graph g = witness_2cc_complement(conds, m);
        CHECK(satisfies(g, conds));
        CHECK_FALSE(decide_2cc(g).accepted);
      });
    }
  }
}

TEST_CASE("2CC is (2k+1,k)-universal up to 2k+3 nodes for k = 1, 2") {
  for (std::size_t k = 1; k <= 2; ++k) {
    const auto n = static_cast<Element>(2 * k + 1);
    CHECK(check_universality(graph_problem("2cc"), n, k, n + 2).pass);
  }
}

TEST_CASE("a 2CC witness is also a 2CC_n witness") {
  // 2CC is a subset of 2CC_n, so the same graph witnesses the larger problem.
  for (Element m = 3; m <= 6; ++m) {
    each_sequence(m, 1, [&](const std::vector<LiteralCondition>& conds) {
      if (!is_consistent_graph(conds, m)) return;
      const Graph g = witness_2cc(conds, m).graph;
      for (Element n = 2; n <= m; ++n) CHECK(decide_2cc_n(g, n));
    });
  }
}
