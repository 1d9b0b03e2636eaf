#pragma once

// Consistency of ground literal sequences over graphs and (n,k)-universality
// checks, with the witness constructions for 2CC and its complement.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fopkit/problems.hpp"

namespace fopkit {

// E(u,v) or !E(u,v) on universe elements.
struct LiteralCondition {
  std::string relation = "E";
  bool positive = true;
  Tuple args;

  friend bool operator==(const LiteralCondition&, const LiteralCondition&) = default;
};

std::string to_string(const LiteralCondition& c);
std::string to_string(const std::vector<LiteralCondition>& conds);
// Space or comma separated literals: "E(0,1) !E(2,3)".
std::vector<LiteralCondition> parse_conditions(std::string_view text);

// No positive loop, and no pair demanded both present and absent. Pairs are
// unordered unless `ordered` is set.
bool is_consistent_graph(const std::vector<LiteralCondition>& conds, Element m,
                         bool ordered = false);
// Every condition holds in g (adjacency is symmetric).
bool satisfies(const Graph& g, const std::vector<LiteralCondition>& conds);

struct ColoredWitness {
  Graph graph;
  std::vector<bool> red;  // a 2-clique-coloring of graph
};

// K_m when every condition is positive; otherwise the complete graph minus
// the negated pairs, with the nodes outside every negated pair red.
// Needs consistent conditions and m >= 2k+1.
ColoredWitness witness_2cc(const std::vector<LiteralCondition>& conds, Element m);
// The positive pairs plus a 5-cycle on the first five nodes no condition
// mentions. Needs consistent conditions and five such nodes.
Graph witness_2cc_complement(const std::vector<LiteralCondition>& conds, Element m);

struct GraphProblem {
  std::string tag;
  std::function<bool(const Graph&)> member;
  // A member satisfying the conditions, or nullopt when the construction
  // does not apply.
  std::function<std::optional<Graph>(const std::vector<LiteralCondition>&, Element)> witness;
};

// 2cc, 2cc-c, 2cc-n:<n>.
GraphProblem graph_problem(std::string_view tag);

struct UniversalityOptions {
  bool ordered = false;
  bool use_witnesses = true;
  std::uint64_t search_budget = std::uint64_t{1} << 22;  // graphs per sequence
};

struct UniversalityReport {
  std::string problem;
  Element n = 0;
  std::size_t k = 0;
  Element m_min = 0;
  Element m_max = 0;
  bool pass = true;
  std::optional<std::pair<Element, std::vector<LiteralCondition>>> counterexample;
  std::uint64_t sequences = 0;       // enumerated, up to symmetry
  std::uint64_t full_sequences = 0;  // sum over m of (2m^2)^k, saturating
  std::uint64_t consistent = 0;
  std::uint64_t witnesses_validated = 0;
  std::uint64_t witness_failures = 0;  // constructed graphs that did not validate
  std::uint64_t searched = 0;  // sequences settled by exhaustive search
};

// For each m in [n, m_max] and each consistent k-literal sequence at size m,
// looks for a member of size m satisfying it. Stops at the first failure.
UniversalityReport check_universality(const GraphProblem& problem, Element n, std::size_t k,
                                      Element m_max, const UniversalityOptions& options = {});

// Checks (n, k-1) and (n+1, k) from a passing (n, k) report.
bool check_monotone(const GraphProblem& problem, const UniversalityReport& verified,
                    Element m_max, const UniversalityOptions& options = {});

}  // namespace fopkit
