#include "fopkit/universality.hpp"

#include <algorithm>
#include <charconv>
#include <set>
#include <sstream>

#include "fopkit/error.hpp"
#include "lexer.hpp"

namespace fopkit {

namespace {

using Pair = std::pair<Element, Element>;

Pair unordered(const LiteralCondition& c) {
  return {std::min(c.args[0], c.args[1]), std::max(c.args[0], c.args[1])};
}

void check_conditions(const std::vector<LiteralCondition>& conds, Element m) {
  for (const auto& c : conds) {
    if (c.relation != "E" || c.args.size() != 2) {
      throw ValidationError("condition " + to_string(c) + " is not a literal over E/2");
    }
    if (c.args[0] >= m || c.args[1] >= m) {
      throw ValidationError("condition " + to_string(c) + " is outside a universe of size " +
                            std::to_string(m));
    }
  }
}

std::set<Element> mentioned(const std::vector<LiteralCondition>& conds) {
  std::set<Element> out;
  for (const auto& c : conds) out.insert(c.args.begin(), c.args.end());
  return out;
}

// Graphs on m nodes satisfying conds, searched exhaustively over the pairs
// the conditions leave open.
std::optional<Graph> search_graph(const std::vector<LiteralCondition>& conds, Element m,
                                  const std::function<bool(const Graph&)>& member,
                                  std::uint64_t budget) {
  std::set<Pair> on;
  std::set<Pair> off;
  for (const auto& c : conds) {
    if (c.positive && c.args[0] == c.args[1]) return std::nullopt;
    if (c.args[0] == c.args[1]) continue;
    (c.positive ? on : off).insert(unordered(c));
  }
  for (const auto& p : on) {
    if (off.count(p)) return std::nullopt;
  }
  std::vector<Pair> open;
  for (Element u = 0; u < m; ++u) {
    for (Element v = u + 1; v < m; ++v) {
      if (!on.count({u, v}) && !off.count({u, v})) open.push_back({u, v});
    }
  }
  if (open.size() >= 63 || (std::uint64_t{1} << open.size()) > budget) {
    throw BudgetExceeded("graph search over " + std::to_string(open.size()) +
                         " open pairs exceeds the budget");
  }
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << open.size()); ++mask) {
    Graph g(m);
    for (const auto& [u, v] : on) g.add_edge(u, v);
    for (std::size_t i = 0; i < open.size(); ++i) {
      if ((mask >> i) & 1u) g.add_edge(open[i].first, open[i].second);
    }
    if (member(g)) return g;
  }
  return std::nullopt;
}

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > UINT64_MAX / a) return UINT64_MAX;
  return a * b;
}

std::uint64_t saturating_add(std::uint64_t a, std::uint64_t b) {
  return a > UINT64_MAX - b ? UINT64_MAX : a + b;
}

std::optional<Element> suffix_number(std::string_view text, std::string_view prefix) {
  if (text.substr(0, prefix.size()) != prefix) return std::nullopt;
  text.remove_prefix(prefix.size());
  Element n = 0;
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), n);
  if (ec != std::errc() || end != text.data() + text.size() || text.empty()) return std::nullopt;
  return n;
}

}  // namespace

std::string to_string(const LiteralCondition& c) {
  std::ostringstream out;
  out << (c.positive ? "" : "!") << c.relation << '(';
  for (std::size_t i = 0; i < c.args.size(); ++i) out << (i ? "," : "") << c.args[i];
  out << ')';
  return out.str();
}

std::string to_string(const std::vector<LiteralCondition>& conds) {
  std::string out;
  for (const auto& c : conds) out += (out.empty() ? "" : " ") + to_string(c);
  return out.empty() ? "(none)" : out;
}

std::vector<LiteralCondition> parse_conditions(std::string_view text) {
  detail::TokenStream ts(text);
  std::vector<LiteralCondition> out;
  while (!ts.at_end()) {
    if (ts.accept(",") || ts.accept(";")) continue;
    LiteralCondition c;
    c.positive = !(ts.accept("!") || ts.accept("-"));
    c.relation = ts.expect_ident("relation name");
    ts.expect("(");
    do {
      c.args.push_back(static_cast<Element>(ts.expect_number("element")));
    } while (ts.accept(","));
    ts.expect(")");
    out.push_back(std::move(c));
  }
  return out;
}

bool is_consistent_graph(const std::vector<LiteralCondition>& conds, Element m, bool ordered) {
  check_conditions(conds, m);
  std::set<Pair> on;
  std::set<Pair> off;
  for (const auto& c : conds) {
    if (c.positive && c.args[0] == c.args[1]) return false;
    const Pair p = ordered ? Pair{c.args[0], c.args[1]} : unordered(c);
    (c.positive ? on : off).insert(p);
  }
  return std::none_of(on.begin(), on.end(), [&](const Pair& p) { return off.count(p) > 0; });
}

bool satisfies(const Graph& g, const std::vector<LiteralCondition>& conds) {
  check_conditions(conds, g.node_count());
  return std::all_of(conds.begin(), conds.end(), [&](const LiteralCondition& c) {
    return g.adjacent(c.args[0], c.args[1]) == c.positive;
  });
}

ColoredWitness witness_2cc(const std::vector<LiteralCondition>& conds, Element m) {
  if (!is_consistent_graph(conds, m)) throw ValidationError("inconsistent conditions");
  if (m < 2 * conds.size() + 1) {
    throw ValidationError("witness_2cc needs m >= 2k+1 = " + std::to_string(2 * conds.size() + 1));
  }
  ColoredWitness w{Graph::complete(m), std::vector<bool>(m, true)};
  bool any_negative = false;
  for (const auto& c : conds) {
    if (c.positive) continue;
    any_negative = true;
    if (c.args[0] != c.args[1]) w.graph.remove_edge(c.args[0], c.args[1]);
    w.red[c.args[0]] = false;
    w.red[c.args[1]] = false;
  }
  if (!any_negative) {
    w.red.assign(m, false);
    w.red[0] = true;
  }
  return w;
}

Graph witness_2cc_complement(const std::vector<LiteralCondition>& conds, Element m) {
  if (!is_consistent_graph(conds, m)) throw ValidationError("inconsistent conditions");
  const std::set<Element> used = mentioned(conds);
  std::vector<Element> free;
  for (Element v = 0; v < m && free.size() < 5; ++v) {
    if (!used.count(v)) free.push_back(v);
  }
  if (free.size() < 5) {
    throw ValidationError("witness_2cc_complement needs five nodes free of conditions");
  }
  Graph g(m);
  for (const auto& c : conds) {
    if (c.positive) g.add_edge(c.args[0], c.args[1]);
  }
  for (std::size_t i = 0; i < 5; ++i) g.add_edge(free[i], free[(i + 1) % 5]);
  return g;
}

GraphProblem graph_problem(std::string_view tag) {
  GraphProblem p;
  p.tag = std::string(tag);
  if (tag == "2cc") {
    p.member = [](const Graph& g) { return decide_2cc(g).accepted; };
    p.witness = [](const std::vector<LiteralCondition>& conds,
                   Element m) -> std::optional<Graph> {
      if (m < 2 * conds.size() + 1 || !is_consistent_graph(conds, m)) return std::nullopt;
      return witness_2cc(conds, m).graph;
    };
  } else if (tag == "2cc-c") {
    p.member = [](const Graph& g) { return !decide_2cc(g).accepted; };
    p.witness = [](const std::vector<LiteralCondition>& conds,
                   Element m) -> std::optional<Graph> {
      if (!is_consistent_graph(conds, m) || m < mentioned(conds).size() + 5) return std::nullopt;
      return witness_2cc_complement(conds, m);
    };
  } else if (auto t = suffix_number(tag, "2cc-n:")) {
    const Element threshold = *t;
    p.member = [threshold](const Graph& g) { return decide_2cc_n(g, threshold); };
    p.witness = [threshold](const std::vector<LiteralCondition>& conds,
                            Element m) -> std::optional<Graph> {
      if (!is_consistent_graph(conds, m)) return std::nullopt;
      if (m < threshold) {
        Graph g(m);
        for (const auto& c : conds) {
          if (c.positive) g.add_edge(c.args[0], c.args[1]);
        }
        return g;
      }
      if (m < 2 * conds.size() + 1) return std::nullopt;
      return witness_2cc(conds, m).graph;
    };
  } else {
    throw ValidationError("unknown graph problem '" + std::string(tag) + "'");
  }
  return p;
}

UniversalityReport check_universality(const GraphProblem& problem, Element n, std::size_t k,
                                      Element m_max, const UniversalityOptions& options) {
  if (m_max < n) throw ValidationError("m_max must be at least n");
  UniversalityReport report;
  report.problem = problem.tag;
  report.n = n;
  report.k = k;
  report.m_min = n;
  report.m_max = m_max;
  for (Element m = n; m <= m_max && report.pass; ++m) {
    report.full_sequences = saturating_add(
        report.full_sequences,
        [&] {
          std::uint64_t total = 1;
          for (std::size_t i = 0; i < k; ++i) {
            total = saturating_mul(total, 2 * std::uint64_t{m} * m);
          }
          return total;
        }());
    // Literals: positives then negatives, pairs u <= v (all ordered pairs
    // when ordered).
    std::vector<LiteralCondition> literals;
    for (bool positive : {true, false}) {
      for (Element u = 0; u < m; ++u) {
        for (Element v = options.ordered ? 0 : u; v < m; ++v) {
          literals.push_back({"E", positive, {u, v}});
        }
      }
    }
    // Non-decreasing index sequences: multisets of k literals.
    std::vector<std::size_t> idx(k, 0);
    while (true) {
      std::vector<LiteralCondition> conds;
      for (std::size_t i : idx) conds.push_back(literals[i]);
      ++report.sequences;
      if (is_consistent_graph(conds, m, options.ordered)) {
        ++report.consistent;
        bool found = false;
        if (options.use_witnesses && problem.witness) {
          if (auto g = problem.witness(conds, m)) {
            if (satisfies(*g, conds) && problem.member(*g)) {
              ++report.witnesses_validated;
              found = true;
            } else {
              ++report.witness_failures;
            }
          }
        }
        if (!found) {
          ++report.searched;
          found = search_graph(conds, m, problem.member, options.search_budget).has_value();
        }
        if (!found) {
          report.pass = false;
          report.counterexample = {m, conds};
          break;
        }
      }
      std::size_t pos = k;
      while (pos > 0 && idx[pos - 1] + 1 == literals.size()) --pos;
      if (pos == 0) break;
      ++idx[pos - 1];
      for (std::size_t i = pos; i < k; ++i) idx[i] = idx[pos - 1];
    }
  }
  return report;
}

bool check_monotone(const GraphProblem& problem, const UniversalityReport& verified,
                    Element m_max, const UniversalityOptions& options) {
  if (verified.k == 0) throw ValidationError("monotonicity needs a report with k >= 1");
  if (!verified.pass) throw ValidationError("monotonicity needs a passing report");
  const bool fewer = check_universality(problem, verified.n, verified.k - 1, m_max, options).pass;
  const bool larger =
      verified.n + 1 > m_max ||
      check_universality(problem, verified.n + 1, verified.k, m_max, options).pass;
  return fewer && larger;
}

}  // namespace fopkit
