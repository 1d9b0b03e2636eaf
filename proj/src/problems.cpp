#include "fopkit/problems.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

#include "fopkit/error.hpp"

namespace fopkit {

bool BoolTerm::contradictory() const {
  return std::any_of(positive.begin(), positive.end(),
                     [&](Element v) { return negative.count(v) != 0; });
}

// ---------------------------------------------------------------------------
// Graph

Graph::Graph(Element node_count, const std::vector<std::pair<Element, Element>>& edges)
    : n_(node_count) {
  for (auto [u, v] : edges) add_edge(u, v);
}

bool Graph::adjacent(Element u, Element v) const {
  return edges_.count({std::min(u, v), std::max(u, v)}) != 0;
}

void Graph::add_edge(Element u, Element v) {
  if (u >= n_ || v >= n_) {
    throw ValidationError("edge (" + std::to_string(u) + "," + std::to_string(v) +
                          ") outside a graph with " + std::to_string(n_) + " nodes");
  }
  if (u == v) throw ValidationError("loop at node " + std::to_string(u));
  edges_.insert({std::min(u, v), std::max(u, v)});
}

void Graph::remove_edge(Element u, Element v) { edges_.erase({std::min(u, v), std::max(u, v)}); }

Graph Graph::complete(Element n) {
  Graph g(n);
  for (Element u = 0; u < n; ++u) {
    for (Element v = u + 1; v < n; ++v) g.add_edge(u, v);
  }
  return g;
}

Graph Graph::cycle(Element n) {
  if (n < 3) throw ValidationError("a cycle needs at least 3 nodes");
  Graph g(n);
  for (Element u = 0; u < n; ++u) g.add_edge(u, (u + 1) % n);
  return g;
}

Graph Graph::path(Element n) {
  Graph g(n);
  for (Element u = 0; u + 1 < n; ++u) g.add_edge(u, u + 1);
  return g;
}

// ---------------------------------------------------------------------------
// Encodings

namespace {

void check_terms(const std::vector<BoolTerm>& terms, Element n, const char* what) {
  if (n < 1) throw ValidationError("an instance needs at least one variable");
  if (terms.size() > n) {
    throw ValidationError(std::string("more ") + what + " than universe elements (" +
                          std::to_string(terms.size()) + " > " + std::to_string(n) + ")");
  }
  for (const auto& t : terms) {
    for (const auto* s : {&t.positive, &t.negative}) {
      if (!s->empty() && *s->rbegin() >= n) {
        throw ValidationError("variable " + std::to_string(*s->rbegin()) + " out of range");
      }
    }
  }
}

void check_existential(const std::set<Element>& e, Element n) {
  if (!e.empty() && *e.rbegin() >= n) {
    throw ValidationError("existential variable " + std::to_string(*e.rbegin()) +
                          " out of range");
  }
}

Structure encode_terms(const VocabularyPtr& vocab, Element n, const std::set<Element>* existential,
                       const std::vector<BoolTerm>& terms, std::size_t pos_rel,
                       std::size_t neg_rel) {
  Structure a = Structure::empty(vocab, n);
  std::vector<Relation> rels = a.relations();
  if (existential) {
    for (Element v : *existential) rels[0].insert(std::vector<Element>{v});
  }
  for (Element i = 0; i < terms.size(); ++i) {
    for (Element v : terms[i].positive) rels[pos_rel].insert(std::vector<Element>{i, v});
    for (Element v : terms[i].negative) rels[neg_rel].insert(std::vector<Element>{i, v});
  }
  return Structure(vocab, n, std::move(rels));
}

std::vector<BoolTerm> decode_terms(const Structure& a, std::size_t pos_rel, std::size_t neg_rel) {
  std::vector<BoolTerm> terms(a.size());
  for (const auto& t : a.relation(pos_rel).tuples()) terms[t[0]].positive.insert(t[1]);
  for (const auto& t : a.relation(neg_rel).tuples()) terms[t[0]].negative.insert(t[1]);
  return terms;
}

std::set<Element> decode_unary(const Relation& r) {
  std::set<Element> out;
  for (const auto& t : r.tuples()) out.insert(t[0]);
  return out;
}

void check_vocab(const Structure& a, const VocabularyPtr& expected) {
  if (!same_vocabulary(a.vocabulary_ptr(), expected)) {
    throw ValidationError("expected a " + expected->name() + " structure, got " +
                          a.vocabulary().name());
  }
}

}  // namespace

Structure encode_dnf(const Qbf2Dnf& inst) {
  check_terms(inst.implicants, inst.var_count, "implicants");
  check_existential(inst.existential, inst.var_count);
  return encode_terms(vocab::dnf(), inst.var_count, &inst.existential, inst.implicants, 1, 2);
}

Qbf2Dnf decode_dnf(const Structure& a) {
  check_vocab(a, vocab::dnf());
  return {a.size(), decode_unary(a.relation(0)), decode_terms(a, 1, 2)};
}

Structure encode_cnf(const Qbf2Cnf& inst) {
  check_terms(inst.clauses, inst.var_count, "clauses");
  check_existential(inst.existential, inst.var_count);
  return encode_terms(vocab::cnf(), inst.var_count, &inst.existential, inst.clauses, 1, 2);
}

Qbf2Cnf decode_cnf(const Structure& a) {
  check_vocab(a, vocab::cnf());
  return {a.size(), decode_unary(a.relation(0)), decode_terms(a, 1, 2)};
}

Structure encode_graph(const Graph& g) {
  if (g.node_count() < 1) throw ValidationError("a graph structure needs at least one node");
  Relation e(2, g.node_count());
  for (auto [u, v] : g.edges()) {
    e.insert(std::vector<Element>{u, v});
    e.insert(std::vector<Element>{v, u});
  }
  return Structure(vocab::graph(), g.node_count(), {std::move(e)});
}

Graph decode_graph(const Structure& a, std::vector<std::string>* warnings) {
  check_vocab(a, vocab::graph());
  Graph g(a.size());
  for (const auto& t : a.relation(0).tuples()) {
    if (t[0] == t[1]) {
      if (warnings) warnings->push_back("dropped loop at node " + std::to_string(t[0]));
      continue;
    }
    g.add_edge(t[0], t[1]);
  }
  return g;
}

Structure encode_vcsat(const VcsatInstance& inst) {
  const Element n = inst.var_count;
  check_terms(inst.implicants, n, "implicants");
  if (inst.values.size() != n) throw ValidationError("one value per variable is required");
  const std::uint64_t limit = n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n);
  for (auto v : inst.values) {
    if (n < 64 && v >= limit) {
      throw ValidationError("value " + std::to_string(v) + " does not fit in " +
                            std::to_string(n) + " bits");
    }
  }
  if (n < 64 && inst.cost >= limit) {
    throw ValidationError("cost does not fit in " + std::to_string(n) + " bits");
  }
  Structure base = encode_terms(vocab::vcsat(), n, nullptr, inst.implicants, 0, 1);
  std::vector<Relation> rels = base.relations();
  for (Element x = 0; x < n; ++x) {
    for (Element j = 0; j < n && j < 64; ++j) {
      if ((inst.values[x] >> j) & 1u) rels[2].insert(std::vector<Element>{x, j});
    }
  }
  for (Element j = 0; j < n && j < 64; ++j) {
    if ((inst.cost >> j) & 1u) rels[3].insert(std::vector<Element>{j});
  }
  return Structure(vocab::vcsat(), n, std::move(rels));
}

VcsatInstance decode_vcsat(const Structure& a) {
  check_vocab(a, vocab::vcsat());
  if (a.size() > 64) throw ValidationError("vcsat structures above 64 elements are unsupported");
  VcsatInstance inst;
  inst.var_count = a.size();
  inst.implicants = decode_terms(a, 0, 1);
  inst.values.assign(a.size(), 0);
  for (const auto& t : a.relation(2).tuples()) inst.values[t[0]] |= std::uint64_t{1} << t[1];
  for (const auto& t : a.relation(3).tuples()) inst.cost |= std::uint64_t{1} << t[0];
  return inst;
}

namespace {

void square_terms(Element& var_count, std::vector<BoolTerm>& terms) {
  var_count = std::max<Element>({var_count, static_cast<Element>(terms.size()), 1});
  const BoolTerm filler = terms.empty() ? BoolTerm{{0}, {0}} : terms.front();
  while (terms.size() < var_count) terms.push_back(filler);
}

}  // namespace

Qbf2Dnf square_dnf(const Qbf2Dnf& inst) {
  Qbf2Dnf out = inst;
  square_terms(out.var_count, out.implicants);
  return out;
}

Qbf2Cnf square_cnf(const Qbf2Cnf& inst) {
  Qbf2Cnf out = inst;
  square_terms(out.var_count, out.clauses);
  return out;
}

// ---------------------------------------------------------------------------
// Boolean deciders

namespace {

void check_budget(Element vars, Element budget) {
  if (vars > budget || vars > 62) {
    throw BudgetExceeded("exhaustive search over " + std::to_string(vars) +
                         " variables exceeds the budget of " + std::to_string(budget));
  }
}

std::uint64_t mask_of(const std::set<Element>& s) {
  std::uint64_t m = 0;
  for (Element v : s) m |= std::uint64_t{1} << v;
  return m;
}

struct MaskTerm {
  std::uint64_t pos;
  std::uint64_t neg;
};

std::vector<MaskTerm> masks(const std::vector<BoolTerm>& terms, Element n) {
  for (const auto& t : terms) {
    for (const auto* s : {&t.positive, &t.negative}) {
      if (!s->empty() && *s->rbegin() >= n) {
        throw ValidationError("variable " + std::to_string(*s->rbegin()) + " out of range");
      }
    }
  }
  std::vector<MaskTerm> out;
  for (const auto& t : terms) out.push_back({mask_of(t.positive), mask_of(t.negative)});
  return out;
}

bool cnf_holds(const std::vector<MaskTerm>& clauses, std::uint64_t assignment) {
  for (const auto& c : clauses) {
    if ((assignment & c.pos) == 0 && (~assignment & c.neg) == 0) return false;
  }
  return true;
}

// Scatters the low bits of `bits` onto the positions set in `positions`.
std::uint64_t deposit(std::uint64_t bits, std::uint64_t positions) {
  std::uint64_t out = 0;
  for (std::uint64_t p = positions; p; p &= p - 1) {
    if (bits & 1u) out |= p & -p;
    bits >>= 1;
  }
  return out;
}

std::vector<bool> to_assignment(std::uint64_t bits, Element n) {
  std::vector<bool> out(n);
  for (Element v = 0; v < n; ++v) out[v] = (bits >> v) & 1u;
  return out;
}

}  // namespace

std::optional<std::vector<bool>> qsat2_witness(const Qbf2Dnf& inst, Element budget) {
  check_existential(inst.existential, inst.var_count);
  if (inst.var_count > 64) check_budget(inst.var_count, budget);
  std::vector<MaskTerm> terms;
  for (const auto& m : masks(inst.implicants, inst.var_count)) {
    if ((m.pos & m.neg) == 0) terms.push_back(m);
  }
  const std::uint64_t e_all = mask_of(inst.existential);
  std::uint64_t occurring = 0;
  for (const auto& t : terms) occurring |= t.pos | t.neg;
  const std::uint64_t e_vars = occurring & e_all;
  const std::uint64_t u_vars = occurring & ~e_all;
  const int e_count = std::popcount(e_vars);
  const int u_count = std::popcount(u_vars);
  check_budget(static_cast<Element>(e_count + u_count), budget);
  std::vector<MaskTerm> live;
  for (std::uint64_t xe = 0; xe < (std::uint64_t{1} << e_count); ++xe) {
    const std::uint64_t x = deposit(xe, e_vars);
    live.clear();
    bool unconditional = false;
    for (const auto& t : terms) {
      if ((x & t.pos & e_vars) != (t.pos & e_vars) || (x & t.neg & e_vars) != 0) continue;
      MaskTerm rest{t.pos & u_vars, t.neg & u_vars};
      if (rest.pos == 0 && rest.neg == 0) unconditional = true;
      live.push_back(rest);
    }
    bool all = unconditional;
    if (!all && !live.empty()) {
      all = true;
      for (std::uint64_t ye = 0; ye < (std::uint64_t{1} << u_count) && all; ++ye) {
        const std::uint64_t y = deposit(ye, u_vars);
        all = std::any_of(live.begin(), live.end(), [&](const MaskTerm& t) {
          return (y & t.pos) == t.pos && (y & t.neg) == 0;
        });
      }
    }
    if (all) return to_assignment(x, inst.var_count);
  }
  return std::nullopt;
}

bool decide_qsat2(const Qbf2Dnf& inst, Element budget) {
  return qsat2_witness(inst, budget).has_value();
}

bool decide_qunsat2(const Qbf2Cnf& inst, Element budget) {
  check_budget(inst.var_count, budget);
  check_existential(inst.existential, inst.var_count);
  const auto clauses = masks(inst.clauses, inst.var_count);
  const std::uint64_t e_vars = mask_of(inst.existential);
  const std::uint64_t all = inst.var_count == 0 ? 0 : (~std::uint64_t{0} >> (64 - inst.var_count));
  const std::uint64_t u_vars = all & ~e_vars;
  const int e_count = std::popcount(e_vars);
  const int u_count = std::popcount(u_vars);
  for (std::uint64_t xe = 0; xe < (std::uint64_t{1} << e_count); ++xe) {
    const std::uint64_t x = deposit(xe, e_vars);
    bool unsat = true;
    for (std::uint64_t ye = 0; ye < (std::uint64_t{1} << u_count) && unsat; ++ye) {
      unsat = !cnf_holds(clauses, x | deposit(ye, u_vars));
    }
    if (unsat) return true;
  }
  return false;
}

std::optional<std::vector<bool>> unique_ext_witness(const Qbf2Cnf& inst, Element budget) {
  check_budget(inst.var_count, budget);
  check_existential(inst.existential, inst.var_count);
  const auto clauses = masks(inst.clauses, inst.var_count);
  const std::uint64_t e_vars = mask_of(inst.existential);
  const std::uint64_t all = inst.var_count == 0 ? 0 : (~std::uint64_t{0} >> (64 - inst.var_count));
  const std::uint64_t u_vars = all & ~e_vars;
  const int e_count = std::popcount(e_vars);
  const int u_count = std::popcount(u_vars);
  for (std::uint64_t xe = 0; xe < (std::uint64_t{1} << e_count); ++xe) {
    const std::uint64_t x = deposit(xe, e_vars);
    int models = 0;
    for (std::uint64_t ye = 0; ye < (std::uint64_t{1} << u_count) && models < 2; ++ye) {
      if (cnf_holds(clauses, x | deposit(ye, u_vars))) ++models;
    }
    if (models == 1) return to_assignment(x, inst.var_count);
  }
  return std::nullopt;
}

bool decide_unique_ext(const Qbf2Cnf& inst, Element budget) {
  return unique_ext_witness(inst, budget).has_value();
}

std::uint64_t count_models(const Qbf2Cnf& inst, Element budget) {
  check_budget(inst.var_count, budget);
  const auto clauses = masks(inst.clauses, inst.var_count);
  std::uint64_t count = 0;
  for (std::uint64_t a = 0; a < (std::uint64_t{1} << inst.var_count); ++a) {
    if (cnf_holds(clauses, a)) ++count;
  }
  return count;
}

// ---------------------------------------------------------------------------
// Cliques and colorings

namespace {

std::vector<std::uint64_t> adjacency(const Graph& g) {
  if (g.node_count() > 64) {
    throw BudgetExceeded("clique search supports at most 64 nodes, got " +
                         std::to_string(g.node_count()));
  }
  std::vector<std::uint64_t> adj(g.node_count(), 0);
  for (auto [u, v] : g.edges()) {
    adj[u] |= std::uint64_t{1} << v;
    adj[v] |= std::uint64_t{1} << u;
  }
  return adj;
}

void bron_kerbosch(const std::vector<std::uint64_t>& adj, std::uint64_t r, std::uint64_t p,
                   std::uint64_t x, std::vector<std::uint64_t>& out) {
  if (p == 0) {
    if (x == 0) out.push_back(r);
    return;
  }
  // Pivot on the vertex of P u X with the most neighbours in P.
  std::uint64_t px = p | x;
  int best = -1;
  int best_deg = -1;
  for (std::uint64_t m = px; m; m &= m - 1) {
    int u = std::countr_zero(m);
    int d = std::popcount(p & adj[u]);
    if (d > best_deg) {
      best_deg = d;
      best = u;
    }
  }
  for (std::uint64_t m = p & ~adj[best]; m; m &= m - 1) {
    const int v = std::countr_zero(m);
    const std::uint64_t bit = std::uint64_t{1} << v;
    bron_kerbosch(adj, r | bit, p & adj[v], x & adj[v], out);
    p &= ~bit;
    x |= bit;
  }
}

std::vector<std::uint64_t> clique_masks(const Graph& g) {
  auto adj = adjacency(g);
  std::vector<std::uint64_t> out;
  if (g.node_count() == 0) return out;
  const std::uint64_t all = ~std::uint64_t{0} >> (64 - g.node_count());
  bron_kerbosch(adj, 0, all, 0, out);
  return out;
}

std::vector<Element> members(std::uint64_t m) {
  std::vector<Element> out;
  for (; m; m &= m - 1) out.push_back(static_cast<Element>(std::countr_zero(m)));
  return out;
}

}  // namespace

std::vector<std::vector<Element>> maximal_cliques(const Graph& g) {
  std::vector<std::vector<Element>> out;
  for (auto m : clique_masks(g)) out.push_back(members(m));
  std::sort(out.begin(), out.end());
  return out;
}

bool is_2cc_coloring(const Graph& g, const std::vector<bool>& red) {
  if (red.size() != g.node_count()) return false;
  for (const auto& clique : maximal_cliques(g)) {
    if (clique.size() < 2) continue;
    bool has_red = false;
    bool has_blue = false;
    for (Element v : clique) (red[v] ? has_red : has_blue) = true;
    if (!has_red || !has_blue) return false;
  }
  return true;
}

TwoCliqueColoring decide_2cc(const Graph& g, Element budget) {
  const Element n = g.node_count();
  if (n > budget) {
    throw BudgetExceeded("2-clique-coloring search over " + std::to_string(n) +
                         " nodes exceeds the budget of " + std::to_string(budget));
  }
  TwoCliqueColoring result;
  if (n == 0) {
    result.accepted = true;
    return result;
  }
  // Cliques that must be bichromatic, grouped by their largest vertex.
  std::vector<std::vector<std::uint64_t>> closing(n);
  for (auto m : clique_masks(g)) {
    if (std::popcount(m) < 2) continue;
    closing[63 - std::countl_zero(m)].push_back(m);
  }
  // Depth-first over colorings with vertex 0 red; colors of 0..v-1 in `red`.
  std::uint64_t red = 1;
  std::vector<int> choice(n, 0);
  Element v = 0;
  auto consistent = [&](Element at) {
    for (auto c : closing[at]) {
      const std::uint64_t r = red & c;
      if (r == 0 || r == c) return false;
    }
    return true;
  };
  // choice[v]: 0 = not yet tried, 1 = tried red, 2 = tried blue.
  while (true) {
    if (v == n) {
      result.accepted = true;
      break;
    }
    const std::uint64_t bit = std::uint64_t{1} << v;
    bool placed = false;
    while (choice[v] < 2 && !placed) {
      const int c = choice[v]++;
      if (v == 0 && c == 1) break;  // vertex 0 is always red
      if (c == 0) {
        red |= bit;
      } else {
        red &= ~bit;
      }
      placed = consistent(v);
    }
    if (placed) {
      ++v;
      continue;
    }
    choice[v] = 0;
    red &= ~bit;
    if (v == 0) break;
    --v;
  }
  if (result.accepted) {
    result.red = to_assignment(red, n);
    if (!is_2cc_coloring(g, result.red)) {
      throw std::logic_error("2-clique-coloring witness failed verification");
    }
  }
  return result;
}

bool decide_2cc_n(const Graph& g, Element n, Element budget) {
  return g.node_count() < n || decide_2cc(g, budget).accepted;
}

std::optional<std::set<Element>> vcsat_witness(const VcsatInstance& inst, Element budget) {
  const Element n = inst.var_count;
  check_budget(n, budget);
  if (inst.values.size() != n) throw ValidationError("one value per variable is required");
  Qbf2Dnf q{n, {}, inst.implicants};
  for (std::uint64_t subset = 0; subset < (std::uint64_t{1} << n); ++subset) {
    std::uint64_t total = 0;
    bool over = false;
    for (Element v = 0; v < n && !over; ++v) {
      if ((subset >> v) & 1u) {
        total += inst.values[v];
        over = total > inst.cost || total < inst.values[v];
      }
    }
    if (over) continue;
    q.existential.clear();
    for (Element v : members(subset)) q.existential.insert(v);
    if (decide_qsat2(q, budget)) return q.existential;
  }
  return std::nullopt;
}

bool decide_vcsat(const VcsatInstance& inst, Element budget) {
  return vcsat_witness(inst, budget).has_value();
}

}  // namespace fopkit
