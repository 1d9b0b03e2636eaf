#pragma once

// Boolean and graph problems with their structure encodings and exhaustive
// deciders.
//
// Encodings over one universe {0..n-1} that indexes both implicants (or
// clauses) and variables:
//   dnf   E(v): v existential   Q(i,v): v positive in implicant i   M(i,v): negative
//   cnf   E(v): v existential   P(i,v): v positive in clause i      N(i,v): negative
//   graph E(u,v): symmetric, loop-free
//   vcsat P, N as in cnf for a DNF matrix; V(v,j): bit j of the value of v;
//         K(j): bit j of the cost
// Decoding is total: every universe element is an implicant or clause, so a
// structure with n elements decodes to n of them. An empty implicant is true
// and an empty clause false.

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fopkit/structure.hpp"

namespace fopkit {

// A conjunction (in a DNF) or a disjunction (in a CNF) of literals.
struct BoolTerm {
  std::set<Element> positive;
  std::set<Element> negative;

  bool contradictory() const;
  friend bool operator==(const BoolTerm&, const BoolTerm&) = default;
};

struct Qbf2Dnf {
  Element var_count = 0;
  std::set<Element> existential;
  std::vector<BoolTerm> implicants;

  friend bool operator==(const Qbf2Dnf&, const Qbf2Dnf&) = default;
};

struct Qbf2Cnf {
  Element var_count = 0;
  std::set<Element> existential;
  std::vector<BoolTerm> clauses;

  friend bool operator==(const Qbf2Cnf&, const Qbf2Cnf&) = default;
};

class Graph {
 public:
  explicit Graph(Element node_count = 0) : n_(node_count) {}
  Graph(Element node_count, const std::vector<std::pair<Element, Element>>& edges);

  Element node_count() const { return n_; }
  // Unordered pairs stored as (min, max).
  const std::set<std::pair<Element, Element>>& edges() const { return edges_; }
  bool adjacent(Element u, Element v) const;
  // Throws ValidationError on loops and out-of-range nodes.
  void add_edge(Element u, Element v);
  void remove_edge(Element u, Element v);

  static Graph complete(Element n);
  static Graph cycle(Element n);
  static Graph path(Element n);

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  Element n_;
  std::set<std::pair<Element, Element>> edges_;
};

struct VcsatInstance {
  Element var_count = 0;
  std::vector<BoolTerm> implicants;
  std::vector<std::uint64_t> values;
  std::uint64_t cost = 0;

  friend bool operator==(const VcsatInstance&, const VcsatInstance&) = default;
};

Structure encode_dnf(const Qbf2Dnf& inst);
Qbf2Dnf decode_dnf(const Structure& a);
Structure encode_cnf(const Qbf2Cnf& inst);
Qbf2Cnf decode_cnf(const Structure& a);
Structure encode_graph(const Graph& g);
// Symmetrizes E; loops are dropped with a message appended to `warnings`.
Graph decode_graph(const Structure& a, std::vector<std::string>* warnings = nullptr);
Structure encode_vcsat(const VcsatInstance& inst);
VcsatInstance decode_vcsat(const Structure& a);

// Pads an instance to as many terms as variables so that its structure
// encoding keeps its meaning: term 0 is repeated (a contradictory implicant
// or a tautological clause when there is none) and missing variables are
// added as unused universal ones.
Qbf2Dnf square_dnf(const Qbf2Dnf& inst);
Qbf2Cnf square_cnf(const Qbf2Cnf& inst);

// Cap on the number of variables a boolean decider enumerates.
inline constexpr Element kDefaultVarBudget = 24;
// Cap on the nodes of a coloring search (2^n colorings).
inline constexpr Element kDefaultColoringBudget = 20;

// An existential assignment (indexed by variable; universal entries false)
// under which the DNF holds for every universal assignment.
std::optional<std::vector<bool>> qsat2_witness(const Qbf2Dnf& inst,
                                               Element budget = kDefaultVarBudget);
bool decide_qsat2(const Qbf2Dnf& inst, Element budget = kDefaultVarBudget);
bool decide_qunsat2(const Qbf2Cnf& inst, Element budget = kDefaultVarBudget);
// An existential assignment admitting exactly one satisfying completion.
std::optional<std::vector<bool>> unique_ext_witness(const Qbf2Cnf& inst,
                                                    Element budget = kDefaultVarBudget);
bool decide_unique_ext(const Qbf2Cnf& inst, Element budget = kDefaultVarBudget);
// Number of assignments to all variables satisfying the CNF.
std::uint64_t count_models(const Qbf2Cnf& inst, Element budget = kDefaultVarBudget);

// All inclusion-maximal cliques, each sorted, in lexicographic order.
std::vector<std::vector<Element>> maximal_cliques(const Graph& g);

struct TwoCliqueColoring {
  bool accepted = false;
  std::vector<bool> red;  // the witness when accepted
};

// 2-colorings under which every maximal clique with at least two nodes has
// both colors.
TwoCliqueColoring decide_2cc(const Graph& g, Element budget = kDefaultColoringBudget);
bool decide_2cc_n(const Graph& g, Element n, Element budget = kDefaultColoringBudget);
bool is_2cc_coloring(const Graph& g, const std::vector<bool>& red);

// Some variable set of total value at most the cost makes the formula a
// positive QSat2 instance with that set existential.
std::optional<std::set<Element>> vcsat_witness(const VcsatInstance& inst,
                                               Element budget = kDefaultVarBudget);
bool decide_vcsat(const VcsatInstance& inst, Element budget = kDefaultVarBudget);

// Text shorthands:
//   graph <name> { n = k ; edges = { (u,v) ... } }
//   qdnf [<name>] { vars = n ; E = { i ... } ; imp = (+0 -1)(+2) ... }
//   qcnf [<name>] { vars = n ; E = { i ... } ; cls = (+0 -1)(+2) ... }
//   vcsat [<name>] { vars = n ; imp = ... ; v = [a, b, ...] ; K = k }
Graph parse_graph(std::string_view text);
Qbf2Dnf parse_qdnf(std::string_view text);
Qbf2Cnf parse_qcnf(std::string_view text);
VcsatInstance parse_vcsat(std::string_view text);
std::string serialize_graph(const Graph& g, std::string_view name = "G");
std::string serialize_qdnf(const Qbf2Dnf& inst);
std::string serialize_qcnf(const Qbf2Cnf& inst);
std::string serialize_vcsat(const VcsatInstance& inst);

}  // namespace fopkit
