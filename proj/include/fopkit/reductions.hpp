#pragma once

// The reductions between the problems of problems.hpp, each as a first-order
// query plus (where one exists) an instance-level construction, and a harness
// that checks membership preservation exhaustively.

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "fopkit/formula.hpp"
#include "fopkit/normal_form.hpp"
#include "fopkit/problems.hpp"
#include "fopkit/query.hpp"
#include "fopkit/structure.hpp"

namespace fopkit {

enum class Fidelity { Verbatim, Corrected };

std::string_view fidelity_name(Fidelity f);
Fidelity parse_fidelity(std::string_view name);

// ---------------------------------------------------------------------------
// Generic compilation of a normal-form sentence into QSat2.
//
// Arity k = L + c with L = max(1, ceil(log2(max(g+h, r)))). The first L
// coordinates hold a binary index (least significant bit first), the last c
// a tuple of the source universe.
//   variable (bin(l), d, 0..0)  ground atom S_l(d) (universal T_j has l = g+j)
//   implicant (bin(i), d)       D_i with its first-order variables set to d
// An implicant whose numeric or structure literal fails, and every tuple that
// does not name an implicant, gets both Q and M on the all-zero variable, so
// it decodes to a contradictory (false) implicant.
FirstOrderQuery generic_to_qsat2(const NormalFormSentence& nf);

// exists2 S/1 forall2 T/1 exists x1 exists x2 ((S(x1) & !T(x2) & E(x1,x2)) | (!S(x1) & T(x1)))
Formula toy_sentence();

// exists2 R/1 forall2 C/1: C is not a maximal clique with two or more nodes,
// or C meets both R and its complement. Defines 2CC on symmetric loopless E.
Formula two_cc_sentence();

// ---------------------------------------------------------------------------
// QSat2 -> QUnsat2: negate the DNF into a CNF.
FirstOrderQuery qsat2_to_qunsat2_query();
Qbf2Cnf negate_dnf(const Qbf2Dnf& inst);

// ---------------------------------------------------------------------------
// QUnsat2 -> unique extension, arity 2. (0,y) is variable y, (1,0) the new
// variable z. Clause (0,i) is clause i plus z; clause (1,y) is (!z | y) for
// universal y and (!y | y) for existential y.
// Verbatim gives P and N a shared last disjunct, so their guards overlap and
// the query is not a projection; Corrected follows the clause list above.
FirstOrderQuery qunsat2_to_unique_query(Fidelity fidelity = Fidelity::Corrected);
// The instance-level form of the corrected query. Needs one clause per
// variable, as decoded from a structure.
Qbf2Cnf unique_extension_map(const Qbf2Cnf& inst);
// (z | phi) & (!z | y_1) & ... & (!z | y_m) with z = var_count and z added
// to each clause; phi is unsatisfiable iff the result has exactly one model.
Qbf2Cnf unique_sat_transform(const Qbf2Cnf& inst);

// ---------------------------------------------------------------------------
// QSat2 -> 2CC, arity 4. Node (i,j,k,v) has kind ijk read as a 3-bit number
// (i most significant): 1 x, 2 x', 3 ~x', 4 ~x, 5 p, 6 p'. Node index is
// (kind-1)*n + v.
FirstOrderQuery qsat2_to_2cc_query();
// The graph for an instance with as many implicants as variables. Variable x
// is adjacent to implicant p unless !x occurs in p, and ~x unless x occurs.
Graph two_cc_graph(const Qbf2Dnf& inst);

// ---------------------------------------------------------------------------
// Padding a graph problem up to the threshold n.
struct PaddingShape {
  Element copies = 2;  // least k with 2k > n
  int code_bits = 1;   // max(1, ceil(log2(copies)))
  int arity = 2;       // code_bits + 1
};
PaddingShape padding_shape(Element n);
// Copy j lives at the tuples whose first code_bits coordinates spell j with
// the most significant bit first; the last coordinate is the node.
FirstOrderQuery padding_query(Element n);
Graph pad_graph(const Graph& g, Element n);

// exists x1..xl forall y (distinct x's & y is one of them).
Formula cardinality_sentence(Element l);
// phi | cardinality 1 | ... | cardinality n-1.
Formula pad_sentence(const Formula& phi, Element n);

// ---------------------------------------------------------------------------
// QSat2 -> VCSat. Existential variables cost 1, universal ones 2^n - 1, and
// the budget is 2^(n-1).
VcsatInstance qsat2_to_vcsat(const Qbf2Dnf& inst);
FirstOrderQuery qsat2_to_vcsat_query();
// Every value is 1 or 2^n - 1:
//   forall x ((forall y (V(x,y) <-> y = 0)) (+) (forall y V(x,y)))
Formula vcsat_value_sentence();
// forall x forall y ((V(x,y) <-> y = 0) (+) V(x,y)), which no structure
// satisfies: the operands differ exactly when y != 0.
Formula vcsat_value_sentence_pointwise();
// forall x (K(x) <-> x = max)
Formula vcsat_cost_sentence();

// ---------------------------------------------------------------------------
// Registry

using StructureMap = std::function<Structure(const Structure&)>;
using StructureOracle = std::function<bool(const Structure&)>;

// Problem tags: qsat2, qunsat2, unique, 2cc, 2cc-c, 2cc-n:<n>, vcsat.
StructureOracle problem_oracle(std::string_view tag);
VocabularyPtr problem_vocabulary(std::string_view tag);

struct NamedReduction {
  std::string name;
  std::string source_problem;
  std::string target_problem;
  FirstOrderQuery query;
  StructureMap direct_map;  // may be empty
  Fidelity fidelity = Fidelity::Corrected;
  StructureOracle source_oracle;
  StructureOracle target_oracle;
};

// gen-qsat2 (on the toy sentence), qsat2-qunsat2, qunsat2-unique, qsat2-2cc,
// pad-2cc:<n>, qsat2-vcsat.
std::vector<std::string> reduction_names();
NamedReduction named_reduction(std::string_view name, Fidelity fidelity = Fidelity::Corrected);
// The generic compilation of a sentence, checked against eval_so2.
NamedReduction sentence_reduction(const Formula& sentence, const VocabularyPtr& vocab,
                                  std::string name = "gen-qsat2");

// ---------------------------------------------------------------------------
// Verification

struct Counterexample {
  Element size = 0;
  std::uint64_t index = 0;  // position in the StructureSpace of that size
  Structure input;
  bool source = false;
  bool target = false;
};

struct VerificationRow {
  Element size;
  std::uint64_t index;
  bool source;
  bool target;
};

struct VerificationReport {
  std::vector<Element> sizes;
  std::vector<std::uint64_t> instances_per_size;
  std::uint64_t instances = 0;
  std::uint64_t agreements = 0;
  std::uint64_t counterexample_count = 0;
  std::vector<Counterexample> counterexamples;  // the first few, in order

  bool ok() const { return counterexample_count == 0; }
};

struct VerifyOptions {
  std::uint64_t budget = kDefaultStructureBudget;  // per size
  std::size_t keep = 16;                           // counterexamples stored
  bool use_direct_map = false;
  std::function<void(const VerificationRow&)> on_row;
};

VerificationReport verify_reduction(const VocabularyPtr& source, const StructureMap& map,
                                    const StructureOracle& source_oracle,
                                    const StructureOracle& target_oracle,
                                    const std::vector<Element>& sizes,
                                    const VerifyOptions& options = {});
// Applies the query through a ProjectionPlan, or the direct map on request.
VerificationReport verify_reduction(const NamedReduction& red, const std::vector<Element>& sizes,
                                    const VerifyOptions& options = {});

struct DirectMapReport {
  std::uint64_t instances = 0;
  std::uint64_t mismatches = 0;
  std::optional<Structure> first_mismatch;
};

// Compares apply_query with the direct map on every source structure.
DirectMapReport check_direct_map(const NamedReduction& red, const std::vector<Element>& sizes,
                                 std::uint64_t budget = kDefaultStructureBudget);

}  // namespace fopkit
