#pragma once

// First-order queries I = <phi0, phi_1..phi_r, psi_1..psi_s> of arity k.
//
// I(A) has as universe the k-tuples u with A |= phi0(u), numbered in
// lexicographic order. Target relation R_i of arity a holds of
// (u_1..u_a) iff A |= phi_i(u_1..u_a); target constant c_j is the unique
// universe tuple satisfying psi_j.
//
// Free variables: target position p uses letter "xyzwuv"[p] with indices
// 1..k, so phi0 speaks about x1..xk and a binary relation about x1..xk,
// y1..yk.
//
// Text form:
//   fop <name> : <src> -> <dst> { arity = k ; universe = f ; R = f ; const c = f }

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fopkit/eval.hpp"
#include "fopkit/formula.hpp"
#include "fopkit/structure.hpp"

namespace fopkit {

struct FirstOrderQuery {
  std::string name;
  VocabularyPtr source;
  VocabularyPtr target;
  int arity = 1;
  Formula universe;
  std::vector<Formula> relations;  // one per target relation, in order
  std::vector<Formula> constants;  // one per target constant, in order
};

inline constexpr int kMaxTargetArity = 6;

// Name of coordinate `coordinate` (0-based) of target position `position`.
std::string query_variable(int position, int coordinate);
// The k*positions free variables of a formula defining a relation of arity
// `positions`.
std::vector<std::string> query_variables(int arity, int positions);

// Checks arities, vocabularies and free variables; throws ValidationError.
void check_query(const FirstOrderQuery& q);

Structure apply_query(const FirstOrderQuery& q, const Structure& a);

// Equals apply_query(j, apply_query(i, a)).
Structure compose_apply(const FirstOrderQuery& i, const FirstOrderQuery& j, const Structure& a);

// A query specialised to one source size: the universe is fixed when phi0 is
// numeric, and each output tuple of each relation is reduced to a constant,
// a single source literal, or left for full evaluation.
class ProjectionPlan {
 public:
  ProjectionPlan(const FirstOrderQuery& q, Element source_size);

  Element source_size() const { return n_; }
  // Size of every image, or nullopt when phi0 mentions the source relations.
  std::optional<Element> image_size() const;
  // Number of output tuples that need full evaluation.
  std::size_t complex_entries() const { return complex_; }

  Structure apply(const Structure& a) const;

 private:
  struct Entry {
    Residual::Kind kind;
    bool positive;
    std::uint32_t relation;
    std::size_t index;  // position of the literal's tuple in its relation table
  };

  FirstOrderQuery q_;
  Element n_;
  bool fixed_universe_ = false;
  std::vector<Tuple> universe_;
  std::vector<std::vector<Entry>> tables_;
  std::vector<CompiledFormula> compiled_;
  std::size_t complex_ = 0;
};

struct ProjectionViolation {
  std::string formula;  // "universe", a relation name or "const c"
  std::string message;
  std::optional<Element> size;  // universe size of an exclusivity witness
  Tuple witness;                // values of the formula's free variables
};

struct ProjectionReport {
  bool is_projection = false;
  bool syntactic_ok = false;
  bool exclusivity_ok = false;
  std::vector<ProjectionViolation> violations;
};

// Syntactic shape plus exclusivity of the numeric guards, checked on every
// argument tuple for universe sizes 1..size_bound.
ProjectionReport validate_projection(const FirstOrderQuery& q, Element size_bound = 8);

FirstOrderQuery parse_fop(std::string_view text);
std::string serialize_fop(const FirstOrderQuery& q);

}  // namespace fopkit
