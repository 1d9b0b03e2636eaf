#pragma once

// Immutable formula AST for first- and second-order logic over a relational
// vocabulary with the built-in numeric symbols.
//
// Text grammar (ASCII):
//   sentence := soq* fo
//   soq      := ("exists2"|"forall2") NAME "/" NAT
//   fo       := ("forall"|"exists") VAR fo | iff
//   iff := imp ("<->" imp)*   imp := xr ("->" xr)*   xr := or ("(+)" or)*
//   or  := and ("|" and)*     and := un ("&" un)*
//   un  := "!" un | "(" fo ")" | atom
//   atom := NAME "(" term ("," term)* ")" | term "=" term | term "<=" term
//   term := VAR | "0" | "1" | "max" | NAT
// Also accepted: "true", "false", "t != u", quantifiers in operand position.

#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "fopkit/structure.hpp"

namespace fopkit {

enum class TermKind { Variable, Number, Max, Constant };

struct Term {
  TermKind kind = TermKind::Number;
  std::string name;   // Variable or Constant
  Element value = 0;  // Number

  static Term var(std::string name) { return {TermKind::Variable, std::move(name), 0}; }
  static Term num(Element v) { return {TermKind::Number, {}, v}; }
  static Term max() { return {TermKind::Max, {}, 0}; }
  static Term constant(std::string name) { return {TermKind::Constant, std::move(name), 0}; }

  bool is_numeric() const { return kind != TermKind::Constant; }

  friend bool operator==(const Term&, const Term&) = default;
};

enum class FormulaKind {
  True,
  False,
  Not,
  And,
  Or,
  Implies,
  Iff,
  Xor,
  Forall,
  Exists,
  SoExists,
  SoForall,
  Relation,  // declared vocabulary relation
  SoAtom,    // second-order relation variable
  Numeric,   // <=, BIT, PLUS, TIMES, SUC
  Equal,
};

class Formula;

struct FormulaNode {
  FormulaKind kind = FormulaKind::True;
  std::vector<Formula> children;
  std::string name;  // bound variable, relation or relation-variable name
  int arity = 0;     // relation-variable arity of a second-order quantifier
  NumericRelation numeric = NumericRelation::Le;
  std::vector<Term> terms;
};

class Formula {
 public:
  Formula();  // true

  FormulaKind kind() const { return node_->kind; }
  const std::vector<Formula>& children() const { return node_->children; }
  const Formula& child(std::size_t i = 0) const { return node_->children[i]; }
  const std::string& name() const { return node_->name; }
  int arity() const { return node_->arity; }
  NumericRelation numeric() const { return node_->numeric; }
  const std::vector<Term>& terms() const { return node_->terms; }

  bool is_atom() const;
  bool is_quantifier() const;
  bool is_so_quantifier() const;
  // An atom or a negated atom.
  bool is_literal() const;

  friend bool operator==(const Formula& a, const Formula& b);

  // Builders. conj/disj flatten nothing, but collapse the empty and singleton
  // cases (empty conjunction is true, empty disjunction false).
  static Formula truth(bool value);
  static Formula negate(Formula f);
  static Formula conj(std::vector<Formula> parts);
  static Formula disj(std::vector<Formula> parts);
  static Formula implies(Formula a, Formula b);
  static Formula iff(Formula a, Formula b);
  static Formula xor_of(Formula a, Formula b);
  static Formula forall(std::string var, Formula body);
  static Formula exists(std::string var, Formula body);
  static Formula so_exists(std::string rel, int arity, Formula body);
  static Formula so_forall(std::string rel, int arity, Formula body);
  static Formula relation(std::string rel, std::vector<Term> args);
  static Formula so_atom(std::string rel, std::vector<Term> args);
  static Formula numeric_atom(NumericRelation rel, std::vector<Term> args);
  static Formula equal(Term a, Term b);
  static Formula not_equal(Term a, Term b) { return negate(equal(std::move(a), std::move(b))); }

 private:
  explicit Formula(std::shared_ptr<const FormulaNode> node) : node_(std::move(node)) {}
  static Formula make(FormulaNode node);

  std::shared_ptr<const FormulaNode> node_;
};

// Parses a formula; relation names resolve against `vocab` (may be null) and
// the enclosing second-order quantifiers. Free first-order variables are
// allowed; use free_variables to check for sentences.
Formula parse_formula(std::string_view text, const VocabularyPtr& vocab);

std::string to_string(const Formula& f);

std::set<std::string> free_variables(const Formula& f);
bool is_sentence(const Formula& f);

// Replaces free occurrences of first-order variables by terms. Bound
// occurrences are left alone.
Formula substitute(const Formula& f, const std::map<std::string, Term>& replacement);

// True iff every atom is numeric or an equality between numeric terms.
bool is_numeric(const Formula& f);

// Splits a top-level disjunction / conjunction into its operands,
// flattening nested ones.
std::vector<Formula> disjuncts(const Formula& f);
std::vector<Formula> conjuncts(const Formula& f);

}  // namespace fopkit
