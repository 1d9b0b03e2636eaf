#pragma once

// Brute-force evaluation of first-order and second-order formulas over finite
// structures.
//
// A numeric literal that does not denote a universe element (say 3 in a
// size-2 structure) makes every atom it occurs in false.

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "fopkit/formula.hpp"
#include "fopkit/structure.hpp"

namespace fopkit {

// Relation variable bound by a second-order quantifier.
struct SoVariable {
  std::string name;
  int arity = 1;
};

// A source-vocabulary literal left over by residual evaluation.
struct ResidualLiteral {
  std::size_t relation = 0;
  Tuple args;
  bool positive = true;

  friend bool operator==(const ResidualLiteral&, const ResidualLiteral&) = default;
};

// Value of a formula once every numeric atom is decided but the source
// relations are still unknown.
struct Residual {
  enum class Kind { False, True, Literal, Complex };
  Kind kind = Kind::False;
  ResidualLiteral literal;

  static Residual constant(bool v) { return {v ? Kind::True : Kind::False, {}}; }
};

// A formula compiled against a vocabulary. Free variables are bound to slots
// 0..free_count-1 in the order given; each quantifier gets a further slot.
// Relation variable i reads bits [64*i, 64*i + n^arity) of the valuation
// words, tuples in lexicographic order.
class CompiledFormula {
 public:
  CompiledFormula(const Formula& f, const Vocabulary& vocab,
                  std::vector<std::string> free_variables = {},
                  std::vector<SoVariable> so_variables = {});

  std::size_t free_count() const { return free_.size(); }
  std::size_t slot_count() const { return slot_count_; }
  const std::vector<std::string>& free_variables() const { return free_; }
  const std::vector<SoVariable>& so_variables() const { return so_; }

  // `slots` must hold slot_count() entries; the first free_count() are read,
  // the rest are scratch.
  bool eval(const Structure& a, std::span<Element> slots,
            std::span<const std::uint64_t> so_bits = {}) const;

  // Convenience form taking only the free-variable values.
  bool operator()(const Structure& a, std::span<const Element> free_values,
                  std::span<const std::uint64_t> so_bits = {}) const;

  // Evaluates numeric atoms and equalities for a universe of size n and
  // keeps source atoms symbolic.
  Residual residual(Element n, std::span<Element> slots) const;

  enum class Op : std::uint8_t {
    True, False, Not, And, Or, Implies, Iff, Xor, Forall, Exists, Rel, So, Num, Eq
  };
  enum class TermOp : std::uint8_t { Slot, Number, Max, Constant };
  struct CTerm {
    TermOp op;
    std::uint32_t value;
  };
  struct Node {
    Op op;
    NumericRelation numeric = NumericRelation::Le;
    std::uint32_t index = 0;  // relation, so-variable or quantifier slot
    std::uint32_t first = 0;  // first child (in children_) or term
    std::uint32_t count = 0;
  };

 private:
  std::uint32_t compile(const Formula& f, const Vocabulary& vocab,
                        std::vector<std::pair<std::string, std::uint32_t>>& scope);
  bool run(std::uint32_t node, const Structure& a, Element* slots,
           const std::uint64_t* so) const;
  Residual run_residual(std::uint32_t node, Element n, Element* slots) const;
  // Resolves the terms of an atom; false when a literal is out of range.
  bool resolve(const Node& node, Element n, const Element* slots, const Structure* a,
               Element* out) const;

  std::vector<std::string> free_;
  std::vector<SoVariable> so_;
  std::vector<Node> nodes_;
  std::vector<std::uint32_t> children_;
  std::vector<CTerm> terms_;
  std::uint32_t root_ = 0;
  std::size_t slot_count_ = 0;
};

// Default cap, in bits, on the relation valuations of one second-order block
// (a block of b bits is enumerated in 2^b steps).
inline constexpr int kDefaultSoBudgetBits = 24;

using Environment = std::map<std::string, Element>;

// Tarskian truth of a first-order formula; free variables must be bound by env.
bool eval_fo(const Structure& a, const Formula& f, const Environment& env = {});

// Second-order prefix of a sentence: the quantified relation variables in
// order, and the first-order matrix below them.
struct SoPrefix {
  struct Entry {
    bool existential;
    SoVariable variable;
  };
  std::vector<Entry> entries;
  Formula matrix;
};
SoPrefix split_so_prefix(const Formula& f);

// Evaluates a sentence with any second-order prefix by enumerating relation
// valuations in lexicographic order, outer quantifiers first, with early exit.
bool eval_so(const Structure& a, const Formula& f, int budget_bits = kDefaultSoBudgetBits);

// As eval_so, but the prefix must be an existential block followed by a
// universal block (either may be empty).
bool eval_so2(const Structure& a, const Formula& f, int budget_bits = kDefaultSoBudgetBits);

// As eval_so, but the prefix must be universal-then-existential.
bool eval_pi2(const Structure& a, const Formula& f, int budget_bits = kDefaultSoBudgetBits);

}  // namespace fopkit
