#pragma once

// Sentences of the shape
//   exists2 S1/a1 ... Sg/ag forall2 T1/b1 ... Th/bh exists x1 ... xc  D1 | ... | Dr
// where each implicant Di is a conjunction of literals with at most one
// literal over the structure vocabulary.

#include <string>
#include <vector>

#include "fopkit/error.hpp"
#include "fopkit/eval.hpp"
#include "fopkit/formula.hpp"

namespace fopkit {

struct MatrixLiteral {
  enum class Kind { Existential, Universal, Sigma, Numeric };
  Kind kind = Kind::Numeric;
  bool positive = true;
  Formula atom;           // the unnegated atom
  std::size_t index = 0;  // position in the existential / universal list
};

struct NormalFormSentence {
  VocabularyPtr vocab;
  std::vector<SoVariable> existential;
  std::vector<SoVariable> universal;
  std::vector<std::string> fo_variables;
  std::vector<std::vector<MatrixLiteral>> implicants;

  std::size_t g() const { return existential.size(); }
  std::size_t h() const { return universal.size(); }
  std::size_t c() const { return fo_variables.size(); }
  std::size_t r() const { return implicants.size(); }
};

class NormalFormError : public ValidationError {
 public:
  enum class Reason { NotSentence, PrefixShape, NotDnf, MultipleSigmaLiterals };

  NormalFormError(Reason reason, const std::string& message, const Formula& node)
      : ValidationError(message + ": " + to_string(node)), reason_(reason), node_(node) {}

  Reason reason() const { return reason_; }
  const Formula& node() const { return node_; }

 private:
  Reason reason_;
  Formula node_;
};

NormalFormSentence validate_normal_form(const Formula& sentence, const VocabularyPtr& vocab);

// Rebuilds the sentence from its parts.
Formula assemble(const NormalFormSentence& nf);

}  // namespace fopkit
