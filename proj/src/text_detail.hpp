#pragma once

#include <map>
#include <string>

#include "fopkit/formula.hpp"
#include "fopkit/structure.hpp"
#include "lexer.hpp"

namespace fopkit::detail {

// Vocabularies visible to a parse: the built-ins plus file declarations.
class VocabularyScope {
 public:
  VocabularyPtr find(const std::string& name) const;
  // Adds a declaration; re-declaring an existing name must be identical.
  void declare(const VocabularyPtr& vocab, const Token& at);
  const std::map<std::string, VocabularyPtr>& declared() const { return declared_; }

 private:
  std::map<std::string, VocabularyPtr> declared_;
};

// Parses `vocab <name> { ... }` with the stream positioned at 'vocab'.
VocabularyPtr parse_vocab_decl(TokenStream& ts);

// Parses `structure <name> : <vocab> { ... }` positioned at 'structure'.
std::pair<std::string, Structure> parse_structure_decl(TokenStream& ts,
                                                       const VocabularyScope& scope);

// Parses a formula and stops before the first token that cannot continue it
// (for instance ';' or '}' in a fop definition).
Formula parse_formula_stream(TokenStream& ts, const VocabularyPtr& vocab);

}  // namespace fopkit::detail
