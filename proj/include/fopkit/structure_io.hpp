#pragma once

// Line-oriented text format for vocabularies and structures:
//
//   vocab <name> { <Rel>/<arity> ... ; const <c> ... }
//   structure <name> : <vocabname> { size = <n>  <Rel> = { (t,...) ... }  <c> = <v> }
//
// '#' starts a comment. The vocabularies graph, dnf, cnf and vcsat are always
// in scope; a file may re-declare them only identically.

#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fopkit/structure.hpp"

namespace fopkit {

struct StructureFile {
  std::map<std::string, VocabularyPtr> vocabularies;
  std::vector<std::pair<std::string, Structure>> structures;
};

StructureFile parse_structure_file(std::string_view text);

// The single structure in `text`; ParseError if there is none.
Structure parse_structure(std::string_view text);

std::string serialize_vocabulary(const Vocabulary& vocab);

// Canonical form: the vocabulary declaration followed by the structure.
// parse_structure(serialize_structure(A)) == A.
std::string serialize_structure(const Structure& structure, std::string_view name = "A");

}  // namespace fopkit
