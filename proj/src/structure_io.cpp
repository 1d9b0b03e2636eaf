#include "fopkit/structure_io.hpp"

#include <algorithm>
#include <sstream>

#include "text_detail.hpp"

namespace fopkit {

namespace detail {

VocabularyPtr VocabularyScope::find(const std::string& name) const {
  auto it = declared_.find(name);
  if (it != declared_.end()) return it->second;
  return vocab::builtin(name);
}

void VocabularyScope::declare(const VocabularyPtr& vocab, const Token& at) {
  if (auto existing = find(vocab->name()); existing && !(*existing == *vocab)) {
    throw ParseError("vocabulary '" + vocab->name() + "' redeclared differently", at.line,
                     at.column);
  }
  declared_[vocab->name()] = vocab;
}

VocabularyPtr parse_vocab_decl(TokenStream& ts) {
  const Token start = ts.expect("vocab");
  std::string name = ts.expect_ident("vocabulary name");
  ts.expect("{");
  std::vector<RelationSymbol> relations;
  std::vector<std::string> constants;
  bool in_constants = false;
  while (!ts.accept("}")) {
    if (ts.accept(";")) continue;
    if (ts.accept("const")) {
      in_constants = true;
      continue;
    }
    std::string symbol = ts.expect_ident("symbol name");
    if (in_constants) {
      constants.push_back(symbol);
      ts.accept(",");
      continue;
    }
    ts.expect("/");
    auto arity = ts.expect_number("arity");
    relations.push_back({symbol, static_cast<int>(arity)});
    ts.accept(",");
  }
  try {
    return make_vocabulary(name, std::move(relations), std::move(constants));
  } catch (const ValidationError& e) {
    throw ParseError(e.what(), start.line, start.column);
  }
}

std::pair<std::string, Structure> parse_structure_decl(TokenStream& ts,
                                                       const VocabularyScope& scope) {
  const Token start = ts.expect("structure");
  std::string name = ts.expect_ident("structure name");
  ts.expect(":");
  const Token vocab_tok = ts.peek();
  std::string vocab_name = ts.expect_ident("vocabulary name");
  VocabularyPtr vocab = scope.find(vocab_name);
  if (!vocab) {
    throw ParseError("unknown vocabulary '" + vocab_name + "'", vocab_tok.line, vocab_tok.column);
  }
  ts.expect("{");
  std::optional<Element> size;
  std::map<std::string, std::vector<Tuple>> relations;
  std::map<std::string, Element> constants;
  // Largest element of each tuple or constant, checked once the size is known.
  std::vector<std::pair<Token, Element>> elements;
  while (!ts.accept("}")) {
    if (ts.accept(";")) continue;
    const Token key = ts.peek();
    std::string symbol = ts.expect_ident("'size', a relation or a constant");
    ts.expect("=");
    if (symbol == "size") {
      size = static_cast<Element>(ts.expect_number("universe size"));
      continue;
    }
    if (auto rel = vocab->find_relation(symbol)) {
      if (relations.count(symbol)) {
        throw ParseError("relation '" + symbol + "' given twice", key.line, key.column);
      }
      auto& tuples = relations[symbol];
      ts.expect("{");
      while (!ts.accept("}")) {
        const Token tuple_tok = ts.peek();
        ts.expect("(");
        Tuple t;
        do {
          t.push_back(static_cast<Element>(ts.expect_number("tuple element")));
        } while (ts.accept(","));
        ts.expect(")");
        if (t.size() != static_cast<std::size_t>(vocab->relations()[*rel].arity)) {
          throw ParseError("arity mismatch in '" + symbol + "'", tuple_tok.line,
                           tuple_tok.column);
        }
        elements.push_back({tuple_tok, *std::max_element(t.begin(), t.end())});
        tuples.push_back(std::move(t));
        ts.accept(",");
      }
      continue;
    }
    if (vocab->find_constant(symbol)) {
      if (constants.count(symbol)) {
        throw ParseError("constant '" + symbol + "' given twice", key.line, key.column);
      }
      constants[symbol] = static_cast<Element>(ts.expect_number("constant value"));
      elements.push_back({key, constants[symbol]});
      continue;
    }
    throw ParseError("'" + symbol + "' is not declared in vocabulary " + vocab_name, key.line,
                     key.column);
  }
  if (!size) throw ParseError("structure '" + name + "' has no size", start.line, start.column);
  for (const auto& [tok, value] : elements) {
    if (value >= *size) {
      throw ParseError("element " + std::to_string(value) + " is outside a universe of size " +
                           std::to_string(*size),
                       tok.line, tok.column);
    }
  }
  for (const auto& r : vocab->relations()) relations.try_emplace(r.name);
  try {
    return {name, make_structure(vocab, *size, relations, constants)};
  } catch (const ValidationError& e) {
    throw ParseError(e.what(), start.line, start.column);
  }
}

}  // namespace detail

StructureFile parse_structure_file(std::string_view text) {
  detail::TokenStream ts(text);
  detail::VocabularyScope scope;
  StructureFile file;
  while (!ts.at_end()) {
    if (ts.is("vocab")) {
      const detail::Token at = ts.peek();
      auto v = detail::parse_vocab_decl(ts);
      scope.declare(v, at);
    } else if (ts.is("structure")) {
      file.structures.push_back(detail::parse_structure_decl(ts, scope));
    } else {
      ts.fail("expected 'vocab' or 'structure'");
    }
  }
  file.vocabularies = scope.declared();
  return file;
}

Structure parse_structure(std::string_view text) {
  auto file = parse_structure_file(text);
  if (file.structures.empty()) throw ParseError("no structure found", 1, 1);
  return std::move(file.structures.front().second);
}

std::string serialize_vocabulary(const Vocabulary& vocab) {
  std::ostringstream out;
  out << "vocab " << vocab.name() << " {";
  for (const auto& r : vocab.relations()) out << ' ' << r.name << '/' << r.arity;
  if (!vocab.constants().empty()) {
    out << " ; const";
    for (const auto& c : vocab.constants()) out << ' ' << c;
  }
  out << " }\n";
  return out.str();
}

std::string serialize_structure(const Structure& structure, std::string_view name) {
  const Vocabulary& vocab = structure.vocabulary();
  std::ostringstream out;
  out << serialize_vocabulary(vocab);
  out << "structure " << name << " : " << vocab.name() << " {\n";
  out << "  size = " << structure.size() << '\n';
  for (std::size_t r = 0; r < vocab.relations().size(); ++r) {
    out << "  " << vocab.relations()[r].name << " = {";
    for (const auto& t : structure.relation(r).tuples()) {
      out << " (";
      for (std::size_t i = 0; i < t.size(); ++i) out << (i ? "," : "") << t[i];
      out << ')';
    }
    out << " }\n";
  }
  for (std::size_t c = 0; c < vocab.constants().size(); ++c) {
    out << "  " << vocab.constants()[c] << " = " << structure.constant(c) << '\n';
  }
  out << "}\n";
  return out.str();
}

}  // namespace fopkit
