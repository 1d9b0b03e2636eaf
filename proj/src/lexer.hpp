#pragma once

// Tokenizer shared by every text format (structures, formulas, fops, problem
// shorthands). Internal to the library.

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "fopkit/error.hpp"

namespace fopkit::detail {

enum class TokenKind { Ident, Number, Punct, End };

struct Token {
  TokenKind kind = TokenKind::End;
  std::string text;
  std::size_t line = 1;
  std::size_t column = 1;
};

std::vector<Token> tokenize(std::string_view input);

class TokenStream {
 public:
  explicit TokenStream(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}
  explicit TokenStream(std::string_view input) : tokens_(tokenize(input)) {}

  const Token& peek(std::size_t ahead = 0) const {
    std::size_t i = pos_ + ahead;
    return i < tokens_.size() ? tokens_[i] : tokens_.back();
  }
  const Token& next() {
    const Token& t = peek();
    if (pos_ + 1 < tokens_.size()) ++pos_;
    return t;
  }
  bool at_end() const { return peek().kind == TokenKind::End; }

  bool is(std::string_view text) const {
    const Token& t = peek();
    return t.kind != TokenKind::End && t.text == text;
  }
  bool accept(std::string_view text) {
    if (!is(text)) return false;
    next();
    return true;
  }
  const Token& expect(std::string_view text) {
    if (!is(text)) fail("expected '" + std::string(text) + "'");
    return next();
  }
  std::string expect_ident(std::string_view what = "identifier") {
    if (peek().kind != TokenKind::Ident) fail("expected " + std::string(what));
    return next().text;
  }
  unsigned long expect_number(std::string_view what = "number") {
    if (peek().kind != TokenKind::Number) fail("expected " + std::string(what));
    const Token& t = next();
    try {
      return std::stoul(t.text);
    } catch (const std::exception&) {
      throw ParseError("number out of range", t.line, t.column);
    }
  }

  [[noreturn]] void fail(const std::string& message) const {
    const Token& t = peek();
    std::string found = t.kind == TokenKind::End ? "end of input" : "'" + t.text + "'";
    throw ParseError(message + ", found " + found, t.line, t.column);
  }

  std::size_t position() const { return pos_; }
  void rewind(std::size_t pos) { pos_ = pos; }

 private:
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

}  // namespace fopkit::detail
