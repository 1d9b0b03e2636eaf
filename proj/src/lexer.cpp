#include "lexer.hpp"

#include <cctype>

namespace fopkit::detail {

namespace {

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

}  // namespace

std::vector<Token> tokenize(std::string_view input) {
  std::vector<Token> out;
  std::size_t line = 1;
  std::size_t column = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t count) {
    for (std::size_t k = 0; k < count && i < input.size(); ++k, ++i) {
      if (input[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
  };
  while (i < input.size()) {
    char c = input[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '#') {
      while (i < input.size() && input[i] != '\n') advance(1);
      continue;
    }
    Token tok;
    tok.line = line;
    tok.column = column;
    if (ident_start(c)) {
      std::size_t j = i;
      while (j < input.size()) {
        if (ident_char(input[j])) {
          ++j;
        } else if (input[j] == '-' && j + 1 < input.size() &&
                   std::isalnum(static_cast<unsigned char>(input[j + 1]))) {
          // hyphenated names such as qsat2-qunsat2
          ++j;
        } else {
          break;
        }
      }
      tok.kind = TokenKind::Ident;
      tok.text = std::string(input.substr(i, j - i));
      advance(j - i);
      out.push_back(std::move(tok));
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < input.size() && std::isdigit(static_cast<unsigned char>(input[j]))) ++j;
      tok.kind = TokenKind::Number;
      tok.text = std::string(input.substr(i, j - i));
      advance(j - i);
      out.push_back(std::move(tok));
      continue;
    }
    static constexpr std::string_view kMulti[] = {"<->", "(+)", "->", "<=", "!="};
    bool matched = false;
    for (auto m : kMulti) {
      if (input.substr(i, m.size()) == m) {
        tok.kind = TokenKind::Punct;
        tok.text = std::string(m);
        advance(m.size());
        out.push_back(std::move(tok));
        matched = true;
        break;
      }
    }
    if (matched) continue;
    static constexpr std::string_view kSingle = "(){}[],;=/:&|!+-";
    if (kSingle.find(c) != std::string_view::npos) {
      tok.kind = TokenKind::Punct;
      tok.text = std::string(1, c);
      advance(1);
      out.push_back(std::move(tok));
      continue;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", line, column);
  }
  Token end;
  end.kind = TokenKind::End;
  end.line = line;
  end.column = column;
  out.push_back(end);
  return out;
}

}  // namespace fopkit::detail
