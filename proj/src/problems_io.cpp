#include <sstream>

#include "fopkit/error.hpp"
#include "fopkit/problems.hpp"
#include "lexer.hpp"

namespace fopkit {

namespace {

using detail::Token;
using detail::TokenKind;
using detail::TokenStream;

Element number(TokenStream& ts, const char* what) {
  return static_cast<Element>(ts.expect_number(what));
}

std::set<Element> parse_set(TokenStream& ts) {
  ts.expect("{");
  std::set<Element> out;
  while (!ts.accept("}")) {
    if (ts.accept(",")) continue;
    out.insert(number(ts, "variable index"));
  }
  return out;
}

std::vector<BoolTerm> parse_terms(TokenStream& ts) {
  std::vector<BoolTerm> out;
  while (ts.is("(")) {
    ts.next();
    BoolTerm t;
    while (!ts.accept(")")) {
      if (ts.accept(",")) continue;
      if (ts.accept("+")) {
        t.positive.insert(number(ts, "variable index"));
      } else if (ts.accept("-")) {
        t.negative.insert(number(ts, "variable index"));
      } else {
        ts.fail("expected '+i' or '-i'");
      }
    }
    out.push_back(std::move(t));
  }
  return out;
}

void print_terms(std::ostream& out, const std::vector<BoolTerm>& terms) {
  for (const auto& t : terms) {
    out << " (";
    bool first = true;
    // Literals in variable order, positive before negative on ties.
    auto p = t.positive.begin();
    auto n = t.negative.begin();
    while (p != t.positive.end() || n != t.negative.end()) {
      const bool take_pos = n == t.negative.end() || (p != t.positive.end() && *p <= *n);
      out << (first ? "" : " ") << (take_pos ? '+' : '-') << (take_pos ? *p++ : *n++);
      first = false;
    }
    out << ')';
  }
}

void print_set(std::ostream& out, const std::set<Element>& s) {
  out << '{';
  for (Element v : s) out << ' ' << v;
  out << " }";
}

// Reads `<keyword> [name] {` and returns the field loop driver.
template <typename Field>
void parse_block(TokenStream& ts, const char* keyword, Field&& field) {
  ts.expect(keyword);
  if (ts.peek().kind == TokenKind::Ident) ts.next();
  ts.expect("{");
  while (!ts.accept("}")) {
    if (ts.accept(";")) continue;
    const Token key = ts.peek();
    std::string name = ts.expect_ident("field name");
    ts.expect("=");
    field(name, key);
  }
  if (!ts.at_end()) ts.fail("unexpected input after instance");
}

[[noreturn]] void unknown_field(const std::string& name, const Token& at) {
  throw ParseError("unknown field '" + name + "'", at.line, at.column);
}

template <typename F>
auto validated(const Token& at, F&& build) {
  try {
    return build();
  } catch (const ValidationError& e) {
    throw ParseError(e.what(), at.line, at.column);
  }
}

void check_vars(Element n, const std::set<Element>& e, const std::vector<BoolTerm>& terms) {
  auto check = [&](Element v) {
    if (v >= n) throw ValidationError("variable " + std::to_string(v) + " out of range");
  };
  for (Element v : e) check(v);
  for (const auto& t : terms) {
    for (Element v : t.positive) check(v);
    for (Element v : t.negative) check(v);
  }
}

template <typename Inst>
Inst parse_qbf(std::string_view text, const char* keyword, const char* terms_field) {
  TokenStream ts(text);
  const Token start = ts.peek();
  Inst inst;
  std::vector<BoolTerm>* terms;
  if constexpr (std::is_same_v<Inst, Qbf2Dnf>) {
    terms = &inst.implicants;
  } else {
    terms = &inst.clauses;
  }
  bool have_vars = false;
  parse_block(ts, keyword, [&](const std::string& name, const Token& at) {
    if (name == "vars") {
      inst.var_count = number(ts, "variable count");
      have_vars = true;
    } else if (name == "E") {
      inst.existential = parse_set(ts);
    } else if (name == terms_field) {
      *terms = parse_terms(ts);
    } else {
      unknown_field(name, at);
    }
  });
  if (!have_vars) throw ParseError("missing 'vars'", start.line, start.column);
  validated(start, [&] {
    check_vars(inst.var_count, inst.existential, *terms);
    return 0;
  });
  return inst;
}

}  // namespace

Graph parse_graph(std::string_view text) {
  TokenStream ts(text);
  const Token start = ts.peek();
  std::optional<Element> n;
  std::vector<std::pair<Element, Element>> edges;
  parse_block(ts, "graph", [&](const std::string& name, const Token& at) {
    if (name == "n") {
      n = number(ts, "node count");
    } else if (name == "edges") {
      ts.expect("{");
      while (!ts.accept("}")) {
        if (ts.accept(",")) continue;
        ts.expect("(");
        Element u = number(ts, "node");
        ts.expect(",");
        Element v = number(ts, "node");
        ts.expect(")");
        edges.push_back({u, v});
      }
    } else {
      unknown_field(name, at);
    }
  });
  if (!n) throw ParseError("missing 'n'", start.line, start.column);
  return validated(start, [&] { return Graph(*n, edges); });
}

Qbf2Dnf parse_qdnf(std::string_view text) { return parse_qbf<Qbf2Dnf>(text, "qdnf", "imp"); }

Qbf2Cnf parse_qcnf(std::string_view text) { return parse_qbf<Qbf2Cnf>(text, "qcnf", "cls"); }

VcsatInstance parse_vcsat(std::string_view text) {
  TokenStream ts(text);
  const Token start = ts.peek();
  VcsatInstance inst;
  bool have_vars = false;
  parse_block(ts, "vcsat", [&](const std::string& name, const Token& at) {
    if (name == "vars") {
      inst.var_count = number(ts, "variable count");
      have_vars = true;
    } else if (name == "imp") {
      inst.implicants = parse_terms(ts);
    } else if (name == "v") {
      ts.expect("[");
      while (!ts.accept("]")) {
        if (ts.accept(",")) continue;
        inst.values.push_back(ts.expect_number("value"));
      }
    } else if (name == "K") {
      inst.cost = ts.expect_number("cost");
    } else {
      unknown_field(name, at);
    }
  });
  if (!have_vars) throw ParseError("missing 'vars'", start.line, start.column);
  validated(start, [&] {
    check_vars(inst.var_count, {}, inst.implicants);
    if (inst.values.size() != inst.var_count) {
      throw ValidationError("expected " + std::to_string(inst.var_count) + " values, got " +
                            std::to_string(inst.values.size()));
    }
    return 0;
  });
  return inst;
}

std::string serialize_graph(const Graph& g, std::string_view name) {
  std::ostringstream out;
  out << "graph " << name << " { n = " << g.node_count() << " ; edges = {";
  for (auto [u, v] : g.edges()) out << " (" << u << ',' << v << ')';
  out << " } }\n";
  return out.str();
}

std::string serialize_qdnf(const Qbf2Dnf& inst) {
  std::ostringstream out;
  out << "qdnf { vars = " << inst.var_count << " ; E = ";
  print_set(out, inst.existential);
  out << " ; imp =";
  print_terms(out, inst.implicants);
  out << " }\n";
  return out.str();
}

std::string serialize_qcnf(const Qbf2Cnf& inst) {
  std::ostringstream out;
  out << "qcnf { vars = " << inst.var_count << " ; E = ";
  print_set(out, inst.existential);
  out << " ; cls =";
  print_terms(out, inst.clauses);
  out << " }\n";
  return out.str();
}

std::string serialize_vcsat(const VcsatInstance& inst) {
  std::ostringstream out;
  out << "vcsat { vars = " << inst.var_count << " ; imp =";
  print_terms(out, inst.implicants);
  out << " ; v = [";
  for (std::size_t i = 0; i < inst.values.size(); ++i) out << (i ? ", " : "") << inst.values[i];
  out << "] ; K = " << inst.cost << " }\n";
  return out.str();
}

}  // namespace fopkit
