#include "fopkit/formula.hpp"

#include <algorithm>
#include <sstream>

#include "fopkit/error.hpp"
#include "lexer.hpp"
#include "text_detail.hpp"

namespace fopkit {

Formula::Formula() : node_(std::make_shared<const FormulaNode>()) {}

Formula Formula::make(FormulaNode node) {
  return Formula(std::make_shared<const FormulaNode>(std::move(node)));
}

bool Formula::is_atom() const {
  switch (kind()) {
    case FormulaKind::Relation:
    case FormulaKind::SoAtom:
    case FormulaKind::Numeric:
    case FormulaKind::Equal:
    case FormulaKind::True:
    case FormulaKind::False:
      return true;
    default:
      return false;
  }
}

bool Formula::is_quantifier() const {
  return kind() == FormulaKind::Forall || kind() == FormulaKind::Exists;
}

bool Formula::is_so_quantifier() const {
  return kind() == FormulaKind::SoExists || kind() == FormulaKind::SoForall;
}

bool Formula::is_literal() const {
  return is_atom() || (kind() == FormulaKind::Not && child().is_atom());
}

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  const FormulaNode& x = *a.node_;
  const FormulaNode& y = *b.node_;
  return x.kind == y.kind && x.name == y.name && x.arity == y.arity &&
         (x.kind != FormulaKind::Numeric || x.numeric == y.numeric) && x.terms == y.terms &&
         x.children == y.children;
}

Formula Formula::truth(bool value) {
  FormulaNode n;
  n.kind = value ? FormulaKind::True : FormulaKind::False;
  return make(std::move(n));
}

Formula Formula::negate(Formula f) {
  FormulaNode n;
  n.kind = FormulaKind::Not;
  n.children.push_back(std::move(f));
  return make(std::move(n));
}

Formula Formula::conj(std::vector<Formula> parts) {
  if (parts.empty()) return truth(true);
  if (parts.size() == 1) return std::move(parts.front());
  FormulaNode n;
  n.kind = FormulaKind::And;
  n.children = std::move(parts);
  return make(std::move(n));
}

Formula Formula::disj(std::vector<Formula> parts) {
  if (parts.empty()) return truth(false);
  if (parts.size() == 1) return std::move(parts.front());
  FormulaNode n;
  n.kind = FormulaKind::Or;
  n.children = std::move(parts);
  return make(std::move(n));
}

namespace {

Formula binary(FormulaKind kind, Formula a, Formula b, Formula (*mk)(FormulaNode)) {
  FormulaNode n;
  n.kind = kind;
  n.children = {std::move(a), std::move(b)};
  return mk(std::move(n));
}

}  // namespace

Formula Formula::implies(Formula a, Formula b) {
  return binary(FormulaKind::Implies, std::move(a), std::move(b), &Formula::make);
}
Formula Formula::iff(Formula a, Formula b) {
  return binary(FormulaKind::Iff, std::move(a), std::move(b), &Formula::make);
}
Formula Formula::xor_of(Formula a, Formula b) {
  return binary(FormulaKind::Xor, std::move(a), std::move(b), &Formula::make);
}

Formula Formula::forall(std::string var, Formula body) {
  FormulaNode n;
  n.kind = FormulaKind::Forall;
  n.name = std::move(var);
  n.children.push_back(std::move(body));
  return make(std::move(n));
}

Formula Formula::exists(std::string var, Formula body) {
  FormulaNode n;
  n.kind = FormulaKind::Exists;
  n.name = std::move(var);
  n.children.push_back(std::move(body));
  return make(std::move(n));
}

Formula Formula::so_exists(std::string rel, int arity, Formula body) {
  FormulaNode n;
  n.kind = FormulaKind::SoExists;
  n.name = std::move(rel);
  n.arity = arity;
  n.children.push_back(std::move(body));
  return make(std::move(n));
}

Formula Formula::so_forall(std::string rel, int arity, Formula body) {
  FormulaNode n;
  n.kind = FormulaKind::SoForall;
  n.name = std::move(rel);
  n.arity = arity;
  n.children.push_back(std::move(body));
  return make(std::move(n));
}

Formula Formula::relation(std::string rel, std::vector<Term> args) {
  FormulaNode n;
  n.kind = FormulaKind::Relation;
  n.name = std::move(rel);
  n.terms = std::move(args);
  return make(std::move(n));
}

Formula Formula::so_atom(std::string rel, std::vector<Term> args) {
  FormulaNode n;
  n.kind = FormulaKind::SoAtom;
  n.name = std::move(rel);
  n.terms = std::move(args);
  return make(std::move(n));
}

Formula Formula::numeric_atom(NumericRelation rel, std::vector<Term> args) {
  if (args.size() != static_cast<std::size_t>(numeric_arity(rel))) {
    throw ValidationError("numeric relation " + std::string(numeric_name(rel)) +
                          " has arity " + std::to_string(numeric_arity(rel)));
  }
  FormulaNode n;
  n.kind = FormulaKind::Numeric;
  n.numeric = rel;
  n.terms = std::move(args);
  return make(std::move(n));
}

Formula Formula::equal(Term a, Term b) {
  FormulaNode n;
  n.kind = FormulaKind::Equal;
  n.terms = {std::move(a), std::move(b)};
  return make(std::move(n));
}

// ---------------------------------------------------------------------------
// Parsing

namespace detail {

namespace {

class FormulaParser {
 public:
  FormulaParser(TokenStream& ts, const VocabularyPtr& vocab) : ts_(ts), vocab_(vocab) {}

  Formula sentence() { return fo(); }

 private:
  Formula fo() {
    if (ts_.is("exists2") || ts_.is("forall2")) {
      bool existential = ts_.next().text == "exists2";
      std::string rel = ts_.expect_ident("relation variable");
      ts_.expect("/");
      int arity = static_cast<int>(ts_.expect_number("relation-variable arity"));
      if (arity < 1) ts_.fail("relation-variable arity must be >= 1");
      so_scope_.push_back({rel, arity});
      Formula body = fo();
      so_scope_.pop_back();
      return existential ? Formula::so_exists(rel, arity, body)
                         : Formula::so_forall(rel, arity, body);
    }
    if (ts_.is("forall") || ts_.is("exists")) {
      bool universal = ts_.next().text == "forall";
      std::string var = ts_.expect_ident("variable");
      Formula body = fo();
      return universal ? Formula::forall(var, body) : Formula::exists(var, body);
    }
    return iff();
  }

  Formula iff() {
    Formula left = imp();
    while (ts_.accept("<->")) left = Formula::iff(left, imp());
    return left;
  }

  Formula imp() {
    Formula left = xr();
    while (ts_.accept("->")) left = Formula::implies(left, xr());
    return left;
  }

  Formula xr() {
    Formula left = disjunction();
    while (ts_.accept("(+)")) left = Formula::xor_of(left, disjunction());
    return left;
  }

  Formula disjunction() {
    std::vector<Formula> parts{conjunction()};
    while (ts_.accept("|")) parts.push_back(conjunction());
    return Formula::disj(std::move(parts));
  }

  Formula conjunction() {
    std::vector<Formula> parts{unary()};
    while (ts_.accept("&")) parts.push_back(unary());
    return Formula::conj(std::move(parts));
  }

  Formula unary() {
    if (ts_.accept("!")) return Formula::negate(unary());
    if (ts_.accept("(")) {
      Formula inner = fo();
      ts_.expect(")");
      return inner;
    }
    if (ts_.is("forall") || ts_.is("exists") || ts_.is("exists2") || ts_.is("forall2")) {
      return fo();
    }
    return atom();
  }

  Formula atom() {
    const Token at = ts_.peek();
    if (ts_.accept("true")) return Formula::truth(true);
    if (ts_.accept("false")) return Formula::truth(false);
    if (at.kind == TokenKind::Ident && ts_.peek(1).text == "(" &&
        ts_.peek(1).kind == TokenKind::Punct) {
      std::string name = ts_.next().text;
      ts_.expect("(");
      std::vector<Term> args{term()};
      while (ts_.accept(",")) args.push_back(term());
      ts_.expect(")");
      return resolve_atom(name, std::move(args), at);
    }
    Term left = term();
    if (ts_.accept("=")) return Formula::equal(left, term());
    if (ts_.accept("!=")) return Formula::not_equal(left, term());
    if (ts_.accept("<=")) return Formula::numeric_atom(NumericRelation::Le, {left, term()});
    ts_.fail("expected '=', '!=' or '<=' after term");
  }

  Formula resolve_atom(const std::string& name, std::vector<Term> args, const Token& at) {
    auto arity_error = [&](int expected) {
      throw ParseError("arity mismatch: '" + name + "' expects " + std::to_string(expected) +
                           " arguments, got " + std::to_string(args.size()),
                       at.line, at.column);
    };
    for (auto it = so_scope_.rbegin(); it != so_scope_.rend(); ++it) {
      if (it->first == name) {
        if (args.size() != static_cast<std::size_t>(it->second)) arity_error(it->second);
        return Formula::so_atom(name, std::move(args));
      }
    }
    if (auto rel = numeric_relation(name)) {
      if (args.size() != static_cast<std::size_t>(numeric_arity(*rel))) {
        arity_error(numeric_arity(*rel));
      }
      return Formula::numeric_atom(*rel, std::move(args));
    }
    if (vocab_) {
      if (auto rel = vocab_->find_relation(name)) {
        int arity = vocab_->relations()[*rel].arity;
        if (args.size() != static_cast<std::size_t>(arity)) arity_error(arity);
        return Formula::relation(name, std::move(args));
      }
    }
    throw ParseError("unknown relation symbol '" + name + "'", at.line, at.column);
  }

  Term term() {
    const Token& t = ts_.peek();
    if (t.kind == TokenKind::Number) {
      return Term::num(static_cast<Element>(ts_.expect_number()));
    }
    if (t.kind == TokenKind::Ident) {
      std::string name = ts_.next().text;
      if (name == "max") return Term::max();
      if (vocab_ && vocab_->find_constant(name)) return Term::constant(name);
      if (is_keyword(name)) {
        throw ParseError("keyword '" + name + "' used as a term", t.line, t.column);
      }
      return Term::var(name);
    }
    ts_.fail("expected a term");
  }

  static bool is_keyword(const std::string& s) {
    return s == "forall" || s == "exists" || s == "forall2" || s == "exists2" || s == "true" ||
           s == "false";
  }

  TokenStream& ts_;
  VocabularyPtr vocab_;
  std::vector<std::pair<std::string, int>> so_scope_;
};

}  // namespace

Formula parse_formula_stream(TokenStream& ts, const VocabularyPtr& vocab) {
  FormulaParser parser(ts, vocab);
  return parser.sentence();
}

}  // namespace detail

Formula parse_formula(std::string_view text, const VocabularyPtr& vocab) {
  detail::TokenStream ts(text);
  Formula f = detail::parse_formula_stream(ts, vocab);
  if (!ts.at_end()) ts.fail("unexpected trailing input");
  return f;
}

// ---------------------------------------------------------------------------
// Printing

namespace {

enum Prec { kPrecQuant = 0, kPrecIff = 1, kPrecImp = 2, kPrecXor = 3, kPrecOr = 4, kPrecAnd = 5,
            kPrecUnary = 6 };

void print_term(std::ostream& out, const Term& t) {
  switch (t.kind) {
    case TermKind::Variable:
    case TermKind::Constant:
      out << t.name;
      break;
    case TermKind::Number:
      out << t.value;
      break;
    case TermKind::Max:
      out << "max";
      break;
  }
}

void print(std::ostream& out, const Formula& f, int ctx) {
  auto wrap = [&](int own, auto&& body) {
    bool parens = own < ctx;
    if (parens) out << '(';
    body();
    if (parens) out << ')';
  };
  switch (f.kind()) {
    case FormulaKind::True: out << "true"; return;
    case FormulaKind::False: out << "false"; return;
    case FormulaKind::Relation:
    case FormulaKind::SoAtom:
    case FormulaKind::Numeric: {
      if (f.kind() == FormulaKind::Numeric && f.numeric() == NumericRelation::Le) {
        wrap(kPrecUnary + 1, [&] {
          print_term(out, f.terms()[0]);
          out << " <= ";
          print_term(out, f.terms()[1]);
        });
        return;
      }
      out << (f.kind() == FormulaKind::Numeric ? std::string(numeric_name(f.numeric()))
                                               : f.name());
      out << '(';
      for (std::size_t i = 0; i < f.terms().size(); ++i) {
        if (i) out << ", ";
        print_term(out, f.terms()[i]);
      }
      out << ')';
      return;
    }
    case FormulaKind::Equal:
      wrap(kPrecUnary + 1, [&] {
        print_term(out, f.terms()[0]);
        out << " = ";
        print_term(out, f.terms()[1]);
      });
      return;
    case FormulaKind::Not:
      if (f.child().kind() == FormulaKind::Equal) {
        wrap(kPrecUnary + 1, [&] {
          print_term(out, f.child().terms()[0]);
          out << " != ";
          print_term(out, f.child().terms()[1]);
        });
        return;
      }
      out << '!';
      print(out, f.child(), kPrecUnary + 1);
      return;
    case FormulaKind::And:
    case FormulaKind::Or: {
      int own = f.kind() == FormulaKind::And ? kPrecAnd : kPrecOr;
      const char* op = f.kind() == FormulaKind::And ? " & " : " | ";
      wrap(own, [&] {
        for (std::size_t i = 0; i < f.children().size(); ++i) {
          if (i) out << op;
          // Conjunctions inside a disjunction are bracketed for readability.
          print(out, f.children()[i], own == kPrecOr ? kPrecUnary : own + 1);
        }
      });
      return;
    }
    case FormulaKind::Implies:
    case FormulaKind::Iff:
    case FormulaKind::Xor: {
      int own = f.kind() == FormulaKind::Implies ? kPrecImp
                : f.kind() == FormulaKind::Iff   ? kPrecIff
                                                 : kPrecXor;
      const char* op = f.kind() == FormulaKind::Implies ? " -> "
                       : f.kind() == FormulaKind::Iff   ? " <-> "
                                                        : " (+) ";
      wrap(own, [&] {
        print(out, f.child(0), own);
        out << op;
        print(out, f.child(1), own + 1);
      });
      return;
    }
    case FormulaKind::Forall:
    case FormulaKind::Exists:
      wrap(kPrecQuant, [&] {
        out << (f.kind() == FormulaKind::Forall ? "forall " : "exists ") << f.name() << ' ';
        print(out, f.child(), kPrecQuant);
      });
      return;
    case FormulaKind::SoExists:
    case FormulaKind::SoForall:
      wrap(kPrecQuant, [&] {
        out << (f.kind() == FormulaKind::SoExists ? "exists2 " : "forall2 ") << f.name() << '/'
            << f.arity() << ' ';
        print(out, f.child(), kPrecQuant);
      });
      return;
  }
}

void collect_free(const Formula& f, std::vector<std::string>& bound, std::set<std::string>& out) {
  for (const auto& t : f.terms()) {
    if (t.kind == TermKind::Variable &&
        std::find(bound.begin(), bound.end(), t.name) == bound.end()) {
      out.insert(t.name);
    }
  }
  if (f.is_quantifier()) {
    bound.push_back(f.name());
    collect_free(f.child(), bound, out);
    bound.pop_back();
    return;
  }
  for (const auto& c : f.children()) collect_free(c, bound, out);
}

Formula rebuild(const Formula& f, std::vector<Formula> children, std::vector<Term> terms) {
  switch (f.kind()) {
    case FormulaKind::True:
    case FormulaKind::False: return f;
    case FormulaKind::Not: return Formula::negate(std::move(children[0]));
    case FormulaKind::And: return Formula::conj(std::move(children));
    case FormulaKind::Or: return Formula::disj(std::move(children));
    case FormulaKind::Implies: return Formula::implies(children[0], children[1]);
    case FormulaKind::Iff: return Formula::iff(children[0], children[1]);
    case FormulaKind::Xor: return Formula::xor_of(children[0], children[1]);
    case FormulaKind::Forall: return Formula::forall(f.name(), children[0]);
    case FormulaKind::Exists: return Formula::exists(f.name(), children[0]);
    case FormulaKind::SoExists: return Formula::so_exists(f.name(), f.arity(), children[0]);
    case FormulaKind::SoForall: return Formula::so_forall(f.name(), f.arity(), children[0]);
    case FormulaKind::Relation: return Formula::relation(f.name(), std::move(terms));
    case FormulaKind::SoAtom: return Formula::so_atom(f.name(), std::move(terms));
    case FormulaKind::Numeric: return Formula::numeric_atom(f.numeric(), std::move(terms));
    case FormulaKind::Equal: return Formula::equal(terms[0], terms[1]);
  }
  return f;
}

Formula substitute_impl(const Formula& f, std::map<std::string, Term> repl) {
  if (repl.empty()) return f;
  if (f.is_quantifier()) repl.erase(f.name());
  std::vector<Term> terms = f.terms();
  for (auto& t : terms) {
    if (t.kind != TermKind::Variable) continue;
    auto it = repl.find(t.name);
    if (it != repl.end()) t = it->second;
  }
  std::vector<Formula> children;
  for (const auto& c : f.children()) children.push_back(substitute_impl(c, repl));
  return rebuild(f, std::move(children), std::move(terms));
}

void flatten(const Formula& f, FormulaKind kind, std::vector<Formula>& out) {
  if (f.kind() == kind) {
    for (const auto& c : f.children()) flatten(c, kind, out);
  } else {
    out.push_back(f);
  }
}

}  // namespace

std::string to_string(const Formula& f) {
  std::ostringstream out;
  print(out, f, kPrecQuant);
  return out.str();
}

std::set<std::string> free_variables(const Formula& f) {
  std::vector<std::string> bound;
  std::set<std::string> out;
  collect_free(f, bound, out);
  return out;
}

bool is_sentence(const Formula& f) { return free_variables(f).empty(); }

Formula substitute(const Formula& f, const std::map<std::string, Term>& replacement) {
  return substitute_impl(f, replacement);
}

bool is_numeric(const Formula& f) {
  switch (f.kind()) {
    case FormulaKind::Relation:
    case FormulaKind::SoAtom:
    case FormulaKind::SoExists:
    case FormulaKind::SoForall:
      return false;
    case FormulaKind::Numeric:
    case FormulaKind::Equal:
      for (const auto& t : f.terms()) {
        if (!t.is_numeric()) return false;
      }
      return true;
    default:
      for (const auto& c : f.children()) {
        if (!is_numeric(c)) return false;
      }
      return true;
  }
}

std::vector<Formula> disjuncts(const Formula& f) {
  std::vector<Formula> out;
  flatten(f, FormulaKind::Or, out);
  return out;
}

std::vector<Formula> conjuncts(const Formula& f) {
  std::vector<Formula> out;
  flatten(f, FormulaKind::And, out);
  return out;
}

}  // namespace fopkit
