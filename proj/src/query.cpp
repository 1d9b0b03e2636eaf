#include "fopkit/query.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "fopkit/error.hpp"
#include "fopkit/structure_io.hpp"
#include "text_detail.hpp"

namespace fopkit {

namespace {

constexpr std::uint64_t kMaxTupleSpace = std::uint64_t{1} << 28;

std::uint64_t tuple_space(Element n, int len, const char* what) {
  std::uint64_t total = 1;
  for (int i = 0; i < len; ++i) {
    total *= n;
    if (total > kMaxTupleSpace) {
      throw BudgetExceeded(std::string("too many ") + what + " tuples to enumerate");
    }
  }
  return total;
}

// Advances an odometer over {0..n-1}^len, last position fastest. Returns false
// after the last tuple.
bool advance(std::vector<Element>& digits, Element n) {
  for (std::size_t i = digits.size(); i-- > 0;) {
    if (++digits[i] < n) return true;
    digits[i] = 0;
  }
  return false;
}

std::vector<Tuple> universe_tuples(const FirstOrderQuery& q, const Structure& a) {
  tuple_space(a.size(), q.arity, "universe");
  CompiledFormula phi0(q.universe, *q.source, query_variables(q.arity, 1));
  std::vector<Element> slots(phi0.slot_count(), 0);
  std::vector<Element> digits(q.arity, 0);
  std::vector<Tuple> out;
  do {
    std::copy(digits.begin(), digits.end(), slots.begin());
    if (phi0.eval(a, slots)) out.push_back(digits);
  } while (advance(digits, a.size()));
  if (out.empty()) throw EvalError("query " + q.name + " yields an empty universe");
  return out;
}

void fill_slots(std::vector<Element>& slots, const std::vector<Tuple>& universe,
                const std::vector<Element>& positions, int k) {
  for (std::size_t p = 0; p < positions.size(); ++p) {
    const Tuple& t = universe[positions[p]];
    std::copy(t.begin(), t.end(), slots.begin() + static_cast<std::ptrdiff_t>(p * k));
  }
}

Relation build_relation(const CompiledFormula& phi, int arity, int k, const Structure& a,
                        const std::vector<Tuple>& universe) {
  const Element big_n = static_cast<Element>(universe.size());
  Relation rel(arity, big_n);
  std::vector<Element> slots(phi.slot_count(), 0);
  std::vector<Element> positions(arity, 0);
  std::size_t index = 0;
  do {
    fill_slots(slots, universe, positions, k);
    if (phi.eval(a, slots)) rel.set(index);
    ++index;
  } while (advance(positions, big_n));
  return rel;
}

std::vector<Element> build_constants(const FirstOrderQuery& q, const Structure& a,
                                     const std::vector<Tuple>& universe) {
  std::vector<Element> out;
  for (std::size_t c = 0; c < q.constants.size(); ++c) {
    CompiledFormula psi(q.constants[c], *q.source, query_variables(q.arity, 1));
    std::vector<Element> slots(psi.slot_count(), 0);
    std::optional<Element> witness;
    for (Element u = 0; u < universe.size(); ++u) {
      std::copy(universe[u].begin(), universe[u].end(), slots.begin());
      if (!psi.eval(a, slots)) continue;
      if (witness) {
        throw EvalError("constant " + q.target->constants()[c] + " of query " + q.name +
                        " has several witnesses");
      }
      witness = u;
    }
    if (!witness) {
      throw EvalError("constant " + q.target->constants()[c] + " of query " + q.name +
                      " has no witness");
    }
    out.push_back(*witness);
  }
  return out;
}

void check_source(const FirstOrderQuery& q, const Structure& a) {
  if (!same_vocabulary(q.source, a.vocabulary_ptr())) {
    throw ValidationError("query " + q.name + " expects a " + q.source->name() +
                          " structure, got " + a.vocabulary().name());
  }
}

}  // namespace

std::string query_variable(int position, int coordinate) {
  static constexpr char kLetters[] = "xyzwuv";
  if (position < 0 || position >= kMaxTargetArity) {
    throw ValidationError("target relation arity above " + std::to_string(kMaxTargetArity));
  }
  return std::string(1, kLetters[position]) + std::to_string(coordinate + 1);
}

std::vector<std::string> query_variables(int arity, int positions) {
  std::vector<std::string> out;
  for (int p = 0; p < positions; ++p) {
    for (int i = 0; i < arity; ++i) out.push_back(query_variable(p, i));
  }
  return out;
}

void check_query(const FirstOrderQuery& q) {
  if (!q.source || !q.target) throw ValidationError("query " + q.name + " lacks a vocabulary");
  if (q.arity < 1) throw ValidationError("query arity must be >= 1");
  if (q.relations.size() != q.target->relations().size()) {
    throw ValidationError("query " + q.name + " defines " + std::to_string(q.relations.size()) +
                          " relations, target has " +
                          std::to_string(q.target->relations().size()));
  }
  if (q.constants.size() != q.target->constants().size()) {
    throw ValidationError("query " + q.name + " defines the wrong number of constants");
  }
  auto check_free = [&](const Formula& f, int positions, const std::string& what) {
    auto allowed = query_variables(q.arity, positions);
    for (const auto& v : free_variables(f)) {
      if (std::find(allowed.begin(), allowed.end(), v) == allowed.end()) {
        throw ValidationError("formula for " + what + " in query " + q.name +
                              " has unexpected free variable '" + v + "'");
      }
    }
    // Compiling resolves every symbol against the source vocabulary.
    try {
      CompiledFormula(f, *q.source, allowed);
    } catch (const EvalError& e) {
      throw ValidationError("formula for " + what + " in query " + q.name + ": " + e.what());
    }
  };
  check_free(q.universe, 1, "universe");
  for (std::size_t i = 0; i < q.relations.size(); ++i) {
    check_free(q.relations[i], q.target->relations()[i].arity, q.target->relations()[i].name);
  }
  for (std::size_t i = 0; i < q.constants.size(); ++i) {
    check_free(q.constants[i], 1, q.target->constants()[i]);
  }
}

Structure apply_query(const FirstOrderQuery& q, const Structure& a) {
  check_source(q, a);
  std::vector<Tuple> universe = universe_tuples(q, a);
  const Element big_n = static_cast<Element>(universe.size());
  std::vector<Relation> rels;
  for (std::size_t i = 0; i < q.relations.size(); ++i) {
    const int ar = q.target->relations()[i].arity;
    tuple_space(big_n, ar, "image");
    CompiledFormula phi(q.relations[i], *q.source, query_variables(q.arity, ar));
    rels.push_back(build_relation(phi, ar, q.arity, a, universe));
  }
  return Structure(q.target, big_n, std::move(rels), build_constants(q, a, universe));
}

Structure compose_apply(const FirstOrderQuery& i, const FirstOrderQuery& j, const Structure& a) {
  if (!same_vocabulary(i.target, j.source)) {
    throw ValidationError("cannot compose " + i.name + " (to " + i.target->name() + ") with " +
                          j.name + " (from " + j.source->name() + ")");
  }
  return apply_query(j, apply_query(i, a));
}

ProjectionPlan::ProjectionPlan(const FirstOrderQuery& q, Element source_size)
    : q_(q), n_(source_size) {
  check_query(q_);
  tuple_space(n_, q_.arity, "universe");
  CompiledFormula phi0(q_.universe, *q_.source, query_variables(q_.arity, 1));
  std::vector<Element> slots(phi0.slot_count(), 0);
  std::vector<Element> digits(q_.arity, 0);
  fixed_universe_ = true;
  do {
    std::copy(digits.begin(), digits.end(), slots.begin());
    Residual r = phi0.residual(n_, slots);
    if (r.kind == Residual::Kind::True) {
      universe_.push_back(digits);
    } else if (r.kind != Residual::Kind::False) {
      fixed_universe_ = false;
      break;
    }
  } while (advance(digits, n_));
  if (!fixed_universe_ || universe_.empty()) {
    fixed_universe_ = false;
    universe_.clear();
    return;
  }
  const Element big_n = static_cast<Element>(universe_.size());
  for (std::size_t i = 0; i < q_.relations.size(); ++i) {
    const int ar = q_.target->relations()[i].arity;
    tuple_space(big_n, ar, "image");
    compiled_.emplace_back(q_.relations[i], *q_.source, query_variables(q_.arity, ar));
    const CompiledFormula& phi = compiled_.back();
    std::vector<Element> s(phi.slot_count(), 0);
    std::vector<Element> positions(ar, 0);
    std::vector<Entry> table;
    do {
      fill_slots(s, universe_, positions, q_.arity);
      Residual r = phi.residual(n_, s);
      Entry e{r.kind, true, 0, 0};
      if (r.kind == Residual::Kind::Literal) {
        e.positive = r.literal.positive;
        e.relation = static_cast<std::uint32_t>(r.literal.relation);
        std::size_t idx = 0;
        for (Element v : r.literal.args) idx = idx * n_ + v;
        e.index = idx;
      } else if (r.kind == Residual::Kind::Complex) {
        ++complex_;
      }
      table.push_back(e);
    } while (advance(positions, big_n));
    tables_.push_back(std::move(table));
  }
}

std::optional<Element> ProjectionPlan::image_size() const {
  if (!fixed_universe_) return std::nullopt;
  return static_cast<Element>(universe_.size());
}

Structure ProjectionPlan::apply(const Structure& a) const {
  check_source(q_, a);
  if (a.size() != n_) {
    throw ValidationError("plan for size " + std::to_string(n_) + " applied to a structure of size " +
                          std::to_string(a.size()));
  }
  if (!fixed_universe_) return apply_query(q_, a);
  const Element big_n = static_cast<Element>(universe_.size());
  std::vector<Relation> rels;
  std::vector<Element> slots;
  for (std::size_t i = 0; i < tables_.size(); ++i) {
    const int ar = q_.target->relations()[i].arity;
    Relation rel(ar, big_n);
    const auto& table = tables_[i];
    for (std::size_t t = 0; t < table.size(); ++t) {
      const Entry& e = table[t];
      bool value = false;
      switch (e.kind) {
        case Residual::Kind::False: break;
        case Residual::Kind::True: value = true; break;
        case Residual::Kind::Literal:
          value = a.relation(e.relation).test(e.index) == e.positive;
          break;
        case Residual::Kind::Complex: {
          slots.assign(compiled_[i].slot_count(), 0);
          std::vector<Element> positions(ar);
          std::size_t rest = t;
          for (int p = ar; p-- > 0;) {
            positions[p] = static_cast<Element>(rest % big_n);
            rest /= big_n;
          }
          fill_slots(slots, universe_, positions, q_.arity);
          value = compiled_[i].eval(a, slots);
          break;
        }
      }
      if (value) rel.set(t);
    }
    rels.push_back(std::move(rel));
  }
  return Structure(q_.target, big_n, std::move(rels), build_constants(q_, a, universe_));
}

// ---------------------------------------------------------------------------
// Projection validation

namespace {

bool is_source_literal(const Formula& f, const Vocabulary& source) {
  const Formula& atom = f.kind() == FormulaKind::Not ? f.child() : f;
  if (atom.kind() == FormulaKind::Relation) return source.find_relation(atom.name()).has_value();
  if (atom.kind() == FormulaKind::Equal) {
    // x = c with c a constant of the source vocabulary.
    return std::any_of(atom.terms().begin(), atom.terms().end(),
                       [](const Term& t) { return t.kind == TermKind::Constant; });
  }
  return false;
}

struct GuardCheck {
  struct Conjunct {
    std::size_t guard;
    CompiledFormula formula;
  };

  std::size_t vars = 0;
  std::size_t guards = 0;
  std::vector<std::vector<Conjunct>> by_depth;  // evaluable once `depth` vars are set
  std::vector<Element> slots;
  std::vector<char> alive;
  std::size_t alive_count = 0;
  std::optional<Structure> empty;
  std::vector<std::size_t> both;  // the overlapping guards at the witness

  bool search(std::size_t depth, Element m) {
    std::vector<std::size_t> killed;
    for (const Conjunct& c : by_depth[depth]) {
      if (!alive[c.guard]) continue;
      if (!c.formula.eval(*empty, slots)) {
        alive[c.guard] = 0;
        --alive_count;
        killed.push_back(c.guard);
      }
    }
    bool found = false;
    if (alive_count >= 2) {
      if (depth == vars) {
        for (std::size_t g = 0; g < guards && both.size() < 2; ++g) {
          if (alive[g]) both.push_back(g);
        }
        found = true;
      } else {
        for (Element v = 0; v < m && !found; ++v) {
          slots[depth] = v;
          found = search(depth + 1, m);
        }
      }
    }
    for (std::size_t g : killed) alive[g] = 1;
    alive_count += killed.size();
    return found;
  }
};

void check_formula(const FirstOrderQuery& q, const std::string& what, const Formula& f,
                   int positions, Element bound, ProjectionReport& report) {
  std::vector<std::vector<Formula>> guards;
  bool shape_ok = true;
  for (const Formula& d : disjuncts(f)) {
    if (is_numeric(d)) {
      guards.push_back(conjuncts(d));
      continue;
    }
    std::vector<Formula> guard;
    int literals = 0;
    for (const Formula& c : conjuncts(d)) {
      if (is_numeric(c)) {
        guard.push_back(c);
      } else if (is_source_literal(c, *q.source)) {
        ++literals;
      } else {
        report.violations.push_back(
            {what, "conjunct is neither numeric nor a source literal: " + to_string(c), {}, {}});
        shape_ok = false;
        literals = 1;
        break;
      }
    }
    if (literals > 1) {
      report.violations.push_back(
          {what, "disjunct has more than one source literal: " + to_string(d), {}, {}});
      shape_ok = false;
    }
    guards.push_back(std::move(guard));
  }
  if (!shape_ok) {
    report.syntactic_ok = false;
    return;
  }
  if (guards.size() < 2) return;

  const auto vars = query_variables(q.arity, positions);
  GuardCheck check;
  check.vars = vars.size();
  check.guards = guards.size();
  check.by_depth.resize(vars.size() + 1);
  std::size_t slot_count = vars.size();
  for (std::size_t g = 0; g < guards.size(); ++g) {
    for (const Formula& c : guards[g]) {
      std::size_t depth = 0;
      for (const auto& v : free_variables(c)) {
        auto it = std::find(vars.begin(), vars.end(), v);
        depth = std::max(depth, static_cast<std::size_t>(it - vars.begin()) + 1);
      }
      check.by_depth[depth].push_back({g, CompiledFormula(c, *q.source, vars)});
      slot_count = std::max(slot_count, check.by_depth[depth].back().formula.slot_count());
    }
  }
  for (Element m = 1; m <= bound; ++m) {
    check.empty = Structure::empty(q.source, m);
    check.slots.assign(slot_count, 0);
    check.alive.assign(guards.size(), 1);
    check.alive_count = guards.size();
    check.both.clear();
    if (check.search(0, m)) {
      report.exclusivity_ok = false;
      report.violations.push_back(
          {what,
           "guards of disjuncts " + std::to_string(check.both[0] + 1) + " and " +
               std::to_string(check.both[1] + 1) + " both hold",
           m, Tuple(check.slots.begin(), check.slots.begin() + static_cast<std::ptrdiff_t>(vars.size()))});
      return;
    }
  }
}

}  // namespace

ProjectionReport validate_projection(const FirstOrderQuery& q, Element size_bound) {
  check_query(q);
  ProjectionReport report;
  report.syntactic_ok = true;
  report.exclusivity_ok = true;
  if (!is_numeric(q.universe)) {
    report.syntactic_ok = false;
    report.violations.push_back({"universe", "universe formula is not numeric", {}, {}});
  }
  for (std::size_t i = 0; i < q.relations.size(); ++i) {
    const auto& r = q.target->relations()[i];
    check_formula(q, r.name, q.relations[i], r.arity, size_bound, report);
  }
  for (std::size_t i = 0; i < q.constants.size(); ++i) {
    check_formula(q, "const " + q.target->constants()[i], q.constants[i], 1, size_bound, report);
  }
  report.is_projection = report.syntactic_ok && report.exclusivity_ok;
  return report;
}

// ---------------------------------------------------------------------------
// Text form

FirstOrderQuery parse_fop(std::string_view text) {
  detail::TokenStream ts(text);
  detail::VocabularyScope scope;
  while (ts.is("vocab")) {
    const detail::Token at = ts.peek();
    scope.declare(detail::parse_vocab_decl(ts), at);
  }
  const detail::Token start = ts.expect("fop");
  FirstOrderQuery q;
  q.name = ts.expect_ident("query name");
  ts.expect(":");
  auto vocab_ref = [&] {
    const detail::Token at = ts.peek();
    std::string name = ts.expect_ident("vocabulary name");
    VocabularyPtr v = scope.find(name);
    if (!v) throw ParseError("unknown vocabulary '" + name + "'", at.line, at.column);
    return v;
  };
  q.source = vocab_ref();
  ts.expect("->");
  q.target = vocab_ref();
  ts.expect("{");
  std::optional<int> arity;
  std::optional<Formula> universe;
  std::map<std::string, Formula> rels;
  std::map<std::string, Formula> consts;
  while (!ts.accept("}")) {
    if (ts.accept(";")) continue;
    const detail::Token key = ts.peek();
    if (ts.accept("arity")) {
      ts.expect("=");
      arity = static_cast<int>(ts.expect_number("arity"));
      continue;
    }
    if (ts.accept("universe")) {
      ts.expect("=");
      universe = detail::parse_formula_stream(ts, q.source);
      continue;
    }
    bool is_const = ts.accept("const");
    const detail::Token sym_tok = ts.peek();
    std::string symbol = ts.expect_ident(is_const ? "constant name" : "relation name");
    ts.expect("=");
    Formula f = detail::parse_formula_stream(ts, q.source);
    bool known = is_const ? q.target->find_constant(symbol).has_value()
                          : q.target->find_relation(symbol).has_value();
    if (!known) {
      throw ParseError("'" + symbol + "' is not a " + std::string(is_const ? "constant" : "relation") +
                           " of " + q.target->name(),
                       sym_tok.line, sym_tok.column);
    }
    auto& table = is_const ? consts : rels;
    if (!table.emplace(symbol, f).second) {
      throw ParseError("'" + symbol + "' defined twice", key.line, key.column);
    }
  }
  if (!ts.at_end()) ts.fail("unexpected input after fop definition");
  if (!arity) throw ParseError("fop " + q.name + " has no arity", start.line, start.column);
  q.arity = *arity;
  q.universe = universe.value_or(Formula::truth(true));
  for (const auto& r : q.target->relations()) {
    auto it = rels.find(r.name);
    if (it == rels.end()) {
      throw ParseError("fop " + q.name + " does not define " + r.name, start.line, start.column);
    }
    q.relations.push_back(it->second);
  }
  for (const auto& c : q.target->constants()) {
    auto it = consts.find(c);
    if (it == consts.end()) {
      throw ParseError("fop " + q.name + " does not define constant " + c, start.line,
                       start.column);
    }
    q.constants.push_back(it->second);
  }
  try {
    check_query(q);
  } catch (const ValidationError& e) {
    throw ParseError(e.what(), start.line, start.column);
  }
  return q;
}

std::string serialize_fop(const FirstOrderQuery& q) {
  std::ostringstream out;
  if (q.source->name() == q.target->name() && !(*q.source == *q.target)) {
    throw ValidationError("source and target vocabularies share the name " + q.source->name());
  }
  for (const auto& v : {q.source, q.target}) {
    if (v == q.target && q.source->name() == q.target->name()) break;
    if (!vocab::builtin(v->name()) || !(*vocab::builtin(v->name()) == *v)) {
      out << serialize_vocabulary(*v);
    }
  }
  out << "fop " << q.name << " : " << q.source->name() << " -> " << q.target->name() << " {\n";
  out << "  arity = " << q.arity << " ;\n";
  out << "  universe = " << to_string(q.universe) << " ;\n";
  for (std::size_t i = 0; i < q.relations.size(); ++i) {
    out << "  " << q.target->relations()[i].name << " = " << to_string(q.relations[i]) << " ;\n";
  }
  for (std::size_t i = 0; i < q.constants.size(); ++i) {
    out << "  const " << q.target->constants()[i] << " = " << to_string(q.constants[i]) << " ;\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace fopkit
