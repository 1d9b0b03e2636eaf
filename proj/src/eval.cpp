#include "fopkit/eval.hpp"

#include <algorithm>

#include "fopkit/error.hpp"

namespace fopkit {

namespace {

constexpr std::size_t kMaxAtomArity = 16;

std::size_t tuple_index(const Element* args, std::size_t arity, Element n) {
  std::size_t idx = 0;
  for (std::size_t i = 0; i < arity; ++i) idx = idx * n + args[i];
  return idx;
}

bool numeric(NumericRelation rel, const Element* v) {
  const std::uint64_t x = v[0];
  const std::uint64_t y = v[1];
  switch (rel) {
    case NumericRelation::Le: return x <= y;
    case NumericRelation::Bit: return y < 64 && ((x >> y) & 1u) != 0;
    case NumericRelation::Plus: return x + y == v[2];
    case NumericRelation::Times: return x * y == v[2];
    case NumericRelation::Suc: return y == x + 1;
  }
  return false;
}

using Kind = Residual::Kind;

Residual negate(Residual r) {
  switch (r.kind) {
    case Kind::False: return Residual::constant(true);
    case Kind::True: return Residual::constant(false);
    case Kind::Literal: r.literal.positive = !r.literal.positive; return r;
    case Kind::Complex: return r;
  }
  return r;
}

bool same_atom(const ResidualLiteral& a, const ResidualLiteral& b) {
  return a.relation == b.relation && a.args == b.args;
}

Residual join(const Residual& a, const Residual& b, bool disjunction) {
  const Kind absorbing = disjunction ? Kind::True : Kind::False;
  const Kind neutral = disjunction ? Kind::False : Kind::True;
  if (a.kind == absorbing || b.kind == absorbing) return {absorbing, {}};
  if (a.kind == neutral) return b;
  if (b.kind == neutral) return a;
  if (a.kind == Kind::Literal && b.kind == Kind::Literal && same_atom(a.literal, b.literal)) {
    if (a.literal.positive == b.literal.positive) return a;
    return {absorbing, {}};
  }
  return {Kind::Complex, {}};
}

Residual equivalence(const Residual& a, const Residual& b) {
  if (a.kind == Kind::True) return b;
  if (b.kind == Kind::True) return a;
  if (a.kind == Kind::False) return negate(b);
  if (b.kind == Kind::False) return negate(a);
  if (a.kind == Kind::Literal && b.kind == Kind::Literal && same_atom(a.literal, b.literal)) {
    return Residual::constant(a.literal.positive == b.literal.positive);
  }
  return {Kind::Complex, {}};
}

}  // namespace

CompiledFormula::CompiledFormula(const Formula& f, const Vocabulary& vocab,
                                 std::vector<std::string> free_variables,
                                 std::vector<SoVariable> so_variables)
    : free_(std::move(free_variables)), so_(std::move(so_variables)) {
  for (const auto& v : so_) {
    if (v.arity < 1) throw EvalError("relation variable '" + v.name + "' has arity < 1");
  }
  std::vector<std::pair<std::string, std::uint32_t>> scope;
  for (std::uint32_t i = 0; i < free_.size(); ++i) scope.push_back({free_[i], i});
  slot_count_ = free_.size();
  root_ = compile(f, vocab, scope);
}

std::uint32_t CompiledFormula::compile(
    const Formula& f, const Vocabulary& vocab,
    std::vector<std::pair<std::string, std::uint32_t>>& scope) {
  Node node{};
  auto add_terms = [&] {
    node.first = static_cast<std::uint32_t>(terms_.size());
    node.count = static_cast<std::uint32_t>(f.terms().size());
    if (node.count > kMaxAtomArity) throw EvalError("atom arity too large");
    for (const Term& t : f.terms()) {
      switch (t.kind) {
        case TermKind::Number:
          terms_.push_back({TermOp::Number, t.value});
          break;
        case TermKind::Max:
          terms_.push_back({TermOp::Max, 0});
          break;
        case TermKind::Constant: {
          auto c = vocab.find_constant(t.name);
          if (!c) throw EvalError("unknown constant '" + t.name + "'");
          terms_.push_back({TermOp::Constant, static_cast<std::uint32_t>(*c)});
          break;
        }
        case TermKind::Variable: {
          auto it = std::find_if(scope.rbegin(), scope.rend(),
                                 [&](const auto& s) { return s.first == t.name; });
          if (it == scope.rend()) throw EvalError("unbound variable '" + t.name + "'");
          terms_.push_back({TermOp::Slot, it->second});
          break;
        }
      }
    }
  };
  std::vector<std::uint32_t> kids;
  switch (f.kind()) {
    case FormulaKind::True: node.op = Op::True; break;
    case FormulaKind::False: node.op = Op::False; break;
    case FormulaKind::Not:
    case FormulaKind::And:
    case FormulaKind::Or:
    case FormulaKind::Implies:
    case FormulaKind::Iff:
    case FormulaKind::Xor: {
      static constexpr Op ops[] = {Op::Not, Op::And, Op::Or, Op::Implies, Op::Iff, Op::Xor};
      node.op = ops[static_cast<int>(f.kind()) - static_cast<int>(FormulaKind::Not)];
      for (const auto& c : f.children()) kids.push_back(compile(c, vocab, scope));
      break;
    }
    case FormulaKind::Forall:
    case FormulaKind::Exists: {
      node.op = f.kind() == FormulaKind::Forall ? Op::Forall : Op::Exists;
      node.index = static_cast<std::uint32_t>(slot_count_++);
      scope.push_back({f.name(), node.index});
      kids.push_back(compile(f.child(), vocab, scope));
      scope.pop_back();
      break;
    }
    case FormulaKind::SoExists:
    case FormulaKind::SoForall:
      throw EvalError("second-order quantifier on '" + f.name() +
                      "' where a first-order formula is expected");
    case FormulaKind::Relation: {
      auto r = vocab.find_relation(f.name());
      if (!r) throw EvalError("relation '" + f.name() + "' not in vocabulary " + vocab.name());
      if (vocab.relations()[*r].arity != static_cast<int>(f.terms().size())) {
        throw EvalError("arity mismatch at '" + f.name() + "'");
      }
      node.op = Op::Rel;
      node.index = static_cast<std::uint32_t>(*r);
      add_terms();
      break;
    }
    case FormulaKind::SoAtom: {
      auto it = std::find_if(so_.begin(), so_.end(),
                             [&](const SoVariable& v) { return v.name == f.name(); });
      if (it == so_.end()) throw EvalError("unbound relation variable '" + f.name() + "'");
      if (it->arity != static_cast<int>(f.terms().size())) {
        throw EvalError("arity mismatch at '" + f.name() + "'");
      }
      node.op = Op::So;
      node.index = static_cast<std::uint32_t>(it - so_.begin());
      add_terms();
      break;
    }
    case FormulaKind::Numeric:
      node.op = Op::Num;
      node.numeric = f.numeric();
      add_terms();
      break;
    case FormulaKind::Equal:
      node.op = Op::Eq;
      add_terms();
      break;
  }
  if (!kids.empty()) {
    node.first = static_cast<std::uint32_t>(children_.size());
    node.count = static_cast<std::uint32_t>(kids.size());
    children_.insert(children_.end(), kids.begin(), kids.end());
  }
  nodes_.push_back(node);
  return static_cast<std::uint32_t>(nodes_.size() - 1);
}

bool CompiledFormula::resolve(const Node& node, Element n, const Element* slots,
                              const Structure* a, Element* out) const {
  for (std::uint32_t i = 0; i < node.count; ++i) {
    const CTerm& t = terms_[node.first + i];
    switch (t.op) {
      case TermOp::Slot: out[i] = slots[t.value]; break;
      case TermOp::Number:
        if (t.value >= n) return false;
        out[i] = t.value;
        break;
      case TermOp::Max: out[i] = n - 1; break;
      case TermOp::Constant: out[i] = a->constant(t.value); break;
    }
  }
  return true;
}

bool CompiledFormula::run(std::uint32_t id, const Structure& a, Element* slots,
                          const std::uint64_t* so) const {
  const Node& node = nodes_[id];
  const std::uint32_t* kids = children_.data() + node.first;
  switch (node.op) {
    case Op::True: return true;
    case Op::False: return false;
    case Op::Not: return !run(kids[0], a, slots, so);
    case Op::And:
      for (std::uint32_t i = 0; i < node.count; ++i) {
        if (!run(kids[i], a, slots, so)) return false;
      }
      return true;
    case Op::Or:
      for (std::uint32_t i = 0; i < node.count; ++i) {
        if (run(kids[i], a, slots, so)) return true;
      }
      return false;
    case Op::Implies: return !run(kids[0], a, slots, so) || run(kids[1], a, slots, so);
    case Op::Iff: return run(kids[0], a, slots, so) == run(kids[1], a, slots, so);
    case Op::Xor: return run(kids[0], a, slots, so) != run(kids[1], a, slots, so);
    case Op::Forall:
    case Op::Exists: {
      const bool want = node.op == Op::Exists;
      for (Element v = 0; v < a.size(); ++v) {
        slots[node.index] = v;
        if (run(kids[0], a, slots, so) == want) return want;
      }
      return !want;
    }
    case Op::Rel:
    case Op::So:
    case Op::Num:
    case Op::Eq: {
      Element args[kMaxAtomArity];
      if (!resolve(node, a.size(), slots, &a, args)) return false;
      if (node.op == Op::Eq) return args[0] == args[1];
      if (node.op == Op::Num) return numeric(node.numeric, args);
      const std::size_t idx = tuple_index(args, node.count, a.size());
      if (node.op == Op::Rel) return a.relation(node.index).test(idx);
      return (so[node.index] >> idx) & 1u;
    }
  }
  return false;
}

bool CompiledFormula::eval(const Structure& a, std::span<Element> slots,
                           std::span<const std::uint64_t> so_bits) const {
  if (slots.size() < slot_count_) throw EvalError("too few variable slots");
  if (so_bits.size() < so_.size()) throw EvalError("too few relation-variable valuations");
  for (std::size_t i = 0; i < free_.size(); ++i) {
    if (slots[i] >= a.size()) throw EvalError("value of '" + free_[i] + "' out of range");
  }
  for (const auto& v : so_) {
    std::uint64_t bits = 1;
    for (int i = 0; i < v.arity; ++i) bits *= a.size();
    if (bits > 64) throw EvalError("relation variable '" + v.name + "' too large to evaluate");
  }
  return run(root_, a, slots.data(), so_bits.data());
}

bool CompiledFormula::operator()(const Structure& a, std::span<const Element> free_values,
                                 std::span<const std::uint64_t> so_bits) const {
  if (free_values.size() != free_.size()) throw EvalError("wrong number of free values");
  std::vector<Element> slots(slot_count_, 0);
  std::copy(free_values.begin(), free_values.end(), slots.begin());
  return eval(a, slots, so_bits);
}

Residual CompiledFormula::residual(Element n, std::span<Element> slots) const {
  if (slots.size() < slot_count_) throw EvalError("too few variable slots");
  return run_residual(root_, n, slots.data());
}

Residual CompiledFormula::run_residual(std::uint32_t id, Element n, Element* slots) const {
  const Node& node = nodes_[id];
  const std::uint32_t* kids = children_.data() + node.first;
  switch (node.op) {
    case Op::True: return Residual::constant(true);
    case Op::False: return Residual::constant(false);
    case Op::Not: return negate(run_residual(kids[0], n, slots));
    case Op::And:
    case Op::Or: {
      const bool disjunction = node.op == Op::Or;
      Residual acc = Residual::constant(!disjunction);
      for (std::uint32_t i = 0; i < node.count; ++i) {
        acc = join(acc, run_residual(kids[i], n, slots), disjunction);
        if (acc.kind == (disjunction ? Kind::True : Kind::False)) break;
      }
      return acc;
    }
    case Op::Implies:
      return join(negate(run_residual(kids[0], n, slots)), run_residual(kids[1], n, slots), true);
    case Op::Iff: return equivalence(run_residual(kids[0], n, slots), run_residual(kids[1], n, slots));
    case Op::Xor:
      return negate(equivalence(run_residual(kids[0], n, slots), run_residual(kids[1], n, slots)));
    case Op::Forall:
    case Op::Exists: {
      const bool disjunction = node.op == Op::Exists;
      Residual acc = Residual::constant(!disjunction);
      for (Element v = 0; v < n; ++v) {
        slots[node.index] = v;
        acc = join(acc, run_residual(kids[0], n, slots), disjunction);
        if (acc.kind == (disjunction ? Kind::True : Kind::False)) break;
      }
      return acc;
    }
    case Op::So: return {Kind::Complex, {}};
    case Op::Rel:
    case Op::Num:
    case Op::Eq: {
      for (std::uint32_t i = 0; i < node.count; ++i) {
        if (terms_[node.first + i].op == TermOp::Constant) return {Kind::Complex, {}};
      }
      Element args[kMaxAtomArity];
      if (!resolve(node, n, slots, nullptr, args)) return Residual::constant(false);
      if (node.op == Op::Eq) return Residual::constant(args[0] == args[1]);
      if (node.op == Op::Num) return Residual::constant(numeric(node.numeric, args));
      Residual r{Kind::Literal, {}};
      r.literal.relation = node.index;
      r.literal.args.assign(args, args + node.count);
      return r;
    }
  }
  return {Kind::Complex, {}};
}

bool eval_fo(const Structure& a, const Formula& f, const Environment& env) {
  std::vector<std::string> names;
  std::vector<Element> values;
  for (const auto& [name, value] : env) {
    names.push_back(name);
    values.push_back(value);
  }
  CompiledFormula compiled(f, a.vocabulary(), names);
  return compiled(a, values);
}

SoPrefix split_so_prefix(const Formula& f) {
  SoPrefix prefix;
  const Formula* cur = &f;
  while (cur->is_so_quantifier()) {
    prefix.entries.push_back(
        {cur->kind() == FormulaKind::SoExists, SoVariable{cur->name(), cur->arity()}});
    cur = &cur->child();
  }
  prefix.matrix = *cur;
  return prefix;
}

namespace {

bool search(const CompiledFormula& matrix, const SoPrefix& prefix, const Structure& a,
            std::vector<std::uint64_t>& bits, std::vector<Element>& slots, std::size_t level) {
  if (level == prefix.entries.size()) return matrix.eval(a, slots, bits);
  const auto& entry = prefix.entries[level];
  std::uint64_t width = 1;
  for (int i = 0; i < entry.variable.arity; ++i) width *= a.size();
  const std::uint64_t last = width >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << width) - 1;
  for (std::uint64_t v = 0;; ++v) {
    bits[level] = v;
    if (search(matrix, prefix, a, bits, slots, level + 1) == entry.existential) {
      return entry.existential;
    }
    if (v == last) break;
  }
  return !entry.existential;
}

void check_budget(const SoPrefix& prefix, Element n, int budget_bits) {
  std::uint64_t block = 0;
  for (std::size_t i = 0; i < prefix.entries.size(); ++i) {
    if (i > 0 && prefix.entries[i].existential != prefix.entries[i - 1].existential) block = 0;
    std::uint64_t width = 1;
    for (int j = 0; j < prefix.entries[i].variable.arity && width <= 64; ++j) width *= n;
    block += width;
    if (block > static_cast<std::uint64_t>(budget_bits) || width > 63) {
      throw BudgetExceeded("second-order block needs " + std::to_string(block) +
                           " valuation bits, budget is " + std::to_string(budget_bits));
    }
  }
}

// True when the prefix has at most two blocks and, with two, the first has
// the given polarity.
bool has_shape(const SoPrefix& prefix, bool first_existential) {
  int blocks = 0;
  bool current = !first_existential;
  bool started = false;
  for (const auto& e : prefix.entries) {
    if (!started || e.existential != current) {
      if (!started && e.existential != first_existential) ++blocks;
      ++blocks;
      current = e.existential;
      started = true;
    }
  }
  return blocks <= 2;
}

}  // namespace

bool eval_so(const Structure& a, const Formula& f, int budget_bits) {
  SoPrefix prefix = split_so_prefix(f);
  check_budget(prefix, a.size(), budget_bits);
  std::vector<SoVariable> vars;
  for (const auto& e : prefix.entries) vars.push_back(e.variable);
  CompiledFormula matrix(prefix.matrix, a.vocabulary(), {}, vars);
  std::vector<std::uint64_t> bits(vars.size(), 0);
  std::vector<Element> slots(matrix.slot_count(), 0);
  return search(matrix, prefix, a, bits, slots, 0);
}

bool eval_so2(const Structure& a, const Formula& f, int budget_bits) {
  if (!has_shape(split_so_prefix(f), true)) {
    throw EvalError("second-order prefix is not of the form exists* forall*");
  }
  return eval_so(a, f, budget_bits);
}

bool eval_pi2(const Structure& a, const Formula& f, int budget_bits) {
  if (!has_shape(split_so_prefix(f), false)) {
    throw EvalError("second-order prefix is not of the form forall* exists*");
  }
  return eval_so(a, f, budget_bits);
}

}  // namespace fopkit
