#include "fopkit/structure.hpp"

#include <algorithm>
#include <set>

#include "fopkit/error.hpp"

namespace fopkit {

namespace {

constexpr std::string_view kReserved[] = {"<=", "BIT", "PLUS", "TIMES", "SUC", "0", "1", "max"};

std::size_t checked_power(Element base, int exponent) {
  std::size_t result = 1;
  for (int i = 0; i < exponent; ++i) {
    if (base != 0 && result > (std::size_t{1} << 40) / base) {
      throw BudgetExceeded("relation table of arity " + std::to_string(exponent) +
                           " over " + std::to_string(base) + " elements is too large");
    }
    result *= base;
  }
  return result;
}

}  // namespace

std::optional<NumericRelation> numeric_relation(std::string_view name) {
  if (name == "<=") return NumericRelation::Le;
  if (name == "BIT") return NumericRelation::Bit;
  if (name == "PLUS") return NumericRelation::Plus;
  if (name == "TIMES") return NumericRelation::Times;
  if (name == "SUC") return NumericRelation::Suc;
  return std::nullopt;
}

int numeric_arity(NumericRelation rel) {
  switch (rel) {
    case NumericRelation::Plus:
    case NumericRelation::Times:
      return 3;
    default:
      return 2;
  }
}

std::string_view numeric_name(NumericRelation rel) {
  switch (rel) {
    case NumericRelation::Le: return "<=";
    case NumericRelation::Bit: return "BIT";
    case NumericRelation::Plus: return "PLUS";
    case NumericRelation::Times: return "TIMES";
    case NumericRelation::Suc: return "SUC";
  }
  return "?";
}

bool is_reserved_symbol(std::string_view name) {
  return std::find(std::begin(kReserved), std::end(kReserved), name) != std::end(kReserved);
}

Vocabulary::Vocabulary(std::string name, std::vector<RelationSymbol> relations,
                       std::vector<std::string> constants)
    : name_(std::move(name)), relations_(std::move(relations)), constants_(std::move(constants)) {
  std::set<std::string> seen;
  auto claim = [&](const std::string& symbol) {
    if (symbol.empty()) throw ValidationError("empty symbol name in vocabulary " + name_);
    if (is_reserved_symbol(symbol)) {
      throw ValidationError("symbol '" + symbol + "' is numeric and may not be re-declared");
    }
    if (!seen.insert(symbol).second) {
      throw ValidationError("duplicate symbol '" + symbol + "' in vocabulary " + name_);
    }
  };
  for (const auto& rel : relations_) {
    claim(rel.name);
    if (rel.arity < 1) {
      throw ValidationError("relation '" + rel.name + "' must have arity >= 1");
    }
  }
  for (const auto& c : constants_) claim(c);
}

std::optional<std::size_t> Vocabulary::find_relation(std::string_view name) const {
  for (std::size_t i = 0; i < relations_.size(); ++i) {
    if (relations_[i].name == name) return i;
  }
  return std::nullopt;
}

std::optional<std::size_t> Vocabulary::find_constant(std::string_view name) const {
  for (std::size_t i = 0; i < constants_.size(); ++i) {
    if (constants_[i] == name) return i;
  }
  return std::nullopt;
}

VocabularyPtr make_vocabulary(std::string name, std::vector<RelationSymbol> relations,
                              std::vector<std::string> constants) {
  return std::make_shared<const Vocabulary>(std::move(name), std::move(relations),
                                            std::move(constants));
}

bool same_vocabulary(const VocabularyPtr& a, const VocabularyPtr& b) {
  return a == b || (a && b && *a == *b);
}

namespace vocab {

VocabularyPtr graph() {
  static const VocabularyPtr v = make_vocabulary("graph", {{"E", 2}});
  return v;
}

VocabularyPtr dnf() {
  static const VocabularyPtr v = make_vocabulary("dnf", {{"E", 1}, {"Q", 2}, {"M", 2}});
  return v;
}

VocabularyPtr cnf() {
  static const VocabularyPtr v = make_vocabulary("cnf", {{"E", 1}, {"P", 2}, {"N", 2}});
  return v;
}

VocabularyPtr vcsat() {
  static const VocabularyPtr v =
      make_vocabulary("vcsat", {{"P", 2}, {"N", 2}, {"V", 2}, {"K", 1}});
  return v;
}

VocabularyPtr builtin(std::string_view name) {
  if (name == "graph") return graph();
  if (name == "dnf") return dnf();
  if (name == "cnf") return cnf();
  if (name == "vcsat") return vcsat();
  return nullptr;
}

}  // namespace vocab

Relation::Relation(int arity, Element size)
    : arity_(arity), size_(size), capacity_(checked_power(size, arity)),
      words_((capacity_ + 63) / 64, 0) {}

std::optional<std::size_t> Relation::index_of(std::span<const Element> tuple) const {
  if (tuple.size() != static_cast<std::size_t>(arity_)) return std::nullopt;
  std::size_t index = 0;
  for (Element e : tuple) {
    if (e >= size_) return std::nullopt;
    index = index * size_ + e;
  }
  return index;
}

Tuple Relation::tuple_at(std::size_t index) const {
  Tuple t(static_cast<std::size_t>(arity_));
  for (int i = arity_ - 1; i >= 0; --i) {
    t[static_cast<std::size_t>(i)] = static_cast<Element>(index % size_);
    index /= size_;
  }
  return t;
}

void Relation::set(std::size_t index, bool value) {
  const std::uint64_t bit = std::uint64_t{1} << (index & 63);
  if (value) {
    words_[index >> 6] |= bit;
  } else {
    words_[index >> 6] &= ~bit;
  }
}

bool Relation::contains(std::span<const Element> tuple) const {
  auto index = index_of(tuple);
  return index && test(*index);
}

void Relation::insert(std::span<const Element> tuple) {
  if (tuple.size() != static_cast<std::size_t>(arity_)) {
    throw ValidationError("arity mismatch: expected " + std::to_string(arity_) +
                          " elements, got " + std::to_string(tuple.size()));
  }
  auto index = index_of(tuple);
  if (!index) throw ValidationError("tuple element out of range for universe size " +
                                    std::to_string(size_));
  set(*index);
}

std::size_t Relation::count() const {
  std::size_t total = 0;
  for (auto w : words_) total += static_cast<std::size_t>(__builtin_popcountll(w));
  return total;
}

std::vector<Tuple> Relation::tuples() const {
  std::vector<Tuple> out;
  for (std::size_t i = 0; i < capacity_; ++i) {
    if (test(i)) out.push_back(tuple_at(i));
  }
  return out;
}

Structure::Structure(VocabularyPtr vocab, Element size, std::vector<Relation> relations,
                     std::vector<Element> constants)
    : vocab_(std::move(vocab)), size_(size), relations_(std::move(relations)),
      constants_(std::move(constants)) {
  if (!vocab_) throw ValidationError("structure without vocabulary");
  if (size_ < 1) throw ValidationError("structure universe must be non-empty");
  const auto& decl = vocab_->relations();
  if (relations_.size() != decl.size()) {
    throw ValidationError("expected " + std::to_string(decl.size()) + " relations, got " +
                          std::to_string(relations_.size()));
  }
  for (std::size_t i = 0; i < decl.size(); ++i) {
    if (relations_[i].arity() != decl[i].arity || relations_[i].universe_size() != size_) {
      throw ValidationError("relation table for '" + decl[i].name +
                            "' does not match its arity or the universe size");
    }
  }
  if (constants_.size() != vocab_->constants().size()) {
    throw ValidationError("expected " + std::to_string(vocab_->constants().size()) +
                          " constants, got " + std::to_string(constants_.size()));
  }
  for (std::size_t i = 0; i < constants_.size(); ++i) {
    if (constants_[i] >= size_) {
      throw ValidationError("constant '" + vocab_->constants()[i] + "' out of range");
    }
  }
}

Structure Structure::empty(VocabularyPtr vocab, Element size) {
  std::vector<Relation> rels;
  for (const auto& r : vocab->relations()) rels.emplace_back(r.arity, size);
  std::vector<Element> consts(vocab->constants().size(), 0);
  return Structure(std::move(vocab), size, std::move(rels), std::move(consts));
}

const Relation& Structure::relation(std::string_view name) const {
  auto i = vocab_->find_relation(name);
  if (!i) throw ValidationError("unknown relation '" + std::string(name) + "'");
  return relations_[*i];
}

bool operator==(const Structure& a, const Structure& b) {
  return same_vocabulary(a.vocab_, b.vocab_) && a.size_ == b.size_ &&
         a.relations_ == b.relations_ && a.constants_ == b.constants_;
}

Structure make_structure(VocabularyPtr vocab, Element size,
                         const std::map<std::string, std::vector<Tuple>>& relations,
                         const std::map<std::string, Element>& constants) {
  if (!vocab) throw ValidationError("structure without vocabulary");
  if (size < 1) throw ValidationError("structure universe must be non-empty");
  for (const auto& [name, tuples] : relations) {
    (void)tuples;
    if (!vocab->find_relation(name)) {
      throw ValidationError("relation '" + name + "' is not declared in " + vocab->name());
    }
  }
  for (const auto& [name, value] : constants) {
    (void)value;
    if (!vocab->find_constant(name)) {
      throw ValidationError("constant '" + name + "' is not declared in " + vocab->name());
    }
  }
  std::vector<Relation> rels;
  for (const auto& decl : vocab->relations()) {
    Relation rel(decl.arity, size);
    auto it = relations.find(decl.name);
    if (it == relations.end()) {
      throw ValidationError("missing relation '" + decl.name + "'");
    }
    for (const auto& t : it->second) {
      if (t.size() != static_cast<std::size_t>(decl.arity)) {
        throw ValidationError("arity mismatch in '" + decl.name + "': expected " +
                              std::to_string(decl.arity) + ", got " + std::to_string(t.size()));
      }
      for (Element e : t) {
        if (e >= size) {
          throw ValidationError("tuple element " + std::to_string(e) + " of '" + decl.name +
                                "' out of range for size " + std::to_string(size));
        }
      }
      rel.insert(t);
    }
    rels.push_back(std::move(rel));
  }
  std::vector<Element> consts;
  for (const auto& c : vocab->constants()) {
    auto it = constants.find(c);
    if (it == constants.end()) throw ValidationError("missing constant '" + c + "'");
    if (it->second >= size) {
      throw ValidationError("constant '" + c + "' out of range for size " + std::to_string(size));
    }
    consts.push_back(it->second);
  }
  return Structure(std::move(vocab), size, std::move(rels), std::move(consts));
}

bool numeric_holds(NumericRelation rel, std::span<const Element> args, Element n) {
  if (args.size() != static_cast<std::size_t>(numeric_arity(rel))) {
    throw ValidationError("numeric relation " + std::string(numeric_name(rel)) + " expects " +
                          std::to_string(numeric_arity(rel)) + " arguments");
  }
  for (Element a : args) {
    if (a >= n) throw ValidationError("numeric argument " + std::to_string(a) + " out of range");
  }
  const std::uint64_t x = args[0];
  const std::uint64_t y = args[1];
  switch (rel) {
    case NumericRelation::Le: return x <= y;
    case NumericRelation::Bit: return y < 64 && ((x >> y) & 1u) != 0;
    case NumericRelation::Plus: return x + y == args[2];
    case NumericRelation::Times: return x * y == args[2];
    case NumericRelation::Suc: return y == x + 1;
  }
  return false;
}

bool numeric_holds(std::string_view symbol, std::span<const Element> args, Element n) {
  auto rel = numeric_relation(symbol);
  if (!rel) throw ValidationError("unknown numeric relation '" + std::string(symbol) + "'");
  return numeric_holds(*rel, args, n);
}

std::optional<std::uint64_t> structure_count(const Vocabulary& vocab, Element size) {
  unsigned __int128 count = 1;
  const unsigned __int128 limit = ~std::uint64_t{0};
  for (const auto& r : vocab.relations()) {
    unsigned __int128 cap = 1;
    for (int i = 0; i < r.arity; ++i) {
      cap *= size;
      if (cap > 64) return std::nullopt;
    }
    for (unsigned __int128 i = 0; i < cap; ++i) {
      count *= 2;
      if (count > limit) return std::nullopt;
    }
  }
  for (std::size_t i = 0; i < vocab.constants().size(); ++i) {
    count *= size;
    if (count > limit) return std::nullopt;
  }
  return static_cast<std::uint64_t>(count);
}

StructureSpace::StructureSpace(VocabularyPtr vocab, Element size, std::uint64_t budget)
    : vocab_(std::move(vocab)), size_(size) {
  if (size_ < 1) throw ValidationError("structure universe must be non-empty");
  auto count = structure_count(*vocab_, size_);
  if (!count || *count > budget) {
    throw BudgetExceeded("enumerating all " + vocab_->name() + " structures of size " +
                         std::to_string(size_) + " exceeds the budget of " +
                         std::to_string(budget));
  }
  count_ = *count;
  for (const auto& r : vocab_->relations()) capacities_.push_back(checked_power(size_, r.arity));
}

Structure StructureSpace::at(std::uint64_t index) const {
  std::vector<Relation> rels;
  const auto& decl = vocab_->relations();
  for (std::size_t r = 0; r < decl.size(); ++r) {
    Relation rel(decl[r].arity, size_);
    for (std::size_t i = 0; i < capacities_[r]; ++i) {
      if (index & 1u) rel.set(i);
      index >>= 1;
    }
    rels.push_back(std::move(rel));
  }
  std::vector<Element> consts;
  for (std::size_t c = 0; c < vocab_->constants().size(); ++c) {
    consts.push_back(static_cast<Element>(index % size_));
    index /= size_;
  }
  return Structure(vocab_, size_, std::move(rels), std::move(consts));
}

void enumerate_structures(const VocabularyPtr& vocab, Element size,
                          const std::function<void(const Structure&)>& visit,
                          std::uint64_t budget) {
  StructureSpace space(vocab, size, budget);
  for (std::uint64_t i = 0; i < space.count(); ++i) visit(space.at(i));
}

}  // namespace fopkit
