#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fopkit {

using Element = std::uint32_t;
using Tuple = std::vector<Element>;

struct RelationSymbol {
  std::string name;
  int arity = 1;

  friend bool operator==(const RelationSymbol&, const RelationSymbol&) = default;
};

// The built-in numeric relations. The numeric constants 0, 1 and max are
// terms, not relations.
enum class NumericRelation { Le, Bit, Plus, Times, Suc };

std::optional<NumericRelation> numeric_relation(std::string_view name);
int numeric_arity(NumericRelation rel);
std::string_view numeric_name(NumericRelation rel);

// True for every name reserved by the numeric part of each vocabulary.
bool is_reserved_symbol(std::string_view name);

class Vocabulary {
 public:
  Vocabulary(std::string name, std::vector<RelationSymbol> relations,
             std::vector<std::string> constants = {});

  const std::string& name() const { return name_; }
  const std::vector<RelationSymbol>& relations() const { return relations_; }
  const std::vector<std::string>& constants() const { return constants_; }

  std::optional<std::size_t> find_relation(std::string_view name) const;
  std::optional<std::size_t> find_constant(std::string_view name) const;

  friend bool operator==(const Vocabulary&, const Vocabulary&) = default;

 private:
  std::string name_;
  std::vector<RelationSymbol> relations_;
  std::vector<std::string> constants_;
};

using VocabularyPtr = std::shared_ptr<const Vocabulary>;

VocabularyPtr make_vocabulary(std::string name, std::vector<RelationSymbol> relations,
                              std::vector<std::string> constants = {});

bool same_vocabulary(const VocabularyPtr& a, const VocabularyPtr& b);

// The vocabularies of the problems in this library.
namespace vocab {
VocabularyPtr graph();  // E/2
VocabularyPtr dnf();    // E/1 Q/2 M/2
VocabularyPtr cnf();    // E/1 P/2 N/2
VocabularyPtr vcsat();  // P/2 N/2 V/2 K/1
// Looks up one of the above by name.
VocabularyPtr builtin(std::string_view name);
}  // namespace vocab

// Dense table over universe^arity. Bit order is the lexicographic order of
// tuples, so iteration yields tuples sorted.
class Relation {
 public:
  Relation(int arity, Element size);

  int arity() const { return arity_; }
  Element universe_size() const { return size_; }
  std::size_t capacity() const { return capacity_; }

  // Position of a tuple in lexicographic order; nullopt when out of range.
  std::optional<std::size_t> index_of(std::span<const Element> tuple) const;
  Tuple tuple_at(std::size_t index) const;

  bool test(std::size_t index) const { return (words_[index >> 6] >> (index & 63)) & 1u; }
  void set(std::size_t index, bool value = true);

  bool contains(std::span<const Element> tuple) const;
  void insert(std::span<const Element> tuple);

  std::size_t count() const;
  std::vector<Tuple> tuples() const;

  friend bool operator==(const Relation&, const Relation&) = default;

 private:
  int arity_;
  Element size_;
  std::size_t capacity_;
  std::vector<std::uint64_t> words_;
};

class Structure {
 public:
  // Validates that the relation tables match the declared arities and the
  // universe size, and that constants lie in the universe.
  Structure(VocabularyPtr vocab, Element size, std::vector<Relation> relations,
            std::vector<Element> constants = {});

  // Every relation empty, every constant 0.
  static Structure empty(VocabularyPtr vocab, Element size);

  const VocabularyPtr& vocabulary_ptr() const { return vocab_; }
  const Vocabulary& vocabulary() const { return *vocab_; }
  Element size() const { return size_; }

  const Relation& relation(std::size_t i) const { return relations_[i]; }
  const Relation& relation(std::string_view name) const;
  const std::vector<Relation>& relations() const { return relations_; }
  Element constant(std::size_t i) const { return constants_[i]; }
  const std::vector<Element>& constants() const { return constants_; }

  bool holds(std::size_t rel, std::span<const Element> tuple) const {
    return relations_[rel].contains(tuple);
  }

  friend bool operator==(const Structure& a, const Structure& b);

 private:
  VocabularyPtr vocab_;
  Element size_;
  std::vector<Relation> relations_;
  std::vector<Element> constants_;
};

// Builds a structure from named tuple sets. Every declared symbol must be
// given exactly once (relations may be omitted only if empty is intended:
// pass an empty vector).
Structure make_structure(VocabularyPtr vocab, Element size,
                         const std::map<std::string, std::vector<Tuple>>& relations,
                         const std::map<std::string, Element>& constants = {});

// Standard interpretation of the numeric relations on {0..n-1}. BIT(x,j) reads
// bit j of x with j = 0 the least significant bit.
bool numeric_holds(NumericRelation rel, std::span<const Element> args, Element n);
bool numeric_holds(std::string_view symbol, std::span<const Element> args, Element n);

// Default cap on the number of structures an exhaustive sweep may visit.
inline constexpr std::uint64_t kDefaultStructureBudget = std::uint64_t{1} << 24;

// Every structure over a vocabulary with a fixed universe size, addressable by
// index. Index order: relation bits are binary digits (first relation, first
// tuple least significant) followed by constants as base-n digits.
class StructureSpace {
 public:
  StructureSpace(VocabularyPtr vocab, Element size,
                 std::uint64_t budget = kDefaultStructureBudget);

  std::uint64_t count() const { return count_; }
  Structure at(std::uint64_t index) const;

  const VocabularyPtr& vocabulary() const { return vocab_; }
  Element size() const { return size_; }

 private:
  VocabularyPtr vocab_;
  Element size_;
  std::vector<std::size_t> capacities_;
  std::uint64_t count_;
};

// Number of structures, or nullopt when it does not fit in 64 bits.
std::optional<std::uint64_t> structure_count(const Vocabulary& vocab, Element size);

void enumerate_structures(const VocabularyPtr& vocab, Element size,
                          const std::function<void(const Structure&)>& visit,
                          std::uint64_t budget = kDefaultStructureBudget);

}  // namespace fopkit
