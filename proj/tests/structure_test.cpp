#include <set>

#include "doctest.h"
#include "fopkit/error.hpp"
#include "fopkit/structure.hpp"
#include "fopkit/structure_io.hpp"

using namespace fopkit;

TEST_CASE("make_structure builds K3 from the distinct pairs") {
  std::vector<Tuple> pairs;
  for (Element u = 0; u < 3; ++u) {
    for (Element v = 0; v < 3; ++v) {
      if (u != v) pairs.push_back({u, v});
    }
  }
  const Structure k3 = make_structure(vocab::graph(), 3, {{"E", pairs}});
  CHECK(k3.size() == 3);
  CHECK(k3.relation("E").count() == 6);
  CHECK(k3.relation("E").contains(Tuple{2, 0}));
  CHECK_FALSE(k3.relation("E").contains(Tuple{1, 1}));
}

TEST_CASE("make_structure rejects out-of-range tuples and missing symbols") {
  CHECK_THROWS_AS(make_structure(vocab::graph(), 2, {{"E", {{0, 2}}}}), ValidationError);
  CHECK_THROWS_AS(make_structure(vocab::graph(), 2, {{"E", {{0}}}}), ValidationError);
  CHECK_THROWS_AS(make_structure(vocab::graph(), 2, {{"F", {}}}), ValidationError);
}

TEST_CASE("a dnf structure only needs the right shape") {
  const Structure a =
      make_structure(vocab::dnf(), 2, {{"E", {{0}}}, {"Q", {{0, 0}}}, {"M", {}}});
  CHECK(a.relation("E").count() == 1);
  CHECK(a.relation("M").count() == 0);
}

TEST_CASE("numeric relations") {
  CHECK(numeric_holds("BIT", Tuple{2, 1}, 4));
  CHECK_FALSE(numeric_holds("BIT", Tuple{2, 0}, 4));
  CHECK(numeric_holds("BIT", Tuple{1, 0}, 4));
  CHECK(numeric_holds("PLUS", Tuple{1, 1, 2}, 3));
  CHECK_FALSE(numeric_holds("PLUS", Tuple{2, 2, 1}, 3));
  CHECK(numeric_holds("TIMES", Tuple{2, 2, 4}, 5));
  CHECK(numeric_holds("SUC", Tuple{1, 2}, 3));
  for (Element y = 0; y < 4; ++y) CHECK_FALSE(numeric_holds("SUC", Tuple{3, y}, 4));
  CHECK(numeric_holds("<=", Tuple{1, 1}, 2));
  CHECK(is_reserved_symbol("BIT"));
  CHECK_FALSE(is_reserved_symbol("E"));
}

TEST_CASE("enumerate_structures counts 2^(n^a) per relation") {
  std::uint64_t seen = 0;
  std::set<std::string> distinct;
  enumerate_structures(vocab::graph(), 2, [&](const Structure& a) {
    ++seen;
    distinct.insert(serialize_structure(a));
  });
  CHECK(seen == 16);
  CHECK(distinct.size() == 16);

  seen = 0;
  enumerate_structures(vocab::graph(), 1, [&](const Structure&) { ++seen; });
  CHECK(seen == 2);

  const VocabularyPtr c = make_vocabulary("c", {}, {"c"});
  seen = 0;
  enumerate_structures(c, 3, [&](const Structure&) { ++seen; });
  CHECK(seen == 3);

  CHECK(structure_count(*vocab::dnf(), 2) == std::uint64_t{1} << 10);
  CHECK(structure_count(*vocab::graph(), 9) == std::nullopt);
}

TEST_CASE("enumeration respects its budget") {
  CHECK_THROWS_AS(StructureSpace(vocab::graph(), 3, 100), BudgetExceeded);
  CHECK_NOTHROW(StructureSpace(vocab::graph(), 3, 512));
}

TEST_CASE("structure space index order: first tuple is the least significant bit") {
  const StructureSpace space(vocab::graph(), 2);
  CHECK(space.at(0).relation("E").count() == 0);
  CHECK(space.at(1).relation("E").contains(Tuple{0, 0}));
  CHECK(space.at(8).relation("E").contains(Tuple{1, 1}));
  CHECK(space.at(15).relation("E").count() == 4);
}

TEST_CASE("relation tables index tuples lexicographically") {
  Relation r(2, 3);
  CHECK(r.capacity() == 9);
  CHECK(r.index_of(Tuple{1, 2}) == 5u);
  CHECK(r.index_of(Tuple{3, 0}) == std::nullopt);
  CHECK(r.tuple_at(7) == Tuple{2, 1});
  r.insert(Tuple{2, 1});
  r.insert(Tuple{0, 1});
  CHECK(r.tuples() == std::vector<Tuple>{{0, 1}, {2, 1}});
}

TEST_CASE("structure text round trip") {
  const Structure a = make_structure(vocab::dnf(), 3,
                                     {{"E", {{0}, {2}}}, {"Q", {{0, 1}, {2, 2}}}, {"M", {{1, 0}}}});
  CHECK(parse_structure(serialize_structure(a)) == a);

  const VocabularyPtr v = make_vocabulary("pc", {{"R", 3}}, {"c", "d"});
  const Structure b = make_structure(v, 2, {{"R", {{0, 1, 1}}}}, {{"c", 1}, {"d", 0}});
  const Structure back = parse_structure(serialize_structure(b, "B"));
  CHECK(back == b);
  CHECK(back.constant(0) == 1);
}

TEST_CASE("structure parse errors carry positions") {
  try {
    parse_structure("structure A : graph {\n  size = 2\n  E = { (0,5) }\n}\n");
    FAIL("expected an error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
  CHECK_THROWS_AS(parse_structure("structure A : nosuch { size = 1 }"), Error);
  CHECK_THROWS_AS(parse_structure("# nothing here\n"), ParseError);
}
