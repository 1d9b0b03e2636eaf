#include "fopkit/reductions.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <sstream>

#include "fopkit/error.hpp"
#include "fopkit/eval.hpp"

namespace fopkit {

namespace {

int ceil_log2(std::uint64_t m) {
  int bits = 0;
  while ((std::uint64_t{1} << bits) < m) ++bits;
  return bits;
}

Term coord(int position, int coordinate) {
  return Term::var(query_variable(position, coordinate));
}

Formula coord_is(int position, int coordinate, Element value) {
  return Formula::equal(coord(position, coordinate), Term::num(value));
}

// Coordinates first..first+bits-1 of a position spell value, LSB first.
Formula bin_lsb(int position, int first, int bits, std::uint64_t value) {
  std::vector<Formula> parts;
  for (int b = 0; b < bits; ++b) {
    parts.push_back(coord_is(position, first + b, static_cast<Element>((value >> b) & 1u)));
  }
  return Formula::conj(std::move(parts));
}

Formula bin_msb(int position, int first, int bits, std::uint64_t value) {
  std::vector<Formula> parts;
  for (int b = 0; b < bits; ++b) {
    parts.push_back(
        coord_is(position, first + b, static_cast<Element>((value >> (bits - 1 - b)) & 1u)));
  }
  return Formula::conj(std::move(parts));
}

Formula parse(const std::string& text, const VocabularyPtr& vocab) {
  return parse_formula(text, vocab);
}

// Builds a query from formula texts, in target relation order.
FirstOrderQuery make_query(std::string name, VocabularyPtr source, VocabularyPtr target,
                           int arity, const std::string& universe,
                           const std::vector<std::string>& relations) {
  FirstOrderQuery q;
  q.name = std::move(name);
  q.source = std::move(source);
  q.target = std::move(target);
  q.arity = arity;
  q.universe = parse(universe, q.source);
  for (const auto& r : relations) q.relations.push_back(parse(r, q.source));
  check_query(q);
  return q;
}

}  // namespace

std::string_view fidelity_name(Fidelity f) {
  return f == Fidelity::Verbatim ? "verbatim" : "corrected";
}

Fidelity parse_fidelity(std::string_view name) {
  if (name == "verbatim") return Fidelity::Verbatim;
  if (name == "corrected") return Fidelity::Corrected;
  throw ValidationError("unknown fidelity '" + std::string(name) + "'");
}

// ---------------------------------------------------------------------------
// Generic compilation

FirstOrderQuery generic_to_qsat2(const NormalFormSentence& nf) {
  const std::size_t g = nf.g();
  const std::size_t c = nf.c();
  const std::size_t r = nf.r();
  const std::size_t m = std::max<std::size_t>({nf.g() + nf.h(), r, 1});
  const int L = std::max(1, ceil_log2(m));
  const int k = L + static_cast<int>(c);

  std::vector<SoVariable> so = nf.existential;
  so.insert(so.end(), nf.universal.begin(), nf.universal.end());
  for (const auto& v : so) {
    if (static_cast<std::size_t>(v.arity) > c) {
      throw ValidationError("relation variable " + v.name + " has arity " +
                            std::to_string(v.arity) + " but the matrix has only " +
                            std::to_string(c) + " first-order variables");
    }
  }

  std::map<std::string, Term> rename;
  for (std::size_t j = 0; j < c; ++j) rename[nf.fo_variables[j]] = coord(0, L + static_cast<int>(j));

  auto signed_atom = [&](const MatrixLiteral& lit) {
    Formula atom = substitute(lit.atom, rename);
    return lit.positive ? atom : Formula::negate(atom);
  };

  std::vector<Formula> dummy_parts;
  for (int t = 0; t < k; ++t) dummy_parts.push_back(coord_is(1, t, 0));
  const Formula dummy = Formula::conj(std::move(dummy_parts));

  std::vector<Formula> q_parts;
  std::vector<Formula> m_parts;
  std::vector<Formula> implicant_codes;
  for (std::size_t i = 0; i < r; ++i) {
    const Formula code = bin_lsb(0, 0, L, i);
    implicant_codes.push_back(code);
    std::vector<Formula> alpha;
    std::optional<Formula> sigma;
    // Per sign, the argument lists of each relation variable.
    std::map<std::size_t, std::vector<Formula>> lits[2];
    for (const MatrixLiteral& lit : nf.implicants[i]) {
      switch (lit.kind) {
        case MatrixLiteral::Kind::Numeric:
          alpha.push_back(signed_atom(lit));
          break;
        case MatrixLiteral::Kind::Sigma:
          sigma = signed_atom(lit);
          break;
        case MatrixLiteral::Kind::Existential:
        case MatrixLiteral::Kind::Universal: {
          const std::size_t l =
              lit.kind == MatrixLiteral::Kind::Existential ? lit.index : g + lit.index;
          const Formula atom = substitute(lit.atom, rename);
          std::vector<Formula> args;
          for (std::size_t j = 0; j < c; ++j) {
            const int y = L + static_cast<int>(j);
            if (j < atom.terms().size()) {
              const Term& t = atom.terms()[j];
              if (t.kind == TermKind::Constant) {
                throw ValidationError("constant argument in " + to_string(lit.atom) +
                                      " is not supported");
              }
              args.push_back(Formula::equal(coord(1, y), t));
            } else {
              args.push_back(coord_is(1, y, 0));
            }
          }
          lits[lit.positive ? 1 : 0][l].push_back(Formula::conj(std::move(args)));
          break;
        }
      }
    }
    for (int sign = 1; sign >= 0; --sign) {
      auto& out = sign ? q_parts : m_parts;
      std::vector<Formula> per_var;
      for (auto& [l, arg_lists] : lits[sign]) {
        per_var.push_back(
            Formula::conj({bin_lsb(1, 0, L, l), Formula::disj(std::move(arg_lists))}));
      }
      const bool has_lit = !per_var.empty();
      const Formula lit_guard = Formula::disj(std::move(per_var));
      auto with = [&](std::vector<Formula> head, const std::vector<Formula>& tail) {
        head.insert(head.end(), tail.begin(), tail.end());
        return Formula::conj(std::move(head));
      };
      std::vector<Formula> alive = alpha;
      if (sigma) alive.push_back(*sigma);
      if (has_lit) {
        out.push_back(Formula::conj({code, lit_guard, dummy}));
        out.push_back(with({code, lit_guard, Formula::negate(dummy)}, alive));
      }
      std::vector<Formula> kill_head = {code};
      if (has_lit) kill_head.push_back(Formula::negate(lit_guard));
      kill_head.push_back(dummy);
      if (!alpha.empty()) {
        out.push_back(with(kill_head, {Formula::negate(Formula::conj(alpha))}));
      }
      if (sigma) {
        std::vector<Formula> tail = alpha;
        tail.push_back(Formula::negate(*sigma));
        out.push_back(with(kill_head, tail));
      }
    }
  }
  const Formula spare = r == 0 ? dummy
                               : Formula::conj({Formula::negate(Formula::disj(implicant_codes)),
                                                dummy});
  q_parts.push_back(spare);
  m_parts.push_back(spare);

  std::vector<Formula> e_parts;
  for (std::size_t l = 0; l < g; ++l) e_parts.push_back(bin_lsb(0, 0, L, l));

  FirstOrderQuery q;
  q.name = "gen-qsat2";
  q.source = nf.vocab;
  q.target = vocab::dnf();
  q.arity = k;
  q.universe = Formula::truth(true);
  q.relations = {Formula::disj(std::move(e_parts)), Formula::disj(std::move(q_parts)),
                 Formula::disj(std::move(m_parts))};
  check_query(q);
  return q;
}

Formula toy_sentence() {
  return parse(
      "exists2 S/1 forall2 T/1 exists x1 exists x2 "
      "((S(x1) & !T(x2) & E(x1,x2)) | (!S(x1) & T(x1)))",
      vocab::graph());
}

Formula two_cc_sentence() {
  return parse(
      "exists2 R/1 forall2 C/1 ("
      "  !(forall x forall y ((C(x) & C(y) & x != y) -> E(x,y)))"
      "  | !(forall z (!C(z) -> exists w (C(w) & !E(z,w))))"
      "  | !(exists x exists y (C(x) & C(y) & x != y))"
      "  | (exists x exists y (C(x) & C(y) & R(x) & !R(y))))",
      vocab::graph());
}

// ---------------------------------------------------------------------------
// Example reductions

FirstOrderQuery qsat2_to_qunsat2_query() {
  return make_query("qsat2-qunsat2", vocab::dnf(), vocab::cnf(), 1, "true",
                    {"E(x1)", "M(x1,y1)", "Q(x1,y1)"});
}

Qbf2Cnf negate_dnf(const Qbf2Dnf& inst) {
  Qbf2Cnf out{inst.var_count, inst.existential, {}};
  for (const auto& t : inst.implicants) out.clauses.push_back({t.negative, t.positive});
  return out;
}

FirstOrderQuery qunsat2_to_unique_query(Fidelity fidelity) {
  const std::string universe = "x1 = 0 | x1 = 1";
  const std::string e = "(x1 = 1 & x2 != 0) | (x1 = 0 & E(x2))";
  std::string p;
  std::string n;
  if (fidelity == Fidelity::Verbatim) {
    p = "(x1 = 0 & y1 = 1 & y2 = 0) | (x1 = 0 & y1 = 0 & P(x2,y2)) | "
        "(x1 = 1 & y1 = 0 & x2 = y2 & !E(x2)) | (x1 = 1 & y1 = 1 & x2 = y2 & E(x2))";
    n = "(x1 = 0 & y1 = 0 & N(x2,y2)) | (x1 = 1 & y1 = 1 & y2 = 0 & !E(x2)) | "
        "(x1 = 1 & y1 = 1 & x2 = y2 & E(x2))";
  } else {
    p = "(x1 = 0 & y1 = 1 & y2 = 0) | (x1 = 0 & y1 = 0 & P(x2,y2)) | "
        "(x1 = 1 & y1 = 0 & x2 = y2)";
    n = "(x1 = 0 & y1 = 0 & N(x2,y2)) | (x1 = 1 & y1 = 1 & y2 = 0 & !E(x2)) | "
        "(x1 = 1 & y1 = 0 & x2 = y2 & E(x2))";
  }
  return make_query(fidelity == Fidelity::Verbatim ? "qunsat2-unique-verbatim" : "qunsat2-unique",
                    vocab::cnf(), vocab::cnf(), 2, universe, {e, p, n});
}

Qbf2Cnf unique_extension_map(const Qbf2Cnf& inst) {
  const Element n = inst.var_count;
  if (inst.clauses.size() != n) {
    throw ValidationError("unique_extension_map needs one clause per variable");
  }
  const Element z = n;
  Qbf2Cnf out;
  out.var_count = 2 * n;
  for (Element v : inst.existential) out.existential.insert(v);
  for (Element y = 1; y < n; ++y) out.existential.insert(n + y);
  for (const auto& cl : inst.clauses) {
    BoolTerm t = cl;
    t.positive.insert(z);
    out.clauses.push_back(std::move(t));
  }
  for (Element y = 0; y < n; ++y) {
    BoolTerm t;
    t.positive.insert(y);
    t.negative.insert(inst.existential.count(y) ? y : z);
    out.clauses.push_back(std::move(t));
  }
  return out;
}

Qbf2Cnf unique_sat_transform(const Qbf2Cnf& inst) {
  const Element z = inst.var_count;
  Qbf2Cnf out{inst.var_count + 1, inst.existential, {}};
  for (const auto& cl : inst.clauses) {
    BoolTerm t = cl;
    t.positive.insert(z);
    out.clauses.push_back(std::move(t));
  }
  for (Element y = 0; y < inst.var_count; ++y) out.clauses.push_back({{y}, {z}});
  return out;
}

namespace {

std::string kind_text(char side, int kind) {
  std::ostringstream out;
  for (int b = 0; b < 3; ++b) {
    out << (b ? " & " : "") << side << (b + 1) << " = " << ((kind >> (2 - b)) & 1);
  }
  return out.str();
}

}  // namespace

FirstOrderQuery qsat2_to_2cc_query() {
  struct Rule {
    int from;
    int to;
    const char* literal;
  };
  // Kinds: 1 x, 2 x', 3 ~x', 4 ~x, 5 p, 6 p'. Each rule appears with its mirror.
  static const Rule rules[] = {
      {1, 2, "x4 = y4"},           {2, 1, "x4 = y4"},
      {3, 4, "x4 = y4"},           {4, 3, "x4 = y4"},
      {2, 3, "E(x4) & x4 = y4"},   {3, 2, "E(y4) & x4 = y4"},
      {5, 6, "x4 = y4"},           {6, 5, "x4 = y4"},
      {6, 5, "SUC(x4,y4)"},        {5, 6, "SUC(y4,x4)"},
      {2, 6, "!E(x4) & y4 = max"}, {6, 2, "!E(y4) & x4 = max"},
      {3, 6, "!E(x4) & y4 = max"}, {6, 3, "!E(y4) & x4 = max"},
      {1, 1, "x4 != y4"},          {4, 4, "x4 != y4"},
      {1, 4, "x4 != y4"},          {4, 1, "x4 != y4"},
      {1, 5, "!M(y4,x4)"},         {5, 1, "!M(x4,y4)"},
      {4, 5, "!Q(y4,x4)"},         {5, 4, "!Q(x4,y4)"},
  };
  std::string universe;
  for (int kind = 1; kind <= 6; ++kind) {
    universe += (kind > 1 ? " | (" : "(") + kind_text('x', kind) + ")";
  }
  std::string edges;
  for (const Rule& rule : rules) {
    if (!edges.empty()) edges += " | ";
    edges += "(" + kind_text('x', rule.from) + " & " + kind_text('y', rule.to) + " & " +
             rule.literal + ")";
  }
  return make_query("qsat2-2cc", vocab::dnf(), vocab::graph(), 4, universe, {edges});
}

Graph two_cc_graph(const Qbf2Dnf& inst) {
  const Element n = inst.var_count;
  const Element imps = static_cast<Element>(inst.implicants.size());
  if (imps != n) throw ValidationError("two_cc_graph needs as many implicants as variables");
  auto node = [n](int kind, Element v) { return static_cast<Element>(kind - 1) * n + v; };
  Graph g(6 * n);
  for (Element v = 0; v < n; ++v) {
    g.add_edge(node(1, v), node(2, v));
    g.add_edge(node(3, v), node(4, v));
    if (inst.existential.count(v)) {
      g.add_edge(node(2, v), node(3, v));
    } else {
      g.add_edge(node(2, v), node(6, n - 1));
      g.add_edge(node(3, v), node(6, n - 1));
    }
    for (Element u = 0; u < n; ++u) {
      if (u == v) continue;
      g.add_edge(node(1, u), node(1, v));
      g.add_edge(node(4, u), node(4, v));
      g.add_edge(node(1, u), node(4, v));
    }
  }
  for (Element p = 0; p < n; ++p) {
    g.add_edge(node(5, p), node(6, p));
    if (p + 1 < n) g.add_edge(node(6, p), node(5, p + 1));
    const BoolTerm& t = inst.implicants[p];
    for (Element v = 0; v < n; ++v) {
      if (!t.negative.count(v)) g.add_edge(node(1, v), node(5, p));
      if (!t.positive.count(v)) g.add_edge(node(4, v), node(5, p));
    }
  }
  return g;
}

// ---------------------------------------------------------------------------
// Padding

PaddingShape padding_shape(Element n) {
  if (n < 2) throw ValidationError("padding threshold must be at least 2");
  PaddingShape s;
  s.copies = n / 2 + 1;
  s.code_bits = std::max(1, ceil_log2(s.copies));
  s.arity = s.code_bits + 1;
  return s;
}

FirstOrderQuery padding_query(Element n) {
  const PaddingShape s = padding_shape(n);
  std::vector<Formula> copies;
  for (Element j = 0; j < s.copies; ++j) copies.push_back(bin_msb(0, 0, s.code_bits, j));
  std::vector<Formula> edge;
  for (int b = 0; b < s.code_bits; ++b) edge.push_back(Formula::equal(coord(0, b), coord(1, b)));
  edge.push_back(Formula::relation("E", {coord(0, s.code_bits), coord(1, s.code_bits)}));
  FirstOrderQuery q;
  q.name = "pad-2cc-" + std::to_string(n);
  q.source = vocab::graph();
  q.target = vocab::graph();
  q.arity = s.arity;
  q.universe = Formula::disj(std::move(copies));
  q.relations = {Formula::conj(std::move(edge))};
  check_query(q);
  return q;
}

Graph pad_graph(const Graph& g, Element n) {
  const PaddingShape s = padding_shape(n);
  const Element size = g.node_count();
  Graph out(s.copies * size);
  for (Element j = 0; j < s.copies; ++j) {
    for (auto [u, v] : g.edges()) out.add_edge(j * size + u, j * size + v);
  }
  return out;
}

Formula cardinality_sentence(Element l) {
  if (l < 1) throw ValidationError("cardinality sentence needs l >= 1");
  auto x = [](Element i) { return Term::var("x" + std::to_string(i)); };
  std::vector<Formula> distinct;
  std::vector<Formula> cover;
  for (Element i = 1; i <= l; ++i) {
    for (Element j = i + 1; j <= l; ++j) distinct.push_back(Formula::not_equal(x(i), x(j)));
    cover.push_back(Formula::equal(Term::var("y"), x(i)));
  }
  Formula body = Formula::forall(
      "y", Formula::conj({Formula::conj(std::move(distinct)), Formula::disj(std::move(cover))}));
  for (Element i = l; i >= 1; --i) body = Formula::exists("x" + std::to_string(i), body);
  return body;
}

Formula pad_sentence(const Formula& phi, Element n) {
  std::vector<Formula> parts = {phi};
  for (Element l = 1; l < n; ++l) parts.push_back(cardinality_sentence(l));
  return Formula::disj(std::move(parts));
}

// ---------------------------------------------------------------------------
// VCSat

VcsatInstance qsat2_to_vcsat(const Qbf2Dnf& inst) {
  const Element n = inst.var_count;
  if (n < 2) throw ValidationError("qsat2_to_vcsat needs at least two variables");
  if (n > 63) throw ValidationError("qsat2_to_vcsat supports at most 63 variables");
  VcsatInstance out;
  out.var_count = n;
  out.implicants = inst.implicants;
  const std::uint64_t all = (std::uint64_t{1} << n) - 1;
  for (Element v = 0; v < n; ++v) out.values.push_back(inst.existential.count(v) ? 1 : all);
  out.cost = std::uint64_t{1} << (n - 1);
  return out;
}

FirstOrderQuery qsat2_to_vcsat_query() {
  return make_query("qsat2-vcsat", vocab::dnf(), vocab::vcsat(), 1, "true",
                    {"Q(x1,y1)", "M(x1,y1)", "y1 = 0 | (y1 != 0 & !E(x1))", "x1 = max"});
}

Formula vcsat_value_sentence() {
  return parse("forall x ((forall y (V(x,y) <-> y = 0)) (+) (forall y V(x,y)))", vocab::vcsat());
}

Formula vcsat_value_sentence_pointwise() {
  return parse("forall x forall y ((V(x,y) <-> y = 0) (+) V(x,y))", vocab::vcsat());
}

Formula vcsat_cost_sentence() { return parse("forall x (K(x) <-> x = max)", vocab::vcsat()); }

// ---------------------------------------------------------------------------
// Registry

namespace {

std::optional<Element> suffix_number(std::string_view text, std::string_view prefix) {
  if (text.substr(0, prefix.size()) != prefix) return std::nullopt;
  text.remove_prefix(prefix.size());
  Element n = 0;
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), n);
  if (ec != std::errc() || end != text.data() + text.size() || text.empty()) return std::nullopt;
  return n;
}

}  // namespace

StructureOracle problem_oracle(std::string_view tag) {
  if (tag == "qsat2") return [](const Structure& a) { return decide_qsat2(decode_dnf(a)); };
  if (tag == "qunsat2") return [](const Structure& a) { return decide_qunsat2(decode_cnf(a)); };
  if (tag == "unique") return [](const Structure& a) { return decide_unique_ext(decode_cnf(a)); };
  if (tag == "2cc") return [](const Structure& a) { return decide_2cc(decode_graph(a)).accepted; };
  if (tag == "2cc-c") {
    return [](const Structure& a) { return !decide_2cc(decode_graph(a)).accepted; };
  }
  if (tag == "vcsat") return [](const Structure& a) { return decide_vcsat(decode_vcsat(a)); };
  if (auto n = suffix_number(tag, "2cc-n:")) {
    const Element t = *n;
    return [t](const Structure& a) { return decide_2cc_n(decode_graph(a), t); };
  }
  throw ValidationError("unknown problem '" + std::string(tag) + "'");
}

VocabularyPtr problem_vocabulary(std::string_view tag) {
  if (tag == "qsat2") return vocab::dnf();
  if (tag == "qunsat2" || tag == "unique") return vocab::cnf();
  if (tag == "vcsat") return vocab::vcsat();
  if (tag == "2cc" || tag == "2cc-c" || suffix_number(tag, "2cc-n:")) return vocab::graph();
  throw ValidationError("unknown problem '" + std::string(tag) + "'");
}

std::vector<std::string> reduction_names() {
  return {"gen-qsat2", "qsat2-qunsat2", "qunsat2-unique", "qsat2-2cc", "pad-2cc:<n>",
          "qsat2-vcsat"};
}

NamedReduction sentence_reduction(const Formula& sentence, const VocabularyPtr& vocab,
                                  std::string name) {
  NamedReduction red;
  red.name = std::move(name);
  red.source_problem = "so2";
  red.target_problem = "qsat2";
  red.query = generic_to_qsat2(validate_normal_form(sentence, vocab));
  red.query.name = red.name;
  red.source_oracle = [sentence](const Structure& a) { return eval_so2(a, sentence); };
  red.target_oracle = problem_oracle("qsat2");
  return red;
}

NamedReduction named_reduction(std::string_view name, Fidelity fidelity) {
  if (name == "gen-qsat2") return sentence_reduction(toy_sentence(), vocab::graph());
  NamedReduction red;
  red.name = std::string(name);
  red.fidelity = fidelity;
  if (name == "qsat2-qunsat2") {
    red.source_problem = "qsat2";
    red.target_problem = "qunsat2";
    red.query = qsat2_to_qunsat2_query();
    red.direct_map = [](const Structure& a) { return encode_cnf(negate_dnf(decode_dnf(a))); };
  } else if (name == "qunsat2-unique") {
    red.source_problem = "qunsat2";
    red.target_problem = "unique";
    red.query = qunsat2_to_unique_query(fidelity);
    if (fidelity == Fidelity::Corrected) {
      red.direct_map = [](const Structure& a) {
        return encode_cnf(unique_extension_map(decode_cnf(a)));
      };
    }
  } else if (name == "qsat2-2cc") {
    red.source_problem = "qsat2";
    red.target_problem = "2cc";
    red.query = qsat2_to_2cc_query();
    red.direct_map = [](const Structure& a) { return encode_graph(two_cc_graph(decode_dnf(a))); };
  } else if (auto n = suffix_number(name, "pad-2cc:")) {
    const Element t = *n;
    red.source_problem = "2cc";
    red.target_problem = "2cc-n:" + std::to_string(t);
    red.query = padding_query(t);
    red.direct_map = [t](const Structure& a) {
      // Copies the edge relation as stored, so asymmetric inputs map like the query.
      const Element size = a.size();
      const Element copies = padding_shape(t).copies;
      Relation e(2, copies * size);
      for (const auto& tuple : a.relation(0).tuples()) {
        for (Element j = 0; j < copies; ++j) {
          e.insert(std::vector<Element>{j * size + tuple[0], j * size + tuple[1]});
        }
      }
      return Structure(vocab::graph(), copies * size, {std::move(e)});
    };
  } else if (name == "qsat2-vcsat") {
    red.source_problem = "qsat2";
    red.target_problem = "vcsat";
    red.query = qsat2_to_vcsat_query();
    red.direct_map = [](const Structure& a) {
      return encode_vcsat(qsat2_to_vcsat(decode_dnf(a)));
    };
  } else {
    throw ValidationError("unknown reduction '" + std::string(name) + "'");
  }
  red.source_oracle = problem_oracle(red.source_problem);
  red.target_oracle = problem_oracle(red.target_problem);
  return red;
}

// ---------------------------------------------------------------------------
// Verification

namespace {

VerificationReport run_sweep(const VocabularyPtr& source,
                             const std::function<StructureMap(Element)>& map_for,
                             const StructureOracle& source_oracle,
                             const StructureOracle& target_oracle,
                             const std::vector<Element>& sizes, const VerifyOptions& options) {
  VerificationReport report;
  report.sizes = sizes;
  for (Element n : sizes) {
    StructureSpace space(source, n, options.budget);
    const StructureMap map = map_for(n);
    for (std::uint64_t i = 0; i < space.count(); ++i) {
      Structure a = space.at(i);
      const bool s = source_oracle(a);
      const bool t = target_oracle(map(a));
      ++report.instances;
      if (s == t) {
        ++report.agreements;
      } else {
        ++report.counterexample_count;
        if (report.counterexamples.size() < options.keep) {
          report.counterexamples.push_back({n, i, std::move(a), s, t});
        }
      }
      if (options.on_row) options.on_row({n, i, s, t});
    }
    report.instances_per_size.push_back(space.count());
  }
  return report;
}

}  // namespace

VerificationReport verify_reduction(const VocabularyPtr& source, const StructureMap& map,
                                    const StructureOracle& source_oracle,
                                    const StructureOracle& target_oracle,
                                    const std::vector<Element>& sizes,
                                    const VerifyOptions& options) {
  return run_sweep(
      source, [&](Element) { return map; }, source_oracle, target_oracle, sizes, options);
}

VerificationReport verify_reduction(const NamedReduction& red, const std::vector<Element>& sizes,
                                    const VerifyOptions& options) {
  std::function<StructureMap(Element)> map_for;
  if (options.use_direct_map) {
    if (!red.direct_map) throw ValidationError(red.name + " has no direct map");
    map_for = [&](Element) { return red.direct_map; };
  } else {
    map_for = [&](Element n) -> StructureMap {
      auto plan = std::make_shared<ProjectionPlan>(red.query, n);
      return [plan](const Structure& a) { return plan->apply(a); };
    };
  }
  return run_sweep(red.query.source, map_for, red.source_oracle, red.target_oracle, sizes,
                   options);
}

DirectMapReport check_direct_map(const NamedReduction& red, const std::vector<Element>& sizes,
                                 std::uint64_t budget) {
  if (!red.direct_map) throw ValidationError(red.name + " has no direct map");
  DirectMapReport report;
  for (Element n : sizes) {
    StructureSpace space(red.query.source, n, budget);
    ProjectionPlan plan(red.query, n);
    for (std::uint64_t i = 0; i < space.count(); ++i) {
      Structure a = space.at(i);
      ++report.instances;
      if (!(plan.apply(a) == red.direct_map(a))) {
        ++report.mismatches;
        if (!report.first_mismatch) report.first_mismatch = std::move(a);
      }
    }
  }
  return report;
}

}  // namespace fopkit
