#include "fopkit/normal_form.hpp"

#include <algorithm>

namespace fopkit {

namespace {

using Reason = NormalFormError::Reason;

std::optional<std::size_t> find_so(const std::vector<SoVariable>& vars, const std::string& name) {
  for (std::size_t i = 0; i < vars.size(); ++i) {
    if (vars[i].name == name) return i;
  }
  return std::nullopt;
}

MatrixLiteral classify(const Formula& literal, const NormalFormSentence& nf) {
  MatrixLiteral out;
  const Formula* atom = &literal;
  if (literal.kind() == FormulaKind::Not) {
    out.positive = false;
    atom = &literal.child();
  }
  if (!atom->is_atom()) {
    throw NormalFormError(Reason::NotDnf, "implicant member is not a literal", literal);
  }
  out.atom = *atom;
  switch (atom->kind()) {
    case FormulaKind::SoAtom:
      if (auto i = find_so(nf.existential, atom->name())) {
        out.kind = MatrixLiteral::Kind::Existential;
        out.index = *i;
      } else {
        out.kind = MatrixLiteral::Kind::Universal;
        out.index = *find_so(nf.universal, atom->name());
      }
      break;
    case FormulaKind::Relation:
      out.kind = MatrixLiteral::Kind::Sigma;
      break;
    default:
      if (!is_numeric(*atom)) out.kind = MatrixLiteral::Kind::Sigma;
      break;
  }
  return out;
}

Formula literal_formula(const MatrixLiteral& l) {
  return l.positive ? l.atom : Formula::negate(l.atom);
}

}  // namespace

NormalFormSentence validate_normal_form(const Formula& sentence, const VocabularyPtr& vocab) {
  if (!is_sentence(sentence)) {
    throw NormalFormError(Reason::NotSentence, "formula has free variables", sentence);
  }
  NormalFormSentence nf;
  nf.vocab = vocab;
  SoPrefix prefix = split_so_prefix(sentence);
  bool seen_universal = false;
  for (const auto& e : prefix.entries) {
    if (e.existential && seen_universal) {
      throw NormalFormError(Reason::PrefixShape,
                            "existential relation variable after a universal one", sentence);
    }
    if (find_so(nf.existential, e.variable.name) || find_so(nf.universal, e.variable.name)) {
      throw NormalFormError(Reason::PrefixShape,
                            "relation variable '" + e.variable.name + "' bound twice", sentence);
    }
    seen_universal = seen_universal || !e.existential;
    (e.existential ? nf.existential : nf.universal).push_back(e.variable);
  }
  Formula matrix = prefix.matrix;
  while (matrix.kind() == FormulaKind::Exists) {
    if (std::find(nf.fo_variables.begin(), nf.fo_variables.end(), matrix.name()) !=
        nf.fo_variables.end()) {
      throw NormalFormError(Reason::PrefixShape,
                            "variable '" + matrix.name() + "' bound twice", matrix);
    }
    nf.fo_variables.push_back(matrix.name());
    matrix = matrix.child();
  }
  if (nf.fo_variables.empty()) {
    throw NormalFormError(Reason::PrefixShape,
                          "expected at least one existential first-order quantifier", matrix);
  }
  for (const Formula& d : disjuncts(matrix)) {
    std::vector<MatrixLiteral> implicant;
    int sigma = 0;
    for (const Formula& l : conjuncts(d)) {
      if (l.is_quantifier() || l.is_so_quantifier()) {
        throw NormalFormError(Reason::PrefixShape, "quantifier inside the matrix", l);
      }
      if (!l.is_literal()) {
        throw NormalFormError(Reason::NotDnf, "matrix is not in disjunctive normal form", l);
      }
      MatrixLiteral lit = classify(l, nf);
      if (lit.kind == MatrixLiteral::Kind::Sigma && ++sigma > 1) {
        throw NormalFormError(Reason::MultipleSigmaLiterals,
                              "implicant has more than one vocabulary literal", d);
      }
      implicant.push_back(std::move(lit));
    }
    nf.implicants.push_back(std::move(implicant));
  }
  return nf;
}

Formula assemble(const NormalFormSentence& nf) {
  std::vector<Formula> ds;
  for (const auto& implicant : nf.implicants) {
    std::vector<Formula> ls;
    for (const auto& l : implicant) ls.push_back(literal_formula(l));
    ds.push_back(Formula::conj(std::move(ls)));
  }
  Formula f = Formula::disj(std::move(ds));
  for (auto it = nf.fo_variables.rbegin(); it != nf.fo_variables.rend(); ++it) {
    f = Formula::exists(*it, f);
  }
  for (auto it = nf.universal.rbegin(); it != nf.universal.rend(); ++it) {
    f = Formula::so_forall(it->name, it->arity, f);
  }
  for (auto it = nf.existential.rbegin(); it != nf.existential.rend(); ++it) {
    f = Formula::so_exists(it->name, it->arity, f);
  }
  return f;
}

}  // namespace fopkit
