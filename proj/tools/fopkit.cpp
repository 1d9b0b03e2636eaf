// fopkit command line: evaluate formulas, decide instances, apply and verify
// reductions, check universality.
//
// Exit codes: 0 accept/pass, 1 reject/fail, 2 usage or input error, 3 budget.

#include <chrono>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fopkit/error.hpp"
#include "fopkit/eval.hpp"
#include "fopkit/formula.hpp"
#include "fopkit/problems.hpp"
#include "fopkit/query.hpp"
#include "fopkit/reductions.hpp"
#include "fopkit/structure_io.hpp"
#include "fopkit/universality.hpp"

using namespace fopkit;

namespace {

constexpr int kAccept = 0;
constexpr int kReject = 1;
constexpr int kUsage = 2;
constexpr int kBudget = 3;

struct Config {
  std::uint64_t budget = kDefaultStructureBudget;
  Element search_budget = 0;  // 0: the decider's own default
  std::string format = "text";
  std::string fidelity = "corrected";
  Element bound = 8;
  std::string output;
};

std::string read_input(const std::string& path) {
  if (path == "-") {
    return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
  }
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Writes to --output when given, else to standard output.
void emit(const Config& cfg, const std::string& text) {
  if (cfg.output.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(cfg.output);
  if (!out) throw ValidationError("cannot write '" + cfg.output + "'");
  out << text;
}

std::string first_word(const std::string& text) {
  std::size_t i = 0;
  while (i < text.size()) {
    if (std::isspace(static_cast<unsigned char>(text[i]))) {
      ++i;
    } else if (text[i] == '#') {
      while (i < text.size() && text[i] != '\n') ++i;
    } else {
      break;
    }
  }
  std::size_t j = i;
  while (j < text.size() && (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_')) {
    ++j;
  }
  return text.substr(i, j - i);
}

bool is_structure_text(const std::string& text) {
  const std::string w = first_word(text);
  return w == "structure" || w == "vocab";
}

Element decider_budget(const Config& cfg, Element fallback) {
  return cfg.search_budget ? cfg.search_budget : fallback;
}

std::string set_text(const std::vector<bool>& bits, const std::set<Element>* only = nullptr) {
  std::string out = "{";
  for (Element v = 0; v < bits.size(); ++v) {
    if (only && !only->count(v)) continue;
    if (bits[v]) out += " " + std::to_string(v);
  }
  return out + " }";
}

std::string set_text(const std::set<Element>& s) {
  std::string out = "{";
  for (Element v : s) out += " " + std::to_string(v);
  return out + " }";
}

std::string verdict(bool v) { return v ? "accept" : "reject"; }

// ---------------------------------------------------------------------------

int cmd_eval(const Config&, const std::string& structure_path, const std::string& formula_path,
             const std::string& formula_text, int so_bits) {
  const Structure a = parse_structure(read_input(structure_path));
  const std::string text = formula_text.empty() ? read_input(formula_path) : formula_text;
  const Formula f = parse_formula(text, a.vocabulary_ptr());
  if (!is_sentence(f)) {
    std::string vars;
    for (const auto& v : free_variables(f)) vars += " " + v;
    throw ValidationError("formula has free variables:" + vars);
  }
  const auto start = std::chrono::steady_clock::now();
  const bool value = eval_so(a, f, so_bits);
  const double ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  std::cout << (value ? "true" : "false") << "\n";
  std::cerr << "time_ms=" << ms << "\n";
  return value ? kAccept : kReject;
}

int cmd_decide(const Config& cfg, const std::string& problem, const std::string& path) {
  const std::string text = read_input(path);
  const bool structured = is_structure_text(text);
  auto structure = [&] {
    Structure a = parse_structure(text);
    if (!same_vocabulary(a.vocabulary_ptr(), problem_vocabulary(problem))) {
      throw ValidationError("problem " + problem + " expects a " +
                            problem_vocabulary(problem)->name() + " structure");
    }
    return a;
  };
  if (problem == "qsat2") {
    const Qbf2Dnf inst = structured ? decode_dnf(structure()) : parse_qdnf(text);
    const auto w = qsat2_witness(inst, decider_budget(cfg, kDefaultVarBudget));
    std::cout << verdict(w.has_value()) << "\n";
    if (w) std::cout << "true_existential " << set_text(*w, &inst.existential) << "\n";
    return w ? kAccept : kReject;
  }
  if (problem == "qunsat2") {
    const Qbf2Cnf inst = structured ? decode_cnf(structure()) : parse_qcnf(text);
    const bool v = decide_qunsat2(inst, decider_budget(cfg, kDefaultVarBudget));
    std::cout << verdict(v) << "\n";
    return v ? kAccept : kReject;
  }
  if (problem == "unique") {
    const Qbf2Cnf inst = structured ? decode_cnf(structure()) : parse_qcnf(text);
    const auto w = unique_ext_witness(inst, decider_budget(cfg, kDefaultVarBudget));
    std::cout << verdict(w.has_value()) << "\n";
    if (w) std::cout << "true_existential " << set_text(*w, &inst.existential) << "\n";
    return w ? kAccept : kReject;
  }
  if (problem == "vcsat") {
    const VcsatInstance inst = structured ? decode_vcsat(structure()) : parse_vcsat(text);
    const auto w = vcsat_witness(inst, decider_budget(cfg, kDefaultVarBudget));
    std::cout << verdict(w.has_value()) << "\n";
    if (w) std::cout << "existential " << set_text(*w) << "\n";
    return w ? kAccept : kReject;
  }
  // Graph problems.
  std::vector<std::string> warnings;
  const Graph g = structured ? decode_graph(structure(), &warnings) : parse_graph(text);
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
  const GraphProblem gp = graph_problem(problem);
  const Element budget = decider_budget(cfg, kDefaultColoringBudget);
  if (problem == "2cc" || problem == "2cc-c") {
    const TwoCliqueColoring c = decide_2cc(g, budget);
    const bool v = problem == "2cc" ? c.accepted : !c.accepted;
    std::cout << verdict(v) << "\n";
    if (c.accepted) std::cout << "red " << set_text(c.red) << "\n";
    return v ? kAccept : kReject;
  }
  // 2cc-n:<n>
  const std::string threshold = problem.substr(problem.find(':') + 1);
  const bool v = decide_2cc_n(g, static_cast<Element>(std::stoul(threshold)), budget);
  std::cout << verdict(v) << "\n";
  return v ? kAccept : kReject;
}

NamedReduction load_reduction(const Config& cfg, const std::string& name,
                              const std::string& sentence_path, const std::string& vocab_name) {
  if (!sentence_path.empty()) {
    const VocabularyPtr v = vocab::builtin(vocab_name);
    if (!v) throw ValidationError("unknown vocabulary '" + vocab_name + "'");
    return sentence_reduction(parse_formula(read_input(sentence_path), v), v, name);
  }
  if (std::ifstream(name).good()) {
    NamedReduction red;
    red.query = parse_fop(read_input(name));
    red.name = red.query.name;
    red.source_problem = red.query.source->name();
    red.target_problem = red.query.target->name();
    return red;
  }
  return named_reduction(name, parse_fidelity(cfg.fidelity));
}

Structure load_source(const NamedReduction& red, const std::string& text) {
  if (is_structure_text(text)) return parse_structure(text);
  const std::string& p = red.source_problem;
  if (p == "qsat2" || p == "dnf") return encode_dnf(square_dnf(parse_qdnf(text)));
  if (p == "qunsat2" || p == "unique" || p == "cnf") return encode_cnf(square_cnf(parse_qcnf(text)));
  if (p == "vcsat") return encode_vcsat(parse_vcsat(text));
  if (p == "2cc" || p == "2cc-c" || p == "graph") return encode_graph(parse_graph(text));
  throw ValidationError("reduction " + red.name + " needs its input in structure format");
}

std::string instance_text(const Structure& a) {
  const std::string& v = a.vocabulary().name();
  if (same_vocabulary(a.vocabulary_ptr(), vocab::graph())) return serialize_graph(decode_graph(a));
  if (same_vocabulary(a.vocabulary_ptr(), vocab::dnf())) return serialize_qdnf(decode_dnf(a));
  if (same_vocabulary(a.vocabulary_ptr(), vocab::cnf())) return serialize_qcnf(decode_cnf(a));
  if (same_vocabulary(a.vocabulary_ptr(), vocab::vcsat())) return serialize_vcsat(decode_vcsat(a));
  throw ValidationError("no instance format for vocabulary " + v);
}

int cmd_reduce(const Config& cfg, const std::string& name, const std::string& path,
               const std::string& emit_kind, const std::string& sentence_path,
               const std::string& vocab_name) {
  const NamedReduction red = load_reduction(cfg, name, sentence_path, vocab_name);
  if (emit_kind == "fop") {
    emit(cfg, serialize_fop(red.query));
    return kAccept;
  }
  if (path.empty()) throw ValidationError("reduce needs an instance file unless --emit fop");
  const Structure a = load_source(red, read_input(path));
  if (!same_vocabulary(a.vocabulary_ptr(), red.query.source)) {
    throw ValidationError("reduction " + red.name + " expects a " + red.query.source->name() +
                          " structure, got " + a.vocabulary().name());
  }
  const Structure image = apply_query(red.query, a);
  emit(cfg, emit_kind == "instance" ? instance_text(image) : serialize_structure(image, "image"));
  return kAccept;
}

std::string sizes_text(const std::vector<Element>& sizes) {
  std::string out;
  for (Element s : sizes) out += (out.empty() ? "" : ",") + std::to_string(s);
  return out;
}

int print_report(const Config& cfg, const std::string& name, const VerificationReport& r,
                 const std::string& rows) {
  std::ostringstream out;
  out << rows;
  if (cfg.format == "text") {
    for (const auto& c : r.counterexamples) {
      out << "counterexample size=" << c.size << " index=" << c.index
          << " source=" << verdict(c.source) << " target=" << verdict(c.target) << "\n";
      out << serialize_structure(c.input, "counterexample");
    }
  }
  out << (cfg.format == "tsv" ? "# " : "") << "reduction=" << name
      << " sizes=" << sizes_text(r.sizes) << " instances=" << r.instances
      << " agreements=" << r.agreements << " counterexamples=" << r.counterexample_count << "\n";
  emit(cfg, out.str());
  return r.ok() ? kAccept : kReject;
}

int cmd_verify(const Config& cfg, const std::string& name, const std::vector<Element>& sizes,
               bool direct, bool projection, const std::string& sentence_path,
               const std::string& vocab_name) {
  const NamedReduction red = load_reduction(cfg, name, sentence_path, vocab_name);
  if (!projection && !red.source_oracle) {
    throw ValidationError("a query file can only be checked with --projection");
  }
  if (projection) {
    const ProjectionReport r = validate_projection(red.query, cfg.bound);
    std::cout << "reduction=" << red.name << " bound=" << cfg.bound
              << " syntactic=" << (r.syntactic_ok ? "ok" : "fail")
              << " exclusivity=" << (r.exclusivity_ok ? "ok" : "fail")
              << " projection=" << (r.is_projection ? "yes" : "no") << "\n";
    for (const auto& v : r.violations) {
      std::cout << "violation " << v.formula << ": " << v.message;
      if (v.size) {
        std::cout << " (size " << *v.size << ", at";
        for (Element e : v.witness) std::cout << ' ' << e;
        std::cout << ')';
      }
      std::cout << "\n";
    }
    return r.is_projection ? kAccept : kReject;
  }
  VerifyOptions options;
  options.budget = cfg.budget;
  options.use_direct_map = direct;
  std::ostringstream rows;
  if (cfg.format == "tsv") {
    rows << "size\tindex\tsource\ttarget\tagree\n";
    options.keep = 0;
    options.on_row = [&rows](const VerificationRow& row) {
      rows << row.size << '\t' << row.index << '\t' << int(row.source) << '\t' << int(row.target)
           << '\t' << int(row.source == row.target) << '\n';
    };
  }
  const VerificationReport r = verify_reduction(red, sizes, options);
  return print_report(cfg, red.name, r, rows.str());
}

int cmd_compile(const Config& cfg, const std::string& path, const std::string& vocab_name,
                const std::vector<Element>& sizes, const std::string& name) {
  const VocabularyPtr v = vocab::builtin(vocab_name);
  if (!v) throw ValidationError("unknown vocabulary '" + vocab_name + "'");
  const NamedReduction red = sentence_reduction(parse_formula(read_input(path), v), v, name);
  std::ostringstream out;
  out << serialize_fop(red.query);
  bool ok = true;
  if (!sizes.empty()) {
    VerifyOptions options;
    options.budget = cfg.budget;
    const VerificationReport r = verify_reduction(red, sizes, options);
    ok = r.ok();
    out << "# verify sizes=" << sizes_text(sizes) << " instances=" << r.instances
        << " agreements=" << r.agreements << " counterexamples=" << r.counterexample_count << "\n"
        << "# " << (ok ? "pass" : "fail") << "\n";
  }
  emit(cfg, out.str());
  return ok ? kAccept : kReject;
}

int cmd_universality(const Config& cfg, const std::string& problem, Element n, std::size_t k,
                     Element m_max, bool ordered, bool no_witness, bool monotone) {
  const GraphProblem gp = graph_problem(problem);
  UniversalityOptions options;
  options.ordered = ordered;
  options.use_witnesses = !no_witness;
  const UniversalityReport r = check_universality(gp, n, k, m_max, options);
  std::ostringstream out;
  if (cfg.format == "tsv") {
    out << "problem\tn\tk\tm_min\tm_max\tsequences\tfull_sequences\tconsistent\twitnesses\t"
           "witness_failures\tsearched\tpass\n";
    out << r.problem << '\t' << r.n << '\t' << r.k << '\t' << r.m_min << '\t' << r.m_max << '\t'
        << r.sequences << '\t' << r.full_sequences << '\t' << r.consistent << '\t'
        << r.witnesses_validated << '\t' << r.witness_failures << '\t' << r.searched << '\t'
        << int(r.pass) << '\n';
  } else {
    out << "problem=" << r.problem << " n=" << r.n << " k=" << r.k << " m=" << r.m_min << ".."
        << r.m_max << " sequences=" << r.sequences << " full_sequences=" << r.full_sequences
        << " consistent=" << r.consistent << " witnesses=" << r.witnesses_validated
        << " witness_failures=" << r.witness_failures << " searched=" << r.searched << "\n";
  }
  if (r.counterexample) {
    out << (cfg.format == "tsv" ? "# " : "") << "fail m=" << r.counterexample->first << " "
        << to_string(r.counterexample->second) << "\n";
  } else {
    out << (cfg.format == "tsv" ? "# " : "") << "pass\n";
  }
  bool ok = r.pass;
  if (ok && monotone) {
    ok = check_monotone(gp, r, m_max, options);
    out << (cfg.format == "tsv" ? "# " : "") << "monotone " << (ok ? "pass" : "fail") << "\n";
  }
  emit(cfg, out.str());
  return ok ? kAccept : kReject;
}

int cmd_witness(const Config& cfg, const std::string& problem, Element m,
                const std::string& conds_text) {
  const auto conds = parse_conditions(conds_text);
  std::ostringstream out;
  Graph g;
  if (problem == "2cc") {
    const ColoredWitness w = witness_2cc(conds, m);
    out << "# red = " << set_text(w.red) << "\n";
    g = w.graph;
  } else if (problem == "2cc-c") {
    g = witness_2cc_complement(conds, m);
  } else {
    const auto w = graph_problem(problem).witness(conds, m);
    if (!w) throw ValidationError("no witness construction applies");
    g = *w;
  }
  out << serialize_graph(g, "W");
  emit(cfg, out.str());
  return kAccept;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fopkit: first-order projections between second-level problems"};
  app.require_subcommand(1);
  app.fallthrough();
  Config cfg;
  app.add_option("--budget", cfg.budget, "structures enumerated per size")
      ->check(CLI::PositiveNumber);
  app.add_option("--search-budget", cfg.search_budget,
                 "variable or node cap of the exhaustive deciders");
  app.add_option("--format", cfg.format, "report format")
      ->check(CLI::IsMember({"text", "tsv"}));
  app.add_option("--fidelity", cfg.fidelity, "formula transcription for qunsat2-unique")
      ->check(CLI::IsMember({"verbatim", "corrected"}));
  app.add_option("--bound", cfg.bound, "largest universe for projection checks")
      ->check(CLI::PositiveNumber);
  app.add_option("-o,--output", cfg.output, "write the result to a file");

  std::function<int()> run;

  auto* eval = app.add_subcommand("eval", "evaluate a sentence on a structure");
  std::string eval_structure, eval_formula, eval_text;
  int so_bits = kDefaultSoBudgetBits;
  eval->add_option("structure", eval_structure, "structure file")->required();
  eval->add_option("formula", eval_formula, "sentence file");
  eval->add_option("-e,--expr", eval_text, "sentence text");
  eval->add_option("--so-bits", so_bits, "cap on relation-variable bits per block");
  eval->callback([&] {
    if (eval_formula.empty() && eval_text.empty()) throw CLI::RequiredError("formula");
    run = [&] { return cmd_eval(cfg, eval_structure, eval_formula, eval_text, so_bits); };
  });

  auto* decide = app.add_subcommand("decide", "decide a problem instance");
  std::string decide_problem, decide_path;
  decide->add_option("problem", decide_problem,
                     "qsat2, qunsat2, unique, 2cc, 2cc-c, 2cc-n:<n> or vcsat")
      ->required();
  decide->add_option("instance", decide_path, "instance file or structure file")->required();
  decide->callback([&] { run = [&] { return cmd_decide(cfg, decide_problem, decide_path); }; });

  auto* reduce = app.add_subcommand("reduce", "apply a reduction");
  std::string reduce_name, reduce_path, emit_kind = "structure", sentence_path, vocab_name = "graph";
  reduce->add_option("name", reduce_name, "reduction name")->required();
  reduce->add_option("instance", reduce_path, "instance file");
  reduce->add_option("--emit", emit_kind, "output kind")
      ->check(CLI::IsMember({"structure", "instance", "fop"}));
  reduce->add_option("--sentence", sentence_path, "normal-form sentence file for gen-qsat2");
  reduce->add_option("--vocab", vocab_name, "vocabulary of the sentence");
  reduce->callback([&] {
    run = [&] {
      return cmd_reduce(cfg, reduce_name, reduce_path, emit_kind, sentence_path, vocab_name);
    };
  });

  auto* compile = app.add_subcommand("compile", "compile a normal-form sentence into a fop");
  std::string compile_path, compile_name = "compiled";
  std::vector<Element> compile_sizes = {2};
  compile->add_option("sentence", compile_path, "sentence file")->required();
  compile->add_option("--vocab", vocab_name, "vocabulary of the sentence");
  compile->add_option("--sizes", compile_sizes, "sizes for the inline check (empty: none)")
      ->delimiter(',');
  compile->add_option("--name", compile_name, "fop name");
  compile->callback([&] {
    run = [&] { return cmd_compile(cfg, compile_path, vocab_name, compile_sizes, compile_name); };
  });

  auto* verify = app.add_subcommand("verify", "check a reduction exhaustively");
  std::string verify_name;
  std::vector<Element> verify_sizes = {2};
  bool verify_direct = false, verify_projection = false;
  verify->add_option("name", verify_name, "reduction name")->required();
  verify->add_option("--sizes", verify_sizes, "source universe sizes")->delimiter(',');
  verify->add_flag("--direct", verify_direct, "use the instance-level construction");
  verify->add_flag("--projection", verify_projection, "check the projection shape only");
  verify->add_option("--sentence", sentence_path, "normal-form sentence file for gen-qsat2");
  verify->add_option("--vocab", vocab_name, "vocabulary of the sentence");
  verify->callback([&] {
    run = [&] {
      return cmd_verify(cfg, verify_name, verify_sizes, verify_direct, verify_projection,
                        sentence_path, vocab_name);
    };
  });

  auto* uni = app.add_subcommand("universality", "check (n,k)-universality");
  std::string uni_action, uni_problem = "2cc";
  Element uni_n = 3, uni_mmax = 5;
  std::size_t uni_k = 1;
  bool uni_ordered = false, uni_no_witness = false, uni_monotone = false;
  uni->add_option("action", uni_action, "optional 'check'")->check(CLI::IsMember({"check"}));
  uni->add_option("--problem", uni_problem, "2cc, 2cc-c or 2cc-n:<n>");
  uni->add_option("--n", uni_n, "least universe size")->check(CLI::PositiveNumber);
  uni->add_option("--k", uni_k, "literals per sequence");
  uni->add_option("--mmax", uni_mmax, "largest universe size")->check(CLI::PositiveNumber);
  uni->add_flag("--ordered", uni_ordered, "conflicts on ordered pairs only");
  uni->add_flag("--no-witness", uni_no_witness, "search exhaustively, skip constructions");
  uni->add_flag("--monotone", uni_monotone, "also check (n,k-1) and (n+1,k)");
  uni->callback([&] {
    run = [&] {
      return cmd_universality(cfg, uni_problem, uni_n, uni_k, uni_mmax, uni_ordered,
                              uni_no_witness, uni_monotone);
    };
  });

  auto* wit = app.add_subcommand("witness", "print a witness graph for literal conditions");
  std::string wit_problem = "2cc", wit_conds;
  Element wit_m = 0;
  wit->add_option("--problem", wit_problem, "2cc, 2cc-c or 2cc-n:<n>");
  wit->add_option("--m", wit_m, "universe size")->required();
  wit->add_option("--conds", wit_conds, "literals such as \"E(0,1) !E(2,3)\"");
  wit->callback([&] { run = [&] { return cmd_witness(cfg, wit_problem, wit_m, wit_conds); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kAccept : kUsage;
  }
  try {
    return run();
  } catch (const BudgetExceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return kBudget;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
}
