// Command-line front end.
//
// Exit codes: 0 success / interpolant found / entailed / satisfiable,
// 1 negative verdict, 2 error or exhausted budget.

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "dlinterp/errors.hpp"
#include "dlinterp/families.hpp"
#include "dlinterp/interpolate.hpp"

using namespace dlinterp;
namespace fs = std::filesystem;

namespace {

// Environment defaults; flags override them. Invalid values are errors
// rather than silently ignored.
void env_number(const char* name, std::uint64_t& into, bool positive) {
  const char* v = std::getenv(name);
  if (!v) return;
  std::string_view sv(v);
  std::uint64_t x = 0;
  auto [end, ec] = std::from_chars(sv.data(), sv.data() + sv.size(), x);
  if (ec != std::errc() || end != sv.data() + sv.size() || (positive && x == 0))
    throw std::runtime_error(std::string(name) + ": expected a " + (positive ? "positive" : "non-negative") +
                             " integer, got '" + v + "'");
  into = x;
}

struct Budgets {
  std::uint64_t mosaic_cap = MosaicBudget{}.max_search_nodes;
  std::uint64_t partition_nodes = MosaicBudget{}.max_partition_nodes;
  std::uint64_t sat_calls = ReasonerBudget{}.max_sat_calls;
};

struct Inputs {
  std::string dir, ontology, c0, d0, sigma, dialect = "alch";
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spill(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

// Reads a file, or a generated directory's default member when the path is
// empty.
std::string input(const Inputs& in, const std::string& path, const char* member) {
  if (!path.empty()) return slurp(path);
  if (in.dir.empty()) return {};
  fs::path p = fs::path(in.dir) / member;
  return fs::exists(p) ? slurp(p.string()) : std::string();
}

Dialect dialect_of(const Inputs& in, const CLI::Option* flag) {
  if (flag->count() == 0 && !in.dir.empty()) {
    fs::path p = fs::path(in.dir) / "dialect.txt";
    if (fs::exists(p)) {
      std::string s = slurp(p.string());
      s.erase(s.find_last_not_of(" \t\r\n") + 1);
      return parse_dialect(s);
    }
  }
  return parse_dialect(in.dialect);
}

Concept required_concept(const Inputs& in, const std::string& path, const char* member, const char* what) {
  std::string text = input(in, path, member);
  if (text.find_first_not_of(" \t\r\n") == std::string::npos) throw std::runtime_error(std::string("missing ") + what);
  return parse_concept_any(text);
}

void add_inputs(CLI::App* app, Inputs& in, CLI::Option*& dialect_flag, bool with_concepts) {
  app->add_option("--dir", in.dir, "Directory written by `generate`");
  app->add_option("--ontology,-o", in.ontology, "Ontology file");
  if (with_concepts) {
    app->add_option("--c0", in.c0, "File holding C0");
    app->add_option("--d0", in.d0, "File holding D0");
    app->add_option("--sigma,-s", in.sigma, "Signature file");
  }
  if (const char* v = std::getenv("DLINTERP_DIALECT")) in.dialect = v;
  dialect_flag = app->add_option("--dialect", in.dialect, "alch or alcq (env DLINTERP_DIALECT)");
}

void add_budgets(CLI::App* app, Budgets& b) {
  auto positive = CLI::PositiveNumber;
  app->add_option("--mosaic-cap", b.mosaic_cap, "Mosaic search nodes per round (env DLINTERP_MOSAIC_CAP)")
      ->check(positive);
  app->add_option("--partition-nodes", b.partition_nodes,
                  "Partition search nodes per round (env DLINTERP_PARTITION_NODES)")
      ->check(positive);
  app->add_option("--sat-calls", b.sat_calls, "Satisfiability calls (env DLINTERP_SAT_CALLS)")->check(positive);
}

MosaicBudget mosaic_budget(const Budgets& b) {
  MosaicBudget m;
  m.max_search_nodes = b.mosaic_cap;
  m.max_partition_nodes = b.partition_nodes;
  return m;
}

ReasonerBudget reasoner_budget(const Budgets& b) {
  ReasonerBudget r;
  r.max_sat_calls = b.sat_calls;
  return r;
}

// Prints text followed by exactly one newline.
void emit(const std::string& text) {
  std::cout << text;
  if (text.empty() || text.back() != '\n') std::cout << '\n';
}

void print_witness(const NonexistenceWitness& w) {
  std::cout << "surviving mosaic: " << w.mosaic.count() << " types, C0 in t" << w.t1 << ", not D0 in t" << w.t2
            << "\n";
  if (w.model) {
    std::cout << "witness model:\n";
    emit(print_model(*w.model));
    std::cout << "bisimilar elements: " << w.model->label(w.e1) << " " << w.model->label(w.e2) << "\n";
  }
  if (!w.partitions.empty()) std::cout << "partition certificates: " << w.partitions.size() << "\n";
}

int run(int argc, char** argv) {
  CLI::App app{"ALC interpolant existence and construction"};
  app.require_subcommand(1);
  Budgets budgets;
  env_number("DLINTERP_MOSAIC_CAP", budgets.mosaic_cap, true);
  env_number("DLINTERP_PARTITION_NODES", budgets.partition_nodes, true);
  env_number("DLINTERP_SAT_CALLS", budgets.sat_calls, true);

  // interpolate
  Inputs ii;
  CLI::Option* ii_dialect = nullptr;
  std::string mode = "dag", trace_path;
  bool json_stats = false, no_verify = false, exhaustive = false;
  std::uint64_t seed = 0;
  env_number("DLINTERP_SEED", seed, false);
  auto* interp = app.add_subcommand("interpolate", "Decide and construct an ALC(Σ) interpolant for O ⊨ C0 ⊑ D0");
  add_inputs(interp, ii, ii_dialect, true);
  add_budgets(interp, budgets);
  interp->add_option("--mode", mode, "Interpolant output form")->check(CLI::IsMember({"tree", "dag"}));
  interp->add_flag("--json-stats", json_stats, "Append a JSON statistics line");
  interp->add_option("--emit-trace", trace_path, "Write the elimination trace to a file");
  interp->add_flag("--no-verify", no_verify, "Skip the final entailment check");
  interp->add_option("--seed", seed, "Elimination order seed (env DLINTERP_SEED)");
  interp->add_flag("--exhaustive", exhaustive, "Enumerate every mosaic explicitly");

  // sat
  Inputs si;
  CLI::Option* si_dialect = nullptr;
  std::string si_concept;
  auto* sat = app.add_subcommand("sat", "Satisfiability of a concept under an ontology");
  add_inputs(sat, si, si_dialect, false);
  add_budgets(sat, budgets);
  sat->add_option("--concept,-c", si_concept, "Concept file")->required();

  // entails
  Inputs ei;
  CLI::Option* ei_dialect = nullptr;
  std::string ei_c, ei_d;
  auto* ent = app.add_subcommand("entails", "Decide O ⊨ C ⊑ D");
  add_inputs(ent, ei, ei_dialect, false);
  add_budgets(ent, budgets);
  ent->add_option("--c", ei_c, "File holding C")->required();
  ent->add_option("--d", ei_d, "File holding D")->required();

  // bisim
  std::string left, right, bsig;
  auto* bis = app.add_subcommand("bisim", "Greatest Σ-bisimulation between two models");
  bis->add_option("left", left, "First model file")->required();
  bis->add_option("right", right, "Second model file")->required();
  bis->add_option("--sigma,-s", bsig, "Signature file");

  // model
  Inputs mi;
  CLI::Option* mi_dialect = nullptr;
  auto* mod = app.add_subcommand("model", "Model pair witnessing joint consistency of C0 and ¬D0 (ALCH)");
  add_inputs(mod, mi, mi_dialect, true);
  add_budgets(mod, budgets);

  // generate
  std::string family, out_dir;
  int k = 1;
  bool literal = false;
  auto* gen = app.add_subcommand("generate", "Write an example family as input files");
  gen->add_option("family", family, "alch-k, alch-tower or alcq-tower")
      ->required()
      ->check(CLI::IsMember({"alch-k", "alch-tower", "alcq-tower"}));
  gen->add_option("--k", k, "Family parameter for alch-k")->check(CLI::PositiveNumber);
  gen->add_flag("--literal", literal, "alch-k with the chain r ⊑ si ⊑ sip");
  gen->add_option("--out", out_dir, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (interp->parsed()) {
    Dialect dl = dialect_of(ii, ii_dialect);
    InterpolationProblem p{parse_ontology(input(ii, ii.ontology, "ontology.dl"), dl),
                           required_concept(ii, ii.c0, "c0.dl", "C0"), required_concept(ii, ii.d0, "d0.dl", "D0"),
                           parse_signature(input(ii, ii.sigma, "sigma.txt"))};
    InterpolationOptions opt;
    opt.mode = exhaustive ? EliminationMode::Exhaustive : EliminationMode::Antichain;
    opt.seed = seed;
    opt.verify = !no_verify;
    opt.emit_trace = !trace_path.empty();
    opt.mosaic_budget = mosaic_budget(budgets);
    opt.reasoner_budget = reasoner_budget(budgets);
    InterpolationResult r = compute_interpolant(p, opt);
    if (opt.emit_trace) spill(trace_path, r.trace);
    int code = 1;
    switch (r.verdict) {
      case InterpolationResult::Verdict::Interpolant:
        code = 0;
        std::cout << "verdict: interpolant\n";
        emit(print_concept(*r.interpolant, mode == "tree" ? PrintMode::Tree : PrintMode::Dag));
        std::cout << "verified: "
                  << (r.verification == InterpolationResult::Verification::Passed ? "true" : "not run") << "\n";
        break;
      case InterpolationResult::Verdict::None:
        std::cout << "verdict: none\n";
        print_witness(*r.witness);
        break;
      case InterpolationResult::Verdict::NotEntailed:
        std::cout << "verdict: none (inclusion not entailed)\n";
        std::cout << "countermodel:\n";
        emit(print_model(r.countermodel->first));
        std::cout << "element: " << r.countermodel->first.label(r.countermodel->second) << "\n";
        break;
    }
    const auto& s = r.stats;
    std::cout << "stats: types=" << s.types << " mosaics=" << s.mosaics << " rounds=" << s.rounds
              << " eliminated=" << s.eliminated << " interpolant_dag_size=" << s.interpolant_dag_size
              << " sat_calls=" << s.sat_calls << "\n";
    if (json_stats) {
      nlohmann::ordered_json j;
      j["types"] = s.types;
      j["mosaics"] = s.mosaics;
      j["rounds"] = s.rounds;
      j["eliminated"] = s.eliminated;
      j["interpolant_dag_size"] = s.interpolant_dag_size;
      j["sat_calls"] = s.sat_calls;
      j["wall_ms"] = s.wall_ms;
      std::cout << j.dump() << "\n";
    }
    return code;
  }

  if (sat->parsed()) {
    Dialect dl = dialect_of(si, si_dialect);
    Reasoner rs(parse_ontology(input(si, si.ontology, "ontology.dl"), dl), reasoner_budget(budgets));
    bool ok = rs.sat(parse_concept_any(slurp(si_concept)));
    std::cout << (ok ? "satisfiable" : "unsatisfiable") << "\n";
    return ok ? 0 : 1;
  }

  if (ent->parsed()) {
    Dialect dl = dialect_of(ei, ei_dialect);
    Reasoner rs(parse_ontology(input(ei, ei.ontology, "ontology.dl"), dl), reasoner_budget(budgets));
    bool ok = rs.entails(parse_concept_any(slurp(ei_c)), parse_concept_any(slurp(ei_d)));
    std::cout << (ok ? "entailed" : "not entailed") << "\n";
    return ok ? 0 : 1;
  }

  if (bis->parsed()) {
    FiniteInterpretation i = parse_model(slurp(left)), j = parse_model(slurp(right));
    Signature sigma = bsig.empty() ? Signature() : parse_signature(slurp(bsig));
    BisimRelation z = max_sigma_bisimulation(i, j, sigma);
    std::cout << "(bisimulation";
    for (const auto& [d, e] : z.pairs()) std::cout << "\n  (pair " << i.label(d) << " " << j.label(e) << ")";
    std::cout << ")\n";
    return 0;
  }

  if (mod->parsed()) {
    Dialect dl = dialect_of(mi, mi_dialect);
    if (dl != Dialect::ALCH) throw DialectError("model extraction is available for ALCH only");
    InterpolationProblem p{parse_ontology(input(mi, mi.ontology, "ontology.dl"), dl),
                           required_concept(mi, mi.c0, "c0.dl", "C0"), required_concept(mi, mi.d0, "d0.dl", "D0"),
                           parse_signature(input(mi, mi.sigma, "sigma.txt"))};
    validate_problem(p);
    TypeUniverse u(p.ontology, p.c0, neg(p.d0), p.sigma);
    Elimination e = eliminate(u, EliminationMode::Antichain, mosaic_budget(budgets));
    JointConsistency jc = decide_joint_consistency(u, e, mosaic_budget(budgets));
    if (!jc.consistent) {
      std::cout << "no surviving mosaic holds completions of C0 and not D0\n";
      return 1;
    }
    ExtractedModel x = extract_model(u, e);
    std::size_t idx = 0;
    while (!(e.final_max()[idx] == jc.witness)) ++idx;
    Element e1 = x.find(jc.t1, idx), e2 = x.find(jc.t2, idx);
    if (!check_joint_consistency_witness(p.ontology, p.c0, neg(p.d0), p.sigma, x.model, e1, x.model, e2))
      throw InternalError("extracted model pair fails the joint consistency check");
    emit(print_model(x.model));
    std::cout << "bisimilar elements: " << x.model.label(e1) << " " << x.model.label(e2) << "\n";
    return 0;
  }

  if (gen->parsed()) {
    Instance in = family == "alch-k" ? alch_k(k, literal) : family == "alch-tower" ? alch_tower() : alcq_tower();
    fs::create_directories(out_dir);
    fs::path d(out_dir);
    spill(d / "ontology.dl", print_ontology(in.ontology));
    spill(d / "c0.dl", print_concept(in.c0) + "\n");
    spill(d / "d0.dl", print_concept(in.d0) + "\n");
    spill(d / "sigma.txt", print_signature(in.sigma) + "\n");
    spill(d / "dialect.txt", std::string(dialect_name(in.ontology.dialect())) + "\n");
    std::cout << "wrote " << family << " to " << out_dir << "\n";
    return 0;
  }
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
  } catch (const BudgetExceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
  } catch (const InternalError& e) {
    std::cerr << "internal error: " << e.what() << "\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
  }
  return 2;
}
