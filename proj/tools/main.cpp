#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "CLI11.hpp"
#include "ndcut/generator.hpp"
#include "ndcut/graph.hpp"
#include "ndcut/head.hpp"
#include "ndcut/marked.hpp"
#include "ndcut/reduction.hpp"
#include "ndcut/syntax.hpp"
#include "ndcut/term.hpp"
#include "ndcut/typing.hpp"
#include "ndcut/visit.hpp"

using namespace ndcut;

namespace {

// Prefixed onto located (line:col or path) error messages.
std::string g_source;

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Loaded {
  SourceUnit unit;
  TypingContext ctx;
  bool typed = false;  // the term is plain and typechecks under ctx
};

// Commands that also accept marked or deliberately untyped terms fall back to
// the raw reduction policy when the unit does not typecheck.
Loaded load_unit(const std::string& file) {
  g_source = file;
  Loaded l{parse_unit(slurp(file)), {}, false};
  l.ctx = TypingContext::from_decls(l.unit.decls);
  if (is_plain(l.unit.term)) {
    try {
      (void)check(l.ctx, l.unit.term);
      l.typed = true;
    } catch (const type_error&) {
    }
  }
  return l;
}

int cmd_check(const std::string& file) {
  g_source = file;
  SourceUnit u = parse_unit(slurp(file));
  TypingContext ctx = TypingContext::from_decls(u.decls);
  Formula ty = check(ctx, u.term);
  if (u.expected && *u.expected != ty)
    throw std::runtime_error("ascription mismatch: term has type " + ty.show() +
                             ", expected " + u.expected->show());
  std::cout << ty.show() << "\n";
  return 0;
}

int cmd_step(const std::string& file, const std::optional<std::string>& path_arg,
             const std::string& strategy) {
  Loaded l = load_unit(file);
  const TypingContext* cp = l.typed ? &l.ctx : nullptr;
  Path p;
  if (path_arg) {
    auto parsed = path_parse(*path_arg);
    if (!parsed) throw std::runtime_error("malformed path: " + *path_arg);
    p = *parsed;
  } else if (strategy == "head") {
    auto hp = head_redex_path(l.unit.term);
    if (!hp) throw not_a_redex("no head redex: term is head-normal");
    p = *hp;
  } else {
    auto rs = redexes(l.unit.term);
    if (rs.empty()) throw not_a_redex("term is in normal form");
    p = rs.front().path;
  }
  std::cout << print_term(reduce_at(l.unit.term, p, cp)) << "\n";
  return 0;
}

int cmd_normalize(const std::string& file, const std::string& strategy, int max_steps,
                  bool trace) {
  Loaded l = load_unit(file);
  const TypingContext* cp = l.typed ? &l.ctx : nullptr;
  Strategy s = strategy == "head"       ? Strategy::Head
               : strategy == "leftmost" ? Strategy::Leftmost
                                        : Strategy::Random;
  NormalizeResult r = normalize(l.unit.term, s, max_steps, 0, cp);
  if (trace)
    for (const auto& st : r.trace)
      std::cout << kind_name(st.kind) << " at " << path_str(st.path) << "\n";
  std::cout << print_term(r.result) << "\n";
  if (r.exhausted) std::cerr << "normalize: step budget exhausted before a normal form\n";
  return 0;
}

int cmd_explore(const std::string& file, long limit, const std::optional<std::string>& dot) {
  Loaded l = load_unit(file);
  const TypingContext* cp = l.typed ? &l.ctx : nullptr;
  ReductionGraph g = explore(l.unit.term, limit, cp);
  if (!g.sr_violations.empty())
    throw std::runtime_error("subject reduction violated: " + g.sr_violations.front().message);
  if (!g.complete) throw std::runtime_error("node limit reached before closure");
  std::string eta_text;
  try {
    eta_text = std::to_string(eta(g));
  } catch (const cycle_found&) {
    eta_text = "inf";
  }
  std::cout << "nodes=" << g.nodes.size() << " edges=" << g.edges.size() << " eta=" << eta_text
            << " nf=" << normal_forms(g).size() << "\n";
  if (dot) {
    std::ofstream out(*dot, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open file: " + *dot);
    to_dot(g, out);
  }
  return 0;
}

int cmd_classify(const std::string& file) {
  Loaded l = load_unit(file);
  const TypingContext* cp = l.typed ? &l.ctx : nullptr;
  HeadRow hr = classify(l.unit.term, cp);
  std::cout << "row=" << hr.row << "\n";
  if (const auto* v = std::get_if<std::string>(&hr.head))
    std::cout << "head=" << *v << "\n";
  else
    std::cout << "head=" << print_term(std::get<Term>(hr.head)) << "\n";
  if (hr.row >= 1) std::cout << "path=" << path_str(hr.head_path) << "\n";
  for (const auto& a : hr.args)
    std::visit(overloaded{
                   [](const Term& t) { std::cout << "arg=" << print_term(t) << "\n"; },
                   [](const Elim& e) { std::cout << "arg=" << print_elim(e) << "\n"; },
               },
               a);
  if (hr.hred) std::cout << "hred=" << print_term(*hr.hred) << "\n";
  return 0;
}

int cmd_gen(std::uint64_t seed, int size, int count, const std::optional<std::string>& goal_str) {
  std::optional<Formula> goal;
  if (goal_str) {
    g_source = "--goal";
    goal = parse_formula(*goal_str);
  }
  for (int i = 0; i < count; ++i) {
    GenConfig cfg;
    cfg.seed = seed + static_cast<std::uint64_t>(i);
    cfg.size_budget = size;
    cfg.goal = goal;
    GenResult r = gen_typed(cfg);
    if (i) std::cout << ";\n";
    std::cout << print_unit(SourceUnit{r.decls, r.term, r.type});
  }
  return 0;
}

int cmd_harness(const std::string& scenario_file, const std::optional<std::string>& trace_file) {
  g_source = scenario_file;
  AppScenario sc = parse_scenario(slurp(scenario_file));
  Verdict v = verify_app(sc);
  std::cout << "verify_app: " << verdict_name(v) << "\n";

  std::vector<Term> tr;
  if (trace_file) {
    g_source = *trace_file;
    tr = parse_trace(slurp(*trace_file), scope_of(sc.decls));
  } else {
    // Raw-policy leftmost reduction of S1; typed scenarios terminate.
    Term cur = app_s1(sc);
    tr.push_back(cur);
    for (int i = 0; i < 200; ++i) {
      auto rs = redexes(cur);
      if (rs.empty()) break;
      cur = reduce_at(cur, rs.front().path, nullptr);
      tr.push_back(cur);
    }
  }
  Certificate cert = certify_app(sc, tr);
  std::cout << render_certificate(cert);
  return v == Verdict::Pass && cert.ok() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Workbench for proof terms of classical propositional natural deduction"};
  app.require_subcommand(1);

  std::string file, strategy = "head", kind;
  std::optional<std::string> path_arg, dot_out, goal_str, trace_file;
  long limit = kDefaultNodeLimit;
  int max_steps = 10000, size = 0, count = 0;
  std::uint64_t seed = 0;
  bool trace_flag = false;

  auto* c_check = app.add_subcommand("check", "Typecheck a file and print its type");
  c_check->add_option("FILE", file, "source file")->required();

  auto* c_step = app.add_subcommand("step", "Contract one redex and print the reduct");
  c_step->add_option("FILE", file, "source file")->required();
  c_step->add_option("--path", path_arg, "redex position, e.g. 0.1");
  c_step->add_option("--strategy", strategy, "head|leftmost (default head)")
      ->check(CLI::IsMember({"head", "leftmost"}));

  auto* c_norm = app.add_subcommand("normalize", "Reduce to normal form under a strategy");
  c_norm->add_option("FILE", file, "source file")->required();
  c_norm->add_option("--strategy", strategy, "head|leftmost|random")
      ->required()
      ->check(CLI::IsMember({"head", "leftmost", "random"}));
  c_norm->add_option("--max-steps", max_steps, "step budget (default 10000)")
      ->check(CLI::PositiveNumber);
  c_norm->add_flag("--trace", trace_flag, "print each contracted redex");

  auto* c_exp = app.add_subcommand("explore", "Exhaust the reduction graph and summarize");
  c_exp->add_option("FILE", file, "source file")->required();
  c_exp->add_option("--limit", limit, "node limit (default 1000000)")->check(CLI::PositiveNumber);
  c_exp->add_option("--dot", dot_out, "write the graph in DOT format to this file");

  auto* c_cls = app.add_subcommand("classify", "Print the head classification of a simple term");
  c_cls->add_option("FILE", file, "source file")->required();

  auto* c_gen = app.add_subcommand("gen", "Generate well-typed terms");
  c_gen->add_option("--seed", seed, "base random seed")->required();
  c_gen->add_option("--size", size, "size budget per term")
      ->required()
      ->check(CLI::PositiveNumber);
  c_gen->add_option("--count", count, "number of terms")->required()->check(CLI::PositiveNumber);
  c_gen->add_option("--goal", goal_str, "target formula (random when absent)");

  auto* c_har = app.add_subcommand("harness", "Run a theorem harness on a scenario file");
  c_har->add_option("KIND", kind, "harness kind")->required()->check(CLI::IsMember({"app"}));
  c_har->add_option("SCENARIO", file, "scenario file")->required();
  c_har->add_option("--trace", trace_file, "reduction trace file (generated when absent)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*c_check) return cmd_check(file);
    if (*c_step) return cmd_step(file, path_arg, strategy);
    if (*c_norm) return cmd_normalize(file, strategy, max_steps, trace_flag);
    if (*c_exp) return cmd_explore(file, limit, dot_out);
    if (*c_cls) return cmd_classify(file);
    if (*c_gen) return cmd_gen(seed, size, count, goal_str);
    if (*c_har) return cmd_harness(file, trace_file);
  } catch (const syntax_error& e) {
    std::cerr << g_source << ":" << e.what() << "\n";
    return 1;
  } catch (const type_error& e) {
    std::cerr << g_source << ":" << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
