#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "asl/builder.hpp"
#include "asl/errors.hpp"
#include "asl/export.hpp"
#include "asl/parser.hpp"
#include "asl/solver.hpp"

namespace {

struct Options {
  std::string agents;
  std::string states;
  std::string rules;
  std::string description;
  std::string id;
  std::string threshold = "0";
  int max_rounds = 10;
  std::uint64_t seed = 0;
  std::size_t node_budget = 1000000;
  std::size_t variant_cap = 128;
  std::string format;
  std::string utilities = "payoff";
  std::string criteria;
  std::string selection = "first";
  std::string out;
  bool trace = false;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw asl::UnsupportedFormatError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void add_source_options(CLI::App* cmd, Options& o) {
  cmd->add_option("--agents", o.agents, "agent base file");
  cmd->add_option("--states", o.states, "state base file");
  cmd->add_option("--rules", o.rules, "rule base file");
  cmd->add_option("--description", o.description, "single-file description");
}

void add_build_options(CLI::App* cmd, Options& o) {
  cmd->add_option("--id", o.id, "action situation id (inferred when the rules use one id)");
  cmd->add_option("--threshold", o.threshold, "priority threshold, an integer or inf");
  cmd->add_option("--max-rounds", o.max_rounds, "round horizon");
  cmd->add_option("--seed", o.seed, "random seed")->envname("ASL_SEED");
  cmd->add_option("--node-budget", o.node_budget, "node count ceiling");
  cmd->add_flag("--trace", o.trace, "log rule activations to stderr");
}

std::vector<asl::SourceFile> gather_sources(const Options& o) {
  std::vector<asl::SourceFile> sources;
  if (!o.description.empty()) {
    sources.push_back({o.description, read_file(o.description), std::nullopt});
  }
  if (!o.agents.empty()) {
    sources.push_back({o.agents, read_file(o.agents), asl::Section::Agents});
  }
  if (!o.states.empty()) {
    sources.push_back({o.states, read_file(o.states), asl::Section::States});
  }
  if (!o.rules.empty()) {
    sources.push_back({o.rules, read_file(o.rules), asl::Section::Rules});
  }
  return sources;
}

int load_description(const Options& o, asl::AslDescription& out) {
  auto sources = gather_sources(o);
  if (sources.empty()) {
    std::cerr << "error: no input; pass --description or --agents/--states/--rules\n";
    return 2;
  }
  auto parsed = asl::parse_description(sources);
  for (const auto& d : parsed.diagnostics) std::cerr << d.to_string() << "\n";
  if (!parsed.ok) return 1;
  auto diags = asl::validate(parsed.description);
  for (const auto& d : diags) std::cerr << d.to_string() << "\n";
  if (asl::has_errors(diags)) return 1;
  out = std::move(parsed.description);
  return 0;
}

int resolve_config(const Options& o, const asl::AslDescription& d, asl::BuildConfig& cfg) {
  if (!o.id.empty()) {
    cfg.id = asl::parse_term(o.id);
  } else {
    std::set<asl::Term, asl::TermLess> ids;
    for (const auto& r : d.rules) ids.insert(r.id);
    if (ids.empty()) {
      std::cerr << "error: the description declares no rules\n";
      return 1;
    }
    if (ids.size() > 1) {
      std::cerr << "error: several action situation ids found, pass --id:";
      for (const auto& id : ids) std::cerr << " " << id.to_string();
      std::cerr << "\n";
      return 2;
    }
    cfg.id = *ids.begin();
  }
  if (o.threshold == "inf") {
    cfg.thres = asl::Threshold::inf();
  } else {
    try {
      size_t pos = 0;
      long v = std::stol(o.threshold, &pos);
      if (pos != o.threshold.size()) throw std::invalid_argument(o.threshold);
      cfg.thres = asl::Threshold::at(v);
    } catch (const std::exception&) {
      std::cerr << "error: --threshold takes an integer or inf, got " << o.threshold << "\n";
      return 2;
    }
  }
  cfg.max_rounds = o.max_rounds;
  cfg.seed = o.seed;
  cfg.node_budget = o.node_budget;
  return 0;
}

asl::TraceLog make_trace(const Options& o) {
  asl::TraceLog trace;
  if (o.trace) {
    trace.sink = [](const std::string& line) { std::cerr << line << "\n"; };
  }
  return trace;
}

void emit(const Options& o, const std::string& artifact, const std::string& stats) {
  if (o.out.empty()) {
    std::cout << artifact;
    if (!stats.empty()) std::cerr << stats;
  } else {
    std::ofstream f(o.out);
    if (!f) throw asl::UnsupportedFormatError("cannot write " + o.out);
    f << artifact;
    if (!stats.empty()) std::cout << stats;
  }
}

int run_validate(const Options& o) {
  asl::AslDescription d;
  int rc = load_description(o, d);
  if (rc != 0) return rc;
  std::cout << "ok: " << d.clauses.size() << " clauses, " << d.rules.size()
            << " rule statements\n";
  return 0;
}

int build_game(const Options& o, asl::KnowledgeBase& kb, asl::BuiltGame& built) {
  asl::AslDescription d;
  int rc = load_description(o, d);
  if (rc != 0) return rc;
  asl::BuildConfig cfg;
  rc = resolve_config(o, d, cfg);
  if (rc != 0) return rc;
  kb = asl::lower(d);
  asl::TraceLog trace = make_trace(o);
  built = asl::build_full_game(kb, cfg, trace ? &trace : nullptr);
  return 0;
}

std::string game_stats(const asl::BuiltGame& built) {
  size_t decisions = 0;
  size_t chance = 0;
  size_t leaves = 0;
  for (const auto& n : built.game.nodes) {
    if (n.children.empty()) {
      ++leaves;
    } else if (n.kind == asl::NodeKind::Chance) {
      ++chance;
    } else {
      ++decisions;
    }
  }
  std::ostringstream out;
  out << "nodes " << built.game.nodes.size() << " (decision " << decisions << ", chance "
      << chance << ", leaf " << leaves << "), info sets " << built.game.info_sets.size()
      << ", rounds " << built.rounds.size() << "\n";
  return out.str();
}

int run_build(const Options& o) {
  asl::KnowledgeBase kb;
  asl::BuiltGame built;
  int rc = build_game(o, kb, built);
  if (rc != 0) return rc;
  std::string format = o.format.empty() ? "json" : o.format;
  std::string artifact;
  if (format == "dot") {
    artifact = asl::export_dot(built);
  } else if (format == "json") {
    artifact = asl::export_json(built);
  } else {
    std::cerr << "error: --format takes dot or json, got " << format << "\n";
    return 2;
  }
  emit(o, artifact, game_stats(built));
  return 0;
}

int run_solve(const Options& o, bool criteria_only) {
  asl::KnowledgeBase kb;
  asl::BuiltGame built;
  int rc = build_game(o, kb, built);
  if (rc != 0) return rc;

  asl::UtilitySpec spec;
  if (criteria_only) {
    if (o.criteria.empty()) {
      std::cerr << "error: eval needs --criteria FILE\n";
      return 2;
    }
    spec = asl::load_criteria_file(o.criteria);
  } else if (o.utilities == "payoff") {
    spec = asl::payoff_fluent_spec();
  } else {
    spec = asl::load_criteria_file(o.utilities);
  }

  auto policy = asl::selection_from_name(o.selection);
  if (!policy) {
    std::cerr << "error: --selection takes first, max-welfare or all, got " << o.selection
              << "\n";
    return 2;
  }

  asl::assign_utilities(built.game, built.annotation, spec, kb);
  auto report = asl::backtrack_solve(built, *policy, o.variant_cap);
  asl::attach_criteria(built, spec, report);

  std::string format = o.format.empty() ? "table" : o.format;
  std::string artifact;
  if (format == "json") {
    artifact = asl::report_to_json(built, report);
  } else if (format == "table") {
    if (criteria_only) {
      std::ostringstream out;
      const auto& variant = report.variants[report.selected];
      for (const auto& [name, value] : variant.criterion_expectations) {
        out << name << " = " << asl::render_decimal(value, 2) << " ("
            << asl::rational_to_string(value) << ")\n";
      }
      artifact = out.str();
    } else {
      artifact = asl::report_to_table(built, report);
    }
  } else {
    std::cerr << "error: --format takes json or table, got " << format << "\n";
    return 2;
  }
  emit(o, artifact, "");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Action situation toolkit: parse rule descriptions, compile game trees, "
               "solve them round by round and evaluate criteria"};
  app.require_subcommand(1);
  Options o;

  auto* validate_cmd = app.add_subcommand("validate", "Parse a description and check validity");
  add_source_options(validate_cmd, o);

  auto* build_cmd = app.add_subcommand("build", "Compile a description into a game tree");
  add_source_options(build_cmd, o);
  add_build_options(build_cmd, o);
  build_cmd->add_option("--format", o.format, "dot or json (default json)");
  build_cmd->add_option("--out", o.out, "output file (default stdout)");

  auto* solve_cmd = app.add_subcommand("solve", "Build and solve round by round");
  add_source_options(solve_cmd, o);
  add_build_options(solve_cmd, o);
  solve_cmd->add_option("--utilities", o.utilities,
                        "payoff for payoff fluents, or a criteria file (default payoff)");
  solve_cmd->add_option("--selection", o.selection,
                        "equilibrium selection: first, max-welfare or all");
  solve_cmd->add_option("--variant-cap", o.variant_cap, "cap on enumerated variants");
  solve_cmd->add_option("--format", o.format, "table or json (default table)");
  solve_cmd->add_option("--out", o.out, "output file (default stdout)");

  auto* eval_cmd = app.add_subcommand("eval", "Solve and report criterion expectations");
  add_source_options(eval_cmd, o);
  add_build_options(eval_cmd, o);
  eval_cmd->add_option("--criteria", o.criteria, "criteria file with utilities and criteria")
      ->required();
  eval_cmd->add_option("--selection", o.selection,
                       "equilibrium selection: first, max-welfare or all");
  eval_cmd->add_option("--variant-cap", o.variant_cap, "cap on enumerated variants");
  eval_cmd->add_option("--format", o.format, "table or json (default table)");
  eval_cmd->add_option("--out", o.out, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand(validate_cmd)) return run_validate(o);
    if (app.got_subcommand(build_cmd)) return run_build(o);
    if (app.got_subcommand(solve_cmd)) return run_solve(o, false);
    if (app.got_subcommand(eval_cmd)) return run_solve(o, true);
  } catch (const asl::AslError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
