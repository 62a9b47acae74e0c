#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "asl/builder.hpp"
#include "asl/game.hpp"
#include "asl/kb.hpp"
#include "asl/rational.hpp"
#include "asl/term.hpp"

namespace asl {

enum class UtilityMode { PayoffFluent, CriterionTable };

// One table entry: either a state rule (all `when` patterns hold and no
// `unless` pattern does, conjunctively with shared bindings) or a path rule
// (applied per decision edge whose action matches). The variable A in
// patterns stands for the agent being evaluated.
struct UtilityRule {
  std::string name;
  std::vector<Term> when;
  std::vector<Term> unless;
  std::optional<Term> action;
  Rational value;
};

struct CriterionSpec {
  std::string name;
  std::string kind;  // event | expected_payoff | utilitarian | egalitarian | constant
  Term pattern;      // event
  std::string agent;  // expected_payoff
  Rational constant;  // constant
};

struct UtilitySpec {
  UtilityMode mode = UtilityMode::PayoffFluent;
  std::vector<UtilityRule> rules;
  std::vector<CriterionSpec> criteria;
};

UtilitySpec payoff_fluent_spec();
UtilitySpec parse_criteria_json(const std::string& text);
UtilitySpec load_criteria_file(const std::string& path);

// Fills game.utilities for every terminal. PayoffFluent mode reads one
// payoff(agent, x) fluent per player; CriterionTable sums matching state
// rules (queried against the terminal's fluents through kb) and path rules
// over the terminal's root path.
void assign_utilities(ExtensiveGame& game, const FluentAnnotation& annotation,
                      const UtilitySpec& spec, KnowledgeBase& kb);

// Normal form of one round given values for all its leaves: mover payoffs in
// `nf`, full per-player vectors (chance children averaged) in `full`.
struct RoundTable {
  NormalFormGame nf;
  std::vector<std::vector<Rational>> full;
  std::vector<int> mover_players;
};

RoundTable round_to_normal_form(const ExtensiveGame& g, const RoundRecord& round,
                                const std::map<int, std::vector<Rational>>& values);

// Per-player mixed strategies, one distribution per strategic player.
using MixedProfile = std::vector<std::vector<Rational>>;

// All Nash equilibria found by exact support enumeration (two strategic
// players), argmax vertices (one player), or pure-profile search (more
// players). Every returned profile survives an exhaustive pure-deviation
// check; the list is deduplicated and sorted by support, then probabilities.
// Throws UnsupportedShape for shapes whose mixed equilibria the enumeration
// cannot cover.
std::vector<MixedProfile> nash_equilibria(const NormalFormGame& g);

enum class SelectionPolicy { First, MaxWelfare, All };

std::optional<SelectionPolicy> selection_from_name(const std::string& name);

struct RoundEquilibria {
  int root = ExtensiveGame::kRoot;
  std::vector<MixedProfile> equilibria;  // all found, given the deeper rounds' selections
  size_t chosen = 0;
};

struct SolveVariant {
  std::map<int, std::vector<Rational>> profile;      // info set -> distribution
  std::map<int, std::vector<Rational>> node_values;  // state nodes -> per-player value
  std::map<int, Rational> outcome_dist;              // every terminal, zeros included
  std::map<std::string, Rational> criterion_expectations;
  std::vector<RoundEquilibria> rounds;  // deepest first
};

struct SolveReport {
  std::vector<std::string> players;
  std::vector<SolveVariant> variants;  // one unless the policy is All
  size_t selected = 0;
  bool truncated = false;  // All hit the variant cap
};

// Round-wise backward induction: rounds are solved deepest first, each round
// replaced by its value under the equilibrium the policy selects; the outcome
// distribution follows the behavioral and chance probabilities from the root.
SolveReport backtrack_solve(const BuiltGame& built, SelectionPolicy policy,
                            size_t variant_cap = 128);

std::map<std::string, Rational> evaluate_criteria(const BuiltGame& built,
                                                  const std::map<int, Rational>& outcome_dist,
                                                  const std::vector<CriterionSpec>& criteria);

// Evaluates spec.criteria into every variant of the report.
void attach_criteria(const BuiltGame& built, const UtilitySpec& spec, SolveReport& report);

std::string report_to_json(const BuiltGame& built, const SolveReport& report);
std::string report_to_table(const BuiltGame& built, const SolveReport& report);

}  // namespace asl
