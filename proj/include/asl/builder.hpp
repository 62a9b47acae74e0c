#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "asl/engine.hpp"
#include "asl/game.hpp"
#include "asl/interpreter.hpp"
#include "asl/kb.hpp"

namespace asl {

struct BuildConfig {
  Term id;
  Threshold thres = Threshold::at(0);
  int max_rounds = 10;
  std::uint64_t seed = 0;
  size_t node_budget = 1000000;
};

struct Staging {
  std::vector<Term> participants;  // participates/1 fluents in write order
  std::vector<Term> roles;         // role/2 fluents in write order
  std::vector<std::string> players;  // agent names, ascending standard order
};

struct RoundResult {
  RoundRecord record;  // leaves in ascending id order
  std::map<int, std::vector<Term>> leaf_states;
  std::map<int, bool> leaf_terminal;  // tau recorded under the leaf's joint action
};

struct BuiltGame {
  ExtensiveGame game;
  FluentAnnotation annotation;
  std::vector<RoundRecord> rounds;  // creation order; reverse order is deepest-last
  Staging staging;
};

// Asserts fluents on construction and retracts them in reverse on destruction.
class StateScope {
 public:
  StateScope(KnowledgeBase& kb, std::vector<Term> fluents);
  ~StateScope();
  StateScope(const StateScope&) = delete;
  StateScope& operator=(const StateScope&) = delete;

 private:
  KnowledgeBase* kb_;
  std::vector<Term> fluents_;
};

// Boundary then position staging: consequences asserted as they are derived,
// players drawn from the participates fluents. Throws NoParticipants when the
// boundary rules admit nobody.
Staging stage_participants_and_roles(KnowledgeBase& kb, Engine& engine, const BuildConfig& cfg,
                                     TraceLog* trace = nullptr);

// All instantiations of initially/1, in solution order, first occurrence kept.
std::vector<Term> derive_initial_state(Engine& engine);

// Expands one game round below `entry`, whose state must already be asserted
// (see StateScope). Movers appear in player order, each with one information
// set; leaves with several control consequences become chance nodes with one
// child per next state. Throws NoMovers when no agent holds a can fluent.
RoundResult build_game_round(ExtensiveGame& game, int entry, KnowledgeBase& kb, Engine& engine,
                             const BuildConfig& cfg, const std::vector<Term>& state,
                             const Staging& staging, TraceLog* trace = nullptr);

// Queue-driven round expansion from the initial state. A popped node is left
// as a leaf when its round index reaches max_rounds, its state satisfies
// terminal, or no agent can act there; leaves whose joint action already
// satisfied terminal are never enqueued.
BuiltGame build_full_game(KnowledgeBase& kb, const BuildConfig& cfg, TraceLog* trace = nullptr);

}  // namespace asl
