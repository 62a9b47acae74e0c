#pragma once

#include <map>
#include <string>
#include <vector>

#include "asl/rational.hpp"
#include "asl/term.hpp"

namespace asl {

enum class NodeKind { Decision, Chance, Leaf };

// Tree node with dense 1-based ids; the incoming edge's label lives on the
// child: `action` under a decision parent, `chance_prob` under a chance
// parent.
struct Node {
  int id = 0;
  NodeKind kind = NodeKind::Leaf;
  int parent = 0;  // 0 at the root
  std::vector<int> children;
  int player = -1;    // decision nodes: index into players
  int info_set = -1;  // decision nodes: index into info_sets
  Term action;
  Rational chance_prob = Rational(1);
};

struct InfoSet {
  int player = -1;
  std::vector<int> nodes;
  std::vector<Term> actions;
};

struct ExtensiveGame {
  std::vector<std::string> players;
  std::vector<Node> nodes;  // nodes[id - 1]
  std::vector<InfoSet> info_sets;
  std::map<int, std::vector<Rational>> utilities;  // terminal id -> per-player values

  static constexpr int kRoot = 1;

  Node& node(int id) { return nodes[static_cast<size_t>(id) - 1]; }
  const Node& node(int id) const { return nodes[static_cast<size_t>(id) - 1]; }
  bool is_terminal(int id) const { return node(id).children.empty(); }
  std::vector<int> terminals() const;
  int depth(int id) const;

  int add_node(NodeKind kind, int parent);
  int player_index(const std::string& name) const;
};

// State-fluent annotation: defined exactly on round roots and round leaves;
// auxiliary decision and chance interior nodes carry no state.
struct FluentAnnotation {
  std::map<int, std::vector<Term>> fluents;
  std::map<int, int> round_index;
};

// One game round embedded in the full tree: entry node, its movers (player
// indices in mover order), their information sets, and the round's leaves.
struct RoundRecord {
  int root = ExtensiveGame::kRoot;
  int index = 0;
  std::vector<int> movers;
  std::vector<int> info_sets;
  std::vector<int> leaves;
};

struct NormalFormGame {
  std::vector<std::string> players;
  std::vector<std::vector<Term>> actions;           // per player, ordered
  std::vector<std::vector<Rational>> payoffs;       // [flat profile][player]

  size_t profile_count() const;
  size_t flat(const std::vector<size_t>& profile) const;
  std::vector<size_t> unflat(size_t index) const;
};

// Structural checks: parent/child consistency, dense ids, single root,
// |E| = |X| - 1, chance probabilities summing to 1, decision edges matching
// the information set's action list.
std::vector<std::string> validate_game(const ExtensiveGame& g);

// The four game-round conditions: the entry node is not a chance node; at
// most one information set per player; equal entry-distance within every
// information set; every chance node's children are round leaves.
std::vector<std::string> validate_game_round(const ExtensiveGame& g, const RoundRecord& round);

// True iff every player's experience (their own information sets visited and
// actions taken) is identical along all paths into each information set.
bool validate_perfect_recall(const ExtensiveGame& g);

// Display order for state-fluent sets: positive fluents before negated ones,
// then by functor name, arity and arguments.
std::vector<Term> canonical_fluent_order(std::vector<Term> fluents);

}  // namespace asl
