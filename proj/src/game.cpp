#include "asl/game.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace asl {

std::vector<int> ExtensiveGame::terminals() const {
  std::vector<int> out;
  for (const auto& n : nodes) {
    if (n.children.empty()) out.push_back(n.id);
  }
  return out;
}

int ExtensiveGame::depth(int id) const {
  int d = 0;
  for (int cur = id; node(cur).parent != 0; cur = node(cur).parent) ++d;
  return d;
}

int ExtensiveGame::add_node(NodeKind kind, int parent) {
  Node n;
  n.id = static_cast<int>(nodes.size()) + 1;
  n.kind = kind;
  n.parent = parent;
  nodes.push_back(std::move(n));
  if (parent != 0) node(parent).children.push_back(nodes.back().id);
  return nodes.back().id;
}

int ExtensiveGame::player_index(const std::string& name) const {
  for (size_t i = 0; i < players.size(); ++i) {
    if (players[i] == name) return static_cast<int>(i);
  }
  return -1;
}

size_t NormalFormGame::profile_count() const {
  size_t n = 1;
  for (const auto& a : actions) n *= a.size();
  return n;
}

size_t NormalFormGame::flat(const std::vector<size_t>& profile) const {
  size_t index = 0;
  for (size_t i = 0; i < profile.size(); ++i) index = index * actions[i].size() + profile[i];
  return index;
}

std::vector<size_t> NormalFormGame::unflat(size_t index) const {
  std::vector<size_t> profile(actions.size(), 0);
  for (size_t i = actions.size(); i-- > 0;) {
    profile[i] = index % actions[i].size();
    index /= actions[i].size();
  }
  return profile;
}

namespace {

std::string node_ref(int id) { return "node " + std::to_string(id); }

}  // namespace

std::vector<std::string> validate_game(const ExtensiveGame& g) {
  std::vector<std::string> violations;
  if (g.nodes.empty()) {
    violations.push_back("game has no nodes");
    return violations;
  }
  size_t edges = 0;
  for (size_t i = 0; i < g.nodes.size(); ++i) {
    const Node& n = g.nodes[i];
    if (n.id != static_cast<int>(i) + 1) {
      violations.push_back(node_ref(n.id) + " stored at index " + std::to_string(i));
    }
    if (n.id == ExtensiveGame::kRoot) {
      if (n.parent != 0) violations.push_back("root has a parent");
    } else if (n.parent <= 0 || n.parent > static_cast<int>(g.nodes.size())) {
      violations.push_back(node_ref(n.id) + " has no valid parent");
    } else {
      const auto& siblings = g.node(n.parent).children;
      if (std::find(siblings.begin(), siblings.end(), n.id) == siblings.end()) {
        violations.push_back(node_ref(n.id) + " missing from its parent's children");
      }
    }
    edges += n.children.size();
    for (int c : n.children) {
      if (c <= 0 || c > static_cast<int>(g.nodes.size()) || g.node(c).parent != n.id) {
        violations.push_back(node_ref(n.id) + " child link " + std::to_string(c) + " broken");
      }
    }
    if (!n.children.empty() && n.kind == NodeKind::Leaf) {
      violations.push_back(node_ref(n.id) + " marked leaf but has children");
    }
    if (n.kind == NodeKind::Chance) {
      Rational total(0);
      for (int c : n.children) total += g.node(c).chance_prob;
      if (total != Rational(1)) {
        violations.push_back(node_ref(n.id) + " chance probabilities sum to " +
                             rational_to_string(total));
      }
    }
    if (n.kind == NodeKind::Decision) {
      if (n.info_set < 0 || n.info_set >= static_cast<int>(g.info_sets.size())) {
        violations.push_back(node_ref(n.id) + " has no information set");
      } else {
        const InfoSet& w = g.info_sets[static_cast<size_t>(n.info_set)];
        if (w.player != n.player) {
          violations.push_back(node_ref(n.id) + " player disagrees with its information set");
        }
        if (n.children.size() != w.actions.size()) {
          violations.push_back(node_ref(n.id) + " outgoing edges differ from the action list");
        } else {
          for (size_t k = 0; k < n.children.size(); ++k) {
            if (g.node(n.children[k]).action != w.actions[k]) {
              violations.push_back(node_ref(n.id) + " edge " + std::to_string(k) +
                                   " label differs from the action list");
            }
          }
        }
      }
    }
  }
  if (edges != g.nodes.size() - 1) {
    violations.push_back("edge count " + std::to_string(edges) + " != node count - 1");
  }
  for (const auto& [id, u] : g.utilities) {
    if (id <= 0 || id > static_cast<int>(g.nodes.size()) || !g.is_terminal(id)) {
      violations.push_back("utilities assigned to non-terminal " + node_ref(id));
    }
    if (u.size() != g.players.size()) {
      violations.push_back(node_ref(id) + " utility vector length mismatch");
    }
  }
  return violations;
}

std::vector<std::string> validate_game_round(const ExtensiveGame& g, const RoundRecord& round) {
  std::vector<std::string> violations;
  const std::set<int> leaf_set(round.leaves.begin(), round.leaves.end());

  if (g.node(round.root).kind == NodeKind::Chance) {
    violations.push_back("round entry " + node_ref(round.root) + " is a chance node");
  }

  std::vector<int> interior;
  std::vector<int> stack{round.root};
  while (!stack.empty()) {
    int id = stack.back();
    stack.pop_back();
    if (leaf_set.count(id)) continue;
    interior.push_back(id);
    for (int c : g.node(id).children) stack.push_back(c);
  }

  std::map<int, std::set<int>> sets_per_player;
  std::map<int, std::set<int>> depths_per_set;
  for (int id : interior) {
    const Node& n = g.node(id);
    if (n.kind == NodeKind::Decision) {
      sets_per_player[n.player].insert(n.info_set);
      depths_per_set[n.info_set].insert(g.depth(id) - g.depth(round.root));
    }
    if (n.kind == NodeKind::Chance) {
      for (int c : n.children) {
        if (!leaf_set.count(c)) {
          violations.push_back("chance " + node_ref(id) + " child " + std::to_string(c) +
                               " is not a round leaf");
        }
      }
    }
  }
  for (const auto& [player, sets] : sets_per_player) {
    if (sets.size() > 1) {
      violations.push_back("player " + g.players[static_cast<size_t>(player)] + " has " +
                           std::to_string(sets.size()) + " information sets in one round");
    }
  }
  for (const auto& [set_id, depths] : depths_per_set) {
    if (depths.size() > 1) {
      violations.push_back("information set " + std::to_string(set_id) +
                           " spans several entry distances");
    }
  }
  return violations;
}

std::vector<Term> canonical_fluent_order(std::vector<Term> fluents) {
  auto key_less = [](const Term& a, const Term& b) {
    bool na = a.is_compound() && a.name() == "~" && a.arity() == 1;
    bool nb = b.is_compound() && b.name() == "~" && b.arity() == 1;
    if (na != nb) return nb;
    const Term& ca = na ? a.args()[0] : a;
    const Term& cb = nb ? b.args()[0] : b;
    if (ca.name() != cb.name()) return ca.name() < cb.name();
    if (ca.arity() != cb.arity()) return ca.arity() < cb.arity();
    for (size_t i = 0; i < ca.arity(); ++i) {
      int c = container_compare(ca.args()[i], cb.args()[i]);
      if (c != 0) return c < 0;
    }
    return false;
  };
  std::stable_sort(fluents.begin(), fluents.end(), key_less);
  return fluents;
}

bool validate_perfect_recall(const ExtensiveGame& g) {
  for (const auto& w : g.info_sets) {
    std::vector<std::vector<std::pair<int, int>>> experiences;
    for (int id : w.nodes) {
      std::vector<std::pair<int, int>> xp;
      int cur = id;
      while (g.node(cur).parent != 0) {
        int parent = g.node(cur).parent;
        const Node& p = g.node(parent);
        if (p.kind == NodeKind::Decision && p.player == w.player) {
          const auto& kids = p.children;
          int action_index = static_cast<int>(
              std::find(kids.begin(), kids.end(), cur) - kids.begin());
          xp.emplace_back(p.info_set, action_index);
        }
        cur = parent;
      }
      std::reverse(xp.begin(), xp.end());
      experiences.push_back(std::move(xp));
    }
    for (size_t i = 1; i < experiences.size(); ++i) {
      if (experiences[i] != experiences[0]) return false;
    }
  }
  return true;
}

}  // namespace asl
