#include "asl/builder.hpp"

#include <algorithm>
#include <deque>
#include <set>

#include "asl/errors.hpp"

namespace asl {

StateScope::StateScope(KnowledgeBase& kb, std::vector<Term> fluents)
    : kb_(&kb), fluents_(std::move(fluents)) {
  for (const auto& f : fluents_) kb_->assert_fact(f);
}

StateScope::~StateScope() {
  for (auto it = fluents_.rbegin(); it != fluents_.rend(); ++it) kb_->retract_fact(*it);
}

Staging stage_participants_and_roles(KnowledgeBase& kb, Engine& engine, const BuildConfig& cfg,
                                     TraceLog* trace) {
  Staging staged;
  staged.participants =
      get_simple_conseqs(engine, cfg.id, RuleType::Boundary, cfg.thres, trace);
  if (staged.participants.empty()) {
    throw NoParticipantsError("boundary rules admit no participants for " +
                              cfg.id.to_string());
  }
  for (const auto& f : staged.participants) kb.assert_fact(f);

  staged.roles = get_simple_conseqs(engine, cfg.id, RuleType::Position, cfg.thres, trace);
  for (const auto& f : staged.roles) kb.assert_fact(f);

  std::set<std::string> names;
  for (const auto& f : staged.participants) {
    if (f.is_compound() && f.name() == "participates" && f.arity() == 1 &&
        f.args()[0].is_symbol()) {
      names.insert(f.args()[0].name());
    }
  }
  staged.players.assign(names.begin(), names.end());
  return staged;
}

std::vector<Term> derive_initial_state(Engine& engine) {
  std::vector<Term> state;
  Term goal = Term::compound("initially", {Term::var("F")});
  engine.query(goal, [&](const Subst& s) {
    Term f = s.apply(Term::var("F"));
    if (std::find(state.begin(), state.end(), f) == state.end()) state.push_back(f);
    return true;
  });
  return state;
}

namespace {

struct MoverActions {
  int player = -1;
  std::vector<Term> actions;
};

std::vector<MoverActions> movers_at(Engine& engine, const BuildConfig& cfg,
                                    const Staging& staging, TraceLog* trace) {
  auto choices = get_simple_conseqs(engine, cfg.id, RuleType::Choice, cfg.thres, trace);
  std::vector<MoverActions> movers;
  for (size_t p = 0; p < staging.players.size(); ++p) {
    MoverActions m;
    m.player = static_cast<int>(p);
    for (const auto& f : choices) {
      if (f.is_compound() && f.name() == "can" && f.arity() == 2 &&
          f.args()[0].is_symbol() && f.args()[0].name() == staging.players[p]) {
        m.actions.push_back(f.args()[1]);
      }
    }
    if (!m.actions.empty()) movers.push_back(std::move(m));
  }
  return movers;
}

}  // namespace

RoundResult build_game_round(ExtensiveGame& game, int entry, KnowledgeBase& kb, Engine& engine,
                             const BuildConfig& cfg, const std::vector<Term>& state,
                             const Staging& staging, TraceLog* trace) {
  auto movers = movers_at(engine, cfg, staging, trace);
  if (movers.empty()) {
    throw NoMoversError("no agent can act at node " + std::to_string(entry));
  }

  RoundResult result;
  result.record.root = entry;

  std::vector<int> level{entry};
  for (size_t m = 0; m < movers.size(); ++m) {
    InfoSet w;
    w.player = movers[m].player;
    w.actions = movers[m].actions;
    w.nodes = level;
    int set_id = static_cast<int>(game.info_sets.size());
    game.info_sets.push_back(w);
    result.record.movers.push_back(movers[m].player);
    result.record.info_sets.push_back(set_id);

    std::vector<int> next_level;
    for (int id : level) {
      Node& n = game.node(id);
      n.kind = NodeKind::Decision;
      n.player = movers[m].player;
      n.info_set = set_id;
      for (const auto& action : movers[m].actions) {
        int child = game.add_node(NodeKind::Leaf, id);
        game.node(child).action = action;
        next_level.push_back(child);
      }
    }
    level = std::move(next_level);
  }

  Term terminal_goal = Term::symbol("terminal");
  for (int leaf : level) {
    std::vector<Term> joint;
    for (int cur = leaf; cur != entry;) {
      const Node& n = game.node(cur);
      int parent = n.parent;
      joint.push_back(Term::compound(
          "does", {Term::symbol(game.players[static_cast<size_t>(game.node(parent).player)]),
                   n.action}));
      cur = parent;
    }
    std::reverse(joint.begin(), joint.end());

    StateScope mu(kb, joint);
    bool tau = engine.provable(terminal_goal);
    auto dist = get_control_conseqs(engine, cfg.id, cfg.thres, state, trace);

    if (dist.size() == 1) {
      result.leaf_states[leaf] = std::move(dist[0].fluents);
      result.leaf_terminal[leaf] = tau;
      result.record.leaves.push_back(leaf);
    } else {
      Node& n = game.node(leaf);
      n.kind = NodeKind::Chance;
      for (auto& ws : dist) {
        int child = game.add_node(NodeKind::Leaf, leaf);
        game.node(child).chance_prob = ws.prob;
        result.leaf_states[child] = std::move(ws.fluents);
        result.leaf_terminal[child] = tau;
        result.record.leaves.push_back(child);
      }
    }
  }

  std::sort(result.record.leaves.begin(), result.record.leaves.end());
  return result;
}

BuiltGame build_full_game(KnowledgeBase& kb, const BuildConfig& cfg, TraceLog* trace) {
  RandomContext random(cfg.seed);
  Engine engine(kb, &random);

  BuiltGame built;
  built.staging = stage_participants_and_roles(kb, engine, cfg, trace);
  built.game.players = built.staging.players;

  int root = built.game.add_node(NodeKind::Leaf, 0);
  built.annotation.fluents[root] = derive_initial_state(engine);
  built.annotation.round_index[root] = 0;

  Term terminal_goal = Term::symbol("terminal");
  std::deque<int> queue{root};
  while (!queue.empty()) {
    int id = queue.front();
    queue.pop_front();

    int index = built.annotation.round_index[id];
    if (index >= cfg.max_rounds) continue;

    const std::vector<Term>& state = built.annotation.fluents[id];
    StateScope scope(kb, state);
    if (engine.provable(terminal_goal)) continue;

    RoundResult round;
    try {
      round = build_game_round(built.game, id, kb, engine, cfg, state, built.staging, trace);
    } catch (const NoMoversError&) {
      continue;
    }
    round.record.index = index;

    if (built.game.nodes.size() > cfg.node_budget) {
      throw NodeBudgetError("node budget exceeded: " + std::to_string(built.game.nodes.size()) +
                            " nodes, frontier " + std::to_string(queue.size()));
    }

    for (int leaf : round.record.leaves) {
      built.annotation.fluents[leaf] = std::move(round.leaf_states[leaf]);
      built.annotation.round_index[leaf] = index + 1;
      if (!round.leaf_terminal[leaf]) queue.push_back(leaf);
    }
    built.rounds.push_back(std::move(round.record));
  }
  return built;
}

}  // namespace asl
