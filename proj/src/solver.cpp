#include "asl/solver.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include <json.hpp>

#include "asl/errors.hpp"
#include "asl/parser.hpp"

namespace asl {

using ordered_json = nlohmann::ordered_json;

namespace {

Rational json_rational(const nlohmann::json& v, const std::string& context) {
  if (v.is_number_integer()) return make_rational(v.get<std::int64_t>());
  if (v.is_string()) return rational_from_literal(v.get<std::string>());
  throw UnsupportedFormatError(context + ": numeric values must be integers or string literals");
}

ordered_json rational_json(const Rational& r) {
  ordered_json out;
  out["num"] = boost::multiprecision::numerator(r).str();
  out["den"] = boost::multiprecision::denominator(r).str();
  return out;
}

}  // namespace

UtilitySpec payoff_fluent_spec() { return UtilitySpec{}; }

namespace {

UtilitySpec parse_criteria_doc(const nlohmann::json& doc) {
  UtilitySpec spec;
  if (doc.contains("utilities") && doc["utilities"].is_array() && !doc["utilities"].empty()) {
    spec.mode = UtilityMode::CriterionTable;
    for (const auto& entry : doc["utilities"]) {
      UtilityRule rule;
      rule.name = entry.value("name", "");
      if (entry.contains("when")) {
        for (const auto& p : entry["when"]) rule.when.push_back(parse_term(p.get<std::string>()));
      }
      if (entry.contains("unless")) {
        for (const auto& p : entry["unless"]) {
          rule.unless.push_back(parse_term(p.get<std::string>()));
        }
      }
      if (entry.contains("action")) rule.action = parse_term(entry["action"].get<std::string>());
      if (!entry.contains("value")) {
        throw UnsupportedFormatError("utility rule " + rule.name + " lacks a value");
      }
      rule.value = json_rational(entry["value"], "utility rule " + rule.name);
      if (!rule.action && rule.when.empty()) {
        throw UnsupportedFormatError("utility rule " + rule.name +
                                     " needs when patterns or an action pattern");
      }
      spec.rules.push_back(std::move(rule));
    }
  }
  if (doc.contains("criteria")) {
    for (const auto& entry : doc["criteria"]) {
      CriterionSpec c;
      c.name = entry.value("name", "");
      c.kind = entry.value("kind", "");
      if (c.kind == "event") {
        c.pattern = parse_term(entry.at("pattern").get<std::string>());
      } else if (c.kind == "expected_payoff") {
        c.agent = entry.at("agent").get<std::string>();
      } else if (c.kind == "constant") {
        c.constant = json_rational(entry.at("value"), "criterion " + c.name);
      } else if (c.kind != "utilitarian" && c.kind != "egalitarian") {
        throw UnsupportedFormatError("criterion " + c.name + " has unknown kind " + c.kind);
      }
      spec.criteria.push_back(std::move(c));
    }
  }
  return spec;
}

}  // namespace

UtilitySpec parse_criteria_json(const std::string& text) {
  try {
    return parse_criteria_doc(nlohmann::json::parse(text));
  } catch (const nlohmann::json::exception& e) {
    throw UnsupportedFormatError(std::string("criteria file: ") + e.what());
  }
}

UtilitySpec load_criteria_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UnsupportedFormatError("cannot open criteria file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_criteria_json(buf.str());
}

namespace {

std::vector<Rational> payoff_fluent_utilities(const ExtensiveGame& game, int terminal,
                                              const std::vector<Term>& fluents) {
  std::vector<Rational> u(game.players.size(), Rational(0));
  std::vector<bool> found(game.players.size(), false);
  for (const auto& f : fluents) {
    if (!f.is_compound() || f.name() != "payoff" || f.arity() != 2) continue;
    if (!f.args()[0].is_symbol() || !f.args()[1].is_number()) continue;
    int p = game.player_index(f.args()[0].name());
    if (p < 0) continue;
    if (found[static_cast<size_t>(p)]) {
      throw AmbiguousPayoffError("terminal " + std::to_string(terminal) +
                                 " has several payoff fluents for " + f.args()[0].name());
    }
    found[static_cast<size_t>(p)] = true;
    u[static_cast<size_t>(p)] = f.args()[1].value();
  }
  for (size_t i = 0; i < found.size(); ++i) {
    if (!found[i]) {
      throw MissingPayoffError("terminal " + std::to_string(terminal) + " lacks payoff(" +
                               game.players[i] + ", _)");
    }
  }
  return u;
}

std::vector<Rational> table_utilities(const ExtensiveGame& game, int terminal,
                                      const std::vector<Term>& fluents, const UtilitySpec& spec,
                                      KnowledgeBase& kb) {
  std::vector<Rational> u(game.players.size(), Rational(0));
  StateScope scope(kb, fluents);
  Engine engine(kb);
  for (size_t i = 0; i < game.players.size(); ++i) {
    Subst agent;
    agent.bind("A", Term::symbol(game.players[i]));
    for (const auto& rule : spec.rules) {
      if (rule.action) {
        Term pattern = agent.apply(*rule.action);
        for (int cur = terminal; game.node(cur).parent != 0; cur = game.node(cur).parent) {
          const Node& parent = game.node(game.node(cur).parent);
          if (parent.kind != NodeKind::Decision) continue;
          if (game.players[static_cast<size_t>(parent.player)] != game.players[i]) continue;
          if (unify(pattern, game.node(cur).action)) u[i] += rule.value;
        }
      } else {
        std::vector<Term> goals;
        for (const auto& p : rule.when) goals.push_back(agent.apply(p));
        for (const auto& p : rule.unless) {
          goals.push_back(Term::compound("\\+", {agent.apply(p)}));
        }
        bool holds = false;
        engine.query(goals, [&](const Subst&) {
          holds = true;
          return false;
        });
        if (holds) u[i] += rule.value;
      }
    }
  }
  return u;
}

}  // namespace

void assign_utilities(ExtensiveGame& game, const FluentAnnotation& annotation,
                      const UtilitySpec& spec, KnowledgeBase& kb) {
  game.utilities.clear();
  for (int z : game.terminals()) {
    auto it = annotation.fluents.find(z);
    if (it == annotation.fluents.end()) {
      throw MissingPayoffError("terminal " + std::to_string(z) + " carries no state fluents");
    }
    game.utilities[z] = spec.mode == UtilityMode::PayoffFluent
                            ? payoff_fluent_utilities(game, z, it->second)
                            : table_utilities(game, z, it->second, spec, kb);
  }
}

RoundTable round_to_normal_form(const ExtensiveGame& g, const RoundRecord& round,
                                const std::map<int, std::vector<Rational>>& values) {
  RoundTable table;
  table.mover_players = round.movers;
  for (int m : round.movers) table.nf.players.push_back(g.players[static_cast<size_t>(m)]);
  for (int w : round.info_sets) {
    table.nf.actions.push_back(g.info_sets[static_cast<size_t>(w)].actions);
  }
  size_t count = table.nf.profile_count();
  table.nf.payoffs.resize(count);
  table.full.resize(count);
  for (size_t flat = 0; flat < count; ++flat) {
    auto profile = table.nf.unflat(flat);
    int cur = round.root;
    for (size_t m = 0; m < profile.size(); ++m) {
      cur = g.node(cur).children[profile[m]];
    }
    std::vector<Rational> v(g.players.size(), Rational(0));
    if (g.node(cur).kind == NodeKind::Chance) {
      for (int c : g.node(cur).children) {
        const auto& child_value = values.at(c);
        for (size_t i = 0; i < v.size(); ++i) v[i] += g.node(c).chance_prob * child_value[i];
      }
    } else {
      v = values.at(cur);
    }
    for (int m : round.movers) table.nf.payoffs[flat].push_back(v[static_cast<size_t>(m)]);
    table.full[flat] = std::move(v);
  }
  return table;
}

namespace {

// Unique solution of a (possibly non-square) exact linear system, or nullopt
// when the system is inconsistent or underdetermined.
std::optional<std::vector<Rational>> solve_unique(std::vector<std::vector<Rational>> a,
                                                  std::vector<Rational> b) {
  size_t rows = a.size();
  size_t cols = rows == 0 ? 0 : a[0].size();
  std::vector<size_t> pivot_col;
  size_t r = 0;
  for (size_t c = 0; c < cols && r < rows; ++c) {
    size_t pivot = r;
    while (pivot < rows && a[pivot][c] == 0) ++pivot;
    if (pivot == rows) continue;
    std::swap(a[pivot], a[r]);
    std::swap(b[pivot], b[r]);
    for (size_t i = 0; i < rows; ++i) {
      if (i == r || a[i][c] == 0) continue;
      Rational factor = a[i][c] / a[r][c];
      for (size_t j = c; j < cols; ++j) a[i][j] -= factor * a[r][j];
      b[i] -= factor * b[r];
    }
    pivot_col.push_back(c);
    ++r;
  }
  for (size_t i = r; i < rows; ++i) {
    if (b[i] != 0) return std::nullopt;
  }
  if (pivot_col.size() != cols) return std::nullopt;
  std::vector<Rational> x(cols, Rational(0));
  for (size_t i = 0; i < pivot_col.size(); ++i) x[pivot_col[i]] = b[i] / a[i][pivot_col[i]];
  return x;
}

Rational mixed_value(const NormalFormGame& g, const MixedProfile& prof, size_t player) {
  Rational v(0);
  for (size_t flat = 0; flat < g.profile_count(); ++flat) {
    auto profile = g.unflat(flat);
    Rational w(1);
    for (size_t i = 0; i < profile.size(); ++i) w *= prof[i][profile[i]];
    if (w != 0) v += w * g.payoffs[flat][player];
  }
  return v;
}

Rational deviation_value(const NormalFormGame& g, const MixedProfile& prof, size_t player,
                         size_t action) {
  MixedProfile deviated = prof;
  deviated[player].assign(g.actions[player].size(), Rational(0));
  deviated[player][action] = Rational(1);
  return mixed_value(g, deviated, player);
}

bool is_equilibrium(const NormalFormGame& g, const MixedProfile& prof) {
  for (size_t p = 0; p < g.players.size(); ++p) {
    Rational v = mixed_value(g, prof, p);
    for (size_t a = 0; a < g.actions[p].size(); ++a) {
      if (deviation_value(g, prof, p, a) > v) return false;
    }
  }
  return true;
}

std::vector<size_t> mask_indices(unsigned mask, size_t n) {
  std::vector<size_t> out;
  for (size_t i = 0; i < n; ++i) {
    if (mask & (1u << i)) out.push_back(i);
  }
  return out;
}

// Distribution over `support` (indices into an action list of size n) that
// makes the opponent indifferent across their own support.
std::optional<std::vector<Rational>> support_solution(
    const std::vector<size_t>& own_support, const std::vector<size_t>& opp_support, size_t n,
    const std::function<Rational(size_t opp_action, size_t own_action)>& opp_payoff) {
  std::vector<std::vector<Rational>> a;
  std::vector<Rational> b;
  for (size_t k = 0; k + 1 < opp_support.size(); ++k) {
    std::vector<Rational> row;
    for (size_t j : own_support) {
      row.push_back(opp_payoff(opp_support[k], j) - opp_payoff(opp_support[k + 1], j));
    }
    a.push_back(std::move(row));
    b.push_back(Rational(0));
  }
  a.emplace_back(own_support.size(), Rational(1));
  b.push_back(Rational(1));

  auto q = solve_unique(std::move(a), std::move(b));
  if (!q) return std::nullopt;
  for (const auto& val : *q) {
    if (val <= 0) return std::nullopt;
  }
  std::vector<Rational> full(n, Rational(0));
  for (size_t k = 0; k < own_support.size(); ++k) full[own_support[k]] = (*q)[k];
  return full;
}

std::vector<MixedProfile> two_player_equilibria(const NormalFormGame& g) {
  size_t n0 = g.actions[0].size();
  size_t n1 = g.actions[1].size();
  if (n0 + n1 > 24) {
    throw UnsupportedShapeError("action sets too large for exact support enumeration");
  }
  std::vector<MixedProfile> found;
  for (unsigned m0 = 1; m0 < (1u << n0); ++m0) {
    auto s0 = mask_indices(m0, n0);
    for (unsigned m1 = 1; m1 < (1u << n1); ++m1) {
      auto s1 = mask_indices(m1, n1);
      auto sigma1 = support_solution(s1, s0, n1, [&](size_t a0, size_t a1) {
        return g.payoffs[g.flat({a0, a1})][0];
      });
      if (!sigma1) continue;
      auto sigma0 = support_solution(s0, s1, n0, [&](size_t a1, size_t a0) {
        return g.payoffs[g.flat({a0, a1})][1];
      });
      if (!sigma0) continue;
      MixedProfile prof{std::move(*sigma0), std::move(*sigma1)};
      if (is_equilibrium(g, prof)) found.push_back(std::move(prof));
    }
  }
  return found;
}

std::vector<std::vector<size_t>> profile_supports(const NormalFormGame& g,
                                                  const MixedProfile& prof) {
  std::vector<std::vector<size_t>> supports;
  for (size_t p = 0; p < prof.size(); ++p) {
    std::vector<size_t> s;
    for (size_t a = 0; a < prof[p].size(); ++a) {
      if (prof[p][a] > 0) s.push_back(a);
    }
    supports.push_back(std::move(s));
  }
  return supports;
}

}  // namespace

std::vector<MixedProfile> nash_equilibria(const NormalFormGame& g) {
  if (g.players.empty()) {
    throw UnsupportedShapeError("normal-form game without strategic players");
  }
  std::vector<MixedProfile> found;
  if (g.players.size() == 1) {
    Rational best = g.payoffs[0][0];
    for (const auto& cell : g.payoffs) best = std::max(best, cell[0]);
    for (size_t a = 0; a < g.actions[0].size(); ++a) {
      if (g.payoffs[a][0] == best) {
        MixedProfile prof{std::vector<Rational>(g.actions[0].size(), Rational(0))};
        prof[0][a] = Rational(1);
        found.push_back(std::move(prof));
      }
    }
  } else if (g.players.size() == 2) {
    found = two_player_equilibria(g);
  } else {
    for (const auto& actions : g.actions) {
      if (actions.size() > 2) {
        throw UnsupportedShapeError(
            "rounds with more than two movers support only two actions per mover");
      }
    }
    for (size_t flat = 0; flat < g.profile_count(); ++flat) {
      auto profile = g.unflat(flat);
      MixedProfile prof;
      for (size_t p = 0; p < g.players.size(); ++p) {
        std::vector<Rational> d(g.actions[p].size(), Rational(0));
        d[profile[p]] = Rational(1);
        prof.push_back(std::move(d));
      }
      if (is_equilibrium(g, prof)) found.push_back(std::move(prof));
    }
    if (found.empty()) {
      throw UnsupportedShapeError(
          "no pure equilibrium; mixed equilibria beyond two movers are unsupported");
    }
  }

  std::sort(found.begin(), found.end(), [&](const MixedProfile& x, const MixedProfile& y) {
    auto sx = profile_supports(g, x);
    auto sy = profile_supports(g, y);
    if (sx != sy) return sx < sy;
    for (size_t p = 0; p < x.size(); ++p) {
      for (size_t a = 0; a < x[p].size(); ++a) {
        if (x[p][a] != y[p][a]) return x[p][a] < y[p][a];
      }
    }
    return false;
  });
  found.erase(std::unique(found.begin(), found.end()), found.end());
  if (found.empty()) {
    throw UnsupportedShapeError("support enumeration found no equilibrium");
  }
  return found;
}

std::optional<SelectionPolicy> selection_from_name(const std::string& name) {
  if (name == "first") return SelectionPolicy::First;
  if (name == "max-welfare") return SelectionPolicy::MaxWelfare;
  if (name == "all") return SelectionPolicy::All;
  return std::nullopt;
}

namespace {

std::vector<Rational> profile_round_value(const RoundTable& table, const MixedProfile& prof,
                                          size_t player_count) {
  std::vector<Rational> value(player_count, Rational(0));
  for (size_t flat = 0; flat < table.nf.profile_count(); ++flat) {
    auto profile = table.nf.unflat(flat);
    Rational w(1);
    for (size_t i = 0; i < profile.size(); ++i) w *= prof[i][profile[i]];
    if (w == 0) continue;
    for (size_t i = 0; i < player_count; ++i) value[i] += w * table.full[flat][i];
  }
  return value;
}

struct BacktrackState {
  const BuiltGame* built;
  SelectionPolicy policy;
  size_t cap;
  std::vector<const RoundRecord*> order;  // deepest first
  SolveReport* report;
  std::vector<RoundEquilibria> path;
};

void assemble_variant(BacktrackState& bt, const std::map<int, std::vector<Rational>>& values) {
  const ExtensiveGame& g = bt.built->game;
  SolveVariant variant;
  variant.rounds = bt.path;
  variant.node_values = values;

  for (size_t k = 0; k < bt.order.size(); ++k) {
    const RoundRecord& round = *bt.order[k];
    const MixedProfile& eq = bt.path[k].equilibria[bt.path[k].chosen];
    for (size_t m = 0; m < round.info_sets.size(); ++m) {
      variant.profile[round.info_sets[m]] = eq[m];
    }
  }

  for (int z : g.terminals()) variant.outcome_dist[z] = Rational(0);
  std::function<void(int, Rational)> walk = [&](int id, Rational mass) {
    const Node& n = g.node(id);
    if (n.children.empty()) {
      variant.outcome_dist[id] += mass;
      return;
    }
    if (n.kind == NodeKind::Chance) {
      for (int c : n.children) walk(c, mass * g.node(c).chance_prob);
      return;
    }
    const auto& dist = variant.profile.at(n.info_set);
    for (size_t k = 0; k < n.children.size(); ++k) {
      walk(n.children[k], mass * dist[k]);
    }
  };
  walk(ExtensiveGame::kRoot, Rational(1));

  bt.report->variants.push_back(std::move(variant));
}

void solve_rounds(BacktrackState& bt, size_t k, std::map<int, std::vector<Rational>> values) {
  if (bt.report->variants.size() >= bt.cap) {
    bt.report->truncated = true;
    return;
  }
  if (k == bt.order.size()) {
    assemble_variant(bt, values);
    return;
  }
  const RoundRecord& round = *bt.order[k];
  RoundTable table = round_to_normal_form(bt.built->game, round, values);
  auto equilibria = nash_equilibria(table.nf);

  std::vector<size_t> picks;
  if (bt.policy == SelectionPolicy::All) {
    picks.resize(equilibria.size());
    for (size_t i = 0; i < picks.size(); ++i) picks[i] = i;
  } else if (bt.policy == SelectionPolicy::MaxWelfare) {
    size_t best = 0;
    Rational best_sum;
    for (size_t i = 0; i < equilibria.size(); ++i) {
      auto value = profile_round_value(table, equilibria[i], bt.built->game.players.size());
      Rational sum(0);
      for (const auto& v : value) sum += v;
      if (i == 0 || sum > best_sum) {
        best = i;
        best_sum = sum;
      }
    }
    picks.push_back(best);
  } else {
    picks.push_back(0);
  }

  for (size_t pick : picks) {
    auto value = profile_round_value(table, equilibria[pick], bt.built->game.players.size());
    auto next = values;
    next[round.root] = std::move(value);
    bt.path.push_back(RoundEquilibria{round.root, equilibria, pick});
    solve_rounds(bt, k + 1, std::move(next));
    bt.path.pop_back();
    if (bt.report->truncated) return;
  }
}

}  // namespace

SolveReport backtrack_solve(const BuiltGame& built, SelectionPolicy policy, size_t variant_cap) {
  SolveReport report;
  report.players = built.game.players;

  std::map<int, std::vector<Rational>> base;
  for (int z : built.game.terminals()) {
    auto it = built.game.utilities.find(z);
    if (it == built.game.utilities.end()) {
      throw MissingPayoffError("terminal " + std::to_string(z) + " has no utilities assigned");
    }
    base[z] = it->second;
  }

  BacktrackState bt;
  bt.built = &built;
  bt.policy = policy;
  bt.cap = variant_cap;
  bt.report = &report;
  for (auto it = built.rounds.rbegin(); it != built.rounds.rend(); ++it) {
    bt.order.push_back(&*it);
  }
  solve_rounds(bt, 0, std::move(base));

  if (policy == SelectionPolicy::MaxWelfare && !report.variants.empty()) {
    report.selected = 0;
  }
  return report;
}

std::map<std::string, Rational> evaluate_criteria(const BuiltGame& built,
                                                  const std::map<int, Rational>& outcome_dist,
                                                  const std::vector<CriterionSpec>& criteria) {
  std::map<std::string, Rational> out;
  for (const auto& c : criteria) {
    Rational total(0);
    for (const auto& [z, p] : outcome_dist) {
      if (p == 0 && c.kind != "constant") continue;
      Rational f(0);
      if (c.kind == "event") {
        const auto& fluents = built.annotation.fluents.at(z);
        bool hit = std::any_of(fluents.begin(), fluents.end(),
                               [&](const Term& fl) { return unify(c.pattern, fl).has_value(); });
        f = hit ? Rational(1) : Rational(0);
      } else if (c.kind == "expected_payoff") {
        int idx = built.game.player_index(c.agent);
        if (idx < 0) throw UnsupportedFormatError("criterion agent " + c.agent + " unknown");
        f = built.game.utilities.at(z)[static_cast<size_t>(idx)];
      } else if (c.kind == "utilitarian") {
        for (const auto& v : built.game.utilities.at(z)) f += v;
      } else if (c.kind == "egalitarian") {
        const auto& u = built.game.utilities.at(z);
        f = u.empty() ? Rational(0) : *std::min_element(u.begin(), u.end());
      } else if (c.kind == "constant") {
        f = c.constant;
      }
      total += p * f;
    }
    out[c.name] = total;
  }
  return out;
}

void attach_criteria(const BuiltGame& built, const UtilitySpec& spec, SolveReport& report) {
  for (auto& variant : report.variants) {
    variant.criterion_expectations = evaluate_criteria(built, variant.outcome_dist, spec.criteria);
  }
}

namespace {

ordered_json profile_json(const BuiltGame& built, const SolveVariant& variant) {
  ordered_json arr = ordered_json::array();
  for (const auto& [info_set, dist] : variant.profile) {
    const InfoSet& w = built.game.info_sets[static_cast<size_t>(info_set)];
    ordered_json entry;
    entry["info_set"] = info_set;
    entry["player"] = built.game.players[static_cast<size_t>(w.player)];
    ordered_json actions = ordered_json::array();
    ordered_json probs = ordered_json::array();
    for (size_t a = 0; a < w.actions.size(); ++a) {
      actions.push_back(w.actions[a].to_string());
      probs.push_back(rational_json(dist[a]));
    }
    entry["actions"] = actions;
    entry["probs"] = probs;
    arr.push_back(std::move(entry));
  }
  return arr;
}

}  // namespace

std::string report_to_json(const BuiltGame& built, const SolveReport& report) {
  ordered_json doc;
  doc["format"] = "asl-solve";
  doc["version"] = 1;
  ordered_json players = ordered_json::array();
  for (const auto& p : report.players) players.push_back(p);
  doc["players"] = players;
  doc["selected"] = report.selected;
  doc["truncated"] = report.truncated;

  ordered_json variants = ordered_json::array();
  for (const auto& variant : report.variants) {
    ordered_json v;
    v["profile"] = profile_json(built, variant);

    ordered_json rounds = ordered_json::array();
    for (const auto& r : variant.rounds) {
      ordered_json entry;
      entry["root"] = r.root;
      entry["chosen"] = r.chosen;
      entry["equilibria"] = r.equilibria.size();
      rounds.push_back(std::move(entry));
    }
    v["rounds"] = rounds;

    ordered_json values = ordered_json::array();
    for (const auto& [id, vec] : variant.node_values) {
      ordered_json entry;
      entry["node"] = id;
      ordered_json vals = ordered_json::array();
      for (const auto& x : vec) vals.push_back(rational_json(x));
      entry["values"] = vals;
      values.push_back(std::move(entry));
    }
    v["node_values"] = values;

    ordered_json dist = ordered_json::array();
    for (const auto& [z, p] : variant.outcome_dist) {
      ordered_json entry;
      entry["node"] = z;
      entry["prob"] = rational_json(p);
      entry["prob_text"] = render_decimal(p, 2);
      dist.push_back(std::move(entry));
    }
    v["outcome_dist"] = dist;

    ordered_json crits = ordered_json::array();
    for (const auto& [name, value] : variant.criterion_expectations) {
      ordered_json entry;
      entry["name"] = name;
      entry["value"] = rational_json(value);
      entry["text"] = render_decimal(value, 2);
      crits.push_back(std::move(entry));
    }
    v["criteria"] = crits;
    variants.push_back(std::move(v));
  }
  doc["variants"] = variants;
  return doc.dump(2) + "\n";
}

std::string report_to_table(const BuiltGame& built, const SolveReport& report) {
  std::ostringstream out;
  out << "players:";
  for (const auto& p : report.players) out << " " << p;
  out << "\n";
  for (size_t vi = 0; vi < report.variants.size(); ++vi) {
    const SolveVariant& variant = report.variants[vi];
    if (report.variants.size() > 1) {
      out << "\nvariant " << (vi + 1) << " of " << report.variants.size()
          << (vi == report.selected ? " (selected)" : "") << "\n";
    }
    out << "node | state fluents | p\n";
    for (const auto& [id, fluents] : built.annotation.fluents) {
      out << id << " | ";
      auto ordered = canonical_fluent_order(fluents);
      for (size_t i = 0; i < ordered.size(); ++i) {
        out << (i ? ", " : "") << ordered[i].to_string();
      }
      out << " | ";
      auto it = variant.outcome_dist.find(id);
      if (it == variant.outcome_dist.end()) {
        out << "-";
      } else {
        out << render_decimal(it->second, 2);
      }
      out << "\n";
    }
    if (!variant.criterion_expectations.empty()) {
      out << "criteria:\n";
      for (const auto& [name, value] : variant.criterion_expectations) {
        out << "  " << name << " = " << render_decimal(value, 2) << " ("
            << rational_to_string(value) << ")\n";
      }
    }
  }
  return out.str();
}

}  // namespace asl
