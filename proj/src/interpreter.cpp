#include "asl/interpreter.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "asl/errors.hpp"

namespace asl {

const Term& fluent_core(const Term& f) {
  if (f.is_compound() && f.name() == "~" && f.arity() == 1) return f.args()[0];
  return f;
}

bool fluent_negated(const Term& f) {
  return f.is_compound() && f.name() == "~" && f.arity() == 1;
}

namespace {

std::string branches_key(const std::vector<ControlBranch>& branches) {
  std::ostringstream out;
  for (const auto& b : branches) {
    out << rational_to_string(b.prob) << ":";
    for (const auto& f : b.fluents) out << f.to_string() << ",";
    out << ";";
  }
  return out.str();
}

std::string activation_key(const Activation& a) {
  if (a.type == RuleType::Control) {
    return std::to_string(a.priority) + "|" + branches_key(a.branches);
  }
  return std::to_string(a.priority) + "|" + a.consequence.to_string();
}

std::string subst_summary(const Subst& s) {
  std::ostringstream out;
  bool first = true;
  for (const auto& [name, _] : s.bindings()) {
    if (name.find('#') != std::string::npos) continue;
    Term t = s.resolve(Term::var(name));
    if (t.is_var()) continue;
    out << (first ? "" : ",") << name << "=" << s.apply(t).to_string();
    first = false;
  }
  return out.str();
}

void sort_activations(std::vector<Activation>& acts) {
  std::stable_sort(acts.begin(), acts.end(), [](const Activation& a, const Activation& b) {
    if (a.priority != b.priority) return a.priority > b.priority;
    return a.order < b.order;
  });
}

Rational branch_probability(Engine& engine, const Term& prob, const Subst& s) {
  Term p = s.apply(prob);
  Rational value = p.is_number() ? p.value() : engine.eval_arith(p, Subst{});
  if (value < 0 || value > 1) {
    throw DegenerateDistributionError("branch probability " + rational_to_string(value) +
                                      " outside [0,1]");
  }
  return value;
}

}  // namespace

std::vector<Activation> query_rule(Engine& engine, const Term& id, RuleType type,
                                   const Threshold& thres, TraceLog* trace) {
  std::vector<Activation> out;
  const auto* facts = engine.kb().static_clauses("rule", 4);
  if (!facts) return out;

  std::set<std::string> seen;
  size_t order = 0;
  for (const auto& clause : *facts) {
    if (!clause.body.empty()) continue;
    std::string error;
    auto rule = rule_from_term(clause.head, &error);
    if (!rule) continue;
    if (rule->type != type || !thres.admits(rule->priority)) continue;
    if (!unify(rule->id, id)) continue;

    std::vector<Term> goals{rule->condition};
    goals.insert(goals.end(), rule->constraints.begin(), rule->constraints.end());

    engine.query(goals, [&](const Subst& s) {
      Activation act;
      act.rule_id = s.apply(rule->id);
      act.type = type;
      act.priority = rule->priority;
      act.order = order++;
      if (type == RuleType::Control) {
        Rational total(0);
        for (const auto& branch : rule->distribution) {
          ControlBranch cb;
          for (const auto& f : branch.fluents) {
            Term g = s.apply(f);
            if (!g.ground()) {
              throw AslError("NonGroundConsequence",
                             g.to_string() + " in rule " + act.rule_id.to_string());
            }
            cb.fluents.push_back(std::move(g));
          }
          cb.prob = branch_probability(engine, branch.prob, s);
          total += cb.prob;
          act.branches.push_back(std::move(cb));
        }
        if (total != Rational(1)) {
          throw DegenerateDistributionError("rule " + act.rule_id.to_string() +
                                            " branch probabilities sum to " +
                                            rational_to_string(total));
        }
      } else {
        act.consequence = s.apply(rule->simple_consequence);
        if (!act.consequence.ground()) {
          throw AslError("NonGroundConsequence",
                         act.consequence.to_string() + " in rule " + act.rule_id.to_string());
        }
      }
      if (seen.insert(activation_key(act)).second) {
        if (trace && *trace) {
          trace->line("activate " + act.rule_id.to_string() + "/" +
                      std::string(rule_type_name(type)) + "/" + std::to_string(act.priority) +
                      " {" + subst_summary(s) + "}");
        }
        out.push_back(std::move(act));
      }
      return true;
    });
  }
  return out;
}

std::vector<Term> get_simple_conseqs(Engine& engine, const Term& id, RuleType type,
                                     const Threshold& thres, TraceLog* trace) {
  auto acts = query_rule(engine, id, type, thres, trace);
  sort_activations(acts);

  std::vector<Term> written;
  std::set<Term, TermLess> exact;
  std::map<Term, long, TermLess> core_level;
  for (const auto& act : acts) {
    if (!exact.insert(act.consequence).second) continue;
    const Term& core = fluent_core(act.consequence);
    auto [it, fresh] = core_level.emplace(core, act.priority);
    if (!fresh && it->second > act.priority) continue;
    written.push_back(act.consequence);
  }

  std::set<Term, TermLess> cancelled;
  for (const auto& f : written) {
    if (fluent_negated(f)) cancelled.insert(fluent_core(f));
  }
  std::vector<Term> out;
  for (auto& f : written) {
    if (fluent_negated(f) || cancelled.count(f)) continue;
    out.push_back(std::move(f));
  }
  return out;
}

bool check_incompatible(Engine& engine, const Term& fluent, const std::vector<Term>& state) {
  Term goal = Term::compound("incompatible", {fluent, Term::list(state)});
  return engine.provable(goal);
}

NextStateDistribution get_control_conseqs(Engine& engine, const Term& id,
                                          const Threshold& thres,
                                          const std::vector<Term>& state, TraceLog* trace) {
  const auto* does = engine.kb().overlay_facts("does", 2);
  if (does) {
    std::set<Term, TermLess> actors;
    for (const auto& fact : *does) {
      if (!actors.insert(fact.args()[0]).second) {
        throw JointActionViolationError(fact.args()[0].to_string() +
                                        " performs more than one action");
      }
    }
  }

  auto acts = query_rule(engine, id, RuleType::Control, thres, trace);
  if (acts.empty()) {
    return {WeightedState{state, Rational(1)}};
  }
  sort_activations(acts);

  NextStateDistribution states{WeightedState{{}, Rational(1)}};
  for (const auto& act : acts) {
    bool skip = false;
    for (const auto& branch : act.branches) {
      for (const auto& f : branch.fluents) {
        for (const auto& ws : states) {
          if (check_incompatible(engine, f, ws.fluents)) {
            skip = true;
            if (trace && *trace) {
              trace->line("skip " + act.rule_id.to_string() + ": " + f.to_string() +
                          " incompatible with provisional state");
            }
            break;
          }
        }
        if (skip) break;
      }
      if (skip) break;
    }
    if (skip) continue;

    NextStateDistribution expanded;
    for (const auto& ws : states) {
      for (auto it = act.branches.rbegin(); it != act.branches.rend(); ++it) {
        WeightedState next;
        next.fluents = ws.fluents;
        for (const auto& f : it->fluents) {
          if (std::find(next.fluents.begin(), next.fluents.end(), f) == next.fluents.end()) {
            next.fluents.push_back(f);
          }
        }
        next.prob = ws.prob * it->prob;
        expanded.push_back(std::move(next));
      }
    }
    states = std::move(expanded);
  }

  for (auto& ws : states) {
    for (const auto& f : state) {
      if (std::find(ws.fluents.begin(), ws.fluents.end(), f) != ws.fluents.end()) continue;
      if (!check_incompatible(engine, f, ws.fluents)) {
        ws.fluents.push_back(f);
        if (trace && *trace) trace->line("drag " + f.to_string());
      }
    }
  }

  NextStateDistribution merged;
  for (auto& ws : states) {
    std::vector<Term> sorted = ws.fluents;
    std::sort(sorted.begin(), sorted.end(), TermLess{});
    auto same = std::find_if(merged.begin(), merged.end(), [&](const WeightedState& m) {
      std::vector<Term> ms = m.fluents;
      std::sort(ms.begin(), ms.end(), TermLess{});
      return ms == sorted;
    });
    if (same != merged.end()) {
      same->prob += ws.prob;
    } else {
      merged.push_back(std::move(ws));
    }
  }

  Rational total(0);
  for (const auto& ws : merged) total += ws.prob;
  if (total != Rational(1)) {
    throw DegenerateDistributionError("next-state probabilities sum to " +
                                      rational_to_string(total));
  }
  return merged;
}

}  // namespace asl
