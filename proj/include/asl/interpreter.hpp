#pragma once

#include <functional>
#include <string>
#include <vector>

#include "asl/description.hpp"
#include "asl/engine.hpp"
#include "asl/kb.hpp"
#include "asl/term.hpp"

namespace asl {

// Priority filter for rule selection: a rule participates when its priority
// is <= value, or unconditionally when infinite.
struct Threshold {
  bool infinite = false;
  long value = 0;

  static Threshold at(long v) { return Threshold{false, v}; }
  static Threshold inf() { return Threshold{true, 0}; }
  bool admits(long priority) const { return infinite || priority <= value; }
  std::string to_string() const { return infinite ? "inf" : std::to_string(value); }
};

// Line-oriented trace of rule activations, skips and fact drags.
struct TraceLog {
  std::function<void(const std::string&)> sink;
  void line(const std::string& s) const {
    if (sink) sink(s);
  }
  explicit operator bool() const { return static_cast<bool>(sink); }
};

struct ControlBranch {
  std::vector<Term> fluents;  // ground, may carry a ~ prefix
  Rational prob;
};

// One grounded instantiation of a rule statement whose condition and
// constraints succeeded against the current knowledge base.
struct Activation {
  Term rule_id;
  RuleType type = RuleType::Boundary;
  long priority = 0;
  size_t order = 0;  // enumeration index: rule declaration order, then solution order
  Term consequence;  // boundary / position / choice
  std::vector<ControlBranch> branches;  // control
};

struct WeightedState {
  std::vector<Term> fluents;  // insertion order
  Rational prob;
};
using NextStateDistribution = std::vector<WeightedState>;

// Enumerates grounded activations of the rule/4 facts with the given id and
// type whose priority passes the threshold, deduplicated on (priority,
// grounded consequence) keeping the earliest occurrence.
std::vector<Activation> query_rule(Engine& engine, const Term& id, RuleType type,
                                   const Threshold& thres, TraceLog* trace = nullptr);

// Boundary, position and choice consequences: activations processed in
// descending priority (ties by declaration order). A fluent core settled at a
// higher priority blocks lower-priority writers; within one priority a
// negated fluent cancels its positive counterpart regardless of declaration
// order. Negated fluents are stripped from the result, which preserves write
// order.
std::vector<Term> get_simple_conseqs(Engine& engine, const Term& id, RuleType type,
                                     const Threshold& thres, TraceLog* trace = nullptr);

// True iff incompatible(fluent, S) succeeds with S the state's fluents as a
// list in insertion order.
bool check_incompatible(Engine& engine, const Term& fluent, const std::vector<Term>& state);

// Control consequences for the joint action currently asserted as does/2
// facts: activations in descending priority; a rule with any branch fluent
// incompatible with any provisional next state is skipped whole; the rest
// expand S by cross product (branches of one rule in reverse declaration
// order); finally each fluent of `state` compatible with a provisional state
// is dragged into it. No activations yield {state} with probability 1.
NextStateDistribution get_control_conseqs(Engine& engine, const Term& id,
                                          const Threshold& thres,
                                          const std::vector<Term>& state,
                                          TraceLog* trace = nullptr);

// Strips one outer ~ if present.
const Term& fluent_core(const Term& f);
bool fluent_negated(const Term& f);

}  // namespace asl
