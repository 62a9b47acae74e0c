#include "asl/engine.hpp"

#include <algorithm>

#include "asl/errors.hpp"

namespace asl {

namespace {

constexpr std::uint64_t kStepLimit = 5'000'000;

bool is_conjunction(const Term& t) {
  return t.is_compound() && (t.name() == "and" || t.name() == ",") && t.args().size() == 2;
}

void flatten_conjunction(const Term& t, std::vector<Term>& out) {
  if (is_conjunction(t)) {
    flatten_conjunction(t.args()[0], out);
    flatten_conjunction(t.args()[1], out);
  } else {
    out.push_back(t);
  }
}

}  // namespace

const Term& RandomContext::draw(const std::vector<Term>& items, const std::string& key) {
  auto it = draw_cache.find(key);
  if (it == draw_cache.end()) {
    size_t idx = static_cast<size_t>(rng() % items.size());
    it = draw_cache.emplace(key, items[idx]).first;
  }
  return it->second;
}

void Engine::query(const Term& goal, const std::function<bool(const Subst&)>& sink) {
  query(std::vector<Term>{goal}, sink);
}

void Engine::query(const std::vector<Term>& goals, const std::function<bool(const Subst&)>& sink) {
  step(goals, Subst{}, sink);
}

std::vector<Subst> Engine::solve(const Term& goal) { return solve(std::vector<Term>{goal}); }

std::vector<Subst> Engine::solve(const std::vector<Term>& goals) {
  std::vector<Subst> out;
  query(goals, [&](const Subst& s) {
    out.push_back(s);
    return true;
  });
  return out;
}

std::optional<Subst> Engine::solve_first(const Term& goal) {
  std::optional<Subst> out;
  query(goal, [&](const Subst& s) {
    out = s;
    return false;
  });
  return out;
}

bool Engine::provable(const Term& goal) { return solve_first(goal).has_value(); }

Rational Engine::eval_arith(const Term& t, const Subst& s) {
  Term r = s.resolve(t);
  switch (r.kind()) {
    case TermKind::Number:
      return r.value();
    case TermKind::Variable:
      throw UnboundArithmeticError("unbound variable " + r.name() + " in arithmetic expression");
    case TermKind::Symbol:
      throw UnboundArithmeticError("non-numeric term " + r.name() + " in arithmetic expression");
    case TermKind::Compound:
      break;
  }
  const auto& f = r.name();
  const auto& args = r.args();
  if (args.size() == 1 && f == "-") return -eval_arith(args[0], s);
  if (args.size() == 2) {
    Rational a = eval_arith(args[0], s);
    Rational b = eval_arith(args[1], s);
    if (f == "+") return a + b;
    if (f == "-") return a - b;
    if (f == "*") return a * b;
    if (f == "/") {
      if (b == 0) throw AslError("ArithmeticError", "division by zero in " + r.to_string());
      return a / b;
    }
  }
  throw UnboundArithmeticError("unknown arithmetic operator in " + r.to_string());
}

Term Engine::rename_apart(const Term& t, std::map<std::string, std::string>& names) {
  switch (t.kind()) {
    case TermKind::Variable: {
      if (t.name() == "_") return Term::var("_#" + std::to_string(fresh_++));
      auto it = names.find(t.name());
      if (it == names.end()) {
        it = names.emplace(t.name(), t.name() + "#" + std::to_string(fresh_++)).first;
      }
      return Term::var(it->second);
    }
    case TermKind::Compound: {
      std::vector<Term> args;
      args.reserve(t.args().size());
      for (const auto& a : t.args()) args.push_back(rename_apart(a, names));
      return Term::compound(t.name(), std::move(args));
    }
    default:
      return t;
  }
}

bool Engine::solve_user(const Term& goal, const std::vector<Term>& rest, Subst s,
                        const std::function<bool(const Subst&)>& sink) {
  std::string functor = goal.is_symbol() ? goal.name() : goal.name();
  size_t arity = goal.is_compound() ? goal.args().size() : 0;
  if (!kb_->known(functor, arity))
    throw UnknownPredicateError(functor + "/" + std::to_string(arity));

  if (const auto* clauses = kb_->static_clauses(functor, arity)) {
    for (const auto& clause : *clauses) {
      std::map<std::string, std::string> names;
      Term head = rename_apart(clause.head, names);
      Subst attempt = s;
      if (!unify(goal, head, attempt)) continue;
      std::vector<Term> goals;
      goals.reserve(clause.body.size() + rest.size());
      for (const auto& g : clause.body) goals.push_back(rename_apart(g, names));
      goals.insert(goals.end(), rest.begin(), rest.end());
      if (!step(std::move(goals), std::move(attempt), sink)) return false;
    }
  }
  if (const auto* facts = kb_->overlay_facts(functor, arity)) {
    for (const auto& fact : *facts) {
      Subst attempt = s;
      if (!unify(goal, fact, attempt)) continue;
      if (!step(rest, std::move(attempt), sink)) return false;
    }
  }
  return true;
}

bool Engine::step(std::vector<Term> goals, Subst s, const std::function<bool(const Subst&)>& sink) {
  if (++steps_ > kStepLimit)
    throw AslError("ResourceLimit", "resolution step limit exceeded");
  if (goals.empty()) return sink(s);

  Term goal = s.resolve(goals.front());
  std::vector<Term> rest(goals.begin() + 1, goals.end());

  if (goal.is_var())
    throw UnknownPredicateError("unbound variable used as a goal");
  if (goal.is_number())
    throw UnknownPredicateError("number used as a goal: " + goal.to_string());

  const std::string& f = goal.name();
  size_t n = goal.is_compound() ? goal.args().size() : 0;

  if (goal.is_symbol() && f == "true") return step(std::move(rest), std::move(s), sink);

  if (is_conjunction(goal)) {
    std::vector<Term> expanded;
    flatten_conjunction(goal, expanded);
    expanded.insert(expanded.end(), rest.begin(), rest.end());
    return step(std::move(expanded), std::move(s), sink);
  }

  if (f == "\\+" && n == 1) {
    bool found = false;
    step({goal.args()[0]}, s, [&](const Subst&) {
      found = true;
      return false;
    });
    if (found) return true;
    return step(std::move(rest), std::move(s), sink);
  }

  if (f == "=" && n == 2) {
    Subst attempt = s;
    if (!unify(goal.args()[0], goal.args()[1], attempt)) return true;
    return step(std::move(rest), std::move(attempt), sink);
  }

  if (f == "\\=" && n == 2) {
    Subst attempt = s;
    if (unify(goal.args()[0], goal.args()[1], attempt)) return true;
    return step(std::move(rest), std::move(s), sink);
  }

  if (f == "@<" && n == 2) {
    if (standard_order(s.apply(goal.args()[0]), s.apply(goal.args()[1])) < 0)
      return step(std::move(rest), std::move(s), sink);
    return true;
  }

  if (n == 2 && (f == "<" || f == ">" || f == ">=" || f == "=<")) {
    Rational a = eval_arith(goal.args()[0], s);
    Rational b = eval_arith(goal.args()[1], s);
    bool ok = (f == "<" && a < b) || (f == ">" && a > b) || (f == ">=" && a >= b) ||
              (f == "=<" && a <= b);
    if (ok) return step(std::move(rest), std::move(s), sink);
    return true;
  }

  if (f == "member" && n == 2) {
    Term list = s.resolve(goal.args()[1]);
    while (list.is_cons()) {
      Subst attempt = s;
      if (unify(goal.args()[0], list.args()[0], attempt)) {
        if (!step(rest, std::move(attempt), sink)) return false;
      }
      list = s.resolve(list.args()[1]);
    }
    return true;
  }

  if (f == "findall" && n == 3) {
    std::vector<Term> items;
    step({goal.args()[1]}, s, [&](const Subst& sol) {
      items.push_back(sol.apply(goal.args()[0]));
      return true;
    });
    Subst attempt = s;
    if (!unify(goal.args()[2], Term::list(items), attempt)) return true;
    return step(std::move(rest), std::move(attempt), sink);
  }

  if (f == "{}" && n == 1) {
    Term inner = s.resolve(goal.args()[0]);
    if (!(inner.is_compound() && inner.name() == "=" && inner.args().size() == 2))
      throw OperatorError("brace constraint must contain an equation: " + goal.to_string());
    Rational value = eval_arith(inner.args()[1], s);
    Term lhs = s.resolve(inner.args()[0]);
    if (lhs.is_var()) {
      Subst attempt = s;
      attempt.bind(lhs.name(), Term::number(value));
      return step(std::move(rest), std::move(attempt), sink);
    }
    if (eval_arith(lhs, s) == value) return step(std::move(rest), std::move(s), sink);
    return true;
  }

  if (f == "random_member" && n == 2) {
    Term list = s.apply(goal.args()[1]);
    auto items = list.as_list();
    if (!items || !list.ground())
      throw AslError("RandomMember", "random_member/2 requires a ground list, got " +
                                         list.to_string());
    if (items->empty()) return true;
    if (!random_)
      throw AslError("RandomMember", "random_member/2 used without a seeded random context");
    const Term& drawn = random_->draw(*items, list.to_string());
    Subst attempt = s;
    if (!unify(goal.args()[0], drawn, attempt)) return true;
    return step(std::move(rest), std::move(attempt), sink);
  }

  return solve_user(goal, rest, std::move(s), sink);
}

}  // namespace asl
