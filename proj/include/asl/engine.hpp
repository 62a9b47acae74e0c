#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "asl/kb.hpp"
#include "asl/term.hpp"

namespace asl {

// Seeded randomness shared across one full-game build. random_member/2 draws
// once per distinct ground list and caches the result, so repeated calls
// within a build agree on the drawn element.
struct RandomContext {
  explicit RandomContext(std::uint64_t seed) : rng(seed) {}
  std::mt19937_64 rng;
  std::map<std::string, Term> draw_cache;

  const Term& draw(const std::vector<Term>& items, const std::string& key);
};

// Depth-first SLD resolution over a knowledge base: clauses tried in
// declaration order (overlay facts after static clauses), leftmost goal
// first, negation as failure, occurs check on.
//
// Builtins: ,/2 and and/2 conjunction, true/0, \+/1, =/2, \=/2, @</2,
// </2 >/2 >=/2 =</2 arithmetic comparison, member/2, findall/3, {}/1
// constraint evaluation, random_member/2.
class Engine {
 public:
  explicit Engine(const KnowledgeBase& kb, RandomContext* random = nullptr)
      : kb_(&kb), random_(random) {}

  // Enumerates solutions; sink returns false to stop the search.
  void query(const Term& goal, const std::function<bool(const Subst&)>& sink);
  void query(const std::vector<Term>& goals, const std::function<bool(const Subst&)>& sink);

  std::vector<Subst> solve(const Term& goal);
  std::vector<Subst> solve(const std::vector<Term>& goals);
  std::optional<Subst> solve_first(const Term& goal);
  bool provable(const Term& goal);

  // Exact arithmetic over +, -, *, / with numeric leaves; unbound or
  // non-numeric leaves raise UnboundArithmeticError.
  Rational eval_arith(const Term& t, const Subst& s);

  const KnowledgeBase& kb() const { return *kb_; }

 private:
  bool step(std::vector<Term> goals, Subst s, const std::function<bool(const Subst&)>& sink);
  bool solve_user(const Term& goal, const std::vector<Term>& rest, Subst s,
                  const std::function<bool(const Subst&)>& sink);
  Term rename_apart(const Term& t, std::map<std::string, std::string>& names);

  const KnowledgeBase* kb_;
  RandomContext* random_;
  std::uint64_t fresh_ = 0;
  std::uint64_t steps_ = 0;
};

}  // namespace asl
