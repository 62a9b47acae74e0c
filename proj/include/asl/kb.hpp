#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "asl/term.hpp"

namespace asl {

struct Clause {
  Term head;
  std::vector<Term> body;  // empty for facts
};

// Clause store plus a dynamic fact overlay. Resolution sees, per predicate,
// static clauses in declaration order followed by overlay facts in assertion
// order. Predicates registered as dynamic may be queried while empty; any
// other unknown predicate raises UnknownPredicateError at query time.
class KnowledgeBase {
 public:
  void add_clause(Clause c);
  void register_dynamic(const std::string& functor, size_t arity);

  void assert_fact(const Term& fact);
  // Removes one overlay fact equal to `fact` (the most recently asserted
  // occurrence); throws RetractMissingError when absent.
  void retract_fact(const Term& fact);

  bool known(const std::string& functor, size_t arity) const;
  const std::vector<Clause>* static_clauses(const std::string& functor, size_t arity) const;
  const std::vector<Term>* overlay_facts(const std::string& functor, size_t arity) const;

  std::vector<Term> all_overlay_facts() const;

 private:
  static std::string key(const std::string& functor, size_t arity) {
    return functor + "/" + std::to_string(arity);
  }
  std::map<std::string, std::vector<Clause>> clauses_;
  std::map<std::string, std::vector<Term>> overlay_;
  std::set<std::string> dynamic_;
};

}  // namespace asl
