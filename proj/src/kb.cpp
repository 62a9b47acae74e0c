#include "asl/kb.hpp"

#include <algorithm>

#include "asl/errors.hpp"

namespace asl {

namespace {

std::string fact_key(const Term& t) {
  if (t.is_symbol()) return t.name() + "/0";
  return t.name() + "/" + std::to_string(t.args().size());
}

}  // namespace

void KnowledgeBase::add_clause(Clause c) {
  clauses_[fact_key(c.head)].push_back(std::move(c));
}

void KnowledgeBase::register_dynamic(const std::string& functor, size_t arity) {
  dynamic_.insert(key(functor, arity));
}

void KnowledgeBase::assert_fact(const Term& fact) {
  overlay_[fact_key(fact)].push_back(fact);
}

void KnowledgeBase::retract_fact(const Term& fact) {
  auto it = overlay_.find(fact_key(fact));
  if (it != overlay_.end()) {
    auto& facts = it->second;
    for (auto rit = facts.rbegin(); rit != facts.rend(); ++rit) {
      if (*rit == fact) {
        facts.erase(std::next(rit).base());
        return;
      }
    }
  }
  throw RetractMissingError(fact.to_string());
}

bool KnowledgeBase::known(const std::string& functor, size_t arity) const {
  std::string k = key(functor, arity);
  return clauses_.count(k) || overlay_.count(k) || dynamic_.count(k);
}

const std::vector<Clause>* KnowledgeBase::static_clauses(const std::string& functor,
                                                         size_t arity) const {
  auto it = clauses_.find(key(functor, arity));
  return it == clauses_.end() ? nullptr : &it->second;
}

const std::vector<Term>* KnowledgeBase::overlay_facts(const std::string& functor,
                                                      size_t arity) const {
  auto it = overlay_.find(key(functor, arity));
  return it == overlay_.end() ? nullptr : &it->second;
}

std::vector<Term> KnowledgeBase::all_overlay_facts() const {
  std::vector<Term> out;
  for (const auto& [k, facts] : overlay_) {
    out.insert(out.end(), facts.begin(), facts.end());
  }
  return out;
}

}  // namespace asl
