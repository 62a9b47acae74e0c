#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "asl/rational.hpp"

namespace asl {

enum class TermKind { Variable, Number, Symbol, Compound };

// Immutable first-order term. Lists use the functor "." with nil symbol "[]".
class Term {
 public:
  Term() : kind_(TermKind::Symbol), name_("[]") {}

  static Term var(std::string name);
  static Term number(Rational value);
  static Term number(std::int64_t value) { return number(make_rational(value)); }
  static Term symbol(std::string name);
  static Term compound(std::string functor, std::vector<Term> args);
  static Term list(const std::vector<Term>& items);
  static Term list(const std::vector<Term>& items, const Term& tail);
  static Term nil() { return symbol("[]"); }

  TermKind kind() const { return kind_; }
  bool is_var() const { return kind_ == TermKind::Variable; }
  bool is_number() const { return kind_ == TermKind::Number; }
  bool is_symbol() const { return kind_ == TermKind::Symbol; }
  bool is_compound() const { return kind_ == TermKind::Compound; }

  // Variable name, symbol name, or compound functor.
  const std::string& name() const { return name_; }
  const Rational& value() const { return value_; }
  const std::vector<Term>& args() const { return args_; }
  size_t arity() const { return kind_ == TermKind::Compound ? args_.size() : 0; }

  bool is_nil() const { return is_symbol() && name_ == "[]"; }
  bool is_cons() const { return is_compound() && name_ == "." && args_.size() == 2; }
  // Extracts a proper list; nullopt for partial or improper lists.
  std::optional<std::vector<Term>> as_list() const;

  bool ground() const;
  void collect_vars(std::vector<std::string>& out) const;

  bool operator==(const Term& other) const;
  bool operator!=(const Term& other) const { return !(*this == other); }

  std::string to_string() const;

 private:
  TermKind kind_;
  std::string name_;
  Rational value_;
  std::vector<Term> args_;
};

// "name/arity" indicator; symbols have arity 0.
std::string indicator(const Term& t);

// Total order usable for containers: Variable < Number < Symbol < Compound,
// variables by name, compounds by functor, then arity, then arguments.
int container_compare(const Term& a, const Term& b);

struct TermLess {
  bool operator()(const Term& a, const Term& b) const { return container_compare(a, b) < 0; }
};

// Standard order of terms over ground terms: Number < Symbol < Compound,
// numbers by value, symbols lexicographically, compounds by arity, then
// functor, then arguments left to right. Throws NonGroundComparisonError
// when either side contains a variable.
int standard_order(const Term& a, const Term& b);

// Binding map from variable names to terms. Bindings may chain (X -> Y -> t);
// resolve() follows chains one level at a time, apply() substitutes deeply.
class Subst {
 public:
  bool contains(const std::string& var) const { return bindings_.count(var) != 0; }
  void bind(const std::string& var, Term t) { bindings_.emplace(std::move(var), std::move(t)); }
  const Term* lookup(const std::string& var) const;

  // Follows variable bindings until an unbound variable or non-variable term.
  Term resolve(Term t) const;
  // Deep substitution of all bound variables.
  Term apply(const Term& t) const;

  size_t size() const { return bindings_.size(); }
  const std::map<std::string, Term>& bindings() const { return bindings_; }

 private:
  std::map<std::string, Term> bindings_;
};

// Unification with occurs check; extends `s` on success.
bool unify(const Term& a, const Term& b, Subst& s);

inline std::optional<Subst> unify(const Term& a, const Term& b) {
  Subst s;
  if (unify(a, b, s)) return s;
  return std::nullopt;
}

}  // namespace asl
