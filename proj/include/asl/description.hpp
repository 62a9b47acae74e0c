#pragma once

#include <optional>
#include <string>
#include <vector>

#include "asl/kb.hpp"
#include "asl/term.hpp"

namespace asl {

struct SourceLoc {
  std::string file;
  int line = 0;
  int col = 0;

  std::string to_string() const {
    return file + ":" + std::to_string(line) + ":" + std::to_string(col);
  }
};

enum class Section { Agents, States, Rules };

enum class RuleType { Boundary, Position, Choice, Control };

const char* rule_type_name(RuleType t);
std::optional<RuleType> rule_type_from_name(const std::string& name);

// One branch of a control-rule consequence distribution: the conjunction of
// fluents it adds and its probability expression (a number or a term whose
// variables the constraints bind at activation time).
struct ProbBranch {
  std::vector<Term> fluents;
  Term prob;
};

struct RuleStatement {
  Term id;
  RuleType type = RuleType::Boundary;
  long priority = 0;
  Term condition;
  Term simple_consequence;              // boundary / position / choice
  std::vector<ProbBranch> distribution;  // control
  std::vector<Term> constraints;
  SourceLoc loc;
  size_t decl_index = 0;
};

struct LocatedClause {
  Clause clause;
  SourceLoc loc;
  Section section = Section::States;
};

struct AslDescription {
  std::vector<LocatedClause> clauses;  // declaration order across all files
  std::vector<RuleStatement> rules;
};

enum class Severity { Error, Warning };

struct Diagnostic {
  Severity severity = Severity::Error;
  std::string category;  // syntax, placement, arity, operator, probability, scope, conflict
  std::string message;
  SourceLoc loc;

  std::string to_string() const;
};

bool has_errors(const std::vector<Diagnostic>& diags);

// rule(Id, Type, Priority, if Condition then Consequence where Constraints)
// in term form; the content compound uses the functor "if_then_where".
std::optional<RuleStatement> rule_from_term(const Term& t, std::string* error);
Term rule_to_term(const RuleStatement& r);

// Structural equality ignoring source locations and section tags.
bool description_equal(const AslDescription& a, const AslDescription& b);

}  // namespace asl
