#pragma once

#include <string>
#include <vector>

#include "asl/description.hpp"
#include "asl/kb.hpp"

namespace asl {

struct SourceFile {
  std::string name;
  std::string text;
  // When set, clause heads are checked against this section; when unset
  // (single-file input) reserved heads pick their canonical section and
  // everything else lands in the state base.
  std::optional<Section> section;
};

struct ParseResult {
  AslDescription description;
  std::vector<Diagnostic> diagnostics;
  bool ok = false;
};

// Parses one or more description files; syntax errors are collected with
// per-clause recovery (skip to the next terminating period).
ParseResult parse_description(const std::vector<SourceFile>& sources);
ParseResult parse_description(const std::string& text, const std::string& name = "<input>");

// Parses a single term (no trailing period), for tests and config files.
Term parse_term(const std::string& text);
// Parses a goal conjunction "g1, g2, ..." into a goal list.
std::vector<Term> parse_goals(const std::string& text);

// Head-placement, rule-shape, probability, scope and conflict checks per the
// validity definition; returns diagnostics sorted by source location.
std::vector<Diagnostic> validate(const AslDescription& d);

// Compiles a validated description into a knowledge base: clauses in
// declaration order, rule statements stored as rule/4 facts, reserved and
// consequence fluent predicates registered as dynamic.
KnowledgeBase lower(const AslDescription& d);

// Canonical single-file rendering; parse_description(pretty_print(d)) yields
// a structurally identical description.
std::string pretty_print(const AslDescription& d);

}  // namespace asl
