#include "asl/parser.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

#include "asl/errors.hpp"

namespace asl {

const char* rule_type_name(RuleType t) {
  switch (t) {
    case RuleType::Boundary:
      return "boundary";
    case RuleType::Position:
      return "position";
    case RuleType::Choice:
      return "choice";
    case RuleType::Control:
      return "control";
  }
  return "boundary";
}

std::optional<RuleType> rule_type_from_name(const std::string& name) {
  if (name == "boundary") return RuleType::Boundary;
  if (name == "position") return RuleType::Position;
  if (name == "choice") return RuleType::Choice;
  if (name == "control") return RuleType::Control;
  return std::nullopt;
}

std::string Diagnostic::to_string() const {
  std::string sev = severity == Severity::Error ? "error" : "warning";
  return loc.to_string() + ": " + sev + " [" + category + "] " + message;
}

bool has_errors(const std::vector<Diagnostic>& diags) {
  return std::any_of(diags.begin(), diags.end(),
                     [](const Diagnostic& d) { return d.severity == Severity::Error; });
}

namespace {

enum class Tok {
  Atom,
  Var,
  Number,
  Punct,  // ( ) [ ] { } ,
  Op,     // :- \+ \= @< >= =< < > = + - * / ~
  Dot,
  End,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  Rational number;
  int line = 1;
  int col = 1;
};

class Lexer {
 public:
  Lexer(const std::string& text, std::string file) : text_(text), file_(std::move(file)) {}

  const std::string& file() const { return file_; }

  Token next() {
    skip_trivia();
    Token t;
    t.line = line_;
    t.col = col_;
    if (pos_ >= text_.size()) {
      t.kind = Tok::End;
      return t;
    }
    char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c))) return lex_number(t);
    if (std::islower(static_cast<unsigned char>(c))) return lex_ident(t, Tok::Atom);
    if (std::isupper(static_cast<unsigned char>(c)) || c == '_') return lex_ident(t, Tok::Var);
    switch (c) {
      case '(':
      case ')':
      case '[':
      case ']':
      case '{':
      case '}':
      case ',':
      case '|':
        t.kind = Tok::Punct;
        t.text = std::string(1, c);
        advance();
        return t;
      case '.':
        // a period is a clause terminator unless it sits inside a number
        t.kind = Tok::Dot;
        t.text = ".";
        advance();
        return t;
      case ':':
        if (peek(1) == '-') {
          t.kind = Tok::Op;
          t.text = ":-";
          advance();
          advance();
          return t;
        }
        break;
      case '\\':
        if (peek(1) == '+' || peek(1) == '=') {
          t.kind = Tok::Op;
          t.text = std::string("\\") + peek(1);
          advance();
          advance();
          return t;
        }
        break;
      case '@':
        if (peek(1) == '<') {
          t.kind = Tok::Op;
          t.text = "@<";
          advance();
          advance();
          return t;
        }
        break;
      case '>':
        t.kind = Tok::Op;
        if (peek(1) == '=') {
          t.text = ">=";
          advance();
        } else {
          t.text = ">";
        }
        advance();
        return t;
      case '=':
        t.kind = Tok::Op;
        if (peek(1) == '<') {
          t.text = "=<";
          advance();
        } else {
          t.text = "=";
        }
        advance();
        return t;
      case '<':
      case '+':
      case '-':
      case '*':
      case '/':
      case '~':
        t.kind = Tok::Op;
        t.text = std::string(1, c);
        advance();
        return t;
      default:
        break;
    }
    throw SyntaxError(loc_string(t.line, t.col) + ": unexpected character '" +
                      std::string(1, c) + "'");
  }

  std::string loc_string(int line, int col) const {
    return file_ + ":" + std::to_string(line) + ":" + std::to_string(col);
  }

  // Skips ahead to just past the next clause terminator, for error recovery.
  void recover_to_dot() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '%') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
        continue;
      }
      if (c == '/' && peek(1) == '*') {
        advance();
        advance();
        while (pos_ < text_.size() && !(text_[pos_] == '*' && peek(1) == '/')) advance();
        if (pos_ < text_.size()) {
          advance();
          advance();
        }
        continue;
      }
      bool in_number = std::isdigit(static_cast<unsigned char>(c)) != 0;
      advance();
      if (c == '.' && !in_number) return;
    }
  }

 private:
  char peek(size_t ahead) const {
    return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0';
  }

  void advance() {
    if (pos_ < text_.size()) {
      if (text_[pos_] == '\n') {
        ++line_;
        col_ = 1;
      } else {
        ++col_;
      }
      ++pos_;
    }
  }

  void skip_trivia() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else if (c == '%') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (c == '/' && peek(1) == '*') {
        int line = line_, col = col_;
        advance();
        advance();
        while (pos_ < text_.size() && !(text_[pos_] == '*' && peek(1) == '/')) advance();
        if (pos_ >= text_.size())
          throw SyntaxError(loc_string(line, col) + ": unterminated block comment");
        advance();
        advance();
      } else {
        break;
      }
    }
  }

  Token lex_number(Token t) {
    std::string digits;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      digits += text_[pos_];
      advance();
    }
    if (pos_ < text_.size() && text_[pos_] == '.' && pos_ + 1 < text_.size() &&
        std::isdigit(static_cast<unsigned char>(text_[pos_ + 1]))) {
      digits += '.';
      advance();
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        digits += text_[pos_];
        advance();
      }
    }
    t.kind = Tok::Number;
    t.text = digits;
    t.number = rational_from_literal(digits);
    return t;
  }

  Token lex_ident(Token t, Tok kind) {
    std::string name;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      name += text_[pos_];
      advance();
    }
    t.kind = kind;
    t.text = name;
    return t;
  }

  std::string text_;
  std::string file_;
  size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

// Recursive-descent parser over the operator table, loosest to tightest:
//   :-   if..then..where   withProb   and   \+   comparisons   + -   * /   ~
class Parser {
 public:
  Parser(const std::string& text, std::string file) : lexer_(text, std::move(file)) {
    cur_ = lexer_.next();
  }

  bool at_end() const { return cur_.kind == Tok::End; }

  SourceLoc loc() const { return {lexer_.file(), cur_.line, cur_.col}; }

  // head [:- body] .
  std::pair<Term, std::vector<Term>> parse_clause() {
    anon_counter_ = 0;
    Term head = parse_arg();
    std::vector<Term> body;
    if (cur_.kind == Tok::Op && cur_.text == ":-") {
      consume();
      body.push_back(parse_arg());
      while (cur_.kind == Tok::Punct && cur_.text == ",") {
        consume();
        body.push_back(parse_arg());
      }
    }
    expect_dot();
    return {std::move(head), std::move(body)};
  }

  Term parse_arg() {
    if (cur_.kind == Tok::Atom && cur_.text == "if") return parse_if_form();
    return parse_with_prob();
  }

  void recover() { lexer_.recover_to_dot(); cur_ = lexer_.next(); }

 private:
  void consume() { cur_ = lexer_.next(); }

  [[noreturn]] void fail(const std::string& msg) {
    throw SyntaxError(lexer_.loc_string(cur_.line, cur_.col) + ": " + msg +
                      (cur_.kind == Tok::End ? " (at end of input)"
                                             : " (found '" + cur_.text + "')"));
  }

  void expect_punct(const std::string& p) {
    if (cur_.kind != Tok::Punct || cur_.text != p) fail("expected '" + p + "'");
    consume();
  }

  void expect_dot() {
    if (cur_.kind != Tok::Dot) fail("expected '.' at end of clause");
    consume();
  }

  void expect_keyword(const std::string& kw) {
    if (cur_.kind != Tok::Atom || cur_.text != kw) fail("expected '" + kw + "'");
    consume();
  }

  Term parse_if_form() {
    expect_keyword("if");
    Term cond = parse_with_prob();
    expect_keyword("then");
    Term conseq = parse_with_prob();
    expect_keyword("where");
    if (!(cur_.kind == Tok::Punct && cur_.text == "["))
      fail("expected constraint list after 'where'");
    Term constraints = parse_primary();
    return Term::compound("if_then_where", {cond, conseq, constraints});
  }

  Term parse_with_prob() {
    Term lhs = parse_and();
    if (cur_.kind == Tok::Atom && cur_.text == "withProb") {
      consume();
      Term rhs = parse_and();
      return Term::compound("withProb", {lhs, rhs});
    }
    return lhs;
  }

  Term parse_and() {
    Term lhs = parse_naf();
    if (cur_.kind == Tok::Atom && cur_.text == "and") {
      consume();
      Term rhs = parse_and();
      return Term::compound("and", {lhs, rhs});
    }
    return lhs;
  }

  Term parse_naf() {
    if (cur_.kind == Tok::Op && cur_.text == "\\+") {
      consume();
      return Term::compound("\\+", {parse_naf()});
    }
    return parse_compare();
  }

  bool compare_op() const {
    if (cur_.kind != Tok::Op) return false;
    const std::string& t = cur_.text;
    return t == "=" || t == "\\=" || t == "@<" || t == "<" || t == ">" || t == ">=" || t == "=<";
  }

  Term parse_compare() {
    Term lhs = parse_additive();
    if (compare_op()) {
      std::string op = cur_.text;
      consume();
      Term rhs = parse_additive();
      return Term::compound(op, {lhs, rhs});
    }
    return lhs;
  }

  Term parse_additive() {
    Term lhs = parse_multiplicative();
    while (cur_.kind == Tok::Op && (cur_.text == "+" || cur_.text == "-")) {
      std::string op = cur_.text;
      consume();
      Term rhs = parse_multiplicative();
      lhs = Term::compound(op, {lhs, rhs});
    }
    return lhs;
  }

  Term parse_multiplicative() {
    Term lhs = parse_tilde();
    while (cur_.kind == Tok::Op && (cur_.text == "*" || cur_.text == "/")) {
      std::string op = cur_.text;
      consume();
      Term rhs = parse_tilde();
      lhs = Term::compound(op, {lhs, rhs});
    }
    return lhs;
  }

  Term parse_tilde() {
    if (cur_.kind == Tok::Op && cur_.text == "~") {
      consume();
      return Term::compound("~", {parse_tilde()});
    }
    return parse_primary();
  }

  Term parse_primary() {
    switch (cur_.kind) {
      case Tok::Number: {
        Term t = Term::number(cur_.number);
        consume();
        return t;
      }
      case Tok::Var: {
        std::string name = cur_.text;
        consume();
        if (name == "_") name = "_A" + std::to_string(anon_counter_++);
        return Term::var(name);
      }
      case Tok::Atom: {
        std::string name = cur_.text;
        consume();
        if (cur_.kind == Tok::Punct && cur_.text == "(") {
          consume();
          std::vector<Term> args;
          args.push_back(parse_arg());
          while (cur_.kind == Tok::Punct && cur_.text == ",") {
            consume();
            args.push_back(parse_arg());
          }
          expect_punct(")");
          return Term::compound(name, std::move(args));
        }
        return Term::symbol(name);
      }
      case Tok::Punct:
        if (cur_.text == "(") {
          consume();
          Term inner = parse_arg();
          while (cur_.kind == Tok::Punct && cur_.text == ",") {
            consume();
            inner = Term::compound(",", {inner, parse_arg()});
          }
          expect_punct(")");
          return inner;
        }
        if (cur_.text == "[") {
          consume();
          std::vector<Term> items;
          Term tail = Term::nil();
          if (!(cur_.kind == Tok::Punct && cur_.text == "]")) {
            items.push_back(parse_arg());
            while (cur_.kind == Tok::Punct && cur_.text == ",") {
              consume();
              items.push_back(parse_arg());
            }
            if (cur_.kind == Tok::Punct && cur_.text == "|") {
              consume();
              tail = parse_arg();
            }
          }
          expect_punct("]");
          return Term::list(items, tail);
        }
        if (cur_.text == "{") {
          consume();
          Term inner = parse_arg();
          expect_punct("}");
          return Term::compound("{}", {inner});
        }
        break;
      case Tok::Op:
        if (cur_.text == "-") {
          consume();
          if (cur_.kind == Tok::Number) {
            Term t = Term::number(-cur_.number);
            consume();
            return t;
          }
          return Term::compound("-", {parse_primary()});
        }
        break;
      default:
        break;
    }
    fail("expected a term");
  }

  Lexer lexer_;
  Token cur_;
  int anon_counter_ = 0;
};

const std::set<std::string>& reserved_predicates() {
  static const std::set<std::string> r = {"agent",     "participates", "role",
                                          "can",       "does",         "initially",
                                          "terminal",  "incompatible", "rule"};
  return r;
}

Section canonical_section(const Term& head) {
  std::string f = head.is_compound() ? head.name() : head.name();
  size_t n = head.is_compound() ? head.args().size() : 0;
  if (f == "agent" && n == 1) return Section::Agents;
  if ((f == "initially" && n == 1) || (f == "terminal" && n == 0) ||
      (f == "incompatible" && n == 2))
    return Section::States;
  if (f == "rule" && n == 4) return Section::Rules;
  return Section::States;
}

std::vector<Term> flatten_and_list(const Term& t) {
  std::vector<Term> out;
  std::vector<const Term*> stack{&t};
  while (!stack.empty()) {
    const Term* cur = stack.back();
    stack.pop_back();
    if (cur->is_compound() && cur->name() == "and" && cur->args().size() == 2) {
      stack.push_back(&cur->args()[1]);
      stack.push_back(&cur->args()[0]);
    } else {
      out.push_back(*cur);
    }
  }
  return out;
}

}  // namespace

std::optional<RuleStatement> rule_from_term(const Term& t, std::string* error) {
  auto err = [&](const std::string& m) {
    if (error) *error = m;
    return std::nullopt;
  };
  if (!(t.is_compound() && t.name() == "rule" && t.args().size() == 4))
    return err("expected rule/4");
  RuleStatement r;
  r.id = t.args()[0];
  if (!r.id.is_symbol()) return err("rule id must be an identifier, got " + r.id.to_string());
  const Term& type_t = t.args()[1];
  if (!type_t.is_symbol()) return err("rule type must be one of boundary/position/choice/control");
  auto type = rule_type_from_name(type_t.name());
  if (!type) return err("unknown rule type '" + type_t.name() + "'");
  r.type = *type;
  const Term& prio = t.args()[2];
  if (!prio.is_number() || denominator(prio.value()) != 1 || prio.value() < 0)
    return err("rule priority must be a non-negative integer, got " + prio.to_string());
  r.priority = static_cast<long>(numerator(prio.value()).convert_to<long long>());
  const Term& content = t.args()[3];
  if (!(content.is_compound() && content.name() == "if_then_where" &&
        content.args().size() == 3))
    return err("rule content must have the form 'if Condition then Consequence where [...]'");
  r.condition = content.args()[0];
  const Term& conseq = content.args()[1];
  auto constraints = content.args()[2].as_list();
  if (!constraints) return err("rule constraints must be a list");
  r.constraints = *constraints;
  if (r.type == RuleType::Control) {
    auto branches = conseq.as_list();
    if (!branches)
      return err("control-rule consequence must be a list of 'Fluents withProb P' branches");
    if (branches->empty()) return err("control-rule consequence must have at least one branch");
    for (const Term& b : *branches) {
      if (!(b.is_compound() && b.name() == "withProb" && b.args().size() == 2))
        return err("control-rule branch lacks withProb: " + b.to_string());
      ProbBranch branch;
      branch.fluents = flatten_and_list(b.args()[0]);
      branch.prob = b.args()[1];
      r.distribution.push_back(std::move(branch));
    }
  } else {
    if (conseq.as_list() ||
        (conseq.is_compound() && (conseq.name() == "withProb" || conseq.name() == "and")))
      return err(std::string(rule_type_name(r.type)) +
                 "-rule consequence must be a single fluent, got " + conseq.to_string());
    r.simple_consequence = conseq;
  }
  return r;
}

Term rule_to_term(const RuleStatement& r) {
  Term conseq;
  if (r.type == RuleType::Control) {
    std::vector<Term> branches;
    for (const auto& b : r.distribution) {
      Term fl = b.fluents.front();
      for (size_t i = 1; i < b.fluents.size(); ++i)
        fl = Term::compound("and", {fl, b.fluents[i]});
      branches.push_back(Term::compound("withProb", {fl, b.prob}));
    }
    conseq = Term::list(branches);
  } else {
    conseq = r.simple_consequence;
  }
  Term content = Term::compound(
      "if_then_where", {r.condition, conseq, Term::list(r.constraints)});
  return Term::compound("rule", {r.id, Term::symbol(rule_type_name(r.type)),
                                 Term::number(make_rational(r.priority)), content});
}

bool description_equal(const AslDescription& a, const AslDescription& b) {
  if (a.clauses.size() != b.clauses.size() || a.rules.size() != b.rules.size()) return false;
  for (size_t i = 0; i < a.clauses.size(); ++i) {
    if (!(a.clauses[i].clause.head == b.clauses[i].clause.head)) return false;
    if (a.clauses[i].clause.body.size() != b.clauses[i].clause.body.size()) return false;
    for (size_t j = 0; j < a.clauses[i].clause.body.size(); ++j)
      if (!(a.clauses[i].clause.body[j] == b.clauses[i].clause.body[j])) return false;
  }
  for (size_t i = 0; i < a.rules.size(); ++i)
    if (!(rule_to_term(a.rules[i]) == rule_to_term(b.rules[i]))) return false;
  return true;
}

ParseResult parse_description(const std::vector<SourceFile>& sources) {
  ParseResult result;
  size_t rule_index = 0;
  for (const auto& src : sources) {
    Parser parser(src.text, src.name);
    while (!parser.at_end()) {
      SourceLoc loc = parser.loc();
      try {
        auto [head, body] = parser.parse_clause();
        if (head.is_compound() && head.name() == "rule" && head.args().size() == 4) {
          if (!body.empty()) {
            result.diagnostics.push_back(
                {Severity::Error, "arity", "rule/4 statements must be facts without a body",
                 loc});
            continue;
          }
          std::string error;
          auto rule = rule_from_term(head, &error);
          if (!rule) {
            result.diagnostics.push_back({Severity::Error, "operator", error, loc});
            continue;
          }
          rule->loc = loc;
          rule->decl_index = rule_index++;
          if (src.section && *src.section != Section::Rules) {
            result.diagnostics.push_back(
                {Severity::Error, "placement",
                 "rule/4 statement outside the rule base file", loc});
          }
          result.description.rules.push_back(std::move(*rule));
        } else {
          if (!head.is_symbol() && !head.is_compound()) {
            result.diagnostics.push_back(
                {Severity::Error, "syntax",
                 "clause head must be an atom or compound term, got " + head.to_string(), loc});
            continue;
          }
          LocatedClause lc;
          lc.clause = {std::move(head), std::move(body)};
          lc.loc = loc;
          lc.section = src.section ? *src.section : canonical_section(lc.clause.head);
          result.description.clauses.push_back(std::move(lc));
        }
      } catch (const SyntaxError& e) {
        result.diagnostics.push_back({Severity::Error, "syntax", e.what(), loc});
        parser.recover();
      }
    }
  }
  result.ok = !has_errors(result.diagnostics);
  return result;
}

ParseResult parse_description(const std::string& text, const std::string& name) {
  return parse_description(std::vector<SourceFile>{{name, text, std::nullopt}});
}

Term parse_term(const std::string& text) {
  Parser parser(text + " .", "<term>");
  auto [head, body] = parser.parse_clause();
  if (!body.empty()) throw SyntaxError("unexpected clause body in term: " + text);
  return head;
}

std::vector<Term> parse_goals(const std::string& text) {
  Parser parser("goals :- " + text + " .", "<goals>");
  auto [head, body] = parser.parse_clause();
  (void)head;
  return body;
}

namespace {

struct HeadInfo {
  std::string functor;
  size_t arity;
};

HeadInfo head_info(const Term& head) {
  if (head.is_symbol()) return {head.name(), 0};
  return {head.name(), head.args().size()};
}

void collect_goal_predicates(const Term& goal, std::vector<HeadInfo>& out) {
  if (!goal.is_compound() && !goal.is_symbol()) return;
  const std::string& f = goal.name();
  size_t n = goal.is_compound() ? goal.args().size() : 0;
  if ((f == "and" || f == ",") && n == 2) {
    collect_goal_predicates(goal.args()[0], out);
    collect_goal_predicates(goal.args()[1], out);
    return;
  }
  if (f == "\\+" && n == 1) {
    collect_goal_predicates(goal.args()[0], out);
    return;
  }
  if (f == "findall" && n == 3) {
    collect_goal_predicates(goal.args()[1], out);
    out.push_back({f, n});
    return;
  }
  out.push_back({f, n});
}

Term strip_overwrite(const Term& t) {
  if (t.is_compound() && t.name() == "~" && t.args().size() == 1) return t.args()[0];
  return t;
}

bool is_plain_fluent(const Term& t) { return t.is_symbol() || t.is_compound(); }

std::vector<std::string> free_vars(const Term& t) {
  std::vector<std::string> vars;
  t.collect_vars(vars);
  return vars;
}

}  // namespace

std::vector<Diagnostic> validate(const AslDescription& d) {
  std::vector<Diagnostic> diags;
  auto error = [&](const std::string& cat, const std::string& msg, const SourceLoc& loc) {
    diags.push_back({Severity::Error, cat, msg, loc});
  };
  auto warning = [&](const std::string& cat, const std::string& msg, const SourceLoc& loc) {
    diags.push_back({Severity::Warning, cat, msg, loc});
  };

  for (const auto& lc : d.clauses) {
    HeadInfo head = head_info(lc.clause.head);
    if (head.functor == "participates" || head.functor == "role" || head.functor == "can" ||
        head.functor == "does") {
      error("placement",
            head.functor + "/" + std::to_string(head.arity) +
                " is a reserved dynamic predicate and cannot appear as a clause head",
            lc.loc);
    }
    if (head.functor == "agent") {
      if (head.arity != 1) {
        error("arity", "agent takes exactly one argument", lc.loc);
      } else if (lc.section != Section::Agents) {
        error("placement", "agent/1 clauses belong in the agent base", lc.loc);
      }
    }
    if (head.functor == "initially" || head.functor == "terminal" ||
        head.functor == "incompatible") {
      size_t want = head.functor == "initially" ? 1 : head.functor == "terminal" ? 0 : 2;
      if (head.arity != want) {
        error("arity",
              head.functor + " takes exactly " + std::to_string(want) + " argument(s)", lc.loc);
      } else if (lc.section != Section::States) {
        error("placement", head.functor + " clauses belong in the state base", lc.loc);
      }
    }
    if (head.functor == "incompatible" && head.arity == 2) {
      const Term& first = lc.clause.head.args()[0];
      HeadInfo fi = head_info(strip_overwrite(first));
      if (reserved_predicates().count(fi.functor)) {
        error("placement",
              "incompatible/2 must not constrain the reserved predicate " + fi.functor, lc.loc);
      }
    }
    std::vector<HeadInfo> goals;
    for (const auto& g : lc.clause.body) collect_goal_predicates(g, goals);
    for (const auto& g : goals) {
      if ((g.functor == "can" || g.functor == "does") && g.arity == 2) {
        if (head.functor == "initially") {
          error("placement", "initially clauses must not depend on " + g.functor + "/2", lc.loc);
        } else if (!(g.functor == "does" && head.functor == "incompatible")) {
          error("placement",
                g.functor + "/2 may only be used inside rule statements, not in " +
                    head.functor + " clauses",
                lc.loc);
        }
      }
    }
  }

  for (const auto& r : d.rules) {
    auto shape_error = [&](const std::string& msg) { error("arity", msg, r.loc); };
    std::vector<HeadInfo> cond_preds;
    collect_goal_predicates(r.condition, cond_preds);
    switch (r.type) {
      case RuleType::Boundary: {
        HeadInfo c = head_info(r.condition);
        if (!(c.functor == "agent" && c.arity == 1))
          shape_error("boundary-rule condition must be agent/1");
        HeadInfo q = head_info(strip_overwrite(r.simple_consequence));
        if (!(q.functor == "participates" && q.arity == 1))
          shape_error("boundary-rule consequence must be participates/1");
        break;
      }
      case RuleType::Position: {
        HeadInfo c = head_info(r.condition);
        if (!(c.functor == "participates" && c.arity == 1))
          shape_error("position-rule condition must be participates/1");
        HeadInfo q = head_info(strip_overwrite(r.simple_consequence));
        if (!(q.functor == "role" && q.arity == 2))
          shape_error("position-rule consequence must be role/2");
        break;
      }
      case RuleType::Choice: {
        HeadInfo c = head_info(r.condition);
        if (!(c.functor == "role" && c.arity == 2))
          shape_error("choice-rule condition must be role/2");
        HeadInfo q = head_info(strip_overwrite(r.simple_consequence));
        if (!(q.functor == "can" && q.arity == 2))
          shape_error("choice-rule consequence must be can/2");
        break;
      }
      case RuleType::Control: {
        for (const auto& p : cond_preds) {
          if (!(p.functor == "does" && p.arity == 2)) {
            shape_error("control-rule condition must be a conjunction of does/2 atoms, found " +
                        p.functor + "/" + std::to_string(p.arity));
          }
        }
        bool all_numeric = true;
        Rational sum = 0;
        for (const auto& b : r.distribution) {
          for (const auto& fl : b.fluents) {
            if (!is_plain_fluent(strip_overwrite(fl)))
              shape_error("control-rule branch fluent must be an atom or compound: " +
                          fl.to_string());
          }
          if (b.prob.is_number()) {
            const Rational& p = b.prob.value();
            if (p < 0 || p > 1)
              error("probability",
                    "branch probability " + rational_to_string(p) + " outside [0,1]", r.loc);
            sum += p;
          } else {
            all_numeric = false;
          }
        }
        if (all_numeric && sum != 1) {
          error("probability",
                "branch probabilities sum to " + rational_to_string(sum) + ", expected 1", r.loc);
        }
        break;
      }
    }

    std::vector<std::string> bound;
    for (auto& v : free_vars(r.condition)) bound.push_back(v);
    for (const auto& c : r.constraints)
      for (auto& v : free_vars(c)) bound.push_back(v);
    std::vector<std::string> needed;
    if (r.type == RuleType::Control) {
      for (const auto& b : r.distribution) {
        for (const auto& fl : b.fluents)
          for (auto& v : free_vars(fl)) needed.push_back(v);
        for (auto& v : free_vars(b.prob)) needed.push_back(v);
      }
    } else {
      needed = free_vars(r.simple_consequence);
    }
    for (const auto& v : needed) {
      if (std::find(bound.begin(), bound.end(), v) == bound.end()) {
        error("scope",
              "variable " + v + " in the consequence is bound by neither condition nor "
              "constraints",
              r.loc);
      }
    }
  }

  // Same-priority overwrite conflicts: simple rules of equal type and priority
  // whose consequences are f and ~f with unifiable conditions make the
  // surviving fluent depend on declaration order.
  for (size_t i = 0; i < d.rules.size(); ++i) {
    for (size_t j = i + 1; j < d.rules.size(); ++j) {
      const auto& a = d.rules[i];
      const auto& b = d.rules[j];
      if (a.type != b.type || a.type == RuleType::Control || a.priority != b.priority ||
          !(a.id == b.id))
        continue;
      bool a_neg = a.simple_consequence.is_compound() && a.simple_consequence.name() == "~";
      bool b_neg = b.simple_consequence.is_compound() && b.simple_consequence.name() == "~";
      if (a_neg == b_neg) continue;
      // standardize the second rule apart before unifying
      Term bc = b.simple_consequence;
      Term bcond = b.condition;
      {
        std::vector<std::string> vars = free_vars(bc);
        for (auto& v : free_vars(bcond)) vars.push_back(v);
        Subst rename;
        for (const auto& v : vars)
          if (!rename.contains(v)) rename.bind(v, Term::var(v + "'"));
        bc = rename.apply(bc);
        bcond = rename.apply(bcond);
      }
      Subst s;
      if (!unify(strip_overwrite(a.simple_consequence), strip_overwrite(bc), s)) continue;
      if (!unify(a.condition, bcond, s)) continue;
      warning("conflict",
              "rules at priority " + std::to_string(a.priority) + " (" +
                  std::string(rule_type_name(a.type)) + ") produce both a fluent and its "
                  "overwrite under unifiable conditions; resolution follows declaration order",
              b.loc);
    }
  }

  std::stable_sort(diags.begin(), diags.end(), [](const Diagnostic& a, const Diagnostic& b) {
    if (a.loc.file != b.loc.file) return a.loc.file < b.loc.file;
    if (a.loc.line != b.loc.line) return a.loc.line < b.loc.line;
    return a.loc.col < b.loc.col;
  });
  return diags;
}

KnowledgeBase lower(const AslDescription& d) {
  KnowledgeBase kb;
  for (const auto& lc : d.clauses) kb.add_clause(lc.clause);
  for (const auto& r : d.rules) kb.add_clause({rule_to_term(r), {}});

  kb.register_dynamic("participates", 1);
  kb.register_dynamic("role", 2);
  kb.register_dynamic("can", 2);
  kb.register_dynamic("does", 2);
  kb.register_dynamic("terminal", 0);
  kb.register_dynamic("initially", 1);
  kb.register_dynamic("incompatible", 2);
  kb.register_dynamic("~", 1);

  auto register_fluent = [&kb](const Term& fluent) {
    Term f = strip_overwrite(fluent);
    if (f.is_symbol()) {
      kb.register_dynamic(f.name(), 0);
    } else if (f.is_compound()) {
      kb.register_dynamic(f.name(), f.args().size());
    }
  };
  for (const auto& r : d.rules) {
    if (r.type == RuleType::Control) {
      for (const auto& b : r.distribution)
        for (const auto& fl : b.fluents) register_fluent(fl);
    } else {
      register_fluent(r.simple_consequence);
    }
  }
  for (const auto& lc : d.clauses) {
    const Term& head = lc.clause.head;
    if (head.is_compound() && head.name() == "initially" && head.args().size() == 1)
      register_fluent(head.args()[0]);
    if (head.is_compound() && head.name() == "incompatible" && head.args().size() == 2)
      register_fluent(head.args()[0]);
  }
  return kb;
}

namespace {

std::string clause_text(const Clause& c) {
  std::string out = c.head.to_string();
  if (!c.body.empty()) {
    out += " :- ";
    for (size_t i = 0; i < c.body.size(); ++i) {
      if (i) out += ", ";
      out += c.body[i].to_string();
    }
  }
  return out + ".";
}

std::string rule_text(const RuleStatement& r) {
  std::ostringstream os;
  os << "rule(" << r.id.to_string() << ", " << rule_type_name(r.type) << ", " << r.priority
     << ", if " << r.condition.to_string() << " then ";
  if (r.type == RuleType::Control) {
    os << '[';
    for (size_t i = 0; i < r.distribution.size(); ++i) {
      if (i) os << ", ";
      const auto& b = r.distribution[i];
      for (size_t j = 0; j < b.fluents.size(); ++j) {
        if (j) os << " and ";
        os << b.fluents[j].to_string();
      }
      os << " withProb " << b.prob.to_string();
    }
    os << ']';
  } else {
    os << r.simple_consequence.to_string();
  }
  os << " where [";
  for (size_t i = 0; i < r.constraints.size(); ++i) {
    if (i) os << ", ";
    os << r.constraints[i].to_string();
  }
  os << "]).";
  return os.str();
}

}  // namespace

std::string pretty_print(const AslDescription& d) {
  std::ostringstream os;
  for (const auto& lc : d.clauses) os << clause_text(lc.clause) << '\n';
  if (!d.clauses.empty() && !d.rules.empty()) os << '\n';
  for (const auto& r : d.rules) os << rule_text(r) << '\n';
  return os.str();
}

}  // namespace asl
