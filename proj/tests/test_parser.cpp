#include <doctest.h>

#include "asl/errors.hpp"
#include "asl/parser.hpp"

#include "support/corpus.hpp"

using namespace asl;
using namespace testsupport;

TEST_CASE("terms parse with operators and precedence") {
  CHECK(parse_term("~at(a,b)") == Term::compound("~", {parse_term("at(a,b)")}));
  CHECK(parse_term("1+2*3") ==
        Term::compound("+", {Term::number(1),
                             Term::compound("*", {Term::number(2), Term::number(3)})}));
  CHECK(parse_term("(1+2)*3") ==
        Term::compound("*", {Term::compound("+", {Term::number(1), Term::number(2)}),
                             Term::number(3)}));

  Term joint = parse_term("does(a,x) and does(b,y) and does(c,z)");
  CHECK(joint.name() == "and");
  CHECK(joint.args()[0] == parse_term("does(a,x)"));
  CHECK(joint.args()[1].name() == "and");

  Term branch = parse_term("f(a) and g(b) withProb 0.5");
  CHECK(branch.name() == "withProb");
  CHECK(branch.args()[0].name() == "and");
  CHECK(branch.args()[1] == Term::number(make_rational(1, 2)));

  CHECK(parse_term("[a, b | T]").is_cons());
  CHECK(parse_term("[]").is_nil());
  CHECK_THROWS_AS(parse_term("f(a"), SyntaxError);
}

TEST_CASE("clauses and rule statements parse from one file") {
  auto parsed = parse_description(
      "agent(i).\n"
      "initially(time(0)).\n"
      "score(P, 0) :- participates(P).\n"
      "rule(demo, boundary, 0, if agent(A) then participates(A) where []).\n"
      "rule(demo, control, 1,\n"
      "  if does(P, hunt) then [fed(P) withProb 2/3, ~fed(P) withProb 1/3]\n"
      "  where [role(P, hunter)]).\n");
  REQUIRE(parsed.ok);
  CHECK(parsed.description.clauses.size() == 3);
  REQUIRE(parsed.description.rules.size() == 2);

  const RuleStatement& control = parsed.description.rules[1];
  CHECK(control.type == RuleType::Control);
  CHECK(control.priority == 1);
  REQUIRE(control.distribution.size() == 2);
  CHECK(control.distribution[0].fluents == std::vector<Term>{parse_term("fed(P)")});
  CHECK(control.distribution[1].fluents == std::vector<Term>{parse_term("~fed(P)")});
  CHECK(control.constraints == std::vector<Term>{parse_term("role(P, hunter)")});
}

TEST_CASE("section inference routes reserved heads") {
  auto parsed = parse_description("agent(i). initially(p(i)). helper(x).");
  REQUIRE(parsed.ok);
  CHECK(parsed.description.clauses[0].section == Section::Agents);
  CHECK(parsed.description.clauses[1].section == Section::States);
  CHECK(parsed.description.clauses[2].section == Section::States);
}

TEST_CASE("syntax errors recover at the next clause") {
  auto parsed = parse_description("p(a b).\nq(c).\nr(x y).\ns(d).");
  CHECK_FALSE(parsed.ok);
  CHECK(parsed.diagnostics.size() == 2);
  REQUIRE(parsed.description.clauses.size() == 2);
  CHECK(parsed.description.clauses[0].clause.head == parse_term("q(c)"));
  CHECK(parsed.description.clauses[1].clause.head == parse_term("s(d)"));
}

TEST_CASE("comments are skipped") {
  auto parsed = parse_description("% header\np(a). % trailing\n/* block\ncomment */ q(b).\n");
  REQUIRE(parsed.ok);
  CHECK(parsed.description.clauses.size() == 2);
}

TEST_CASE("validity checks flag misplaced and malformed statements") {
  SUBCASE("agent clauses outside the agent base") {
    std::vector<SourceFile> sources{{"states.pl", "agent(i).", Section::States}};
    auto parsed = parse_description(sources);
    REQUIRE(parsed.ok);
    auto diags = validate(parsed.description);
    REQUIRE(has_errors(diags));
    CHECK(diags[0].category == "placement");
  }
  SUBCASE("reserved dynamic predicates as clause heads") {
    auto parsed = parse_description("can(i, defect).");
    REQUIRE(parsed.ok);
    auto diags = validate(parsed.description);
    CHECK(has_errors(diags));
  }
  SUBCASE("does outside rule statements") {
    auto parsed = parse_description("moved(P) :- does(P, _).");
    REQUIRE(parsed.ok);
    auto diags = validate(parsed.description);
    CHECK(has_errors(diags));
  }
  SUBCASE("incompatible constraining a reserved predicate") {
    auto parsed = parse_description("incompatible(can(A,X), _).");
    REQUIRE(parsed.ok);
    CHECK(has_errors(validate(parsed.description)));
  }
  SUBCASE("boundary rule with a non-agent condition") {
    auto parsed = parse_description(
        "rule(demo, boundary, 0, if happy(A) then participates(A) where []).");
    REQUIRE(parsed.ok);
    auto diags = validate(parsed.description);
    REQUIRE(has_errors(diags));
    CHECK(diags[0].category == "arity");
  }
  SUBCASE("constant branch probabilities must sum to one") {
    auto parsed = parse_description(
        "rule(demo, control, 0, if does(P, x) then [p(P) withProb 0.5, ~p(P) withProb 0.4] "
        "where []).");
    REQUIRE(parsed.ok);
    auto diags = validate(parsed.description);
    REQUIRE(has_errors(diags));
    CHECK(diags[0].category == "probability");
  }
  SUBCASE("probability outside the unit interval") {
    auto parsed = parse_description(
        "rule(demo, control, 0, if does(P, x) then [p(P) withProb 2, ~p(P) withProb -1] "
        "where []).");
    REQUIRE(parsed.ok);
    CHECK(has_errors(validate(parsed.description)));
  }
  SUBCASE("unbound consequence variables") {
    auto parsed = parse_description(
        "rule(demo, choice, 0, if role(A, r) then can(A, pick(B)) where []).");
    REQUIRE(parsed.ok);
    auto diags = validate(parsed.description);
    REQUIRE(has_errors(diags));
    CHECK(diags[0].category == "scope");
  }
  SUBCASE("same-priority overwrite conflicts warn") {
    auto parsed = parse_description(
        "rule(demo, choice, 0, if role(A, r) then can(A, x) where []).\n"
        "rule(demo, choice, 0, if role(A, r) then ~can(A, x) where []).\n");
    REQUIRE(parsed.ok);
    auto diags = validate(parsed.description);
    REQUIRE(diags.size() == 1);
    CHECK(diags[0].severity == Severity::Warning);
    CHECK(diags[0].category == "conflict");
    CHECK_FALSE(has_errors(diags));
  }
}

TEST_CASE("pretty print round trips") {
  const char* text =
      "agent(i).\n"
      "agent(j).\n"
      "initially(time(0)).\n"
      "score(P, 0) :- participates(P), \\+ banned(P).\n"
      "terminal :- time(N), N >= 3.\n"
      "incompatible(time(_), L) :- member(time(_), L).\n"
      "rule(demo, boundary, 0, if agent(A) then participates(A) where []).\n"
      "rule(demo, position, 0, if participates(A) then role(A, worker) where []).\n"
      "rule(demo, choice, 1, if role(A, worker) then can(A, act(A)) where [time(0)]).\n"
      "rule(demo, control, 2, if does(P, act(P)) then [done(P) withProb X, ~done(P) withProb Y]"
      " where [{X = 1/3}, {Y = 2/3}]).\n";
  auto first = parse_description(text);
  REQUIRE(first.ok);
  std::string printed = pretty_print(first.description);
  auto second = parse_description(printed);
  REQUIRE(second.ok);
  CHECK(description_equal(first.description, second.description));
  CHECK(pretty_print(second.description) == printed);
}

TEST_CASE("corpus descriptions parse and validate cleanly") {
  struct Row {
    const char* name;
    size_t rules;
  };
  for (const Row& row : {Row{"ipd", 13}, Row{"metanorms", 16}, Row{"fishers", 17}}) {
    auto parsed = parse_corpus(row.name);
    REQUIRE_MESSAGE(parsed.ok, row.name);
    CHECK_MESSAGE(parsed.description.rules.size() == row.rules, row.name);
    auto diags = validate(parsed.description);
    CHECK_MESSAGE(!has_errors(diags), row.name);

    std::string printed = pretty_print(parsed.description);
    auto again = parse_description(printed);
    REQUIRE_MESSAGE(again.ok, row.name);
    CHECK_MESSAGE(description_equal(parsed.description, again.description), row.name);
  }
}

TEST_CASE("rule statements round trip through term form") {
  auto parsed = parse_description(
      "rule(demo, control, 1, if does(P, x) and does(Q, y) then [p(P) withProb 1] "
      "where [P \\= Q]).");
  REQUIRE(parsed.ok);
  REQUIRE(parsed.description.rules.size() == 1);
  const RuleStatement& r = parsed.description.rules[0];
  Term serialized = rule_to_term(r);
  std::string error;
  auto back = rule_from_term(serialized, &error);
  REQUIRE_MESSAGE(back.has_value(), error);
  CHECK(back->id == r.id);
  CHECK(back->type == r.type);
  CHECK(back->priority == r.priority);
  CHECK(back->condition == r.condition);
  CHECK(back->distribution.size() == r.distribution.size());
  CHECK(back->constraints == r.constraints);
}

TEST_CASE("lower registers dynamic predicates and stores rules as facts") {
  auto parsed = parse_description(
      "agent(i).\n"
      "rule(demo, boundary, 0, if agent(A) then participates(A) where []).\n"
      "rule(demo, control, 0, if does(P, x) then [fed(P) withProb 1] where []).\n");
  REQUIRE(parsed.ok);
  auto kb = lower(parsed.description);
  CHECK(kb.known("participates", 1));
  CHECK(kb.known("does", 2));
  CHECK(kb.known("can", 2));
  CHECK(kb.known("terminal", 0));
  CHECK(kb.known("fed", 1));
  const auto* rules = kb.static_clauses("rule", 4);
  REQUIRE(rules != nullptr);
  CHECK(rules->size() == 2);
}
