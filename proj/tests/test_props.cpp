#include <doctest.h>

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "asl/builder.hpp"
#include "asl/errors.hpp"
#include "asl/export.hpp"
#include "asl/parser.hpp"
#include "asl/solver.hpp"

#include "support/corpus.hpp"
#include "support/scenarios.hpp"

using namespace asl;
using namespace testsupport;

TEST_CASE("randomized scenarios uphold the structural invariants") {
  std::mt19937 rng(12345);
  for (int iter = 0; iter < 200; ++iter) {
    CAPTURE(iter);
    Scenario s = draw_scenario(rng);
    std::string text_for_log = scenario_text(s);
    CAPTURE(text_for_log);

    KnowledgeBase kb;
    BuiltGame built = build_scenario(s, kb);
    const ExtensiveGame& game = built.game;

    auto errors = validate_game(game);
    for (const auto& e : errors) MESSAGE(e);
    REQUIRE(errors.empty());
    REQUIRE(validate_perfect_recall(game));

    for (size_t i = 0; i < game.nodes.size(); ++i) {
      CHECK(game.nodes[i].id == static_cast<int>(i) + 1);
    }
    size_t edges = 0;
    for (const auto& node : game.nodes) edges += node.children.size();
    CHECK(edges == game.nodes.size() - 1);

    for (const auto& node : game.nodes) {
      if (node.kind != NodeKind::Chance) continue;
      Rational sum(0);
      for (int c : node.children) sum += game.node(c).chance_prob;
      CHECK(sum == Rational(1));
    }

    for (const auto& [id, fluents] : built.annotation.fluents) {
      std::set<std::string> keys;
      for (const auto& f : fluents) {
        CHECK(keys.insert(scenario_fluent_key(f)).second);
      }
    }

    for (const auto& round : built.rounds) {
      auto round_errors = validate_game_round(game, round);
      for (const auto& e : round_errors) MESSAGE(e);
      REQUIRE(round_errors.empty());

      CHECK(std::is_sorted(round.leaves.begin(), round.leaves.end()));
      const auto& entry_state = built.annotation.fluents.at(round.root);
      for (int leaf : round.leaves) {
        CHECK(built.annotation.round_index.at(leaf) == round.index + 1);
        const auto& leaf_state = built.annotation.fluents.at(leaf);
        std::set<std::string> leaf_keys;
        for (const auto& f : leaf_state) leaf_keys.insert(scenario_fluent_key(f));
        for (const auto& f : entry_state) {
          CHECK(leaf_keys.count(scenario_fluent_key(f)) == 1);
        }
      }
    }

    if (iter % 20 == 0) {
      auto text = export_json(built);
      auto back = import_json(text);
      CHECK(built_game_equal(built, back));
      KnowledgeBase kb_again;
      BuiltGame again = build_scenario(s, kb_again);
      CHECK(export_json(again) == text);
    }

    UtilitySpec spec;
    spec.mode = UtilityMode::CriterionTable;
    UtilityRule fresh;
    fresh.name = "fresh";
    fresh.when.push_back(parse_term("g(A,0)"));
    fresh.value = Rational(1);
    spec.rules.push_back(fresh);
    assign_utilities(built.game, built.annotation, spec, kb);
    auto report = backtrack_solve(built, SelectionPolicy::First);
    REQUIRE(report.variants.size() == 1);
    const auto& variant = report.variants[0];
    Rational mass(0);
    auto terminals = game.terminals();
    std::set<int> terminal_set(terminals.begin(), terminals.end());
    for (const auto& [z, p] : variant.outcome_dist) {
      CHECK(terminal_set.count(z) == 1);
      CHECK(p >= 0);
      mass += p;
    }
    CHECK(variant.outcome_dist.size() == terminal_set.size());
    CHECK(mass == Rational(1));
    CHECK(variant.node_values.at(ExtensiveGame::kRoot).size() == game.players.size());
  }
}

TEST_CASE("corpus builds uphold the structural invariants") {
  struct Config {
    const char* situation;
    const char* id;
    long thres;
  };
  const Config configs[] = {
      {"metanorms", "metanorms", 0}, {"metanorms", "metanorms", 1},
      {"ipd", "ipd", 0},             {"ipd", "ipd", 1},
      {"ipd", "ipd", 2},             {"fishers", "fishers", 0},
      {"fishers", "fishers", 1},     {"fishers", "fishers", 2},
  };
  for (const auto& c : configs) {
    CAPTURE(c.situation);
    CAPTURE(c.thres);
    auto g = build_corpus(c.situation, c.id, Threshold::at(c.thres), 10);
    const ExtensiveGame& game = g.built.game;

    auto errors = validate_game(game);
    for (const auto& e : errors) MESSAGE(e);
    REQUIRE(errors.empty());
    REQUIRE(validate_perfect_recall(game));

    for (size_t i = 0; i < game.nodes.size(); ++i) {
      CHECK(game.nodes[i].id == static_cast<int>(i) + 1);
    }
    size_t edges = 0;
    for (const auto& node : game.nodes) edges += node.children.size();
    CHECK(edges == game.nodes.size() - 1);

    for (const auto& node : game.nodes) {
      if (node.kind != NodeKind::Chance) continue;
      Rational sum(0);
      for (int ch : node.children) sum += game.node(ch).chance_prob;
      CHECK(sum == Rational(1));
    }

    std::set<int> round_roots;
    for (const auto& round : g.built.rounds) {
      CHECK(round_roots.insert(round.root).second);
      auto round_errors = validate_game_round(game, round);
      for (const auto& e : round_errors) MESSAGE(e);
      REQUIRE(round_errors.empty());
      CHECK(std::is_sorted(round.leaves.begin(), round.leaves.end()));
      for (int leaf : round.leaves) {
        CHECK(g.built.annotation.round_index.at(leaf) == round.index + 1);
        CHECK(g.built.annotation.fluents.count(leaf) == 1);
      }
    }
  }
}
