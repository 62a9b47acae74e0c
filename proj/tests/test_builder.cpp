#include <doctest.h>

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "asl/builder.hpp"
#include "asl/errors.hpp"
#include "asl/export.hpp"
#include "asl/parser.hpp"

#include "support/corpus.hpp"

using namespace asl;
using namespace testsupport;

namespace {

std::vector<std::string> labels(const std::vector<Term>& terms) {
  std::vector<std::string> out;
  for (const auto& t : terms) out.push_back(t.to_string());
  return out;
}

std::vector<std::string> state_order(const BuiltGame& built, int id) {
  return labels(built.annotation.fluents.at(id));
}

const InfoSet* round_set(const BuiltGame& built, const RoundRecord& round, int player) {
  for (int idx : round.info_sets) {
    const InfoSet& set = built.game.info_sets[static_cast<size_t>(idx)];
    if (set.player == player) return &set;
  }
  return nullptr;
}

const RoundRecord* round_at(const BuiltGame& built, int root) {
  for (const auto& r : built.rounds)
    if (r.root == root) return &r;
  return nullptr;
}

void expect_valid(const BuiltGame& built) {
  auto errors = validate_game(built.game);
  for (const auto& e : errors) MESSAGE(e);
  CHECK(errors.empty());
  for (const auto& round : built.rounds) {
    auto round_errors = validate_game_round(built.game, round);
    for (const auto& e : round_errors) MESSAGE(e);
    CHECK(round_errors.empty());
  }
  CHECK(validate_perfect_recall(built.game));
}

int count_kind(const ExtensiveGame& g, NodeKind kind) {
  int n = 0;
  for (const auto& node : g.nodes)
    if (node.kind == kind) ++n;
  return n;
}

}  // namespace

TEST_CASE("sanction game without a metamonitor") {
  auto g = build_corpus("metanorms", "metanorms", Threshold::at(0), 10);
  const auto& game = g.built.game;

  CHECK(game.players == std::vector<std::string>{"i", "j", "k"});
  CHECK(labels(g.built.staging.participants) ==
        std::vector<std::string>{"participates(i)", "participates(j)", "participates(k)"});
  CHECK(labels(g.built.staging.roles) ==
        std::vector<std::string>{"role(i,individual)", "role(j,monitor)"});
  CHECK(g.built.staging.players == std::vector<std::string>{"i", "j", "k"});

  REQUIRE(game.nodes.size() == 7);
  CHECK(game.terminals() == std::vector<int>{3, 4, 6, 7});
  CHECK(game.utilities.empty());

  CHECK(game.node(1).kind == NodeKind::Decision);
  CHECK(game.node(1).parent == 0);
  CHECK(game.node(1).children == std::vector<int>{2, 3});
  CHECK(game.node(1).player == 0);
  const InfoSet& root_set = game.info_sets[static_cast<size_t>(game.node(1).info_set)];
  CHECK(root_set.nodes == std::vector<int>{1});
  CHECK(labels(root_set.actions) == std::vector<std::string>{"defect", "~defect"});

  CHECK(game.node(2).kind == NodeKind::Chance);
  CHECK(game.node(2).action.to_string() == "defect");
  CHECK(game.node(2).children == std::vector<int>{4, 5});
  CHECK(game.node(3).kind == NodeKind::Leaf);
  CHECK(game.node(3).action.to_string() == "~defect");
  CHECK(state_order(g.built, 3) ==
        std::vector<std::string>{"time(1)", "payoff(i,0)", "payoff(j,0)", "payoff(k,0)"});

  CHECK(game.node(4).chance_prob == make_rational(2, 5));
  CHECK(node_state(g.built, 4) == std::set<std::string>{"time(1)", "payoff(i,3)", "payoff(j,-1)",
                                                        "payoff(k,-1)", "~seen(j,i)"});
  CHECK(game.node(5).chance_prob == make_rational(3, 5));
  CHECK(game.node(5).kind == NodeKind::Decision);
  CHECK(game.node(5).player == 1);
  CHECK(node_state(g.built, 5) == std::set<std::string>{"time(1)", "payoff(i,3)", "payoff(j,-1)",
                                                        "payoff(k,-1)", "seen(j,i)"});
  const InfoSet& monitor_set = game.info_sets[static_cast<size_t>(game.node(5).info_set)];
  CHECK(monitor_set.nodes == std::vector<int>{5});
  CHECK(labels(monitor_set.actions) == std::vector<std::string>{"sanction(i)", "~sanction(i)"});

  CHECK(node_state(g.built, 6) ==
        std::set<std::string>{"time(2)", "payoff(i,-6)", "payoff(j,-3)", "payoff(k,-1)"});
  CHECK(node_state(g.built, 7) ==
        std::set<std::string>{"time(2)", "payoff(i,3)", "payoff(j,-1)", "payoff(k,-1)"});

  REQUIRE(g.built.rounds.size() == 2);
  CHECK(g.built.rounds[0].root == 1);
  CHECK(g.built.rounds[0].index == 0);
  CHECK(g.built.rounds[0].movers == std::vector<int>{0});
  CHECK(g.built.rounds[0].leaves == std::vector<int>{3, 4, 5});
  CHECK(g.built.rounds[1].root == 5);
  CHECK(g.built.rounds[1].index == 1);
  CHECK(g.built.rounds[1].movers == std::vector<int>{1});
  CHECK(g.built.rounds[1].leaves == std::vector<int>{6, 7});

  CHECK(g.built.annotation.round_index ==
        std::map<int, int>{{1, 0}, {3, 1}, {4, 1}, {5, 1}, {6, 2}, {7, 2}});
  CHECK(g.built.annotation.fluents.count(2) == 0);

  expect_valid(g.built);
}

TEST_CASE("metamonitor threshold appends a second sanction stage") {
  auto g = build_corpus("metanorms", "metanorms", Threshold::at(1), 10);
  const auto& game = g.built.game;

  CHECK(labels(g.built.staging.roles) ==
        std::vector<std::string>{"role(k,metamonitor)", "role(i,individual)", "role(j,monitor)"});

  REQUIRE(game.nodes.size() == 11);
  CHECK(game.terminals() == std::vector<int>{3, 4, 6, 8, 10, 11});

  CHECK(game.node(7).kind == NodeKind::Chance);
  CHECK(game.node(7).action.to_string() == "~sanction(i)");
  CHECK(game.node(7).children == std::vector<int>{8, 9});
  CHECK(game.node(8).chance_prob == make_rational(2, 5));
  CHECK(node_state(g.built, 8) == std::set<std::string>{"time(2)", "payoff(i,3)", "payoff(j,-1)",
                                                        "payoff(k,-1)", "~seen(k,j)"});
  CHECK(game.node(9).chance_prob == make_rational(3, 5));
  CHECK(game.node(9).kind == NodeKind::Decision);
  CHECK(game.node(9).player == 2);
  CHECK(node_state(g.built, 9) == std::set<std::string>{"time(2)", "payoff(i,3)", "payoff(j,-1)",
                                                        "payoff(k,-1)", "seen(k,j)"});
  const InfoSet& meta_set = game.info_sets[static_cast<size_t>(game.node(9).info_set)];
  CHECK(labels(meta_set.actions) == std::vector<std::string>{"sanction(j)", "~sanction(j)"});

  CHECK(node_state(g.built, 10) ==
        std::set<std::string>{"time(3)", "payoff(i,3)", "payoff(j,-10)", "payoff(k,-3)"});
  CHECK(node_state(g.built, 11) ==
        std::set<std::string>{"time(3)", "payoff(i,3)", "payoff(j,-1)", "payoff(k,-1)"});

  REQUIRE(g.built.rounds.size() == 3);
  CHECK(g.built.rounds[1].root == 5);
  CHECK(g.built.rounds[1].leaves == std::vector<int>{6, 8, 9});
  CHECK(g.built.rounds[2].root == 9);
  CHECK(g.built.rounds[2].index == 2);
  CHECK(g.built.rounds[2].movers == std::vector<int>{2});
  CHECK(g.built.rounds[2].leaves == std::vector<int>{10, 11});
  CHECK(g.built.annotation.round_index.at(10) == 3);
  CHECK(g.built.annotation.round_index.at(11) == 3);

  expect_valid(g.built);
}

TEST_CASE("three round dilemma at threshold zero") {
  auto g = build_corpus("ipd", "ipd", Threshold::at(0), 10);
  const auto& game = g.built.game;

  CHECK(game.players == std::vector<std::string>{"alice", "bob"});
  CHECK(labels(g.built.staging.roles) ==
        std::vector<std::string>{"role(alice,prisoner)", "role(bob,prisoner)"});

  REQUIRE(game.nodes.size() == 127);
  auto terminals = game.terminals();
  CHECK(terminals.size() == 64);
  for (int t : terminals) {
    auto state = node_state(g.built, t);
    CHECK(state.count("rounds(3)") == 1);
  }
  CHECK(count_kind(game, NodeKind::Chance) == 0);

  CHECK(state_order(g.built, 1) ==
        std::vector<std::string>{"payoff(alice,0)", "payoff(bob,0)", "consecutiveDefections(alice,0)",
                                 "consecutiveDefections(bob,0)", "rounds(0)"});

  const InfoSet& alice_set = game.info_sets[0];
  CHECK(alice_set.player == 0);
  CHECK(alice_set.nodes == std::vector<int>{1});
  CHECK(labels(alice_set.actions) == std::vector<std::string>{"cooperate", "defect"});
  const InfoSet& bob_set = game.info_sets[1];
  CHECK(bob_set.player == 1);
  CHECK(bob_set.nodes == std::vector<int>{2, 3});
  CHECK(labels(bob_set.actions) == std::vector<std::string>{"cooperate", "defect"});

  CHECK(state_order(g.built, 4) ==
        std::vector<std::string>{"rounds(1)", "payoff(alice,6)", "payoff(bob,6)",
                                 "consecutiveDefections(alice,0)", "consecutiveDefections(bob,0)"});
  CHECK(state_order(g.built, 5) ==
        std::vector<std::string>{"rounds(1)", "payoff(alice,0)", "payoff(bob,9)",
                                 "consecutiveDefections(bob,1)", "consecutiveDefections(alice,0)"});
  CHECK(state_order(g.built, 6) ==
        std::vector<std::string>{"rounds(1)", "payoff(bob,0)", "payoff(alice,9)",
                                 "consecutiveDefections(alice,1)", "consecutiveDefections(bob,0)"});
  CHECK(state_order(g.built, 7) ==
        std::vector<std::string>{"rounds(1)", "payoff(alice,3)", "payoff(bob,3)",
                                 "consecutiveDefections(alice,1)", "consecutiveDefections(bob,1)"});

  REQUIRE(g.built.rounds.size() == 21);
  for (const auto& round : g.built.rounds) CHECK(round.movers == std::vector<int>{0, 1});
  CHECK(g.built.annotation.fluents.size() == 85);

  expect_valid(g.built);
}

TEST_CASE("defection ban reshapes the third round") {
  auto g = build_corpus("ipd", "ipd", Threshold::at(1), 10);
  const auto& game = g.built.game;

  REQUIRE(game.nodes.size() == 108);
  CHECK(game.terminals().size() == 49);
  REQUIRE(g.built.rounds.size() == 21);

  const RoundRecord* alice_banned = round_at(g.built, 24);
  REQUIRE(alice_banned != nullptr);
  const InfoSet* alice_only_c = round_set(g.built, *alice_banned, 0);
  const InfoSet* bob_free = round_set(g.built, *alice_banned, 1);
  REQUIRE(alice_only_c != nullptr);
  REQUIRE(bob_free != nullptr);
  CHECK(labels(alice_only_c->actions) == std::vector<std::string>{"cooperate"});
  CHECK(labels(bob_free->actions) == std::vector<std::string>{"cooperate", "defect"});

  const RoundRecord* bob_banned = round_at(g.built, 17);
  REQUIRE(bob_banned != nullptr);
  CHECK(labels(round_set(g.built, *bob_banned, 0)->actions) ==
        std::vector<std::string>{"cooperate", "defect"});
  CHECK(labels(round_set(g.built, *bob_banned, 1)->actions) ==
        std::vector<std::string>{"cooperate"});

  const RoundRecord& last = g.built.rounds.back();
  CHECK(last.root == 31);
  CHECK(last.movers == std::vector<int>{0, 1});
  CHECK(labels(round_set(g.built, last, 0)->actions) == std::vector<std::string>{"cooperate"});
  CHECK(labels(round_set(g.built, last, 1)->actions) == std::vector<std::string>{"cooperate"});
  CHECK(last.leaves == std::vector<int>{108});
  CHECK(node_state(g.built, 31) ==
        std::set<std::string>{"rounds(2)", "payoff(alice,6)", "payoff(bob,6)",
                              "consecutiveDefections(alice,2)", "consecutiveDefections(bob,2)"});
  CHECK(node_state(g.built, 108) ==
        std::set<std::string>{"rounds(3)", "payoff(alice,12)", "payoff(bob,12)",
                              "consecutiveDefections(alice,0)", "consecutiveDefections(bob,0)"});

  expect_valid(g.built);
}

TEST_CASE("ban lift keeps defection available and randomizes mutual defection") {
  auto g = build_corpus("ipd", "ipd", Threshold::at(2), 10);
  const auto& game = g.built.game;

  REQUIRE(game.nodes.size() == 249);
  CHECK(game.terminals().size() == 125);
  CHECK(g.built.rounds.size() == 31);
  CHECK(count_kind(game, NodeKind::Chance) == 31);

  for (const auto& set : game.info_sets)
    CHECK(labels(set.actions) == std::vector<std::string>{"defect", "cooperate"});

  CHECK(game.node(4).kind == NodeKind::Chance);
  CHECK(game.node(4).children == std::vector<int>{8, 9});
  CHECK(game.node(8).chance_prob == make_rational(1, 2));
  CHECK(game.node(9).chance_prob == make_rational(1, 2));
  CHECK(node_state(g.built, 8) ==
        std::set<std::string>{"rounds(1)", "payoff(alice,9)", "payoff(bob,0)",
                              "consecutiveDefections(alice,1)", "consecutiveDefections(bob,1)"});
  CHECK(node_state(g.built, 9) ==
        std::set<std::string>{"rounds(1)", "payoff(alice,0)", "payoff(bob,9)",
                              "consecutiveDefections(alice,1)", "consecutiveDefections(bob,1)"});

  expect_valid(g.built);
}

TEST_CASE("fishing spot race to two spots with fights") {
  auto g = build_corpus("fishers", "fishers", Threshold::at(0), 10);
  const auto& game = g.built.game;

  CHECK(game.players == std::vector<std::string>{"alice", "bob"});
  CHECK(labels(g.built.staging.roles) ==
        std::vector<std::string>{"role(alice,fisher)", "role(bob,fisher)"});
  CHECK(state_order(g.built, 1) == std::vector<std::string>{"at(alice,shore)", "at(bob,shore)"});

  REQUIRE(game.nodes.size() == 27);
  CHECK(game.terminals() ==
        std::vector<int>{5, 6, 11, 12, 14, 15, 16, 17, 21, 22, 24, 25, 26, 27});

  const InfoSet& shore_alice = game.info_sets[0];
  CHECK(labels(shore_alice.actions) ==
        std::vector<std::string>{"go_to_spot(spot1)", "go_to_spot(spot2)"});
  const InfoSet& shore_bob = game.info_sets[1];
  CHECK(shore_bob.nodes == std::vector<int>{2, 3});

  CHECK(state_order(g.built, 4) == std::vector<std::string>{"at(alice,spot1)", "at(bob,spot1)"});
  CHECK(state_order(g.built, 5) == std::vector<std::string>{"at(alice,spot1)", "at(bob,spot2)"});
  CHECK(state_order(g.built, 6) == std::vector<std::string>{"at(alice,spot2)", "at(bob,spot1)"});
  CHECK(state_order(g.built, 7) == std::vector<std::string>{"at(alice,spot2)", "at(bob,spot2)"});

  const RoundRecord* spot1_round = round_at(g.built, 4);
  REQUIRE(spot1_round != nullptr);
  CHECK(spot1_round->index == 1);
  CHECK(labels(round_set(g.built, *spot1_round, 0)->actions) ==
        std::vector<std::string>{"stay", "leave"});
  CHECK(labels(round_set(g.built, *spot1_round, 1)->actions) ==
        std::vector<std::string>{"stay", "leave"});
  CHECK(spot1_round->leaves == std::vector<int>{11, 12, 14, 15, 16, 17});

  CHECK(game.node(8).children == std::vector<int>{10, 11});
  CHECK(game.node(9).children == std::vector<int>{12, 13});
  CHECK(game.node(10).kind == NodeKind::Chance);
  CHECK(game.node(10).children == std::vector<int>{14, 15});
  CHECK(game.node(14).chance_prob == make_rational(3, 8));
  CHECK(node_state(g.built, 14) ==
        std::set<std::string>{"lost_fight(bob)", "at(alice,spot1)", "at(bob,spot1)"});
  CHECK(game.node(15).chance_prob == make_rational(5, 8));
  CHECK(node_state(g.built, 15) ==
        std::set<std::string>{"lost_fight(alice)", "at(alice,spot1)", "at(bob,spot1)"});
  CHECK(state_order(g.built, 11) == std::vector<std::string>{"at(bob,spot2)", "at(alice,spot1)"});
  CHECK(state_order(g.built, 12) == std::vector<std::string>{"at(alice,spot2)", "at(bob,spot1)"});
  CHECK(game.node(13).kind == NodeKind::Chance);
  CHECK(game.node(13).children == std::vector<int>{16, 17});
  CHECK(node_state(g.built, 16) ==
        std::set<std::string>{"at(alice,spot2)", "at(bob,spot2)", "lost_fight(bob)"});
  CHECK(node_state(g.built, 17) ==
        std::set<std::string>{"at(alice,spot2)", "at(bob,spot2)", "lost_fight(alice)"});

  const RoundRecord* spot2_round = round_at(g.built, 7);
  REQUIRE(spot2_round != nullptr);
  CHECK(spot2_round->leaves == std::vector<int>{21, 22, 24, 25, 26, 27});
  CHECK(game.node(20).kind == NodeKind::Chance);
  CHECK(game.node(20).children == std::vector<int>{24, 25});
  CHECK(node_state(g.built, 24) ==
        std::set<std::string>{"at(alice,spot2)", "at(bob,spot2)", "lost_fight(bob)"});
  CHECK(state_order(g.built, 21) == std::vector<std::string>{"at(bob,spot1)", "at(alice,spot2)"});
  CHECK(state_order(g.built, 22) == std::vector<std::string>{"at(alice,spot1)", "at(bob,spot2)"});
  CHECK(game.node(23).children == std::vector<int>{26, 27});
  CHECK(node_state(g.built, 26) ==
        std::set<std::string>{"at(alice,spot1)", "at(bob,spot1)", "lost_fight(bob)"});
  CHECK(node_state(g.built, 27) ==
        std::set<std::string>{"at(alice,spot1)", "at(bob,spot1)", "lost_fight(alice)"});

  REQUIRE(g.built.rounds.size() == 3);
  CHECK(g.built.rounds[0].leaves == std::vector<int>{4, 5, 6, 7});

  expect_valid(g.built);
}

TEST_CASE("race threshold settles contested spots without fights") {
  auto g = build_corpus("fishers", "fishers", Threshold::at(1), 10);
  const auto& game = g.built.game;

  REQUIRE(game.nodes.size() == 19);
  CHECK(game.terminals() == std::vector<int>{5, 6, 13, 15, 17, 19});

  CHECK(game.node(4).kind == NodeKind::Chance);
  CHECK(game.node(4).children == std::vector<int>{8, 9});
  CHECK(game.node(8).chance_prob == make_rational(8, 13));
  CHECK(node_state(g.built, 8) ==
        std::set<std::string>{"lost_race(bob)", "at(alice,spot1)", "at(bob,spot1)"});
  CHECK(game.node(9).chance_prob == make_rational(5, 13));
  CHECK(node_state(g.built, 9) ==
        std::set<std::string>{"lost_race(alice)", "at(alice,spot1)", "at(bob,spot1)"});
  CHECK(game.node(7).kind == NodeKind::Chance);
  CHECK(game.node(7).children == std::vector<int>{10, 11});
  CHECK(node_state(g.built, 10) ==
        std::set<std::string>{"lost_race(bob)", "at(alice,spot2)", "at(bob,spot2)"});

  const RoundRecord* bob_lost = round_at(g.built, 8);
  REQUIRE(bob_lost != nullptr);
  CHECK(bob_lost->index == 1);
  CHECK(bob_lost->movers == std::vector<int>{0, 1});
  CHECK(labels(round_set(g.built, *bob_lost, 0)->actions) == std::vector<std::string>{"stay"});
  CHECK(labels(round_set(g.built, *bob_lost, 1)->actions) == std::vector<std::string>{"leave"});

  CHECK(state_order(g.built, 13) ==
        std::vector<std::string>{"at(bob,spot2)", "lost_race(bob)", "at(alice,spot1)"});
  CHECK(state_order(g.built, 15) ==
        std::vector<std::string>{"at(alice,spot2)", "lost_race(alice)", "at(bob,spot1)"});
  CHECK(state_order(g.built, 17) ==
        std::vector<std::string>{"at(bob,spot1)", "lost_race(bob)", "at(alice,spot2)"});
  CHECK(state_order(g.built, 19) ==
        std::vector<std::string>{"at(alice,spot1)", "lost_race(alice)", "at(bob,spot2)"});

  REQUIRE(g.built.rounds.size() == 5);
  CHECK(g.built.rounds[1].root == 8);
  CHECK(g.built.rounds[2].root == 9);
  CHECK(g.built.rounds[3].root == 10);
  CHECK(g.built.rounds[4].root == 11);

  expect_valid(g.built);
}

TEST_CASE("announcement threshold grants the announced spot") {
  auto g = build_corpus("fishers", "fishers", Threshold::at(2), 10);
  const auto& game = g.built.game;

  REQUIRE(g.built.staging.roles.size() == 3);
  const Term& announcer_role = g.built.staging.roles[0];
  REQUIRE(announcer_role.args().size() == 2);
  CHECK(announcer_role.args()[1].to_string() == "announcer");
  std::string x = announcer_role.args()[0].to_string();
  REQUIRE((x == "alice" || x == "bob"));
  std::string y = x == "alice" ? "bob" : "alice";
  CHECK(labels(g.built.staging.roles) ==
        std::vector<std::string>{"role(" + x + ",announcer)", "role(alice,fisher)",
                                 "role(bob,fisher)"});

  REQUIRE(game.nodes.size() == 31);
  CHECK(game.terminals() == std::vector<int>{7, 8, 15, 16, 21, 23, 25, 27, 29, 31});

  CHECK(game.node(1).player == game.player_index(x));
  const InfoSet& announce_set = game.info_sets[static_cast<size_t>(game.node(1).info_set)];
  CHECK(labels(announce_set.actions) ==
        std::vector<std::string>{"announce_spot(spot1)", "announce_spot(spot2)"});

  CHECK(state_order(g.built, 2) ==
        std::vector<std::string>{"announced(" + x + ",spot1)", "at(alice,shore)",
                                 "at(bob,shore)"});
  CHECK(state_order(g.built, 3) ==
        std::vector<std::string>{"announced(" + x + ",spot2)", "at(alice,shore)",
                                 "at(bob,shore)"});

  const RoundRecord* spot1_announced = round_at(g.built, 2);
  REQUIRE(spot1_announced != nullptr);
  CHECK(spot1_announced->movers == std::vector<int>{0, 1});
  CHECK(labels(round_set(g.built, *spot1_announced, 0)->actions) ==
        std::vector<std::string>{"go_to_spot(spot1)", "go_to_spot(spot2)"});
  CHECK(spot1_announced->leaves == std::vector<int>{6, 7, 8, 10, 11});

  CHECK(game.node(6).kind == NodeKind::Decision);
  CHECK(node_state(g.built, 6) ==
        std::set<std::string>{"lost_race(" + y + ")", "at(alice,spot1)", "at(bob,spot1)",
                              "announced(" + x + ",spot1)"});
  CHECK(node_state(g.built, 7) == std::set<std::string>{"at(alice,spot1)", "at(bob,spot2)",
                                                        "announced(" + x + ",spot1)"});
  CHECK(node_state(g.built, 8) == std::set<std::string>{"at(alice,spot2)", "at(bob,spot1)",
                                                        "announced(" + x + ",spot1)"});
  CHECK(game.node(9).kind == NodeKind::Chance);
  CHECK(game.node(9).children == std::vector<int>{10, 11});
  CHECK(game.node(10).chance_prob == make_rational(8, 13));
  CHECK(node_state(g.built, 10) ==
        std::set<std::string>{"lost_race(bob)", "at(alice,spot2)", "at(bob,spot2)",
                              "announced(" + x + ",spot1)"});
  CHECK(game.node(11).chance_prob == make_rational(5, 13));

  CHECK(game.node(14).kind == NodeKind::Chance);
  CHECK(game.node(14).children == std::vector<int>{18, 19});
  CHECK(node_state(g.built, 17) ==
        std::set<std::string>{"lost_race(" + y + ")", "at(alice,spot2)", "at(bob,spot2)",
                              "announced(" + x + ",spot2)"});

  const RoundRecord* ceded = round_at(g.built, 6);
  REQUIRE(ceded != nullptr);
  CHECK(labels(round_set(g.built, *ceded, game.player_index(x))->actions) ==
        std::vector<std::string>{"stay"});
  CHECK(labels(round_set(g.built, *ceded, game.player_index(y))->actions) ==
        std::vector<std::string>{"leave"});

  CHECK(node_state(g.built, 21) ==
        std::set<std::string>{"at(" + y + ",spot2)", "lost_race(" + y + ")", "at(" + x + ",spot1)",
                              "announced(" + x + ",spot1)"});
  CHECK(node_state(g.built, 23) ==
        std::set<std::string>{"at(bob,spot1)", "lost_race(bob)", "at(alice,spot2)",
                              "announced(" + x + ",spot1)"});
  CHECK(node_state(g.built, 25) ==
        std::set<std::string>{"at(alice,spot1)", "lost_race(alice)", "at(bob,spot2)",
                              "announced(" + x + ",spot1)"});
  CHECK(node_state(g.built, 27) ==
        std::set<std::string>{"at(" + y + ",spot1)", "lost_race(" + y + ")", "at(" + x + ",spot2)",
                              "announced(" + x + ",spot2)"});
  CHECK(node_state(g.built, 29) ==
        std::set<std::string>{"at(bob,spot2)", "lost_race(bob)", "at(alice,spot1)",
                              "announced(" + x + ",spot2)"});
  CHECK(node_state(g.built, 31) ==
        std::set<std::string>{"at(alice,spot2)", "lost_race(alice)", "at(bob,spot1)",
                              "announced(" + x + ",spot2)"});

  REQUIRE(g.built.rounds.size() == 9);
  std::vector<int> roots;
  for (const auto& r : g.built.rounds) roots.push_back(r.root);
  CHECK(roots == std::vector<int>{1, 2, 3, 6, 10, 11, 17, 18, 19});

  expect_valid(g.built);
}

TEST_CASE("round cap truncates expansion") {
  auto zero = build_corpus("ipd", "ipd", Threshold::at(0), 0);
  CHECK(zero.built.game.nodes.size() == 1);
  CHECK(zero.built.rounds.empty());
  CHECK(zero.built.game.node(1).kind == NodeKind::Leaf);
  CHECK(zero.built.annotation.round_index == std::map<int, int>{{1, 0}});
  expect_valid(zero.built);

  auto one = build_corpus("ipd", "ipd", Threshold::at(0), 1);
  CHECK(one.built.game.nodes.size() == 7);
  CHECK(one.built.game.terminals() == std::vector<int>{4, 5, 6, 7});
  CHECK(one.built.rounds.size() == 1);
  expect_valid(one.built);
}

TEST_CASE("node budget overflow names the frontier") {
  auto parsed = parse_corpus("ipd");
  REQUIRE(parsed.ok);
  auto kb = lower(parsed.description);
  BuildConfig cfg;
  cfg.id = parse_term("ipd");
  cfg.node_budget = 10;
  try {
    build_full_game(kb, cfg);
    FAIL("expected NodeBudgetError");
  } catch (const NodeBudgetError& e) {
    CHECK(std::string(e.what()).find("frontier") != std::string::npos);
  }
}

TEST_CASE("a situation admitting nobody cannot be staged") {
  auto parsed = parse_description(
      "agent(x).\n"
      "rule(t,boundary,0,if agent(A) then participates(A) where [A=y]).\n");
  REQUIRE(parsed.ok);
  auto kb = lower(parsed.description);
  BuildConfig cfg;
  cfg.id = parse_term("t");
  CHECK_THROWS_AS(build_full_game(kb, cfg), NoParticipantsError);
}

TEST_CASE("a situation without choices stays a single node") {
  auto parsed = parse_description(
      "agent(x).\n"
      "initially(f(0)).\n"
      "rule(t,boundary,0,if agent(A) then participates(A) where []).\n");
  REQUIRE(parsed.ok);
  auto kb = lower(parsed.description);
  BuildConfig cfg;
  cfg.id = parse_term("t");
  auto built = build_full_game(kb, cfg);
  CHECK(built.game.nodes.size() == 1);
  CHECK(built.rounds.empty());
  CHECK(state_order(built, 1) == std::vector<std::string>{"f(0)"});
}

TEST_CASE("json round trip preserves every build") {
  struct Config {
    std::string situation;
    std::string id;
    long thres;
  };
  std::vector<Config> configs = {
      {"metanorms", "metanorms", 0}, {"metanorms", "metanorms", 1}, {"ipd", "ipd", 0},
      {"ipd", "ipd", 1},             {"ipd", "ipd", 2},             {"fishers", "fishers", 0},
      {"fishers", "fishers", 1},     {"fishers", "fishers", 2},
  };
  for (const auto& c : configs) {
    CAPTURE(c.situation);
    CAPTURE(c.thres);
    auto g = build_corpus(c.situation, c.id, Threshold::at(c.thres), 10);
    auto text = export_json(g.built);
    auto back = import_json(text);
    CHECK(built_game_equal(g.built, back));
    CHECK(export_json(back) == text);

    auto again = build_corpus(c.situation, c.id, Threshold::at(c.thres), 10);
    CHECK(export_json(again.built) == text);

    auto dot = export_dot(g.built);
    CHECK(dot.find("digraph") != std::string::npos);
  }
}

TEST_CASE("announcer draw is seeded") {
  auto a = build_corpus("fishers", "fishers", Threshold::at(2), 10, 0);
  auto b = build_corpus("fishers", "fishers", Threshold::at(2), 10, 0);
  CHECK(export_json(a.built) == export_json(b.built));

  auto other = build_corpus("fishers", "fishers", Threshold::at(2), 10, 7);
  CHECK(other.built.game.nodes.size() == 31);
  expect_valid(other.built);
}
