#pragma once

#include <string>

#include "asl/builder.hpp"
#include "asl/game.hpp"

namespace asl {

// Graphviz rendering: state-bearing nodes show their fluents (round roots as
// ellipses, terminals as boxes with utilities when assigned), decision edges
// carry action labels, chance edges carry probabilities, and nodes of one
// information set are linked by dashed unconstrained edges.
std::string export_dot(const BuiltGame& built);

// Self-describing JSON serialization of a built game; import reconstructs a
// structurally identical BuiltGame. Fluent lists keep insertion order.
std::string export_json(const BuiltGame& built);
BuiltGame import_json(const std::string& text);

bool built_game_equal(const BuiltGame& a, const BuiltGame& b);

}  // namespace asl
