#include "asl/export.hpp"

#include <sstream>

#include <json.hpp>

#include "asl/errors.hpp"
#include "asl/parser.hpp"

namespace asl {

using ordered_json = nlohmann::ordered_json;

namespace {

std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

std::string fluent_label(const std::vector<Term>& fluents) {
  auto ordered = canonical_fluent_order(fluents);
  std::ostringstream out;
  for (size_t i = 0; i < ordered.size(); ++i) {
    if (i) out << "\\n";
    out << dot_escape(ordered[i].to_string());
  }
  return out.str();
}

const char* kind_name(NodeKind k) {
  switch (k) {
    case NodeKind::Decision: return "decision";
    case NodeKind::Chance: return "chance";
    case NodeKind::Leaf: return "leaf";
  }
  return "leaf";
}

NodeKind kind_from_name(const std::string& name) {
  if (name == "decision") return NodeKind::Decision;
  if (name == "chance") return NodeKind::Chance;
  if (name == "leaf") return NodeKind::Leaf;
  throw UnsupportedFormatError("unknown node kind " + name);
}

ordered_json rational_json(const Rational& r) {
  ordered_json out;
  out["num"] = boost::multiprecision::numerator(r).str();
  out["den"] = boost::multiprecision::denominator(r).str();
  return out;
}

Rational rational_from_json(const nlohmann::json& v) {
  if (v.is_number_integer()) return make_rational(v.get<std::int64_t>());
  return Rational(BigInt(v.at("num").get<std::string>()), BigInt(v.at("den").get<std::string>()));
}

}  // namespace

std::string export_dot(const BuiltGame& built) {
  const ExtensiveGame& g = built.game;
  std::ostringstream out;
  out << "digraph game {\n";
  out << "  rankdir=TB;\n";
  out << "  node [fontsize=10];\n";
  for (const auto& n : g.nodes) {
    out << "  n" << n.id << " [";
    auto fl = built.annotation.fluents.find(n.id);
    std::ostringstream label;
    label << n.id;
    if (n.kind == NodeKind::Decision) {
      label << " " << dot_escape(g.players[static_cast<size_t>(n.player)]);
    }
    if (fl != built.annotation.fluents.end() && !fl->second.empty()) {
      label << "\\n" << fluent_label(fl->second);
    }
    auto u = g.utilities.find(n.id);
    if (u != g.utilities.end()) {
      label << "\\n(";
      for (size_t i = 0; i < u->second.size(); ++i) {
        if (i) label << ", ";
        label << rational_to_string(u->second[i]);
      }
      label << ")";
    }
    out << "label=\"" << label.str() << "\"";
    if (n.children.empty()) {
      out << ", shape=box";
    } else if (n.kind == NodeKind::Chance) {
      out << ", shape=diamond";
    } else {
      out << ", shape=ellipse";
    }
    out << "];\n";
  }
  for (const auto& n : g.nodes) {
    for (int c : n.children) {
      const Node& child = g.node(c);
      out << "  n" << n.id << " -> n" << c;
      if (n.kind == NodeKind::Decision) {
        out << " [label=\"" << dot_escape(child.action.to_string()) << "\"]";
      } else if (n.kind == NodeKind::Chance) {
        out << " [label=\"" << dot_escape(render_decimal(child.chance_prob, 2)) << "\"]";
      }
      out << ";\n";
    }
  }
  for (const auto& w : g.info_sets) {
    for (size_t i = 0; i + 1 < w.nodes.size(); ++i) {
      out << "  n" << w.nodes[i] << " -> n" << w.nodes[i + 1]
          << " [style=dashed, dir=none, constraint=false];\n";
    }
  }
  out << "}\n";
  return out.str();
}

std::string export_json(const BuiltGame& built) {
  const ExtensiveGame& g = built.game;
  ordered_json doc;
  doc["format"] = "asl-game";
  doc["version"] = 1;

  ordered_json players = ordered_json::array();
  for (const auto& p : g.players) players.push_back(p);
  doc["players"] = players;

  ordered_json nodes = ordered_json::array();
  for (const auto& n : g.nodes) {
    ordered_json entry;
    entry["id"] = n.id;
    entry["kind"] = kind_name(n.kind);
    entry["parent"] = n.parent;
    ordered_json children = ordered_json::array();
    for (int c : n.children) children.push_back(c);
    entry["children"] = children;
    if (n.kind == NodeKind::Decision) {
      entry["player"] = n.player;
      entry["info_set"] = n.info_set;
    }
    if (n.parent != 0) {
      const Node& parent = g.node(n.parent);
      if (parent.kind == NodeKind::Decision) entry["action"] = n.action.to_string();
      if (parent.kind == NodeKind::Chance) entry["prob"] = rational_json(n.chance_prob);
    }
    nodes.push_back(std::move(entry));
  }
  doc["nodes"] = nodes;

  ordered_json info_sets = ordered_json::array();
  for (const auto& w : g.info_sets) {
    ordered_json entry;
    entry["player"] = w.player;
    ordered_json ns = ordered_json::array();
    for (int id : w.nodes) ns.push_back(id);
    entry["nodes"] = ns;
    ordered_json actions = ordered_json::array();
    for (const auto& a : w.actions) actions.push_back(a.to_string());
    entry["actions"] = actions;
    info_sets.push_back(std::move(entry));
  }
  doc["info_sets"] = info_sets;

  ordered_json rounds = ordered_json::array();
  for (const auto& r : built.rounds) {
    ordered_json entry;
    entry["root"] = r.root;
    entry["index"] = r.index;
    ordered_json movers = ordered_json::array();
    for (int m : r.movers) movers.push_back(m);
    entry["movers"] = movers;
    ordered_json sets = ordered_json::array();
    for (int w : r.info_sets) sets.push_back(w);
    entry["info_sets"] = sets;
    ordered_json leaves = ordered_json::array();
    for (int z : r.leaves) leaves.push_back(z);
    entry["leaves"] = leaves;
    rounds.push_back(std::move(entry));
  }
  doc["rounds"] = rounds;

  ordered_json states = ordered_json::array();
  for (const auto& [id, fluents] : built.annotation.fluents) {
    ordered_json entry;
    entry["node"] = id;
    entry["round_index"] = built.annotation.round_index.at(id);
    ordered_json fl = ordered_json::array();
    for (const auto& f : fluents) fl.push_back(f.to_string());
    entry["fluents"] = fl;
    states.push_back(std::move(entry));
  }
  doc["states"] = states;

  ordered_json utilities = ordered_json::array();
  for (const auto& [id, values] : g.utilities) {
    ordered_json entry;
    entry["node"] = id;
    ordered_json vals = ordered_json::array();
    for (const auto& v : values) vals.push_back(rational_json(v));
    entry["values"] = vals;
    utilities.push_back(std::move(entry));
  }
  doc["utilities"] = utilities;

  ordered_json staging;
  ordered_json participants = ordered_json::array();
  for (const auto& p : built.staging.participants) participants.push_back(p.to_string());
  staging["participants"] = participants;
  ordered_json roles = ordered_json::array();
  for (const auto& r : built.staging.roles) roles.push_back(r.to_string());
  staging["roles"] = roles;
  ordered_json names = ordered_json::array();
  for (const auto& p : built.staging.players) names.push_back(p);
  staging["players"] = names;
  doc["staging"] = staging;

  return doc.dump(2) + "\n";
}

BuiltGame import_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw UnsupportedFormatError(std::string("game file: ") + e.what());
  }
  try {
    if (doc.value("format", "") != "asl-game") {
      throw UnsupportedFormatError("expected format asl-game");
    }
    if (doc.value("version", 0) != 1) {
      throw UnsupportedFormatError("unsupported version");
    }

    BuiltGame built;
    ExtensiveGame& g = built.game;
    for (const auto& p : doc.at("players")) g.players.push_back(p.get<std::string>());

    for (const auto& entry : doc.at("nodes")) {
      Node n;
      n.id = entry.at("id").get<int>();
      n.kind = kind_from_name(entry.at("kind").get<std::string>());
      n.parent = entry.at("parent").get<int>();
      for (const auto& c : entry.at("children")) n.children.push_back(c.get<int>());
      if (entry.contains("player")) n.player = entry["player"].get<int>();
      if (entry.contains("info_set")) n.info_set = entry["info_set"].get<int>();
      if (entry.contains("action")) n.action = parse_term(entry["action"].get<std::string>());
      if (entry.contains("prob")) n.chance_prob = rational_from_json(entry["prob"]);
      if (n.id != static_cast<int>(g.nodes.size()) + 1) {
        throw UnsupportedFormatError("node ids must be dense and ascending");
      }
      g.nodes.push_back(std::move(n));
    }

    for (const auto& entry : doc.at("info_sets")) {
      InfoSet w;
      w.player = entry.at("player").get<int>();
      for (const auto& id : entry.at("nodes")) w.nodes.push_back(id.get<int>());
      for (const auto& a : entry.at("actions")) {
        w.actions.push_back(parse_term(a.get<std::string>()));
      }
      g.info_sets.push_back(std::move(w));
    }

    for (const auto& entry : doc.at("rounds")) {
      RoundRecord r;
      r.root = entry.at("root").get<int>();
      r.index = entry.at("index").get<int>();
      for (const auto& m : entry.at("movers")) r.movers.push_back(m.get<int>());
      for (const auto& w : entry.at("info_sets")) r.info_sets.push_back(w.get<int>());
      for (const auto& z : entry.at("leaves")) r.leaves.push_back(z.get<int>());
      built.rounds.push_back(std::move(r));
    }

    for (const auto& entry : doc.at("states")) {
      int id = entry.at("node").get<int>();
      built.annotation.round_index[id] = entry.at("round_index").get<int>();
      std::vector<Term> fluents;
      for (const auto& f : entry.at("fluents")) {
        fluents.push_back(parse_term(f.get<std::string>()));
      }
      built.annotation.fluents[id] = std::move(fluents);
    }

    for (const auto& entry : doc.at("utilities")) {
      std::vector<Rational> values;
      for (const auto& v : entry.at("values")) values.push_back(rational_from_json(v));
      g.utilities[entry.at("node").get<int>()] = std::move(values);
    }

    if (doc.contains("staging")) {
      const auto& staging = doc["staging"];
      for (const auto& p : staging.at("participants")) {
        built.staging.participants.push_back(parse_term(p.get<std::string>()));
      }
      for (const auto& r : staging.at("roles")) {
        built.staging.roles.push_back(parse_term(r.get<std::string>()));
      }
      for (const auto& p : staging.at("players")) {
        built.staging.players.push_back(p.get<std::string>());
      }
    }
    return built;
  } catch (const nlohmann::json::exception& e) {
    throw UnsupportedFormatError(std::string("game file: ") + e.what());
  }
}

bool built_game_equal(const BuiltGame& a, const BuiltGame& b) {
  const ExtensiveGame& ga = a.game;
  const ExtensiveGame& gb = b.game;
  if (ga.players != gb.players) return false;
  if (ga.nodes.size() != gb.nodes.size()) return false;
  for (size_t i = 0; i < ga.nodes.size(); ++i) {
    const Node& x = ga.nodes[i];
    const Node& y = gb.nodes[i];
    if (x.id != y.id || x.kind != y.kind || x.parent != y.parent || x.children != y.children ||
        x.player != y.player || x.info_set != y.info_set) {
      return false;
    }
    if (x.parent != 0) {
      const Node& parent = ga.node(x.parent);
      if (parent.kind == NodeKind::Decision && x.action != y.action) return false;
      if (parent.kind == NodeKind::Chance && x.chance_prob != y.chance_prob) return false;
    }
  }
  if (ga.info_sets.size() != gb.info_sets.size()) return false;
  for (size_t i = 0; i < ga.info_sets.size(); ++i) {
    if (ga.info_sets[i].player != gb.info_sets[i].player) return false;
    if (ga.info_sets[i].nodes != gb.info_sets[i].nodes) return false;
    if (ga.info_sets[i].actions != gb.info_sets[i].actions) return false;
  }
  if (ga.utilities != gb.utilities) return false;
  if (a.annotation.fluents != b.annotation.fluents) return false;
  if (a.annotation.round_index != b.annotation.round_index) return false;
  if (a.rounds.size() != b.rounds.size()) return false;
  for (size_t i = 0; i < a.rounds.size(); ++i) {
    const RoundRecord& x = a.rounds[i];
    const RoundRecord& y = b.rounds[i];
    if (x.root != y.root || x.index != y.index || x.movers != y.movers ||
        x.info_sets != y.info_sets || x.leaves != y.leaves) {
      return false;
    }
  }
  if (a.staging.participants != b.staging.participants) return false;
  if (a.staging.roles != b.staging.roles) return false;
  if (a.staging.players != b.staging.players) return false;
  return true;
}

}  // namespace asl
