#pragma once

#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "logicforge/errors.hpp"

namespace logicforge {

// --- truth_teller -----------------------------------------------------------

enum class Quantifier { exactly, at_least };
enum class ClaimSubject { truth, lie };

struct TruthStatement {
  Quantifier quant = Quantifier::exactly;
  ClaimSubject about = ClaimSubject::truth;
  int count = 0;

  bool operator==(const TruthStatement&) const = default;
};

struct TruthTellerParams {
  std::vector<std::string> names;            // one speaker per statement
  std::vector<TruthStatement> statements;

  bool operator==(const TruthTellerParams&) const = default;
  int speaker_count() const { return static_cast<int>(names.size()); }
};

// --- maze_paths --------------------------------------------------------------

enum class Direction { up, down, left, right };

struct MazePathsParams {
  int height = 0;
  int width = 0;
  std::vector<std::string> grid;             // '.' open, '#' wall; row-major
  std::vector<std::string> path_ids;         // "A", "B", ...
  std::vector<std::vector<Direction>> paths;

  bool operator==(const MazePathsParams&) const = default;
};

// --- seal_decode -------------------------------------------------------------

struct SealDecodeParams {
  std::string seal;

  bool operator==(const SealDecodeParams&) const = default;
};

// --- rect_paint ----------------------------------------------------------------

struct RectPaintParams {
  int height = 0;
  int width = 0;
  int num_colors = 0;
  std::vector<std::vector<int>> target;      // colors 1..num_colors

  bool operator==(const RectPaintParams&) const = default;
};

// --- causal_chain ---------------------------------------------------------------

struct CausalEvent {
  std::string id;                            // e.g. "B17"; language-neutral
  std::string desc_en;
  std::string desc_zh;

  bool operator==(const CausalEvent&) const = default;
};

// A pairwise ordering clue between two events, by index into `events`.
// after_form=false: "without X, Y is unlikely"; true: "after X, Y occurs shortly".
struct CausalCondition {
  int from = 0;
  int to = 0;
  bool after_form = false;

  bool operator==(const CausalCondition&) const = default;
};

struct CausalChainParams {
  std::vector<CausalEvent> events;           // presentation order (shuffled)
  std::vector<CausalCondition> conditions;

  bool operator==(const CausalChainParams&) const = default;
};

using FamilyPayload =
    std::variant<TruthTellerParams, MazePathsParams, SealDecodeParams, RectPaintParams,
                 CausalChainParams>;

// --- JSON round-trip ---------------------------------------------------------

namespace payload_json {

inline const char* dir_name(Direction d) {
  switch (d) {
    case Direction::up: return "up";
    case Direction::down: return "down";
    case Direction::left: return "left";
    case Direction::right: return "right";
  }
  return "up";
}

inline Direction dir_from(const std::string& s) {
  if (s == "up") return Direction::up;
  if (s == "down") return Direction::down;
  if (s == "left") return Direction::left;
  if (s == "right") return Direction::right;
  throw Error(Errc::config_error, "unknown direction '" + s + "'");
}

inline nlohmann::ordered_json to_json(const TruthTellerParams& p) {
  nlohmann::ordered_json j;
  j["names"] = p.names;
  nlohmann::ordered_json stmts = nlohmann::ordered_json::array();
  for (const auto& s : p.statements) {
    stmts.push_back({{"quant", s.quant == Quantifier::exactly ? "exactly" : "at_least"},
                     {"about", s.about == ClaimSubject::truth ? "truth" : "lie"},
                     {"count", s.count}});
  }
  j["statements"] = std::move(stmts);
  return j;
}

inline TruthTellerParams truth_teller_from_json(const nlohmann::json& j) {
  TruthTellerParams p;
  p.names = j.at("names").get<std::vector<std::string>>();
  for (const auto& s : j.at("statements")) {
    TruthStatement st;
    st.quant = s.at("quant") == "exactly" ? Quantifier::exactly : Quantifier::at_least;
    st.about = s.at("about") == "truth" ? ClaimSubject::truth : ClaimSubject::lie;
    st.count = s.at("count").get<int>();
    p.statements.push_back(st);
  }
  return p;
}

inline nlohmann::ordered_json to_json(const MazePathsParams& p) {
  nlohmann::ordered_json j;
  j["height"] = p.height;
  j["width"] = p.width;
  j["grid"] = p.grid;
  j["path_ids"] = p.path_ids;
  nlohmann::ordered_json paths = nlohmann::ordered_json::array();
  for (const auto& path : p.paths) {
    nlohmann::ordered_json moves = nlohmann::ordered_json::array();
    for (Direction d : path) moves.push_back(dir_name(d));
    paths.push_back(std::move(moves));
  }
  j["paths"] = std::move(paths);
  return j;
}

inline MazePathsParams maze_paths_from_json(const nlohmann::json& j) {
  MazePathsParams p;
  p.height = j.at("height").get<int>();
  p.width = j.at("width").get<int>();
  p.grid = j.at("grid").get<std::vector<std::string>>();
  p.path_ids = j.at("path_ids").get<std::vector<std::string>>();
  for (const auto& path : j.at("paths")) {
    std::vector<Direction> moves;
    for (const auto& m : path) moves.push_back(dir_from(m.get<std::string>()));
    p.paths.push_back(std::move(moves));
  }
  return p;
}

inline nlohmann::ordered_json to_json(const SealDecodeParams& p) {
  return nlohmann::ordered_json{{"seal", p.seal}};
}

inline SealDecodeParams seal_decode_from_json(const nlohmann::json& j) {
  return SealDecodeParams{j.at("seal").get<std::string>()};
}

inline nlohmann::ordered_json to_json(const RectPaintParams& p) {
  nlohmann::ordered_json j;
  j["height"] = p.height;
  j["width"] = p.width;
  j["num_colors"] = p.num_colors;
  j["target"] = p.target;
  return j;
}

inline RectPaintParams rect_paint_from_json(const nlohmann::json& j) {
  RectPaintParams p;
  p.height = j.at("height").get<int>();
  p.width = j.at("width").get<int>();
  p.num_colors = j.at("num_colors").get<int>();
  p.target = j.at("target").get<std::vector<std::vector<int>>>();
  return p;
}

inline nlohmann::ordered_json to_json(const CausalChainParams& p) {
  nlohmann::ordered_json j;
  nlohmann::ordered_json events = nlohmann::ordered_json::array();
  for (const auto& e : p.events) {
    events.push_back({{"id", e.id}, {"desc_en", e.desc_en}, {"desc_zh", e.desc_zh}});
  }
  j["events"] = std::move(events);
  nlohmann::ordered_json conds = nlohmann::ordered_json::array();
  for (const auto& c : p.conditions) {
    conds.push_back({{"from", c.from}, {"to", c.to}, {"form", c.after_form ? "after" : "without"}});
  }
  j["conditions"] = std::move(conds);
  return j;
}

inline CausalChainParams causal_chain_from_json(const nlohmann::json& j) {
  CausalChainParams p;
  for (const auto& e : j.at("events")) {
    p.events.push_back({e.at("id").get<std::string>(), e.at("desc_en").get<std::string>(),
                        e.at("desc_zh").get<std::string>()});
  }
  for (const auto& c : j.at("conditions")) {
    p.conditions.push_back(
        {c.at("from").get<int>(), c.at("to").get<int>(), c.at("form") == "after"});
  }
  return p;
}

} // namespace payload_json

inline nlohmann::ordered_json payload_to_json(const FamilyPayload& payload) {
  return std::visit([](const auto& p) { return payload_json::to_json(p); }, payload);
}

inline FamilyPayload payload_from_json(const std::string& family_id, const nlohmann::json& j) {
  if (family_id == "truth_teller") return payload_json::truth_teller_from_json(j);
  if (family_id == "maze_paths") return payload_json::maze_paths_from_json(j);
  if (family_id == "seal_decode") return payload_json::seal_decode_from_json(j);
  if (family_id == "rect_paint") return payload_json::rect_paint_from_json(j);
  if (family_id == "causal_chain") return payload_json::causal_chain_from_json(j);
  throw Error(Errc::unknown_family, family_id);
}

} // namespace logicforge
