#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "logicforge/answer.hpp"
#include "logicforge/lang.hpp"
#include "logicforge/payload.hpp"

namespace logicforge {

// The logical core of one problem instance. The payload alone determines the
// ground truth; seed and difficulty are kept for reproducibility metadata.
struct InstanceParams {
  std::string family_id;
  std::uint64_t seed = 0;
  int difficulty = 1;
  FamilyPayload payload;

  bool operator==(const InstanceParams&) const = default;
};

// Natural-language strings, one per template slot.
struct SlotFills {
  Language language = Language::en;
  std::vector<std::string> fills;

  bool operator==(const SlotFills&) const = default;
};

struct SolveOutcome {
  enum class Status { ok, no_solution, multiple_solutions };

  Status status = Status::ok;
  std::optional<GroundTruth> truth;

  static SolveOutcome solved(GroundTruth t) { return {Status::ok, std::move(t)}; }
  static SolveOutcome none() { return {Status::no_solution, std::nullopt}; }
  static SolveOutcome ambiguous() { return {Status::multiple_solutions, std::nullopt}; }

  bool unique() const { return status == Status::ok; }
};

inline nlohmann::ordered_json instance_params_to_json(const InstanceParams& p) {
  nlohmann::ordered_json j;
  j["family_id"] = p.family_id;
  j["seed"] = p.seed;
  j["difficulty"] = p.difficulty;
  j["payload"] = payload_to_json(p.payload);
  return j;
}

inline InstanceParams instance_params_from_json(const nlohmann::json& j) {
  InstanceParams p;
  p.family_id = j.at("family_id").get<std::string>();
  p.seed = j.at("seed").get<std::uint64_t>();
  p.difficulty = j.at("difficulty").get<int>();
  p.payload = payload_from_json(p.family_id, j.at("payload"));
  return p;
}

} // namespace logicforge
