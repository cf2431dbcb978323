#pragma once

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "logicforge/errors.hpp"
#include "logicforge/parallel.hpp"
#include "logicforge/registry.hpp"
#include "logicforge/rewards.hpp"
#include "logicforge/templating.hpp"
#include "logicforge/version.hpp"

namespace logicforge {

inline std::string record_id(const std::string& family_id, std::uint64_t seed, int difficulty,
                             Language language, const std::string& template_id) {
  std::uint64_t h = hash_bytes(family_id);
  h = mix_u64(h, seed);
  h = mix_u64(h, static_cast<std::uint64_t>(difficulty));
  h = mix_u64(h, hash_bytes(to_string(language)));
  h = mix_u64(h, hash_bytes(template_id));
  h = derive_seed(h, "record_id");
  std::ostringstream out;
  out << std::hex << std::setw(16) << std::setfill('0') << h;
  return out.str();
}

struct DatasetRecord {
  std::string id;
  std::string family_id;
  TaxonomyLabel taxonomy;
  int difficulty = 1;
  Language language = Language::en;
  std::string template_id;
  std::string question;
  std::string answer;
  AnswerKind answer_kind = AnswerKind::single_value;
  ScoringMethod scoring_method = ScoringMethod::accuracy;
  InstanceParams params;
  std::string generator_version;
};

// Keys are emitted in a fixed order and lines sorted by id, so the same
// inputs always produce byte-identical files.
inline std::string record_to_line(const DatasetRecord& r) {
  nlohmann::ordered_json j;
  j["id"] = r.id;
  j["family_id"] = r.family_id;
  j["taxonomy"] = {{"task_domain", to_string(r.taxonomy.task_domain)},
                   {"core_ability", to_string(r.taxonomy.core_ability)},
                   {"difficulty_source", to_string(r.taxonomy.difficulty_source)}};
  j["difficulty"] = r.difficulty;
  j["language"] = to_string(r.language);
  j["template_id"] = r.template_id;
  j["question"] = r.question;
  j["answer"] = r.answer;
  j["answer_kind"] = to_string(r.answer_kind);
  j["scoring_method"] = to_string(r.scoring_method);
  j["params"] = instance_params_to_json(r.params);
  j["generator_version"] = r.generator_version;
  return j.dump();
}

inline DatasetRecord record_from_json(const nlohmann::json& j) {
  DatasetRecord r;
  r.id = j.at("id").get<std::string>();
  r.family_id = j.at("family_id").get<std::string>();
  const auto& tax = j.at("taxonomy");
  r.taxonomy.task_domain = task_domain_from_string(tax.at("task_domain").get<std::string>());
  r.taxonomy.core_ability = core_ability_from_string(tax.at("core_ability").get<std::string>());
  r.taxonomy.difficulty_source =
      difficulty_source_from_string(tax.at("difficulty_source").get<std::string>());
  r.difficulty = j.at("difficulty").get<int>();
  r.language = language_from_string(j.at("language").get<std::string>());
  r.template_id = j.at("template_id").get<std::string>();
  r.question = j.at("question").get<std::string>();
  r.answer = j.at("answer").get<std::string>();
  r.answer_kind = answer_kind_from_string(j.at("answer_kind").get<std::string>());
  r.scoring_method = scoring_method_from_string(j.at("scoring_method").get<std::string>());
  r.params = instance_params_from_json(j.at("params"));
  r.generator_version = j.at("generator_version").get<std::string>();
  return r;
}

struct MixEntry {
  std::string family_id;
  int difficulty = 1;
  Language language = Language::en;
  int count = 0;
};

struct EmitOptions {
  std::uint64_t master_seed = 0;
  int parallelism = 1;
};

struct EmitReport {
  int total = 0;
  std::map<std::string, int> counts; // "family/level/lang" -> n
  std::string path;
};

inline DatasetRecord build_record(const Registry& registry, const std::string& family_id,
                                  int difficulty, Language language, std::uint64_t seed) {
  const Family& fam = registry.family(family_id);
  auto [params, fills] = registry.generate_params(family_id, difficulty, seed, language);
  const GroundTruth truth = registry.solve(params);
  const Template& tpl = registry.pick_template(family_id, language, seed);

  DatasetRecord r;
  r.family_id = family_id;
  r.taxonomy = fam.descriptor.taxonomy;
  r.difficulty = difficulty;
  r.language = language;
  r.template_id = tpl.template_id;
  r.question = compose_question(tpl, fills, fam.descriptor.answer_kind);
  r.answer = truth.canonical(language);
  r.answer_kind = fam.descriptor.answer_kind;
  r.scoring_method = fam.descriptor.scoring_method;
  r.params = std::move(params);
  r.generator_version = kVersion;
  r.id = record_id(family_id, seed, difficulty, language, r.template_id);
  return r;
}

inline EmitReport emit_dataset(const Registry& registry, const std::vector<MixEntry>& mix,
                               const EmitOptions& options, const std::string& out_path) {
  struct Slot {
    std::string family_id;
    int difficulty;
    Language language;
  };
  std::vector<Slot> slots;
  for (const auto& entry : mix) {
    if (!registry.has(entry.family_id)) registry.family(entry.family_id); // throws with listing
    for (int i = 0; i < entry.count; ++i) {
      slots.push_back({entry.family_id, entry.difficulty, entry.language});
    }
  }

  std::vector<DatasetRecord> records(slots.size());
  parallel_for(slots.size(), options.parallelism, [&](std::size_t index) {
    const Slot& slot = slots[index];
    const std::uint64_t seed =
        derive_seed(options.master_seed, slot.family_id, static_cast<std::uint64_t>(index));
    records[index] =
        build_record(registry, slot.family_id, slot.difficulty, slot.language, seed);
  });

  std::sort(records.begin(), records.end(),
            [](const DatasetRecord& a, const DatasetRecord& b) { return a.id < b.id; });
  std::set<std::string> ids;
  for (const auto& r : records) {
    if (!ids.insert(r.id).second) {
      throw Error(Errc::duplicate_id, "dataset id collision on " + r.id);
    }
  }

  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw Error(Errc::config_error, "cannot write " + out_path);
  EmitReport report;
  report.path = out_path;
  for (const auto& r : records) {
    out << record_to_line(r) << "\n";
    ++report.total;
    ++report.counts[r.family_id + "/L" + std::to_string(r.difficulty) + "/" +
                    to_string(r.language)];
  }
  return report;
}

struct VerifyMismatch {
  int line = 0;
  std::string field;
  std::string detail;
};

struct VerifyReport {
  int records = 0;
  std::vector<VerifyMismatch> mismatches;

  bool clean() const { return mismatches.empty(); }
};

// Re-derives every record from its stored params: the question must re-render
// identically and the answer must re-solve identically.
inline VerifyReport verify_dataset(const Registry& registry, const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::config_error, "cannot read " + path);
  VerifyReport report;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    DatasetRecord r;
    try {
      r = record_from_json(nlohmann::json::parse(line));
    } catch (const std::exception& e) {
      throw Error(Errc::malformed_line, "line " + std::to_string(line_no) + ": " + e.what());
    }
    ++report.records;
    auto mismatch = [&](const char* field, std::string detail) {
      report.mismatches.push_back({line_no, field, std::move(detail)});
    };

    const std::string expect_id =
        record_id(r.family_id, r.params.seed, r.difficulty, r.language, r.template_id);
    if (expect_id != r.id) mismatch("id", "expected " + expect_id);

    try {
      const Family& fam = registry.family(r.family_id);
      const GroundTruth truth = registry.solve(r.params);
      if (truth.canonical(r.language) != r.answer) {
        mismatch("answer", "re-solved to '" + truth.canonical(r.language) + "'");
      }
      const Template& tpl = registry.template_by_id(r.template_id);
      const SlotFills fills = registry.fills(r.params, r.language);
      const std::string question = compose_question(tpl, fills, fam.descriptor.answer_kind);
      if (question != r.question) mismatch("question", "re-render differs");
    } catch (const Error& e) {
      mismatch("params", e.what());
    }
  }
  return report;
}

// --- batch scoring (responses file -> scores file) ---

struct ScoreSummary {
  int scored = 0;
  int format_ok = 0;
  int unknown_ids = 0;
  double mean_total = 0.0;
  double min_total = 0.0;
  double max_total = 0.0;
};

inline ScoreSummary score_batch(const Registry& registry, const std::string& dataset_path,
                                const std::string& responses_path, RewardScheme scheme,
                                double format_bonus, const std::string& out_path) {
  std::ifstream data_in(dataset_path, std::ios::binary);
  if (!data_in) throw Error(Errc::config_error, "cannot read " + dataset_path);
  std::map<std::string, DatasetRecord> by_id;
  std::string line;
  int line_no = 0;
  while (std::getline(data_in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      DatasetRecord r = record_from_json(nlohmann::json::parse(line));
      by_id.emplace(r.id, std::move(r));
    } catch (const std::exception& e) {
      throw Error(Errc::malformed_line,
                  dataset_path + " line " + std::to_string(line_no) + ": " + e.what());
    }
  }

  std::ifstream resp_in(responses_path, std::ios::binary);
  if (!resp_in) throw Error(Errc::config_error, "cannot read " + responses_path);
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw Error(Errc::config_error, "cannot write " + out_path);

  ScoreSummary summary;
  double total_sum = 0.0;
  bool first = true;
  line_no = 0;
  while (std::getline(resp_in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::string id, response;
    try {
      const auto j = nlohmann::json::parse(line);
      id = j.at("id").get<std::string>();
      response = j.at("response").get<std::string>();
    } catch (const std::exception& e) {
      throw Error(Errc::malformed_line,
                  responses_path + " line " + std::to_string(line_no) + ": " + e.what());
    }
    const auto it = by_id.find(id);
    if (it == by_id.end()) {
      ++summary.unknown_ids;
      continue;
    }
    const DatasetRecord& r = it->second;
    const GroundTruth truth = registry.solve(r.params);
    const ExtractedAnswer extracted = extract_answer(response, r.answer_kind, r.language);
    const double s = extracted.parsed ? score(*extracted.parsed, truth, r.scoring_method) : 0.0;
    const RewardValue reward = total_reward(s, scheme, extracted.format_ok, format_bonus);

    nlohmann::ordered_json record;
    record["id"] = id;
    record["format_ok"] = extracted.format_ok;
    record["s"] = reward.s;
    record["scheme"] = to_string(scheme);
    record["mapped"] = reward.mapped;
    record["bonus"] = reward.bonus;
    record["total"] = reward.total;
    out << record.dump() << "\n";

    ++summary.scored;
    summary.format_ok += extracted.format_ok ? 1 : 0;
    total_sum += reward.total;
    summary.min_total = first ? reward.total : std::min(summary.min_total, reward.total);
    summary.max_total = first ? reward.total : std::max(summary.max_total, reward.total);
    first = false;
  }
  if (summary.scored > 0) summary.mean_total = total_sum / summary.scored;
  return summary;
}

} // namespace logicforge
