#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "logicforge/errors.hpp"
#include "logicforge/families/causal_chain.hpp"
#include "logicforge/families/maze_paths.hpp"
#include "logicforge/families/rect_paint.hpp"
#include "logicforge/families/seal_decode.hpp"
#include "logicforge/families/truth_teller.hpp"
#include "logicforge/generator.hpp"
#include "logicforge/rng.hpp"
#include "logicforge/templating.hpp"

namespace logicforge {

// Everything the pipeline needs to know about one task family: its
// descriptor, the paired input/solution functions, an independent
// brute-force oracle, and the shipped template variants.
struct Family {
  TaskDescriptor descriptor;
  std::function<FamilyPayload(Rng&, const ParamBag&)> draw;
  std::function<SolveOutcome(const FamilyPayload&)> solve;
  std::function<SolveOutcome(const FamilyPayload&)> oracle;
  std::function<bool(const FamilyPayload&)> oracle_tractable;
  std::function<SlotFills(const FamilyPayload&, Language)> fills;
  std::vector<Template> templates;
  double knob_min = 1.0;    // smallest meaningful value of the tuning knob
  double knob_max = 1e6;    // calibration never proposes beyond this
};

inline constexpr int kUniquenessAttempts = 64;

class Registry {
 public:
  void add(Family family) {
    const std::string id = family.descriptor.family_id;
    if (families_.count(id)) throw Error(Errc::duplicate_id, "family " + id + " already registered");
    order_.push_back(id);
    families_.emplace(id, std::move(family));
  }

  bool has(const std::string& family_id) const { return families_.count(family_id) > 0; }

  const Family& family(const std::string& family_id) const {
    auto it = families_.find(family_id);
    if (it == families_.end()) {
      throw Error(Errc::unknown_family,
                  family_id + " (registered: " + text::join(order_, ", ") + ")");
    }
    return it->second;
  }

  Family& family_mut(const std::string& family_id) {
    return const_cast<Family&>(static_cast<const Registry*>(this)->family(family_id));
  }

  const std::vector<std::string>& family_ids() const { return order_; }

  // Draws payloads until the induced problem has exactly one answer, each
  // attempt on its own derived sub-seed. The ladder row for `difficulty`
  // supplies the generator parameters.
  std::pair<InstanceParams, SlotFills> generate_params(const std::string& family_id, int difficulty,
                                                       std::uint64_t seed, Language language) const {
    return generate_with_ladder(family_id, family(family_id).descriptor.ladder, difficulty, seed,
                                language);
  }

  // Same, but against a caller-supplied ladder (used while calibrating).
  std::pair<InstanceParams, SlotFills> generate_with_ladder(const std::string& family_id,
                                                            const DifficultyLadder& ladder,
                                                            int difficulty, std::uint64_t seed,
                                                            Language language) const {
    const Family& fam = family(family_id);
    if (!fam.descriptor.supports(language)) {
      throw Error(Errc::unsupported_language,
                  family_id + " does not support " + to_string(language));
    }
    if (difficulty < DifficultyLadder::kMinLevel || difficulty > DifficultyLadder::kMaxLevel ||
        !ladder.has_level(difficulty)) {
      throw Error(Errc::config_error, "difficulty " + std::to_string(difficulty) + " outside ladder");
    }
    const ParamBag& level_params = ladder.at(difficulty);
    for (int attempt = 0; attempt < kUniquenessAttempts; ++attempt) {
      Rng rng(derive_seed(seed, family_id, static_cast<std::uint64_t>(attempt)));
      FamilyPayload payload = fam.draw(rng, level_params);
      if (fam.solve(payload).unique()) {
        InstanceParams params{family_id, seed, difficulty, std::move(payload)};
        SlotFills f = fam.fills(params.payload, language);
        return {std::move(params), std::move(f)};
      }
    }
    throw Error(Errc::uniqueness_exhausted,
                family_id + " difficulty " + std::to_string(difficulty) + " seed " +
                    std::to_string(seed) + ": no unique-answer instance in " +
                    std::to_string(kUniquenessAttempts) + " attempts");
  }

  GroundTruth solve(const InstanceParams& params) const {
    return unwrap(family(params.family_id).solve(params.payload), params.family_id);
  }

  GroundTruth oracle_solve(const InstanceParams& params) const {
    return unwrap(family(params.family_id).oracle(params.payload), params.family_id);
  }

  bool oracle_tractable(const InstanceParams& params) const {
    return family(params.family_id).oracle_tractable(params.payload);
  }

  SlotFills fills(const InstanceParams& params, Language language) const {
    return family(params.family_id).fills(params.payload, language);
  }

  const Template& pick_template(const std::string& family_id, Language language,
                                std::uint64_t seed) const {
    return logicforge::pick_template(family(family_id).templates, family_id, language, seed);
  }

  const Template& template_by_id(const std::string& template_id) const {
    for (const auto& [id, fam] : families_) {
      for (const auto& t : fam.templates) {
        if (t.template_id == template_id) return t;
      }
    }
    throw Error(Errc::config_error, "unknown template " + template_id);
  }

 private:
  static GroundTruth unwrap(const SolveOutcome& outcome, const std::string& family_id) {
    switch (outcome.status) {
      case SolveOutcome::Status::ok: return *outcome.truth;
      case SolveOutcome::Status::no_solution:
        throw Error(Errc::no_solution, family_id + ": instance has no consistent answer");
      case SolveOutcome::Status::multiple_solutions:
        throw Error(Errc::multiple_solutions, family_id + ": instance admits several answers");
    }
    throw Error(Errc::no_solution, family_id);
  }

  std::map<std::string, Family> families_;
  std::vector<std::string> order_;
};

namespace detail {

template <class Params>
Family bind_family(TaskDescriptor descriptor, Params (*draw)(Rng&, const ParamBag&),
                   SolveOutcome (*solve)(const Params&), SolveOutcome (*oracle)(const Params&),
                   bool (*tractable)(const Params&), SlotFills (*fills)(const Params&, Language),
                   std::vector<Template> templates, double knob_min, double knob_max) {
  Family f;
  f.descriptor = std::move(descriptor);
  f.draw = [draw](Rng& rng, const ParamBag& bag) { return FamilyPayload{draw(rng, bag)}; };
  f.solve = [solve](const FamilyPayload& p) { return solve(std::get<Params>(p)); };
  f.oracle = [oracle](const FamilyPayload& p) { return oracle(std::get<Params>(p)); };
  f.oracle_tractable = [tractable](const FamilyPayload& p) { return tractable(std::get<Params>(p)); };
  f.fills = [fills](const FamilyPayload& p, Language lang) { return fills(std::get<Params>(p), lang); };
  f.templates = std::move(templates);
  f.knob_min = knob_min;
  f.knob_max = knob_max;
  return f;
}

} // namespace detail

// The five shipped families. New families plug in through Registry::add with
// the same Family shape.
inline Registry builtin_registry() {
  Registry r;
  r.add(detail::bind_family<TruthTellerParams>(
      truth_teller::make_descriptor(), truth_teller::draw, truth_teller::solve,
      truth_teller::oracle, truth_teller::oracle_tractable, truth_teller::fills,
      truth_teller::templates(), 1.0, 200.0));
  r.add(detail::bind_family<MazePathsParams>(
      maze_paths::make_descriptor(), maze_paths::draw, maze_paths::solve, maze_paths::oracle,
      maze_paths::oracle_tractable, maze_paths::fills, maze_paths::templates(), 2.0, 50.0));
  r.add(detail::bind_family<SealDecodeParams>(
      seal_decode::make_descriptor(), seal_decode::draw, seal_decode::solve, seal_decode::oracle,
      seal_decode::oracle_tractable, seal_decode::fills, seal_decode::templates(), 4.0, 2000.0));
  r.add(detail::bind_family<RectPaintParams>(
      rect_paint::make_descriptor(), rect_paint::draw, rect_paint::solve, rect_paint::oracle,
      rect_paint::oracle_tractable, rect_paint::fills, rect_paint::templates(), 1.0, 64.0));
  r.add(detail::bind_family<CausalChainParams>(
      causal_chain::make_descriptor(), causal_chain::draw, causal_chain::solve,
      causal_chain::oracle, causal_chain::oracle_tractable, causal_chain::fills,
      causal_chain::templates(), 2.0, 16.0));
  return r;
}

} // namespace logicforge
