#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "logicforge/errors.hpp"
#include "logicforge/model_adapter.hpp"
#include "logicforge/parallel.hpp"
#include "logicforge/registry.hpp"
#include "logicforge/rewards.hpp"
#include "logicforge/templating.hpp"

namespace logicforge {

// Target success rates at the anchor levels. Level 1 and level 10 targets sit
// on the boundary of what a stochastic model can produce, so they are judged
// one-sidedly (>= 1-tol, <= tol); mid anchors must land within the tolerance
// band on both sides.
struct AnchorTargets {
  std::map<int, double> targets = {{1, 1.00}, {3, 0.70}, {5, 0.50}, {7, 0.30}, {10, 0.00}};
  double tolerance = 0.10;
  int max_iterations = 20;
  int samples_per_probe = 200;

  void validate() const {
    if (tolerance <= 0.0 || tolerance >= 0.5) {
      throw Error(Errc::config_error, "tolerance must lie in (0, 0.5)");
    }
    if (targets.empty() || !targets.count(DifficultyLadder::kMinLevel) ||
        !targets.count(DifficultyLadder::kMaxLevel)) {
      throw Error(Errc::config_error, "anchor targets must include levels 1 and 10");
    }
    double prev = 2.0;
    for (const auto& [level, t] : targets) {
      if (level < DifficultyLadder::kMinLevel || level > DifficultyLadder::kMaxLevel) {
        throw Error(Errc::config_error, "anchor level outside 1..10");
      }
      if (t < 0.0 || t > 1.0) throw Error(Errc::config_error, "target outside [0,1]");
      if (t > prev) throw Error(Errc::config_error, "targets must be non-increasing in level");
      prev = t;
    }
    if (max_iterations < 1 || samples_per_probe < 1) {
      throw Error(Errc::config_error, "max_iterations and samples_per_probe must be >= 1");
    }
  }

  bool within(int level, double rate) const {
    const double target = targets.at(level);
    if (level == DifficultyLadder::kMinLevel && target >= 1.0 - 1e-12) {
      return rate >= 1.0 - tolerance;
    }
    if (level == DifficultyLadder::kMaxLevel && target <= 1e-12) {
      return rate <= tolerance;
    }
    return std::fabs(rate - target) <= tolerance;
  }
};

struct ProbeResult {
  double rate = 0.0;
  double half_width = 0.0; // 95% normal approximation; degenerates to 0 at p in {0,1}
  int successes = 0;
  int valid = 0;
  int transport_failures = 0;
};

struct ProbeOptions {
  Language language = Language::en;
  int parallelism = 1;
};

// Generates n instances at the level, queries the model, and scores each
// reply as strictly correct/incorrect via format-insensitive extraction.
// Transport failures leave the denominator and are reported separately.
inline ProbeResult probe_success_rate(const Registry& registry, const std::string& family_id,
                                      const DifficultyLadder& ladder, int level, Model& model,
                                      int n, std::uint64_t seed, const ProbeOptions& options = {}) {
  if (n < 1) throw Error(Errc::config_error, "probe needs n >= 1");
  const Family& fam = registry.family(family_id);

  std::vector<int> outcome(static_cast<std::size_t>(n), 0); // 1 ok, 0 wrong, -1 transport
  std::vector<std::string> errors(static_cast<std::size_t>(n));
  parallel_for(static_cast<std::size_t>(n), options.parallelism, [&](std::size_t j) {
    const std::uint64_t instance_seed =
        derive_seed(seed, "probe", static_cast<std::uint64_t>(level), static_cast<std::uint64_t>(j));
    auto [params, fills] =
        registry.generate_with_ladder(family_id, ladder, level, instance_seed, options.language);
    const GroundTruth truth = registry.solve(params);
    const Template& tpl = registry.pick_template(family_id, options.language, instance_seed);

    ModelRequest request;
    request.question = compose_question(tpl, fills, fam.descriptor.answer_kind);
    request.instance_id = family_id + "-L" + std::to_string(level) + "-" + std::to_string(j);
    request.instance_seed = instance_seed;
    request.language = options.language;
    request.answer_kind = fam.descriptor.answer_kind;
    request.level_params = ladder.at(level);
    request.truth = &truth;

    const ModelReply reply = model.answer(request);
    if (!reply.ok) {
      outcome[j] = -1;
      errors[j] = reply.error;
      return;
    }
    const ExtractedAnswer extracted = extract_answer(reply.text, fam.descriptor.answer_kind);
    outcome[j] = extracted.parsed && answers_equal(*extracted.parsed, truth.value) ? 1 : 0;
  });

  ProbeResult result;
  for (int o : outcome) {
    if (o < 0) {
      ++result.transport_failures;
    } else {
      ++result.valid;
      result.successes += o;
    }
  }
  if (result.valid == 0) {
    throw Error(Errc::probe_inconclusive,
                family_id + " level " + std::to_string(level) + ": all " + std::to_string(n) +
                    " probe calls failed in transport");
  }
  result.rate = static_cast<double>(result.successes) / static_cast<double>(result.valid);
  result.half_width =
      1.96 * std::sqrt(result.rate * (1.0 - result.rate) / static_cast<double>(result.valid));
  return result;
}

// Piecewise-linear interpolation of a knob across levels 1..10 from its
// anchor values; integral knobs round half-up.
inline std::map<int, double> interpolate_anchor_values(const std::map<int, double>& anchors,
                                                       bool integral) {
  if (!anchors.count(DifficultyLadder::kMinLevel) || !anchors.count(DifficultyLadder::kMaxLevel)) {
    throw Error(Errc::config_error, "anchors must include levels 1 and 10");
  }
  double prev = -std::numeric_limits<double>::infinity();
  for (const auto& [level, value] : anchors) {
    if (value < prev) {
      throw Error(Errc::anchor_inversion,
                  "anchor value decreases at level " + std::to_string(level));
    }
    prev = value;
  }
  std::map<int, double> full;
  auto lo = anchors.begin();
  auto hi = std::next(lo);
  for (int level = DifficultyLadder::kMinLevel; level <= DifficultyLadder::kMaxLevel; ++level) {
    while (hi != anchors.end() && level > hi->first) {
      lo = hi;
      ++hi;
    }
    double value;
    if (anchors.count(level)) {
      value = anchors.at(level);
    } else {
      const double span = static_cast<double>(hi->first - lo->first);
      const double frac = static_cast<double>(level - lo->first) / span;
      value = lo->second + (hi->second - lo->second) * frac;
    }
    full[level] = integral ? std::floor(value + 0.5) : value;
  }
  return full;
}

inline DifficultyLadder ladder_with_knob(DifficultyLadder base, const std::string& knob,
                                         const std::map<int, double>& values) {
  for (auto& [level, bag] : base.levels) {
    auto it = values.find(level);
    if (it != values.end()) bag[knob] = it->second;
  }
  return base;
}

struct AnchorMeasurement {
  int level = 0;
  double target = 0.0;
  double knob = 0.0;
  double rate = 0.0;
  double half_width = 0.0;
  bool within = false;
};

struct CalibrationIteration {
  DifficultyLadder ladder;                 // ladder the probes ran against
  std::vector<AnchorMeasurement> anchors;
  int adjustments = 0;
};

struct CalibrationReport {
  std::string family_id;
  std::vector<CalibrationIteration> iterations;
  bool converged = false;
  std::string stop_reason;
  int total_adjustments = 0;
};

struct CalibrateOptions {
  std::uint64_t seed = 0;
  Language language = Language::en;
  int parallelism = 1;
};

namespace calibration_detail {

struct AnchorSearch {
  double knob = 0.0;
  std::optional<double> easy_knob;  // rate above target measured here
  std::optional<double> easy_rate;
  std::optional<double> hard_knob;  // rate below target measured here
  std::optional<double> hard_rate;
  std::vector<AnchorMeasurement> history;
};

inline void check_monotone_response(const std::string& family_id, const AnchorSearch& search,
                                    const AnchorMeasurement& fresh) {
  for (const auto& past : search.history) {
    const bool higher_knob = fresh.knob > past.knob;
    // 3-sigma band on the rate difference (half_width is 1.96 standard errors).
    const double se_fresh = fresh.half_width / 1.96;
    const double se_past = past.half_width / 1.96;
    const double slack = 3.0 * std::sqrt(se_fresh * se_fresh + se_past * se_past) + 1e-9;
    if (higher_knob && fresh.rate > past.rate + slack) {
      throw Error(Errc::non_monotone_response,
                  family_id + ": success rate rose from " + std::to_string(past.rate) + " to " +
                      std::to_string(fresh.rate) + " while the knob grew " +
                      std::to_string(past.knob) + " -> " + std::to_string(fresh.knob));
    }
    if (!higher_knob && fresh.knob < past.knob && fresh.rate + slack < past.rate) {
      // success fell while the knob shrank: same inversion, other direction
      throw Error(Errc::non_monotone_response,
                  family_id + ": success rate fell from " + std::to_string(past.rate) + " to " +
                      std::to_string(fresh.rate) + " while the knob shrank " +
                      std::to_string(past.knob) + " -> " + std::to_string(fresh.knob));
    }
  }
}

// One monotone bracketing / bisection step on the knob axis. Success is
// assumed non-increasing in the knob, so "too easy" expands upward and
// "too hard" contracts downward until a bracket closes.
inline double next_knob(AnchorSearch& search, bool too_easy, bool integral, double knob_min,
                        double knob_max) {
  const double v = search.knob;
  double next;
  if (too_easy) {
    if (search.hard_knob) {
      next = (v + *search.hard_knob) / 2.0;
    } else {
      next = std::max(v * 2.0, v + 1.0);
    }
  } else {
    if (search.easy_knob) {
      next = (v + *search.easy_knob) / 2.0;
    } else {
      next = std::max(knob_min, std::min(v / 2.0, v - 1.0));
    }
  }
  if (integral) next = std::floor(next + 0.5);
  return std::clamp(next, knob_min, knob_max);
}

} // namespace calibration_detail

struct CalibrationResult {
  DifficultyLadder ladder;
  CalibrationReport report;
};

// Closed-loop calibration: probe the anchor levels, push each off-target
// anchor one bracketing step along its knob, re-interpolate the remaining
// levels linearly, and repeat until every anchor sits in its target band.
inline CalibrationResult calibrate(const Registry& registry, const std::string& family_id,
                                   Model& model, const AnchorTargets& targets,
                                   const CalibrateOptions& options = {}) {
  targets.validate();
  const Family& fam = registry.family(family_id);
  if (fam.descriptor.ladder.complexity_params.size() != 1) {
    throw Error(Errc::config_error,
                family_id + ": calibration needs exactly one designated complexity parameter");
  }
  const std::string knob = fam.descriptor.ladder.complexity_params.front();
  const bool integral = fam.descriptor.ladder.integer_params.count(knob) > 0;

  DifficultyLadder ladder = fam.descriptor.ladder;
  CalibrationReport report;
  report.family_id = family_id;

  std::map<int, calibration_detail::AnchorSearch> searches;
  for (const auto& [level, target] : targets.targets) {
    calibration_detail::AnchorSearch s;
    s.knob = ladder.at(level).at(knob);
    searches[level] = s;
  }

  for (int iteration = 0; iteration < targets.max_iterations; ++iteration) {
    CalibrationIteration record;
    record.ladder = ladder;

    bool all_within = true;
    for (auto& [level, search] : searches) {
      const ProbeOptions probe_options{options.language, options.parallelism};
      const ProbeResult probe = probe_success_rate(
          registry, family_id, ladder, level, model, targets.samples_per_probe,
          derive_seed(options.seed, "calibrate", static_cast<std::uint64_t>(iteration),
                      static_cast<std::uint64_t>(level)),
          probe_options);

      AnchorMeasurement m;
      m.level = level;
      m.target = targets.targets.at(level);
      m.knob = search.knob;
      m.rate = probe.rate;
      m.half_width = probe.half_width;
      m.within = targets.within(level, probe.rate);
      calibration_detail::check_monotone_response(family_id, search, m);
      search.history.push_back(m);
      record.anchors.push_back(m);
      if (!m.within) all_within = false;
    }

    if (all_within) {
      report.iterations.push_back(std::move(record));
      report.converged = true;
      report.stop_reason = "converged";
      break;
    }

    // Adjustment pass for every off-target anchor.
    for (auto& [level, search] : searches) {
      const AnchorMeasurement& m = search.history.back();
      if (m.within) continue;
      const bool too_easy = m.rate > m.target;
      if (too_easy) {
        if (!search.easy_knob || search.knob > *search.easy_knob) {
          search.easy_knob = search.knob;
          search.easy_rate = m.rate;
        }
      } else {
        if (!search.hard_knob || search.knob < *search.hard_knob) {
          search.hard_knob = search.knob;
          search.hard_rate = m.rate;
        }
      }
      const double proposal = calibration_detail::next_knob(search, too_easy, integral,
                                                            fam.knob_min, fam.knob_max);
      if (proposal != search.knob) {
        search.knob = proposal;
        ++record.adjustments;
      }
    }
    report.total_adjustments += record.adjustments;

    // Global monotonicity across anchors, then linear re-interpolation of the
    // non-anchor levels.
    std::map<int, double> anchor_values;
    double running = -std::numeric_limits<double>::infinity();
    for (auto& [level, search] : searches) {
      running = std::max(running, search.knob);
      search.knob = running;
      anchor_values[level] = running;
    }
    ladder = ladder_with_knob(std::move(ladder), knob,
                              interpolate_anchor_values(anchor_values, integral));
    const LadderReport check = validate_ladder(ladder);
    if (!check.ok) {
      throw Error(Errc::config_error,
                  family_id + ": calibrated ladder failed validation: " + check.violations.front());
    }
    report.iterations.push_back(std::move(record));
  }

  if (!report.converged) report.stop_reason = "max_iterations";
  return CalibrationResult{std::move(ladder), std::move(report)};
}

// --- validation gate ---------------------------------------------------------

struct GateCell {
  std::string template_id;
  Language language = Language::en;
  int level = 0;
  double rate = 0.0;
  int samples = 0;
  bool pass = false;
};

struct GateReport {
  std::string family_id;
  double threshold = 0.90;
  std::vector<GateCell> cells;
  bool pass = false;
};

struct GateOptions {
  double threshold = 0.90;
  std::vector<int> levels = {1, 2, 3};
  int samples_per_cell = 100;
  std::uint64_t seed = 0;
  int parallelism = 1;
};

// Pre-production quality gate: every template variant, at every low level,
// must clear the success threshold strictly. Render failures count as
// failures of their cell.
inline GateReport validation_gate(const Registry& registry, const std::string& family_id,
                                  const DifficultyLadder& ladder, Model& model,
                                  const GateOptions& options = {}) {
  const Family& fam = registry.family(family_id);
  GateReport report;
  report.family_id = family_id;
  report.threshold = options.threshold;
  report.pass = true;

  for (const Template& tpl : fam.templates) {
    for (int level : options.levels) {
      const int n = options.samples_per_cell;
      std::vector<int> outcome(static_cast<std::size_t>(n), 0);
      parallel_for(static_cast<std::size_t>(n), options.parallelism, [&](std::size_t j) {
        const std::uint64_t instance_seed =
            derive_seed(options.seed, tpl.template_id, static_cast<std::uint64_t>(level),
                        static_cast<std::uint64_t>(j));
        auto [params, fills] = registry.generate_with_ladder(family_id, ladder, level,
                                                             instance_seed, tpl.language);
        const GroundTruth truth = registry.solve(params);
        ModelRequest request;
        try {
          request.question = compose_question(tpl, fills, fam.descriptor.answer_kind);
        } catch (const Error&) {
          outcome[j] = 0; // broken rendering yields an unanswerable question
          return;
        }
        request.instance_id = tpl.template_id + "-L" + std::to_string(level) + "-" + std::to_string(j);
        request.instance_seed = instance_seed;
        request.language = tpl.language;
        request.answer_kind = fam.descriptor.answer_kind;
        request.level_params = ladder.at(level);
        request.truth = &truth;
        const ModelReply reply = model.answer(request);
        if (!reply.ok) {
          outcome[j] = -1;
          return;
        }
        const ExtractedAnswer extracted = extract_answer(reply.text, fam.descriptor.answer_kind);
        outcome[j] = extracted.parsed && answers_equal(*extracted.parsed, truth.value) ? 1 : 0;
      });

      int successes = 0, valid = 0;
      for (int o : outcome) {
        if (o >= 0) {
          ++valid;
          successes += o;
        }
      }
      if (valid == 0) {
        throw Error(Errc::probe_inconclusive, tpl.template_id + ": all gate probes failed in transport");
      }
      GateCell cell;
      cell.template_id = tpl.template_id;
      cell.language = tpl.language;
      cell.level = level;
      cell.samples = valid;
      cell.rate = static_cast<double>(successes) / static_cast<double>(valid);
      cell.pass = cell.rate > options.threshold;
      if (!cell.pass) report.pass = false;
      report.cells.push_back(std::move(cell));
    }
  }
  return report;
}

// --- report serialization ------------------------------------------------------

inline nlohmann::ordered_json calibration_report_to_json(const CalibrationReport& report) {
  nlohmann::ordered_json j;
  j["family_id"] = report.family_id;
  j["converged"] = report.converged;
  j["stop_reason"] = report.stop_reason;
  j["total_adjustments"] = report.total_adjustments;
  nlohmann::ordered_json iterations = nlohmann::ordered_json::array();
  for (const auto& it : report.iterations) {
    nlohmann::ordered_json anchors = nlohmann::ordered_json::array();
    for (const auto& a : it.anchors) {
      anchors.push_back({{"level", a.level},
                         {"target", a.target},
                         {"knob", a.knob},
                         {"rate", a.rate},
                         {"half_width", a.half_width},
                         {"within", a.within}});
    }
    iterations.push_back({{"ladder", ladder_to_json(it.ladder)},
                          {"anchors", std::move(anchors)},
                          {"adjustments", it.adjustments}});
  }
  j["iterations"] = std::move(iterations);
  return j;
}

inline nlohmann::ordered_json gate_report_to_json(const GateReport& report) {
  nlohmann::ordered_json j;
  j["family_id"] = report.family_id;
  j["threshold"] = report.threshold;
  j["pass"] = report.pass;
  nlohmann::ordered_json cells = nlohmann::ordered_json::array();
  for (const auto& c : report.cells) {
    cells.push_back({{"template_id", c.template_id},
                     {"language", to_string(c.language)},
                     {"level", c.level},
                     {"rate", c.rate},
                     {"samples", c.samples},
                     {"pass", c.pass}});
  }
  j["cells"] = std::move(cells);
  return j;
}

} // namespace logicforge
