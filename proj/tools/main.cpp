// logicforge: seeded synthesis of verifiable logic puzzles, closed-loop
// difficulty calibration against an answering model, reward scoring, and a
// group-relative policy-dynamics simulator.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "logicforge/calibration.hpp"
#include "logicforge/dataset.hpp"
#include "logicforge/grpo.hpp"
#include "logicforge/http_model.hpp"
#include "logicforge/registry.hpp"
#include "logicforge/version.hpp"

namespace {

using namespace logicforge;

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;

// Precedence for every tunable: CLI flag > environment variable > config
// file > built-in default. CLI11 handles flag-vs-default; these helpers layer
// in the environment and the --config file.
struct Settings {
  nlohmann::json config; // parsed --config file, or null

  static std::optional<std::string> env(const char* name) {
    const char* v = std::getenv(name);
    if (v == nullptr || *v == '\0') return std::nullopt;
    return std::string(v);
  }

  template <class T>
  T resolve(const CLI::Option* flag, T flag_value, const char* env_name, const char* config_key,
            T fallback) const {
    if (flag != nullptr && flag->count() > 0) return flag_value;
    if (auto e = env(env_name)) {
      if constexpr (std::is_same_v<T, int>) return std::stoi(*e);
      else if constexpr (std::is_same_v<T, double>) return std::stod(*e);
      else return *e;
    }
    if (config.is_object() && config.contains(config_key)) return config.at(config_key).get<T>();
    return fallback;
  }
};

Registry load_registry(const std::string& families_dir, const std::string& templates_dir) {
  Registry registry = builtin_registry();
  namespace fs = std::filesystem;
  if (!families_dir.empty()) {
    for (const auto& entry : fs::directory_iterator(families_dir)) {
      if (entry.path().extension() != ".json") continue;
      const TaskDescriptor d = load_descriptor(entry.path().string());
      registry.family_mut(d.family_id).descriptor = d;
    }
  }
  if (!templates_dir.empty()) {
    std::map<std::string, std::vector<Template>> grouped;
    for (const auto& entry : fs::directory_iterator(templates_dir)) {
      if (entry.path().extension() != ".json") continue;
      for (auto& t : load_templates(entry.path().string())) {
        grouped[t.family_id].push_back(std::move(t));
      }
    }
    for (auto& [family_id, templates] : grouped) {
      registry.family_mut(family_id).templates = std::move(templates);
    }
  }
  return registry;
}

std::unique_ptr<Model> make_model(const Registry& registry, const std::string& family_id,
                                  const std::string& model_spec, const EndpointConfig& endpoint,
                                  double skill, double slope, double format_fail,
                                  const CLI::Option* skill_opt) {
  if (model_spec == "mock" || model_spec == "mock-highskill") {
    MockModelConfig config;
    const auto& ladder = registry.family(family_id).descriptor.ladder;
    config.complexity_key = ladder.complexity_params.front();
    if (model_spec == "mock-highskill") {
      config.skill = 1e9;
      config.slope = 1.0;
    } else if (skill_opt != nullptr && skill_opt->count() > 0) {
      config.skill = skill;
      config.slope = slope;
    } else {
      // Default synthetic model: indifference point at the level-5 knob, with
      // a slope that spreads the logistic across the whole ladder.
      const double lo = ladder.at(1).at(config.complexity_key);
      const double hi = ladder.at(10).at(config.complexity_key);
      config.skill = ladder.at(5).at(config.complexity_key);
      config.slope = 8.0 / std::max(1.0, hi - lo);
    }
    config.format_fail_rate = format_fail;
    return std::make_unique<MockModel>(config);
  }
  if (model_spec == "endpoint") {
    return std::make_unique<HttpModel>(endpoint);
  }
  throw Error(Errc::config_error,
              "unknown model '" + model_spec + "' (expected mock, mock-highskill, or endpoint)");
}

std::vector<Language> parse_languages(const std::string& spec) {
  std::vector<Language> out;
  for (const auto& piece : text::split(spec, ",")) {
    const std::string lang = text::trim(piece);
    if (lang.empty()) continue;
    out.push_back(language_from_string(lang));
  }
  if (out.empty()) throw Error(Errc::config_error, "no language given");
  return out;
}

void write_text(const std::string& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::config_error, "cannot write " + path);
  out << body;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"logicforge: verifiable logic-puzzle synthesis, difficulty calibration, and "
               "reward tooling"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("logicforge ") + kVersion);

  std::string families_dir, templates_dir, config_path;
  app.add_option("--families-dir", families_dir,
                 "Directory of family descriptor JSON files overriding the built-in ladders");
  app.add_option("--templates-dir", templates_dir,
                 "Directory of template JSON files overriding the built-in variants");
  app.add_option("--config", config_path, "JSON config file (lowest-precedence settings)");

  int parallelism = 1;
  auto* parallelism_opt =
      app.add_option("--parallelism", parallelism, "Worker threads for generation and probing")
          ->check(CLI::PositiveNumber);

  // Endpoint settings (used with --model endpoint); flags outrank env vars,
  // which outrank the config file.
  EndpointConfig endpoint_defaults;
  std::string ep_url, ep_model, ep_auth_env;
  double ep_timeout = 0.0, ep_temperature = 0.0;
  int ep_retries = 0;
  auto* ep_url_opt = app.add_option("--endpoint-url", ep_url, "Endpoint base URL (scheme://host:port)");
  auto* ep_model_opt = app.add_option("--endpoint-model", ep_model, "Model name sent to the endpoint");
  auto* ep_auth_opt = app.add_option("--endpoint-auth-env", ep_auth_env,
                                     "Environment variable holding the bearer token");
  auto* ep_timeout_opt = app.add_option("--endpoint-timeout", ep_timeout, "Request timeout in seconds");
  auto* ep_retries_opt = app.add_option("--endpoint-retries", ep_retries, "Retries per request");
  auto* ep_temp_opt = app.add_option("--endpoint-temperature", ep_temperature, "Sampling temperature");

  // ---- generate ----
  auto* generate = app.add_subcommand("generate", "Emit a JSON-Lines dataset");
  std::string g_family, g_lang = "en", g_out, g_range, g_gate_report;
  int g_difficulty = 0, g_count = 0;
  std::uint64_t g_seed = 0;
  bool g_force = false;
  generate->add_option("--family", g_family, "Task family id")->required();
  generate->add_option("--difficulty", g_difficulty, "Single difficulty level 1..10");
  generate->add_option("--difficulty-range", g_range, "Inclusive level range, e.g. 3:7");
  generate->add_option("--lang", g_lang, "Language list: en, zh, or en,zh");
  generate->add_option("--count", g_count, "Records per (difficulty, language) cell")->required();
  auto* g_seed_opt = generate->add_option("--seed", g_seed, "Master seed (required)");
  generate->add_option("--out", g_out, "Output dataset path")->required();
  generate->add_flag("--force", g_force, "Emit even without validation-gate evidence");
  generate->add_option("--gate-report", g_gate_report,
                       "Gate report JSON from `validate` proving the family passed");

  // ---- calibrate ----
  auto* calibrate_cmd = app.add_subcommand("calibrate", "Tune the difficulty ladder against a model");
  std::string c_family, c_model = "mock", c_out, c_family_out;
  std::uint64_t c_seed = 0;
  int c_samples = 200, c_max_iterations = 20;
  double c_tolerance = 0.10, c_skill = 0.0, c_slope = 1.0, c_format_fail = 0.0;
  calibrate_cmd->add_option("--family", c_family, "Task family id")->required();
  calibrate_cmd->add_option("--model", c_model, "mock | mock-highskill | endpoint");
  auto* c_seed_opt = calibrate_cmd->add_option("--seed", c_seed, "Master seed (required)");
  calibrate_cmd->add_option("--samples", c_samples, "Instances per probe");
  calibrate_cmd->add_option("--tolerance", c_tolerance, "Anchor tolerance (absolute)");
  calibrate_cmd->add_option("--max-iterations", c_max_iterations, "Iteration budget");
  auto* c_skill_opt = calibrate_cmd->add_option("--mock-skill", c_skill, "Mock skill parameter");
  calibrate_cmd->add_option("--mock-slope", c_slope, "Mock logistic slope");
  calibrate_cmd->add_option("--mock-format-fail", c_format_fail, "Mock format failure rate");
  calibrate_cmd->add_option("--out", c_out, "Calibration report JSON path");
  calibrate_cmd->add_option("--family-out", c_family_out,
                            "Write the re-calibrated family descriptor here");

  // ---- validate ----
  auto* validate_cmd = app.add_subcommand("validate", "Run the pre-production validation gate");
  std::string v_family, v_model = "mock-highskill", v_out, v_levels = "1,2,3";
  std::uint64_t v_seed = 0;
  int v_samples = 100;
  double v_threshold = 0.90, v_skill = 0.0, v_slope = 1.0, v_format_fail = 0.0;
  validate_cmd->add_option("--family", v_family, "Task family id")->required();
  validate_cmd->add_option("--model", v_model, "mock | mock-highskill | endpoint");
  auto* v_seed_opt = validate_cmd->add_option("--seed", v_seed, "Master seed (required)");
  validate_cmd->add_option("--threshold", v_threshold, "Strict success threshold");
  validate_cmd->add_option("--levels", v_levels, "Comma-separated levels to gate");
  validate_cmd->add_option("--samples", v_samples, "Instances per template/level cell");
  auto* v_skill_opt = validate_cmd->add_option("--mock-skill", v_skill, "Mock skill parameter");
  validate_cmd->add_option("--mock-slope", v_slope, "Mock logistic slope");
  validate_cmd->add_option("--mock-format-fail", v_format_fail, "Mock format failure rate");
  validate_cmd->add_option("--out", v_out, "Gate report JSON path");

  // ---- score ----
  auto* score_cmd = app.add_subcommand("score", "Score a responses file against a dataset");
  std::string s_dataset, s_responses, s_scheme = "bipolar", s_out;
  double s_bonus = kDefaultFormatBonus;
  score_cmd->add_option("--dataset", s_dataset, "Dataset JSONL")->required();
  score_cmd->add_option("--responses", s_responses, "Responses JSONL (id, response)")->required();
  score_cmd->add_option("--scheme", s_scheme, "binary | graded | bipolar");
  score_cmd->add_option("--format-bonus", s_bonus, "Additive bonus for well-formatted replies");
  score_cmd->add_option("--out", s_out, "Scores JSONL path")->required();

  // ---- sim-grpo ----
  auto* sim_cmd = app.add_subcommand("sim-grpo", "Run the policy-dynamics simulator");
  std::string m_scheme = "bipolar", m_out;
  std::uint64_t m_seed = 0;
  int m_steps = 2000, m_group = 8;
  double m_lr = 0.1, m_q = 0.5, m_safe = 0.8, m_fail_score = 0.2;
  double m_bonus = 0.0, m_bonus_fail = 0.0;
  sim_cmd->add_option("--scheme", m_scheme, "binary | graded | bipolar");
  auto* m_seed_opt = sim_cmd->add_option("--seed", m_seed, "Simulation seed (required)");
  sim_cmd->add_option("--steps", m_steps, "Training steps");
  sim_cmd->add_option("--group-size", m_group, "Rollout group size G");
  sim_cmd->add_option("--lr", m_lr, "Learning rate");
  sim_cmd->add_option("--risky-success-prob", m_q, "P(perfect) for the risky action");
  sim_cmd->add_option("--safe-score", m_safe, "Deterministic score of the safe action");
  sim_cmd->add_option("--risky-fail-score", m_fail_score, "Score of a failed risky attempt");
  sim_cmd->add_option("--format-bonus", m_bonus, "Per-sample format bonus (0 disables)");
  sim_cmd->add_option("--format-fail-rate", m_bonus_fail, "Chance a sample loses the bonus");
  sim_cmd->add_option("--out", m_out, "Trajectory CSV path")->required();

  // ---- verify ----
  auto* verify_cmd = app.add_subcommand("verify", "Re-solve and re-render a dataset");
  std::string y_dataset;
  verify_cmd->add_option("--dataset", y_dataset, "Dataset JSONL")->required();

  // ---- families / export-families ----
  auto* families_cmd = app.add_subcommand("families", "List registered task families");
  auto* export_cmd =
      app.add_subcommand("export-families", "Write descriptor and template files per family");
  std::string e_out_dir;
  export_cmd->add_option("--out-dir", e_out_dir, "Target directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    Settings settings;
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw Error(Errc::config_error, "cannot read config " + config_path);
      in >> settings.config;
    }
    const int workers =
        settings.resolve<int>(parallelism_opt, parallelism, "LOGICFORGE_PARALLELISM",
                              "parallelism", 1);
    if (workers < 1) throw Error(Errc::config_error, "parallelism must be >= 1");

    EndpointConfig endpoint;
    endpoint.base_url = settings.resolve<std::string>(ep_url_opt, ep_url, "LOGICFORGE_BASE_URL",
                                                      "base_url", endpoint_defaults.base_url);
    endpoint.model_name = settings.resolve<std::string>(ep_model_opt, ep_model, "LOGICFORGE_MODEL",
                                                        "model", endpoint_defaults.model_name);
    endpoint.auth_env = settings.resolve<std::string>(ep_auth_opt, ep_auth_env,
                                                      "LOGICFORGE_AUTH_ENV", "auth_env",
                                                      endpoint_defaults.auth_env);
    endpoint.timeout_seconds =
        settings.resolve<double>(ep_timeout_opt, ep_timeout, "LOGICFORGE_TIMEOUT",
                                 "timeout_seconds", endpoint_defaults.timeout_seconds);
    endpoint.max_retries = settings.resolve<int>(ep_retries_opt, ep_retries, "LOGICFORGE_RETRIES",
                                                 "max_retries", endpoint_defaults.max_retries);
    endpoint.temperature =
        settings.resolve<double>(ep_temp_opt, ep_temperature, "LOGICFORGE_TEMPERATURE",
                                 "temperature", endpoint_defaults.temperature);

    Registry registry = load_registry(families_dir, templates_dir);

    auto require_seed = [](const CLI::Option* opt, const char* command) {
      if (opt->count() == 0) {
        throw Error(Errc::config_error,
                    std::string(command) + " needs an explicit --seed (no wall-clock default)");
      }
    };

    if (*generate) {
      require_seed(g_seed_opt, "generate");
      registry.family(g_family); // unknown family fails fast, listing the registry
      if (!g_force) {
        if (g_gate_report.empty()) {
          std::cerr << "generate: family '" << g_family
                    << "' has no validation-gate evidence; pass --gate-report <file> from "
                       "`validate`, or --force to override\n";
          return kExitConfig;
        }
        std::ifstream in(g_gate_report);
        if (!in) throw Error(Errc::config_error, "cannot read " + g_gate_report);
        nlohmann::json gate;
        in >> gate;
        if (gate.value("family_id", "") != g_family || !gate.value("pass", false)) {
          std::cerr << "generate: gate report " << g_gate_report << " does not show family '"
                    << g_family << "' passing\n";
          return kExitConfig;
        }
      }
      std::vector<int> levels;
      if (!g_range.empty()) {
        const auto parts = text::split(g_range, ":");
        if (parts.size() != 2) throw Error(Errc::config_error, "bad --difficulty-range, use A:B");
        for (int l = std::stoi(parts[0]); l <= std::stoi(parts[1]); ++l) levels.push_back(l);
      } else if (g_difficulty != 0) {
        levels.push_back(g_difficulty);
      } else {
        throw Error(Errc::config_error, "need --difficulty or --difficulty-range");
      }
      std::vector<MixEntry> mix;
      for (int level : levels) {
        for (Language lang : parse_languages(g_lang)) {
          mix.push_back({g_family, level, lang, g_count});
        }
      }
      const EmitReport report = emit_dataset(registry, mix, {g_seed, workers}, g_out);
      std::cout << "wrote " << report.total << " records to " << report.path << "\n";
      for (const auto& [cell, n] : report.counts) std::cout << "  " << cell << ": " << n << "\n";
      return kExitOk;
    }

    if (*calibrate_cmd) {
      require_seed(c_seed_opt, "calibrate");
      auto model = make_model(registry, c_family, c_model, endpoint, c_skill, c_slope,
                              c_format_fail, c_skill_opt);
      AnchorTargets targets;
      targets.tolerance = c_tolerance;
      targets.max_iterations = c_max_iterations;
      targets.samples_per_probe = c_samples;
      CalibrateOptions options;
      options.seed = c_seed;
      options.parallelism = workers;
      const CalibrationResult result = calibrate(registry, c_family, *model, targets, options);
      if (!c_out.empty()) {
        write_text(c_out, calibration_report_to_json(result.report).dump(2) + "\n");
        std::cout << "report: " << c_out << "\n";
      }
      if (!c_family_out.empty()) {
        TaskDescriptor updated = registry.family(c_family).descriptor;
        updated.ladder = result.ladder;
        save_descriptor(updated, c_family_out);
        std::cout << "family descriptor: " << c_family_out << "\n";
      }
      std::cout << "calibrate " << c_family << ": " << result.report.stop_reason << " after "
                << result.report.iterations.size() << " iteration(s), "
                << result.report.total_adjustments << " adjustment(s)\n";
      for (const auto& anchor : result.report.iterations.back().anchors) {
        std::cout << "  L" << anchor.level << " target " << anchor.target << " rate " << anchor.rate
                  << " (+-" << anchor.half_width << ")\n";
      }
      return result.report.converged ? kExitOk : kExitFailure;
    }

    if (*validate_cmd) {
      require_seed(v_seed_opt, "validate");
      auto model = make_model(registry, v_family, v_model, endpoint, v_skill, v_slope,
                              v_format_fail, v_skill_opt);
      GateOptions options;
      options.threshold = v_threshold;
      options.samples_per_cell = v_samples;
      options.seed = v_seed;
      options.parallelism = workers;
      options.levels.clear();
      for (const auto& piece : text::split(v_levels, ",")) {
        options.levels.push_back(std::stoi(text::trim(piece)));
      }
      const GateReport report = validation_gate(
          registry, v_family, registry.family(v_family).descriptor.ladder, *model, options);
      if (!v_out.empty()) {
        write_text(v_out, gate_report_to_json(report).dump(2) + "\n");
        std::cout << "report: " << v_out << "\n";
      }
      std::cout << "gate " << v_family << ": " << (report.pass ? "PASS" : "FAIL") << "\n";
      for (const auto& cell : report.cells) {
        if (!cell.pass) {
          std::cout << "  failing cell: " << cell.template_id << " level " << cell.level
                    << " rate " << cell.rate << "\n";
        }
      }
      return report.pass ? kExitOk : kExitFailure;
    }

    if (*score_cmd) {
      const ScoreSummary summary = score_batch(registry, s_dataset, s_responses,
                                               reward_scheme_from_string(s_scheme), s_bonus, s_out);
      std::cout << "scores: " << s_out << "\n";
      std::cout << "scored " << summary.scored << " response(s), format_ok " << summary.format_ok
                << ", mean total " << summary.mean_total << ", range [" << summary.min_total
                << ", " << summary.max_total << "]\n";
      if (summary.unknown_ids > 0) {
        std::cerr << summary.unknown_ids << " response id(s) missing from the dataset\n";
        return kExitFailure;
      }
      return kExitOk;
    }

    if (*sim_cmd) {
      require_seed(m_seed_opt, "sim-grpo");
      SimEnvironment env = trap_environment(m_q, m_safe, m_fail_score);
      env.group_size = m_group;
      env.learning_rate = m_lr;
      env.steps = m_steps;
      env.seed = m_seed;
      env.format_bonus = m_bonus;
      env.format_fail_rate = m_bonus_fail;
      const SimResult result = simulate_training(env, reward_scheme_from_string(m_scheme));
      std::string csv = "step";
      for (const auto& action : env.actions) csv += "," + action.name;
      csv += ",mean_reward\n";
      for (const auto& step : result.trajectory) {
        csv += std::to_string(step.step);
        for (double p : step.probs) csv += "," + std::to_string(p);
        csv += "," + std::to_string(step.mean_reward) + "\n";
      }
      write_text(m_out, csv);
      std::cout << "trajectory: " << m_out << "\n";
      std::cout << "steps run " << result.steps_run << ", final mass on perfect-capable action "
                << result.perfect_action_mass << "\n";
      if (result.diverged) {
        std::cerr << "policy diverged: a probability underflowed\n";
        return kExitFailure;
      }
      return kExitOk;
    }

    if (*verify_cmd) {
      const VerifyReport report = verify_dataset(registry, y_dataset);
      std::cout << "verified " << report.records << " record(s), " << report.mismatches.size()
                << " mismatch(es)\n";
      for (const auto& m : report.mismatches) {
        std::cout << "  line " << m.line << " " << m.field << ": " << m.detail << "\n";
      }
      return report.clean() ? kExitOk : kExitFailure;
    }

    if (*families_cmd) {
      for (const auto& id : registry.family_ids()) {
        const auto& d = registry.family(id).descriptor;
        std::cout << id << "  [" << to_string(d.taxonomy.task_domain) << " / "
                  << to_string(d.taxonomy.core_ability) << " / "
                  << to_string(d.taxonomy.difficulty_source) << "]  answer=" <<
            to_string(d.answer_kind) << " scoring=" << to_string(d.scoring_method) << "\n";
      }
      return kExitOk;
    }

    if (*export_cmd) {
      namespace fs = std::filesystem;
      fs::create_directories(fs::path(e_out_dir) / "families");
      fs::create_directories(fs::path(e_out_dir) / "templates");
      for (const auto& id : registry.family_ids()) {
        const Family& fam = registry.family(id);
        const std::string descriptor_path = (fs::path(e_out_dir) / "families" / (id + ".json")).string();
        save_descriptor(fam.descriptor, descriptor_path);
        std::cout << descriptor_path << "\n";
        for (Language lang : fam.descriptor.languages) {
          std::vector<Template> subset;
          for (const auto& t : fam.templates) {
            if (t.language == lang) subset.push_back(t);
          }
          const std::string template_path =
              (fs::path(e_out_dir) / "templates" / (id + "." + to_string(lang) + ".json")).string();
          save_templates(subset, template_path);
          std::cout << template_path << "\n";
        }
      }
      return kExitOk;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    switch (e.code()) {
      case Errc::config_error:
      case Errc::auth_missing:
      case Errc::unsupported_language:
        return kExitConfig;
      default:
        return kExitFailure;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitOk;
}
