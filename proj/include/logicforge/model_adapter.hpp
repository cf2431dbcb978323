#pragma once

#include <cmath>
#include <cstdint>
#include <cstring>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "logicforge/answer.hpp"
#include "logicforge/errors.hpp"
#include "logicforge/lang.hpp"
#include "logicforge/rewards.hpp"
#include "logicforge/rng.hpp"

namespace logicforge {

// Everything a model call may need. Real endpoints read only the question;
// the mock also uses the ground truth and the ladder row to simulate a model
// of a given skill.
struct ModelRequest {
  std::string question;
  std::string instance_id;
  std::uint64_t instance_seed = 0;
  Language language = Language::en;
  AnswerKind answer_kind = AnswerKind::single_value;
  ParamBag level_params;
  const GroundTruth* truth = nullptr;
};

struct ModelReply {
  bool ok = false;           // false means a transport-level failure
  std::string text;
  std::string error;

  static ModelReply success(std::string t) { return {true, std::move(t), {}}; }
  static ModelReply failure(std::string e) { return {false, {}, std::move(e)}; }
};

class Model {
 public:
  virtual ~Model() = default;
  virtual ModelReply answer(const ModelRequest& request) = 0;
  virtual std::string name() const = 0;
};

// Synthetic answering model with a logistic skill curve:
//   p(correct) = 1 / (1 + exp(-slope * (skill - complexity)))
// where complexity is the instance's ladder value under complexity_key.
// Every draw is a pure function of (config, instance seed).
struct MockModelConfig {
  double skill = 10.0;
  double slope = 1.0;
  double format_fail_rate = 0.0;
  std::string complexity_key = "num";

  std::uint64_t fingerprint() const {
    std::uint64_t h = hash_bytes(complexity_key);
    auto mix_double = [&h](double v) {
      std::uint64_t bits;
      static_assert(sizeof(bits) == sizeof(v));
      std::memcpy(&bits, &v, sizeof(bits));
      h = mix_u64(h, bits);
    };
    mix_double(skill);
    mix_double(slope);
    mix_double(format_fail_rate);
    return h;
  }
};

inline double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

class MockModel : public Model {
 public:
  explicit MockModel(MockModelConfig config) : config_(std::move(config)) {
    if (config_.slope <= 0.0) throw Error(Errc::config_error, "mock slope must be > 0");
    if (config_.format_fail_rate < 0.0 || config_.format_fail_rate > 1.0) {
      throw Error(Errc::config_error, "mock format_fail_rate must lie in [0,1]");
    }
  }

  std::string name() const override { return "mock"; }

  const MockModelConfig& config() const { return config_; }

  double success_probability(const ParamBag& level_params) const {
    const auto it = level_params.find(config_.complexity_key);
    if (it == level_params.end()) {
      throw Error(Errc::config_error,
                  "mock complexity_key '" + config_.complexity_key + "' absent from ladder row");
    }
    return logistic(config_.slope * (config_.skill - it->second));
  }

  ModelReply answer(const ModelRequest& request) override {
    if (request.truth == nullptr) {
      throw Error(Errc::config_error, "mock model needs ground truth metadata");
    }
    Rng rng(derive_seed(request.instance_seed, "mock_model", config_.fingerprint()));
    if (rng.chance(config_.format_fail_rate)) {
      return ModelReply::success(unformatted_reply(request.language));
    }
    // A question whose rendering broke (residual slot markers) is treated as
    // unanswerable regardless of skill.
    const bool question_corrupted = text::contains(request.question, "[Slot");
    const double p = success_probability(request.level_params);
    const std::string answer_text = (!question_corrupted && rng.chance(p))
                                        ? request.truth->canonical(request.language)
                                        : corrupted_answer(*request.truth, request.language, rng);
    const char* preamble = request.language == Language::en ? "Reasoning omitted." : "推理过程略。";
    return ModelReply::success(std::string(preamble) + "\n" + kAnswerOpen + answer_text +
                               kAnswerClose);
  }

 private:
  static std::string unformatted_reply(Language lang) {
    return lang == Language::en ? "I am not sure how to format this answer."
                                : "我不确定该如何给出这个答案。";
  }

  // A wrong-but-parseable answer near the truth, so graded scorers see
  // mid-range S values rather than only 0.
  static std::string corrupted_answer(const GroundTruth& truth, Language /*lang*/, Rng& rng) {
    if (std::holds_alternative<std::set<std::string>>(truth.value)) {
      auto values = std::get<std::set<std::string>>(truth.value);
      if (!values.empty() && rng.chance(0.6)) {
        auto it = values.begin();
        std::advance(it, static_cast<long>(rng.below(values.size())));
        values.erase(it);
      } else {
        values.insert("Nium" + std::to_string(rng.range(1, 99)));
      }
      if (values.empty()) return "none";
      return text::join(std::vector<std::string>(values.begin(), values.end()), ", ");
    }
    if (std::holds_alternative<std::vector<std::string>>(truth.value)) {
      auto seq = std::get<std::vector<std::string>>(truth.value);
      if (seq.size() >= 2) {
        const std::size_t i = rng.below(seq.size() - 1);
        std::swap(seq[i], seq[i + 1]);
      } else {
        seq.push_back("X0");
      }
      return text::join(seq, " -> ");
    }
    if (std::holds_alternative<double>(truth.value)) {
      const double delta = static_cast<double>(rng.range(1, 3));
      const double wrong = std::get<double>(truth.value) + (rng.chance(0.5) ? delta : -delta);
      if (wrong == static_cast<long long>(wrong)) {
        return std::to_string(static_cast<long long>(wrong));
      }
      return std::to_string(wrong);
    }
    const std::string& single = std::get<std::string>(truth.value);
    if (single == "yes") return "no";
    if (single == "no") return "yes";
    return single + "x";
  }

  MockModelConfig config_;
};

// Test double for transport failures (timeouts, refused connections).
class FailingModel : public Model {
 public:
  explicit FailingModel(std::string error = "connection refused") : error_(std::move(error)) {}
  std::string name() const override { return "failing"; }
  ModelReply answer(const ModelRequest&) override { return ModelReply::failure(error_); }

 private:
  std::string error_;
};

} // namespace logicforge
