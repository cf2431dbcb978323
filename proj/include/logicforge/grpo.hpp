#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "logicforge/errors.hpp"
#include "logicforge/rewards.hpp"
#include "logicforge/rng.hpp"

namespace logicforge {

// Group-relative advantages: (R_i - mean) / std over the rollout group,
// with the population standard deviation. A zero-spread group yields all-zero
// advantages rather than dividing by epsilon.
inline std::vector<double> group_advantages(const std::vector<double>& rewards) {
  if (rewards.empty()) throw Error(Errc::empty_group, "advantage needs at least one reward");
  const double n = static_cast<double>(rewards.size());
  double mean = 0.0;
  for (double r : rewards) mean += r;
  mean /= n;
  double var = 0.0;
  for (double r : rewards) var += (r - mean) * (r - mean);
  var /= n;
  const double std_dev = std::sqrt(var);
  std::vector<double> advantages(rewards.size(), 0.0);
  if (std_dev <= 1e-12) return advantages;
  for (std::size_t i = 0; i < rewards.size(); ++i) {
    advantages[i] = (rewards[i] - mean) / std_dev;
  }
  return advantages;
}

struct RolloutGroup {
  std::vector<double> rewards;
  std::vector<double> advantages;

  static RolloutGroup from_rewards(std::vector<double> rewards) {
    RolloutGroup g;
    g.advantages = group_advantages(rewards);
    g.rewards = std::move(rewards);
    return g;
  }
};

// One stochastic outcome of playing an action: correctness score S with a
// probability. Per-action outcome lists must sum to 1.
struct ActionOutcome {
  double score = 0.0;
  double prob = 1.0;
};

struct SimAction {
  std::string name;
  std::vector<ActionOutcome> outcomes;

  bool perfect_capable() const {
    return std::any_of(outcomes.begin(), outcomes.end(),
                       [](const ActionOutcome& o) { return o.score == 1.0 && o.prob > 0.0; });
  }
};

struct SimEnvironment {
  std::vector<SimAction> actions;
  int group_size = 8;
  double learning_rate = 0.1;
  int steps = 2000;
  std::uint64_t seed = 0;
  double format_bonus = 0.0;      // added to every reward when enabled
  double format_fail_rate = 0.0;  // chance a sample loses the bonus

  void validate() const {
    if (actions.empty()) throw Error(Errc::config_error, "environment needs at least one action");
    if (group_size < 1) throw Error(Errc::config_error, "group size must be >= 1");
    if (steps < 0 || learning_rate < 0.0) {
      throw Error(Errc::config_error, "steps and learning rate must be non-negative");
    }
    for (const auto& a : actions) {
      double total = 0.0;
      for (const auto& o : a.outcomes) {
        if (o.score < 0.0 || o.score > 1.0) {
          throw Error(Errc::config_error, a.name + ": outcome score outside [0,1]");
        }
        if (o.prob < 0.0) throw Error(Errc::config_error, a.name + ": negative probability");
        total += o.prob;
      }
      if (std::fabs(total - 1.0) > 1e-9) {
        throw Error(Errc::config_error, a.name + ": outcome probabilities sum to " +
                                            std::to_string(total));
      }
    }
  }
};

// Softmax policy over the action set.
struct PolicyState {
  std::vector<double> logits;

  std::vector<double> probs() const {
    const double peak = *std::max_element(logits.begin(), logits.end());
    std::vector<double> p(logits.size());
    double total = 0.0;
    for (std::size_t i = 0; i < logits.size(); ++i) {
      p[i] = std::exp(logits[i] - peak);
      total += p[i];
    }
    for (double& v : p) v /= total;
    return p;
  }
};

struct SimStep {
  int step = 0;
  std::vector<double> probs;
  double mean_reward = 0.0;
};

struct SimResult {
  std::vector<SimStep> trajectory;
  std::vector<double> final_probs;
  double perfect_action_mass = 0.0; // final probability on perfect-capable actions
  bool diverged = false;
  int steps_run = 0;
};

inline constexpr double kPolicyUnderflow = 1e-12;

// Policy-gradient dynamics under group-normalized advantages: each step
// samples a G-rollout from the softmax policy, maps scores through the reward
// scheme, and ascends advantage-weighted log-probabilities. Fully
// deterministic for a given (environment, scheme, seed).
inline SimResult simulate_training(const SimEnvironment& env, RewardScheme scheme) {
  env.validate();
  const std::size_t k = env.actions.size();
  PolicyState policy;
  policy.logits.assign(k, 0.0);
  Rng rng(derive_seed(env.seed, "grpo_sim"));

  SimResult result;
  result.trajectory.reserve(static_cast<std::size_t>(env.steps));

  auto sample_index = [&rng](const std::vector<double>& weights) {
    const double u = rng.unit();
    double cum = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
      cum += weights[i];
      if (u < cum) return i;
    }
    return weights.size() - 1;
  };

  for (int step = 0; step < env.steps; ++step) {
    const std::vector<double> probs = policy.probs();
    for (double p : probs) {
      if (p < kPolicyUnderflow) {
        result.diverged = true;
        break;
      }
    }
    if (result.diverged) break;

    std::vector<std::size_t> chosen(static_cast<std::size_t>(env.group_size));
    std::vector<double> rewards(static_cast<std::size_t>(env.group_size));
    double mean_reward = 0.0;
    for (int g = 0; g < env.group_size; ++g) {
      const std::size_t a = sample_index(probs);
      chosen[static_cast<std::size_t>(g)] = a;
      std::vector<double> outcome_probs;
      for (const auto& o : env.actions[a].outcomes) outcome_probs.push_back(o.prob);
      const double s = env.actions[a].outcomes[sample_index(outcome_probs)].score;
      double reward = map_reward(s, scheme);
      if (env.format_bonus != 0.0 && !rng.chance(env.format_fail_rate)) {
        reward += env.format_bonus;
      }
      rewards[static_cast<std::size_t>(g)] = reward;
      mean_reward += reward;
    }
    mean_reward /= static_cast<double>(env.group_size);

    const std::vector<double> advantages = group_advantages(rewards);
    // grad log pi(a) for softmax logits is e_a - probs.
    std::vector<double> grad(k, 0.0);
    for (int g = 0; g < env.group_size; ++g) {
      const double w = advantages[static_cast<std::size_t>(g)] / static_cast<double>(env.group_size);
      grad[chosen[static_cast<std::size_t>(g)]] += w;
      for (std::size_t i = 0; i < k; ++i) grad[i] -= w * probs[i];
    }
    for (std::size_t i = 0; i < k; ++i) policy.logits[i] += env.learning_rate * grad[i];

    result.trajectory.push_back({step, probs, mean_reward});
    result.steps_run = step + 1;
  }

  result.final_probs = policy.probs();
  for (std::size_t i = 0; i < k; ++i) {
    if (env.actions[i].perfect_capable()) result.perfect_action_mass += result.final_probs[i];
  }
  return result;
}

// The two-action environment used by the reward-scheme comparison: a safe
// action that always scores 0.8 against a risky action that is perfect with
// probability q and badly flawed otherwise.
inline SimEnvironment trap_environment(double risky_success_prob = 0.5, double safe_score = 0.8,
                                       double risky_fail_score = 0.2) {
  SimEnvironment env;
  env.actions = {
      {"safe_partial", {{safe_score, 1.0}}},
      {"risky_perfect", {{1.0, risky_success_prob}, {risky_fail_score, 1.0 - risky_success_prob}}},
  };
  return env;
}

} // namespace logicforge
