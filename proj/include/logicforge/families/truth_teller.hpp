#pragma once

#include <array>
#include <set>
#include <string>
#include <vector>

#include "logicforge/descriptor.hpp"
#include "logicforge/generator.hpp"
#include "logicforge/ladder.hpp"
#include "logicforge/rng.hpp"
#include "logicforge/templating.hpp"

namespace logicforge::truth_teller {

inline constexpr const char* kFamilyId = "truth_teller";

// Statement truth value when exactly t of the n speakers tell the truth.
// "Telling the truth" counts include the speaker making the claim.
inline bool statement_holds(const TruthStatement& s, int t, int n) {
  const int subject = s.about == ClaimSubject::truth ? t : n - t;
  return s.quant == Quantifier::exactly ? subject == s.count : subject >= s.count;
}

namespace detail {

inline GroundTruth make_truth(const TruthTellerParams& p, const std::vector<bool>& telling) {
  std::set<std::string> names;
  std::vector<std::string> ordered;
  for (std::size_t i = 0; i < telling.size(); ++i) {
    if (telling[i]) {
      names.insert(p.names[i]);
      ordered.push_back(p.names[i]);
    }
  }
  const std::string canonical = ordered.empty() ? "none" : text::join(ordered, ", ");
  GroundTruth truth;
  truth.value = names;
  truth.canonical_text = {{Language::en, canonical}, {Language::zh, canonical}};
  return truth;
}

} // namespace detail

// Candidate-count method: a global truth count t is consistent when the set
// of statements that hold under t has size exactly t.
inline SolveOutcome solve(const TruthTellerParams& p) {
  const int n = p.speaker_count();
  std::vector<bool> found;
  int solutions = 0;
  for (int t = 0; t <= n; ++t) {
    std::vector<bool> telling(static_cast<std::size_t>(n));
    int holds = 0;
    for (int i = 0; i < n; ++i) {
      telling[static_cast<std::size_t>(i)] = statement_holds(p.statements[static_cast<std::size_t>(i)], t, n);
      holds += telling[static_cast<std::size_t>(i)] ? 1 : 0;
    }
    if (holds == t) {
      ++solutions;
      found = telling;
    }
  }
  if (solutions == 0) return SolveOutcome::none();
  if (solutions > 1) return SolveOutcome::ambiguous();
  return SolveOutcome::solved(detail::make_truth(p, found));
}

inline constexpr int kOracleMaxSpeakers = 16;

inline bool oracle_tractable(const TruthTellerParams& p) {
  return p.speaker_count() <= kOracleMaxSpeakers;
}

// Exhaustive check over all 2^n truth assignments: an assignment is
// consistent when every speaker's statement evaluates to exactly their own
// truth flag. Shares only the statement semantics with solve().
inline SolveOutcome oracle(const TruthTellerParams& p) {
  const int n = p.speaker_count();
  if (n > kOracleMaxSpeakers) {
    throw Error(Errc::too_large, std::string(kFamilyId) + ": oracle bound is " +
                                     std::to_string(kOracleMaxSpeakers) + " speakers, got " +
                                     std::to_string(n));
  }
  std::uint32_t consistent_mask = 0;
  int consistent = 0;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    const int t = __builtin_popcount(mask);
    bool ok = true;
    for (int i = 0; i < n && ok; ++i) {
      const bool says = statement_holds(p.statements[static_cast<std::size_t>(i)], t, n);
      const bool is_teller = (mask >> i) & 1u;
      ok = says == is_teller;
    }
    if (ok) {
      ++consistent;
      consistent_mask = mask;
      if (consistent > 1) break;
    }
  }
  if (consistent == 0) return SolveOutcome::none();
  if (consistent > 1) return SolveOutcome::ambiguous();
  std::vector<bool> telling(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) telling[static_cast<std::size_t>(i)] = (consistent_mask >> i) & 1u;
  return SolveOutcome::solved(detail::make_truth(p, telling));
}

namespace detail {

inline const std::vector<std::string>& name_pool() {
  static const std::vector<std::string> pool = {
      "Wright",  "Turner",  "Ross",    "Torres", "Harris", "Brooks", "Garcia", "Price",
      "Bennett", "Wood",    "Barnes",  "Kelly",  "Howard", "Cox",    "Ward",   "Gray",
      "James",   "Watson",  "Ellis",   "Fisher", "Reyes",  "Stone",  "Hunt",   "Palmer",
      "Boyd",    "Gordon",  "Lane",    "Rice",   "Dunn",   "Perry",  "Holt",   "Drake",
      "Vance",   "Sutton",  "Mercer",  "Quinn",  "Frost",  "Bishop", "Cross",  "Hale",
      "Sloan",   "Marsh",   "Pierce",  "Blair",  "Rhodes", "Casey",  "Lowe",   "Nash",
      "Burke",   "Chandler"};
  return pool;
}

} // namespace detail

// One unvalidated draw; the registry layer re-draws until the answer is unique.
inline TruthTellerParams draw(Rng& rng, const ParamBag& level_params) {
  const int n = static_cast<int>(level_params.at("num"));
  TruthTellerParams p;
  const auto& pool = detail::name_pool();
  std::vector<std::string> names = pool;
  rng.shuffle(names);
  for (int i = 0; i < n; ++i) {
    if (i < static_cast<int>(names.size())) {
      p.names.push_back(names[static_cast<std::size_t>(i)]);
    } else {
      p.names.push_back("Member-" + std::to_string(i + 1));
    }
  }
  for (int i = 0; i < n; ++i) {
    TruthStatement s;
    const int kind = static_cast<int>(rng.below(100));
    if (kind < 35) {
      s.quant = Quantifier::at_least;
      s.about = ClaimSubject::lie;
    } else if (kind < 60) {
      s.quant = Quantifier::at_least;
      s.about = ClaimSubject::truth;
    } else if (kind < 80) {
      s.quant = Quantifier::exactly;
      s.about = ClaimSubject::lie;
    } else {
      s.quant = Quantifier::exactly;
      s.about = ClaimSubject::truth;
    }
    s.count = static_cast<int>(rng.range(1, n));
    p.statements.push_back(s);
  }
  return p;
}

inline std::string statement_text(const std::string& name, const TruthStatement& s, Language lang) {
  if (lang == Language::en) {
    const char* quant = s.quant == Quantifier::exactly ? "exactly" : "at least";
    const char* about = s.about == ClaimSubject::truth ? "truth" : "lie";
    return name + ": There are " + quant + " " + std::to_string(s.count) + " people telling the " +
           about + ".";
  }
  const std::string quant = s.quant == Quantifier::exactly ? "恰好" : "至少";
  const std::string about = s.about == ClaimSubject::truth ? "真话" : "假话";
  return name + ":" + quant + "有 " + std::to_string(s.count) + " 人说" + about + "。";
}

inline SlotFills fills(const TruthTellerParams& p, Language lang) {
  SlotFills f;
  f.language = lang;
  f.fills.push_back(std::to_string(p.speaker_count()));
  std::vector<std::string> lines;
  for (std::size_t i = 0; i < p.statements.size(); ++i) {
    lines.push_back(statement_text(p.names[i], p.statements[i], lang));
  }
  f.fills.push_back(text::join(lines, " "));
  return f;
}

inline std::vector<Template> templates() {
  std::vector<Template> out;
  Template t;
  t.family_id = kFamilyId;
  t.arity = 2;

  t.template_id = "truth_teller.en.chat";
  t.language = Language::en;
  t.body =
      "Observe the chat records of a certain study group. There are [Slot 1] members who sent "
      "messages one after another, and the content is: [Slot 2] Question: Among these [Slot 1] "
      "members who sent messages, who are the ones telling the truth?";
  out.push_back(t);

  t.template_id = "truth_teller.en.council";
  t.body =
      "On a remote island, [Slot 1] villagers gathered around the council fire, and each made a "
      "single claim about the whole group: [Slot 2] Every claim is either entirely true or "
      "entirely false, and a villager tells the truth exactly when their claim is true. Which "
      "villagers are telling the truth?";
  out.push_back(t);

  t.template_id = "truth_teller.zh.chat";
  t.language = Language::zh;
  t.body =
      "观察某学习小组的聊天记录。共有 [Slot 1] 位成员先后发言,内容如下:[Slot 2] "
      "问题:在这 [Slot 1] 位发言的成员中,哪些人说的是真话?";
  out.push_back(t);

  t.template_id = "truth_teller.zh.council";
  t.body =
      "在一座偏远的小岛上,[Slot 1] 位村民围坐在议事篝火旁,每人都对全体村民的情况做出了一个断言:"
      "[Slot 2] 每个断言要么完全为真,要么完全为假,而村民说真话当且仅当其断言为真。"
      "请问哪些村民说的是真话?";
  out.push_back(t);

  return out;
}

inline TaskDescriptor make_descriptor() {
  TaskDescriptor d;
  d.family_id = kFamilyId;
  d.taxonomy = {TaskDomain::object_manipulation, CoreAbility::constraint_satisfaction,
                DifficultySource::large_search_space};
  d.answer_kind = AnswerKind::value_set;
  d.scoring_method = ScoringMethod::f1;
  d.languages = {Language::en, Language::zh};
  d.ladder.complexity_params = {"num"};
  d.ladder.integer_params = {"num"};
  d.ladder.levels = {{1, {{"num", 3}}},  {2, {{"num", 5}}},  {3, {{"num", 8}}},
                     {4, {{"num", 10}}}, {5, {{"num", 12}}}, {6, {{"num", 15}}},
                     {7, {{"num", 18}}}, {8, {{"num", 22}}}, {9, {{"num", 26}}},
                     {10, {{"num", 30}}}};
  return d;
}

} // namespace logicforge::truth_teller
