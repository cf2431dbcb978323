#pragma once

#include <cctype>
#include <regex>
#include <string>
#include <vector>

#include "logicforge/descriptor.hpp"
#include "logicforge/generator.hpp"
#include "logicforge/rng.hpp"
#include "logicforge/templating.hpp"

namespace logicforge::seal_decode {

inline constexpr const char* kFamilyId = "seal_decode";

// Decoding rules: drop lowercase letters, keep uppercase letters in order,
// sum every maximal digit run, and append the sum as the suffix of the new
// seal. A '-' immediately before a digit run makes that run negative; any
// other '-' is inert filler.
inline std::string decode_seal(const std::string& seal) {
  std::string upper;
  long long sum = 0;
  std::size_t i = 0;
  while (i < seal.size()) {
    const unsigned char c = static_cast<unsigned char>(seal[i]);
    if (std::isupper(c)) {
      upper.push_back(seal[i]);
      ++i;
    } else if (std::isdigit(c)) {
      const bool negative = i > 0 && seal[i - 1] == '-';
      long long value = 0;
      while (i < seal.size() && std::isdigit(static_cast<unsigned char>(seal[i]))) {
        value = value * 10 + (seal[i] - '0');
        ++i;
      }
      sum += negative ? -value : value;
    } else {
      ++i;
    }
  }
  return upper + std::to_string(sum);
}

namespace detail {

inline GroundTruth length_truth(std::size_t len) {
  GroundTruth truth;
  truth.value = static_cast<double>(len);
  const std::string canonical = std::to_string(len);
  truth.canonical_text = {{Language::en, canonical}, {Language::zh, canonical}};
  return truth;
}

} // namespace detail

inline SolveOutcome solve(const SealDecodeParams& p) {
  return SolveOutcome::solved(detail::length_truth(decode_seal(p.seal).size()));
}

inline constexpr std::size_t kOracleMaxLength = 4096;

inline bool oracle_tractable(const SealDecodeParams& p) { return p.seal.size() <= kOracleMaxLength; }

// Regex-based recount: uppercase letters and signed digit runs are extracted
// by pattern matching and only their lengths are combined, without ever
// building the decoded string.
inline SolveOutcome oracle(const SealDecodeParams& p) {
  if (!oracle_tractable(p)) {
    throw Error(Errc::too_large, std::string(kFamilyId) + ": oracle bound is " +
                                     std::to_string(kOracleMaxLength) + " chars");
  }
  static const std::regex upper_re("[A-Z]");
  static const std::regex run_re("-?[0-9]+");
  const std::size_t upper_count = static_cast<std::size_t>(
      std::distance(std::sregex_iterator(p.seal.begin(), p.seal.end(), upper_re),
                    std::sregex_iterator()));
  long long sum = 0;
  for (auto it = std::sregex_iterator(p.seal.begin(), p.seal.end(), run_re);
       it != std::sregex_iterator(); ++it) {
    sum += std::stoll(it->str());
  }
  return SolveOutcome::solved(detail::length_truth(upper_count + std::to_string(sum).size()));
}

inline SealDecodeParams draw(Rng& rng, const ParamBag& level_params) {
  const int target_len = std::max(4, static_cast<int>(level_params.at("length")));
  const auto runs_it = level_params.find("runs");
  const int digit_runs = std::max(1, runs_it == level_params.end()
                                         ? 2
                                         : static_cast<int>(runs_it->second));

  auto letter = [&rng]() {
    return rng.chance(0.5) ? static_cast<char>('a' + rng.below(26))
                           : static_cast<char>('A' + rng.below(26));
  };

  // Letters separate the digit runs so each run stays maximal.
  std::string seal;
  seal.push_back(static_cast<char>('A' + rng.below(26)));
  for (int r = 0; r < digit_runs; ++r) {
    if (rng.chance(0.2)) seal.push_back('-');
    const int len = static_cast<int>(rng.range(1, 4));
    for (int i = 0; i < len; ++i) seal.push_back(static_cast<char>('0' + rng.below(10)));
    if (r + 1 < digit_runs) seal.push_back(letter());
  }
  while (static_cast<int>(seal.size()) < target_len) seal.push_back(letter());
  return SealDecodeParams{seal};
}

inline SlotFills fills(const SealDecodeParams& p, Language lang) {
  SlotFills f;
  f.language = lang;
  f.fills.push_back(p.seal);
  return f;
}

inline std::vector<Template> templates() {
  std::vector<Template> out;
  Template t;
  t.family_id = kFamilyId;
  t.arity = 1;

  t.template_id = "seal_decode.en.museum";
  t.language = Language::en;
  t.body =
      "The Royal Antiquities Museum has enlisted a legendary cipher expert to reassign symbolic "
      "seals for its treasured artifacts. The original seals consist of interleaved uppercase "
      "letters, lowercase letters, and positive/negative integers. The specific seal to be "
      "decoded is: [Slot 1]. Decoding rules are as follows: 1. Eliminate all lowercase letters. "
      "2. Retain uppercase letters in their original sequence. 3. Sum all integers (defined as "
      "consecutive digits) to form the numerical suffix of the new seal. What is the length of "
      "the newly assigned seal after applying these rules?";
  out.push_back(t);

  t.template_id = "seal_decode.en.locker";
  t.body =
      "A courier depot labels every locker with a scrambled code made of uppercase letters, "
      "lowercase letters, and positive/negative integers. Tonight the clerk must shorten the "
      "code [Slot 1] by the standard procedure: first remove every lowercase letter, then keep "
      "the uppercase letters in their original order, and finally add up all integers (maximal "
      "runs of consecutive digits) and append that total to the end as digits. How many "
      "characters long is the shortened code?";
  out.push_back(t);

  t.template_id = "seal_decode.zh.museum";
  t.language = Language::zh;
  t.body =
      "皇家文物博物馆聘请了一位传奇密码专家,为馆藏珍品重新分配符号印章。原始印章由大写字母、"
      "小写字母以及正负整数交错组成。需要解码的印章是:[Slot 1]。解码规则如下:"
      "1. 删除所有小写字母。2. 按原有顺序保留大写字母。3. 将所有整数(即连续的数字串)求和,"
      "作为新印章末尾的数字后缀。请问按规则处理后,新印章的长度是多少?";
  out.push_back(t);

  t.template_id = "seal_decode.zh.locker";
  t.body =
      "某快递站用一串由大写字母、小写字母和正负整数混杂而成的乱码来标记储物柜。今晚管理员要按标准流程"
      "压缩编码 [Slot 1]:先删去所有小写字母,再按原顺序保留大写字母,最后把所有整数(即最长的连续数字串)"
      "求和,并把这个总和作为数字接在末尾。压缩后的编码一共有多少个字符?";
  out.push_back(t);

  return out;
}

inline TaskDescriptor make_descriptor() {
  TaskDescriptor d;
  d.family_id = kFamilyId;
  d.taxonomy = {TaskDomain::symbolic_manipulation, CoreAbility::instruction_following,
                DifficultySource::intrinsic_llm_weaknesses};
  d.answer_kind = AnswerKind::numeric;
  d.scoring_method = ScoringMethod::abs_diff_rate;
  d.languages = {Language::en, Language::zh};
  d.ladder.complexity_params = {"length"};
  d.ladder.integer_params = {"length", "runs"};
  d.ladder.levels = {{1, {{"length", 8}, {"runs", 1}}},   {2, {{"length", 12}, {"runs", 2}}},
                     {3, {{"length", 18}, {"runs", 2}}},  {4, {{"length", 26}, {"runs", 3}}},
                     {5, {{"length", 36}, {"runs", 4}}},  {6, {{"length", 48}, {"runs", 5}}},
                     {7, {{"length", 62}, {"runs", 6}}},  {8, {{"length", 78}, {"runs", 7}}},
                     {9, {{"length", 96}, {"runs", 8}}},  {10, {{"length", 120}, {"runs", 10}}}};
  return d;
}

} // namespace logicforge::seal_decode
