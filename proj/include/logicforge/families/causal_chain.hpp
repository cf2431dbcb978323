#pragma once

#include <algorithm>
#include <array>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "logicforge/descriptor.hpp"
#include "logicforge/generator.hpp"
#include "logicforge/rng.hpp"
#include "logicforge/templating.hpp"

namespace logicforge::causal_chain {

inline constexpr const char* kFamilyId = "causal_chain";

namespace detail {

inline GroundTruth chain_truth(const std::vector<std::string>& ids) {
  GroundTruth truth;
  truth.value = ids;
  const std::string canonical = text::join(ids, " -> ");
  truth.canonical_text = {{Language::en, canonical}, {Language::zh, canonical}};
  return truth;
}

} // namespace detail

// The genuine events are exactly those mentioned by some condition; both
// condition forms assert "from happens before to". The answer is the unique
// topological order, found by repeatedly taking the single source.
inline SolveOutcome solve(const CausalChainParams& p) {
  const int n = static_cast<int>(p.events.size());
  std::set<int> genuine;
  std::vector<std::vector<int>> out_edges(static_cast<std::size_t>(n));
  std::vector<int> indegree(static_cast<std::size_t>(n), 0);
  for (const auto& cond : p.conditions) {
    if (cond.from < 0 || cond.from >= n || cond.to < 0 || cond.to >= n) {
      return SolveOutcome::none();
    }
    genuine.insert(cond.from);
    genuine.insert(cond.to);
    out_edges[static_cast<std::size_t>(cond.from)].push_back(cond.to);
    ++indegree[static_cast<std::size_t>(cond.to)];
  }
  if (genuine.empty()) return SolveOutcome::none();

  std::vector<std::string> order;
  std::set<int> pending = genuine;
  while (!pending.empty()) {
    std::vector<int> sources;
    for (int e : pending) {
      if (indegree[static_cast<std::size_t>(e)] == 0) sources.push_back(e);
    }
    if (sources.empty()) return SolveOutcome::none();      // cycle
    if (sources.size() > 1) return SolveOutcome::ambiguous(); // order not forced
    const int e = sources.front();
    order.push_back(p.events[static_cast<std::size_t>(e)].id);
    pending.erase(e);
    for (int to : out_edges[static_cast<std::size_t>(e)]) --indegree[static_cast<std::size_t>(to)];
  }
  return SolveOutcome::solved(detail::chain_truth(order));
}

inline constexpr int kOracleMaxEvents = 7;

namespace detail {

inline std::set<int> genuine_set(const CausalChainParams& p) {
  std::set<int> g;
  for (const auto& cond : p.conditions) {
    g.insert(cond.from);
    g.insert(cond.to);
  }
  return g;
}

} // namespace detail

inline bool oracle_tractable(const CausalChainParams& p) {
  return detail::genuine_set(p).size() <= kOracleMaxEvents;
}

// Permutation search: try every ordering of the genuine events and keep those
// satisfying all before/after constraints.
inline SolveOutcome oracle(const CausalChainParams& p) {
  const auto genuine = detail::genuine_set(p);
  if (genuine.size() > kOracleMaxEvents) {
    throw Error(Errc::too_large, std::string(kFamilyId) + ": oracle bound is " +
                                     std::to_string(kOracleMaxEvents) + " genuine events");
  }
  if (genuine.empty()) return SolveOutcome::none();
  std::vector<int> perm(genuine.begin(), genuine.end());
  std::vector<int> position(p.events.size(), 0);
  std::vector<int> valid_perm;
  int valid = 0;
  do {
    for (std::size_t i = 0; i < perm.size(); ++i) {
      position[static_cast<std::size_t>(perm[i])] = static_cast<int>(i);
    }
    bool ok = true;
    for (const auto& cond : p.conditions) {
      if (position[static_cast<std::size_t>(cond.from)] >= position[static_cast<std::size_t>(cond.to)]) {
        ok = false;
        break;
      }
    }
    if (ok) {
      ++valid;
      valid_perm = perm;
      if (valid > 1) break;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  if (valid == 0) return SolveOutcome::none();
  if (valid > 1) return SolveOutcome::ambiguous();
  std::vector<std::string> ids;
  for (int e : valid_perm) ids.push_back(p.events[static_cast<std::size_t>(e)].id);
  return SolveOutcome::solved(detail::chain_truth(ids));
}

namespace detail {

using Bi = std::pair<const char*, const char*>; // (en, zh)

inline const std::vector<std::vector<Bi>>& scenario_pool() {
  static const std::vector<std::vector<Bi>> pool = {
      {{"Heavy rain", "暴雨"},
       {"Flash flooding on the highway", "高速公路突发积水"},
       {"Highway closure", "高速公路封闭"},
       {"Massive traffic detour", "车流大规模绕行"},
       {"Gridlock on county roads", "县道严重拥堵"},
       {"Delayed freight deliveries", "货运配送延误"},
       {"Empty supermarket shelves", "超市货架缺货"},
       {"Panic buying in town", "镇上出现抢购"},
       {"Price controls announced", "官方宣布限价"},
       {"Black-market reselling", "出现黑市倒卖"},
       {"Police crackdown", "警方开展整治"},
       {"Curfew in the market district", "市场区实行宵禁"},
       {"Night deliveries rescheduled", "夜间配送改期"},
       {"Warehouse backlog grows", "仓库积压加剧"},
       {"Overtime shifts ordered", "仓库安排加班"},
       {"Worker fatigue complaints", "工人疲劳投诉增多"}},
      {{"Power grid fluctuation", "电网波动"},
       {"Assembly line halt", "装配线停机"},
       {"Production quota missed", "生产指标未完成"},
       {"Shipment postponed", "发货推迟"},
       {"Client contract penalty", "客户合同罚款"},
       {"Quarterly loss reported", "季度亏损披露"},
       {"Stock price dip", "股价下跌"},
       {"Emergency board meeting", "董事会紧急会议"},
       {"Cost-cutting plan approved", "成本削减方案通过"},
       {"Hiring freeze", "招聘冻结"},
       {"Overtime ban", "实行加班禁令"},
       {"Maintenance deferred", "设备维护推迟"},
       {"Machine breakdown", "机器故障"},
       {"Safety inspection ordered", "安全检查启动"},
       {"Production line retooled", "产线改造"},
       {"Output gradually recovers", "产量逐步恢复"}},
      {{"Sudden mountain fog", "山区突起大雾"},
       {"Trail markers missed", "错过路标"},
       {"Hikers stray off route", "徒步队偏离路线"},
       {"GPS signal lost", "GPS 信号丢失"},
       {"Camp overdue alarm", "营地逾期警报"},
       {"Rescue team dispatched", "救援队出动"},
       {"Drone search begins", "无人机搜索开始"},
       {"Flare spotted at dusk", "黄昏发现信号弹"},
       {"Hikers located by the ridge", "在山脊旁找到徒步者"},
       {"Medical check on site", "现场医疗检查"},
       {"Helicopter evacuation", "直升机转运"},
       {"Trail closed for review", "步道关闭整顿"},
       {"New signage installed", "安装新路标"},
       {"Safety briefing mandated", "强制安全说明"},
       {"Permit system introduced", "引入许可制度"},
       {"Visitor numbers stabilize", "游客数量回稳"}}};
  return pool;
}

inline const std::vector<Bi>& distractor_pool() {
  static const std::vector<Bi> pool = {
      {"Space station data garbled", "空间站数据乱码"},
      {"A lighthouse repainted", "灯塔重新粉刷"},
      {"Library catalog reshuffled", "图书馆目录重排"},
      {"Vintage tram exhibition", "老式电车展览"},
      {"Meteor shower observed", "观测到流星雨"},
      {"Local bakery contest", "本地烘焙比赛"},
      {"New park benches installed", "公园安装新长椅"},
      {"Street mural unveiled", "街头壁画揭幕"},
      {"Antique clock auction", "古董钟拍卖"},
      {"Chess club tournament", "棋社锦标赛"},
      {"Aquarium opens night tours", "水族馆开放夜场"},
      {"Hot-air balloon festival", "热气球节"}};
  return pool;
}

inline std::string fresh_id(Rng& rng, std::set<std::string>& used) {
  while (true) {
    std::string id;
    id.push_back(static_cast<char>('A' + rng.below(26)));
    id += std::to_string(rng.range(1, 99));
    if (used.insert(id).second) return id;
  }
}

} // namespace detail

inline CausalChainParams draw(Rng& rng, const ParamBag& level_params) {
  const auto& scenarios = detail::scenario_pool();
  const auto& scenario = scenarios[rng.below(scenarios.size())];
  const int max_events = static_cast<int>(scenario.size());
  const int genuine = std::clamp(static_cast<int>(level_params.at("events")), 2, max_events);
  const auto distract_it = level_params.find("distractors");
  const int distractors =
      std::clamp(distract_it == level_params.end() ? 2 : static_cast<int>(distract_it->second), 0,
                 static_cast<int>(detail::distractor_pool().size()));

  const int start = static_cast<int>(rng.below(static_cast<std::uint64_t>(max_events - genuine + 1)));
  std::set<std::string> used_ids;
  CausalChainParams p;
  std::vector<int> chain_indices;
  for (int i = 0; i < genuine; ++i) {
    const auto& [en, zh] = scenario[static_cast<std::size_t>(start + i)];
    p.events.push_back({detail::fresh_id(rng, used_ids), en, zh});
    chain_indices.push_back(i);
  }
  std::vector<detail::Bi> extras = detail::distractor_pool();
  rng.shuffle(extras);
  for (int i = 0; i < distractors; ++i) {
    const auto& [en, zh] = extras[static_cast<std::size_t>(i)];
    p.events.push_back({detail::fresh_id(rng, used_ids), en, zh});
  }

  // Shuffle presentation order, remembering where each chain member went.
  std::vector<int> order(p.events.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  rng.shuffle(order);
  std::vector<CausalEvent> shuffled;
  std::vector<int> position(p.events.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    position[static_cast<std::size_t>(order[i])] = static_cast<int>(i);
    shuffled.push_back(p.events[static_cast<std::size_t>(order[i])]);
  }
  p.events = std::move(shuffled);

  for (int i = 0; i + 1 < genuine; ++i) {
    CausalCondition cond;
    cond.from = position[static_cast<std::size_t>(chain_indices[static_cast<std::size_t>(i)])];
    cond.to = position[static_cast<std::size_t>(chain_indices[static_cast<std::size_t>(i + 1)])];
    cond.after_form = rng.chance(0.5);
    p.conditions.push_back(cond);
  }
  rng.shuffle(p.conditions);
  return p;
}

namespace detail {

inline std::string condition_text(const CausalChainParams& p, const CausalCondition& c,
                                  Language lang) {
  const auto& from = p.events[static_cast<std::size_t>(c.from)];
  const auto& to = p.events[static_cast<std::size_t>(c.to)];
  if (lang == Language::en) {
    if (c.after_form) {
      return std::string("Typically, [") + to.desc_en + "] will occur shortly after [" +
             from.desc_en + "].";
    }
    return std::string("Without \"") + from.desc_en + "\", \"" + to.desc_en +
           "\" is unlikely to occur.";
  }
  if (c.after_form) {
    return std::string("通常,[") + from.desc_zh + "]发生后不久,[" + to.desc_zh + "]就会随之发生。";
  }
  return std::string("如果没有\"") + from.desc_zh + "\",\"" + to.desc_zh + "\"就不太可能发生。";
}

} // namespace detail

inline SlotFills fills(const CausalChainParams& p, Language lang) {
  SlotFills f;
  f.language = lang;
  std::vector<std::string> events;
  for (const auto& e : p.events) {
    events.push_back(e.id + ": " + (lang == Language::en ? e.desc_en : e.desc_zh));
  }
  f.fills.push_back(text::join(events, "\n"));
  std::vector<std::string> conds;
  for (std::size_t i = 0; i < p.conditions.size(); ++i) {
    conds.push_back("(" + std::to_string(i + 1) + ") " +
                    detail::condition_text(p, p.conditions[i], lang));
  }
  f.fills.push_back(text::join(conds, "\n"));
  return f;
}

inline std::vector<Template> templates() {
  std::vector<Template> out;
  Template t;
  t.family_id = kFamilyId;
  t.arity = 2;

  t.template_id = "causal_chain.en.cascade";
  t.language = Language::en;
  t.body =
      "In a particular location, a series of cascading effects occurred. Determine the valid "
      "causal chain based on the following conditions. Some listed events are irrelevant noise "
      "and belong to no chain.\nEvents:\n[Slot 1]\nConditions:\n[Slot 2]\nQuestion: What is the "
      "established causal chain? List the event IDs in causal order.";
  out.push_back(t);

  t.template_id = "causal_chain.en.incident";
  t.body =
      "An incident review board is reconstructing how a disruption unfolded. The log below lists "
      "observed events, not all of which are related; the numbered findings state how pairs of "
      "events depend on each other.\nEvent log:\n[Slot 1]\nFindings:\n[Slot 2]\nReconstruct the "
      "single chain of cause and effect, listing the event IDs in order.";
  out.push_back(t);

  t.template_id = "causal_chain.zh.cascade";
  t.language = Language::zh;
  t.body =
      "某地发生了一系列连锁反应。请根据下列条件判断有效的因果链。列出的事件中有一些是无关噪声,"
      "不属于任何链条。\n事件:\n[Slot 1]\n条件:\n[Slot 2]\n问题:成立的因果链是什么?"
      "请按因果顺序列出事件编号。";
  out.push_back(t);

  t.template_id = "causal_chain.zh.incident";
  t.body =
      "事故复盘委员会正在还原一次故障的演变过程。下方日志列出了观察到的事件,其中并非所有事件都彼此相关;"
      "带编号的结论说明了事件两两之间的依赖关系。\n事件日志:\n[Slot 1]\n结论:\n[Slot 2]\n"
      "请重建唯一的因果链,按顺序列出事件编号。";
  out.push_back(t);

  return out;
}

inline TaskDescriptor make_descriptor() {
  TaskDescriptor d;
  d.family_id = kFamilyId;
  d.taxonomy = {TaskDomain::planning_scheduling, CoreAbility::info_extraction_integration,
                DifficultySource::complex_conditions};
  d.answer_kind = AnswerKind::sequence;
  d.scoring_method = ScoringMethod::similarity;
  d.languages = {Language::en, Language::zh};
  d.ladder.complexity_params = {"events"};
  d.ladder.integer_params = {"events", "distractors"};
  d.ladder.levels = {{1, {{"events", 3}, {"distractors", 1}}},
                     {2, {{"events", 4}, {"distractors", 1}}},
                     {3, {{"events", 4}, {"distractors", 2}}},
                     {4, {{"events", 5}, {"distractors", 2}}},
                     {5, {{"events", 6}, {"distractors", 3}}},
                     {6, {{"events", 7}, {"distractors", 3}}},
                     {7, {{"events", 8}, {"distractors", 4}}},
                     {8, {{"events", 9}, {"distractors", 4}}},
                     {9, {{"events", 10}, {"distractors", 5}}},
                     {10, {{"events", 12}, {"distractors", 6}}}};
  return d;
}

} // namespace logicforge::causal_chain
