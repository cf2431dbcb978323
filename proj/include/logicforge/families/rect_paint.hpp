#pragma once

#include <algorithm>
#include <array>
#include <set>
#include <string>
#include <vector>

#include "logicforge/descriptor.hpp"
#include "logicforge/generator.hpp"
#include "logicforge/rng.hpp"
#include "logicforge/templating.hpp"

namespace logicforge::rect_paint {

inline constexpr const char* kFamilyId = "rect_paint";

namespace detail {

struct Box {
  int r1, c1, r2, c2;
};

inline GroundTruth yes_no_truth(bool feasible) {
  GroundTruth truth;
  const std::string canonical = feasible ? "yes" : "no";
  truth.value = canonical;
  truth.canonical_text = {{Language::en, canonical}, {Language::zh, canonical}};
  return truth;
}

inline std::vector<int> present_colors(const RectPaintParams& p) {
  std::set<int> seen;
  for (const auto& row : p.target) seen.insert(row.begin(), row.end());
  return std::vector<int>(seen.begin(), seen.end());
}

inline Box bounding_box(const RectPaintParams& p, int color) {
  Box b{p.height, p.width, -1, -1};
  for (int r = 0; r < p.height; ++r) {
    for (int c = 0; c < p.width; ++c) {
      if (p.target[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] == color) {
        b.r1 = std::min(b.r1, r);
        b.c1 = std::min(b.c1, c);
        b.r2 = std::max(b.r2, r);
        b.c2 = std::max(b.c2, c);
      }
    }
  }
  return b;
}

} // namespace detail

// Reverse color-elimination: the color painted last must own every cell of
// its bounding box; peel it off (cells become wildcards) and repeat. The
// target is paintable iff every present color can eventually be peeled.
inline SolveOutcome solve(const RectPaintParams& p) {
  const auto colors = detail::present_colors(p);
  std::vector<std::vector<bool>> freed(static_cast<std::size_t>(p.height),
                                       std::vector<bool>(static_cast<std::size_t>(p.width), false));
  std::vector<int> remaining = colors;
  bool progress = true;
  while (!remaining.empty() && progress) {
    progress = false;
    for (std::size_t i = 0; i < remaining.size(); ++i) {
      const int color = remaining[i];
      const auto box = detail::bounding_box(p, color);
      bool clean = true;
      for (int r = box.r1; r <= box.r2 && clean; ++r) {
        for (int c = box.c1; c <= box.c2 && clean; ++c) {
          const int cell = p.target[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
          clean = cell == color || freed[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
        }
      }
      if (clean) {
        for (int r = box.r1; r <= box.r2; ++r) {
          for (int c = box.c1; c <= box.c2; ++c) {
            freed[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] = true;
          }
        }
        remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(i));
        progress = true;
        break;
      }
    }
  }
  return SolveOutcome::solved(detail::yes_no_truth(remaining.empty()));
}

inline constexpr int kOracleMaxSide = 4;
inline constexpr int kOracleMaxColors = 6;

inline bool oracle_tractable(const RectPaintParams& p) {
  return p.height <= kOracleMaxSide && p.width <= kOracleMaxSide &&
         detail::present_colors(p).size() <= kOracleMaxColors;
}

// Exhaustive search over painting orders. An order works when, walking it
// backwards, each color's bounding box holds only that color or cells already
// peeled by later paints.
inline SolveOutcome oracle(const RectPaintParams& p) {
  if (!oracle_tractable(p)) {
    throw Error(Errc::too_large, std::string(kFamilyId) + ": oracle bound is " +
                                     std::to_string(kOracleMaxSide) + "x" +
                                     std::to_string(kOracleMaxSide) + " with <= " +
                                     std::to_string(kOracleMaxColors) + " colors");
  }
  std::vector<int> order = detail::present_colors(p);
  std::sort(order.begin(), order.end());
  bool feasible = false;
  do {
    std::vector<std::vector<bool>> peeled(
        static_cast<std::size_t>(p.height),
        std::vector<bool>(static_cast<std::size_t>(p.width), false));
    bool ok = true;
    for (auto it = order.rbegin(); it != order.rend() && ok; ++it) {
      const auto box = detail::bounding_box(p, *it);
      for (int r = box.r1; r <= box.r2 && ok; ++r) {
        for (int c = box.c1; c <= box.c2 && ok; ++c) {
          ok = p.target[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] == *it ||
               peeled[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
        }
      }
      for (int r = box.r1; r <= box.r2; ++r) {
        for (int c = box.c1; c <= box.c2; ++c) {
          peeled[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] = true;
        }
      }
    }
    feasible = ok;
  } while (!feasible && std::next_permutation(order.begin(), order.end()));
  return SolveOutcome::solved(detail::yes_no_truth(feasible));
}

namespace detail {

// Simulate an actual painting session: the first color covers the whole
// canvas, later colors each paint one random rectangle.
inline RectPaintParams paint_forward(Rng& rng, int size, int colors) {
  RectPaintParams p;
  p.height = size;
  p.width = size;
  p.num_colors = colors;
  std::vector<int> order(static_cast<std::size_t>(colors));
  for (int i = 0; i < colors; ++i) order[static_cast<std::size_t>(i)] = i + 1;
  rng.shuffle(order);
  p.target.assign(static_cast<std::size_t>(size),
                  std::vector<int>(static_cast<std::size_t>(size), order[0]));
  for (std::size_t k = 1; k < order.size(); ++k) {
    const int r1 = static_cast<int>(rng.below(static_cast<std::uint64_t>(size)));
    const int r2 = static_cast<int>(rng.range(r1, size - 1));
    const int c1 = static_cast<int>(rng.below(static_cast<std::uint64_t>(size)));
    const int c2 = static_cast<int>(rng.range(c1, size - 1));
    for (int r = r1; r <= r2; ++r) {
      for (int c = c1; c <= c2; ++c) {
        p.target[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] = order[k];
      }
    }
  }
  return p;
}

inline bool feasible(const RectPaintParams& p) {
  return std::get<std::string>(solve(p).truth->value) == "yes";
}

} // namespace detail

// Draws with a balanced yes/no answer: feasible grids come from forward
// painting, infeasible ones from perturbing a feasible grid until the
// elimination check breaks.
inline RectPaintParams draw(Rng& rng, const ParamBag& level_params) {
  const int size = std::max(1, static_cast<int>(level_params.at("size")));
  const int colors = std::max(1, static_cast<int>(level_params.at("colors")));
  const bool want_feasible = rng.chance(0.5);
  RectPaintParams p = detail::paint_forward(rng, size, colors);
  if (want_feasible) return p;
  for (int attempt = 0; attempt < 32; ++attempt) {
    const auto present = detail::present_colors(p);
    if (present.size() < 2) {
      p = detail::paint_forward(rng, size, colors);
      continue;
    }
    const int r = static_cast<int>(rng.below(static_cast<std::uint64_t>(size)));
    const int c = static_cast<int>(rng.below(static_cast<std::uint64_t>(size)));
    const int old = p.target[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
    std::vector<int> candidates;
    for (int color : present) {
      if (color != old) candidates.push_back(color);
    }
    if (candidates.empty()) continue;
    p.target[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] = rng.pick(candidates);
    if (!detail::feasible(p)) return p;
  }
  return p; // fall back to whatever the perturbation ended on
}

inline SlotFills fills(const RectPaintParams& p, Language lang) {
  SlotFills f;
  f.language = lang;
  std::vector<std::string> rows;
  for (int r = 0; r < p.height; ++r) {
    std::vector<std::string> cells;
    for (int value : p.target[static_cast<std::size_t>(r)]) cells.push_back(std::to_string(value));
    if (lang == Language::en) {
      rows.push_back("row " + std::to_string(r + 1) + ": color: " + text::join(cells, ", "));
    } else {
      rows.push_back("第 " + std::to_string(r + 1) + " 行:颜色:" + text::join(cells, ", "));
    }
  }
  f.fills.push_back(text::join(rows, "\n"));
  return f;
}

inline std::vector<Template> templates() {
  std::vector<Template> out;
  Template t;
  t.family_id = kFamilyId;
  t.arity = 1;

  t.template_id = "rect_paint.en.camp";
  t.language = Language::en;
  t.body =
      "In the art summer camp, the student Lily is creating an abstract painting. The canvas is "
      "a grid composed of small squares, and each square must end up with a specific color. "
      "Lily's rule is that each time she can only use one color to paint a complete filled "
      "rectangular area, later strokes cover earlier ones, and the same color cannot be reused. "
      "Now given the target color of each position on the canvas:\n[Slot 1]\nCan Lily complete "
      "the painting according to the rules? Answer yes or no.";
  out.push_back(t);

  t.template_id = "rect_paint.en.mural";
  t.body =
      "A decorating crew is reproducing a pixel mural on a wall divided into square tiles. In "
      "one pass the crew rolls a single paint color over one solid rectangular block of tiles; "
      "newer passes paint over older ones, and no color may be used in two passes. The final "
      "mural must look exactly like this:\n[Slot 1]\nCan the crew finish the mural under these "
      "constraints? Answer yes or no.";
  out.push_back(t);

  t.template_id = "rect_paint.zh.camp";
  t.language = Language::zh;
  t.body =
      "在美术夏令营里,学生 Lily 正在创作一幅抽象画。画布是由小方格组成的网格,每个方格最终都要呈现"
      "指定的颜色。Lily 的规则是:每次只能用一种颜色涂满一个完整的实心矩形区域,后涂的颜色会覆盖先涂的,"
      "并且同一种颜色不能重复使用。现在给出画布上每个位置的目标颜色:\n[Slot 1]\n"
      "Lily 能按规则完成这幅画吗?请回答 yes 或 no。";
  out.push_back(t);

  t.template_id = "rect_paint.zh.mural";
  t.body =
      "一支施工队要在一面由方形瓷砖组成的墙上复刻一幅像素壁画。每一遍施工只能用一种颜色滚涂一个完整的"
      "实心矩形瓷砖区域;新的一遍会盖住旧的,且任何颜色都不能使用两遍。最终壁画必须与下图完全一致:\n"
      "[Slot 1]\n施工队能在这些限制下完成壁画吗?请回答 yes 或 no。";
  out.push_back(t);

  return out;
}

inline TaskDescriptor make_descriptor() {
  TaskDescriptor d;
  d.family_id = kFamilyId;
  d.taxonomy = {TaskDomain::spatial_geometry, CoreAbility::constraint_satisfaction,
                DifficultySource::large_search_space};
  d.answer_kind = AnswerKind::single_value;
  d.scoring_method = ScoringMethod::accuracy;
  d.languages = {Language::en, Language::zh};
  d.ladder.complexity_params = {"colors"};
  d.ladder.integer_params = {"colors", "size"};
  d.ladder.levels = {{1, {{"colors", 2}, {"size", 2}}},  {2, {{"colors", 3}, {"size", 3}}},
                     {3, {{"colors", 4}, {"size", 3}}},  {4, {{"colors", 5}, {"size", 4}}},
                     {5, {{"colors", 6}, {"size", 4}}},  {6, {{"colors", 7}, {"size", 5}}},
                     {7, {{"colors", 8}, {"size", 5}}},  {8, {{"colors", 9}, {"size", 6}}},
                     {9, {{"colors", 10}, {"size", 6}}}, {10, {{"colors", 12}, {"size", 7}}}};
  return d;
}

} // namespace logicforge::rect_paint
