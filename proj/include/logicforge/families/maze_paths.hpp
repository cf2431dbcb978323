#pragma once

#include <set>
#include <string>
#include <vector>

#include "logicforge/descriptor.hpp"
#include "logicforge/generator.hpp"
#include "logicforge/rng.hpp"
#include "logicforge/templating.hpp"

namespace logicforge::maze_paths {

inline constexpr const char* kFamilyId = "maze_paths";

// A walker starts at the top-left cell and follows the moves in order. A move
// into a wall or off the grid is skipped (the instruction is consumed, the
// position keeps). Reaching the bottom-right cell at any point counts as
// exiting the maze.
inline bool path_reaches_exit(const MazePathsParams& p, const std::vector<Direction>& moves) {
  int r = 0, c = 0;
  const int er = p.height - 1, ec = p.width - 1;
  if (r == er && c == ec) return true;
  for (Direction d : moves) {
    int nr = r, nc = c;
    switch (d) {
      case Direction::up: --nr; break;
      case Direction::down: ++nr; break;
      case Direction::left: --nc; break;
      case Direction::right: ++nc; break;
    }
    if (nr >= 0 && nr < p.height && nc >= 0 && nc < p.width &&
        p.grid[static_cast<std::size_t>(nr)][static_cast<std::size_t>(nc)] == '.') {
      r = nr;
      c = nc;
    }
    if (r == er && c == ec) return true;
  }
  return false;
}

namespace detail {

inline GroundTruth make_truth(const MazePathsParams& p, const std::set<std::string>& ids) {
  std::vector<std::string> ordered;
  for (const auto& id : p.path_ids) {
    if (ids.count(id)) ordered.push_back(id);
  }
  const std::string canonical = ordered.empty() ? "none" : text::join(ordered, ", ");
  GroundTruth truth;
  truth.value = ids;
  truth.canonical_text = {{Language::en, canonical}, {Language::zh, canonical}};
  return truth;
}

} // namespace detail

inline SolveOutcome solve(const MazePathsParams& p) {
  std::set<std::string> reached;
  for (std::size_t i = 0; i < p.paths.size(); ++i) {
    if (path_reaches_exit(p, p.paths[i])) reached.insert(p.path_ids[i]);
  }
  return SolveOutcome::solved(detail::make_truth(p, reached));
}

inline constexpr int kOracleMaxSide = 64;

inline bool oracle_tractable(const MazePathsParams& p) {
  return p.height <= kOracleMaxSide && p.width <= kOracleMaxSide;
}

// Independent re-simulation over a flattened grid with linear indices and a
// precomputed move table, rather than (row, col) coordinate arithmetic.
inline SolveOutcome oracle(const MazePathsParams& p) {
  if (!oracle_tractable(p)) {
    throw Error(Errc::too_large, std::string(kFamilyId) + ": oracle bound is " +
                                     std::to_string(kOracleMaxSide) + "x" +
                                     std::to_string(kOracleMaxSide));
  }
  const int h = p.height, w = p.width;
  std::vector<char> open(static_cast<std::size_t>(h * w));
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      open[static_cast<std::size_t>(r * w + c)] =
          p.grid[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] == '.';
    }
  }
  // step[dir][cell] = destination cell, or -1 when the move is skipped.
  std::vector<std::vector<int>> step(4, std::vector<int>(static_cast<std::size_t>(h * w), -1));
  for (int cell = 0; cell < h * w; ++cell) {
    const int r = cell / w, c = cell % w;
    auto put = [&](Direction d, int rr, int cc) {
      if (rr < 0 || rr >= h || cc < 0 || cc >= w) return;
      const int dest = rr * w + cc;
      if (open[static_cast<std::size_t>(dest)]) {
        step[static_cast<std::size_t>(d)][static_cast<std::size_t>(cell)] = dest;
      }
    };
    put(Direction::up, r - 1, c);
    put(Direction::down, r + 1, c);
    put(Direction::left, r, c - 1);
    put(Direction::right, r, c + 1);
  }
  const int exit_cell = h * w - 1;
  std::set<std::string> reached;
  for (std::size_t i = 0; i < p.paths.size(); ++i) {
    int at = 0;
    bool out = at == exit_cell;
    for (Direction d : p.paths[i]) {
      if (out) break;
      const int dest = step[static_cast<std::size_t>(d)][static_cast<std::size_t>(at)];
      if (dest >= 0) at = dest;
      if (at == exit_cell) out = true;
    }
    if (out) reached.insert(p.path_ids[i]);
  }
  return SolveOutcome::solved(detail::make_truth(p, reached));
}

namespace detail {

// Random monotone staircase from entrance to exit; carving it open guarantees
// the instance has at least one successful candidate path.
inline std::vector<Direction> carve_corridor(Rng& rng, MazePathsParams& p) {
  std::vector<Direction> moves;
  for (int i = 0; i < p.height - 1; ++i) moves.push_back(Direction::down);
  for (int i = 0; i < p.width - 1; ++i) moves.push_back(Direction::right);
  rng.shuffle(moves);
  int r = 0, c = 0;
  p.grid[0][0] = '.';
  for (Direction d : moves) {
    if (d == Direction::down) ++r; else ++c;
    p.grid[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] = '.';
  }
  return moves;
}

// A, B, ..., Z, AA, AB, ... (spreadsheet style) so large path counts stay valid.
inline std::string path_label(int index) {
  std::string label;
  int n = index + 1;
  while (n > 0) {
    --n;
    label.insert(label.begin(), static_cast<char>('A' + n % 26));
    n /= 26;
  }
  return label;
}

inline std::vector<Direction> random_walk(Rng& rng, int len) {
  static const std::vector<Direction> all = {Direction::right, Direction::down, Direction::left,
                                             Direction::up};
  std::vector<Direction> moves;
  for (int i = 0; i < len; ++i) {
    // Bias toward the exit direction so decoys are plausible near-misses.
    const int roll = static_cast<int>(rng.below(10));
    if (roll < 4) moves.push_back(Direction::right);
    else if (roll < 8) moves.push_back(Direction::down);
    else moves.push_back(all[rng.below(4)]);
  }
  return moves;
}

} // namespace detail

inline MazePathsParams draw(Rng& rng, const ParamBag& level_params) {
  const int size = std::max(2, static_cast<int>(level_params.at("size")));
  const int num_paths = std::max(1, static_cast<int>(level_params.at("paths")));
  MazePathsParams p;
  p.height = size;
  p.width = size;
  p.grid.assign(static_cast<std::size_t>(size), std::string(static_cast<std::size_t>(size), '.'));
  for (auto& row : p.grid) {
    for (auto& cell : row) {
      if (rng.chance(0.35)) cell = '#';
    }
  }
  p.grid[0][0] = '.';
  p.grid[static_cast<std::size_t>(size - 1)][static_cast<std::size_t>(size - 1)] = '.';

  const auto corridor = detail::carve_corridor(rng, p);
  const int genuine = static_cast<int>(rng.below(static_cast<std::uint64_t>(num_paths)));
  for (int i = 0; i < num_paths; ++i) {
    p.path_ids.push_back(detail::path_label(i));
    if (i == genuine) {
      p.paths.push_back(corridor);
    } else {
      const int len = static_cast<int>(corridor.size()) + static_cast<int>(rng.range(-2, 3));
      p.paths.push_back(detail::random_walk(rng, std::max(2, len)));
    }
  }
  return p;
}

namespace detail {

inline const char* dir_word(Direction d, Language lang) {
  if (lang == Language::en) {
    switch (d) {
      case Direction::up: return "up";
      case Direction::down: return "down";
      case Direction::left: return "left";
      case Direction::right: return "right";
    }
  }
  switch (d) {
    case Direction::up: return "上";
    case Direction::down: return "下";
    case Direction::left: return "左";
    case Direction::right: return "右";
  }
  return "";
}

} // namespace detail

inline SlotFills fills(const MazePathsParams& p, Language lang) {
  SlotFills f;
  f.language = lang;
  std::vector<std::string> rows;
  for (const auto& row : p.grid) {
    std::string drawn;
    for (char cell : row) drawn += (cell == '.') ? "□" : "■";
    rows.push_back(drawn);
  }
  f.fills.push_back(text::join(rows, "\n"));
  std::vector<std::string> lines;
  for (std::size_t i = 0; i < p.paths.size(); ++i) {
    std::vector<std::string> words;
    for (Direction d : p.paths[i]) words.emplace_back(detail::dir_word(d, lang));
    lines.push_back(p.path_ids[i] + ": " + text::join(words, lang == Language::en ? ", " : "、"));
  }
  f.fills.push_back(text::join(lines, "\n"));
  return f;
}

inline std::vector<Template> templates() {
  std::vector<Template> out;
  Template t;
  t.family_id = kFamilyId;
  t.arity = 2;

  t.template_id = "maze_paths.en.ancient";
  t.language = Language::en;
  t.body =
      "In an ancient and mysterious maze, an adventurer wants to find the exit. The maze is a "
      "two-dimensional layout, described as follows (□ is open ground, ■ is a wall):\n[Slot 1]\n"
      "The entrance of the maze is in the top-left corner, and the exit is in the bottom-right "
      "corner. There are some exploration paths, where each exploration action represents moving "
      "1 unit in the specified direction. If the corresponding direction is blocked by a maze "
      "wall, this step is skipped. The paths are as follows:\n[Slot 2]\nPlease list all the path "
      "IDs that allow the adventurer to get from the start point to the endpoint and exit the "
      "maze.";
  out.push_back(t);

  t.template_id = "maze_paths.en.warehouse";
  t.body =
      "A delivery robot is parked in the top-left cell of a warehouse floor and must reach the "
      "loading dock in the bottom-right cell. The floor plan is given below, where □ is a free "
      "cell and ■ is a shelf:\n[Slot 1]\nSeveral instruction tapes were prepared; each step moves "
      "the robot one cell in the given direction, and a step that would hit a shelf or leave the "
      "floor is simply ignored. The tapes are:\n[Slot 2]\nList the IDs of all tapes that bring "
      "the robot to the loading dock.";
  out.push_back(t);

  t.template_id = "maze_paths.zh.ancient";
  t.language = Language::zh;
  t.body =
      "在一座古老而神秘的迷宫中,一位探险者想要找到出口。迷宫是一个二维布局,描述如下"
      "(□ 表示空地,■ 表示墙壁):\n[Slot 1]\n迷宫的入口位于左上角,出口位于右下角。"
      "现有若干条探索路线,每个动作表示向指定方向移动 1 格;如果该方向被迷宫墙壁挡住,"
      "则跳过这一步。路线如下:\n[Slot 2]\n请列出所有能让探险者从起点到达终点、走出迷宫的路线编号。";
  out.push_back(t);

  t.template_id = "maze_paths.zh.warehouse";
  t.body =
      "一台配送机器人停在仓库地面的左上角格子,需要到达右下角的装货口。仓库平面图如下"
      "(□ 为空闲格,■ 为货架):\n[Slot 1]\n工程师准备了若干条指令带,每一步让机器人向指定方向移动一格;"
      "如果这一步会撞上货架或走出地面,则该步被忽略。指令带如下:\n[Slot 2]\n请列出所有能让机器人到达装货口的指令带编号。";
  out.push_back(t);

  return out;
}

inline TaskDescriptor make_descriptor() {
  TaskDescriptor d;
  d.family_id = kFamilyId;
  d.taxonomy = {TaskDomain::spatial_pathfinding, CoreAbility::instruction_following,
                DifficultySource::tedious_solution_steps};
  d.answer_kind = AnswerKind::value_set;
  d.scoring_method = ScoringMethod::f1;
  d.languages = {Language::en, Language::zh};
  // "paths" rides along per level but only "size" is the designated tuning knob.
  d.ladder.complexity_params = {"size"};
  d.ladder.integer_params = {"size", "paths"};
  d.ladder.levels = {{1, {{"size", 3}, {"paths", 3}}},  {2, {{"size", 4}, {"paths", 3}}},
                     {3, {{"size", 5}, {"paths", 4}}},  {4, {{"size", 6}, {"paths", 4}}},
                     {5, {{"size", 7}, {"paths", 4}}},  {6, {{"size", 8}, {"paths", 5}}},
                     {7, {{"size", 9}, {"paths", 5}}},  {8, {{"size", 10}, {"paths", 5}}},
                     {9, {{"size", 11}, {"paths", 6}}}, {10, {{"size", 12}, {"paths", 6}}}};
  return d;
}

} // namespace logicforge::maze_paths
