#include <catch2/catch_amalgamated.hpp>

#include "logicforge/registry.hpp"

using namespace logicforge;

namespace {

const Registry& registry() {
  static const Registry r = builtin_registry();
  return r;
}

InstanceParams make_params(const std::string& family, FamilyPayload payload) {
  return InstanceParams{family, 0, 1, std::move(payload)};
}

} // namespace

// --- paper-derived fixtures ---------------------------------------------------

TEST_CASE("seal_decode reference instance 6889SnKBUNXl") {
  const auto params = make_params("seal_decode", SealDecodeParams{"6889SnKBUNXl"});
  const GroundTruth via_solve = registry().solve(params);
  const GroundTruth via_oracle = registry().oracle_solve(params);
  REQUIRE(seal_decode::decode_seal("6889SnKBUNXl") == "SKBUNX6889");
  REQUIRE(std::get<double>(via_solve.value) == 10.0);
  REQUIRE(std::get<double>(via_oracle.value) == 10.0);
  REQUIRE(via_solve.canonical(Language::en) == "10");
}

TEST_CASE("maze_paths reference instance agrees across both solvers") {
  MazePathsParams maze;
  maze.height = 5;
  maze.width = 5;
  maze.grid = {"...#.", "#..##", "##.##", "##..#", "#.#.."};
  maze.path_ids = {"A", "B", "C", "D"};
  using D = Direction;
  maze.paths = {
      {D::right, D::down, D::right, D::down, D::right, D::down, D::right},
      {D::right, D::down, D::right, D::down, D::down, D::right, D::down, D::down, D::right},
      {D::right, D::down, D::down, D::right, D::down, D::right},
      {D::right, D::down, D::down, D::right, D::down, D::down, D::down, D::right, D::down,
       D::right}};
  const auto params = make_params("maze_paths", maze);
  const GroundTruth via_solve = registry().solve(params);
  const GroundTruth via_oracle = registry().oracle_solve(params);
  REQUIRE(answers_equal(via_solve.value, via_oracle.value));
  REQUIRE(std::get<std::set<std::string>>(via_solve.value) == std::set<std::string>{"B", "D"});
}

TEST_CASE("truth_teller chat-group instance has the unique count-4 answer") {
  TruthTellerParams p;
  p.names = {"Wright", "Turner", "Ross", "Torres", "Harris", "Brooks", "Garcia"};
  using Q = Quantifier;
  using C = ClaimSubject;
  p.statements = {{Q::exactly, C::truth, 6}, {Q::at_least, C::lie, 6}, {Q::at_least, C::lie, 4},
                  {Q::at_least, C::lie, 3}, {Q::exactly, C::lie, 3},  {Q::at_least, C::lie, 2},
                  {Q::at_least, C::truth, 1}};
  const auto params = make_params("truth_teller", p);
  const GroundTruth truth = registry().solve(params);
  const std::set<std::string> expected = {"Torres", "Harris", "Brooks", "Garcia"};
  REQUIRE(std::get<std::set<std::string>>(truth.value) == expected);
  REQUIRE(answers_equal(registry().oracle_solve(params).value, truth.value));
}

// --- contract edge cases -------------------------------------------------------

TEST_CASE("truth_teller single speaker claiming exactly zero truths is unsolvable") {
  TruthTellerParams p;
  p.names = {"Wright"};
  p.statements = {{Quantifier::exactly, ClaimSubject::truth, 0}};
  const auto params = make_params("truth_teller", p);
  REQUIRE(truth_teller::solve(p).status == SolveOutcome::Status::no_solution);
  REQUIRE_THROWS_MATCHES(registry().solve(params), Error, Catch::Matchers::Predicate<Error>(
      [](const Error& e) { return e.code() == Errc::no_solution; }));
}

TEST_CASE("truth_teller detects ambiguous statement sets") {
  // Both claim "exactly 2 truths": t=0 (both lying) and t=2 (both truthful)
  // are each self-consistent.
  TruthTellerParams p;
  p.names = {"Wright", "Turner"};
  p.statements = {{Quantifier::exactly, ClaimSubject::truth, 2},
                  {Quantifier::exactly, ClaimSubject::truth, 2}};
  REQUIRE(truth_teller::solve(p).status == SolveOutcome::Status::multiple_solutions);
}

TEST_CASE("truth_teller classic self-referential claims") {
  // "At least 1 tells the truth" from a lone speaker is consistent both as a
  // truth (t=1) and as everyone lying... no: if it were a lie, t=0 falsifies
  // it consistently. Two fixed points, so no unique answer.
  TruthTellerParams q;
  q.names = {"Wright"};
  q.statements = {{Quantifier::at_least, ClaimSubject::truth, 1}};
  REQUIRE(truth_teller::solve(q).status == SolveOutcome::Status::multiple_solutions);

  // A vacuous claim can only be true, forcing its speaker into the teller set.
  TruthTellerParams v;
  v.names = {"Wright"};
  v.statements = {{Quantifier::at_least, ClaimSubject::truth, 0}};
  const auto outcome = truth_teller::solve(v);
  REQUIRE(outcome.unique());
  REQUIRE(std::get<std::set<std::string>>(outcome.truth->value) ==
          std::set<std::string>{"Wright"});
  REQUIRE(outcome.truth->canonical(Language::en) == "Wright");
}

TEST_CASE("truth_teller unique empty answer renders as none") {
  // Two speakers each claim "exactly 1 tells the truth". One teller would make
  // both claims true (two tellers); two tellers contradict the claims; zero
  // tellers is the single consistent count.
  TruthTellerParams p;
  p.names = {"Wright", "Turner"};
  p.statements = {{Quantifier::exactly, ClaimSubject::truth, 1},
                  {Quantifier::exactly, ClaimSubject::truth, 1}};
  const auto outcome = truth_teller::solve(p);
  REQUIRE(outcome.unique());
  REQUIRE(std::get<std::set<std::string>>(outcome.truth->value).empty());
  REQUIRE(outcome.truth->canonical(Language::en) == "none");
  REQUIRE(answers_equal(truth_teller::oracle(p).truth->value, outcome.truth->value));
}

TEST_CASE("rect_paint single cell is trivially paintable") {
  RectPaintParams p;
  p.height = 1;
  p.width = 1;
  p.num_colors = 1;
  p.target = {{1}};
  const auto params = make_params("rect_paint", p);
  REQUIRE(std::get<std::string>(registry().solve(params).value) == "yes");
  REQUIRE(std::get<std::string>(registry().oracle_solve(params).value) == "yes");
}

TEST_CASE("rect_paint 2x2 single color is paintable from both solvers") {
  RectPaintParams p;
  p.height = 2;
  p.width = 2;
  p.num_colors = 1;
  p.target = {{1, 1}, {1, 1}};
  const auto params = make_params("rect_paint", p);
  REQUIRE(std::get<std::string>(registry().solve(params).value) == "yes");
  REQUIRE(std::get<std::string>(registry().oracle_solve(params).value) == "yes");
}

TEST_CASE("rect_paint interlocking diagonal is infeasible") {
  RectPaintParams p;
  p.height = 2;
  p.width = 2;
  p.num_colors = 2;
  p.target = {{1, 2}, {2, 1}};
  const auto params = make_params("rect_paint", p);
  REQUIRE(std::get<std::string>(registry().solve(params).value) == "no");
  REQUIRE(std::get<std::string>(registry().oracle_solve(params).value) == "no");
}

TEST_CASE("seal_decode handles signs, merges, and sign-less dashes") {
  REQUIRE(seal_decode::decode_seal("5-3") == "2");        // 5 + (-3)
  REQUIRE(seal_decode::decode_seal("a-b9") == "9");       // dash not before digits
  REQUIRE(seal_decode::decode_seal("AB--5") == "AB-5");   // only the adjacent dash signs
  REQUIRE(seal_decode::decode_seal("1x2x3") == "6");
  REQUIRE(seal_decode::decode_seal("xyz") == "0");        // no digits: suffix is 0
}

TEST_CASE("causal_chain rejects cyclic and underdetermined condition sets") {
  CausalChainParams p;
  p.events = {{"A1", "a", "a"}, {"B2", "b", "b"}, {"C3", "c", "c"}};
  p.conditions = {{0, 1, false}, {1, 0, true}};
  REQUIRE(causal_chain::solve(p).status == SolveOutcome::Status::no_solution);

  CausalChainParams q;
  q.events = p.events;
  q.conditions = {{0, 1, false}}; // C3 unused, A1->B2 forced: unique chain of two
  const auto outcome = causal_chain::solve(q);
  REQUIRE(outcome.unique());
  REQUIRE(std::get<std::vector<std::string>>(outcome.truth->value) ==
          std::vector<std::string>{"A1", "B2"});

  CausalChainParams r;
  r.events = {{"A1", "a", "a"}, {"B2", "b", "b"}, {"C3", "c", "c"}};
  r.conditions = {{0, 2, false}, {1, 2, false}}; // A1 and B2 both unordered sources
  REQUIRE(causal_chain::solve(r).status == SolveOutcome::Status::multiple_solutions);
}

// --- determinism and synchronization properties --------------------------------

TEST_CASE("generate_params is byte-deterministic in its inputs") {
  for (const auto& family : registry().family_ids()) {
    auto first = registry().generate_params(family, 3, 987654321u, Language::en);
    auto second = registry().generate_params(family, 3, 987654321u, Language::en);
    REQUIRE(first.first == second.first);
    REQUIRE(first.second == second.second);
    REQUIRE(instance_params_to_json(first.first).dump() ==
            instance_params_to_json(second.first).dump());
  }
}

TEST_CASE("payloads are language-independent; only fills change") {
  for (const auto& family : registry().family_ids()) {
    auto en = registry().generate_params(family, 4, 11111u, Language::en);
    auto zh = registry().generate_params(family, 4, 11111u, Language::zh);
    REQUIRE(en.first == zh.first);
    REQUIRE(en.second.language == Language::en);
    REQUIRE(zh.second.language == Language::zh);
  }
}

TEST_CASE("instance params round-trip through JSON exactly") {
  for (const auto& family : registry().family_ids()) {
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
      auto [params, fills] = registry().generate_params(family, 6, derive_seed(5, family, seed),
                                                        Language::en);
      const auto json = instance_params_to_json(params);
      const InstanceParams back = instance_params_from_json(nlohmann::json::parse(json.dump()));
      REQUIRE(back == params);
    }
  }
}

TEST_CASE("truth_teller honors the ladder speaker count") {
  DifficultyLadder ladder = registry().family("truth_teller").descriptor.ladder;
  for (auto& [level, bag] : ladder.levels) bag["num"] = 7;
  auto [params, fills] =
      registry().generate_with_ladder("truth_teller", ladder, 5, 4242u, Language::en);
  const auto& payload = std::get<TruthTellerParams>(params.payload);
  REQUIRE(payload.speaker_count() == 7);
  REQUIRE(payload.statements.size() == 7);
  REQUIRE(fills.fills.size() == 2);
  for (const auto& name : payload.names) {
    REQUIRE(logicforge::text::contains(fills.fills[1], name));
  }
}

TEST_CASE("maze level-1 instances keep entrance and exit open over 100 seeds") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    auto [params, fills] =
        registry().generate_params("maze_paths", 1, derive_seed(77, "maze", seed), Language::en);
    const auto& maze = std::get<MazePathsParams>(params.payload);
    REQUIRE(maze.height == 3);
    REQUIRE(maze.width == 3);
    REQUIRE(maze.grid.front().front() == '.');
    REQUIRE(maze.grid.back().back() == '.');
  }
}

TEST_CASE("generator-solver synchronization holds across families and levels") {
  // Reduced per-level count here; the acceptance suite runs the full sweep.
  for (const auto& family : registry().family_ids()) {
    for (int level : {1, 5, 10}) {
      for (std::uint64_t i = 0; i < 40; ++i) {
        const std::uint64_t seed = derive_seed(1000 + level, family, i);
        auto [params, fills] = registry().generate_params(family, level, seed, Language::en);
        REQUIRE_NOTHROW(registry().solve(params));
      }
    }
  }
}

TEST_CASE("solve equals the brute-force oracle at tractable sizes") {
  for (const auto& family : registry().family_ids()) {
    int checked = 0;
    for (int level : {1, 2, 3, 4}) {
      for (std::uint64_t i = 0; i < 60; ++i) {
        const std::uint64_t seed = derive_seed(31337 + level, family, i);
        auto [params, fills] = registry().generate_params(family, level, seed, Language::en);
        if (!registry().oracle_tractable(params)) continue;
        ++checked;
        REQUIRE(answers_equal(registry().solve(params).value,
                              registry().oracle_solve(params).value));
      }
    }
    INFO(family);
    REQUIRE(checked > 100);
  }
}

TEST_CASE("oracles refuse instances beyond their documented bounds") {
  TruthTellerParams big;
  for (int i = 0; i < truth_teller::kOracleMaxSpeakers + 1; ++i) {
    big.names.push_back("P" + std::to_string(i));
    big.statements.push_back({Quantifier::at_least, ClaimSubject::truth, 1});
  }
  REQUIRE_THROWS_MATCHES(registry().oracle_solve(make_params("truth_teller", big)), Error,
                         Catch::Matchers::Predicate<Error>(
                             [](const Error& e) { return e.code() == Errc::too_large; }));
}

TEST_CASE("maze path labels continue past Z") {
  DifficultyLadder ladder = registry().family("maze_paths").descriptor.ladder;
  ladder.levels[5]["paths"] = 30;
  auto [params, fills] =
      registry().generate_with_ladder("maze_paths", ladder, 5, 2222u, Language::en);
  const auto& maze = std::get<MazePathsParams>(params.payload);
  REQUIRE(maze.path_ids.size() == 30);
  REQUIRE(maze.path_ids[25] == "Z");
  REQUIRE(maze.path_ids[26] == "AA");
  std::set<std::string> unique_ids(maze.path_ids.begin(), maze.path_ids.end());
  REQUIRE(unique_ids.size() == 30);
}

TEST_CASE("rect_paint level-5 answers stay balanced") {
  int yes = 0;
  const int n = 400;
  for (std::uint64_t i = 0; i < n; ++i) {
    auto [params, fills] =
        registry().generate_params("rect_paint", 5, derive_seed(404, "balance", i), Language::en);
    if (std::get<std::string>(registry().solve(params).value) == "yes") ++yes;
  }
  REQUIRE(yes >= n / 5);
  REQUIRE(n - yes >= n / 5);
}

TEST_CASE("unknown family raises unknown_family listing the registry") {
  try {
    registry().solve(make_params("bogus", SealDecodeParams{"A1"}));
    FAIL("expected unknown_family");
  } catch (const Error& e) {
    REQUIRE(e.code() == Errc::unknown_family);
    REQUIRE(logicforge::text::contains(e.what(), "truth_teller"));
  }
}

TEST_CASE("unsupported language is rejected at generation time") {
  Registry reg = builtin_registry();
  reg.family_mut("seal_decode").descriptor.languages = {Language::en};
  REQUIRE_THROWS_MATCHES(reg.generate_params("seal_decode", 1, 1u, Language::zh), Error,
                         Catch::Matchers::Predicate<Error>([](const Error& e) {
                           return e.code() == Errc::unsupported_language;
                         }));
}
