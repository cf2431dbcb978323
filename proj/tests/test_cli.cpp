#include <catch2/catch_amalgamated.hpp>

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "logicforge/text.hpp"
#include "test_util.hpp"

using test_util::CliResult;
using test_util::TempDir;
using test_util::run_cli;
using logicforge::text::contains;

TEST_CASE("families subcommand lists the five shipped families") {
  TempDir tmp("cli_families");
  const auto result = run_cli("families", tmp.dir());
  REQUIRE(result.exit_code == 0);
  for (const char* family :
       {"truth_teller", "maze_paths", "seal_decode", "rect_paint", "causal_chain"}) {
    REQUIRE(contains(result.output, family));
  }
}

TEST_CASE("generate requires gate evidence unless forced") {
  TempDir tmp("cli_gate");
  const std::string dir = tmp.dir();
  auto blocked = run_cli("generate --family truth_teller --difficulty 5 --lang en --count 2 "
                         "--seed 42 --out d.jsonl", dir);
  REQUIRE(blocked.exit_code == 2);
  REQUIRE(contains(blocked.output, "--force"));

  auto forced = run_cli("generate --family truth_teller --difficulty 5 --lang en --count 2 "
                        "--seed 42 --out d.jsonl --force", dir);
  REQUIRE(forced.exit_code == 0);
  REQUIRE(contains(forced.output, "wrote 2 records"));

  auto gate = run_cli("validate --family truth_teller --model mock-highskill --seed 3 "
                      "--samples 10 --out gate.json", dir);
  REQUIRE(gate.exit_code == 0);
  auto gated = run_cli("generate --family truth_teller --difficulty 5 --lang en --count 2 "
                       "--seed 42 --out d2.jsonl --gate-report gate.json", dir);
  REQUIRE(gated.exit_code == 0);
}

TEST_CASE("generate is byte-identical for identical flags and seed") {
  TempDir tmp("cli_determinism");
  const std::string dir = tmp.dir();
  const std::string flags = "generate --family maze_paths --difficulty-range 2:4 --lang en,zh "
                            "--count 3 --seed 777 --force";
  REQUIRE(run_cli(flags + " --out a.jsonl", dir).exit_code == 0);
  REQUIRE(run_cli(flags + " --out b.jsonl", dir).exit_code == 0);
  const std::string a = test_util::read_file(dir + "/a.jsonl");
  REQUIRE_FALSE(a.empty());
  REQUIRE(a == test_util::read_file(dir + "/b.jsonl"));

  auto verify = run_cli("verify --dataset a.jsonl", dir);
  REQUIRE(verify.exit_code == 0);
  REQUIRE(contains(verify.output, "0 mismatch(es)"));
}

TEST_CASE("generate with count 0 writes an empty file and exits 0") {
  TempDir tmp("cli_zero");
  const std::string dir = tmp.dir();
  auto result = run_cli("generate --family seal_decode --difficulty 1 --count 0 --seed 1 "
                        "--out empty.jsonl --force", dir);
  REQUIRE(result.exit_code == 0);
  REQUIRE(test_util::read_file(dir + "/empty.jsonl").empty());
}

TEST_CASE("unknown family exits 1 and lists the registered families") {
  TempDir tmp("cli_unknown");
  auto result = run_cli("generate --family nonesuch --difficulty 1 --count 1 --seed 1 "
                        "--out x.jsonl --force", tmp.dir());
  REQUIRE(result.exit_code == 1);
  REQUIRE(contains(result.output, "truth_teller"));
  REQUIRE(contains(result.output, "causal_chain"));
}

TEST_CASE("seed-requiring commands refuse to run without --seed") {
  TempDir tmp("cli_seed");
  const std::string dir = tmp.dir();
  for (const std::string command :
       {std::string("generate --family truth_teller --difficulty 1 --count 1 --out x.jsonl --force"),
        std::string("calibrate --family truth_teller"),
        std::string("sim-grpo --scheme graded --out t.csv")}) {
    auto result = run_cli(command, dir);
    REQUIRE(result.exit_code == 2);
    REQUIRE(contains(result.output, "--seed"));
  }
}

TEST_CASE("calibrate writes a report and a recalibrated descriptor") {
  TempDir tmp("cli_calibrate");
  const std::string dir = tmp.dir();
  auto result = run_cli("calibrate --family rect_paint --model mock --mock-skill 8 "
                        "--mock-slope 0.4 --seed 5 --samples 120 --out report.json "
                        "--family-out rect_paint.json", dir);
  REQUIRE(result.exit_code == 0);
  REQUIRE(contains(result.output, "converged"));
  REQUIRE(contains(result.output, "report.json"));
  const auto report = nlohmann::json::parse(test_util::read_file(dir + "/report.json"));
  REQUIRE(report.at("converged").get<bool>());
  REQUIRE(report.at("family_id") == "rect_paint");

  // The written descriptor is loadable and drives generation via --families-dir.
  std::filesystem::create_directories(dir + "/families");
  std::filesystem::copy_file(dir + "/rect_paint.json", dir + "/families/rect_paint.json");
  auto gen = run_cli("--families-dir families generate --family rect_paint --difficulty 5 "
                     "--count 2 --seed 4 --out r.jsonl --force", dir);
  REQUIRE(gen.exit_code == 0);
}

TEST_CASE("validate fails when the mock cannot clear the threshold") {
  TempDir tmp("cli_validate_fail");
  auto result = run_cli("validate --family truth_teller --model mock --mock-skill 0.1 "
                        "--mock-slope 2 --seed 6 --samples 20", tmp.dir());
  REQUIRE(result.exit_code == 1);
  REQUIRE(contains(result.output, "FAIL"));
  REQUIRE(contains(result.output, "failing cell"));
}

TEST_CASE("score produces totals in the bipolar range") {
  TempDir tmp("cli_score");
  const std::string dir = tmp.dir();
  REQUIRE(run_cli("generate --family seal_decode --difficulty 3 --count 4 --seed 12 "
                  "--out d.jsonl --force", dir).exit_code == 0);
  std::string responses;
  for (const auto& line : logicforge::text::split(test_util::read_file(dir + "/d.jsonl"), "\n")) {
    if (line.empty()) continue;
    const auto j = nlohmann::json::parse(line);
    responses += nlohmann::json{{"id", j.at("id")},
                                {"response", "<answer>" + j.at("answer").get<std::string>() +
                                                 "</answer>"}}
                     .dump() +
                 "\n";
  }
  test_util::write_file(dir + "/r.jsonl", responses);
  auto result = run_cli("score --dataset d.jsonl --responses r.jsonl --scheme bipolar "
                        "--out s.jsonl", dir);
  REQUIRE(result.exit_code == 0);
  for (const auto& line : logicforge::text::split(test_util::read_file(dir + "/s.jsonl"), "\n")) {
    if (line.empty()) continue;
    const double total = nlohmann::json::parse(line).at("total").get<double>();
    REQUIRE(total >= -1.0);
    REQUIRE(total <= 1.1);
  }

  test_util::write_file(dir + "/bad.jsonl",
                        nlohmann::json{{"id", "0000000000000000"}, {"response", "?"}}.dump() + "\n");
  auto bad = run_cli("score --dataset d.jsonl --responses bad.jsonl --out s2.jsonl", dir);
  REQUIRE(bad.exit_code == 1);
}

TEST_CASE("sim-grpo writes a per-step trajectory CSV") {
  TempDir tmp("cli_sim");
  const std::string dir = tmp.dir();
  auto result = run_cli("sim-grpo --scheme bipolar --seed 2 --steps 50 --out t.csv", dir);
  REQUIRE(result.exit_code == 0);
  const auto lines = logicforge::text::split(test_util::read_file(dir + "/t.csv"), "\n");
  REQUIRE(lines[0] == "step,safe_partial,risky_perfect,mean_reward");
  REQUIRE(lines.size() >= 51); // header + one row per step
  REQUIRE(lines[1].rfind("0,", 0) == 0);

  // Re-runs with the same seed are identical.
  REQUIRE(run_cli("sim-grpo --scheme bipolar --seed 2 --steps 50 --out t2.csv", dir).exit_code == 0);
  REQUIRE(test_util::read_file(dir + "/t.csv") == test_util::read_file(dir + "/t2.csv"));
}

TEST_CASE("--help enumerates every documented flag") {
  TempDir tmp("cli_help");
  const std::string dir = tmp.dir();
  auto top = run_cli("--help", dir);
  REQUIRE(top.exit_code == 0);
  for (const char* flag : {"--families-dir", "--templates-dir", "--config", "--parallelism",
                           "--endpoint-url", "--endpoint-model", "--endpoint-auth-env",
                           "--endpoint-timeout", "--endpoint-retries", "--endpoint-temperature"}) {
    REQUIRE(contains(top.output, flag));
  }

  auto unknown = run_cli("generate --definitely-not-a-flag", dir);
  REQUIRE(unknown.exit_code == 2);
  for (const char* sub : {"generate", "calibrate", "validate", "score", "sim-grpo", "verify",
                          "families", "export-families"}) {
    REQUIRE(contains(top.output, sub));
  }
  auto gen = run_cli("generate --help", dir);
  for (const char* flag : {"--family", "--difficulty", "--difficulty-range", "--lang", "--count",
                           "--seed", "--out", "--force", "--gate-report"}) {
    REQUIRE(contains(gen.output, flag));
  }
  auto cal = run_cli("calibrate --help", dir);
  for (const char* flag : {"--model", "--samples", "--tolerance", "--max-iterations",
                           "--mock-skill", "--mock-slope", "--family-out"}) {
    REQUIRE(contains(cal.output, flag));
  }
  auto sim = run_cli("sim-grpo --help", dir);
  for (const char* flag : {"--scheme", "--steps", "--group-size", "--lr", "--risky-success-prob"}) {
    REQUIRE(contains(sim.output, flag));
  }
}

TEST_CASE("environment variables feed defaults under CLI precedence") {
  TempDir tmp("cli_env");
  const std::string dir = tmp.dir();
  // Config file sets a bad parallelism; the env var must override it.
  test_util::write_file(dir + "/cfg.json", "{\"parallelism\": 0}");
  const std::string command =
      std::string("cd '") + dir + "' && LOGICFORGE_PARALLELISM=2 '" + LOGICFORGE_CLI_PATH +
      "' --config cfg.json generate --family seal_decode --difficulty 1 --count 2 --seed 3 "
      "--out env.jsonl --force > out.txt 2>&1";
  REQUIRE(std::system(command.c_str()) == 0);
  REQUIRE_FALSE(test_util::read_file(dir + "/env.jsonl").empty());

  // Without the env var the config file value applies and is rejected.
  auto bad = run_cli("--config cfg.json generate --family seal_decode --difficulty 1 --count 2 "
                     "--seed 3 --out env2.jsonl --force", dir);
  REQUIRE(bad.exit_code == 2);
  REQUIRE(contains(bad.output, "parallelism"));

  // An explicit flag outranks both the env var and the config file.
  const std::string flag_wins =
      std::string("cd '") + dir + "' && LOGICFORGE_PARALLELISM=0 '" + LOGICFORGE_CLI_PATH +
      "' --config cfg.json --parallelism 2 generate --family seal_decode --difficulty 1 "
      "--count 2 --seed 3 --out env3.jsonl --force > out2.txt 2>&1";
  REQUIRE(std::system(flag_wins.c_str()) == 0);
  REQUIRE_FALSE(test_util::read_file(dir + "/env3.jsonl").empty());
}

TEST_CASE("validate drives a live HTTP endpoint through the CLI") {
  TempDir tmp("cli_endpoint");
  const std::string dir = tmp.dir();

  std::atomic<int> calls{0};
  httplib::Server server;
  server.Post("/v1/chat/completions", [&calls](const httplib::Request& req, httplib::Response& res) {
    ++calls;
    REQUIRE(req.get_header_value("Authorization") == "Bearer cli-test-token");
    res.set_content(
        nlohmann::json{{"choices",
                        {{{"message",
                           {{"role", "assistant"}, {"content", "<answer>garbage</answer>"}}}}}}}
            .dump(),
        "application/json");
  });
  const int port = server.bind_to_any_port("127.0.0.1");
  std::thread listener([&server]() { server.listen_after_bind(); });
  server.wait_until_ready();

  const std::string command =
      std::string("cd '") + dir + "' && LOGICFORGE_CLI_TOKEN=cli-test-token '" +
      LOGICFORGE_CLI_PATH + "' --endpoint-url http://127.0.0.1:" + std::to_string(port) +
      " --endpoint-auth-env LOGICFORGE_CLI_TOKEN --endpoint-timeout 5 validate "
      "--family seal_decode --model endpoint --seed 2 --samples 2 --levels 1 "
      "> out.txt 2>&1; echo \"exit=$?\" >> out.txt";
  REQUIRE(std::system(command.c_str()) == 0);
  server.stop();
  listener.join();

  const std::string output = test_util::read_file(dir + "/out.txt");
  // A garbage-answering endpoint fails the gate (exit 1) but every call went through.
  REQUIRE(contains(output, "gate seal_decode: FAIL"));
  REQUIRE(contains(output, "exit=1"));
  REQUIRE(calls == 2 * 4); // 2 samples x (2 en + 2 zh variants) at level 1
}

TEST_CASE("full pipeline: calibrate, gate, generate, verify, score") {
  TempDir tmp("cli_pipeline");
  const std::string dir = tmp.dir();

  auto calibrated = run_cli("calibrate --family maze_paths --model mock --seed 2025 "
                            "--out cal.json --family-out maze_paths.json", dir);
  REQUIRE(calibrated.exit_code == 0);
  std::filesystem::create_directories(dir + "/families");
  std::filesystem::copy_file(dir + "/maze_paths.json", dir + "/families/maze_paths.json");

  auto gate = run_cli("--families-dir families validate --family maze_paths "
                      "--model mock-highskill --seed 99 --samples 20 --out gate.json", dir);
  REQUIRE(gate.exit_code == 0);
  REQUIRE(contains(gate.output, "PASS"));

  auto generated = run_cli("--families-dir families generate --family maze_paths "
                           "--difficulty-range 1:10 --lang en,zh --count 2 --seed 31337 "
                           "--gate-report gate.json --out maze.jsonl", dir);
  REQUIRE(generated.exit_code == 0);
  REQUIRE(contains(generated.output, "wrote 40 records"));

  auto verified = run_cli("--families-dir families verify --dataset maze.jsonl", dir);
  REQUIRE(verified.exit_code == 0);
  REQUIRE(contains(verified.output, "0 mismatch(es)"));

  // Canonical answers for every record: every scheme should score a clean 1.1.
  std::string responses;
  for (const auto& line : logicforge::text::split(test_util::read_file(dir + "/maze.jsonl"), "\n")) {
    if (line.empty()) continue;
    const auto j = nlohmann::json::parse(line);
    responses += nlohmann::json{{"id", j.at("id")},
                                {"response", "<answer>" + j.at("answer").get<std::string>() +
                                                 "</answer>"}}
                     .dump() +
                 "\n";
  }
  test_util::write_file(dir + "/responses.jsonl", responses);
  for (const char* scheme : {"binary", "graded", "bipolar"}) {
    auto scored = run_cli(std::string("score --dataset maze.jsonl --responses responses.jsonl "
                                      "--scheme ") + scheme + " --out scores.jsonl", dir);
    REQUIRE(scored.exit_code == 0);
    REQUIRE(contains(scored.output, "mean total 1.1"));
  }
}
