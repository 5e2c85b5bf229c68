#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "sboxlon/experiment.hpp"

using namespace sboxlon;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("sboxlon_test_" + name);
  fs::remove_all(dir);
  return dir;
}

ExperimentConfig small_config(std::size_t samples = 400) {
  ExperimentConfig c;
  c.n = 4;
  c.fitness = FitnessKind::nl_f;
  c.op = MoveKind::swap;
  c.mode = SampleMode::samples;
  c.samples = samples;
  c.seed = 2718;
  c.bootstrap_count = 100;
  c.output_directory = "unused";
  return c;
}

std::string expect_error(auto&& fn) {
  try {
    fn();
  } catch (const ExperimentError& e) {
    return e.code();
  }
  return "none";
}

}  // namespace

TEST_CASE("config text round-trip and validation") {
  const ExperimentConfig c = small_config();
  CHECK(parse_config(to_text(c)) == c);

  std::string text = to_text(c);
  CHECK(expect_error([&] { parse_config(text + "n = 5\n"); }) == "config");
  CHECK(expect_error([&] { parse_config(text + "colour = blue\n"); }) == "config");
  std::string missing = text.substr(text.find('\n') + 1);
  CHECK(expect_error([&] { parse_config(missing); }) == "config");
  CHECK(parse_config("# comment\n\n" + text) == c);

  auto bad = c;
  bad.mode = SampleMode::exhaustive;
  CHECK(expect_error([&] { validate(bad); }) == "config");
  bad = c;
  bad.samples = 0;
  CHECK(expect_error([&] { validate(bad); }) == "config");
  bad = c;
  bad.n = 9;
  CHECK(expect_error([&] { validate(bad); }) == "config");
  bad = c;
  bad.path_mode = PathKind::sampled;
  CHECK(expect_error([&] { validate(bad); }) == "config");
  bad.path_sources = 10;
  CHECK_NOTHROW(validate(bad));

  auto exhaustive = c;
  exhaustive.n = 3;
  exhaustive.mode = SampleMode::exhaustive;
  exhaustive.samples = 40320;
  CHECK_NOTHROW(validate(exhaustive));
  CHECK(requested_samples(exhaustive) == 40320);
}

TEST_CASE("checksum ignores workers and output directory") {
  auto a = small_config();
  auto b = a;
  b.workers = 8;
  b.output_directory = "elsewhere";
  CHECK(config_checksum(a) == config_checksum(b));
  b.seed = 1;
  CHECK(config_checksum(a) != config_checksum(b));
  CHECK(config_checksum(a).size() == 64);
}

TEST_CASE("sample stream") {
  const auto c = small_config();
  CHECK(start_for_sample(c, 0) == random_permutation(4, c.seed));
  CHECK(start_for_sample(c, 2) == lex_successor(lex_successor(random_permutation(4, c.seed))));
}

TEST_CASE("a single sample gives a single node") {
  const auto dir = scratch("single");
  const auto result = run_in(small_config(1), dir);
  CHECK(result.status == "complete");
  const auto metrics = nlohmann::json::parse(slurp(dir / "metrics.json"));
  CHECK(metrics["statistics"]["n_v"] == 1);
  CHECK(metrics["statistics"]["n_e"] == 0);
  CHECK(metrics["statistics"]["S"] == 1);
  const auto fits = nlohmann::json::parse(slurp(dir / "fit_report.json"));
  CHECK(fits["fits"][0].contains("skipped"));
  fs::remove_all(dir);
}

TEST_CASE("replay, resume and worker independence") {
  const auto config = small_config();
  const auto a = scratch("a"), b = scratch("b"), c = scratch("c");

  run_in(config, a);
  for (const char* name : {"nodes.csv", "edges.csv", "lon.graphml", "metrics.json", "degree_distribution.csv",
                           "correlation_degree_basin.csv", "correlation_fitness_basin.csv", "fit_report.json",
                           "manifest.json", "config.txt", "basins/basins.csv"}) {
    CHECK_MESSAGE(fs::exists(a / name), name);
  }

  auto threaded = config;
  threaded.workers = 3;
  RunOptions stop;
  stop.stop_after = 150;
  stop.checkpoint_every = 40;
  const auto partial = run_in(threaded, b, stop);
  CHECK(partial.status == "interrupted");
  CHECK(partial.completed_samples == 150);
  const auto finished = resume(b);
  CHECK(finished.status == "complete");
  CHECK(finished.completed_samples == 400);

  RunOptions two;
  two.threads = 2;
  run_in(config, c, two);

  for (const char* name : {"nodes.csv", "edges.csv", "metrics.json", "fit_report.json", "basins/basins.csv"}) {
    const auto reference = slurp(a / name);
    CHECK_MESSAGE(slurp(b / name) == reference, name);
    CHECK_MESSAGE(slurp(c / name) == reference, name);
  }

  SUBCASE("manifest embeds the config") {
    const auto manifest = nlohmann::json::parse(slurp(a / "manifest.json"));
    std::string text;
    for (const auto& [key, value] : manifest["config"].items()) text += key + " = " + value.get<std::string>() + "\n";
    CHECK(parse_config(text) == config);
    CHECK(manifest["config_checksum"] == config_checksum(config));
    CHECK(manifest["status"] == "complete");
    CHECK(manifest["content_checksum"].get<std::string>().size() == 64);
  }

  SUBCASE("resuming a completed run changes nothing") {
    const auto before = slurp(a / "manifest.json");
    const auto r = resume(a);
    CHECK(r.status == "complete");
    CHECK(slurp(a / "manifest.json") == before);
  }

  SUBCASE("edited config is a hard error") {
    auto edited = config;
    edited.seed = 99;
    std::ofstream(a / "config.txt", std::ios::trunc) << to_text(edited);
    CHECK(expect_error([&] { resume(a); }) == "checksum");
  }

  SUBCASE("a different config in the same directory is rejected") {
    auto other = config;
    other.seed = 5;
    CHECK(expect_error([&] { run_in(other, c); }) == "manifest_mismatch");
  }

  SUBCASE("post-processing commands reproduce the outputs") {
    const auto nodes = slurp(a / "nodes.csv");
    const auto metrics = slurp(a / "metrics.json");
    const auto fits = slurp(a / "fit_report.json");
    export_network(a);
    recompute_metrics(a);
    refit(a);
    CHECK(slurp(a / "nodes.csv") == nodes);
    CHECK(slurp(a / "metrics.json") == metrics);
    CHECK(slurp(a / "fit_report.json") == fits);
  }

  fs::remove_all(a);
  fs::remove_all(b);
  fs::remove_all(c);
}

TEST_CASE("time budget stops sampling and still analyses") {
  const auto dir = scratch("budget");
  RunOptions options;
  options.time_budget_seconds = 0.0;
  const auto r = run_in(small_config(), dir, options);
  CHECK(r.status == "budget_exhausted");
  CHECK(r.completed_samples == 0);
  CHECK(fs::exists(dir / "nodes.csv"));
  CHECK(nlohmann::json::parse(slurp(dir / "metrics.json"))["statistics"].is_null());
  fs::remove_all(dir);
}

TEST_CASE("unwritable output directory") {
  CHECK(expect_error([] { run_in(small_config(), "/proc/sboxlon_cannot_write"); }) == "io");
}

TEST_CASE("output root from the environment") {
  setenv("SBOXLON_OUTPUT_ROOT", "/tmp/root_x", 1);
  CHECK(resolve_output_directory("runs/a") == fs::path("/tmp/root_x/runs/a"));
  CHECK(resolve_output_directory("/abs/b") == fs::path("/abs/b"));
  unsetenv("SBOXLON_OUTPUT_ROOT");
  CHECK(resolve_output_directory("runs/a") == fs::path("runs/a"));
}
