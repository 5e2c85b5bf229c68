// Command-line front end for running and post-processing LON experiments.

#include <cstdio>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "sboxlon/experiment.hpp"

namespace {

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c == '\n' ? ' ' : c);
  }
  return out + "\"";
}

int fail(const std::string& code, const std::string& message) {
  std::cerr << "error code=" << code << " message=" << quote(message) << '\n';
  return code == "config" ? 2 : 1;
}

void report(const sboxlon::RunResult& r) {
  std::cout << "status=" << r.status << " completed_samples=" << r.completed_samples
            << " directory=" << r.directory.string() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Local optima network experiments on bijective S-boxes"};
  app.require_subcommand(1);

  std::string config_file, dir;
  std::optional<unsigned> threads;
  std::optional<double> budget;
  std::optional<std::size_t> stop_after;
  std::optional<std::uint64_t> seed;

  auto* run = app.add_subcommand("run", "run an experiment described by a config file");
  run->add_option("-c,--config", config_file, "config file")->required()->check(CLI::ExistingFile);
  run->add_option("-d,--dir", dir, "output directory (overrides output_directory)");
  run->add_option("--seed", seed, "override the config seed");
  run->add_option("--time-budget", budget, "seconds of sampling before analysing what was sampled");
  run->add_option("--stop-after", stop_after, "stop after this many samples, leaving a resumable run");

  auto* resume = app.add_subcommand("resume", "continue an interrupted experiment");
  resume->add_option("--time-budget", budget, "seconds of sampling before analysing what was sampled");
  resume->add_option("--stop-after", stop_after, "stop after this many samples");

  auto* exporter = app.add_subcommand("export", "rebuild node, edge and GraphML exports from the basin store");
  auto* metrics = app.add_subcommand("metrics", "recompute network metrics and correlation data");
  auto* fit = app.add_subcommand("fit", "refit the degree distribution");
  auto* check = app.add_subcommand("check-config", "validate a config file and print its canonical form");
  check->add_option("-c,--config", config_file, "config file")->required()->check(CLI::ExistingFile);

  for (auto* sub : {resume, exporter, metrics, fit}) {
    sub->add_option("-d,--dir", dir, "experiment directory")->required();
  }
  for (auto* sub : {run, resume, exporter, metrics, fit}) {
    sub->add_option("-t,--threads", threads, "worker threads (overrides workers)")->check(CLI::PositiveNumber);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    return fail("usage", e.what());
  }

  try {
    sboxlon::RunOptions options;
    options.threads = threads;
    options.time_budget_seconds = budget;
    options.stop_after = stop_after;

    if (*run) {
      sboxlon::ExperimentConfig config = sboxlon::load_config(config_file);
      if (seed) config.seed = *seed;
      const auto result = dir.empty() ? sboxlon::run(config, options) : sboxlon::run_in(config, dir, options);
      report(result);
    } else if (*resume) {
      report(sboxlon::resume(dir, options));
    } else if (*exporter) {
      sboxlon::export_network(dir, threads);
    } else if (*metrics) {
      sboxlon::recompute_metrics(dir, threads);
    } else if (*fit) {
      sboxlon::refit(dir, threads);
    } else if (*check) {
      const auto config = sboxlon::load_config(config_file);
      std::cout << sboxlon::to_text(config) << "checksum = " << sboxlon::config_checksum(config) << '\n';
    }
  } catch (const sboxlon::ExperimentError& e) {
    return fail(e.code(), e.what());
  } catch (const std::exception& e) {
    return fail("internal", e.what());
  }
  return 0;
}
