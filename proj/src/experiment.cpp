#include "sboxlon/experiment.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>
#include <vector>

#include "json.hpp"
#include "sboxlon/basin_store.hpp"
#include "sboxlon/dist_fit.hpp"
#include "sboxlon/local_search.hpp"
#include "sboxlon/lon.hpp"
#include "sboxlon/rng.hpp"

namespace sboxlon {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

constexpr std::string_view kManifestFormat = "sboxlon-experiment/1";
constexpr std::array<std::string_view, 12> kConfigKeys = {
    "n",           "fitness",         "operator", "mode",    "samples",          "seed",
    "path_mode",   "path_sources",    "bootstrap_count", "workers", "output_directory",
    "exclude_zero_nl_optima"};

[[noreturn]] void config_error(const std::string& message) {
  throw ExperimentError("config", message);
}

std::string trim(std::string_view s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string_view::npos) return {};
  const auto end = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(begin, end - begin + 1));
}

template <typename T>
T parse_unsigned(const std::string& key, const std::string& value) {
  T out{};
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || ptr != value.data() + value.size()) {
    config_error("key '" + key + "' expects a non-negative integer, got '" + value + "'");
  }
  return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true") return true;
  if (value == "false") return false;
  config_error("key '" + key + "' expects true or false, got '" + value + "'");
}

std::size_t factorial_or_cap(std::size_t m) {
  std::size_t out = 1;
  for (std::size_t k = 2; k <= m; ++k) {
    if (out > std::numeric_limits<std::size_t>::max() / k) return std::numeric_limits<std::size_t>::max();
    out *= k;
  }
  return out;
}

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("sha256 failed");
  }
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  for (unsigned k = 0; k < length; ++k) {
    out.push_back(hex[digest[k] >> 4]);
    out.push_back(hex[digest[k] & 15]);
  }
  return out;
}

std::string read_file(const fs::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw ExperimentError("io", "cannot read " + file.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& file, std::string_view content) {
  const fs::path tmp = file.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ExperimentError("io", "cannot write " + file.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw ExperimentError("io", "write failed for " + file.string());
  }
  fs::rename(tmp, file);
}

std::string format_double(double value) {
  char buffer[64];
  auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
  return std::string(buffer, ptr);
}

std::string experiment_id(const ExperimentConfig& config) { return config_checksum(config).substr(0, 16); }

json config_json(const ExperimentConfig& config) {
  json out = json::object();
  std::istringstream lines(to_text(config));
  std::string line;
  while (std::getline(lines, line)) {
    const auto eq = line.find('=');
    out[trim(std::string_view(line).substr(0, eq))] = trim(std::string_view(line).substr(eq + 1));
  }
  return out;
}

ExperimentConfig config_from_json(const json& object) {
  std::string text;
  for (const auto& [key, value] : object.items()) text += key + " = " + value.get<std::string>() + "\n";
  return parse_config(text);
}

// Manifest --------------------------------------------------------------

struct Manifest {
  ExperimentConfig config;
  std::string checksum;
  std::string status = "running";
  std::size_t completed_samples = 0;
  std::size_t basins_written = 0;
  std::size_t members_written = 0;
  StoreOffsets offsets;
  json outputs = json::object();
  std::string content_checksum;
};

fs::path manifest_path(const fs::path& dir) { return dir / "manifest.json"; }

void save_manifest(const fs::path& dir, const Manifest& m) {
  json out;
  out["format"] = kManifestFormat;
  out["experiment_id"] = m.checksum.substr(0, 16);
  out["config"] = config_json(m.config);
  out["config_checksum"] = m.checksum;
  out["status"] = m.status;
  out["requested_samples"] = requested_samples(m.config);
  out["completed_samples"] = m.completed_samples;
  out["store"] = {{"basins", m.basins_written},
                  {"members", m.members_written},
                  {"optima_bytes", m.offsets.optima_bytes},
                  {"member_bytes", m.offsets.member_bytes}};
  out["outputs"] = m.outputs;
  out["content_checksum"] = m.content_checksum;
  write_file(manifest_path(dir), out.dump(2) + "\n");
}

Manifest load_manifest(const fs::path& dir) {
  json in;
  try {
    in = json::parse(read_file(manifest_path(dir)));
  } catch (const json::exception& e) {
    throw ExperimentError("manifest", std::string("unreadable manifest: ") + e.what());
  }
  if (in.value("format", "") != kManifestFormat) throw ExperimentError("manifest", "unknown manifest format");
  Manifest m;
  try {
    m.config = config_from_json(in.at("config"));
    m.checksum = in.at("config_checksum").get<std::string>();
    m.status = in.at("status").get<std::string>();
    m.completed_samples = in.at("completed_samples").get<std::size_t>();
    const auto& store = in.at("store");
    m.basins_written = store.at("basins").get<std::size_t>();
    m.members_written = store.at("members").get<std::size_t>();
    m.offsets.optima_bytes = store.at("optima_bytes").get<std::uint64_t>();
    m.offsets.member_bytes = store.at("member_bytes").get<std::uint64_t>();
    m.outputs = in.value("outputs", json::object());
    m.content_checksum = in.value("content_checksum", "");
  } catch (const json::exception& e) {
    throw ExperimentError("manifest", std::string("malformed manifest: ") + e.what());
  }
  return m;
}

unsigned thread_count(const ExperimentConfig& config, std::optional<unsigned> threads) {
  return std::max(1u, threads.value_or(config.workers));
}

// Analysis ----------------------------------------------------------------

LocalOptimaNetwork load_network(const fs::path& dir, const ExperimentConfig& config) {
  std::ifstream nodes(dir / "nodes.csv"), edges(dir / "edges.csv");
  if (!nodes || !edges) throw ExperimentError("io", "network CSVs missing in " + dir.string());
  LocalOptimaNetwork lon = read_lon_csv(nodes, edges, config.fitness);
  lon.experiment_id = experiment_id(config);
  return lon;
}

BasinSet load_store(const fs::path& dir, const Manifest& m) {
  return load_basin_store(dir, m.config.n, m.config.fitness, experiment_id(m.config), m.offsets);
}

json stats_json(const LonStatistics& s) {
  json out;
  out["n_v"] = s.n_v;
  out["n_e"] = s.n_e;
  out["z"] = s.z;
  out["z_numerator"] = 2 * s.n_e;
  out["z_denominator"] = s.n_v;
  out["C"] = s.C;
  out["C_r"] = s.C_r;
  out["l"] = s.l ? json(*s.l) : json(nullptr);
  out["l_mode"] = to_string(s.l_mode);
  out["l_sources"] = s.l_sources;
  out["pi"] = s.pi;
  out["S"] = s.S;
  return out;
}

void write_network(const fs::path& dir, const LocalOptimaNetwork& lon) {
  std::ostringstream nodes, edges, graphml;
  write_nodes_csv(nodes, lon);
  write_edges_csv(edges, lon);
  write_graphml(graphml, lon);
  write_file(dir / "nodes.csv", nodes.str());
  write_file(dir / "edges.csv", edges.str());
  write_file(dir / "lon.graphml", graphml.str());
}

void write_metrics(const fs::path& dir, const Manifest& m, const BasinSet& set,
                   const LocalOptimaNetwork& lon, unsigned threads) {
  const ExperimentConfig& config = m.config;
  // A short run can leave fewer optima than requested path sources.
  const std::size_t sources = std::min(config.path_sources, lon.nodes.size());
  const PathKind kind = config.path_mode == PathKind::sampled && sources == 0 ? PathKind::skip : config.path_mode;
  const PathMode mode{kind, sources, derive_seed(config.seed, 7)};
  std::optional<LonStatistics> stats;
  if (!lon.nodes.empty()) stats = compute_stats(lon, mode, threads);

  std::ostringstream dist;
  dist << "k,P\n";
  if (!lon.nodes.empty()) {
    for (const auto& [k, p] : cumulative_degree_distribution(lon)) dist << k << ',' << format_double(p) << '\n';
  }
  write_file(dir / "degree_distribution.csv", dist.str());

  const auto degree = correlation_export(set, lon, CorrelationKind::degree_vs_basin);
  const auto fit = correlation_export(set, lon, CorrelationKind::fitness_vs_basin);
  std::ostringstream degree_csv, fitness_csv;
  degree_csv << "degree,basin_size\n";
  for (const auto& [x, y] : degree.pairs) degree_csv << format_double(x) << ',' << format_double(y) << '\n';
  fitness_csv << "fitness,basin_size\n";
  for (const auto& [x, y] : fit.pairs) fitness_csv << format_double(x) << ',' << format_double(y) << '\n';
  write_file(dir / "correlation_degree_basin.csv", degree_csv.str());
  write_file(dir / "correlation_fitness_basin.csv", fitness_csv.str());

  json out;
  out["experiment_id"] = experiment_id(config);
  out["config_checksum"] = config_checksum(config);
  out["completed_samples"] = m.completed_samples;
  out["status"] = m.status;
  out["statistics"] = stats ? stats_json(*stats) : json(nullptr);
  out["spearman_degree_basin"] = degree.spearman ? json(*degree.spearman) : json(nullptr);
  out["spearman_fitness_basin"] = fit.spearman ? json(*fit.spearman) : json(nullptr);
  if (!lon.nodes.empty()) {
    const auto best = std::max_element(lon.nodes.begin(), lon.nodes.end(),
                                       [](const LonNode& a, const LonNode& b) { return a.fitness < b.fitness; });
    out["best_fitness"] = {{"numerator", best->fitness.numerator()},
                           {"denominator", best->fitness.denominator()},
                           {"nonlinearity", best->fitness.nonlinearity}};
  }
  out["total_basins"] = set.basins().size();
  out["total_members"] = set.total_members();
  write_file(dir / "metrics.json", out.dump(2) + "\n");
}

void write_fits(const fs::path& dir, const ExperimentConfig& config, const LocalOptimaNetwork& lon,
                unsigned threads) {
  std::vector<std::int64_t> degrees;
  for (const auto& node : lon.nodes) degrees.push_back(static_cast<std::int64_t>(node.degree));
  json fits = json::array();
  std::optional<double> p_values[2];
  const TailModel models[2] = {TailModel::power_law, TailModel::exponential};
  for (int k = 0; k < 2; ++k) {
    json entry;
    entry["model"] = to_string(models[k]);
    const std::uint64_t seed = derive_seed(config.seed, 101 + static_cast<std::uint64_t>(k));
    try {
      const TailFit f = fit_tail(degrees, models[k], config.bootstrap_count, seed, threads);
      entry["parameter"] = f.parameter;
      entry["x_min"] = f.x_min;
      entry["ks_statistic"] = f.ks_statistic;
      entry["p_value"] = f.p_value;
      entry["bootstrap_count"] = f.bootstrap_count;
      entry["seed"] = f.seed;
      entry["verdict"] = to_string(verdict_for(f.p_value));
      entry["observations"] = f.observations;
      entry["tail_size"] = f.tail_size;
      p_values[k] = f.p_value;
    } catch (const std::invalid_argument& e) {
      entry["skipped"] = e.what();
      entry["bootstrap_count"] = config.bootstrap_count;
      entry["seed"] = seed;
    }
    fits.push_back(entry);
  }
  json out;
  out["experiment_id"] = experiment_id(config);
  out["significance"] = kSignificance;
  out["fits"] = fits;
  write_file(dir / "fit_report.json", out.dump(2) + "\n");
}

void record_outputs(const fs::path& dir, Manifest& m) {
  m.outputs = json::object();
  for (const char* name : {"nodes.csv", "edges.csv", "lon.graphml", "metrics.json", "degree_distribution.csv",
                           "correlation_degree_basin.csv", "correlation_fitness_basin.csv",
                           "fit_report.json"}) {
    if (fs::exists(dir / name)) m.outputs[name] = sha256_hex(read_file(dir / name));
  }
  m.content_checksum = sha256_hex(read_file(dir / "nodes.csv") + read_file(dir / "edges.csv"));
}

void analyse(const fs::path& dir, Manifest& m, const BasinSet& set, unsigned threads) {
  write_basin_summary(dir, set);
  const LocalOptimaNetwork lon =
      build_edges(set, m.config.op, EdgeOptions{m.config.exclude_zero_nl_optima, threads});
  write_network(dir, lon);
  write_metrics(dir, m, set, lon, threads);
  write_fits(dir, m.config, lon, threads);
  record_outputs(dir, m);
}

// Sampling ----------------------------------------------------------------

RunResult sample_and_analyse(const fs::path& dir, Manifest m, const RunOptions& options) {
  const ExperimentConfig& config = m.config;
  const unsigned threads = thread_count(config, options.threads);
  const std::size_t total = requested_samples(config);

  BasinSet set = m.completed_samples == 0 && m.offsets.optima_bytes == 0 && m.offsets.member_bytes == 0
                     ? BasinSet(config.n, config.fitness, experiment_id(config))
                     : load_store(dir, m);
  BasinStoreWriter writer(dir, m.offsets, m.basins_written, m.members_written);

  auto checkpoint = [&] {
    m.offsets = writer.sync(set);
    m.basins_written = set.basins().size();
    m.members_written = set.total_members();
    save_manifest(dir, m);
  };

  const ClimbOptions climb{config.fitness, config.op, 1};
  const std::size_t batch = threads == 1 ? 1 : 8 * std::size_t{threads};
  const auto started = std::chrono::steady_clock::now();
  std::size_t k = m.completed_samples;
  std::size_t last_checkpoint = k;
  SBox next = start_for_sample(config, k);
  m.status = "running";

  std::vector<SBox> starts;
  std::vector<std::optional<Trajectory>> results;
  while (k < total) {
    if (options.stop_after && k >= *options.stop_after) {
      m.status = "interrupted";
      checkpoint();
      return RunResult{dir, k, m.status};
    }
    if (options.time_budget_seconds) {
      const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - started;
      if (elapsed.count() >= *options.time_budget_seconds) {
        m.status = "budget_exhausted";
        break;
      }
    }
    std::size_t count = std::min(batch, total - k);
    if (options.stop_after) count = std::min(count, *options.stop_after - k);
    starts.clear();
    for (std::size_t b = 0; b < count; ++b) {
      starts.push_back(next);
      next = lex_successor(next);
    }
    results.assign(count, std::nullopt);
    if (threads == 1) {
      results[0] = hill_climb_memoized(starts[0], set.archive(), climb);
    } else {
      std::atomic<std::size_t> cursor{0};
      std::vector<std::jthread> pool;
      for (unsigned w = 0; w < threads; ++w) {
        pool.emplace_back([&] {
          for (std::size_t b = cursor++; b < count; b = cursor++) {
            results[b] = hill_climb_memoized(starts[b], set.archive(), climb);
          }
        });
      }
    }
    // Merging in sample order keeps basin ids and logs independent of threads.
    for (auto& t : results) set.add(*t);
    k += count;
    m.completed_samples = k;
    if (k - last_checkpoint >= options.checkpoint_every) {
      checkpoint();
      last_checkpoint = k;
    }
  }
  if (m.status == "running") m.status = "complete";
  m.completed_samples = k;
  checkpoint();

  analyse(dir, m, set, threads);
  save_manifest(dir, m);
  return RunResult{dir, k, m.status};
}

void require_consistent(const fs::path& dir, const Manifest& m) {
  const ExperimentConfig stored = load_config(dir / "config.txt");
  if (config_checksum(stored) != m.checksum || config_checksum(m.config) != m.checksum) {
    throw ExperimentError("checksum", "config.txt in " + dir.string() + " does not match the manifest");
  }
}

}  // namespace

ExperimentConfig parse_config(std::string_view text) {
  std::map<std::string, std::string> values;
  std::istringstream lines{std::string(text)};
  std::string line;
  std::size_t number = 0;
  while (std::getline(lines, line)) {
    ++number;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string content = trim(line);
    if (content.empty()) continue;
    const auto eq = content.find('=');
    if (eq == std::string::npos) config_error("line " + std::to_string(number) + ": expected key = value");
    const std::string key = trim(std::string_view(content).substr(0, eq));
    const std::string value = trim(std::string_view(content).substr(eq + 1));
    if (std::find(kConfigKeys.begin(), kConfigKeys.end(), key) == kConfigKeys.end()) {
      config_error("unknown key '" + key + "'");
    }
    if (!values.emplace(key, value).second) config_error("duplicate key '" + key + "'");
  }
  for (auto key : kConfigKeys) {
    if (!values.count(std::string(key))) config_error("missing key '" + std::string(key) + "'");
  }

  ExperimentConfig c;
  try {
    c.n = parse_unsigned<int>("n", values["n"]);
    c.fitness = parse_fitness_kind(values["fitness"]);
    c.op = parse_move_kind(values["operator"]);
    c.path_mode = parse_path_kind(values["path_mode"]);
  } catch (const std::invalid_argument& e) {
    config_error(e.what());
  }
  const std::string& mode = values["mode"];
  if (mode == "exhaustive") {
    c.mode = SampleMode::exhaustive;
  } else if (mode == "samples") {
    c.mode = SampleMode::samples;
  } else {
    config_error("mode must be 'exhaustive' or 'samples'");
  }
  c.samples = parse_unsigned<std::size_t>("samples", values["samples"]);
  c.seed = parse_unsigned<std::uint64_t>("seed", values["seed"]);
  c.path_sources = parse_unsigned<std::size_t>("path_sources", values["path_sources"]);
  c.bootstrap_count = parse_unsigned<std::size_t>("bootstrap_count", values["bootstrap_count"]);
  c.workers = parse_unsigned<unsigned>("workers", values["workers"]);
  c.output_directory = values["output_directory"];
  c.exclude_zero_nl_optima = parse_bool("exclude_zero_nl_optima", values["exclude_zero_nl_optima"]);
  validate(c);
  return c;
}

void validate(const ExperimentConfig& c) {
  if (c.n < 3 || c.n > kMaxBits) config_error("n must be in [3, 8]");
  if (c.mode == SampleMode::exhaustive) {
    if (c.n != 3) config_error("exhaustive mode is only available for n = 3");
    if (c.samples != factorial_or_cap(8)) config_error("exhaustive mode for n = 3 requires samples = 40320");
  }
  if (c.samples < 1) config_error("samples must be at least 1");
  if (c.mode == SampleMode::samples && c.samples > factorial_or_cap(std::size_t{1} << c.n)) {
    config_error("samples exceeds the size of the search space");
  }
  if (c.path_mode == PathKind::sampled && c.path_sources < 1) {
    config_error("path_mode = sampled needs path_sources >= 1");
  }
  if (c.path_mode != PathKind::sampled && c.path_sources != 0) {
    config_error("path_sources must be 0 unless path_mode = sampled");
  }
  if (c.bootstrap_count < kMinBootstrap) config_error("bootstrap_count must be at least 100");
  if (c.workers < 1) config_error("workers must be at least 1");
  if (c.output_directory.empty()) config_error("output_directory must not be empty");
}

ExperimentConfig load_config(const fs::path& file) { return parse_config(read_file(file)); }

std::string to_text(const ExperimentConfig& c) {
  std::ostringstream out;
  out << "n = " << c.n << '\n'
      << "fitness = " << to_string(c.fitness) << '\n'
      << "operator = " << to_string(c.op) << '\n'
      << "mode = " << (c.mode == SampleMode::exhaustive ? "exhaustive" : "samples") << '\n'
      << "samples = " << c.samples << '\n'
      << "seed = " << c.seed << '\n'
      << "path_mode = " << to_string(c.path_mode) << '\n'
      << "path_sources = " << c.path_sources << '\n'
      << "bootstrap_count = " << c.bootstrap_count << '\n'
      << "workers = " << c.workers << '\n'
      << "output_directory = " << c.output_directory << '\n'
      << "exclude_zero_nl_optima = " << (c.exclude_zero_nl_optima ? "true" : "false") << '\n';
  return out.str();
}

std::string config_checksum(const ExperimentConfig& config) {
  ExperimentConfig canonical = config;
  canonical.workers = 1;
  canonical.output_directory = "-";
  return sha256_hex(to_text(canonical));
}

std::size_t requested_samples(const ExperimentConfig& config) {
  return config.mode == SampleMode::exhaustive ? factorial_or_cap(std::size_t{1} << config.n) : config.samples;
}

SBox start_for_sample(const ExperimentConfig& config, std::size_t k) {
  SBox s = random_permutation(config.n, config.seed);
  for (std::size_t step = 0; step < k; ++step) s = lex_successor(s);
  return s;
}

fs::path resolve_output_directory(const fs::path& configured) {
  if (configured.is_absolute()) return configured;
  if (const char* root = std::getenv("SBOXLON_OUTPUT_ROOT"); root && *root) return fs::path(root) / configured;
  return configured;
}

RunResult run(const ExperimentConfig& config, const RunOptions& options) {
  return run_in(config, resolve_output_directory(config.output_directory), options);
}

RunResult run_in(const ExperimentConfig& config, const fs::path& dir, const RunOptions& options) {
  validate(config);
  if (fs::exists(manifest_path(dir))) {
    const Manifest existing = load_manifest(dir);
    if (existing.checksum != config_checksum(config)) {
      throw ExperimentError("manifest_mismatch",
                            dir.string() + " already holds an experiment with a different config");
    }
    return resume(dir, options);
  }
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw ExperimentError("io", "cannot create " + dir.string());
  try {
    write_file(dir / "config.txt", to_text(config));
  } catch (const fs::filesystem_error& e) {
    throw ExperimentError("io", e.what());
  }
  Manifest m;
  m.config = config;
  m.checksum = config_checksum(config);
  save_manifest(dir, m);
  return sample_and_analyse(dir, m, options);
}

RunResult resume(const fs::path& dir, const RunOptions& options) {
  if (!fs::exists(manifest_path(dir))) throw ExperimentError("manifest", "no manifest in " + dir.string());
  const Manifest m = load_manifest(dir);
  require_consistent(dir, m);
  if (m.status == "complete") return RunResult{dir, m.completed_samples, m.status};
  return sample_and_analyse(dir, m, options);
}

void export_network(const fs::path& dir, std::optional<unsigned> threads) {
  Manifest m = load_manifest(dir);
  require_consistent(dir, m);
  const BasinSet set = load_store(dir, m);
  write_basin_summary(dir, set);
  const LocalOptimaNetwork lon = build_edges(
      set, m.config.op, EdgeOptions{m.config.exclude_zero_nl_optima, thread_count(m.config, threads)});
  write_network(dir, lon);
  record_outputs(dir, m);
  save_manifest(dir, m);
}

void recompute_metrics(const fs::path& dir, std::optional<unsigned> threads) {
  Manifest m = load_manifest(dir);
  require_consistent(dir, m);
  const BasinSet set = load_store(dir, m);
  const LocalOptimaNetwork lon = load_network(dir, m.config);
  write_metrics(dir, m, set, lon, thread_count(m.config, threads));
  record_outputs(dir, m);
  save_manifest(dir, m);
}

void refit(const fs::path& dir, std::optional<unsigned> threads) {
  Manifest m = load_manifest(dir);
  require_consistent(dir, m);
  const LocalOptimaNetwork lon = load_network(dir, m.config);
  write_fits(dir, m.config, lon, thread_count(m.config, threads));
  record_outputs(dir, m);
  save_manifest(dir, m);
}

}  // namespace sboxlon
