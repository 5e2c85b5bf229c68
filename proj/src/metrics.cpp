#include "sboxlon/metrics.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <thread>

#include "sboxlon/rng.hpp"

namespace sboxlon {

std::string_view to_string(PathKind kind) {
  switch (kind) {
    case PathKind::exact: return "exact";
    case PathKind::sampled: return "sampled";
    case PathKind::skip: return "skip";
  }
  return "skip";
}

PathKind parse_path_kind(std::string_view text) {
  if (text == "exact") return PathKind::exact;
  if (text == "sampled") return PathKind::sampled;
  if (text == "skip") return PathKind::skip;
  throw std::invalid_argument("unknown path mode '" + std::string(text) + "'");
}

Adjacency make_adjacency(const LocalOptimaNetwork& lon) {
  const std::size_t count = lon.nodes.size();
  Adjacency adj;
  adj.offsets.assign(count + 1, 0);
  std::vector<std::pair<std::uint32_t, std::uint32_t>> local;
  local.reserve(lon.edges.size());
  for (const auto& [a, b] : lon.edges) {
    if (a == b) throw std::invalid_argument("lon: self-loop on node " + std::to_string(a));
    const auto ia = static_cast<std::uint32_t>(lon.index_of(a));
    const auto ib = static_cast<std::uint32_t>(lon.index_of(b));
    local.emplace_back(ia, ib);
    ++adj.offsets[ia + 1];
    ++adj.offsets[ib + 1];
  }
  std::partial_sum(adj.offsets.begin(), adj.offsets.end(), adj.offsets.begin());
  adj.targets.resize(adj.offsets.back());
  std::vector<std::size_t> cursor(adj.offsets.begin(), adj.offsets.end() - 1);
  for (const auto& [a, b] : local) {
    adj.targets[cursor[a]++] = b;
    adj.targets[cursor[b]++] = a;
  }
  for (std::size_t v = 0; v < count; ++v) {
    auto begin = adj.targets.begin() + static_cast<std::ptrdiff_t>(adj.offsets[v]);
    auto end = adj.targets.begin() + static_cast<std::ptrdiff_t>(adj.offsets[v + 1]);
    std::sort(begin, end);
    if (std::adjacent_find(begin, end) != end) {
      throw std::invalid_argument("lon: duplicate edge at node " + std::to_string(lon.nodes[v].id));
    }
  }
  return adj;
}

std::vector<double> local_clustering(const Adjacency& adj) {
  const std::size_t count = adj.node_count();
  std::vector<double> result(count, 0.0);
  std::vector<std::uint32_t> mark(count, 0);
  std::uint32_t stamp = 0;
  for (std::size_t v = 0; v < count; ++v) {
    auto nb = adj.neighbours(v);
    const std::size_t k = nb.size();
    if (k < 2) continue;
    ++stamp;
    for (auto u : nb) mark[u] = stamp;
    std::uint64_t links = 0;
    for (auto u : nb) {
      for (auto w : adj.neighbours(u)) links += (mark[w] == stamp);
    }
    // Every link among neighbours was seen from both ends.
    result[v] = static_cast<double>(links) / static_cast<double>(k * (k - 1));
  }
  return result;
}

std::vector<std::uint32_t> connected_components(const Adjacency& adj) {
  const std::size_t count = adj.node_count();
  constexpr auto unset = static_cast<std::uint32_t>(-1);
  std::vector<std::uint32_t> label(count, unset);
  std::vector<std::uint32_t> queue;
  std::uint32_t next = 0;
  for (std::size_t s = 0; s < count; ++s) {
    if (label[s] != unset) continue;
    label[s] = next;
    queue.assign(1, static_cast<std::uint32_t>(s));
    for (std::size_t head = 0; head < queue.size(); ++head) {
      for (auto u : adj.neighbours(queue[head])) {
        if (label[u] == unset) {
          label[u] = next;
          queue.push_back(u);
        }
      }
    }
    ++next;
  }
  return label;
}

namespace {

PathSums bitset_bfs(const Adjacency& adj, std::span<const std::uint32_t> sources) {
  const std::size_t count = adj.node_count();
  PathSums sums;
  std::vector<std::uint64_t> visited(count), frontier(count), next(count);
  for (std::size_t batch = 0; batch < sources.size(); batch += 64) {
    const std::size_t width = std::min<std::size_t>(64, sources.size() - batch);
    std::fill(visited.begin(), visited.end(), 0);
    std::fill(frontier.begin(), frontier.end(), 0);
    for (std::size_t k = 0; k < width; ++k) {
      const std::uint64_t bit = std::uint64_t{1} << k;
      visited[sources[batch + k]] |= bit;
      frontier[sources[batch + k]] |= bit;
    }
    for (std::uint64_t depth = 1;; ++depth) {
      std::uint64_t reached = 0;
      for (std::size_t v = 0; v < count; ++v) {
        std::uint64_t incoming = 0;
        for (auto u : adj.neighbours(v)) incoming |= frontier[u];
        const std::uint64_t fresh = incoming & ~visited[v];
        next[v] = fresh;
        visited[v] |= fresh;
        reached += static_cast<std::uint64_t>(std::popcount(fresh));
      }
      if (reached == 0) break;
      sums.total_distance += depth * reached;
      sums.pairs += reached;
      frontier.swap(next);
    }
  }
  return sums;
}

}  // namespace

PathSums path_sums(const Adjacency& adj, std::span<const std::uint32_t> sources, unsigned workers) {
  const std::size_t batches = (sources.size() + 63) / 64;
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(batches, 1))));
  if (workers == 1) return bitset_bfs(adj, sources);
  std::vector<PathSums> partial(workers);
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        const std::size_t begin = std::min(sources.size(), batches * w / workers * 64);
        const std::size_t end = std::min(sources.size(), batches * (w + 1) / workers * 64);
        partial[w] = bitset_bfs(adj, sources.subspan(begin, end - begin));
      });
    }
  }
  PathSums total;
  for (const auto& p : partial) {
    total.total_distance += p.total_distance;
    total.pairs += p.pairs;
  }
  return total;
}

LonStatistics compute_stats(const LocalOptimaNetwork& lon, const PathMode& mode, unsigned workers) {
  LonStatistics stats;
  stats.n_v = lon.nodes.size();
  stats.n_e = lon.edges.size();
  if (stats.n_v == 0) throw std::invalid_argument("compute_stats: empty network");
  const Adjacency adj = make_adjacency(lon);

  stats.z = 2.0 * static_cast<double>(stats.n_e) / static_cast<double>(stats.n_v);
  stats.C_r = stats.n_v > 1 ? stats.z / static_cast<double>(stats.n_v - 1) : 0.0;
  const auto clustering = local_clustering(adj);
  stats.C = std::accumulate(clustering.begin(), clustering.end(), 0.0) /
            static_cast<double>(stats.n_v);

  const auto labels = connected_components(adj);
  stats.S = labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end()) + 1;
  stats.pi = stats.S == 1 ? 1 : 0;

  stats.l_mode = mode.kind;
  if (mode.kind != PathKind::skip) {
    std::vector<std::uint32_t> sources(stats.n_v);
    std::iota(sources.begin(), sources.end(), 0u);
    if (mode.kind == PathKind::sampled) {
      if (mode.sources == 0 || mode.sources > stats.n_v) {
        throw std::invalid_argument("compute_stats: sampled path mode needs 1 <= k <= n_v sources");
      }
      Rng rng(mode.seed);
      for (std::size_t k = 0; k < mode.sources; ++k) {
        std::swap(sources[k], sources[k + rng.uniform_below(stats.n_v - k)]);
      }
      sources.resize(mode.sources);
      std::sort(sources.begin(), sources.end());
    }
    stats.l_sources = sources.size();
    const PathSums sums = path_sums(adj, sources, workers);
    if (sums.pairs > 0) {
      stats.l = static_cast<double>(sums.total_distance) / static_cast<double>(sums.pairs);
    }
  }
  return stats;
}

std::vector<std::pair<std::size_t, double>> cumulative_degree_distribution(
    const LocalOptimaNetwork& lon) {
  if (lon.nodes.empty()) throw std::invalid_argument("degree distribution: empty network");
  std::vector<std::size_t> degrees;
  degrees.reserve(lon.nodes.size());
  for (const auto& node : lon.nodes) degrees.push_back(node.degree);
  std::sort(degrees.begin(), degrees.end());
  const double total = static_cast<double>(degrees.size());
  std::vector<std::pair<std::size_t, double>> out;
  for (std::size_t k = 0; k < degrees.size();) {
    const std::size_t value = degrees[k];
    out.emplace_back(value, static_cast<double>(degrees.size() - k) / total);
    while (k < degrees.size() && degrees[k] == value) ++k;
  }
  return out;
}

std::vector<double> average_ranks(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  for (std::size_t k = 0; k < order.size();) {
    std::size_t end = k;
    while (end < order.size() && values[order[end]] == values[order[k]]) ++end;
    // Ties share the mean of positions k+1 .. end.
    const double rank = (static_cast<double>(k + 1) + static_cast<double>(end)) / 2.0;
    for (std::size_t t = k; t < end; ++t) ranks[order[t]] = rank;
    k = end;
  }
  return ranks;
}

std::optional<double> spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("spearman: length mismatch");
  if (x.size() < 2) return std::nullopt;
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  const double n = static_cast<double>(x.size());
  const double mean = (n + 1.0) / 2.0;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t k = 0; k < rx.size(); ++k) {
    sxy += (rx[k] - mean) * (ry[k] - mean);
    sxx += (rx[k] - mean) * (rx[k] - mean);
    syy += (ry[k] - mean) * (ry[k] - mean);
  }
  if (sxx == 0.0 || syy == 0.0) return std::nullopt;
  return sxy / std::sqrt(sxx * syy);
}

CorrelationData correlation_export(const BasinSet& basins, const LocalOptimaNetwork& lon,
                                   CorrelationKind kind) {
  if (basins.experiment_id() != lon.experiment_id) {
    throw std::invalid_argument("correlation_export: basins and network come from different experiments");
  }
  CorrelationData data{kind, {}, std::nullopt};
  data.pairs.reserve(lon.nodes.size());
  std::vector<double> xs, ys;
  for (const auto& node : lon.nodes) {
    if (node.id >= basins.basins().size()) {
      throw std::invalid_argument("correlation_export: node without basin");
    }
    const double size = static_cast<double>(basins.basins()[node.id].size());
    const double x = kind == CorrelationKind::degree_vs_basin ? static_cast<double>(node.degree)
                                                              : node.fitness.as_double();
    data.pairs.emplace_back(x, size);
    xs.push_back(x);
    ys.push_back(size);
  }
  data.spearman = spearman(xs, ys);
  return data;
}

}  // namespace sboxlon
