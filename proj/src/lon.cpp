#include "sboxlon/lon.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace sboxlon {

BasinSet::BasinSet(int n, FitnessKind fitness, std::string experiment_id)
    : fitness_(fitness), experiment_id_(std::move(experiment_id)), archive_(n) {}

std::uint32_t BasinSet::create_basin(const SBox& optimum, FitnessValue fitness) {
  if (optimum.bits() != bits()) throw std::invalid_argument("basin: optimum width mismatch");
  const auto id = static_cast<std::uint32_t>(basins_.size());
  basins_.push_back(Basin{id, optimum, fitness, {}});
  return id;
}

bool BasinSet::add_member(std::span<const std::uint8_t> key, std::uint32_t basin) {
  if (basin >= basins_.size()) throw std::out_of_range("basin: unknown basin id");
  if (!archive_.insert(key, basin)) return false;
  basins_[basin].members.push_back(static_cast<std::uint32_t>(archive_.size() - 1));
  return true;
}

std::uint32_t BasinSet::add(const Trajectory& trajectory) {
  if (trajectory.chain.empty()) throw std::invalid_argument("basin: empty trajectory");
  std::uint32_t basin;
  if (trajectory.merged_basin) {
    basin = *trajectory.merged_basin;
    if (basin >= basins_.size()) throw std::logic_error("basin: trajectory references unknown basin");
  } else if (auto known = archive_.find(trajectory.terminal().table())) {
    // Another climb reached the same optimum first.
    basin = *known;
  } else {
    basin = create_basin(trajectory.terminal(), trajectory.fitness.back());
  }
  for (const SBox& s : trajectory.chain) add_member(s.table(), basin);
  return basin;
}

BasinSet accumulate(std::span<const Trajectory> trajectories, int n, FitnessKind fitness) {
  BasinSet set(n, fitness);
  for (const auto& t : trajectories) set.add(t);
  return set;
}

std::size_t LocalOptimaNetwork::index_of(std::uint32_t id) const {
  auto it = std::lower_bound(nodes.begin(), nodes.end(), id,
                             [](const LonNode& node, std::uint32_t v) { return node.id < v; });
  if (it == nodes.end() || it->id != id) throw std::out_of_range("lon: unknown node id");
  return static_cast<std::size_t>(it - nodes.begin());
}

namespace {

bool included(const Basin& basin, const EdgeOptions& options) {
  return !(options.exclude_zero_nl_optima && basin.fitness.nonlinearity == 0);
}

void collect_edges(const BasinSet& set, MoveKind op, const std::vector<bool>& keep,
                   std::span<const std::uint32_t> members, std::vector<std::uint64_t>& out) {
  const SolutionArchive& archive = set.archive();
  const ZobristHash& zobrist = archive.hasher();
  const std::size_t size = archive.key_size();
  std::vector<std::uint8_t> buffer(size);

  for (std::uint32_t member : members) {
    const std::uint32_t own = archive.member_basin(member);
    auto key = archive.member_key(member);
    const std::uint64_t hash = archive.member_hash(member);
    std::copy(key.begin(), key.end(), buffer.begin());
    for (std::size_t i = 0; i + 1 < size; ++i) {
      for (std::size_t j = i + 1; j < size; ++j) {
        std::uint64_t h;
        if (op == MoveKind::swap) {
          h = hash ^ zobrist.swap_delta(buffer, i, j);
          std::swap(buffer[i], buffer[j]);
        } else {
          h = hash;
          for (std::size_t k = i; k <= j; ++k) {
            h ^= zobrist.term(k, buffer[k]) ^ zobrist.term(k, buffer[i + j - k]);
          }
          std::reverse(buffer.begin() + i, buffer.begin() + j + 1);
        }
        if (auto other = archive.find_member(buffer, h)) {
          const std::uint32_t b = archive.member_basin(*other);
          if (b != own && keep[b]) {
            const std::uint32_t lo = std::min(own, b), hi = std::max(own, b);
            out.push_back((std::uint64_t{lo} << 32) | hi);
          }
        }
        if (op == MoveKind::swap) {
          std::swap(buffer[i], buffer[j]);
        } else {
          std::reverse(buffer.begin() + i, buffer.begin() + j + 1);
        }
      }
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
}

}  // namespace

LocalOptimaNetwork build_edges(const BasinSet& set, MoveKind op, const EdgeOptions& options) {
  LocalOptimaNetwork lon;
  lon.experiment_id = set.experiment_id();

  std::vector<bool> keep(set.basins().size());
  std::vector<std::uint32_t> members;
  for (const Basin& basin : set.basins()) {
    keep[basin.id] = included(basin, options);
    if (!keep[basin.id]) continue;
    lon.nodes.push_back(LonNode{basin.id, basin.fitness, basin.size(), 0});
    members.insert(members.end(), basin.members.begin(), basin.members.end());
  }

  const unsigned workers = std::max(1u, options.workers);
  std::vector<std::vector<std::uint64_t>> partial(workers);
  if (workers == 1) {
    collect_edges(set, op, keep, members, partial[0]);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        const std::size_t begin = members.size() * w / workers;
        const std::size_t end = members.size() * (w + 1) / workers;
        collect_edges(set, op, keep, std::span(members).subspan(begin, end - begin), partial[w]);
      });
    }
  }

  std::vector<std::uint64_t> packed;
  for (auto& p : partial) packed.insert(packed.end(), p.begin(), p.end());
  std::sort(packed.begin(), packed.end());
  packed.erase(std::unique(packed.begin(), packed.end()), packed.end());

  lon.edges.reserve(packed.size());
  for (std::uint64_t e : packed) {
    const auto a = static_cast<std::uint32_t>(e >> 32);
    const auto b = static_cast<std::uint32_t>(e & 0xffffffffu);
    lon.edges.emplace_back(a, b);
    ++lon.nodes[lon.index_of(a)].degree;
    ++lon.nodes[lon.index_of(b)].degree;
  }
  return lon;
}

void write_nodes_csv(std::ostream& out, const LocalOptimaNetwork& lon) {
  out << "id,fitness_numerator,fitness_denominator,basin_size,degree\n";
  for (const auto& node : lon.nodes) {
    out << node.id << ',' << node.fitness.numerator() << ',' << node.fitness.denominator() << ','
        << node.basin_size << ',' << node.degree << '\n';
  }
}

void write_edges_csv(std::ostream& out, const LocalOptimaNetwork& lon) {
  out << "id_a,id_b\n";
  for (const auto& [a, b] : lon.edges) out << a << ',' << b << '\n';
}

void write_graphml(std::ostream& out, const LocalOptimaNetwork& lon) {
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
         "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n"
         "  <key id=\"fn\" for=\"node\" attr.name=\"fitness_numerator\" attr.type=\"long\"/>\n"
         "  <key id=\"fd\" for=\"node\" attr.name=\"fitness_denominator\" attr.type=\"long\"/>\n"
         "  <key id=\"fv\" for=\"node\" attr.name=\"fitness\" attr.type=\"double\"/>\n"
         "  <key id=\"bs\" for=\"node\" attr.name=\"basin_size\" attr.type=\"long\"/>\n"
         "  <key id=\"dg\" for=\"node\" attr.name=\"degree\" attr.type=\"long\"/>\n"
         "  <graph id=\"lon\" edgedefault=\"undirected\">\n";
  std::ostringstream value;
  value.precision(17);
  for (const auto& node : lon.nodes) {
    value.str({});
    value << node.fitness.as_double();
    out << "    <node id=\"n" << node.id << "\">"
        << "<data key=\"fn\">" << node.fitness.numerator() << "</data>"
        << "<data key=\"fd\">" << node.fitness.denominator() << "</data>"
        << "<data key=\"fv\">" << value.str() << "</data>"
        << "<data key=\"bs\">" << node.basin_size << "</data>"
        << "<data key=\"dg\">" << node.degree << "</data></node>\n";
  }
  for (const auto& [a, b] : lon.edges) {
    out << "    <edge source=\"n" << a << "\" target=\"n" << b << "\"/>\n";
  }
  out << "  </graph>\n</graphml>\n";
}

namespace {

std::vector<std::int64_t> split_row(const std::string& line, std::size_t expected) {
  std::vector<std::int64_t> fields;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) fields.push_back(std::stoll(cell));
  if (fields.size() != expected) throw std::runtime_error("lon csv: malformed row '" + line + "'");
  return fields;
}

}  // namespace

LocalOptimaNetwork read_lon_csv(std::istream& nodes, std::istream& edges, FitnessKind kind) {
  LocalOptimaNetwork lon;
  std::string line;
  std::getline(nodes, line);  // header
  while (std::getline(nodes, line)) {
    if (line.empty()) continue;
    auto f = split_row(line, 5);
    FitnessValue fitness{kind, 0, 1};
    if (kind == FitnessKind::nl) {
      fitness.nonlinearity = static_cast<int>(f[1]);
    } else {
      fitness.worst_components = static_cast<int>(f[2]);
      fitness.nonlinearity = static_cast<int>((f[1] - 1) / f[2]);
    }
    lon.nodes.push_back(LonNode{static_cast<std::uint32_t>(f[0]), fitness,
                                static_cast<std::size_t>(f[3]), static_cast<std::size_t>(f[4])});
  }
  std::getline(edges, line);
  while (std::getline(edges, line)) {
    if (line.empty()) continue;
    auto f = split_row(line, 2);
    lon.edges.emplace_back(static_cast<std::uint32_t>(f[0]), static_cast<std::uint32_t>(f[1]));
  }
  if (!std::is_sorted(lon.nodes.begin(), lon.nodes.end(),
                      [](const LonNode& a, const LonNode& b) { return a.id < b.id; })) {
    throw std::runtime_error("lon csv: nodes not sorted by id");
  }
  return lon;
}

}  // namespace sboxlon
