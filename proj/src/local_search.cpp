#include "sboxlon/local_search.hpp"

#include <algorithm>
#include <thread>

namespace sboxlon {

namespace {

struct ScanResult {
  std::optional<std::size_t> index;
  FitnessValue fitness;
};

ScanResult scan_range(const SpectrumTracker& current, std::span<const Move> moves,
                      std::size_t begin, std::size_t end) {
  ScanResult result{std::nullopt, current.fitness()};
  for (std::size_t k = begin; k < end; ++k) {
    if (auto f = current.evaluate_if_better(moves[k], result.fitness)) {
      result.index = k;
      result.fitness = *f;
    }
  }
  return result;
}

Trajectory climb(const SBox& start, const ClimbOptions& options, const SolutionArchive* archive) {
  Trajectory t;
  t.chain.push_back(start);
  if (archive) {
    if (auto basin = archive->find(start.table())) {
      t.fitness.push_back(fitness(start, options.fitness));
      t.merged_basin = basin;
      return t;
    }
  }
  SpectrumTracker current(start, options.fitness);
  t.fitness.push_back(current.fitness());
  const std::vector<Move> moves = enumerate_moves(start.bits(), options.op);
  while (auto k = best_improving_move(current, moves, options.workers)) {
    current.apply(moves[*k]);
    t.chain.push_back(current.sbox());
    t.fitness.push_back(current.fitness());
    if (archive) {
      if (auto basin = archive->find(current.table())) {
        t.merged_basin = basin;
        break;
      }
    }
  }
  return t;
}

}  // namespace

std::string serialize(const Trajectory& trajectory) {
  std::string out;
  for (std::size_t k = 0; k < trajectory.chain.size(); ++k) {
    out += trajectory.chain[k].to_text();
    out += " | ";
    out += std::to_string(trajectory.fitness[k].numerator());
    out += '/';
    out += std::to_string(trajectory.fitness[k].denominator());
    out += '\n';
  }
  out += trajectory.merged_basin ? "merged " + std::to_string(*trajectory.merged_basin) : "optimum";
  out += '\n';
  return out;
}

std::optional<std::size_t> best_improving_move(const SpectrumTracker& current,
                                               std::span<const Move> moves, unsigned workers) {
  const std::size_t count = moves.size();
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
  if (workers == 1) return scan_range(current, moves, 0, count).index;

  std::vector<ScanResult> partial(workers);
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        const std::size_t begin = count * w / workers;
        const std::size_t end = count * (w + 1) / workers;
        partial[w] = scan_range(current, moves, begin, end);
      });
    }
  }
  // Chunks are contiguous and visited in order, so keeping the earlier chunk
  // on ties yields the smallest index among the best moves.
  ScanResult best{std::nullopt, current.fitness()};
  for (const auto& p : partial) {
    if (p.index && p.fitness > best.fitness) best = p;
  }
  return best.index;
}

Trajectory hill_climb(const SBox& start, const ClimbOptions& options) {
  return climb(start, options, nullptr);
}

Trajectory hill_climb_memoized(const SBox& start, const SolutionArchive& archive,
                               const ClimbOptions& options) {
  if (archive.bits() != start.bits()) {
    throw std::invalid_argument("hill_climb_memoized: archive width differs from start");
  }
  return climb(start, options, &archive);
}

bool is_local_optimum(const SBox& sbox, FitnessKind kind, MoveKind op) {
  const FitnessValue here = fitness(sbox, kind);
  for (const Move& move : enumerate_moves(sbox.bits(), op)) {
    if (fitness(apply_move(sbox, move), kind) > here) return false;
  }
  return true;
}

}  // namespace sboxlon
