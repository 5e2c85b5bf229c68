#pragma once
// Slow, obviously-correct reference implementations used by the tests.

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <queue>
#include <set>
#include <vector>

#include "sboxlon/fitness.hpp"
#include "sboxlon/neighbourhood.hpp"
#include "sboxlon/rng.hpp"
#include "sboxlon/sbox.hpp"
#include "sboxlon/walsh.hpp"

namespace oracle {

inline int parity(unsigned x) {
  int p = 0;
  for (; x; x >>= 1) p ^= x & 1;
  return p;
}

/// W_f(w) = sum_x (-1)^(f(x) xor w.x), straight double loop.
inline std::vector<std::int32_t> walsh(const std::vector<std::uint8_t>& f) {
  const std::size_t size = f.size();
  std::vector<std::int32_t> out(size);
  for (std::size_t w = 0; w < size; ++w) {
    std::int32_t sum = 0;
    for (std::size_t x = 0; x < size; ++x) sum += ((f[x] ^ parity(unsigned(w & x))) & 1) ? -1 : 1;
    out[w] = sum;
  }
  return out;
}

/// Row v-1 holds W_{v.F}; evaluated directly from the table.
inline std::vector<std::vector<std::int32_t>> spectrum(const sboxlon::SBox& s) {
  std::vector<std::vector<std::int32_t>> rows;
  for (unsigned v = 1; v < s.size(); ++v) {
    std::vector<std::uint8_t> f(s.size());
    for (std::size_t x = 0; x < s.size(); ++x) f[x] = std::uint8_t(parity(v & s[x]));
    rows.push_back(walsh(f));
  }
  return rows;
}

/// Nonlinearity of each component by Hamming distance to every affine function.
inline std::vector<int> component_nonlinearities(const sboxlon::SBox& s) {
  std::vector<int> out;
  const std::size_t size = s.size();
  for (unsigned v = 1; v < size; ++v) {
    int best = int(size);
    for (unsigned w = 0; w < size; ++w) {
      for (int c = 0; c < 2; ++c) {
        int distance = 0;
        for (unsigned x = 0; x < size; ++x) distance += parity(v & s[x]) != (parity(w & x) ^ c);
        best = std::min(best, distance);
      }
    }
    out.push_back(best);
  }
  return out;
}

/// Fitness from the brute-force component nonlinearities.
inline sboxlon::FitnessValue fitness(const sboxlon::SBox& s, sboxlon::FitnessKind kind) {
  const auto nls = component_nonlinearities(s);
  const int nf = *std::min_element(nls.begin(), nls.end());
  const int worst = int(std::count(nls.begin(), nls.end(), nf));
  return sboxlon::FitnessValue{kind, nf, worst};
}

/// Full fitness recompute of every neighbour; no incremental tricks.
inline bool is_local_optimum(const sboxlon::SBox& s, sboxlon::FitnessKind kind, sboxlon::MoveKind op) {
  const auto here = sboxlon::fitness(sboxlon::full_spectrum(s), kind);
  for (const auto& m : sboxlon::enumerate_moves(s.bits(), op)) {
    if (sboxlon::fitness(sboxlon::full_spectrum(sboxlon::apply_move(s, m)), kind) > here) return false;
  }
  return true;
}

inline sboxlon::SBox random_sbox(int n, sboxlon::Rng& rng) {
  return sboxlon::random_permutation(n, rng());
}

/// Pairwise BFS over an explicit edge list.
struct Graph {
  std::vector<std::set<std::uint32_t>> adj;

  explicit Graph(std::size_t n) : adj(n) {}
  void add(std::uint32_t a, std::uint32_t b) {
    adj[a].insert(b);
    adj[b].insert(a);
  }
  std::vector<int> distances_from(std::uint32_t s) const {
    std::vector<int> d(adj.size(), -1);
    std::queue<std::uint32_t> q;
    d[s] = 0;
    q.push(s);
    while (!q.empty()) {
      auto u = q.front();
      q.pop();
      for (auto v : adj[u]) {
        if (d[v] < 0) {
          d[v] = d[u] + 1;
          q.push(v);
        }
      }
    }
    return d;
  }
  double clustering(std::uint32_t v) const {
    const auto& nb = adj[v];
    if (nb.size() < 2) return 0.0;
    std::vector<std::uint32_t> list(nb.begin(), nb.end());
    double links = 0;
    for (std::size_t a = 0; a < list.size(); ++a) {
      for (std::size_t b = a + 1; b < list.size(); ++b) links += adj[list[a]].count(list[b]);
    }
    return 2.0 * links / (double(nb.size()) * double(nb.size() - 1));
  }
};

}  // namespace oracle
