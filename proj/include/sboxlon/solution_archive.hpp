#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace sboxlon {

/// Zobrist hash of a permutation table: XOR of one fixed 64-bit word per
/// (position, value) pair. A swap neighbour's hash is four XORs away.
class ZobristHash {
 public:
  explicit ZobristHash(int n);

  std::uint64_t operator()(std::span<const std::uint8_t> table) const noexcept;
  std::uint64_t term(std::size_t position, std::uint8_t value) const noexcept {
    return words_[(position << n_) | value];
  }
  /// Hash change caused by exchanging table[i] and table[j].
  std::uint64_t swap_delta(std::span<const std::uint8_t> table, std::size_t i,
                           std::size_t j) const noexcept {
    return term(i, table[i]) ^ term(j, table[j]) ^ term(i, table[j]) ^ term(j, table[i]);
  }

 private:
  int n_;
  std::vector<std::uint64_t> words_;
};

/// Set of canonical solution keys (2^n packed bytes) mapped to basin ids.
/// Keys live in one contiguous arena; lookups go through an open-addressing
/// index over their Zobrist hashes and are confirmed by a full key compare.
/// Concurrent readers are safe while no insert is in progress.
class SolutionArchive {
 public:
  explicit SolutionArchive(int n);

  int bits() const noexcept { return n_; }
  std::size_t key_size() const noexcept { return key_size_; }
  std::size_t size() const noexcept { return basin_of_.size(); }
  const ZobristHash& hasher() const noexcept { return hash_; }

  /// Index of the member equal to `key`, if archived.
  std::optional<std::uint32_t> find_member(std::span<const std::uint8_t> key) const;
  std::optional<std::uint32_t> find_member(std::span<const std::uint8_t> key,
                                           std::uint64_t hash) const;

  /// Basin id of `key`, if archived.
  std::optional<std::uint32_t> find(std::span<const std::uint8_t> key) const;

  /// Adds `key` to `basin`. Returns false when the key is already in that
  /// basin; throws std::logic_error when it already belongs to another one.
  bool insert(std::span<const std::uint8_t> key, std::uint32_t basin);

  std::span<const std::uint8_t> member_key(std::uint32_t member) const noexcept {
    return {arena_.data() + std::size_t{member} * key_size_, key_size_};
  }
  std::uint32_t member_basin(std::uint32_t member) const noexcept { return basin_of_[member]; }
  std::uint64_t member_hash(std::uint32_t member) const noexcept { return hashes_[member]; }

 private:
  void grow();
  std::size_t slot_for(std::uint64_t hash) const noexcept { return hash & (slots_.size() - 1); }

  int n_;
  std::size_t key_size_;
  ZobristHash hash_;
  std::vector<std::uint8_t> arena_;
  std::vector<std::uint64_t> hashes_;
  std::vector<std::uint32_t> basin_of_;
  std::vector<std::uint32_t> slots_;  // member index + 1, 0 = empty
};

}  // namespace sboxlon
