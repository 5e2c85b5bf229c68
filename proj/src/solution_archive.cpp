#include "sboxlon/solution_archive.hpp"

#include <algorithm>
#include <cstring>
#include <stdexcept>
#include <string>

#include "sboxlon/rng.hpp"

namespace sboxlon {

ZobristHash::ZobristHash(int n) : n_(n), words_(std::size_t{1} << (2 * n)) {
  Rng rng(0x5b0c5eedULL + static_cast<std::uint64_t>(n));
  for (auto& w : words_) w = rng();
}

std::uint64_t ZobristHash::operator()(std::span<const std::uint8_t> table) const noexcept {
  std::uint64_t h = 0;
  for (std::size_t x = 0; x < table.size(); ++x) h ^= term(x, table[x]);
  return h;
}

SolutionArchive::SolutionArchive(int n)
    : n_(n), key_size_(std::size_t{1} << n), hash_(n), slots_(1024, 0) {}

std::optional<std::uint32_t> SolutionArchive::find_member(std::span<const std::uint8_t> key,
                                                          std::uint64_t hash) const {
  for (std::size_t slot = slot_for(hash);; slot = (slot + 1) & (slots_.size() - 1)) {
    const std::uint32_t entry = slots_[slot];
    if (entry == 0) return std::nullopt;
    const std::uint32_t member = entry - 1;
    if (hashes_[member] == hash &&
        std::memcmp(arena_.data() + std::size_t{member} * key_size_, key.data(), key_size_) == 0) {
      return member;
    }
  }
}

std::optional<std::uint32_t> SolutionArchive::find_member(std::span<const std::uint8_t> key) const {
  if (key.size() != key_size_) throw std::invalid_argument("archive: key size mismatch");
  return find_member(key, hash_(key));
}

std::optional<std::uint32_t> SolutionArchive::find(std::span<const std::uint8_t> key) const {
  if (auto m = find_member(key)) return basin_of_[*m];
  return std::nullopt;
}

bool SolutionArchive::insert(std::span<const std::uint8_t> key, std::uint32_t basin) {
  if (key.size() != key_size_) throw std::invalid_argument("archive: key size mismatch");
  const std::uint64_t hash = hash_(key);
  if (auto m = find_member(key, hash)) {
    if (basin_of_[*m] != basin) {
      throw std::logic_error("archive: solution claimed by basins " +
                             std::to_string(basin_of_[*m]) + " and " + std::to_string(basin));
    }
    return false;
  }
  if ((basin_of_.size() + 1) * 2 > slots_.size()) grow();
  const auto member = static_cast<std::uint32_t>(basin_of_.size());
  arena_.insert(arena_.end(), key.begin(), key.end());
  hashes_.push_back(hash);
  basin_of_.push_back(basin);
  std::size_t slot = slot_for(hash);
  while (slots_[slot] != 0) slot = (slot + 1) & (slots_.size() - 1);
  slots_[slot] = member + 1;
  return true;
}

void SolutionArchive::grow() {
  slots_.assign(slots_.size() * 2, 0);
  for (std::uint32_t member = 0; member < hashes_.size(); ++member) {
    std::size_t slot = slot_for(hashes_[member]);
    while (slots_[slot] != 0) slot = (slot + 1) & (slots_.size() - 1);
    slots_[slot] = member + 1;
  }
}

}  // namespace sboxlon
