#include "sboxlon/sbox.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <stdexcept>

namespace sboxlon {

bool is_permutation(std::span<const std::uint8_t> table) {
  if (table.size() > 256) return false;
  std::vector<bool> seen(table.size(), false);
  for (auto value : table) {
    if (value >= table.size() || seen[value]) return false;
    seen[value] = true;
  }
  return true;
}

SBox::SBox(int n, std::vector<std::uint8_t> table) : n_(n), table_(std::move(table)) {
  if (n < kMinBits || n > kMaxBits) {
    throw std::invalid_argument("sbox: bit-width " + std::to_string(n) + " outside [2, 8]");
  }
  if (table_.size() != (std::size_t{1} << n)) {
    throw std::invalid_argument("sbox: table length " + std::to_string(table_.size()) +
                                " does not match 2^" + std::to_string(n));
  }
  if (!is_permutation(table_)) {
    throw std::invalid_argument("sbox: table is not a permutation");
  }
}

SBox SBox::identity(int n) {
  if (n < kMinBits || n > kMaxBits) {
    throw std::invalid_argument("sbox: bit-width outside [2, 8]");
  }
  std::vector<std::uint8_t> table(std::size_t{1} << n);
  std::iota(table.begin(), table.end(), std::uint8_t{0});
  return SBox(n, std::move(table));
}

SBox SBox::from_text(std::string_view line) {
  std::vector<std::uint8_t> table;
  std::size_t pos = 0;
  while (pos < line.size()) {
    while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t' || line[pos] == '\n' ||
                                 line[pos] == '\r')) {
      ++pos;
    }
    if (pos == line.size()) break;
    unsigned value = 0;
    auto [ptr, ec] = std::from_chars(line.data() + pos, line.data() + line.size(), value);
    if (ec != std::errc{} || value > 255) {
      throw std::invalid_argument("sbox: malformed entry in text encoding");
    }
    table.push_back(static_cast<std::uint8_t>(value));
    pos = static_cast<std::size_t>(ptr - line.data());
  }
  int n = 0;
  while ((std::size_t{1} << n) < table.size()) ++n;
  return SBox(n, std::move(table));
}

SBox SBox::from_key(int n, std::string_view key) {
  std::vector<std::uint8_t> table(key.begin(), key.end());
  return SBox(n, std::move(table));
}

std::string SBox::to_text() const {
  std::string out;
  out.reserve(table_.size() * 4);
  for (std::size_t x = 0; x < table_.size(); ++x) {
    if (x) out.push_back(' ');
    out += std::to_string(table_[x]);
  }
  return out;
}

std::string SBox::key() const { return std::string(table_.begin(), table_.end()); }

std::strong_ordering operator<=>(const SBox& a, const SBox& b) {
  if (auto c = a.n_ <=> b.n_; c != 0) return c;
  return std::lexicographical_compare_three_way(a.table_.begin(), a.table_.end(),
                                                b.table_.begin(), b.table_.end());
}

}  // namespace sboxlon
