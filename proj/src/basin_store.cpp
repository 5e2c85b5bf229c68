#include "sboxlon/basin_store.hpp"

#include <array>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace sboxlon {

namespace fs = std::filesystem;

namespace {

fs::path optima_path(const fs::path& dir) { return dir / "basins" / "optima.log"; }
fs::path members_path(const fs::path& dir) { return dir / "basins" / "members.bin"; }

void cut_to(const fs::path& file, std::uint64_t bytes) {
  if (!fs::exists(file)) {
    if (bytes != 0) throw std::runtime_error("basin store: missing log " + file.string());
    std::ofstream create(file, std::ios::binary);
    return;
  }
  if (fs::file_size(file) < bytes) {
    throw std::runtime_error("basin store: log shorter than checkpoint: " + file.string());
  }
  fs::resize_file(file, bytes);
}

}  // namespace

BasinStoreWriter::BasinStoreWriter(const fs::path& dir, const StoreOffsets& offsets,
                                   std::size_t basins_written, std::size_t members_written)
    : basins_written_(basins_written), members_written_(members_written), offsets_(offsets) {
  fs::create_directories(dir / "basins");
  cut_to(optima_path(dir), offsets.optima_bytes);
  cut_to(members_path(dir), offsets.member_bytes);
  optima_.open(optima_path(dir), std::ios::binary | std::ios::app);
  members_.open(members_path(dir), std::ios::binary | std::ios::app);
  if (!optima_ || !members_) throw std::runtime_error("basin store: cannot open logs in " + dir.string());
}

StoreOffsets BasinStoreWriter::sync(const BasinSet& set) {
  std::ostringstream lines;
  for (; basins_written_ < set.basins().size(); ++basins_written_) {
    const Basin& b = set.basins()[basins_written_];
    lines << b.id << '\t' << b.fitness.nonlinearity << '\t' << b.fitness.worst_components << '\t'
          << b.optimum.to_text() << '\n';
  }
  const std::string text = lines.str();
  optima_.write(text.data(), static_cast<std::streamsize>(text.size()));
  offsets_.optima_bytes += text.size();

  const SolutionArchive& archive = set.archive();
  std::vector<char> record(4 + archive.key_size());
  for (; members_written_ < archive.size(); ++members_written_) {
    const auto member = static_cast<std::uint32_t>(members_written_);
    const std::uint32_t basin = archive.member_basin(member);
    for (int b = 0; b < 4; ++b) record[b] = static_cast<char>((basin >> (8 * b)) & 0xff);
    auto key = archive.member_key(member);
    std::copy(key.begin(), key.end(), record.begin() + 4);
    members_.write(record.data(), static_cast<std::streamsize>(record.size()));
    offsets_.member_bytes += record.size();
  }
  optima_.flush();
  members_.flush();
  if (!optima_ || !members_) throw std::runtime_error("basin store: write failed");
  return offsets_;
}

BasinSet load_basin_store(const fs::path& dir, int n, FitnessKind fitness,
                          const std::string& experiment_id, const StoreOffsets& offsets) {
  BasinSet set(n, fitness, experiment_id);

  std::ifstream optima(optima_path(dir), std::ios::binary);
  if (!optima) throw std::runtime_error("basin store: cannot read " + optima_path(dir).string());
  std::string text(offsets.optima_bytes, '\0');
  optima.read(text.data(), static_cast<std::streamsize>(text.size()));
  if (static_cast<std::uint64_t>(optima.gcount()) != offsets.optima_bytes) {
    throw std::runtime_error("basin store: optima log truncated");
  }
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    std::istringstream fields(line);
    std::uint32_t id;
    int nl, worst;
    if (!(fields >> id >> nl >> worst)) throw std::runtime_error("basin store: malformed optima line");
    std::string rest;
    std::getline(fields, rest);
    const SBox optimum = SBox::from_text(rest);
    if (set.create_basin(optimum, FitnessValue{fitness, nl, worst}) != id) {
      throw std::runtime_error("basin store: basin ids out of order");
    }
  }

  std::ifstream members(members_path(dir), std::ios::binary);
  if (!members) throw std::runtime_error("basin store: cannot read " + members_path(dir).string());
  const std::size_t key_size = std::size_t{1} << n;
  std::vector<char> record(4 + key_size);
  if (offsets.member_bytes % record.size() != 0) {
    throw std::runtime_error("basin store: member log length is not a whole number of records");
  }
  const std::uint64_t records = offsets.member_bytes / record.size();
  for (std::uint64_t r = 0; r < records; ++r) {
    if (!members.read(record.data(), static_cast<std::streamsize>(record.size()))) {
      throw std::runtime_error("basin store: member log truncated");
    }
    std::uint32_t basin = 0;
    for (int b = 0; b < 4; ++b) basin |= std::uint32_t{static_cast<unsigned char>(record[b])} << (8 * b);
    std::span<const std::uint8_t> key(reinterpret_cast<const std::uint8_t*>(record.data() + 4), key_size);
    if (!set.add_member(key, basin)) throw std::runtime_error("basin store: duplicate member record");
  }
  return set;
}

void write_basin_summary(const fs::path& dir, const BasinSet& set) {
  fs::create_directories(dir / "basins");
  std::ofstream out(dir / "basins" / "basins.csv", std::ios::binary);
  out << "id,fitness_numerator,fitness_denominator,nonlinearity,size,optimum\n";
  for (const Basin& b : set.basins()) {
    out << b.id << ',' << b.fitness.numerator() << ',' << b.fitness.denominator() << ','
        << b.fitness.nonlinearity << ',' << b.size() << ',' << b.optimum.to_text() << '\n';
  }
  if (!out) throw std::runtime_error("basin store: cannot write summary");
}

}  // namespace sboxlon
