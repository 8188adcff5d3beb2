#pragma once

// EMBF: precomputed sentence vectors keyed by pair_id. All fields little-endian.
//
//   offset  size  field
//   0       4     magic "EMBF"
//   4       2     version (uint16, = 1)
//   6       4     dim (uint32, >= 1)
//   10      8     count (uint64)
//   18      ...   count records: pair_id (uint64), dim x float32 (IEEE-754)
//
// Record ids are strictly increasing. The file ends exactly after the last record.

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bitext/corpus.hpp"
#include "bitext/embed.hpp"
#include "bitext/error.hpp"

namespace bitext {

inline constexpr std::array<char, 4> kEmbfMagic = {'E', 'M', 'B', 'F'};
inline constexpr std::uint16_t kEmbfVersion = 1;
inline constexpr std::size_t kEmbfHeaderSize = 18;

/// Sorted pair_id -> vector map in one flat buffer.
class EmbeddingSet {
 public:
  explicit EmbeddingSet(std::size_t dim) : dim_(dim) {
    if (dim_ == 0) throw Error(ErrorCode::kDimensionMismatch, "embedding dim must be >= 1");
  }

  /// Ids must arrive in strictly increasing order.
  void add(PairId id, std::span<const float> vector) {
    if (vector.size() != dim_)
      throw Error(ErrorCode::kDimensionMismatch, "pair " + std::to_string(id) + " has dim " +
                                                     std::to_string(vector.size()) + ", expected " +
                                                     std::to_string(dim_));
    if (!ids_.empty() && id <= ids_.back())
      throw Error(ErrorCode::kUnsortedIds, "pair_id " + std::to_string(id) + " after " +
                                               std::to_string(ids_.back()));
    for (float c : vector)
      if (!std::isfinite(c)) throw Error(ErrorCode::kInvalidNumber, "non-finite component for pair " + std::to_string(id));
    ids_.push_back(id);
    data_.insert(data_.end(), vector.begin(), vector.end());
  }

  void reserve(std::size_t n) {
    ids_.reserve(n);
    data_.reserve(n * dim_);
  }

  std::optional<std::span<const float>> find(PairId id) const {
    auto it = std::lower_bound(ids_.begin(), ids_.end(), id);
    if (it == ids_.end() || *it != id) return std::nullopt;
    return row(static_cast<std::size_t>(it - ids_.begin()));
  }

  std::span<const float> row(std::size_t i) const { return {data_.data() + i * dim_, dim_}; }
  const std::vector<PairId>& ids() const noexcept { return ids_; }
  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return ids_.size(); }

  bool operator==(const EmbeddingSet& other) const = default;

 private:
  std::size_t dim_;
  std::vector<PairId> ids_;
  std::vector<float> data_;
};

struct EmbeddingRecord {
  PairId id;
  EmbeddingVector vector;
};

namespace detail {

template <class T>
void put_le(std::string& out, T value) {
  for (std::size_t i = 0; i < sizeof(T); ++i) out.push_back(static_cast<char>((value >> (8 * i)) & 0xFF));
}

template <class T>
T get_le(const unsigned char* p) {
  T value = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) value |= static_cast<T>(p[i]) << (8 * i);
  return value;
}

inline void write_atomically(const std::filesystem::path& path, const std::string& header,
                             const EmbeddingSet& set) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIoError, "cannot write " + tmp.string());
    out.write(header.data(), static_cast<std::streamsize>(header.size()));
    std::string record;
    for (std::size_t i = 0; i < set.size(); ++i) {
      record.clear();
      put_le<std::uint64_t>(record, set.ids()[i]);
      for (float c : set.row(i)) put_le<std::uint32_t>(record, std::bit_cast<std::uint32_t>(c));
      out.write(record.data(), static_cast<std::streamsize>(record.size()));
    }
    if (!out) throw Error(ErrorCode::kIoError, "write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace detail

inline void write_embedding_file(const std::filesystem::path& path, const EmbeddingSet& set) {
  std::string header(kEmbfMagic.begin(), kEmbfMagic.end());
  detail::put_le<std::uint16_t>(header, kEmbfVersion);
  detail::put_le<std::uint32_t>(header, static_cast<std::uint32_t>(set.dim()));
  detail::put_le<std::uint64_t>(header, set.size());
  detail::write_atomically(path, header, set);
}

/// Records must be sorted by pair_id and all have length dim.
inline void write_embedding_file(const std::filesystem::path& path, std::size_t dim,
                                 std::span<const EmbeddingRecord> records) {
  EmbeddingSet set(dim);
  set.reserve(records.size());
  for (const auto& r : records) set.add(r.id, r.vector.components());
  write_embedding_file(path, set);
}

inline EmbeddingSet load_embedding_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  const std::uintmax_t file_size = std::filesystem::file_size(path);
  std::array<unsigned char, kEmbfHeaderSize> header{};
  if (file_size < 4) throw Error(ErrorCode::kTruncatedFile, path.string() + ": shorter than the magic");
  in.read(reinterpret_cast<char*>(header.data()), static_cast<std::streamsize>(std::min<std::uintmax_t>(file_size, kEmbfHeaderSize)));
  if (!std::equal(kEmbfMagic.begin(), kEmbfMagic.end(), header.begin()))
    throw Error(ErrorCode::kBadMagic, path.string() + ": not an EMBF file");
  if (file_size < kEmbfHeaderSize) throw Error(ErrorCode::kTruncatedFile, path.string() + ": header cut short");
  const auto version = detail::get_le<std::uint16_t>(header.data() + 4);
  if (version != kEmbfVersion)
    throw Error(ErrorCode::kUnsupportedVersion, path.string() + ": version " + std::to_string(version));
  const auto dim = detail::get_le<std::uint32_t>(header.data() + 6);
  const auto count = detail::get_le<std::uint64_t>(header.data() + 10);
  if (dim == 0) throw Error(ErrorCode::kDimensionMismatch, path.string() + ": dim 0");

  const std::uintmax_t record_size = 8 + 4 * static_cast<std::uintmax_t>(dim);
  const std::uintmax_t payload = file_size - kEmbfHeaderSize;
  if (count > payload / record_size)
    throw Error(ErrorCode::kTruncatedFile, path.string() + ": header declares " + std::to_string(count) +
                                               " records, file holds " + std::to_string(payload / record_size));
  if (payload != count * record_size)
    throw Error(ErrorCode::kTrailingData, path.string() + ": " + std::to_string(payload - count * record_size) +
                                              " bytes after the last record");

  EmbeddingSet set(dim);
  set.reserve(count);
  std::vector<unsigned char> buf(record_size);
  std::vector<float> values(dim);
  for (std::uint64_t r = 0; r < count; ++r) {
    if (!in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(record_size)))
      throw Error(ErrorCode::kTruncatedFile, path.string() + ": record " + std::to_string(r));
    const auto id = detail::get_le<std::uint64_t>(buf.data());
    for (std::size_t k = 0; k < dim; ++k)
      values[k] = std::bit_cast<float>(detail::get_le<std::uint32_t>(buf.data() + 8 + 4 * k));
    set.add(id, values);
  }
  return set;
}

}  // namespace bitext
