#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "memnet/corpus.hpp"
#include "memnet/ndcore.hpp"

namespace memnet {

inline constexpr double kOovBound = 0.01;

/// Frozen word vectors, one row per word. Rows loaded from a GloVe file come
/// first; out-of-vocabulary words are appended on first use with values drawn
/// from U(-0.01, 0.01). The OOV draw for a word depends only on (oov_seed,
/// word), so the table contents never depend on lookup order.
///
/// intern() is the only mutating operation. Encode every instance before
/// sharing the table across threads; all other members are const.
class EmbeddingTable {
 public:
  EmbeddingTable(std::size_t dim, std::uint64_t oov_seed);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return words_.size(); }
  std::size_t loaded_size() const { return loaded_; }
  std::uint64_t oov_seed() const { return oov_seed_; }

  std::optional<std::size_t> find(std::string_view word) const;
  const std::string& word(std::size_t row) const { return words_[row]; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * dim_, dim_}; }

  /// Appends a pre-trained vector. Returns false (and ignores it) for duplicates.
  bool add(std::string word, std::span<const double> values);
  /// Row index for the word, creating a frozen OOV row if needed.
  std::size_t intern(std::string_view word);
  /// Restores an OOV row saved with a checkpoint. The vector must match the
  /// seeded draw when the word is not already present.
  void add_oov(std::string word, std::span<const double> values);

  /// Words appended by intern()/add_oov, in insertion order.
  std::vector<std::string> oov_words() const;

  /// FNV-1a over every stored double; used to prove training leaves L untouched.
  std::uint64_t checksum() const;

 private:
  std::vector<double> draw_oov(std::string_view word) const;

  std::size_t dim_;
  std::uint64_t oov_seed_;
  std::size_t loaded_ = 0;
  std::vector<std::string> words_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<double> data_;
};

/// Loads whitespace-separated "word v1 ... vd" lines. The dimension is taken
/// from the first line. When vocab_filter is given, other words are skipped.
EmbeddingTable load_glove(const std::filesystem::path& path,
                          const std::unordered_set<std::string>* vocab_filter,
                          std::uint64_t oov_seed);
EmbeddingTable load_glove_stream(std::istream& in,
                                 const std::unordered_set<std::string>* vocab_filter,
                                 std::uint64_t oov_seed);

/// Row of a known word, or its frozen OOV vector.
Vector embed_token(EmbeddingTable& table, std::string_view word);

/// Instance reduced to table row indices and precomputed token distances.
struct EncodedInstance {
  std::vector<std::size_t> context_rows;
  /// location_of() for each context row, same order.
  std::vector<std::size_t> context_locations;
  std::vector<std::size_t> aspect_rows;
  std::size_t sentence_length = 0;
  Polarity label = Polarity::Positive;

  std::size_t context_size() const { return context_rows.size(); }
};

EncodedInstance encode(const Instance& instance, EmbeddingTable& table);
std::vector<EncodedInstance> encode_all(const std::vector<Instance>& instances,
                                        EmbeddingTable& table);

/// Mean of the aspect token embeddings.
Vector aspect_vector(const EmbeddingTable& table, const EncodedInstance& instance);

/// Every token appearing in the given instances; used as a load filter.
std::unordered_set<std::string> vocabulary_of(const std::vector<Instance>& instances);

}  // namespace memnet
