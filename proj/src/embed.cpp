#include "memnet/embed.hpp"

#include <charconv>
#include <cstring>
#include <fstream>
#include <random>
#include <sstream>

#include "memnet/errors.hpp"

namespace memnet {

namespace {

constexpr std::uint64_t kFnvOffset = 1469598103934665603ULL;
constexpr std::uint64_t kFnvPrime = 1099511628211ULL;

std::uint64_t fnv1a(const void* bytes, std::size_t n, std::uint64_t h = kFnvOffset) {
  const auto* p = static_cast<const unsigned char*>(bytes);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= kFnvPrime;
  }
  return h;
}

}  // namespace

EmbeddingTable::EmbeddingTable(std::size_t dim, std::uint64_t oov_seed)
    : dim_(dim), oov_seed_(oov_seed) {
  if (dim == 0) throw DimensionError("embedding dimension must be positive");
}

std::optional<std::size_t> EmbeddingTable::find(std::string_view word) const {
  auto it = index_.find(std::string(word));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

bool EmbeddingTable::add(std::string word, std::span<const double> values) {
  if (values.size() != dim_) {
    throw DimensionError("embedding for '" + word + "' has " + std::to_string(values.size()) +
                         " values, expected " + std::to_string(dim_));
  }
  if (index_.contains(word)) return false;
  if (loaded_ != words_.size()) throw ContractError("pre-trained rows must precede OOV rows");
  index_.emplace(word, words_.size());
  words_.push_back(std::move(word));
  data_.insert(data_.end(), values.begin(), values.end());
  ++loaded_;
  return true;
}

std::vector<double> EmbeddingTable::draw_oov(std::string_view word) const {
  const std::uint64_t h = fnv1a(word.data(), word.size());
  std::seed_seq seq{static_cast<std::uint32_t>(oov_seed_), static_cast<std::uint32_t>(oov_seed_ >> 32),
                    static_cast<std::uint32_t>(h), static_cast<std::uint32_t>(h >> 32)};
  std::mt19937_64 rng(seq);
  std::uniform_real_distribution<double> dist(-kOovBound, kOovBound);
  std::vector<double> v(dim_);
  for (double& x : v) x = dist(rng);
  return v;
}

std::size_t EmbeddingTable::intern(std::string_view word) {
  if (auto row = find(word)) return *row;
  const auto v = draw_oov(word);
  const std::size_t row = words_.size();
  index_.emplace(std::string(word), row);
  words_.emplace_back(word);
  data_.insert(data_.end(), v.begin(), v.end());
  return row;
}

void EmbeddingTable::add_oov(std::string word, std::span<const double> values) {
  if (values.size() != dim_) throw DimensionError("OOV vector for '" + word + "' has wrong length");
  if (auto row = find(word)) {
    const auto stored = this->row(*row);
    if (!std::equal(stored.begin(), stored.end(), values.begin())) {
      throw ConfigMismatchError("OOV vector for '" + word + "' disagrees with the loaded table");
    }
    return;
  }
  const std::size_t row = words_.size();
  index_.emplace(word, row);
  words_.push_back(std::move(word));
  data_.insert(data_.end(), values.begin(), values.end());
}

std::vector<std::string> EmbeddingTable::oov_words() const {
  return {words_.begin() + static_cast<std::ptrdiff_t>(loaded_), words_.end()};
}

std::uint64_t EmbeddingTable::checksum() const {
  return fnv1a(data_.data(), data_.size() * sizeof(double));
}

EmbeddingTable load_glove_stream(std::istream& in,
                                 const std::unordered_set<std::string>* vocab_filter,
                                 std::uint64_t oov_seed) {
  std::optional<EmbeddingTable> table;
  std::string line;
  std::vector<double> values;
  std::size_t line_no = 0;

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;

    const auto first_space = line.find(' ');
    if (first_space == std::string::npos || first_space == 0) {
      throw ParseError("expected 'word v1 ... vd'", line_no);
    }
    std::string word = line.substr(0, first_space);
    // The dimension check must run on every line, so only skip parsing once
    // the table exists and the word is filtered out.
    values.clear();
    const char* p = line.data() + first_space;
    const char* end = line.data() + line.size();
    while (p < end) {
      while (p < end && (*p == ' ' || *p == '\t')) ++p;
      if (p == end) break;
      double v = 0.0;
      auto [next, ec] = std::from_chars(p, end, v);
      if (ec != std::errc{}) throw ParseError("bad float in embedding row", line_no);
      values.push_back(v);
      p = next;
    }
    if (values.empty()) throw ParseError("embedding row has no values", line_no);
    if (!table) {
      table.emplace(values.size(), oov_seed);
    } else if (values.size() != table->dim()) {
      throw ParseError("inconsistent dimension: got " + std::to_string(values.size()) +
                           ", expected " + std::to_string(table->dim()),
                       line_no);
    }
    if (vocab_filter && !vocab_filter->contains(word)) continue;
    table->add(std::move(word), values);
  }
  if (!table) throw ParseError("embedding file is empty", 0);
  return std::move(*table);
}

EmbeddingTable load_glove(const std::filesystem::path& path,
                          const std::unordered_set<std::string>* vocab_filter,
                          std::uint64_t oov_seed) {
  std::ifstream in(path);
  if (!in) throw MissingFileError(path.string());
  return load_glove_stream(in, vocab_filter, oov_seed);
}

Vector embed_token(EmbeddingTable& table, std::string_view word) {
  const auto r = table.row(table.intern(word));
  return Vector(std::vector<double>(r.begin(), r.end()));
}

EncodedInstance encode(const Instance& instance, EmbeddingTable& table) {
  EncodedInstance enc;
  enc.sentence_length = instance.length();
  enc.label = instance.label;
  for (std::size_t i = 0; i < instance.tokens.size(); ++i) {
    const std::size_t row = table.intern(instance.tokens[i].text);
    if (instance.aspect.contains(i)) {
      enc.aspect_rows.push_back(row);
    } else {
      enc.context_rows.push_back(row);
      enc.context_locations.push_back(location_of(instance, i));
    }
  }
  if (enc.aspect_rows.empty()) throw InputError("instance has an empty aspect span");
  return enc;
}

std::vector<EncodedInstance> encode_all(const std::vector<Instance>& instances,
                                        EmbeddingTable& table) {
  std::vector<EncodedInstance> out;
  out.reserve(instances.size());
  for (const auto& inst : instances) out.push_back(encode(inst, table));
  return out;
}

Vector aspect_vector(const EmbeddingTable& table, const EncodedInstance& instance) {
  if (instance.aspect_rows.empty()) throw InputError("aspect span is empty");
  Vector out(table.dim());
  for (auto r : instance.aspect_rows) axpy_inplace(1.0, table.row(r), out.span());
  if (instance.aspect_rows.size() > 1) {
    const double inv = 1.0 / static_cast<double>(instance.aspect_rows.size());
    for (double& v : out) v *= inv;
  }
  return out;
}

std::unordered_set<std::string> vocabulary_of(const std::vector<Instance>& instances) {
  std::unordered_set<std::string> vocab;
  for (const auto& inst : instances) {
    for (const auto& t : inst.tokens) vocab.insert(t.text);
  }
  return vocab;
}

}  // namespace memnet
