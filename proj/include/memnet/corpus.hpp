#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace memnet {

/// Class indices are fixed: they define tie-breaking and checkpoint layout.
enum class Polarity : int { Positive = 0, Negative = 1, Neutral = 2 };

inline constexpr std::size_t kNumClasses = 3;

std::string_view to_string(Polarity p);
/// Accepts the SemEval spellings ("positive", "negative", "neutral"). "conflict" yields nullopt.
std::optional<Polarity> polarity_from_string(std::string_view s);
inline std::size_t class_index(Polarity p) { return static_cast<std::size_t>(p); }
Polarity polarity_from_index(std::size_t i);

struct Token {
  std::string text;
  /// Half-open range in code points (not bytes) of the raw sentence.
  std::size_t char_start = 0;
  std::size_t char_end = 0;
};

/// Half-open token index range.
struct AspectSpan {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - begin; }
  bool contains(std::size_t i) const { return i >= begin && i < end; }
};

struct Instance {
  std::string sentence_id;
  std::string raw_text;
  std::vector<Token> tokens;
  AspectSpan aspect;
  /// The aspectTerm's code-point range as given in the source.
  std::size_t aspect_from = 0;
  std::size_t aspect_to = 0;
  Polarity label = Polarity::Positive;

  std::size_t length() const { return tokens.size(); }
  std::size_t context_size() const { return tokens.size() - aspect.size(); }
  std::string aspect_text() const;
  std::string text() const;
};

struct DatasetStats {
  std::array<std::size_t, kNumClasses> counts{};
  std::size_t dropped_conflict = 0;

  std::size_t count(Polarity p) const { return counts[class_index(p)]; }
  std::size_t total() const;
};

struct Corpus {
  std::vector<Instance> instances;
  DatasetStats stats;
};

/// Lowercases ASCII letters, splits on whitespace and isolates every ASCII
/// punctuation character as its own token. Non-ASCII bytes are word characters.
/// Throws InputError when the input holds no tokens.
std::vector<Token> tokenize(std::string_view raw);

/// Reads a SemEval-2014 Task 4 aspect-term file: one Instance per
/// (sentence, aspectTerm); "conflict" terms are dropped and counted.
Corpus parse_semeval_xml(const std::filesystem::path& path);
Corpus parse_semeval_xml_string(const std::string& xml);

/// Builds an Instance from raw text and a code-point range for the aspect.
/// Throws AlignmentError if the range overlaps no token.
Instance make_instance(std::string sentence_id, std::string raw_text, std::size_t from,
                       std::size_t to, Polarity label);

/// Token distance from a context token to the nearest aspect token (>= 1).
std::size_t location_of(const Instance& instance, std::size_t context_index);

DatasetStats compute_stats(const std::vector<Instance>& instances);

}  // namespace memnet
