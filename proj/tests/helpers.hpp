#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "memnet/corpus.hpp"
#include "memnet/embed.hpp"
#include "memnet/model.hpp"

namespace memnet::testing {

inline std::string data_path(const std::string& name) {
  return std::string(MEMNET_TEST_DATA) + "/" + name;
}

inline std::vector<double> random_values(std::mt19937_64& rng, std::size_t n, double lo = -1.0,
                                         double hi = 1.0) {
  std::uniform_real_distribution<double> dist(lo, hi);
  std::vector<double> v(n);
  for (double& x : v) x = dist(rng);
  return v;
}

inline Matrix random_matrix(std::mt19937_64& rng, std::size_t r, std::size_t c, double scale = 1.0) {
  return Matrix(r, c, random_values(rng, r * c, -scale, scale));
}

/// Random parameters with entries in U(-scale, scale). Larger than the
/// training initialisation so gradients are well above finite-difference noise.
inline MemNetParams random_params(const ModelConfig& config, std::mt19937_64& rng,
                                  double scale = 0.5) {
  MemNetParams p = zero_params(config);
  std::uniform_real_distribution<double> dist(-scale, scale);
  for (auto& b : param_blocks(p)) {
    for (double& v : b.values) v = dist(rng);
  }
  return p;
}

/// A table of `vocab` random words "v0".. and one random sentence over them.
struct RandomCase {
  EmbeddingTable table;
  Instance instance;
  EncodedInstance encoded;
};

inline RandomCase random_case(std::mt19937_64& rng, std::size_t dim, std::size_t min_len = 4,
                              std::size_t max_len = 10, std::size_t vocab = 30) {
  EmbeddingTable table(dim, rng());
  for (std::size_t w = 0; w < vocab; ++w) {
    table.add("v" + std::to_string(w), random_values(rng, dim));
  }
  const std::size_t n = std::uniform_int_distribution<std::size_t>(min_len, max_len)(rng);
  std::string text;
  std::uniform_int_distribution<std::size_t> word(0, vocab - 1);
  for (std::size_t i = 0; i < n; ++i) {
    if (i) text += ' ';
    text += "v" + std::to_string(word(rng));
  }
  const auto tokens = tokenize(text);
  const std::size_t alen = std::uniform_int_distribution<std::size_t>(1, 2)(rng);
  const std::size_t start = std::uniform_int_distribution<std::size_t>(0, n - alen)(rng);
  const auto label =
      polarity_from_index(std::uniform_int_distribution<std::size_t>(0, kNumClasses - 1)(rng));
  Instance inst = make_instance("r", text, tokens[start].char_start,
                                tokens[start + alen - 1].char_end, label);
  EncodedInstance enc = encode(inst, table);
  return {std::move(table), std::move(inst), std::move(enc)};
}

}  // namespace memnet::testing
