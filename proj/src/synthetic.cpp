#include "memnet/synthetic.hpp"

#include <random>
#include <string>

#include "memnet/errors.hpp"

namespace memnet {

SyntheticCorpus make_synthetic_corpus(std::size_t instances, std::size_t vocab, std::size_t dim,
                                      std::uint64_t seed, std::size_t min_len,
                                      std::size_t max_len) {
  if (vocab == 0 || min_len < 2 || max_len < min_len) {
    throw InputError("synthetic corpus needs vocab > 0 and 2 <= min_len <= max_len");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> value(-1.0, 1.0);
  std::uniform_int_distribution<std::size_t> word(0, vocab - 1);
  std::uniform_int_distribution<std::size_t> length(min_len, max_len);
  std::uniform_int_distribution<int> label(0, static_cast<int>(kNumClasses) - 1);

  SyntheticCorpus out{EmbeddingTable(dim, seed), {}};
  std::vector<double> row(dim);
  for (std::size_t w = 0; w < vocab; ++w) {
    for (double& v : row) v = value(rng);
    out.table.add("w" + std::to_string(w), row);
  }

  out.instances.reserve(instances);
  for (std::size_t i = 0; i < instances; ++i) {
    const std::size_t n = length(rng);
    std::string text;
    for (std::size_t t = 0; t < n; ++t) {
      if (t) text += ' ';
      text += "w" + std::to_string(word(rng));
    }
    const auto tokens = tokenize(text);
    const std::size_t aspect_len = (n > 3 && rng() % 3 == 0) ? 2 : 1;
    const std::size_t start = std::uniform_int_distribution<std::size_t>(0, n - aspect_len)(rng);
    const std::size_t from = tokens[start].char_start;
    const std::size_t to = tokens[start + aspect_len - 1].char_end;
    out.instances.push_back(make_instance("s" + std::to_string(i), std::move(text), from, to,
                                          polarity_from_index(static_cast<std::size_t>(label(rng)))));
  }
  return out;
}

}  // namespace memnet
