#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "memnet/corpus.hpp"
#include "memnet/embed.hpp"

namespace memnet {

struct SyntheticCorpus {
  EmbeddingTable table;
  std::vector<Instance> instances;
};

/// Random sentences over a vocabulary "w0".."w{vocab-1}" with random vectors
/// in U(-1, 1)^dim, random single- or two-word aspects and random labels.
/// Sentence lengths are uniform in [min_len, max_len]. Used for timing runs
/// and property tests where only shapes matter.
SyntheticCorpus make_synthetic_corpus(std::size_t instances, std::size_t vocab, std::size_t dim,
                                      std::uint64_t seed, std::size_t min_len = 4,
                                      std::size_t max_len = 30);

}  // namespace memnet
