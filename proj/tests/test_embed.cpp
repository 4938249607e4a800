#include <doctest.h>

#include <sstream>

#include "helpers.hpp"
#include "memnet/embed.hpp"
#include "memnet/errors.hpp"

using namespace memnet;
using memnet::testing::data_path;

namespace {

EmbeddingTable from_string(const std::string& text, std::uint64_t seed = 7,
                           const std::unordered_set<std::string>* filter = nullptr) {
  std::istringstream in(text);
  return load_glove_stream(in, filter, seed);
}

}  // namespace

TEST_CASE("load_glove reads words and infers the dimension") {
  const auto t = from_string("a 1 2 3 4\nb 5 6 7 8\nc 0.5 -1e-3 2 3\n");
  CHECK(t.size() == 3);
  CHECK(t.dim() == 4);
  const auto c = t.row(*t.find("c"));
  CHECK(c[1] == -1e-3);
  CHECK_FALSE(t.find("d").has_value());
}

TEST_CASE("load_glove errors") {
  try {
    from_string("a 1 2 3 4\nb 1 2 3\n");
    FAIL("expected a format error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
  CHECK_THROWS_AS(from_string(""), ParseError);
  CHECK_THROWS_AS(from_string("a 1 x 3\n"), ParseError);
  CHECK_THROWS_AS(load_glove("/nonexistent/glove.txt", nullptr, 1), MissingFileError);
}

TEST_CASE("vocab filter keeps only requested words but still checks every line") {
  const std::unordered_set<std::string> keep{"b"};
  const auto t = from_string("a 1 2\nb 3 4\nc 5 6\n", 7, &keep);
  CHECK(t.size() == 1);
  CHECK(t.find("b").has_value());
  CHECK_THROWS_AS(from_string("a 1 2\nb 3 4\nc 5 6 7\n", 7, &keep), ParseError);
}

TEST_CASE("fixture embeddings") {
  const auto t = load_glove(data_path("toy_glove_d8.txt"), nullptr, 1);
  CHECK(t.dim() == 8);
  CHECK(t.size() >= 50);
}

TEST_CASE("embed_token: known words, cached OOV draws") {
  auto t = from_string("food 1 2 3 4\nlife 3 4 5 6\n");
  CHECK(embed_token(t, "food") == Vector{1, 2, 3, 4});

  const std::uint64_t before = t.size();
  const Vector a = embed_token(t, "zzyzx");
  const Vector b = embed_token(t, "zzyzx");
  CHECK(a == b);
  CHECK(t.size() == before + 1);
  for (double v : a) {
    CHECK(v >= -0.01);
    CHECK(v <= 0.01);
  }
  CHECK(t.oov_words() == std::vector<std::string>{"zzyzx"});

  // The draw depends only on (seed, word): a fresh table reproduces it.
  auto other = from_string("food 1 2 3 4\n");
  embed_token(other, "unrelated");
  CHECK(embed_token(other, "zzyzx") == a);
  auto reseeded = from_string("food 1 2 3 4\n", 8);
  CHECK_FALSE(embed_token(reseeded, "zzyzx") == a);
}

TEST_CASE("OOV rows keep the U(-0.01, 0.01) bound across many words") {
  EmbeddingTable t(16, 99);
  for (int i = 0; i < 500; ++i) {
    const auto r = t.row(t.intern("oov" + std::to_string(i)));
    for (double v : r) {
      CHECK(v >= -kOovBound);
      CHECK(v <= kOovBound);
    }
  }
}

TEST_CASE("aspect_vector averages constituent words") {
  auto t = from_string("food 1 2 3 4\nbattery 1 1 1 1\nlife 3 5 7 9\nthe 0 0 0 0\n");
  const auto single = encode(make_instance("s", "the food", 4, 8, Polarity::Positive), t);
  CHECK(aspect_vector(t, single) == Vector{1, 2, 3, 4});

  const auto multi = encode(make_instance("s", "the battery life", 4, 16, Polarity::Positive), t);
  CHECK(aspect_vector(t, multi) == Vector{2, 3, 4, 5});

  const auto twice = encode(make_instance("s", "the food food", 4, 13, Polarity::Positive), t);
  CHECK(aspect_vector(t, twice) == Vector{1, 2, 3, 4});
}

TEST_CASE("encode splits aspect and context and records distances") {
  auto t = load_glove(data_path("toy_glove_d8.txt"), nullptr, 1);
  const Instance inst = make_instance("s", "great food but the service was dreadful!", 19, 26,
                                      Polarity::Negative);
  const auto enc = encode(inst, t);
  CHECK(enc.sentence_length == 8);
  CHECK(enc.aspect_rows == std::vector<std::size_t>{*t.find("service")});
  CHECK(enc.context_size() == 7);
  CHECK(enc.context_locations == std::vector<std::size_t>{4, 3, 2, 1, 1, 2, 3});
  CHECK(enc.label == Polarity::Negative);
}

TEST_CASE("checksum detects any change to stored rows") {
  auto t = from_string("a 1 2\nb 3 4\n");
  const auto c0 = t.checksum();
  CHECK(t.checksum() == c0);
  t.intern("new");
  CHECK(t.checksum() != c0);
}
