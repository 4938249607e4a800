#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "helpers.hpp"
#include "memnet/errors.hpp"
#include "memnet/model.hpp"

using namespace memnet;
using namespace memnet::testing;

namespace {

EmbeddingTable small_table() {
  EmbeddingTable t(4, 1);
  const char* words[] = {"a", "b", "c", "d", "e", "f", "g", "h"};
  double base = 1.0;
  for (const char* w : words) {
    t.add(w, std::vector<double>{base, -base, 0.5 * base, 2.0});
    base += 1.0;
  }
  return t;
}

double norm(std::span<const double> v) { return std::sqrt(dot(v, v)); }

}  // namespace

TEST_CASE("location weights") {
  // l = n plugged into the component-index ramp: v_j = j/d.
  for (std::size_t j = 1; j <= 4; ++j) {
    CHECK(model1_weight(10, 10, j, 4) == doctest::Approx(0.25 * static_cast<double>(j)));
  }
  CHECK(model2_weight(5, 10) == 0.5);
  CHECK(location_row(3, 100) == 3);
  CHECK(location_row(250, 100) == 99);
}

TEST_CASE("build_memory per location mode") {
  auto table = small_table();
  // n = 8, aspect "a" at 0, so the context token at index 4 sits at l = 4 = n/2.
  const auto enc = encode(make_instance("s", "a b c d e f g h", 0, 1, Polarity::Positive), table);
  const auto e = [&](std::size_t ctx) { return table.row(enc.context_rows[ctx]); };
  ModelConfig cfg{.dim = 4, .hops = 1};

  SUBCASE("none copies embeddings") {
    const Matrix m = build_memory(enc, table, cfg, zero_params(cfg));
    CHECK(m.rows() == 7);
    for (std::size_t i = 0; i < 7; ++i) CHECK(std::ranges::equal(m.row(i), e(i)));
  }
  SUBCASE("model 2 at the midpoint halves the embedding") {
    cfg.mode = LocationMode::Model2;
    const Matrix m = build_memory(enc, table, cfg, zero_params(cfg));
    REQUIRE(enc.context_locations[3] == 4);
    for (std::size_t j = 0; j < 4; ++j) CHECK(m(3, j) == 0.5 * e(3)[j]);
  }
  SUBCASE("model 1 applies the component ramp") {
    cfg.mode = LocationMode::Model1;
    const Matrix m = build_memory(enc, table, cfg, zero_params(cfg));
    for (std::size_t i = 0; i < 7; ++i) {
      const double l = static_cast<double>(enc.context_locations[i]);
      for (std::size_t j = 0; j < 4; ++j) {
        const double v = (1 - l / 8) - (static_cast<double>(j + 1) / 4) * (1 - 2 * l / 8);
        CHECK(m(i, j) == doctest::Approx(e(i)[j] * v).epsilon(1e-15));
      }
    }
  }
  SUBCASE("model 1 hop-index variant varies by hop only") {
    cfg.mode = LocationMode::Model1;
    cfg.model1_hop_index = true;
    const Matrix h0 = build_memory(enc, table, cfg, zero_params(cfg), 0);
    const Matrix h1 = build_memory(enc, table, cfg, zero_params(cfg), 1);
    CHECK_FALSE(h0 == h1);
    const double w = model1_weight(enc.context_locations[0], 8, 1, 4);
    for (std::size_t j = 0; j < 4; ++j) CHECK(h0(0, j) == e(0)[j] * w);
  }
  SUBCASE("model 3 adds the location row") {
    cfg.mode = LocationMode::Model3;
    cfg.max_len = 5;
    MemNetParams p = zero_params(cfg);
    for (std::size_t r = 0; r < 5; ++r) {
      for (std::size_t j = 0; j < 4; ++j) (*p.loc_table)(r, j) = 10.0 * static_cast<double>(r);
    }
    const Matrix m = build_memory(enc, table, cfg, p);
    for (std::size_t i = 0; i < 7; ++i) {
      const double add = 10.0 * static_cast<double>(std::min<std::size_t>(enc.context_locations[i], 4));
      for (std::size_t j = 0; j < 4; ++j) CHECK(m(i, j) == e(i)[j] + add);
    }
  }
  SUBCASE("model 4 with a zero table halves every row") {
    cfg.mode = LocationMode::Model4;
    const Matrix m = build_memory(enc, table, cfg, zero_params(cfg));
    for (std::size_t i = 0; i < 7; ++i) {
      for (std::size_t j = 0; j < 4; ++j) CHECK(m(i, j) == 0.5 * e(i)[j]);
    }
  }
}

TEST_CASE("build_memory rejects instances without context") {
  auto table = small_table();
  const auto enc = encode(make_instance("s", "a b", 0, 3, Polarity::Positive), table);
  REQUIRE(enc.context_size() == 0);
  const ModelConfig cfg{.dim = 4};
  CHECK_THROWS_AS(build_memory(enc, table, cfg, zero_params(cfg)), InputError);
  // Prediction still works through the memory-free path.
  CHECK_NOTHROW(predict_instance(enc, table, cfg, zero_params(cfg)));
}

TEST_CASE("Model 2 row norms shrink with distance") {
  auto table = small_table();
  table.add("same", std::vector<double>{1, 2, 3, 4});
  const auto enc = encode(
      make_instance("s", "a same same same same same same", 0, 1, Polarity::Positive), table);
  const ModelConfig cfg{.dim = 4, .mode = LocationMode::Model2};
  const Matrix m = build_memory(enc, table, cfg, zero_params(cfg));
  for (std::size_t i = 1; i < m.rows(); ++i) {
    REQUIRE(enc.context_locations[i] > enc.context_locations[i - 1]);
    CHECK(norm(m.row(i)) <= norm(m.row(i - 1)));
  }
}

TEST_CASE("attention examples") {
  std::mt19937_64 rng(17);
  const ModelConfig cfg{.dim = 4};

  SUBCASE("single memory row gets all the weight") {
    const Matrix mem = random_matrix(rng, 1, 4);
    const auto p = random_params(cfg, rng);
    const auto r = attention(mem, random_values(rng, 4), p);
    CHECK(r.weights == Vector{1.0});
    CHECK(std::ranges::equal(r.output.span(), mem.row(0)));
  }
  SUBCASE("zero scoring weights give the row mean") {
    const Matrix mem = random_matrix(rng, 6, 4);
    auto p = random_params(cfg, rng);
    p.w_att = Matrix(1, 8);
    p.b_att = 0.0;
    const auto r = attention(mem, random_values(rng, 4), p);
    const Vector mean = row_mean(mem);
    for (double a : r.weights) CHECK(a == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
    for (std::size_t j = 0; j < 4; ++j) CHECK(std::abs(r.output[j] - mean[j]) < 1e-12);
  }
  SUBCASE("random case against a scalar-loop reference") {
    const Matrix mem = random_matrix(rng, 3, 4);
    const auto q = random_values(rng, 4);
    const auto p = random_params(cfg, rng);
    const auto r = attention(mem, q, p);

    double g[3], mx = -1e300, z = 0.0;
    for (int i = 0; i < 3; ++i) {
      double s = p.b_att;
      for (int j = 0; j < 4; ++j) s += p.w_att(0, j) * mem(i, j) + p.w_att(0, 4 + j) * q[j];
      g[i] = std::tanh(s);
      mx = std::max(mx, g[i]);
    }
    double a[3];
    for (int i = 0; i < 3; ++i) z += (a[i] = std::exp(g[i] - mx));
    for (int i = 0; i < 3; ++i) a[i] /= z;
    for (int j = 0; j < 4; ++j) {
      double v = 0.0;
      for (int i = 0; i < 3; ++i) v += a[i] * mem(i, j);
      CHECK(std::abs(r.output[j] - v) < 1e-12);
    }
    for (int i = 0; i < 3; ++i) {
      CHECK(std::abs(r.scores[i] - g[i]) < 1e-12);
      CHECK(std::abs(r.weights[i] - a[i]) < 1e-12);
    }
  }
  SUBCASE("dimension mismatch") {
    CHECK_THROWS_AS(attention(random_matrix(rng, 2, 4), random_values(rng, 3),
                              random_params(cfg, rng)),
                    DimensionError);
  }
}

TEST_CASE("one hop with zeroed attention and linear weights yields the context mean") {
  std::mt19937_64 rng(23);
  auto c = random_case(rng, 6);
  const ModelConfig cfg{.dim = 6, .hops = 1};
  auto p = random_params(cfg, rng);
  p.w_att = Matrix(1, 12);
  p.b_att = 0.0;
  p.w_lin = Matrix(6, 6);
  const auto trace = forward(c.encoded, c.table, cfg, p);
  const Vector mean = row_mean(trace.memory(0));
  for (std::size_t j = 0; j < 6; ++j) CHECK(std::abs(trace.hops[0].output[j] - mean[j]) < 1e-12);
}

TEST_CASE("parameter count does not depend on hops") {
  for (auto mode : {LocationMode::None, LocationMode::Model1, LocationMode::Model2,
                    LocationMode::Model3, LocationMode::Model4}) {
    ModelConfig one{.dim = 300, .hops = 1, .mode = mode};
    ModelConfig nine = one;
    nine.hops = 9;
    CHECK(parameter_count(zero_params(one)) == parameter_count(zero_params(nine)));
    CHECK(parameter_count(one) == parameter_count(zero_params(one)));
  }
  // 2d + 1 + d^2 + 3d + 3 with d = 8, plus the 100 x 8 table for Models 3/4.
  CHECK(parameter_count(ModelConfig{.dim = 8}) == 16 + 1 + 64 + 24 + 3);
  CHECK(parameter_count(ModelConfig{.dim = 8, .mode = LocationMode::Model3}) == 108 + 800);
}

TEST_CASE("forward traces are normalised for every mode and hop count") {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 100; ++trial) {
    const auto mode = static_cast<LocationMode>(trial % 5);
    const ModelConfig cfg{.dim = 8, .hops = 1 + static_cast<std::size_t>(trial % 9), .mode = mode};
    auto c = random_case(rng, 8);
    const auto trace = forward(c.encoded, c.table, cfg, random_params(cfg, rng));
    REQUIRE(trace.hops.size() == cfg.hops);
    for (const auto& hop : trace.hops) {
      const double s = std::accumulate(hop.attention.weights.begin(), hop.attention.weights.end(), 0.0);
      CHECK(std::abs(s - 1.0) < 1e-9);
      CHECK(hop.attention.weights.size() == c.encoded.context_size());
    }
    CHECK(std::abs(std::accumulate(trace.probs.begin(), trace.probs.end(), 0.0) - 1.0) < 1e-9);
  }
}

TEST_CASE("content-only forward ignores the order of context words") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 30; ++trial) {
    auto c = random_case(rng, 8, 5, 12);
    const ModelConfig cfg{.dim = 8, .hops = 3};
    const auto p = random_params(cfg, rng);
    EncodedInstance shuffled = c.encoded;
    std::vector<std::size_t> perm(shuffled.context_size());
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    for (std::size_t i = 0; i < perm.size(); ++i) {
      shuffled.context_rows[i] = c.encoded.context_rows[perm[i]];
      shuffled.context_locations[i] = c.encoded.context_locations[perm[i]];
    }
    const auto a = forward(c.encoded, c.table, cfg, p);
    const auto b = forward(shuffled, c.table, cfg, p);
    for (std::size_t t = 0; t < cfg.hops; ++t) {
      for (std::size_t j = 0; j < 8; ++j) {
        CHECK(std::abs(a.hops[t].attention.output[j] - b.hops[t].attention.output[j]) < 1e-12);
      }
      for (std::size_t i = 0; i < perm.size(); ++i) {
        CHECK(std::abs(b.hops[t].attention.weights[i] - a.hops[t].attention.weights[perm[i]]) <
              1e-12);
      }
    }
  }
}

TEST_CASE("predict takes the argmax with ties to the lowest class") {
  ForwardTrace t;
  t.probs = Vector{0.7, 0.2, 0.1};
  CHECK(predict(t) == Polarity::Positive);
  t.probs = Vector{1.0 / 3, 1.0 / 3, 1.0 / 3};
  CHECK(predict(t) == Polarity::Positive);
  t.probs = Vector{0.1, 0.8, 0.1};
  CHECK(predict(t) == Polarity::Negative);
  t.probs = Vector{0.1, 0.45, 0.45};
  CHECK(predict(t) == Polarity::Negative);
}

TEST_CASE("location mode names") {
  CHECK(location_mode_from_string("none") == LocationMode::None);
  CHECK(location_mode_from_string("4") == LocationMode::Model4);
  CHECK_FALSE(location_mode_from_string("5").has_value());
}
