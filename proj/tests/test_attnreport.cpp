#include <doctest.h>

#include <numeric>
#include <random>

#include "helpers.hpp"
#include "memnet/attnreport.hpp"

using namespace memnet;
using namespace memnet::testing;

TEST_CASE("weights print with two decimals") {
  CHECK(format_weight(0.4473) == "0.45");
  CHECK(format_weight(1.0) == "1.00");
  CHECK(format_weight(0.0) == "0.00");
}

TEST_CASE("shading is linear grayscale from white to black") {
  CHECK(shade_for(0.0) == "#ffffff");
  CHECK(shade_for(1.0) == "#000000");
  CHECK(shade_for(0.5) == "#808080");
  // Darker for larger weights.
  for (double w = 0.0; w < 0.99; w += 0.05) {
    CHECK(std::stoi(shade_for(w).substr(1, 2), nullptr, 16) >=
          std::stoi(shade_for(w + 0.05).substr(1, 2), nullptr, 16));
  }
}

TEST_CASE("empty report lists") {
  CHECK(render_text(std::span<const AttentionReport>{}).empty());
  const std::string html = render_html({});
  CHECK(html.find("<html") != std::string::npos);
  CHECK(html.find("<table") == std::string::npos);
}

TEST_CASE("reports from traces: hop columns sum to one and survive a text round trip") {
  std::mt19937_64 rng(83);
  for (int trial = 0; trial < 20; ++trial) {
    auto c = random_case(rng, 6, 4, 10);
    const ModelConfig cfg{.dim = 6, .hops = 1 + static_cast<std::size_t>(trial % 5),
                          .mode = LocationMode::Model2};
    const auto trace = forward(c.encoded, c.table, cfg, random_params(cfg, rng));
    const auto report = make_report(c.instance, trace);
    REQUIRE(report.context.size() == c.encoded.context_size());
    REQUIRE(report.hops() == cfg.hops);
    for (std::size_t t = 0; t < cfg.hops; ++t) {
      double s = 0.0;
      for (const auto& row : report.weights) s += row[t];
      CHECK(std::abs(s - 1.0) < 1e-9);
    }

    const auto back = parse_text(render_text(report));
    CHECK(back.text == report.text);
    CHECK(back.aspect == report.aspect);
    CHECK(back.gold == report.gold);
    CHECK(back.predicted == report.predicted);
    CHECK(back.context == report.context);
    for (std::size_t i = 0; i < report.context.size(); ++i) {
      for (std::size_t t = 0; t < cfg.hops; ++t) {
        CHECK(std::abs(back.weights[i][t] - report.weights[i][t]) <= 0.005 + 1e-12);
      }
    }
  }
}

TEST_CASE("single context word gets full weight in every hop") {
  EmbeddingTable t(3, 1);
  t.add("good", std::vector<double>{1, 0, 0});
  t.add("food", std::vector<double>{0, 1, 0});
  const Instance inst = make_instance("x", "good food", 5, 9, Polarity::Positive);
  const ModelConfig cfg{.dim = 3, .hops = 3};
  std::mt19937_64 rng(89);
  const auto report = make_report(inst, forward(encode(inst, t), t, cfg, random_params(cfg, rng)));
  REQUIRE(report.context == std::vector<std::string>{"good"});
  for (double w : report.weights[0]) CHECK(w == 1.0);
  const std::string text = render_text(report);
  CHECK(text.find("sentence: good food") == 0);
  CHECK(text.find("aspect: food") != std::string::npos);
  CHECK(text.find("1.00") != std::string::npos);
}

TEST_CASE("HTML escapes text and shades each cell") {
  AttentionReport r;
  r.text = "fish & <chips>";
  r.aspect = "fish";
  r.context = {"&", "<chips>"};
  r.weights = {{0.0}, {1.0}};
  const std::string html = render_html(std::vector<AttentionReport>{r});
  CHECK(html.find("fish &amp; &lt;chips&gt;") != std::string::npos);
  CHECK(html.find("#ffffff") != std::string::npos);
  CHECK(html.find("#000000") != std::string::npos);
  CHECK(html.find("<chips>") == std::string::npos);
}
