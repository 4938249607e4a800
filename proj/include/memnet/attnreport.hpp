#pragma once

#include <span>
#include <string>
#include <vector>

#include "memnet/corpus.hpp"
#include "memnet/model.hpp"

namespace memnet {

struct AttentionReport {
  std::string text;
  std::string aspect;
  Polarity gold = Polarity::Positive;
  Polarity predicted = Polarity::Positive;
  std::vector<std::string> context;
  /// weights[i][t]: weight of context word i in hop t.
  std::vector<std::vector<double>> weights;

  std::size_t hops() const { return weights.empty() ? 0 : weights.front().size(); }
};

AttentionReport make_report(const Instance& instance, const ForwardTrace& trace);

/// Aligned plain-text table, weights rounded to two decimals.
std::string render_text(const AttentionReport& report);
std::string render_text(std::span<const AttentionReport> reports);

/// Standalone HTML page; each weight cell is shaded in linear grayscale,
/// white for 0 and darkest for 1.
std::string render_html(std::span<const AttentionReport> reports);

/// Two-decimal string used by both renderers (0.4473 -> "0.45").
std::string format_weight(double w);
/// Background colour for a weight, "#rrggbb".
std::string shade_for(double w);

/// Parses the output of render_text for a single report back into words and weights.
AttentionReport parse_text(const std::string& text);

}  // namespace memnet
