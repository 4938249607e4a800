#include "memnet/attnreport.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iomanip>
#include <sstream>

#include "memnet/errors.hpp"

namespace memnet {

AttentionReport make_report(const Instance& instance, const ForwardTrace& trace) {
  AttentionReport r;
  r.text = instance.text();
  r.aspect = instance.aspect_text();
  r.gold = instance.label;
  r.predicted = predict(trace);
  for (std::size_t i = 0; i < instance.tokens.size(); ++i) {
    if (!instance.aspect.contains(i)) r.context.push_back(instance.tokens[i].text);
  }
  const std::size_t k = r.context.size();
  r.weights.assign(k, std::vector<double>(trace.hops.size()));
  for (std::size_t t = 0; t < trace.hops.size(); ++t) {
    const auto& alpha = trace.hops[t].attention.weights;
    if (alpha.size() != k) throw DimensionError("trace does not belong to this instance");
    for (std::size_t i = 0; i < k; ++i) r.weights[i][t] = alpha[i];
  }
  return r;
}

std::string format_weight(double w) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", w);
  return buf;
}

std::string shade_for(double w) {
  const double clamped = std::clamp(w, 0.0, 1.0);
  const int level = static_cast<int>(std::lround(255.0 * (1.0 - clamped)));
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", level, level, level);
  return buf;
}

std::string render_text(const AttentionReport& r) {
  std::size_t word_width = 4;
  for (const auto& w : r.context) word_width = std::max(word_width, w.size());

  std::ostringstream out;
  out << "sentence: " << r.text << '\n';
  out << "aspect: " << r.aspect << '\n';
  out << "gold: " << to_string(r.gold) << "  predicted: " << to_string(r.predicted) << '\n';
  out << std::left << std::setw(static_cast<int>(word_width)) << "word";
  for (std::size_t t = 0; t < r.hops(); ++t) out << "  hop " << std::setw(2) << (t + 1);
  out << '\n';
  for (std::size_t i = 0; i < r.context.size(); ++i) {
    out << std::left << std::setw(static_cast<int>(word_width)) << r.context[i];
    for (double w : r.weights[i]) out << "  " << std::right << std::setw(6) << format_weight(w);
    out << '\n';
  }
  return out.str();
}

std::string render_text(std::span<const AttentionReport> reports) {
  std::string out;
  for (std::size_t i = 0; i < reports.size(); ++i) {
    if (i) out += '\n';
    out += render_text(reports[i]);
  }
  return out;
}

namespace {

std::string html_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string render_html(std::span<const AttentionReport> reports) {
  std::ostringstream out;
  out << "<!DOCTYPE html>\n<html>\n<head>\n<meta charset=\"utf-8\">\n"
      << "<title>attention weights</title>\n"
      << "<style>table{border-collapse:collapse;margin-bottom:1.5em}"
      << "td,th{border:1px solid #999;padding:2px 8px;text-align:right}"
      << "td.word{text-align:left}</style>\n"
      << "</head>\n<body>\n";
  for (const auto& r : reports) {
    out << "<table>\n<caption>Aspect: " << html_escape(r.aspect) << ", gold: " << to_string(r.gold)
        << ", predicted: " << to_string(r.predicted) << "<br>" << html_escape(r.text)
        << "</caption>\n<tr><th></th>";
    for (std::size_t t = 0; t < r.hops(); ++t) out << "<th>hop " << (t + 1) << "</th>";
    out << "</tr>\n";
    for (std::size_t i = 0; i < r.context.size(); ++i) {
      out << "<tr><td class=\"word\">" << html_escape(r.context[i]) << "</td>";
      for (double w : r.weights[i]) {
        const char* ink = w > 0.5 ? "#ffffff" : "#000000";
        out << "<td style=\"background:" << shade_for(w) << ";color:" << ink << "\">"
            << format_weight(w) << "</td>";
      }
      out << "</tr>\n";
    }
    out << "</table>\n";
  }
  out << "</body>\n</html>\n";
  return out.str();
}

AttentionReport parse_text(const std::string& text) {
  std::istringstream in(text);
  AttentionReport r;
  std::string line;
  auto strip_prefix = [](const std::string& l, const std::string& prefix) -> std::string {
    if (l.rfind(prefix, 0) != 0) throw ParseError("expected '" + prefix + "'", 0);
    return l.substr(prefix.size());
  };
  if (!std::getline(in, line)) throw ParseError("empty report", 0);
  r.text = strip_prefix(line, "sentence: ");
  if (!std::getline(in, line)) throw ParseError("report truncated", 0);
  r.aspect = strip_prefix(line, "aspect: ");
  if (!std::getline(in, line)) throw ParseError("report truncated", 0);
  {
    std::istringstream ls(line);
    std::string k1, gold, k2, pred;
    ls >> k1 >> gold >> k2 >> pred;
    const auto g = polarity_from_string(gold);
    const auto p = polarity_from_string(pred);
    if (k1 != "gold:" || k2 != "predicted:" || !g || !p) throw ParseError("bad label line", 3);
    r.gold = *g;
    r.predicted = *p;
  }
  if (!std::getline(in, line)) throw ParseError("report truncated", 0);
  while (std::getline(in, line)) {
    if (line.empty()) break;
    std::istringstream ls(line);
    std::string word;
    ls >> word;
    std::vector<double> row;
    double w = 0.0;
    while (ls >> w) row.push_back(w);
    r.context.push_back(word);
    r.weights.push_back(std::move(row));
  }
  return r;
}

}  // namespace memnet
