#include "memnet/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include "memnet/errors.hpp"

namespace memnet {

namespace pt = boost::property_tree;

std::string_view to_string(Polarity p) {
  switch (p) {
    case Polarity::Positive: return "positive";
    case Polarity::Negative: return "negative";
    case Polarity::Neutral: return "neutral";
  }
  return "?";
}

std::optional<Polarity> polarity_from_string(std::string_view s) {
  if (s == "positive") return Polarity::Positive;
  if (s == "negative") return Polarity::Negative;
  if (s == "neutral") return Polarity::Neutral;
  return std::nullopt;
}

Polarity polarity_from_index(std::size_t i) {
  if (i >= kNumClasses) throw ContractError("class index out of range: " + std::to_string(i));
  return static_cast<Polarity>(i);
}

std::string Instance::aspect_text() const {
  std::string out;
  for (std::size_t i = aspect.begin; i < aspect.end; ++i) {
    if (!out.empty()) out += ' ';
    out += tokens[i].text;
  }
  return out;
}

std::string Instance::text() const {
  std::string out;
  for (const auto& t : tokens) {
    if (!out.empty()) out += ' ';
    out += t.text;
  }
  return out;
}

std::size_t DatasetStats::total() const {
  std::size_t n = 0;
  for (auto c : counts) n += c;
  return n;
}

namespace {

bool is_space(unsigned char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

bool is_punct(unsigned char c) { return c < 0x80 && std::ispunct(c); }

// UTF-8 continuation bytes do not start a new code point.
bool starts_code_point(unsigned char c) { return (c & 0xC0) != 0x80; }

}  // namespace

std::vector<Token> tokenize(std::string_view raw) {
  std::vector<Token> tokens;
  std::string current;
  std::size_t current_start = 0;
  std::size_t next_cp = 0;

  auto flush = [&](std::size_t end_cp) {
    if (!current.empty()) {
      tokens.push_back(Token{std::move(current), current_start, end_cp});
      current.clear();
    }
  };

  for (std::size_t i = 0; i < raw.size(); ++i) {
    const auto c = static_cast<unsigned char>(raw[i]);
    if (!starts_code_point(c)) {
      current += raw[i];
      continue;
    }
    const std::size_t cp = next_cp++;
    if (is_space(c)) {
      flush(cp);
    } else if (is_punct(c)) {
      flush(cp);
      tokens.push_back(Token{std::string(1, raw[i]), cp, cp + 1});
    } else {
      if (current.empty()) current_start = cp;
      current += (c < 0x80) ? static_cast<char>(std::tolower(c)) : raw[i];
    }
  }
  flush(next_cp);

  if (tokens.empty()) throw InputError("empty sentence: no tokens in \"" + std::string(raw) + "\"");
  return tokens;
}

Instance make_instance(std::string sentence_id, std::string raw_text, std::size_t from,
                       std::size_t to, Polarity label) {
  Instance inst;
  inst.sentence_id = std::move(sentence_id);
  inst.raw_text = std::move(raw_text);
  inst.label = label;
  inst.aspect_from = from;
  inst.aspect_to = to;
  inst.tokens = tokenize(inst.raw_text);
  if (from >= to) {
    throw AlignmentError(inst.sentence_id, "empty offset range [" + std::to_string(from) + ", " +
                                               std::to_string(to) + ")");
  }

  std::optional<std::size_t> first;
  std::size_t last = 0;
  for (std::size_t i = 0; i < inst.tokens.size(); ++i) {
    const auto& t = inst.tokens[i];
    if (t.char_start < to && t.char_end > from) {
      if (!first) first = i;
      last = i;
    }
  }
  if (!first) {
    throw AlignmentError(inst.sentence_id, "range [" + std::to_string(from) + ", " +
                                               std::to_string(to) + ") overlaps no token");
  }
  inst.aspect = AspectSpan{*first, last + 1};
  return inst;
}

std::size_t location_of(const Instance& instance, std::size_t context_index) {
  const auto& a = instance.aspect;
  if (context_index >= instance.tokens.size()) {
    throw ContractError("location_of: token index " + std::to_string(context_index) +
                        " out of range");
  }
  if (a.contains(context_index)) {
    throw ContractError("location_of: token index " + std::to_string(context_index) +
                        " lies inside the aspect span");
  }
  return context_index < a.begin ? a.begin - context_index : context_index - (a.end - 1);
}

DatasetStats compute_stats(const std::vector<Instance>& instances) {
  DatasetStats s;
  for (const auto& inst : instances) ++s.counts[class_index(inst.label)];
  return s;
}

namespace {

std::size_t parse_offset(const std::string& s, const std::string& sentence_id,
                         const char* name) {
  std::size_t v = 0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc{} || ptr != end) {
    throw ParseError("sentence '" + sentence_id + "': bad " + name + " attribute '" + s + "'", 0);
  }
  return v;
}

Corpus parse_tree(const pt::ptree& root) {
  Corpus corpus;
  const auto sentences = root.get_child_optional("sentences");
  if (!sentences) throw ParseError("missing <sentences> root element", 0);

  for (const auto& [tag, sentence] : *sentences) {
    if (tag != "sentence") continue;
    const std::string id = sentence.get<std::string>("<xmlattr>.id", "");
    const auto text = sentence.get_optional<std::string>("text");
    if (!text) throw ParseError("sentence '" + id + "' has no <text>", 0);
    const auto terms = sentence.get_child_optional("aspectTerms");
    if (!terms) continue;

    for (const auto& [term_tag, term] : *terms) {
      if (term_tag != "aspectTerm") continue;
      const auto polarity = term.get<std::string>("<xmlattr>.polarity", "");
      if (polarity == "conflict") {
        ++corpus.stats.dropped_conflict;
        continue;
      }
      const auto label = polarity_from_string(polarity);
      if (!label) {
        throw ParseError("sentence '" + id + "': unknown polarity '" + polarity + "'", 0);
      }
      const auto from_attr = term.get_optional<std::string>("<xmlattr>.from");
      const auto to_attr = term.get_optional<std::string>("<xmlattr>.to");
      if (!from_attr || !to_attr) {
        throw ParseError("sentence '" + id + "': aspectTerm without from/to offsets", 0);
      }
      const auto from = parse_offset(*from_attr, id, "from");
      const auto to = parse_offset(*to_attr, id, "to");
      corpus.instances.push_back(make_instance(id, *text, from, to, *label));
      ++corpus.stats.counts[class_index(*label)];
    }
  }
  return corpus;
}

Corpus parse_stream(std::istream& in) {
  pt::ptree root;
  try {
    pt::read_xml(in, root);
  } catch (const pt::xml_parser_error& e) {
    throw ParseError("malformed XML: " + e.message(), e.line());
  }
  return parse_tree(root);
}

}  // namespace

Corpus parse_semeval_xml(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MissingFileError(path.string());
  return parse_stream(in);
}

Corpus parse_semeval_xml_string(const std::string& xml) {
  std::istringstream in(xml);
  return parse_stream(in);
}

}  // namespace memnet
