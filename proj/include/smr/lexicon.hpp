#pragma once

#include <array>
#include <cctype>
#include <fstream>
#include <initializer_list>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "smr/corpus.hpp"
#include "smr/metrics.hpp"
#include "smr/textprep.hpp"

namespace smr {

// One keyword: literal lowercase tokens, optionally prefix-matching on the
// last token. "customer*" matches customer/customers/... but the wildcard
// also covers the zero-extension case, so "customer*" matches "customer".
struct KeywordPattern {
  std::vector<std::string> tokens;
  bool trailing_wildcard = false;

  // Source form, e.g. "return on*".
  std::string to_source() const {
    std::string out;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      if (i) out.push_back(' ');
      out += tokens[i];
    }
    if (trailing_wildcard) out.push_back('*');
    return out;
  }

  friend bool operator==(const KeywordPattern&, const KeywordPattern&) = default;
};

// Lowercases and whitespace-splits a keyword source string. One '*' is
// permitted, at the very end only.
inline KeywordPattern compile_pattern(std::string_view source) {
  if (source.empty()) throw std::runtime_error("empty keyword pattern");
  const std::string original(source);
  const auto star = source.find('*');
  KeywordPattern pattern;
  if (star != std::string_view::npos) {
    if (star != source.size() - 1)
      throw std::runtime_error("keyword pattern '" + original +
                               "': '*' is only allowed at the end");
    pattern.trailing_wildcard = true;
    source.remove_suffix(1);
  }
  std::string token;
  for (char c : source) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!token.empty()) pattern.tokens.push_back(std::move(token));
      token.clear();
    } else {
      token.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
  }
  if (!token.empty()) pattern.tokens.push_back(std::move(token));
  if (pattern.tokens.empty())
    throw std::runtime_error("keyword pattern '" + original + "': no tokens");
  return pattern;
}

struct Lexicon {
  std::array<std::vector<KeywordPattern>, 4> entries;  // indexed by StakeholderTag

  std::vector<KeywordPattern>& operator[](StakeholderTag tag) {
    return entries[static_cast<std::size_t>(tag)];
  }
  const std::vector<KeywordPattern>& operator[](StakeholderTag tag) const {
    return entries[static_cast<std::size_t>(tag)];
  }
};

// The embedded keyword lists. This copy is normative; the exported lexicon
// file exists so analysts can extend the lists without rebuilding.
inline Lexicon default_lexicon() {
  const auto compile_all = [](std::initializer_list<const char*> sources) {
    std::vector<KeywordPattern> patterns;
    for (const char* source : sources) patterns.push_back(compile_pattern(source));
    return patterns;
  };
  Lexicon lexicon;
  lexicon[StakeholderTag::CUS] = compile_all({"customer*", "client*", "consumer*"});
  lexicon[StakeholderTag::INV] = compile_all(
      {"investor*", "financ*", "shareholder*", "stockholder*", "owners*",
       "investment*", "return on*", "net income*", "profit*", "revenue*",
       "earnings*"});
  lexicon[StakeholderTag::EMP] = compile_all({"employee*", "worker*", "manager*"});
  lexicon[StakeholderTag::SOC] = compile_all(
      {"society", "societal", "social responsib*", "social performance",
       "communit*", "natural environment*", "ecolog*"});
  return lexicon;
}

namespace detail {

inline bool pattern_matches_at(const KeywordPattern& pattern,
                               const std::vector<std::string>& tokens,
                               std::size_t start) {
  for (std::size_t k = 0; k + 1 < pattern.tokens.size(); ++k)
    if (tokens[start + k] != pattern.tokens[k]) return false;
  const std::string& last = pattern.tokens.back();
  const std::string& word = tokens[start + pattern.tokens.size() - 1];
  if (pattern.trailing_wildcard)
    return word.size() >= last.size() && word.compare(0, last.size(), last) == 0;
  return word == last;
}

inline bool pattern_matches(const KeywordPattern& pattern,
                            const std::vector<std::string>& tokens) {
  if (pattern.tokens.size() > tokens.size()) return false;
  const std::size_t last_start = tokens.size() - pattern.tokens.size();
  for (std::size_t start = 0; start <= last_start; ++start)
    if (pattern_matches_at(pattern, tokens, start)) return true;
  return false;
}

}  // namespace detail

// A tag matches iff any of its patterns matches a run of consecutive
// sentence tokens (the last comparison is a prefix test under a wildcard).
inline TagSet match_tags_tokens(const Lexicon& lexicon,
                                const std::vector<std::string>& tokens) {
  TagSet tags;
  for (auto tag : kAllTags)
    for (const auto& pattern : lexicon[tag])
      if (detail::pattern_matches(pattern, tokens)) {
        tags.add(tag);
        break;
      }
  return tags;
}

inline TagSet match_tags(const Lexicon& lexicon, std::string_view text) {
  return match_tags_tokens(lexicon, tokenize(text));
}

// Overall baseline prediction: any stakeholder keyword hit flags the
// sentence as material.
inline bool predict_material(const Lexicon& lexicon, std::string_view text) {
  return !match_tags(lexicon, text).empty();
}

inline MetricsReport evaluate_lexicon(const Lexicon& lexicon,
                                      const Corpus& corpus) {
  if (corpus.empty()) throw std::runtime_error("evaluate_lexicon: empty corpus");
  std::vector<bool> predictions, labels;
  predictions.reserve(corpus.size());
  labels.reserve(corpus.size());
  for (const auto& s : corpus.sentences) {
    predictions.push_back(predict_material(lexicon, s.text));
    labels.push_back(s.labels.material);
  }
  return metrics_from(confusion_from(predictions, labels));
}

inline MetricsReport evaluate_lexicon(const Lexicon& lexicon,
                                      const Corpus& corpus,
                                      StakeholderTag tag) {
  if (corpus.empty()) throw std::runtime_error("evaluate_lexicon: empty corpus");
  std::vector<bool> predictions, labels;
  predictions.reserve(corpus.size());
  labels.reserve(corpus.size());
  for (const auto& s : corpus.sentences) {
    predictions.push_back(match_tags(lexicon, s.text).contains(tag));
    labels.push_back(s.labels.tags.contains(tag));
  }
  return metrics_from(confusion_from(predictions, labels));
}

// Lexicon file grammar (see docs/formats.md): one [cus]/[inv]/[emp]/[soc]
// section header per tag, one double-quoted keyword per line, '#' comments
// and blank lines ignored.
inline Lexicon parse_lexicon(std::istream& in) {
  Lexicon lexicon;
  std::optional<StakeholderTag> section;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto trimmed = detail::trim(line);
    if (trimmed.empty() || trimmed.front() == '#') continue;
    if (trimmed.front() == '[') {
      if (trimmed.back() != ']')
        throw std::runtime_error("lexicon line " + std::to_string(line_no) +
                                 ": unterminated section header");
      const auto tag = parse_tag(trimmed.substr(1, trimmed.size() - 2));
      if (!tag)
        throw std::runtime_error("lexicon line " + std::to_string(line_no) +
                                 ": unknown section " + std::string(trimmed));
      section = *tag;
      continue;
    }
    if (trimmed.size() < 2 || trimmed.front() != '"' || trimmed.back() != '"')
      throw std::runtime_error("lexicon line " + std::to_string(line_no) +
                               ": expected a quoted keyword");
    if (!section)
      throw std::runtime_error("lexicon line " + std::to_string(line_no) +
                               ": keyword before any section header");
    lexicon[*section].push_back(
        compile_pattern(trimmed.substr(1, trimmed.size() - 2)));
  }
  return lexicon;
}

inline Lexicon load_lexicon(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return parse_lexicon(in);
}

inline void write_lexicon(const Lexicon& lexicon, std::ostream& out) {
  for (auto tag : kAllTags) {
    out << '[' << to_string(tag) << "]\n";
    for (const auto& pattern : lexicon[tag])
      out << '"' << pattern.to_source() << "\"\n";
    out << '\n';
  }
}

}  // namespace smr
