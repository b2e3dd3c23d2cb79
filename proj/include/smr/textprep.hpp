#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "smr/corpus.hpp"

namespace smr {

namespace detail {

// Decodes one UTF-8 sequence starting at `i`; returns the codepoint and
// advances `i`. Malformed bytes decode as U+FFFD and advance one byte.
inline char32_t decode_utf8(std::string_view s, std::size_t& i) {
  const auto byte = [&](std::size_t k) {
    return static_cast<unsigned char>(s[k]);
  };
  const unsigned char b0 = byte(i);
  std::size_t len = 0;
  char32_t cp = 0;
  if (b0 < 0x80) {
    len = 1;
    cp = b0;
  } else if ((b0 & 0xE0) == 0xC0) {
    len = 2;
    cp = b0 & 0x1Fu;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3;
    cp = b0 & 0x0Fu;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4;
    cp = b0 & 0x07u;
  } else {
    ++i;
    return 0xFFFD;
  }
  if (i + len > s.size()) {
    ++i;
    return 0xFFFD;
  }
  for (std::size_t k = 1; k < len; ++k) {
    if ((byte(i + k) & 0xC0) != 0x80) {
      ++i;
      return 0xFFFD;
    }
    cp = (cp << 6) | (byte(i + k) & 0x3Fu);
  }
  i += len;
  return cp;
}

inline void append_utf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
  // Larger codepoints never reach here: they always act as separators.
}

}  // namespace detail

// Lowercases and splits into maximal runs of alphanumeric characters.
// Digits are kept; every punctuation character (hyphens, '$', smart quotes,
// em-dashes, ...) separates. ASCII and Latin-1-supplement letters are
// recognized; any other codepoint is a separator.
inline std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  std::size_t i = 0;
  while (i < text.size()) {
    const char32_t cp = detail::decode_utf8(text, i);
    char32_t lowered = 0;
    if (cp < 0x80) {
      const auto c = static_cast<unsigned char>(cp);
      if (std::isalnum(c)) lowered = std::tolower(c);
    } else if (cp >= 0xC0 && cp <= 0xFF && cp != 0xD7 && cp != 0xF7) {
      lowered = (cp <= 0xDE) ? cp + 0x20 : cp;
    }
    if (lowered != 0) {
      detail::append_utf8(current, lowered);
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

namespace detail {

inline const std::vector<std::string>& protected_abbreviations() {
  static const std::vector<std::string> abbrevs = {
      "inc", "corp", "co", "no", "u.s", "mr", "ms", "dr", "e.g", "i.e", "vs"};
  return abbrevs;
}

inline bool abbreviation_before(std::string_view doc, std::size_t period) {
  std::size_t begin = period;
  while (begin > 0) {
    const auto c = static_cast<unsigned char>(doc[begin - 1]);
    if (std::isalnum(c) || c == '.') --begin;
    else break;
  }
  if (begin == period) return false;
  std::string word(doc.substr(begin, period - begin));
  for (auto& c : word) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  const auto& abbrevs = protected_abbreviations();
  return std::find(abbrevs.begin(), abbrevs.end(), word) != abbrevs.end();
}

inline std::string_view trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

}  // namespace detail

// Rule-based sentence splitter for raw filing text. Splits on ./!/? followed
// by whitespace and an uppercase letter (or end of text); protects a short
// abbreviation list and decimal numbers. Feeds the demo/predict path only.
inline std::vector<std::string> segment_sentences(std::string_view document) {
  std::vector<std::string> sentences;
  const auto emit = [&](std::string_view piece) {
    const auto trimmed = detail::trim(piece);
    if (!trimmed.empty()) sentences.emplace_back(trimmed);
  };

  std::size_t start = 0;
  for (std::size_t i = 0; i < document.size(); ++i) {
    const char c = document[i];
    if (c != '.' && c != '!' && c != '?') continue;
    if (c == '.' && i > 0 && i + 1 < document.size() &&
        std::isdigit(static_cast<unsigned char>(document[i - 1])) &&
        std::isdigit(static_cast<unsigned char>(document[i + 1])))
      continue;
    std::size_t j = i + 1;
    while (j < document.size() &&
           std::isspace(static_cast<unsigned char>(document[j])))
      ++j;
    const bool at_end = j == document.size();
    const bool upper_follows =
        !at_end && j > i + 1 &&
        std::isupper(static_cast<unsigned char>(document[j]));
    if (!at_end && !upper_follows) continue;
    if (c == '.' && detail::abbreviation_before(document, i)) continue;
    emit(document.substr(start, i + 1 - start));
    start = j;
    i = j - 1;
  }
  emit(document.substr(start));
  return sentences;
}

// Token ids for the neural encoder. Ids 0 and 1 are reserved; real tokens
// start at 2. The on-disk form lists one real token per line, line number
// plus 2 giving the id.
class Vocab {
 public:
  static constexpr std::uint32_t kPad = 0;
  static constexpr std::uint32_t kUnk = 1;

  Vocab() : id_to_token_{"<pad>", "<unk>"} {}

  std::uint32_t size() const {
    return static_cast<std::uint32_t>(id_to_token_.size());
  }

  std::uint32_t id_of(const std::string& token) const {
    auto it = token_to_id_.find(token);
    return it == token_to_id_.end() ? kUnk : it->second;
  }

  const std::string& token_of(std::uint32_t id) const {
    if (id >= id_to_token_.size())
      throw std::runtime_error("token id out of range");
    return id_to_token_[id];
  }

  void add(std::string token) {
    const auto id = static_cast<std::uint32_t>(id_to_token_.size());
    token_to_id_.emplace(token, id);
    id_to_token_.push_back(std::move(token));
  }

  friend bool operator==(const Vocab& a, const Vocab& b) {
    return a.id_to_token_ == b.id_to_token_;
  }

 private:
  std::vector<std::string> id_to_token_;
  std::unordered_map<std::string, std::uint32_t> token_to_id_;
};

// Frequency-ranked vocabulary. Tokens with frequency >= min_freq enter,
// ranked by (frequency desc, token asc) and truncated to max_size-2 slots.
inline Vocab build_vocab(const Corpus& corpus, std::size_t min_freq,
                         std::size_t max_size) {
  if (corpus.empty()) throw std::runtime_error("build_vocab: empty corpus");
  if (max_size < 2) throw std::runtime_error("build_vocab: max_size must be >= 2");

  std::unordered_map<std::string, std::size_t> freq;
  for (const auto& s : corpus.sentences)
    for (auto& token : tokenize(s.text)) freq[std::move(token)] += 1;

  std::vector<std::pair<std::string, std::size_t>> ranked;
  ranked.reserve(freq.size());
  for (auto& [token, count] : freq)
    if (count >= min_freq) ranked.emplace_back(token, count);
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  if (ranked.size() > max_size - 2) ranked.resize(max_size - 2);

  Vocab vocab;
  for (auto& [token, count] : ranked) vocab.add(std::move(token));
  return vocab;
}

struct EncodedSequence {
  std::vector<std::uint32_t> ids;  // exactly max_len entries
  std::size_t true_length = 0;     // non-PAD prefix length
};

inline EncodedSequence encode(const Vocab& vocab, std::string_view text,
                              std::size_t max_len) {
  if (max_len < 1) throw std::runtime_error("encode: max_len must be >= 1");
  const auto tokens = tokenize(text);
  EncodedSequence seq;
  seq.true_length = std::min(tokens.size(), max_len);
  seq.ids.assign(max_len, Vocab::kPad);
  for (std::size_t i = 0; i < seq.true_length; ++i)
    seq.ids[i] = vocab.id_of(tokens[i]);
  return seq;
}

inline void save_vocab(const Vocab& vocab, std::ostream& out) {
  for (std::uint32_t id = 2; id < vocab.size(); ++id)
    out << vocab.token_of(id) << '\n';
}

inline Vocab load_vocab(std::istream& in) {
  Vocab vocab;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) vocab.add(line);
  }
  return vocab;
}

}  // namespace smr
