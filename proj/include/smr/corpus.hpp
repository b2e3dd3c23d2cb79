#pragma once

#include <array>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "smr/csv.hpp"
#include "smr/rng.hpp"

namespace smr {

// Canonical stakeholder order. Every report, table, and loop in the library
// iterates tags in this order.
enum class StakeholderTag : std::uint8_t { CUS = 0, INV = 1, EMP = 2, SOC = 3 };

inline constexpr std::array<StakeholderTag, 4> kAllTags = {
    StakeholderTag::CUS, StakeholderTag::INV, StakeholderTag::EMP,
    StakeholderTag::SOC};

inline constexpr const char* to_string(StakeholderTag tag) {
  switch (tag) {
    case StakeholderTag::CUS: return "cus";
    case StakeholderTag::INV: return "inv";
    case StakeholderTag::EMP: return "emp";
    case StakeholderTag::SOC: return "soc";
  }
  return "?";
}

inline std::optional<StakeholderTag> parse_tag(std::string_view name) {
  std::string lower(name);
  for (auto& c : lower) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  for (auto tag : kAllTags)
    if (lower == to_string(tag)) return tag;
  return std::nullopt;
}

// Value-semantic set over the four tags.
class TagSet {
 public:
  constexpr TagSet() = default;

  constexpr void add(StakeholderTag tag) { bits_ |= bit(tag); }
  constexpr void remove(StakeholderTag tag) { bits_ &= static_cast<std::uint8_t>(~bit(tag)); }
  constexpr bool contains(StakeholderTag tag) const { return bits_ & bit(tag); }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr bool is_subset_of(TagSet other) const { return (bits_ & ~other.bits_) == 0; }

  constexpr int count() const {
    int n = 0;
    for (auto tag : kAllTags) n += contains(tag) ? 1 : 0;
    return n;
  }

  friend constexpr bool operator==(TagSet a, TagSet b) { return a.bits_ == b.bits_; }

 private:
  static constexpr std::uint8_t bit(StakeholderTag tag) {
    return static_cast<std::uint8_t>(1u << static_cast<unsigned>(tag));
  }
  std::uint8_t bits_ = 0;
};

// Overall material flag plus per-stakeholder attribution. A sentence may be
// material with no attributed tag; a tagged sentence is always material.
struct LabelSet {
  bool material = false;
  TagSet tags;

  bool valid() const { return tags.empty() || material; }
  friend bool operator==(const LabelSet&, const LabelSet&) = default;
};

struct LabeledSentence {
  std::string id;
  std::string text;
  LabelSet labels;
  std::string company;       // empty = not recorded
  std::optional<int> year;

  friend bool operator==(const LabeledSentence&, const LabeledSentence&) = default;
};

struct Corpus {
  std::vector<LabeledSentence> sentences;

  std::size_t size() const { return sentences.size(); }
  bool empty() const { return sentences.empty(); }

  friend bool operator==(const Corpus&, const Corpus&) = default;
};

struct SplitSpec {
  double ratio = 0.8;        // train fraction, exclusive (0,1)
  std::uint64_t seed = 42;
};

enum class CorpusFormat { Csv, Jsonl };

namespace detail {

inline const std::array<std::string, 9> kColumns = {
    "id", "text", "material", "cus", "inv", "emp", "soc", "company", "year"};

inline bool is_blank(std::string_view s) {
  for (char c : s)
    if (!std::isspace(static_cast<unsigned char>(c))) return false;
  return true;
}

inline bool parse_bool_cell(const std::string& cell, std::size_t row,
                            const std::string& column) {
  if (cell == "0") return false;
  if (cell == "1") return true;
  std::ostringstream msg;
  msg << "row " << row << ": column '" << column
      << "': expected 0 or 1, got '" << cell << "'";
  throw std::runtime_error(msg.str());
}

inline void validate_sentence(const LabeledSentence& s, std::size_t row) {
  if (is_blank(s.text)) {
    std::ostringstream msg;
    msg << "row " << row << ": sentence '" << s.id << "' has empty text";
    throw std::runtime_error(msg.str());
  }
  if (!s.labels.valid()) {
    std::ostringstream msg;
    msg << "row " << row << ": sentence '" << s.id
        << "' has a stakeholder tag but material=0";
    throw std::runtime_error(msg.str());
  }
}

inline void check_duplicate(std::unordered_set<std::string>& seen,
                            const std::string& id) {
  if (!seen.insert(id).second)
    throw std::runtime_error("duplicate id '" + id + "'");
}

inline Corpus load_csv(std::istream& in) {
  csv::Reader reader(in);
  std::vector<std::string> row;
  if (!reader.read_row(row)) throw std::runtime_error("empty file: no header row");

  // Columns are resolved by header name; company/year may be absent.
  std::array<int, 9> col;
  col.fill(-1);
  for (std::size_t i = 0; i < row.size(); ++i) {
    for (std::size_t k = 0; k < kColumns.size(); ++k)
      if (row[i] == kColumns[k]) col[k] = static_cast<int>(i);
  }
  for (std::size_t k = 0; k < 7; ++k) {
    if (col[k] < 0)
      throw std::runtime_error("missing column '" + kColumns[k] + "'");
  }

  Corpus corpus;
  std::unordered_set<std::string> seen;
  std::size_t row_no = 1;
  while (reader.read_row(row)) {
    ++row_no;
    if (row.size() == 1 && row[0].empty()) continue;  // trailing blank line
    auto cell = [&](int c) -> const std::string& {
      static const std::string empty;
      return (c >= 0 && static_cast<std::size_t>(c) < row.size()) ? row[c] : empty;
    };
    LabeledSentence s;
    s.id = cell(col[0]);
    s.text = cell(col[1]);
    s.labels.material = parse_bool_cell(cell(col[2]), row_no, "material");
    for (std::size_t t = 0; t < kAllTags.size(); ++t)
      if (parse_bool_cell(cell(col[3 + t]), row_no, kColumns[3 + t]))
        s.labels.tags.add(kAllTags[t]);
    s.company = cell(col[7]);
    const std::string& year_cell = cell(col[8]);
    if (!year_cell.empty()) {
      try {
        std::size_t consumed = 0;
        s.year = std::stoi(year_cell, &consumed);
        if (consumed != year_cell.size()) throw std::invalid_argument(year_cell);
      } catch (const std::exception&) {
        std::ostringstream msg;
        msg << "row " << row_no << ": column 'year': expected integer, got '"
            << year_cell << "'";
        throw std::runtime_error(msg.str());
      }
    }
    check_duplicate(seen, s.id);
    validate_sentence(s, row_no);
    corpus.sentences.push_back(std::move(s));
  }
  return corpus;
}

inline bool json_flag(const nlohmann::json& obj, const char* key,
                      std::size_t line) {
  if (!obj.contains(key))
    throw std::runtime_error("missing key '" + std::string(key) + "'");
  const auto& v = obj.at(key);
  if (v.is_boolean()) return v.get<bool>();
  if (v.is_number_integer()) {
    const auto n = v.get<int>();
    if (n == 0 || n == 1) return n == 1;
  }
  std::ostringstream msg;
  msg << "line " << line << ": key '" << key << "': expected boolean or 0/1";
  throw std::runtime_error(msg.str());
}

inline Corpus load_jsonl(std::istream& in) {
  Corpus corpus;
  std::unordered_set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_blank(line)) continue;
    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      std::ostringstream msg;
      msg << "line " << line_no << ": invalid JSON: " << e.what();
      throw std::runtime_error(msg.str());
    }
    for (const char* key : {"id", "text"})
      if (!obj.contains(key))
        throw std::runtime_error("missing key '" + std::string(key) + "'");
    LabeledSentence s;
    s.id = obj.at("id").get<std::string>();
    s.text = obj.at("text").get<std::string>();
    s.labels.material = json_flag(obj, "material", line_no);
    for (auto tag : kAllTags)
      if (json_flag(obj, to_string(tag), line_no)) s.labels.tags.add(tag);
    if (obj.contains("company") && obj.at("company").is_string())
      s.company = obj.at("company").get<std::string>();
    if (obj.contains("year") && obj.at("year").is_number_integer())
      s.year = obj.at("year").get<int>();
    check_duplicate(seen, s.id);
    validate_sentence(s, line_no);
    corpus.sentences.push_back(std::move(s));
  }
  return corpus;
}

}  // namespace detail

inline Corpus load_corpus(std::istream& in, CorpusFormat format) {
  return format == CorpusFormat::Csv ? detail::load_csv(in)
                                     : detail::load_jsonl(in);
}

inline Corpus load_corpus(const std::string& path, CorpusFormat format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  try {
    return load_corpus(in, format);
  } catch (const std::runtime_error& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

inline void save_corpus(const Corpus& corpus, std::ostream& out,
                        CorpusFormat format) {
  if (format == CorpusFormat::Csv) {
    out << "id,text,material,cus,inv,emp,soc,company,year\n";
    for (const auto& s : corpus.sentences) {
      std::vector<std::string> row = {s.id, s.text,
                                      s.labels.material ? "1" : "0"};
      for (auto tag : kAllTags)
        row.push_back(s.labels.tags.contains(tag) ? "1" : "0");
      row.push_back(s.company);
      row.push_back(s.year ? std::to_string(*s.year) : "");
      csv::write_row(out, row);
    }
    return;
  }
  for (const auto& s : corpus.sentences) {
    nlohmann::json obj;
    obj["id"] = s.id;
    obj["text"] = s.text;
    obj["material"] = s.labels.material;
    for (auto tag : kAllTags) obj[to_string(tag)] = s.labels.tags.contains(tag);
    obj["company"] = s.company;
    if (s.year) obj["year"] = *s.year;
    out << obj.dump() << '\n';
  }
}

inline void save_corpus(const Corpus& corpus, const std::string& path,
                        CorpusFormat format) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  save_corpus(corpus, out, format);
}

// Deterministic random partition. Shuffle is Fisher-Yates over load order
// driven by xoshiro256** seeded from spec.seed (see rng.hpp); the train side
// takes the first floor(ratio*N + 0.5) shuffled sentences. Output order is
// the shuffled order.
inline std::pair<Corpus, Corpus> split_corpus(const Corpus& corpus,
                                              const SplitSpec& spec) {
  if (corpus.size() < 2)
    throw std::runtime_error("corpus too small to split (need >= 2 sentences)");
  if (!(spec.ratio > 0.0 && spec.ratio < 1.0))
    throw std::runtime_error("split ratio must be in (0,1)");

  std::vector<std::size_t> order(corpus.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  Xoshiro256ss rng(spec.seed);
  seeded_shuffle(order, rng);

  const auto n_train = static_cast<std::size_t>(
      std::floor(spec.ratio * static_cast<double>(corpus.size()) + 0.5));

  std::pair<Corpus, Corpus> out;
  out.first.sentences.reserve(n_train);
  out.second.sentences.reserve(corpus.size() - n_train);
  for (std::size_t i = 0; i < order.size(); ++i)
    (i < n_train ? out.first : out.second)
        .sentences.push_back(corpus.sentences[order[i]]);
  return out;
}

struct TagStat {
  std::size_t positives = 0;
  double share = 0.0;  // positives / corpus size
};

struct LabelStats {
  std::size_t total = 0;
  std::size_t material = 0;
  std::size_t nonmaterial = 0;
  std::array<TagStat, 4> per_tag;  // indexed by StakeholderTag
};

inline LabelStats label_stats(const Corpus& corpus) {
  if (corpus.empty()) throw std::runtime_error("label_stats: empty corpus");
  LabelStats stats;
  stats.total = corpus.size();
  for (const auto& s : corpus.sentences) {
    (s.labels.material ? stats.material : stats.nonmaterial) += 1;
    for (auto tag : kAllTags)
      if (s.labels.tags.contains(tag))
        stats.per_tag[static_cast<std::size_t>(tag)].positives += 1;
  }
  for (auto& stat : stats.per_tag)
    stat.share = static_cast<double>(stat.positives) /
                 static_cast<double>(stats.total);
  return stats;
}

}  // namespace smr
