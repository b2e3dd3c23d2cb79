#pragma once

// Independent brute-force oracles for the lexicon baseline and the metric
// bookkeeping. Everything here is written against the documented semantics
// from first principles and shares no code path with the library matcher:
// its own tokenizer, its own scan, its own counting.

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

namespace testsupport {

struct OracleKeyword {
  std::vector<std::string> words;
  bool prefix;  // last word matches as a prefix
};

struct OracleLexicon {
  std::vector<OracleKeyword> cus, inv, emp, soc;
};

inline OracleKeyword kw(std::initializer_list<const char*> words, bool prefix) {
  OracleKeyword k;
  for (auto w : words) k.words.emplace_back(w);
  k.prefix = prefix;
  return k;
}

// The default keyword lists, transcribed separately from the library's
// embedded copy.
inline OracleLexicon oracle_lexicon() {
  OracleLexicon lex;
  lex.cus = {kw({"customer"}, true), kw({"client"}, true), kw({"consumer"}, true)};
  lex.inv = {kw({"investor"}, true),    kw({"financ"}, true),
             kw({"shareholder"}, true), kw({"stockholder"}, true),
             kw({"owners"}, true),      kw({"investment"}, true),
             kw({"return", "on"}, true), kw({"net", "income"}, true),
             kw({"profit"}, true),      kw({"revenue"}, true),
             kw({"earnings"}, true)};
  lex.emp = {kw({"employee"}, true), kw({"worker"}, true), kw({"manager"}, true)};
  lex.soc = {kw({"society"}, false),  kw({"societal"}, false),
             kw({"social", "responsib"}, true),
             kw({"social", "performance"}, false),
             kw({"communit"}, true),  kw({"natural", "environment"}, true),
             kw({"ecolog"}, true)};
  return lex;
}

// ASCII-only lowercase alphanumeric-run tokenizer (the bundled fixtures are
// pure ASCII by construction).
inline std::vector<std::string> oracle_tokenize(std::string_view text) {
  std::vector<std::string> words;
  std::string word;
  for (char raw : text) {
    const auto c = static_cast<unsigned char>(raw);
    if (std::isalnum(c)) {
      word.push_back(static_cast<char>(std::tolower(c)));
    } else if (!word.empty()) {
      words.push_back(word);
      word.clear();
    }
  }
  if (!word.empty()) words.push_back(word);
  return words;
}

inline bool oracle_keyword_hit(const OracleKeyword& keyword,
                               const std::vector<std::string>& words) {
  if (words.size() < keyword.words.size()) return false;
  for (std::size_t at = 0; at + keyword.words.size() <= words.size(); ++at) {
    bool all = true;
    for (std::size_t k = 0; k < keyword.words.size() && all; ++k) {
      const std::string& want = keyword.words[k];
      const std::string& have = words[at + k];
      if (k + 1 == keyword.words.size() && keyword.prefix)
        all = have.size() >= want.size() && have.substr(0, want.size()) == want;
      else
        all = have == want;
    }
    if (all) return true;
  }
  return false;
}

inline bool oracle_any_hit(const std::vector<OracleKeyword>& keywords,
                           const std::vector<std::string>& words) {
  for (const auto& keyword : keywords)
    if (oracle_keyword_hit(keyword, words)) return true;
  return false;
}

struct OracleCells {
  long tp = 0, fp = 0, tn = 0, fn = 0;
};

inline void oracle_count(OracleCells& cells, bool predicted, bool actual) {
  if (predicted && actual) ++cells.tp;
  if (predicted && !actual) ++cells.fp;
  if (!predicted && actual) ++cells.fn;
  if (!predicted && !actual) ++cells.tn;
}

struct OracleMetrics {
  double accuracy = 0, precision = 0, recall = 0, f1 = 0;
};

inline OracleMetrics oracle_metrics(const OracleCells& c) {
  OracleMetrics m;
  const double total = static_cast<double>(c.tp + c.fp + c.tn + c.fn);
  m.accuracy = static_cast<double>(c.tp + c.tn) / total;
  m.precision = (c.tp + c.fp) ? static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp) : 0.0;
  m.recall = (c.tp + c.fn) ? static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn) : 0.0;
  m.f1 = (m.precision + m.recall) > 0
             ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
             : 0.0;
  return m;
}

}  // namespace testsupport
