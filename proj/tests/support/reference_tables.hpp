#pragma once

#include <array>
#include <vector>

namespace testsupport {

// Reference comparison rows: accuracy, recall, precision, F1. Four rows are
// printed twice (the per-stakeholder baseline appears both in the rule-based
// table and at the top of each per-stakeholder comparison); duplicates are
// kept so the fixture covers every printed row.
struct ReferenceRow {
  const char* table;
  const char* model;
  double accuracy;
  double recall;
  double precision;
  double f1;
};

inline const std::vector<ReferenceRow>& reference_rows() {
  static const std::vector<ReferenceRow> rows = {
      {"overall", "rule-based (baseline)", 0.781, 0.677, 0.837, 0.749},
      {"overall", "BERT-en-uncased", 0.894, 0.898, 0.888, 0.893},
      {"overall", "ALBERT-en-base", 0.904, 0.873, 0.927, 0.899},
      {"overall", "BERT-experts-wiki-books", 0.864, 0.818, 0.896, 0.856},
      {"overall", "BERT-talking-heads-base", 0.900, 0.887, 0.908, 0.897},
      {"overall", "distilBERT-en-uncased", 0.896, 0.887, 0.901, 0.894},
      {"overall", "RNN (1 LSTM layer)", 0.816, 0.755, 0.854, 0.801},
      {"overall", "RNN (2 LSTM layers)", 0.807, 0.727, 0.859, 0.787},

      {"rule-based per tag", "CUS", 0.982, 0.884, 0.935, 0.909},
      {"rule-based per tag", "INV", 0.838, 0.712, 0.797, 0.752},
      {"rule-based per tag", "EMP", 0.982, 0.627, 0.964, 0.760},
      {"rule-based per tag", "SOC", 0.993, 0.297, 0.905, 0.447},

      {"customers", "rule-based (baseline)", 0.982, 0.884, 0.935, 0.909},
      {"customers", "BERT-en-uncased", 0.994, 0.970, 0.970, 0.970},
      {"customers", "ALBERT-en-base", 0.991, 0.977, 0.935, 0.956},
      {"customers", "BERT-experts-wiki-books", 0.992, 0.977, 0.949, 0.963},
      {"customers", "BERT-talking-heads-base", 0.994, 0.970, 0.970, 0.970},
      {"customers", "distilBERT-en-uncased", 0.994, 0.970, 0.970, 0.970},
      {"customers", "RNN (1 LSTM layer)", 0.954, 0.579, 0.951, 0.720},
      {"customers", "RNN (2 LSTM layers)", 0.964, 0.722, 0.906, 0.803},

      {"investors", "rule-based (baseline)", 0.838, 0.712, 0.797, 0.752},
      {"investors", "BERT-en-uncased", 0.938, 0.915, 0.911, 0.913},
      {"investors", "ALBERT-en-base", 0.937, 0.921, 0.904, 0.913},
      {"investors", "BERT-experts-wiki-books", 0.935, 0.894, 0.923, 0.908},
      {"investors", "BERT-talking-heads-base", 0.937, 0.900, 0.922, 0.911},
      {"investors", "distilBERT-en-uncased", 0.940, 0.904, 0.926, 0.915},
      {"investors", "RNN (1 LSTM layer)", 0.866, 0.783, 0.833, 0.807},
      {"investors", "RNN (2 LSTM layers)", 0.872, 0.781, 0.850, 0.814},

      {"employees", "rule-based (baseline)", 0.982, 0.627, 0.964, 0.760},
      {"employees", "BERT-en-uncased", 0.977, 0.809, 0.764, 0.786},
      {"employees", "ALBERT-en-base", 0.979, 0.706, 0.857, 0.774},
      {"employees", "BERT-experts-wiki-books", 0.978, 0.838, 0.760, 0.797},
      {"employees", "BERT-talking-heads-base", 0.984, 0.853, 0.841, 0.847},
      {"employees", "distilBERT-en-uncased", 0.976, 0.824, 0.737, 0.778},
      {"employees", "RNN (1 LSTM layer)", 0.963, 0.485, 0.702, 0.574},
      {"employees", "RNN (2 LSTM layers)", 0.960, 0.397, 0.692, 0.505},

      {"community/environment", "rule-based (baseline)", 0.993, 0.297, 0.905, 0.447},
      {"community/environment", "BERT-en-uncased", 0.995, 0.417, 1.000, 0.588},
      {"community/environment", "ALBERT-en-base", 0.993, 0.250, 1.000, 0.400},
      {"community/environment", "BERT-experts-wiki-books", 0.993, 0.417, 0.714, 0.526},
      {"community/environment", "BERT-talking-heads-base", 0.994, 0.417, 0.833, 0.556},
      {"community/environment", "distilBERT-en-uncased", 0.992, 0.250, 0.750, 0.375},
      {"community/environment", "RNN (1 LSTM layer)", 0.991, 0.000, 0.000, 0.000},
      {"community/environment", "RNN (2 LSTM layers)", 0.991, 0.000, 0.000, 0.000},
  };
  return rows;
}

// Reference per-stakeholder label bookkeeping: positives and percent share.
struct ReferenceShare {
  const char* tag;
  std::size_t positives;
  const char* percent;  // printed at 3 decimals
};

inline const std::array<ReferenceShare, 4>& reference_shares() {
  static const std::array<ReferenceShare, 4> shares = {{
      {"cus", 618, "10.366"},
      {"inv", 2024, "33.948"},
      {"emp", 197, "3.304"},
      {"soc", 21, "0.352"},
  }};
  return shares;
}

}  // namespace testsupport
