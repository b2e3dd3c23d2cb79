#pragma once

#include <algorithm>
#include <array>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "smr/corpus.hpp"
#include "smr/csv.hpp"
#include "smr/metrics.hpp"
#include "smr/neural.hpp"
#include "smr/rng.hpp"
#include "smr/textprep.hpp"

namespace smr {

// Binary classification task: the overall material flag or one stakeholder tag.
struct Task {
  std::optional<StakeholderTag> tag;  // nullopt = overall

  static Task overall() { return {}; }
  static Task for_tag(StakeholderTag t) { return {t}; }

  bool label_of(const LabeledSentence& s) const {
    return tag ? s.labels.tags.contains(*tag) : s.labels.material;
  }

  std::string name() const { return tag ? to_string(*tag) : "overall"; }

  friend bool operator==(const Task&, const Task&) = default;
};

inline std::optional<Task> parse_task(std::string_view name) {
  if (name == "overall") return Task::overall();
  if (auto tag = parse_tag(name)) return Task::for_tag(*tag);
  return std::nullopt;
}

struct TrainConfig {
  std::size_t epochs = 10;
  double lr = 1e-3;
  std::size_t batch_size = 32;
  double ratio = 0.8;
  std::uint64_t seed = 42;
  Task task = Task::overall();
  std::size_t num_layers = 1;
  double threshold = 0.5;
  std::size_t embed_dim = 64;
  std::size_t hidden_dim = 64;
  std::size_t max_len = 128;
  std::size_t min_freq = 2;
  std::size_t max_vocab = 20000;
};

struct EpochRecord {
  std::size_t epoch = 0;  // 1-based, contiguous
  MetricsReport train;
  MetricsReport validation;
  double train_loss = 0.0;
  double val_loss = 0.0;
};

struct TrainResult {
  Checkpoint best;
  std::size_t best_epoch = 0;
  std::vector<EpochRecord> history;
  std::vector<std::string> warnings;
};

namespace detail {

// Sub-seed salts (see docs/formats.md).
inline constexpr std::uint64_t kSaltModelInit = 1;
inline constexpr std::uint64_t kSaltHoldoutSplit = 2;
inline constexpr std::uint64_t kSaltEpochShuffleBase = 0x100;

struct EncodedSet {
  std::vector<EncodedSequence> sequences;
  std::vector<bool> labels;
};

inline EncodedSet encode_set(const Corpus& corpus, const Vocab& vocab,
                             const Task& task, std::size_t max_len) {
  EncodedSet set;
  set.sequences.reserve(corpus.size());
  set.labels.reserve(corpus.size());
  for (const auto& s : corpus.sentences) {
    set.sequences.push_back(encode(vocab, s.text, max_len));
    set.labels.push_back(task.label_of(s));
  }
  return set;
}

struct EvalResult {
  MetricsReport report;
  double mean_loss = 0.0;
};

inline EvalResult evaluate_encoded(const ClassifierModel& model,
                                   const EncodedSet& set, double threshold) {
  std::vector<bool> predictions;
  predictions.reserve(set.sequences.size());
  double loss_sum = 0.0;
  for (std::size_t i = 0; i < set.sequences.size(); ++i) {
    const double prob = forward(model, set.sequences[i]).prob;
    predictions.push_back(prob >= threshold);
    loss_sum += bce_loss(prob, set.labels[i] ? 1 : 0);
  }
  EvalResult result;
  result.report = metrics_from(confusion_from(predictions, set.labels));
  result.mean_loss = loss_sum / static_cast<double>(set.sequences.size());
  return result;
}

}  // namespace detail

// The retraining loop of the model pipeline: per epoch, shuffle the train
// set (seeded, epoch-dependent), take mean-reduced Adam steps over
// mini-batches, then score train and validation sets at the configured
// threshold. Returns the checkpoint snapshotted at the epoch with the
// greatest validation F1 (earliest epoch wins ties) plus the full history.
inline TrainResult train(const TrainConfig& config, const Corpus& train_set,
                         const Corpus& val_set, const Vocab& vocab) {
  if (train_set.empty() || val_set.empty())
    throw std::runtime_error("train: empty train or validation set");
  if (config.epochs < 1) throw std::runtime_error("train: epochs must be >= 1");
  if (!(config.threshold > 0.0 && config.threshold < 1.0))
    throw std::runtime_error("train: threshold must be in (0,1)");

  TrainResult result;

  const auto encoded_train =
      detail::encode_set(train_set, vocab, config.task, config.max_len);
  const auto encoded_val =
      detail::encode_set(val_set, vocab, config.task, config.max_len);

  const auto positives = static_cast<std::size_t>(
      std::count(encoded_train.labels.begin(), encoded_train.labels.end(), true));
  if (positives == 0)
    result.warnings.push_back("task '" + config.task.name() +
                              "' has zero positive training labels; the model "
                              "can only learn the constant-negative predictor");

  ClassifierModel model =
      init_model(vocab.size(), config.embed_dim, config.hidden_dim,
                 config.num_layers, derive_seed(config.seed, detail::kSaltModelInit));
  OptimizerState optimizer = OptimizerState::create(model, config.lr);

  const std::size_t n = encoded_train.sequences.size();
  std::vector<std::size_t> order(n);

  double best_f1 = -1.0;
  for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    Xoshiro256ss rng(
        derive_seed(config.seed, detail::kSaltEpochShuffleBase + epoch));
    seeded_shuffle(order, rng);

    double loss_sum = 0.0;
    for (std::size_t begin = 0; begin < n; begin += config.batch_size) {
      const std::size_t end = std::min(n, begin + config.batch_size);
      Gradients batch_grads = zeros_like(model);
      for (std::size_t k = begin; k < end; ++k) {
        const std::size_t idx = order[k];
        const auto tape = forward(model, encoded_train.sequences[idx]);
        const int label = encoded_train.labels[idx] ? 1 : 0;
        loss_sum += bce_loss(tape.prob, label);
        accumulate(batch_grads, backward(model, tape, label));
      }
      scale(batch_grads, 1.0 / static_cast<double>(end - begin));
      adam_step(model, batch_grads, optimizer);
    }

    EpochRecord record;
    record.epoch = epoch;
    record.train_loss = loss_sum / static_cast<double>(n);
    const auto train_eval =
        detail::evaluate_encoded(model, encoded_train, config.threshold);
    const auto val_eval =
        detail::evaluate_encoded(model, encoded_val, config.threshold);
    record.train = train_eval.report;
    record.validation = val_eval.report;
    record.val_loss = val_eval.mean_loss;
    result.history.push_back(record);

    if (record.validation.f1 > best_f1) {
      best_f1 = record.validation.f1;
      result.best.model = model;
      result.best_epoch = epoch;
    }
  }
  result.best.vocab = vocab;
  return result;
}

inline std::vector<double> predict_probs(const Checkpoint& checkpoint,
                                         const std::vector<std::string>& texts,
                                         std::size_t max_len) {
  std::vector<double> probs;
  probs.reserve(texts.size());
  for (const auto& text : texts)
    probs.push_back(
        forward(checkpoint.model, encode(checkpoint.vocab, text, max_len)).prob);
  return probs;
}

// Threshold is inclusive: prob >= threshold classifies positive.
inline MetricsReport evaluate_model(const Checkpoint& checkpoint,
                                    const Corpus& corpus, const Task& task,
                                    double threshold, std::size_t max_len = 128) {
  if (corpus.empty()) throw std::runtime_error("evaluate_model: empty corpus");
  std::vector<bool> predictions, labels;
  predictions.reserve(corpus.size());
  labels.reserve(corpus.size());
  for (const auto& s : corpus.sentences) {
    const double prob =
        forward(checkpoint.model, encode(checkpoint.vocab, s.text, max_len)).prob;
    predictions.push_back(prob >= threshold);
    labels.push_back(task.label_of(s));
  }
  return metrics_from(confusion_from(predictions, labels));
}

// Shortest representation that parses back to the identical double, so a
// predictions file written by this library rescoring to the exact same
// report is a structural guarantee, not a formatting accident.
inline std::string format_probability(double p) {
  char buffer[32];
  const auto result = std::to_chars(buffer, buffer + sizeof(buffer), p);
  return std::string(buffer, result.ptr);
}

// Predictions file: CSV header `id,probability`, one row per sentence.
inline std::map<std::string, double, std::less<>> load_predictions(
    std::istream& in) {
  csv::Reader reader(in);
  std::vector<std::string> row;
  if (!reader.read_row(row) || row.size() < 2 || row[0] != "id" ||
      row[1] != "probability")
    throw std::runtime_error("predictions file: expected header 'id,probability'");
  std::map<std::string, double, std::less<>> predictions;
  std::size_t row_no = 1;
  while (reader.read_row(row)) {
    ++row_no;
    if (row.size() == 1 && row[0].empty()) continue;
    if (row.size() < 2)
      throw std::runtime_error("predictions file row " + std::to_string(row_no) +
                               ": expected id,probability");
    double prob = 0.0;
    try {
      prob = std::stod(row[1]);
    } catch (const std::exception&) {
      throw std::runtime_error("predictions file row " + std::to_string(row_no) +
                               ": invalid probability '" + row[1] + "'");
    }
    if (!(prob >= 0.0 && prob <= 1.0))
      throw std::runtime_error("predictions file row " + std::to_string(row_no) +
                               ": probability " + row[1] + " outside [0,1]");
    if (!predictions.emplace(row[0], prob).second)
      throw std::runtime_error("predictions file: duplicate id '" + row[0] + "'");
  }
  return predictions;
}

// Joins an externally produced probability file against the corpus by id and
// scores it exactly like evaluate_model. Every corpus id must be present.
inline MetricsReport score_external_predictions(std::istream& in,
                                                const Corpus& corpus,
                                                const Task& task,
                                                double threshold) {
  if (corpus.empty())
    throw std::runtime_error("score_external_predictions: empty corpus");
  const auto predictions = load_predictions(in);
  std::vector<std::string> missing;
  std::vector<bool> preds, labels;
  preds.reserve(corpus.size());
  labels.reserve(corpus.size());
  for (const auto& s : corpus.sentences) {
    auto it = predictions.find(s.id);
    if (it == predictions.end()) {
      missing.push_back(s.id);
      continue;
    }
    preds.push_back(it->second >= threshold);
    labels.push_back(task.label_of(s));
  }
  if (!missing.empty()) {
    std::ostringstream msg;
    msg << "predictions file is missing " << missing.size() << " id(s):";
    const std::size_t shown = std::min<std::size_t>(missing.size(), 10);
    for (std::size_t i = 0; i < shown; ++i) msg << ' ' << missing[i];
    if (missing.size() > shown) msg << " ...";
    throw std::runtime_error(msg.str());
  }
  return metrics_from(confusion_from(preds, labels));
}

inline MetricsReport score_external_predictions(const std::string& path,
                                                const Corpus& corpus,
                                                const Task& task,
                                                double threshold) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  try {
    return score_external_predictions(in, corpus, task, threshold);
  } catch (const std::runtime_error& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

struct NamedReport {
  std::string name;
  MetricsReport report;
};

// Aligned text table in the standard report column order, metrics half-up at three
// decimals. Rows keep their given order.
inline std::string comparison_table_text(const std::vector<NamedReport>& reports) {
  if (reports.empty()) throw std::runtime_error("comparison_table: no reports");
  std::size_t width = std::string("Model").size();
  for (const auto& r : reports) width = std::max(width, r.name.size());
  std::ostringstream out;
  out << "Model";
  out << std::string(width - 5, ' ');
  out << "  Accuracy  Recall  Precision  F1\n";
  for (const auto& r : reports) {
    out << r.name << std::string(width - r.name.size(), ' ');
    out << "  " << format3(r.report.accuracy) << "     " << format3(r.report.recall)
        << "   " << format3(r.report.precision) << "      " << format3(r.report.f1)
        << "\n";
  }
  return out.str();
}

inline std::string comparison_table_csv(const std::vector<NamedReport>& reports) {
  if (reports.empty()) throw std::runtime_error("comparison_table: no reports");
  std::ostringstream out;
  out << "model,accuracy,recall,precision,f1\n";
  for (const auto& r : reports) {
    csv::write_field(out, r.name);
    out << ',' << format3(r.report.accuracy) << ',' << format3(r.report.recall)
        << ',' << format3(r.report.precision) << ',' << format3(r.report.f1)
        << '\n';
  }
  return out.str();
}

inline std::string comparison_table_json(const std::vector<NamedReport>& reports) {
  if (reports.empty()) throw std::runtime_error("comparison_table: no reports");
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : reports) {
    nlohmann::json row;
    row["model"] = r.name;
    row["accuracy"] = round3(r.report.accuracy);
    row["recall"] = round3(r.report.recall);
    row["precision"] = round3(r.report.precision);
    row["f1"] = round3(r.report.f1);
    rows.push_back(std::move(row));
  }
  return rows.dump(2) + "\n";
}

// Epoch history CSV, the data behind the per-epoch metric curves:
// epoch,split,accuracy,recall,precision,f1,loss with one train and one val
// row per epoch.
inline void write_history_csv(const std::vector<EpochRecord>& history,
                              std::ostream& out) {
  const auto f6 = [](double x) {
    char buffer[32];
    std::snprintf(buffer, sizeof(buffer), "%.6f", x);
    return std::string(buffer);
  };
  out << "epoch,split,accuracy,recall,precision,f1,loss\n";
  for (const auto& rec : history) {
    out << rec.epoch << ",train," << f6(rec.train.accuracy) << ','
        << f6(rec.train.recall) << ',' << f6(rec.train.precision) << ','
        << f6(rec.train.f1) << ',' << f6(rec.train_loss) << '\n';
    out << rec.epoch << ",val," << f6(rec.validation.accuracy) << ','
        << f6(rec.validation.recall) << ',' << f6(rec.validation.precision) << ','
        << f6(rec.validation.f1) << ',' << f6(rec.val_loss) << '\n';
  }
}

struct StakeholderRun {
  TrainResult result;
  MetricsReport validation_report;
};

// Four independent binary per-tag tasks over the same seeded split; vocab is
// rebuilt from the train half each time (it is identical across tags).
inline std::array<StakeholderRun, 4> replicate_per_stakeholder(
    const TrainConfig& config, const Corpus& corpus) {
  const auto [train_set, val_set] =
      split_corpus(corpus, SplitSpec{config.ratio, config.seed});
  const Vocab vocab = build_vocab(train_set, config.min_freq, config.max_vocab);

  std::array<StakeholderRun, 4> runs;
  for (auto tag : kAllTags) {
    TrainConfig tag_config = config;
    tag_config.task = Task::for_tag(tag);
    auto& run = runs[static_cast<std::size_t>(tag)];
    run.result = train(tag_config, train_set, val_set, vocab);
    run.validation_report = evaluate_model(run.result.best, val_set,
                                           tag_config.task, config.threshold,
                                           config.max_len);
  }
  return runs;
}

}  // namespace smr
