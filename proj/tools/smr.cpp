// smr: stakeholder-materiality toolkit for 10-K sentences.
//
// Subcommands: stats, split, baseline, train, predict, compare.
// Exit codes: 0 success; 1 warnings escalated by --strict; 2 I/O, schema, or
// usage errors.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "smr/smr.hpp"

namespace fs = std::filesystem;

namespace {

smr::CorpusFormat format_for_path(const std::string& path) {
  const auto ext = fs::path(path).extension().string();
  if (ext == ".jsonl" || ext == ".ndjson") return smr::CorpusFormat::Jsonl;
  return smr::CorpusFormat::Csv;
}

void write_output(const std::string& content, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + out_path + "' for writing");
  out << content;
}

std::string render_reports(const std::vector<smr::NamedReport>& reports,
                           const std::string& format, const std::string& label) {
  if (format == "csv") return smr::comparison_table_csv(reports);
  if (format == "json") return smr::comparison_table_json(reports);
  auto text = smr::comparison_table_text(reports);
  // The text renderer titles its first column "Model"; relabel for task tables.
  if (label != "Model" && text.rfind("Model", 0) == 0)
    text = label + text.substr(5);
  return text;
}

struct SplitFlags {
  std::string mode = "full";  // full | test
  double ratio = 0.8;
  std::uint64_t seed = 42;
};

smr::Corpus select_split(const smr::Corpus& corpus, const SplitFlags& flags) {
  if (flags.mode == "full") return corpus;
  auto [train, test] = smr::split_corpus(corpus, {flags.ratio, flags.seed});
  return test;
}

int finish_with_warnings(const std::vector<std::string>& warnings, bool strict) {
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
  return (strict && !warnings.empty()) ? 1 : 0;
}

// ---------------------------------------------------------------- stats ----

int cmd_stats(const std::string& data_path, const std::string& format,
              const std::string& out_path) {
  const auto corpus = smr::load_corpus(data_path, format_for_path(data_path));
  const auto stats = smr::label_stats(corpus);
  const auto percent = [&](std::size_t count) {
    return smr::format3(100.0 * static_cast<double>(count) /
                        static_cast<double>(stats.total));
  };

  std::ostringstream out;
  if (format == "json") {
    nlohmann::json j;
    j["total"] = stats.total;
    j["material"] = stats.material;
    j["nonmaterial"] = stats.nonmaterial;
    for (auto tag : smr::kAllTags) {
      const auto& stat = stats.per_tag[static_cast<std::size_t>(tag)];
      j["per_tag"][smr::to_string(tag)] = {{"positives", stat.positives},
                                           {"share", stat.share}};
    }
    out << j.dump(2) << "\n";
  } else if (format == "csv") {
    out << "label,count,percent\n";
    for (auto tag : smr::kAllTags) {
      const auto& stat = stats.per_tag[static_cast<std::size_t>(tag)];
      out << smr::to_string(tag) << ',' << stat.positives << ','
          << percent(stat.positives) << '\n';
    }
    out << "material," << stats.material << ',' << percent(stats.material) << '\n';
    out << "nonmaterial," << stats.nonmaterial << ','
        << percent(stats.nonmaterial) << '\n';
  } else {
    out << "Sentences: " << stats.total << " (" << stats.material
        << " material, " << stats.nonmaterial << " non-material)\n";
    out << "Stakeholder  Positives  % of sentences\n";
    for (auto tag : smr::kAllTags) {
      const auto& stat = stats.per_tag[static_cast<std::size_t>(tag)];
      out << smr::to_string(tag) << "          " << stat.positives;
      out << std::string(11 - std::to_string(stat.positives).size(), ' ');
      out << percent(stat.positives) << "\n";
    }
  }
  write_output(out.str(), out_path);
  return 0;
}

// ---------------------------------------------------------------- split ----

int cmd_split(const std::string& data_path, double ratio, std::uint64_t seed,
              const std::string& out_train, const std::string& out_test) {
  const auto corpus = smr::load_corpus(data_path, format_for_path(data_path));
  auto [train, test] = smr::split_corpus(corpus, {ratio, seed});
  smr::save_corpus(train, out_train, format_for_path(out_train));
  smr::save_corpus(test, out_test, format_for_path(out_test));
  std::cout << "train: " << train.size() << " sentences -> " << out_train << "\n"
            << "test:  " << test.size() << " sentences -> " << out_test << "\n";
  return 0;
}

// ------------------------------------------------------------- baseline ----

int cmd_baseline(const std::string& data_path, const std::string& tag_arg,
                 const SplitFlags& split, const std::string& lexicon_path,
                 const std::string& export_path, const std::string& format,
                 const std::string& out_path) {
  const auto lexicon = lexicon_path.empty() ? smr::default_lexicon()
                                            : smr::load_lexicon(lexicon_path);
  if (!export_path.empty()) {
    std::ofstream out(export_path);
    if (!out)
      throw std::runtime_error("cannot open '" + export_path + "' for writing");
    smr::write_lexicon(lexicon, out);
    if (data_path.empty()) return 0;
  }
  if (data_path.empty())
    throw std::runtime_error("baseline: --data is required");

  const auto corpus =
      select_split(smr::load_corpus(data_path, format_for_path(data_path)), split);

  std::vector<smr::NamedReport> reports;
  if (tag_arg == "all" || tag_arg == "overall")
    reports.push_back({"overall", smr::evaluate_lexicon(lexicon, corpus)});
  if (tag_arg == "all") {
    for (auto tag : smr::kAllTags)
      reports.push_back(
          {smr::to_string(tag), smr::evaluate_lexicon(lexicon, corpus, tag)});
  } else if (tag_arg != "overall") {
    const auto tag = smr::parse_tag(tag_arg);
    if (!tag) throw std::runtime_error("unknown tag '" + tag_arg + "'");
    reports.push_back(
        {smr::to_string(*tag), smr::evaluate_lexicon(lexicon, corpus, *tag)});
  }
  write_output(render_reports(reports, format, "Task "), out_path);
  return 0;
}

// ---------------------------------------------------------------- train ----

struct TrainFlags {
  std::string data;
  std::string task = "overall";
  smr::TrainConfig config;
  double holdout = 0.0;  // 0 = off; otherwise a clean held-out test fraction
  std::string out = "model.ckpt";
  std::string history;
  bool strict = false;
};

std::string with_tag_suffix(const std::string& path, const std::string& tag) {
  fs::path p(path);
  const auto ext = p.extension().string();
  p.replace_extension();
  return p.string() + "." + tag + ext;
}

int run_single_train(const TrainFlags& flags, const smr::Task& task) {
  auto corpus = smr::load_corpus(flags.data, format_for_path(flags.data));

  // --holdout first carves a clean test set that plays no part in model
  // selection; the usual leaky protocol (select and report on the same 20%
  // slice) stays the default.
  smr::Corpus holdout_set;
  if (flags.holdout > 0.0) {
    auto [work, held] = smr::split_corpus(
        corpus, {1.0 - flags.holdout,
                 smr::derive_seed(flags.config.seed, smr::detail::kSaltHoldoutSplit)});
    corpus = std::move(work);
    holdout_set = std::move(held);
  }

  auto [train_set, val_set] =
      smr::split_corpus(corpus, {flags.config.ratio, flags.config.seed});
  // Vocabulary comes from the train half only so token statistics never leak
  // from the validation side.
  const auto vocab =
      smr::build_vocab(train_set, flags.config.min_freq, flags.config.max_vocab);

  smr::TrainConfig config = flags.config;
  config.task = task;
  auto result = smr::train(config, train_set, val_set, vocab);

  smr::save_checkpoint(result.best.model, result.best.vocab, flags.out);
  const std::string history_path =
      flags.history.empty() ? flags.out + ".history.csv" : flags.history;
  {
    std::ofstream out(history_path, std::ios::binary);
    if (!out)
      throw std::runtime_error("cannot open '" + history_path + "' for writing");
    smr::write_history_csv(result.history, out);
  }

  const auto& best = result.history[result.best_epoch - 1];
  std::cout << "task " << task.name() << ": best epoch " << result.best_epoch
            << " of " << config.epochs << ", validation F1 "
            << smr::format3(best.validation.f1) << " -> " << flags.out << "\n";
  if (flags.holdout > 0.0) {
    const auto report = smr::evaluate_model(result.best, holdout_set, task,
                                            config.threshold, config.max_len);
    std::cout << "holdout (" << holdout_set.size() << " sentences): accuracy "
              << smr::format3(report.accuracy) << ", recall "
              << smr::format3(report.recall) << ", precision "
              << smr::format3(report.precision) << ", F1 "
              << smr::format3(report.f1) << "\n";
  }
  return finish_with_warnings(result.warnings, flags.strict);
}

int cmd_train(const TrainFlags& flags) {
  if (flags.task != "all") {
    const auto task = smr::parse_task(flags.task);
    if (!task) throw std::runtime_error("unknown task '" + flags.task + "'");
    return run_single_train(flags, *task);
  }
  if (flags.holdout > 0.0)
    throw std::runtime_error("--holdout is not supported with --task all");

  // Per-stakeholder replication: four independent binary tasks, same split.
  auto corpus = smr::load_corpus(flags.data, format_for_path(flags.data));
  const auto runs = smr::replicate_per_stakeholder(flags.config, corpus);

  std::vector<smr::NamedReport> reports;
  std::vector<std::string> warnings;
  for (auto tag : smr::kAllTags) {
    const auto& run = runs[static_cast<std::size_t>(tag)];
    const std::string tag_name = smr::to_string(tag);
    const std::string ckpt_path = with_tag_suffix(flags.out, tag_name);
    smr::save_checkpoint(run.result.best.model, run.result.best.vocab, ckpt_path);
    const std::string history_path =
        flags.history.empty() ? ckpt_path + ".history.csv"
                              : with_tag_suffix(flags.history, tag_name);
    std::ofstream out(history_path, std::ios::binary);
    if (!out)
      throw std::runtime_error("cannot open '" + history_path + "' for writing");
    smr::write_history_csv(run.result.history, out);
    reports.push_back({tag_name, run.validation_report});
    for (const auto& w : run.result.warnings) warnings.push_back(w);
    std::cout << "task " << tag_name << ": best epoch " << run.result.best_epoch
              << ", validation F1 " << smr::format3(run.validation_report.f1)
              << " -> " << ckpt_path << "\n";
  }
  std::cout << render_reports(reports, "text", "Task ");
  return finish_with_warnings(warnings, flags.strict);
}

// -------------------------------------------------------------- predict ----

int cmd_predict(const std::string& model_path, const std::string& input_path,
                const std::string& kind, std::size_t max_len, double threshold,
                const std::string& out_path) {
  const auto checkpoint = smr::load_checkpoint(model_path);

  std::string resolved = kind;
  if (resolved == "auto") {
    const auto ext = fs::path(input_path).extension().string();
    resolved = (ext == ".csv" || ext == ".jsonl" || ext == ".ndjson") ? "dataset"
                                                                      : "text";
  }

  std::ostringstream out;
  if (resolved == "dataset") {
    const auto corpus =
        smr::load_corpus(input_path, format_for_path(input_path));
    out << "id,probability\n";
    for (const auto& s : corpus.sentences) {
      const double prob =
          smr::forward(checkpoint.model,
                       smr::encode(checkpoint.vocab, s.text, max_len))
              .prob;
      std::vector<std::string> row = {s.id, smr::format_probability(prob)};
      smr::csv::write_row(out, row);
    }
  } else {
    std::ifstream in(input_path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + input_path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    out << "sentence,probability,material\n";
    for (const auto& sentence : smr::segment_sentences(buffer.str())) {
      const double prob =
          smr::forward(checkpoint.model,
                       smr::encode(checkpoint.vocab, sentence, max_len))
              .prob;
      std::vector<std::string> row = {sentence, smr::format_probability(prob),
                                      prob >= threshold ? "1" : "0"};
      smr::csv::write_row(out, row);
    }
  }
  write_output(out.str(), out_path);
  return 0;
}

// -------------------------------------------------------------- compare ----

int cmd_compare(const std::string& data_path, const std::string& task_arg,
                bool include_baseline, const std::vector<std::string>& models,
                const std::vector<std::string>& preds, const SplitFlags& split,
                double threshold, std::size_t max_len, const std::string& format,
                const std::string& out_path) {
  const auto task = smr::parse_task(task_arg);
  if (!task) throw std::runtime_error("unknown task '" + task_arg + "'");
  const auto corpus =
      select_split(smr::load_corpus(data_path, format_for_path(data_path)), split);

  std::vector<smr::NamedReport> reports;
  if (include_baseline) {
    const auto lexicon = smr::default_lexicon();
    reports.push_back({"rule-based (baseline)",
                       task->tag ? smr::evaluate_lexicon(lexicon, corpus, *task->tag)
                                 : smr::evaluate_lexicon(lexicon, corpus)});
  }
  for (const auto& path : models) {
    const auto checkpoint = smr::load_checkpoint(path);
    reports.push_back(
        {fs::path(path).stem().string(),
         smr::evaluate_model(checkpoint, corpus, *task, threshold, max_len)});
  }
  for (const auto& path : preds)
    reports.push_back(
        {fs::path(path).stem().string(),
         smr::score_external_predictions(path, corpus, *task, threshold)});
  if (reports.empty())
    throw std::runtime_error(
        "compare: nothing to compare (use --baseline, --model, or --preds)");

  write_output(render_reports(reports, format, "Model"), out_path);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stakeholder-material sentence classification toolkit"};
  app.require_subcommand(1);

  const auto add_format = [](CLI::App* cmd, std::string& format) {
    cmd->add_option("--format", format, "Report encoding")
        ->check(CLI::IsMember({"text", "csv", "json"}))
        ->capture_default_str();
  };

  // stats
  std::string st_data, st_format = "text", st_out;
  auto* stats = app.add_subcommand("stats", "Label counts and shares");
  stats->add_option("--data", st_data, "Labeled dataset (.csv or .jsonl)")
      ->required();
  add_format(stats, st_format);
  stats->add_option("--out", st_out, "Write report here instead of stdout");

  // split
  std::string sp_data, sp_train = "train.csv", sp_test = "test.csv";
  double sp_ratio = 0.8;
  std::uint64_t sp_seed = 42;
  auto* split = app.add_subcommand("split", "Deterministic train/test split");
  split->add_option("--data", sp_data)->required();
  split->add_option("--ratio", sp_ratio)->capture_default_str();
  split->add_option("--seed", sp_seed)->capture_default_str();
  split->add_option("--out-train", sp_train)->capture_default_str();
  split->add_option("--out-test", sp_test)->capture_default_str();

  // baseline
  std::string bl_data, bl_tag = "all", bl_lexicon, bl_export, bl_format = "text",
              bl_out;
  SplitFlags bl_split;
  auto* baseline =
      app.add_subcommand("baseline", "Keyword-search baseline evaluation");
  baseline->add_option("--data", bl_data, "Labeled dataset");
  baseline->add_option("--tag", bl_tag, "all, overall, cus, inv, emp, or soc")
      ->capture_default_str();
  baseline->add_option("--split", bl_split.mode, "Evaluate on full data or the test side")
      ->check(CLI::IsMember({"full", "test"}))
      ->capture_default_str();
  baseline->add_option("--ratio", bl_split.ratio)->capture_default_str();
  baseline->add_option("--seed", bl_split.seed)->capture_default_str();
  baseline->add_option("--lexicon", bl_lexicon, "Custom lexicon file");
  baseline->add_option("--export-lexicon", bl_export,
                       "Write the active lexicon to this file");
  add_format(baseline, bl_format);
  baseline->add_option("--out", bl_out);

  // train
  TrainFlags tr;
  auto* train = app.add_subcommand("train", "Split, train, select best by F1");
  train->add_option("--data", tr.data)->required();
  train->add_option("--task", tr.task, "overall, cus, inv, emp, soc, or all")
      ->capture_default_str();
  train->add_option("--layers", tr.config.num_layers)->check(CLI::Range(1, 2))
      ->capture_default_str();
  train->add_option("--epochs", tr.config.epochs)->capture_default_str();
  train->add_option("--lr", tr.config.lr)->capture_default_str();
  train->add_option("--batch", tr.config.batch_size)->capture_default_str();
  train->add_option("--embed", tr.config.embed_dim)->capture_default_str();
  train->add_option("--hidden", tr.config.hidden_dim)->capture_default_str();
  train->add_option("--max-len", tr.config.max_len)->capture_default_str();
  train->add_option("--min-freq", tr.config.min_freq)->capture_default_str();
  train->add_option("--max-vocab", tr.config.max_vocab)->capture_default_str();
  train->add_option("--ratio", tr.config.ratio)->capture_default_str();
  train->add_option("--seed", tr.config.seed)->capture_default_str();
  train->add_option("--threshold", tr.config.threshold)->capture_default_str();
  train->add_option("--holdout", tr.holdout,
                    "Fraction carved out first as a clean held-out test set "
                    "(0 disables; selection stays on the validation slice)")
      ->check(CLI::Range(0.0, 0.9))
      ->capture_default_str();
  train->add_option("--out", tr.out, "Checkpoint path")->capture_default_str();
  train->add_option("--history", tr.history,
                    "Epoch history CSV (default: <out>.history.csv)");
  train->add_flag("--strict", tr.strict, "Escalate warnings to exit code 1");

  // predict
  std::string pr_model, pr_input, pr_kind = "auto", pr_out;
  std::size_t pr_max_len = 128;
  double pr_threshold = 0.5;
  auto* predict =
      app.add_subcommand("predict", "Score a dataset or raw filing text");
  predict->add_option("--model", pr_model, "Checkpoint")->required();
  predict->add_option("--input", pr_input, "Dataset or raw text file")->required();
  predict->add_option("--kind", pr_kind, "auto, dataset, or text")
      ->check(CLI::IsMember({"auto", "dataset", "text"}))
      ->capture_default_str();
  predict->add_option("--max-len", pr_max_len)->capture_default_str();
  predict->add_option("--threshold", pr_threshold)->capture_default_str();
  predict->add_option("--out", pr_out);

  // compare
  std::string cp_data, cp_task = "overall", cp_format = "text", cp_out;
  bool cp_baseline = false;
  std::vector<std::string> cp_models, cp_preds;
  SplitFlags cp_split;
  double cp_threshold = 0.5;
  std::size_t cp_max_len = 128;
  auto* compare =
      app.add_subcommand("compare", "Side-by-side metric table across sources");
  compare->add_option("--data", cp_data)->required();
  compare->add_option("--task", cp_task)->capture_default_str();
  compare->add_flag("--baseline", cp_baseline, "Include the keyword baseline row");
  compare->add_option("--model", cp_models, "Checkpoint(s) to score");
  compare->add_option("--preds", cp_preds, "External prediction file(s)");
  compare->add_option("--split", cp_split.mode)
      ->check(CLI::IsMember({"full", "test"}))
      ->capture_default_str();
  compare->add_option("--ratio", cp_split.ratio)->capture_default_str();
  compare->add_option("--seed", cp_split.seed)->capture_default_str();
  compare->add_option("--threshold", cp_threshold)->capture_default_str();
  compare->add_option("--max-len", cp_max_len)->capture_default_str();
  add_format(compare, cp_format);
  compare->add_option("--out", cp_out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (stats->parsed()) return cmd_stats(st_data, st_format, st_out);
    if (split->parsed())
      return cmd_split(sp_data, sp_ratio, sp_seed, sp_train, sp_test);
    if (baseline->parsed())
      return cmd_baseline(bl_data, bl_tag, bl_split, bl_lexicon, bl_export,
                          bl_format, bl_out);
    if (train->parsed()) return cmd_train(tr);
    if (predict->parsed())
      return cmd_predict(pr_model, pr_input, pr_kind, pr_max_len, pr_threshold,
                         pr_out);
    if (compare->parsed())
      return cmd_compare(cp_data, cp_task, cp_baseline, cp_models, cp_preds,
                         cp_split, cp_threshold, cp_max_len, cp_format, cp_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
