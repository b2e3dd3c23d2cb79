#include <catch2/catch_amalgamated.hpp>

#include "smr/smr.hpp"

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct CliResult {
  int exit_code = -1;
  std::string output;  // stdout + stderr
};

fs::path work_dir() {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / "smr_cli_tests";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

CliResult run_cli(const std::string& args) {
  const auto capture = work_dir() / "capture.txt";
  const std::string command =
      std::string("\"") + SMR_CLI_PATH + "\" " + args + " > " +
      capture.string() + " 2>&1";
  const int raw = std::system(command.c_str());
  CliResult result;
  result.exit_code = (raw == -1) ? -1 : WEXITSTATUS(raw);
  std::ifstream in(capture);
  std::stringstream buffer;
  buffer << in.rdbuf();
  result.output = buffer.str();
  return result;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::size_t line_count(const std::string& text) {
  std::size_t lines = 0;
  for (char c : text) lines += c == '\n';
  return lines;
}

// Tiny separable dataset written to disk for train/predict/compare runs.
fs::path toy_dataset() {
  static const fs::path path = [] {
    const char* positive[] = {"payout reached households quickly",
                              "assistance payments helped families",
                              "benefits were paid promptly to people"};
    const char* negative[] = {"carrying amounts approximate fair values",
                              "statements involve risks and uncertainties",
                              "goodwill is tested for impairment annually"};
    smr::Corpus corpus;
    smr::Xoshiro256ss rng(77);
    for (int i = 0; i < 40; ++i) {
      smr::LabeledSentence s;
      s.id = "t" + std::to_string(i);
      const bool material = i % 2 == 0;
      s.text = material ? positive[rng.next_below(3)] : negative[rng.next_below(3)];
      s.labels.material = material;
      if (material && i % 4 == 0) s.labels.tags.add(smr::StakeholderTag::INV);
      corpus.sentences.push_back(std::move(s));
    }
    const auto p = work_dir() / "toy.csv";
    smr::save_corpus(corpus, p.string(), smr::CorpusFormat::Csv);
    return p;
  }();
  return path;
}

const std::string kFixture = std::string(SMR_DATA_DIR) + "/fixture_200.csv";
const std::string kTrainFlags =
    " --epochs 2 --hidden 8 --embed 8 --batch 8 --lr 0.05 --min-freq 1";

}  // namespace

TEST_CASE("cli: stats reports counts") {
  const auto result = run_cli("stats --data " + kFixture);
  CHECK(result.exit_code == 0);
  CHECK(result.output.find("200") != std::string::npos);
  CHECK(result.output.find("cus") != std::string::npos);

  const auto json = run_cli("stats --data " + kFixture + " --format json");
  const auto parsed = nlohmann::json::parse(json.output);
  CHECK(parsed["total"] == 200);
}

TEST_CASE("cli: missing input exits 2 and names the path") {
  const auto result = run_cli("stats --data /no/such/file.csv");
  CHECK(result.exit_code == 2);
  CHECK(result.output.find("/no/such/file.csv") != std::string::npos);
}

TEST_CASE("cli: usage errors exit 2") {
  CHECK(run_cli("stats").exit_code == 2);              // missing required flag
  CHECK(run_cli("frobnicate").exit_code == 2);         // unknown subcommand
  CHECK(run_cli("stats --data x --format yaml").exit_code == 2);
  CHECK(run_cli("--help").exit_code == 0);
}

TEST_CASE("cli: split is deterministic and byte-stable") {
  const auto t1 = work_dir() / "train1.csv";
  const auto e1 = work_dir() / "test1.csv";
  const auto t2 = work_dir() / "train2.csv";
  const auto e2 = work_dir() / "test2.csv";

  const auto first = run_cli("split --data " + kFixture + " --seed 42 --out-train " +
                             t1.string() + " --out-test " + e1.string());
  REQUIRE(first.exit_code == 0);
  const auto second = run_cli("split --data " + kFixture + " --seed 42 --out-train " +
                              t2.string() + " --out-test " + e2.string());
  REQUIRE(second.exit_code == 0);

  CHECK(slurp(t1) == slurp(t2));
  CHECK(slurp(e1) == slurp(e2));

  const auto train = smr::load_corpus(t1.string(), smr::CorpusFormat::Csv);
  const auto test = smr::load_corpus(e1.string(), smr::CorpusFormat::Csv);
  CHECK(train.size() == 160);
  CHECK(test.size() == 40);
}

TEST_CASE("cli: baseline tables") {
  const auto all = run_cli("baseline --data " + kFixture + " --tag all --split full");
  CHECK(all.exit_code == 0);
  CHECK(line_count(all.output) == 6);  // header + overall + four tags
  CHECK(all.output.find("overall") != std::string::npos);
  CHECK(all.output.find("soc") != std::string::npos);

  const auto soc = run_cli("baseline --data " + kFixture + " --tag soc");
  CHECK(soc.exit_code == 0);
  CHECK(line_count(soc.output) == 2);

  const auto json = run_cli("baseline --data " + kFixture + " --tag all --format json");
  const auto parsed = nlohmann::json::parse(json.output);
  REQUIRE(parsed.is_array());
  CHECK(parsed.size() == 5);

  const auto test_side =
      run_cli("baseline --data " + kFixture + " --tag overall --split test");
  CHECK(test_side.exit_code == 0);
}

TEST_CASE("cli: baseline exports the lexicon") {
  const auto path = work_dir() / "lexicon.toml";
  const auto result = run_cli("baseline --export-lexicon " + path.string());
  CHECK(result.exit_code == 0);
  const auto exported = smr::load_lexicon(path.string());
  const auto embedded = smr::default_lexicon();
  for (auto tag : smr::kAllTags) CHECK(exported[tag] == embedded[tag]);
}

TEST_CASE("cli: train writes byte-identical artifacts on rerun") {
  const auto ckpt1 = work_dir() / "m1.ckpt";
  const auto ckpt2 = work_dir() / "m2.ckpt";

  const auto first = run_cli("train --data " + toy_dataset().string() + kTrainFlags +
                             " --out " + ckpt1.string());
  REQUIRE(first.exit_code == 0);
  CHECK(first.output.find("best epoch") != std::string::npos);
  const auto second = run_cli("train --data " + toy_dataset().string() + kTrainFlags +
                              " --out " + ckpt2.string());
  REQUIRE(second.exit_code == 0);

  CHECK(slurp(ckpt1) == slurp(ckpt2));
  CHECK(slurp(ckpt1.string() + ".history.csv") ==
        slurp(ckpt2.string() + ".history.csv"));

  const auto history = slurp(ckpt1.string() + ".history.csv");
  CHECK(history.rfind("epoch,split,", 0) == 0);
  CHECK(line_count(history) == 5);  // header + 2 epochs x 2 splits

  const auto stacked = run_cli("train --data " + toy_dataset().string() + kTrainFlags +
                               " --layers 2 --out " + (work_dir() / "m2l.ckpt").string());
  CHECK(stacked.exit_code == 0);
  const auto two_layer = smr::load_checkpoint((work_dir() / "m2l.ckpt").string());
  CHECK(two_layer.model.num_layers == 2);
}

TEST_CASE("cli: --holdout reports on a clean slice") {
  const auto ckpt = work_dir() / "hold.ckpt";
  const auto result = run_cli("train --data " + toy_dataset().string() + kTrainFlags +
                              " --holdout 0.2 --out " + ckpt.string());
  CHECK(result.exit_code == 0);
  CHECK(result.output.find("holdout (8 sentences)") != std::string::npos);

  const auto all_tasks = run_cli("train --data " + toy_dataset().string() +
                                 kTrainFlags + " --task all --holdout 0.2 --out " +
                                 ckpt.string());
  CHECK(all_tasks.exit_code == 2);
}

TEST_CASE("cli: degenerate task warns, --strict escalates") {
  const auto ckpt = work_dir() / "soc.ckpt";
  const auto relaxed = run_cli("train --data " + toy_dataset().string() + kTrainFlags +
                               " --task soc --out " + ckpt.string());
  CHECK(relaxed.exit_code == 0);
  CHECK(relaxed.output.find("warning") != std::string::npos);

  const auto strict = run_cli("train --data " + toy_dataset().string() + kTrainFlags +
                              " --task soc --strict --out " + ckpt.string());
  CHECK(strict.exit_code == 1);
}

TEST_CASE("cli: predict on datasets and raw text") {
  const auto ckpt = work_dir() / "pred.ckpt";
  REQUIRE(run_cli("train --data " + toy_dataset().string() + kTrainFlags + " --out " +
                  ckpt.string())
              .exit_code == 0);

  const auto preds_path = work_dir() / "preds.csv";
  const auto on_data = run_cli("predict --model " + ckpt.string() + " --input " +
                               toy_dataset().string() + " --out " + preds_path.string());
  REQUIRE(on_data.exit_code == 0);
  const auto preds = slurp(preds_path);
  CHECK(preds.rfind("id,probability\n", 0) == 0);
  CHECK(line_count(preds) == 41);

  const auto raw_path = work_dir() / "raw.txt";
  std::ofstream(raw_path) << "Payout reached households quickly. Goodwill is "
                             "tested for impairment. Benefits were paid.";
  const auto on_text = run_cli("predict --model " + ckpt.string() + " --input " +
                               raw_path.string());
  REQUIRE(on_text.exit_code == 0);
  CHECK(on_text.output.rfind("sentence,probability,material\n", 0) == 0);
  CHECK(line_count(on_text.output) == 4);

  const auto empty_path = work_dir() / "empty.txt";
  std::ofstream(empty_path) << "";
  const auto on_empty = run_cli("predict --model " + ckpt.string() + " --input " +
                                empty_path.string());
  CHECK(on_empty.exit_code == 0);
  CHECK(on_empty.output == "sentence,probability,material\n");
}

TEST_CASE("cli: compare joins baseline, checkpoints, and prediction files") {
  const auto ckpt = work_dir() / "cmp.ckpt";
  const auto preds_path = work_dir() / "cmp_preds.csv";
  REQUIRE(run_cli("train --data " + toy_dataset().string() + kTrainFlags + " --out " +
                  ckpt.string())
              .exit_code == 0);
  REQUIRE(run_cli("predict --model " + ckpt.string() + " --input " +
                  toy_dataset().string() + " --out " + preds_path.string())
              .exit_code == 0);

  const auto table = run_cli("compare --data " + toy_dataset().string() +
                             " --baseline --model " + ckpt.string() + " --preds " +
                             preds_path.string());
  REQUIRE(table.exit_code == 0);
  CHECK(line_count(table.output) == 4);
  CHECK(table.output.find("rule-based (baseline)") != std::string::npos);

  // checkpoint and its own exported probabilities must score identically
  std::istringstream rows(table.output);
  std::string header, model_row, preds_row;
  std::getline(rows, header);
  std::getline(rows, header);  // baseline row
  std::getline(rows, model_row);
  std::getline(rows, preds_row);
  const auto last_metrics = [](const std::string& row) {
    std::istringstream in(row);
    std::vector<std::string> tokens;
    std::string token;
    while (in >> token) tokens.push_back(token);
    REQUIRE(tokens.size() >= 4);
    return std::vector<std::string>(tokens.end() - 4, tokens.end());
  };
  CHECK(last_metrics(model_row) == last_metrics(preds_row));

  const auto mismatch = run_cli("compare --data " + kFixture + " --preds " +
                                preds_path.string());
  CHECK(mismatch.exit_code == 2);
  CHECK(mismatch.output.find("missing") != std::string::npos);
}
