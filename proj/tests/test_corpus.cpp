#include <catch2/catch_amalgamated.hpp>

#include "smr/corpus.hpp"
#include "smr/rng.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <string>

using smr::Corpus;
using smr::CorpusFormat;
using smr::StakeholderTag;

namespace {

Corpus from_csv(const std::string& text) {
  std::istringstream in(text);
  return smr::load_corpus(in, CorpusFormat::Csv);
}

const char* kHeader = "id,text,material,cus,inv,emp,soc,company,year\n";

Corpus tiny_corpus(std::size_t n) {
  Corpus corpus;
  for (std::size_t i = 0; i < n; ++i) {
    smr::LabeledSentence s;
    s.id = "s" + std::to_string(i);
    s.text = "sentence " + std::to_string(i);
    s.labels.material = i % 3 == 0;
    corpus.sentences.push_back(std::move(s));
  }
  return corpus;
}

// Randomized corpus with awkward CSV content (commas, quotes, unicode).
Corpus random_corpus(smr::Xoshiro256ss& rng, std::size_t n) {
  const char* fragments[] = {"plain words",   "with, a comma",
                             "a \"quoted\" bit", "trailing space ",
                             "em\xe2\x80\x94" "dash", "numbers 3.5"};
  Corpus corpus;
  for (std::size_t i = 0; i < n; ++i) {
    smr::LabeledSentence s;
    s.id = "r" + std::to_string(i);
    s.text = std::string(fragments[rng.next_below(6)]) + " #" + std::to_string(i);
    s.labels.material = rng.next_below(2) == 1;
    if (s.labels.material)
      for (auto tag : smr::kAllTags)
        if (rng.next_below(4) == 0) s.labels.tags.add(tag);
    if (rng.next_below(3) == 0) s.company = "Acme, \"Financial\" Co";
    if (rng.next_below(3) == 0) s.year = 2000 + static_cast<int>(rng.next_below(30));
    corpus.sentences.push_back(std::move(s));
  }
  return corpus;
}

}  // namespace

TEST_CASE("load_corpus maps one record per row") {
  const auto corpus = from_csv(std::string(kHeader) +
                               "s1,\"Dividends rose, rewarding holders\",1,0,1,0,0,Acme,2022\n"
                               "s2,plain sentence,0,0,0,0,0,,\n");
  REQUIRE(corpus.size() == 2);
  CHECK(corpus.sentences[0].id == "s1");
  CHECK(corpus.sentences[0].labels.material);
  CHECK(corpus.sentences[0].labels.tags.contains(StakeholderTag::INV));
  CHECK_FALSE(corpus.sentences[0].labels.tags.contains(StakeholderTag::CUS));
  CHECK(corpus.sentences[0].company == "Acme");
  CHECK(corpus.sentences[0].year == 2022);
  CHECK_FALSE(corpus.sentences[1].labels.material);
  CHECK(corpus.sentences[1].company.empty());
  CHECK_FALSE(corpus.sentences[1].year.has_value());
}

TEST_CASE("load_corpus reads the material flag from its own column") {
  // material=1 with no tags is legal: stakeholder-material but unattributed.
  const auto corpus = from_csv(std::string(kHeader) + "s1,text here,1,0,0,0,0,,\n");
  CHECK(corpus.sentences[0].labels.material);
  CHECK(corpus.sentences[0].labels.tags.empty());
}

TEST_CASE("load_corpus schema and validation errors") {
  CHECK_THROWS_WITH(from_csv("id,text,material,cus,inv,emp\ns1,t,1,0,0,0\n"),
                    Catch::Matchers::ContainsSubstring("missing column 'soc'"));
  CHECK_THROWS_WITH(from_csv(std::string(kHeader) +
                             "s1,a,1,0,0,0,0,,\ns1,b,1,0,0,0,0,,\n"),
                    Catch::Matchers::ContainsSubstring("duplicate id 's1'"));
  CHECK_THROWS_WITH(from_csv(std::string(kHeader) + "s1,a,yes,0,0,0,0,,\n"),
                    Catch::Matchers::ContainsSubstring("row 2"));
  // tag set while material=0 violates the label invariant
  CHECK_THROWS_WITH(from_csv(std::string(kHeader) + "s1,a,0,1,0,0,0,,\n"),
                    Catch::Matchers::ContainsSubstring("material=0"));
  CHECK_THROWS_WITH(from_csv(std::string(kHeader) + "s1,   ,1,0,0,0,0,,\n"),
                    Catch::Matchers::ContainsSubstring("empty text"));
  CHECK_THROWS_WITH(from_csv(std::string(kHeader) + "s1,a,1,0,0,0,0,,20x2\n"),
                    Catch::Matchers::ContainsSubstring("year"));
}

TEST_CASE("corpus round-trips through CSV and JSONL") {
  smr::Xoshiro256ss rng(11);
  for (int round = 0; round < 20; ++round) {
    const auto corpus = random_corpus(rng, 1 + rng.next_below(40));
    for (auto format : {CorpusFormat::Csv, CorpusFormat::Jsonl}) {
      std::ostringstream out;
      smr::save_corpus(corpus, out, format);
      std::istringstream in(out.str());
      CHECK(smr::load_corpus(in, format) == corpus);
    }
  }
}

TEST_CASE("split_corpus sizes follow floor(ratio*N + 0.5)") {
  const auto big = tiny_corpus(5962);
  const auto [train, test] = smr::split_corpus(big, {0.8, 1});
  CHECK(train.size() == 4770);
  CHECK(test.size() == 1192);

  const auto [t10, e10] = smr::split_corpus(tiny_corpus(10), {0.8, 99});
  CHECK(t10.size() == 8);
  CHECK(e10.size() == 2);
}

TEST_CASE("split_corpus partitions exactly and deterministically") {
  smr::Xoshiro256ss rng(5);
  for (int round = 0; round < 30; ++round) {
    const auto corpus = tiny_corpus(2 + rng.next_below(200));
    const smr::SplitSpec spec{0.05 + 0.9 * rng.next_double(), rng.next_u64()};
    const auto [train, test] = smr::split_corpus(corpus, spec);

    std::set<std::string> ids;
    for (const auto& s : train.sentences) ids.insert(s.id);
    for (const auto& s : test.sentences) {
      CHECK(ids.insert(s.id).second);  // disjoint
    }
    CHECK(ids.size() == corpus.size());  // union covers everything

    const auto [train2, test2] = smr::split_corpus(corpus, spec);
    CHECK(train2 == train);
    CHECK(test2 == test);
  }
}

TEST_CASE("different seeds give different partitions") {
  const auto corpus = tiny_corpus(50);
  bool any_difference = false;
  const auto [base_train, base_test] = smr::split_corpus(corpus, {0.8, 0});
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    const auto [train, test] = smr::split_corpus(corpus, {0.8, seed});
    if (!(train == base_train)) any_difference = true;
  }
  CHECK(any_difference);
}

TEST_CASE("split_corpus rejects degenerate inputs") {
  CHECK_THROWS(smr::split_corpus(tiny_corpus(1), {0.8, 1}));
  CHECK_THROWS(smr::split_corpus(tiny_corpus(10), {0.0, 1}));
  CHECK_THROWS(smr::split_corpus(tiny_corpus(10), {1.0, 1}));
}

TEST_CASE("label_stats agrees with an independent recount") {
  smr::Xoshiro256ss rng(21);
  const auto corpus = random_corpus(rng, 50);
  const auto stats = smr::label_stats(corpus);

  std::size_t material = 0;
  std::array<std::size_t, 4> per_tag = {0, 0, 0, 0};
  for (const auto& s : corpus.sentences) {
    if (s.labels.material) ++material;
    for (std::size_t t = 0; t < 4; ++t)
      if (s.labels.tags.contains(smr::kAllTags[t])) ++per_tag[t];
  }
  CHECK(stats.material == material);
  CHECK(stats.nonmaterial == corpus.size() - material);
  double share_sum = 0.0;
  for (std::size_t t = 0; t < 4; ++t) {
    CHECK(stats.per_tag[t].positives == per_tag[t]);
    CHECK(stats.per_tag[t].share ==
          static_cast<double>(per_tag[t]) / static_cast<double>(corpus.size()));
    CHECK(stats.per_tag[t].share >= 0.0);
    CHECK(stats.per_tag[t].share <= 1.0);
    share_sum += stats.per_tag[t].share;
  }
  CHECK(share_sum <= 4.0);
}

TEST_CASE("label_stats on a tiny fully tagged corpus") {
  Corpus corpus;
  for (int i = 0; i < 2; ++i) {
    smr::LabeledSentence s;
    s.id = "x" + std::to_string(i);
    s.text = "both tagged";
    s.labels.material = true;
    s.labels.tags.add(StakeholderTag::INV);
    corpus.sentences.push_back(std::move(s));
  }
  const auto stats = smr::label_stats(corpus);
  CHECK(stats.per_tag[static_cast<std::size_t>(StakeholderTag::INV)].positives == 2);
  CHECK(stats.per_tag[static_cast<std::size_t>(StakeholderTag::INV)].share == 1.0);
  CHECK_THROWS(smr::label_stats(Corpus{}));
}

TEST_CASE("bundled fixtures load cleanly") {
  const auto fixture = smr::load_corpus(std::string(SMR_DATA_DIR) + "/fixture_200.csv",
                                        CorpusFormat::Csv);
  CHECK(fixture.size() == 200);
  const auto reference = smr::load_corpus(
      std::string(SMR_DATA_DIR) + "/reference_sentences.csv", CorpusFormat::Csv);
  CHECK(reference.size() == 5962);
}
