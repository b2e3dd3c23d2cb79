// Generates the bundled synthetic datasets under data/. The reference set
// mirrors the reference label distribution of an expert-annotated 10-K corpus
// (5,962 sentences; 618/2024/197/21 per-stakeholder positives) and is
// engineered so the keyword baseline's overall confusion lands on the
// reference 0.781/0.677/0.837/0.749 row at three decimals. The 200-sentence
// fixture is a scaled-down slice with every confusion cell populated.
//
// Usage:
//   gen_dataset --out-dir data/            regenerate both files
//   gen_dataset --verify data/             byte-compare a regeneration

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "smr/smr.hpp"

namespace {

using smr::StakeholderTag;
using smr::TagSet;

constexpr std::uint64_t kGeneratorSeed = 20230814;

struct Pools {
  std::vector<std::string> prefixes = {
      "During the year",
      "In the fourth quarter",
      "Under the revised agreement",
      "Throughout the period",
      "Following the acquisition",
      "In response to market conditions",
      "Despite elevated claim activity",
      "Consistent with prior periods",
      "After the annual review",
      "Across all operating regions"};
  std::vector<std::string> suffixes = {
      "",
      " in the fourth quarter",
      " across the segment",
      " under the revised policy",
      " as disclosed previously",
      " for the year then ended",
      " in most jurisdictions",
      " on a consolidated basis"};
  std::vector<std::string> cus = {"customers", "customer accounts", "clients",
                                  "client households", "consumers"};
  std::vector<std::string> cus_syn = {"policyholders", "the insured",
                                      "beneficiaries",  "depositors",
                                      "borrowers",      "cardholders"};
  std::vector<std::string> inv = {"shareholders", "stockholders", "investors"};
  std::vector<std::string> inv_syn = {"bondholders", "creditors",
                                      "holders of record", "debtholders"};
  std::vector<std::string> emp = {"employees", "workers", "managers"};
  std::vector<std::string> emp_syn = {"staff", "personnel", "the workforce",
                                      "associates", "colleagues"};
  std::vector<std::string> companies = {
      "Aldrich Insurance Group",   "Meridian Capital Holdings",
      "Lakeshore Mutual",          "Granite Trust Bancorp",
      "Pacific Crest Financial",   "Harborview Assurance",
      "Summit Plains Bancshares",  "Bluefield Reinsurance",
      "Cedar Hollow Savings",      "Northgate Annuity Partners",
      "Silver Birch Underwriters", "Keystone Delta Lending"};
};

struct CellSpec {
  bool material;
  TagSet tags;     // labels
  TagSet matches;  // what the default lexicon must find
  std::vector<std::string> templates;
};

std::string pick(smr::Xoshiro256ss& rng, const std::vector<std::string>& pool) {
  return pool[static_cast<std::size_t>(rng.next_below(pool.size()))];
}

TagSet tags_of(std::initializer_list<StakeholderTag> list) {
  TagSet set;
  for (auto tag : list) set.add(tag);
  return set;
}

// Expands {cus} {cussyn} {inv} {invsyn} {emp} {empsyn} {note} {pct} {year}.
std::string expand(const std::string& tmpl, const Pools& pools,
                   smr::Xoshiro256ss& rng) {
  std::string out;
  std::size_t i = 0;
  while (i < tmpl.size()) {
    if (tmpl[i] != '{') {
      out.push_back(tmpl[i++]);
      continue;
    }
    const auto close = tmpl.find('}', i);
    const std::string slot = tmpl.substr(i + 1, close - i - 1);
    if (slot == "cus") out += pick(rng, pools.cus);
    else if (slot == "cussyn") out += pick(rng, pools.cus_syn);
    else if (slot == "inv") out += pick(rng, pools.inv);
    else if (slot == "invsyn") out += pick(rng, pools.inv_syn);
    else if (slot == "emp") out += pick(rng, pools.emp);
    else if (slot == "empsyn") out += pick(rng, pools.emp_syn);
    else if (slot == "note") out += std::to_string(1 + rng.next_below(18));
    else if (slot == "pct")
      out += std::to_string(1 + rng.next_below(9)) + "." +
             std::to_string(rng.next_below(10));
    else if (slot == "year") out += std::to_string(2016 + rng.next_below(7));
    else out += slot;
    i = close + 1;
  }
  return out;
}

std::string compose(const CellSpec& cell, const Pools& pools,
                    smr::Xoshiro256ss& rng) {
  std::string core = expand(pick(rng, cell.templates), pools, rng);
  std::string sentence;
  if (rng.next_below(10) < 4) sentence = pick(rng, pools.prefixes) + ", ";
  sentence += core;
  if (rng.next_below(10) < 5) sentence += pick(rng, pools.suffixes);
  sentence += ".";
  sentence[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(sentence[0])));
  return sentence;
}

std::vector<CellSpec> cell_catalog() {
  const auto CUS = StakeholderTag::CUS;
  const auto INV = StakeholderTag::INV;
  const auto EMP = StakeholderTag::EMP;
  const auto SOC = StakeholderTag::SOC;
  std::vector<CellSpec> cells;

  // A: material to customers and investors, keyword hits for both.
  cells.push_back({true, tags_of({CUS, INV}), tags_of({CUS, INV}),
                   {"lower fees for {cus} were offset by stronger revenue from new accounts",
                    "the company balanced affordable pricing for {cus} with steady returns for {inv}",
                    "serving {cus} well sustained the earnings that reward {inv}",
                    "rate relief for {cus} was funded without reducing the payout to {inv}"}});
  // B: customer-material, with an incidental investor keyword (baseline FP on INV).
  cells.push_back({true, tags_of({CUS}), tags_of({CUS, INV}),
                   {"{cus} benefited from lower financing costs on new policies",
                    "the card program gives {cus} rebates financed from network fees",
                    "{cus} received premium credits as financing charges declined"}});
  // C: customer-material, customer keyword.
  cells.push_back({true, tags_of({CUS}), tags_of({CUS}),
                   {"the company pays cash benefits to its {cus} promptly for eligible claims",
                    "the firm lowered deposit fees so that {cus} keep more of their savings",
                    "new digital tools help {cus} resolve billing questions quickly",
                    "the bank extended branch hours to serve {cus} in rural areas",
                    "coverage enhancements protect {cus} against communicable disease losses",
                    "the insurer reimburses {cus} fairly and promptly when a covered event occurs",
                    "premium refunds were delivered to {cus} within ten business days"}});
  // D: investor-material, investor keyword.
  cells.push_back({true, tags_of({INV}), tags_of({INV}),
                   {"quarterly dividends paid to {inv} increased for the tenth consecutive year",
                    "the board approved a buyback that delivers capital to {inv}",
                    "net income available to common {inv} rose this year",
                    "revenue growth strengthened the payout available to {inv}",
                    "earnings per share improved, supporting distributions to {inv}",
                    "profit margins widened, lifting the value delivered to {inv}",
                    "return on equity improved, rewarding {inv} for their patience",
                    "return on assets improved while the cost base declined, benefiting {inv}"}});
  // E: employee-material, employee keyword.
  cells.push_back({true, tags_of({EMP}), tags_of({EMP}),
                   {"the company raised minimum pay for hourly {emp} across all regions",
                    "expanded parental leave supports {emp} and their families",
                    "tuition assistance helps {emp} build new skills",
                    "safety programs reduced injuries among warehouse {emp}",
                    "retention bonuses were paid to {emp} who completed certification"}});
  // F: community/environment-material, keyword hit.
  cells.push_back({true, tags_of({SOC}), tags_of({SOC}),
                   {"the foundation funded broadband access for rural communities",
                    "grants advanced the firm's social responsibility commitments",
                    "the company reduced emissions to protect the natural environment",
                    "ecological restoration projects were funded along the coastline",
                    "the digital academy offers free coding classes to its growing user community"}});
  // G: customer-material but phrased with uncaptured synonyms (baseline miss).
  cells.push_back({true, tags_of({CUS}), TagSet{},
                   {"the company pays cash benefits to {cussyn} promptly for eligible claims",
                    "when a policyholder gets sick or hurt, cash benefits are paid fairly and promptly",
                    "premium credits were issued to {cussyn} after the rate review",
                    "the bank waived overdraft fees for {cussyn} during the disruption",
                    "claim decisions for {cussyn} are now resolved within five days"}});
  // H: investor-material, synonym phrasing (baseline miss).
  cells.push_back({true, tags_of({INV}), TagSet{},
                   {"the special payout delivered additional value to {invsyn}",
                    "capital distributions and discretionary bonus payments remained unrestricted",
                    "per share payouts grew, benefiting long term holders",
                    "the distribution to {invsyn} was funded without new borrowing",
                    "book value per share compounded steadily, rewarding the patient owner base"}});
  // I: employee-material, synonym phrasing (baseline miss).
  cells.push_back({true, tags_of({EMP}), TagSet{},
                   {"the company raised minimum pay for hourly {empsyn} across all regions",
                    "wellbeing stipends were extended to all {empsyn}",
                    "the firm invested in upskilling its {empsyn} this year",
                    "hazard pay was provided to frontline {empsyn} during the disruption"}});
  // J: community-material, synonym phrasing (baseline miss).
  cells.push_back({true, tags_of({SOC}), TagSet{},
                   {"the foundation funded broadband access for rural neighborhoods",
                    "charitable donations rebuilt housing after the flood",
                    "emissions were reduced to protect local watersheds",
                    "the company planted a million trees along the coastline"}});
  // K: material but with no clear stakeholder identity (positive overall,
  // negative for every tag).
  cells.push_back({true, TagSet{}, TagSet{},
                   {"cash benefits are paid fairly and promptly for eligible claims",
                    "the program lowered out of pocket costs for participants",
                    "assistance payments reached affected households within days",
                    "the initiative improved wellbeing across the region it serves"}});
  // L: non-material, customer keyword (baseline false positive).
  cells.push_back({false, TagSet{}, tags_of({CUS}),
                   {"consumer price index movements affected general market conditions",
                    "customer list intangibles are amortized over ten years under the standard",
                    "the client relationship intangible is tested annually for impairment"}});
  // M: non-material, investor keyword (baseline false positive).
  cells.push_back({false, TagSet{}, tags_of({INV}),
                   {"more graduates are preparing for a job in the financial industry",
                    "revenue recognition policies are described in note {note}",
                    "the earnings release calendar is posted each quarter",
                    "financial statement schedules are filed as exhibits",
                    "investment grade rating definitions appear in the glossary",
                    "deferred profit liability balances are disclosed in note {note}"}});
  // N: non-material, employee keyword (baseline false positive).
  cells.push_back({false, TagSet{}, tags_of({EMP}),
                   {"the manager of the index fund is unaffiliated with the corporation",
                    "employee benefit plan accounting follows the applicable standard",
                    "legacy worker compensation claims are administered by a third party trustee"}});
  // O: non-material, community keyword (baseline false positive).
  cells.push_back({false, TagSet{}, tags_of({SOC}),
                   {"community colleges in the region expanded their course offerings",
                    "the community reinvestment act examination schedule is set by the agency"}});
  // P: non-material boilerplate, no keyword.
  cells.push_back({false, TagSet{}, TagSet{},
                   {"these forward looking statements involve certain risks and uncertainties",
                    "when public quotations are unavailable, carrying amounts approximate fair values",
                    "the corporation maintains a minimum supplementary leverage ratio of {pct} percent plus a buffer",
                    "amounts are reflected in level 2 of the fair value hierarchy",
                    "the exclusion applies to communicable disease coverage written in {year}",
                    "actual results could differ materially from those estimates",
                    "this discussion should be read together with the audited statements",
                    "goodwill is tested for impairment at the reporting unit level",
                    "deferred tax assets are recognized to the extent realization is more likely than not",
                    "the corporation operates in a single reportable segment",
                    "interest rate swaps are designated as cash flow hedges",
                    "the allowance for credit losses is estimated using historical loss experience",
                    "lease liabilities are measured at the present value of remaining payments",
                    "no events occurred after the balance sheet date requiring disclosure",
                    "approximately {pct} percent of the portfolio matures after {year}",
                    "the carrying amount of the hedged item is adjusted through interest expense"}});
  return cells;
}

// Cell order above: A B C D E F G H I J K L M N O P.
const std::vector<std::size_t> kReferenceCounts = {
    173, 32, 341, 1268, 124, 6, 72, 583, 73, 15, 184, 38, 335, 5, 1, 2712};
const std::vector<std::size_t> kFixtureCounts = {
    5, 3, 15, 30, 8, 4, 5, 15, 5, 3, 8, 6, 12, 3, 2, 76};

smr::Corpus generate(const std::vector<std::size_t>& counts,
                     const std::string& id_prefix, int id_width,
                     std::uint64_t seed) {
  const auto cells = cell_catalog();
  const auto pools = Pools{};
  const auto lexicon = smr::default_lexicon();
  smr::Xoshiro256ss rng(seed);

  smr::Corpus corpus;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    for (std::size_t k = 0; k < counts[c]; ++k) {
      smr::LabeledSentence s;
      s.text = compose(cells[c], pools, rng);
      s.labels.material = cells[c].material;
      s.labels.tags = cells[c].tags;
      if (rng.next_below(100) < 92) {
        s.company = pick(rng, pools.companies);
        s.year = 2022;
      }
      // The cell contract is load-bearing: every sentence must match exactly
      // the tags its cell promises, or the engineered confusion drifts.
      if (smr::match_tags(lexicon, s.text) != cells[c].matches) {
        std::cerr << "cell " << c << " produced a bad sentence: " << s.text << "\n";
        std::exit(1);
      }
      corpus.sentences.push_back(std::move(s));
    }
  }

  smr::seeded_shuffle(corpus.sentences, rng);
  for (std::size_t i = 0; i < corpus.sentences.size(); ++i) {
    std::ostringstream id;
    id << id_prefix << std::setw(id_width) << std::setfill('0') << i + 1;
    corpus.sentences[i].id = id.str();
  }
  return corpus;
}

void check_reference_targets(const smr::Corpus& corpus) {
  const auto fail = [](const std::string& what) {
    std::cerr << "reference dataset target violated: " << what << "\n";
    std::exit(1);
  };
  const auto stats = smr::label_stats(corpus);
  const std::array<std::size_t, 4> expected_positives = {618, 2024, 197, 21};
  for (std::size_t t = 0; t < 4; ++t)
    if (stats.per_tag[t].positives != expected_positives[t])
      fail("per-tag positives");
  if (stats.material != 2871) fail("material count");

  const auto overall = smr::evaluate_lexicon(smr::default_lexicon(), corpus);
  const smr::ConfusionCounts expected{.tp = 1944, .fp = 379, .tn = 2712,
                                      .fn = 927};
  if (!(overall.counts == expected)) fail("overall baseline confusion");
}

std::string render(const smr::Corpus& corpus) {
  std::ostringstream out;
  smr::save_corpus(corpus, out, smr::CorpusFormat::Csv);
  return out.str();
}

}  // namespace

int main(int argc, char** argv) {
  std::string out_dir, verify_dir;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--out-dir" && i + 1 < argc) out_dir = argv[++i];
    else if (arg == "--verify" && i + 1 < argc) verify_dir = argv[++i];
    else {
      std::cerr << "usage: gen_dataset (--out-dir DIR | --verify DIR)\n";
      return 2;
    }
  }
  if (out_dir.empty() == verify_dir.empty()) {
    std::cerr << "usage: gen_dataset (--out-dir DIR | --verify DIR)\n";
    return 2;
  }

  auto reference = generate(kReferenceCounts, "s", 4, kGeneratorSeed);
  check_reference_targets(reference);
  auto fixture = generate(kFixtureCounts, "f", 3, kGeneratorSeed + 1);

  const std::vector<std::pair<std::string, std::string>> files = {
      {"reference_sentences.csv", render(reference)},
      {"fixture_200.csv", render(fixture)}};

  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    for (const auto& [name, content] : files) {
      const auto path = std::filesystem::path(out_dir) / name;
      std::ofstream out(path, std::ios::binary);
      out << content;
      std::cout << "wrote " << path.string() << " (" << content.size()
                << " bytes)\n";
    }
    return 0;
  }

  for (const auto& [name, content] : files) {
    const auto path = std::filesystem::path(verify_dir) / name;
    std::ifstream in(path, std::ios::binary);
    std::stringstream existing;
    existing << in.rdbuf();
    if (!in || existing.str() != content) {
      std::cerr << "MISMATCH: " << path.string()
                << " differs from a fresh regeneration\n";
      return 1;
    }
    std::cout << "ok: " << path.string() << " matches regeneration\n";
  }
  return 0;
}
