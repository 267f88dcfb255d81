// Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any failure.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "chaseforge/error.hpp"
#include "chaseforge/pipeline.hpp"
#include "chaseforge/text_scan.hpp"
#include "support.hpp"

namespace cf = chaseforge;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

/// Counts every expand() that reaches the wrapped backend.
class CountingBackend : public cf::GeneratorBackend {
 public:
  explicit CountingBackend(cf::GeneratorBackend& inner) : inner_(inner) {}
  std::vector<cf::GeneratedPair> expand(const cf::GenerationRequest& r) override {
    ++count;
    return inner_.expand(r);
  }
  std::string name() const override { return "counting"; }
  std::size_t count = 0;

 private:
  cf::GeneratorBackend& inner_;
};

cf::FactStore extensional_of(const cf::Chase& c) {
  cf::FactStore s;
  for (const auto& f : c.store.facts())
    if (f.extensional()) s.insert(f.atom);
  return s;
}

bool replays(const cf::Chase& c) {
  return cf::validate_chase(cf::to_dump(c), c.program, extensional_of(c)).ok;
}

cf::PipelineConfig trading_config(const fs::path& out) {
  cf::PipelineConfig c;
  c.program = testsupport::trading("program.vada");
  c.data = testsupport::trading("data.facts");
  c.glossary = testsupport::trading("glossary.gloss");
  c.lexicon = testsupport::trading("lexicon.json");
  c.out = out;
  return c;
}

const std::vector<cf::NlpTask> kQaExplanation = {cf::NlpTask::QuestionAnswering, cf::NlpTask::Explanation};

// Shared between criteria.
testsupport::Reference ref;
cf::Chase golden;
std::vector<cf::Chase> lifted_chases;
std::vector<std::vector<std::string>> transcripts;
std::vector<cf::FactStore> lifted_data;
std::vector<cf::Chase> oracle_chases;

Outcome c1() {
  auto t0 = Clock::now();
  golden = cf::reason(ref.facts, ref.program);
  double took = seconds_since(t0);
  std::set<std::string> got, want = {
      "Open(\"EGTech\",0.3,1)",        "Open(\"IEComp\",0.5,1)",          "Price(124,1)",
      "Price(147,9)",                  "Close(\"EGTech\",9)",             "MarketClosed(5)",
      "Accepted(\"EGTech\",0.3,1)",    "Accepted(\"IEComp\",0.5,1)",      "Position(\"EGTech\",0.3,37.2,1)",
      "Position(\"IEComp\",0.5,62,1)", "Return(\"EGTech\",6.9)"};
  for (const auto& f : golden.store.facts()) got.insert(cf::to_source(f.atom));
  return {got == want && took < 1.0, std::to_string(got.size()) + " facts"};
}

Outcome c2() {
  auto v = cf::verbalize_chase(golden, ref.glossary);
  const std::string want =
      "Since the trader EGTech at time 1 sends an order to open a position of size 0.3, and it is not true that 1 "
      "is a time when the market is closed, then the order of size 0.3 by EGTech is accepted at time 1.";
  bool ok = !v.empty() && v[0].rule_id == "r1" && v[0].sentence == want;
  return {ok, ok ? "exact match" : "got: " + (v.empty() ? std::string("<none>") : v[0].sentence)};
}

Outcome c3() {
  auto t0 = Clock::now();
  cf::DeterministicBackend det(ref.program, ref.glossary);
  std::vector<std::size_t> calls, pairs;
  std::vector<std::size_t> sizes;
  for (std::size_t n : {std::size_t{0}, std::size_t{6000}}) {
    cf::FactStore data = n == 0 ? ref.facts : cf::parse_facts(testsupport::synthetic_trading_facts(n));
    auto chase = cf::reason(data, ref.program);
    CountingBackend counting(det);
    auto build = cf::build_chase_corpus(chase, cf::verbalize_chase(chase, ref.glossary), ref.glossary, {},
                                        {std::begin(cf::kAllTasks), std::end(cf::kAllTasks)}, counting,
                                        ref.public_text);
    sizes.push_back(data.size());
    calls.push_back(counting.count);
    pairs.push_back(build.pairs.size());
    transcripts.push_back(build.transcript);
    lifted_data.push_back(data);
    lifted_chases.push_back(std::move(chase));
  }
  double took = seconds_since(t0);
  bool ok = sizes[1] == 6000 && calls[0] == calls[1] && pairs[1] > pairs[0] && took < 30.0;
  return {ok, "|D|=" + std::to_string(sizes[0]) + "/" + std::to_string(sizes[1]) + " calls=" +
                  std::to_string(calls[0]) + "/" + std::to_string(calls[1]) + " pairs=" + std::to_string(pairs[0]) +
                  "/" + std::to_string(pairs[1])};
}

Outcome c4() {
  std::size_t hits = 0, payloads = 0;
  std::string example;
  for (std::size_t i = 0; i < transcripts.size(); ++i) {
    std::set<std::string> constants;
    for (const auto& f : lifted_data[i].facts())
      for (const auto& v : f.atom.args) constants.insert(v.to_text());
    for (const auto& payload : transcripts[i]) {
      ++payloads;
      std::string text = cf::mask_placeholders(nlohmann::json::parse(payload).at("text").get<std::string>());
      for (const auto& c : constants)
        if (text.find(c) != std::string::npos) {
          ++hits;
          if (example.empty()) example = " e.g. '" + c + "'";
        }
    }
  }
  return {hits == 0 && payloads > 0, std::to_string(payloads) + " payloads, " + std::to_string(hits) + " hits" + example};
}

Outcome c5() {
  auto t0 = Clock::now();
  std::mt19937_64 rng(5);
  std::size_t agree = 0, total = 0;
  while (total < 200) {
    auto rc = testsupport::random_case(rng);
    cf::Program p;
    cf::FactStore facts;
    try {
      p = cf::parse_program(rc.program);
      facts = cf::parse_facts(rc.facts);
      auto chase = cf::reason(facts, p);
      ++total;
      std::set<cf::GroundAtom> got;
      for (const auto& f : chase.store.facts()) got.insert(f.atom);
      if (got == testsupport::naive_fixpoint(p, facts)) ++agree;
      oracle_chases.push_back(std::move(chase));
    } catch (const cf::ParseError&) {
    } catch (const cf::ReasoningError&) {
      // a predicate used with two arities; not a valid case
    }
  }
  double took = seconds_since(t0);
  return {agree == total && took < 60.0, std::to_string(agree) + "/" + std::to_string(total) + " programs agree"};
}

Outcome c6() {
  std::size_t ok = 0, total = 0;
  auto check = [&](const cf::Chase& c) {
    ++total;
    if (replays(c)) ++ok;
  };
  check(golden);
  for (const auto& c : lifted_chases) check(c);
  for (const auto& c : oracle_chases) check(c);

  auto dump = cf::to_dump(golden);
  dump.back().derived.args.back() = cf::Value::number(*cf::Decimal::parse("7.0"));
  bool tamper_caught = !cf::validate_chase(dump, golden.program, extensional_of(golden)).ok;
  return {ok == total && tamper_caught,
          std::to_string(ok) + "/" + std::to_string(total) + " replay, tamper " + (tamper_caught ? "caught" : "missed")};
}

Outcome c7() {
  auto t0 = Clock::now();
  fs::path base = fs::temp_directory_path() / "chaseforge_acceptance_c7";
  fs::remove_all(base);
  auto ground_cfg = trading_config(base / "ground");
  ground_cfg.mode = cf::CorpusMode::Ground;
  auto ground = cf::run_pipeline(ground_cfg);
  auto chase = cf::run_pipeline(trading_config(base / "chase"));
  fs::remove_all(base);

  // phrases of the derived predicates' sentences
  const std::vector<std::string> derived_phrases = {"is accepted", "accepted", "holds a position", "gets returns",
                                                    "returns of", "notional"};
  std::size_t leaks = 0;
  auto all = [](const cf::FinalCorpus& f) {
    auto v = f.train;
    v.insert(v.end(), f.validation.begin(), f.validation.end());
    return v;
  };
  auto ground_pairs = all(ground.quality.final);
  for (const auto& p : ground_pairs)
    for (const auto& w : derived_phrases)
      if (p.response.find(w) != std::string::npos || !cf::is_fact_node(p.rule)) ++leaks;

  auto chase_pairs = all(chase.quality.final);
  std::string missing;
  for (const auto& s : chase.chase.steps) {
    const auto& atom = chase.chase.store.at(s.derived_fact_id).atom;
    if (atom.args[0] != cf::Value::string("EGTech")) continue;
    for (auto task : kQaExplanation) {
      bool found = false;
      for (const auto& p : chase_pairs)
        if (p.task == task && p.steps == std::vector<cf::StepId>{s.step_id}) found = true;
      if (!found) missing += " " + atom.predicate + "/" + cf::task_name(task);
    }
  }
  const std::string rule1 =
      "Since the trader EGTech at time 1 sends an order to open a position of size 0.3, and it is not true that 1 "
      "is a time when the market is closed, then the order of size 0.3 by EGTech is accepted at time 1.";
  bool rule1_explained = false;
  for (const auto& p : chase_pairs)
    if (p.task == cf::NlpTask::Explanation && p.rule == "r1" && p.response == rule1) rule1_explained = true;
  if (!rule1_explained) missing += " r1-explanation";
  double took = seconds_since(t0);
  bool ok = !ground_pairs.empty() && leaks == 0 && missing.empty() && took < 5.0;
  return {ok, "ground " + std::to_string(ground_pairs.size()) + " pairs/" + std::to_string(leaks) + " leaks, chase " +
                  std::to_string(chase_pairs.size()) + " pairs" + (missing.empty() ? "" : ", missing:" + missing)};
}

Outcome c8() {
  cf::DeterministicBackend det(ref.program, ref.glossary);
  auto verbalized = cf::verbalize_chase(golden, ref.glossary);
  auto corpus = cf::build_chase_corpus(golden, verbalized, ref.glossary, {}, kQaExplanation, det, ref.public_text).pairs;
  auto ctx = cf::QualityContext::from_chase(golden, verbalized, ref.glossary);

  auto injected = corpus;
  cf::CorpusPair bad;
  bad.prompt = "Which trader gets returns of 6.9?";
  bad.response = "the trader \xE2\x9F\xA6r3.x\xE2\x9F\xA7";
  bad.task = cf::NlpTask::QuestionAnswering;
  bad.rule = "r3";
  bad.template_id = "r3/qa/0";
  injected.push_back(bad);
  auto reports = cf::check_corpus(injected, ctx, 0.5);
  bool zero = reports.back().aggregate == 0.0;
  auto kept = cf::filter(injected, reports, 0.5).kept;
  bool removed = true;
  for (const auto& p : kept)
    if (p.response == bad.response) removed = false;

  auto base_reports = cf::check_corpus(corpus, ctx, 0.5);
  std::set<std::string> previous;
  bool monotone = true, first = true;
  std::string sizes;
  for (double t : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    std::set<std::string> now;
    for (const auto& p : cf::filter(corpus, base_reports, t).kept) now.insert(cf::to_json_line(p));
    if (!first && !std::includes(previous.begin(), previous.end(), now.begin(), now.end())) monotone = false;
    sizes += (first ? "" : ",") + std::to_string(now.size());
    previous = std::move(now);
    first = false;
  }
  return {zero && removed && monotone, std::string("residual score ") + (zero ? "0" : "non-zero") +
                                           (removed ? ", removed" : ", kept") + "; kept per threshold " + sizes};
}

Outcome c9() {
  fs::path a = fs::temp_directory_path() / "chaseforge_acceptance_c9a";
  fs::path b = fs::temp_directory_path() / "chaseforge_acceptance_c9b";
  fs::remove_all(a);
  fs::remove_all(b);
  cf::run_pipeline(trading_config(a));
  cf::run_pipeline(trading_config(b));
  std::string differ;
  for (const char* f : {"corpus_train.jsonl", "corpus_val.jsonl", "manifest.json", "quality.jsonl"})
    if (testsupport::slurp(a / f) != testsupport::slurp(b / f)) differ += std::string(" ") + f;
  fs::remove_all(a);
  fs::remove_all(b);
  return {differ.empty(), differ.empty() ? "corpus, manifest and quality report identical" : "differ:" + differ};
}

}  // namespace

int main() {
  ref = testsupport::load_reference();
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"running-example chase", c1}, {"verbalization golden", c2}, {"lifting invariance", c3},
      {"data protection", c4},       {"oracle equivalence", c5},   {"replay soundness", c6},
      {"ground/chase ablation", c7}, {"quality stage", c8},        {"end-to-end determinism", c9}};
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    auto t0 = Clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("criterion %zu %s: %s (%s, %.3f s)\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first,
                o.detail.c_str(), seconds_since(t0));
  }
  std::fflush(stdout);
  return failures == 0 ? 0 : 1;
}
