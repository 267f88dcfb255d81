#include "chaseforge/pipeline.hpp"

#include <openssl/evp.h>

#include <fstream>
#include <sstream>

#include "json.hpp"

#include "chaseforge/parser.hpp"

namespace chaseforge {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

const char* mode_name(CorpusMode m) { return m == CorpusMode::Chase ? "chase" : "ground"; }

CorpusMode parse_mode(std::string_view name) {
  if (name == "chase") return CorpusMode::Chase;
  if (name == "ground") return CorpusMode::Ground;
  throw UsageError("unknown mode '" + std::string(name) + "' (expected chase or ground)");
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string sha256_hex(std::string_view data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw Error(ExitCode::Usage, "SHA-256 digest failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

void validate_config(const PipelineConfig& c) {
  for (const fs::path* p : {&c.program, &c.data, &c.glossary})
    if (!fs::is_regular_file(*p)) throw UsageError("input file not found: " + p->string());
  for (const auto* p : {&c.lexicon, &c.denylist})
    if (*p && !fs::is_regular_file(**p)) throw UsageError("input file not found: " + (*p)->string());
  if (!(c.threshold >= 0.0 && c.threshold <= 1.0)) throw UsageError("threshold must lie in [0, 1]");
  if (!(c.split >= 0.0 && c.split <= 1.0)) throw UsageError("split must lie in [0, 1]");
  if (c.tasks.empty()) throw UsageError("at least one task is required");
  if (c.out.empty()) throw UsageError("an output directory is required");
}

std::vector<std::string> parse_denylist(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos || line[b] == '#') continue;
    auto e = line.find_last_not_of(" \t\r");
    out.push_back(line.substr(b, e - b + 1));
  }
  return out;
}

void check_glossary_total(const Glossary& glossary, const Program& program, const FactStore& facts) {
  std::set<std::string> used = program.predicates();
  for (const auto& p : facts.predicates()) used.insert(p);
  auto missing = glossary.missing(used);
  if (missing.empty()) return;
  std::string list;
  for (const auto& m : missing) list += (list.empty() ? "" : ", ") + m;
  throw GlossaryError("glossary has no entry for " + list);
}

namespace {

template <typename F>
auto stage(const char* name, F&& f) -> decltype(f()) {
  auto tag = [name](const Error& e) { return std::string(name) + ": " + e.what(); };
  try {
    return f();
  } catch (const ArithmeticError& e) {
    throw ArithmeticError(tag(e));
  } catch (const ReasoningError& e) {
    throw ReasoningError(tag(e));
  } catch (const GlossaryError& e) {
    throw GlossaryError(tag(e));
  } catch (const ParseError& e) {
    throw ParseError(tag(e));
  } catch (const BackendError& e) {
    throw BackendError(tag(e));
  } catch (const QualityError& e) {
    throw QualityError(tag(e));
  } catch (const UsageError& e) {
    throw UsageError(tag(e));
  } catch (const Error& e) {
    throw Error(e.code(), tag(e));
  }
}

}  // namespace

Inputs load_inputs(const PipelineConfig& config) {
  Inputs in;
  std::string program_text = read_file(config.program);
  std::string glossary_text = read_file(config.glossary);
  std::string data_text = read_file(config.data);
  auto tag = [](const fs::path& p, auto&& f) {
    try {
      return f();
    } catch (const Error& e) {
      throw Error(e.code(), p.filename().string() + ":" + e.what());
    }
  };
  in.program = tag(config.program, [&] { return parse_program(program_text); });
  in.facts = tag(config.data, [&] { return parse_facts(data_text); });
  in.glossary = tag(config.glossary, [&] { return parse_glossary(glossary_text); });
  if (config.lexicon) {
    std::string lex = read_file(*config.lexicon);
    in.lexicon = tag(*config.lexicon, [&] { return Lexicon::from_json(lex); });
  }
  if (config.denylist) in.denylist = parse_denylist(read_file(*config.denylist));
  check_glossary_total(in.glossary, in.program, in.facts);
  in.public_text = program_text + "\n" + glossary_text;
  return in;
}

std::unique_ptr<GeneratorBackend> make_backend(const std::string& name, const Program& program,
                                               const Glossary& glossary, const Lexicon& lexicon) {
  if (name == "deterministic") return std::make_unique<DeterministicBackend>(program, glossary, lexicon);
  if (name.rfind("http://", 0) == 0) return std::make_unique<HttpBackend>(name);
  throw UsageError("unknown backend '" + name + "' (expected deterministic or an http:// URL)");
}

CorpusBuild build_chase_corpus(const Chase& chase, const std::vector<VerbalizedStep>& verbalized,
                               const Glossary& glossary, const Lexicon& lexicon, const std::vector<NlpTask>& tasks,
                               GeneratorBackend& backend, std::string_view public_text) {
  CorpusBuild out;
  VerbalizedPlan plan = verbalize_plan(build_logic_plan(chase.program), chase.program, glossary, lexicon);
  std::vector<std::string> fact_predicates;
  for (const auto& p : chase.store.predicates()) {
    auto ids = chase.store.by_predicate(p);
    if (!ids.empty() && chase.store.at(ids.front()).extensional()) fact_predicates.push_back(p);
  }
  BackendBoundary boundary(backend, protected_constants(chase.store, public_text));
  for (NlpTask task : tasks) {
    auto requests = preprocess(plan, task);
    auto facts = preprocess_facts(glossary, fact_predicates, task);
    requests.insert(requests.end(), facts.begin(), facts.end());
    TemplateSet set = generate_templates(requests, boundary);
    MappingResult mapped = map_chase(set, task, chase, verbalized, glossary);
    for (auto& p : mapped.pairs) out.pairs.push_back(std::move(p));
    for (auto& s : mapped.skipped) out.skipped.push_back(std::move(s));
    out.templates.append(std::move(set));
  }
  out.backend_calls = boundary.calls();
  out.transcript = boundary.transcript();
  return out;
}

CorpusBuild build_ground_corpus(const FactStore& facts, const Glossary& glossary, const std::vector<NlpTask>& tasks) {
  CorpusBuild out;
  for (NlpTask task : tasks)
    for (auto& p : generate_ground_corpus(facts, glossary, task)) out.pairs.push_back(std::move(p));
  return out;
}

QualityOutcome run_quality(const std::vector<CorpusPair>& pairs, const QualityContext& ctx, double threshold,
                           std::size_t paraphrases, std::uint64_t seed, double split) {
  QualityOutcome out;
  out.scored = pairs;
  out.reports = check_corpus(pairs, ctx, threshold);
  FilterResult f = filter(pairs, out.reports, threshold);
  out.kept = f.kept.size();
  out.filtered = f.removed.size();
  out.removed = std::move(f.removed);
  std::vector<CorpusPair> pool;
  std::size_t report_index = 0;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (out.reports[i].verdict != Verdict::Kept) continue;
    const CorpusPair& original = f.kept[report_index++];
    pool.push_back(original);
    for (auto& v : paraphrase(original, seed, paraphrases)) {
      QualityReport r = out.reports[i];
      r.verdict = Verdict::ParaphraseAdded;
      out.scored.push_back(v);
      out.reports.push_back(r);
      pool.push_back(std::move(v));
      ++out.paraphrases_added;
    }
  }
  out.final = postprocess(std::move(pool), seed, split);
  return out;
}

std::string write_quality_report(const std::vector<CorpusPair>& pairs, const std::vector<QualityReport>& reports) {
  std::string out;
  for (std::size_t i = 0; i < pairs.size() && i < reports.size(); ++i) {
    const auto& p = pairs[i];
    const auto& r = reports[i];
    json j;
    j["prompt"] = p.prompt;
    j["response"] = p.response;
    j["task"] = task_name(p.task);
    j["rule"] = p.rule;
    j["steps"] = p.steps;
    j["facts"] = p.facts;
    j["template"] = p.template_id;
    j["specificity"] = r.specificity;
    j["plausibility"] = r.plausibility;
    j["bias"] = r.bias;
    j["residual_token"] = r.residual_token;
    j["aggregate"] = r.aggregate;
    j["verdict"] = verdict_name(r.verdict);
    j["reason"] = r.reason;
    out += j.dump() + "\n";
  }
  return out;
}

std::string write_verbalized(const std::vector<VerbalizedStep>& steps) {
  std::string out;
  for (const auto& s : steps) {
    json j;
    j["step"] = s.step_id;
    j["rule"] = s.rule_id;
    j["sentence"] = s.sentence;
    j["contributions"] = s.contributions;
    json b = json::object();
    for (const auto& [k, v] : s.slot_bindings) b[k] = v;
    j["bindings"] = std::move(b);
    out += j.dump() + "\n";
  }
  return out;
}

std::string write_verbalized_plan(const VerbalizedPlan& plan) {
  std::string out;
  for (const auto& n : plan.nodes) {
    json j;
    j["node"] = n.rule_id;
    j["sentence"] = n.sentence;
    j["head"] = n.head_clause;
    std::vector<std::string> succ;
    for (const auto& e : plan.edges)
      if (e.from == n.rule_id) succ.push_back(e.to);
    j["edges_out"] = succ;
    out += j.dump() + "\n";
  }
  return out;
}

namespace {

json input_entry(const fs::path& p) {
  json j;
  j["file"] = p.filename().string();
  j["sha256"] = sha256_hex(read_file(p));
  return j;
}

class OutputDir {
 public:
  explicit OutputDir(fs::path dir) : dir_(std::move(dir)) {
    std::error_code ec;
    created_ = fs::create_directories(dir_, ec);
    if (ec) throw UsageError("cannot create output directory " + dir_.string() + ": " + ec.message());
  }
  ~OutputDir() {
    if (committed_) return;
    std::error_code ec;
    for (const auto& f : files_) fs::remove(f, ec);
    if (created_ && fs::is_empty(dir_, ec)) fs::remove(dir_, ec);
  }
  void write(const std::string& name, const std::string& content) {
    fs::path p = dir_ / name;
    std::ofstream o(p, std::ios::binary | std::ios::trunc);
    if (!o) throw UsageError("cannot write " + p.string());
    files_.push_back(p);
    o << content;
    if (!o) throw UsageError("cannot write " + p.string());
  }
  std::vector<fs::path> commit() {
    committed_ = true;
    return files_;
  }

 private:
  fs::path dir_;
  bool created_ = false;
  bool committed_ = false;
  std::vector<fs::path> files_;
};

}  // namespace

PipelineResult run_pipeline(const PipelineConfig& config, GeneratorBackend* backend) {
  stage("config", [&] { validate_config(config); });
  PipelineResult result;
  Inputs in = stage("parse", [&] { return load_inputs(config); });
  OutputDir out(config.out);

  std::vector<VerbalizedStep> verbalized;
  std::unique_ptr<GeneratorBackend> owned;
  if (config.mode == CorpusMode::Chase) {
    result.chase = stage("reason", [&] { return reason(in.facts, in.program, {config.max_steps}); });
    verbalized = stage("verbalize", [&] { return verbalize_chase(result.chase, in.glossary, in.lexicon); });
    LogicPlan plan = build_logic_plan(in.program);
    out.write("chase.jsonl", write_chase_dump(result.chase));
    out.write("verbalized.jsonl", write_verbalized(verbalized));
    out.write("plan.dot", plan_to_dot(plan, in.program));
    if (!backend) {
      owned = stage("backend", [&] { return make_backend(config.backend, in.program, in.glossary, in.lexicon); });
      backend = owned.get();
    }
    result.corpus = stage("templates", [&] {
      return build_chase_corpus(result.chase, verbalized, in.glossary, in.lexicon, config.tasks, *backend,
                                in.public_text);
    });
    out.write("templates.jsonl", write_templates(result.corpus.templates));
  } else {
    result.chase.program = in.program;
    result.chase.store = in.facts;
    result.corpus = stage("ground", [&] { return build_ground_corpus(in.facts, in.glossary, config.tasks); });
  }

  result.quality = stage("quality", [&] {
    QualityContext ctx = QualityContext::from_chase(result.chase, verbalized, in.glossary, in.denylist);
    return run_quality(result.corpus.pairs, ctx, config.threshold, config.paraphrases, config.seed, config.split);
  });
  const FinalCorpus& fin = result.quality.final;
  out.write("corpus_train.jsonl", write_corpus(fin.train));
  out.write("corpus_val.jsonl", write_corpus(fin.validation));
  out.write("quality.jsonl", write_quality_report(result.quality.scored, result.quality.reports));

  json m;
  m["model"] = config.model;
  json inputs;
  inputs["program"] = input_entry(config.program);
  inputs["data"] = input_entry(config.data);
  inputs["glossary"] = input_entry(config.glossary);
  if (config.lexicon) inputs["lexicon"] = input_entry(*config.lexicon);
  if (config.denylist) inputs["denylist"] = input_entry(*config.denylist);
  m["inputs"] = std::move(inputs);
  json cfg;
  std::vector<std::string> tasks;
  for (NlpTask t : config.tasks) tasks.push_back(task_name(t));
  cfg["tasks"] = tasks;
  cfg["mode"] = mode_name(config.mode);
  cfg["backend"] = backend ? backend->name() : config.backend;
  cfg["threshold"] = config.threshold;
  cfg["paraphrases"] = config.paraphrases;
  cfg["seed"] = config.seed;
  cfg["split"] = config.split;
  cfg["max_steps"] = config.max_steps;
  m["config"] = std::move(cfg);

  json counts;
  std::size_t extensional = 0;
  for (const auto& f : result.chase.store.facts()) extensional += f.extensional();
  counts["facts"] = extensional;
  counts["derived_facts"] = result.chase.store.size() - extensional;
  counts["chase_steps"] = result.chase.steps.size();
  counts["templates"] = result.corpus.templates.templates.size();
  counts["templates_dropped"] = result.corpus.templates.dropped.size();
  counts["mapped_pairs"] = result.corpus.pairs.size();
  counts["mapping_skipped"] = result.corpus.skipped.size();
  counts["kept"] = result.quality.kept;
  counts["filtered"] = result.quality.filtered;
  counts["paraphrases_added"] = result.quality.paraphrases_added;
  counts["duplicates_removed"] = fin.duplicates_removed;
  counts["train"] = fin.train.size();
  counts["validation"] = fin.validation.size();
  std::map<std::string, std::size_t> per_task, per_rule;
  for (const auto* part : {&fin.train, &fin.validation})
    for (const auto& p : *part) {
      ++per_task[task_name(p.task)];
      ++per_rule[p.rule];
    }
  counts["per_task"] = per_task;
  counts["per_rule"] = per_rule;
  m["counts"] = std::move(counts);
  m["backend_calls"] = result.corpus.backend_calls;
  result.manifest = m.dump(2) + "\n";
  out.write("manifest.json", result.manifest);
  result.files = out.commit();
  return result;
}

}  // namespace chaseforge
