// Command-line front end: one subcommand per pipeline stage plus `run`.

#include <fstream>
#include <iostream>

#include "CLI11.hpp"

#include "chaseforge/parser.hpp"
#include "chaseforge/pipeline.hpp"

namespace cf = chaseforge;
namespace fs = std::filesystem;

namespace {

struct Options {
  std::string program, data, glossary, lexicon, denylist, chase_dump, corpus, out, emit_plan, templates;
  std::string tasks = "qa,explanation";
  std::string mode = "chase";
  std::string backend = "deterministic";
  std::string model = "unspecified";
  double threshold = 0.5;
  std::size_t paraphrases = 1;
  std::uint64_t seed = 42;
  double split = 0.9;
  std::size_t max_steps = 10'000;
};

void emit(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream o(path, std::ios::binary | std::ios::trunc);
  if (!o) throw cf::UsageError("cannot write " + path);
  o << content;
}

cf::Program load_program(const Options& o) { return cf::parse_program(cf::read_file(o.program)); }
cf::FactStore load_facts(const Options& o) { return cf::parse_facts(cf::read_file(o.data)); }
cf::Glossary load_glossary(const Options& o) { return cf::parse_glossary(cf::read_file(o.glossary)); }
cf::Lexicon load_lexicon(const Options& o) {
  return o.lexicon.empty() ? cf::Lexicon{} : cf::Lexicon::from_json(cf::read_file(o.lexicon));
}

/// The chase from a dump when one is given, otherwise computed afresh.
cf::Chase obtain_chase(const Options& o, const cf::Program& program, const cf::FactStore& facts) {
  if (!o.chase_dump.empty())
    return cf::chase_from_dump(cf::read_chase_dump(cf::read_file(o.chase_dump)), program, facts);
  return cf::reason(facts, program, {o.max_steps});
}

cf::PipelineConfig to_config(const Options& o) {
  cf::PipelineConfig c;
  c.program = o.program;
  c.data = o.data;
  c.glossary = o.glossary;
  if (!o.lexicon.empty()) c.lexicon = o.lexicon;
  if (!o.denylist.empty()) c.denylist = o.denylist;
  c.tasks = cf::parse_task_list(o.tasks);
  c.mode = cf::parse_mode(o.mode);
  c.backend = o.backend;
  c.threshold = o.threshold;
  c.paraphrases = o.paraphrases;
  c.seed = o.seed;
  c.split = o.split;
  c.max_steps = o.max_steps;
  c.model = o.model;
  c.out = o.out;
  return c;
}

void cmd_parse(const Options& o) {
  if (o.program.empty() && o.data.empty() && o.glossary.empty())
    throw cf::UsageError("parse needs at least one of --program, --data, --glossary");
  std::string out;
  if (!o.program.empty()) out += cf::to_source(load_program(o));
  if (!o.data.empty()) {
    cf::FactStore facts = load_facts(o);
    for (const auto& f : facts.facts()) out += cf::to_source(f.atom) + ".\n";
  }
  if (!o.glossary.empty()) {
    cf::Glossary g = load_glossary(o);
    for (const auto& e : g.entries()) out += "# " + e.predicate + "/" + std::to_string(e.arity()) + ": " + e.sentence + "\n";
  }
  emit(o.out, out);
}

void cmd_chase(const Options& o) {
  cf::Program p = load_program(o);
  cf::FactStore d = load_facts(o);
  emit(o.out, cf::write_chase_dump(cf::reason(d, p, {o.max_steps})));
}

void cmd_verbalize(const Options& o) {
  cf::Program p = load_program(o);
  cf::FactStore d = load_facts(o);
  cf::Glossary g = load_glossary(o);
  cf::check_glossary_total(g, p, d);
  cf::Chase chase = obtain_chase(o, p, d);
  emit(o.out, cf::write_verbalized(cf::verbalize_chase(chase, g, load_lexicon(o))));
}

void cmd_plan(const Options& o) {
  cf::Program p = load_program(o);
  cf::LogicPlan plan = cf::build_logic_plan(p);
  bool wrote = false;
  if (!o.emit_plan.empty()) {
    emit(o.emit_plan, cf::plan_to_dot(plan, p));
    wrote = true;
  }
  if (!o.glossary.empty()) {
    cf::Glossary g = load_glossary(o);
    emit(o.out, cf::write_verbalized_plan(cf::verbalize_plan(plan, p, g, load_lexicon(o))));
    wrote = true;
  }
  if (!wrote) emit(o.out, cf::plan_to_dot(plan, p));
}

void cmd_corpus(const Options& o) {
  cf::Program p = load_program(o);
  cf::FactStore d = load_facts(o);
  cf::Glossary g = load_glossary(o);
  cf::check_glossary_total(g, p, d);
  cf::Lexicon lex = load_lexicon(o);
  auto tasks = cf::parse_task_list(o.tasks);
  cf::CorpusBuild build;
  if (cf::parse_mode(o.mode) == cf::CorpusMode::Ground) {
    build = cf::build_ground_corpus(d, g, tasks);
  } else {
    cf::Chase chase = obtain_chase(o, p, d);
    auto verbalized = cf::verbalize_chase(chase, g, lex);
    auto backend = cf::make_backend(o.backend, p, g, lex);
    std::string public_text = cf::read_file(o.program) + "\n" + cf::read_file(o.glossary);
    build = cf::build_chase_corpus(chase, verbalized, g, lex, tasks, *backend, public_text);
  }
  if (!o.templates.empty()) emit(o.templates, cf::write_templates(build.templates));
  emit(o.out, cf::write_corpus(build.pairs));
  for (const auto& s : build.skipped) std::cerr << "skipped " << s << "\n";
  std::cerr << build.pairs.size() << " pairs, " << build.backend_calls << " backend calls\n";
}

void cmd_quality(const Options& o) {
  if (o.out.empty()) throw cf::UsageError("quality needs --out DIR");
  cf::Program p = load_program(o);
  cf::FactStore d = load_facts(o);
  cf::Glossary g = load_glossary(o);
  auto pairs = cf::read_corpus(cf::read_file(o.corpus));
  cf::Chase chase;
  std::vector<cf::VerbalizedStep> verbalized;
  if (cf::parse_mode(o.mode) == cf::CorpusMode::Chase) {
    chase = obtain_chase(o, p, d);
    verbalized = cf::verbalize_chase(chase, g, load_lexicon(o));
  } else {
    chase.program = p;
    chase.store = d;
  }
  std::vector<std::string> denylist;
  if (!o.denylist.empty()) denylist = cf::parse_denylist(cf::read_file(o.denylist));
  auto ctx = cf::QualityContext::from_chase(chase, verbalized, g, denylist);
  auto q = cf::run_quality(pairs, ctx, o.threshold, o.paraphrases, o.seed, o.split);
  fs::create_directories(o.out);
  emit((fs::path(o.out) / "corpus_train.jsonl").string(), cf::write_corpus(q.final.train));
  emit((fs::path(o.out) / "corpus_val.jsonl").string(), cf::write_corpus(q.final.validation));
  emit((fs::path(o.out) / "quality.jsonl").string(), cf::write_quality_report(q.scored, q.reports));
  for (const auto& r : q.removed) std::cerr << "removed " << r << "\n";
  std::cerr << q.kept << " kept, " << q.filtered << " filtered, " << q.paraphrases_added << " paraphrases, "
            << q.final.train.size() << "/" << q.final.validation.size() << " train/validation\n";
}

void cmd_run(const Options& o) {
  auto result = cf::run_pipeline(to_config(o));
  if (!o.emit_plan.empty()) {
    cf::Program p = load_program(o);
    emit(o.emit_plan, cf::plan_to_dot(cf::build_logic_plan(p), p));
  }
  std::cerr << result.quality.final.train.size() << " train, " << result.quality.final.validation.size()
            << " validation pairs, " << result.corpus.backend_calls << " backend calls\n";
}

int cmd_validate(const Options& o) {
  cf::Program p = load_program(o);
  cf::FactStore d = load_facts(o);
  auto dump = cf::read_chase_dump(cf::read_file(o.chase_dump));
  cf::ValidationReport r = cf::validate_chase(dump, p, d);
  if (r.ok) {
    std::cout << "ok: " << r.steps_checked << " steps replayed\n";
    return 0;
  }
  std::cout << "violation: " << r.message << "\n";
  return static_cast<int>(cf::ExitCode::Reasoning);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Chase-based reasoning and fine-tuning corpus synthesis"};
  app.require_subcommand(1);
  Options o;

  auto inputs = [&](CLI::App* c, bool program, bool data, bool glossary) {
    auto* po = c->add_option("--program", o.program, "rules (.vada)")->check(CLI::ExistingFile);
    auto* da = c->add_option("--data", o.data, "facts (.facts)")->check(CLI::ExistingFile);
    auto* gl = c->add_option("--glossary", o.glossary, "glossary (.gloss)")->check(CLI::ExistingFile);
    if (program) po->required();
    if (data) da->required();
    if (glossary) gl->required();
  };
  auto lexicon = [&](CLI::App* c) {
    c->add_option("--lexicon", o.lexicon, "connective overrides (JSON)")->check(CLI::ExistingFile);
  };
  auto chase_in = [&](CLI::App* c, bool required) {
    auto* opt = c->add_option("--chase", o.chase_dump, "chase dump (JSON lines)")->check(CLI::ExistingFile);
    if (required) opt->required();
  };
  auto generation = [&](CLI::App* c) {
    c->add_option("--task", o.tasks, "comma-separated: explanation, description, qa, translation");
    c->add_option("--mode", o.mode, "chase or ground");
    c->add_option("--backend", o.backend, "deterministic or http:// URL");
  };
  auto quality = [&](CLI::App* c) {
    c->add_option("--threshold", o.threshold, "remove pairs scoring at most this")->check(CLI::Range(0.0, 1.0));
    c->add_option("--paraphrases", o.paraphrases, "variants per kept pair");
    c->add_option("--denylist", o.denylist, "bias phrases, one per line")->check(CLI::ExistingFile);
    c->add_option("--split", o.split, "training share")->check(CLI::Range(0.0, 1.0));
    c->add_option("--seed", o.seed, "shuffle and paraphrase seed");
  };

  auto* parse = app.add_subcommand("parse", "parse inputs and print them in canonical form");
  inputs(parse, false, false, false);
  parse->add_option("--out", o.out, "output file");

  auto* chase = app.add_subcommand("chase", "compute the chase and write a step dump");
  inputs(chase, true, true, false);
  chase->add_option("--max-steps", o.max_steps, "step bound for programs with existentials");
  chase->add_option("--out", o.out, "output file");

  auto* verbalize = app.add_subcommand("verbalize", "verbalize every chase step");
  inputs(verbalize, true, true, true);
  lexicon(verbalize);
  chase_in(verbalize, false);
  verbalize->add_option("--max-steps", o.max_steps, "step bound for programs with existentials");
  verbalize->add_option("--out", o.out, "output file");

  auto* plan = app.add_subcommand("plan", "build the rule dependency graph");
  inputs(plan, true, false, false);
  lexicon(plan);
  plan->add_option("--emit-plan", o.emit_plan, "write the plan as DOT ('-' for stdout)");
  plan->add_option("--out", o.out, "verbalized plan output (needs --glossary)");

  auto* corpus = app.add_subcommand("corpus", "generate templates and map them to pairs");
  inputs(corpus, true, true, true);
  lexicon(corpus);
  chase_in(corpus, false);
  generation(corpus);
  corpus->add_option("--max-steps", o.max_steps, "step bound for programs with existentials");
  corpus->add_option("--templates", o.templates, "also write the templates");
  corpus->add_option("--out", o.out, "output file");

  auto* qual = app.add_subcommand("quality", "score, filter, paraphrase and split a corpus");
  inputs(qual, true, true, true);
  lexicon(qual);
  chase_in(qual, false);
  qual->add_option("--corpus", o.corpus, "mapped pairs (JSON lines)")->required()->check(CLI::ExistingFile);
  qual->add_option("--mode", o.mode, "chase or ground");
  quality(qual);
  qual->add_option("--out", o.out, "output directory")->required();

  auto* run = app.add_subcommand("run", "run the whole pipeline");
  inputs(run, true, true, true);
  lexicon(run);
  generation(run);
  quality(run);
  run->add_option("--max-steps", o.max_steps, "step bound for programs with existentials");
  run->add_option("--model", o.model, "downstream model name for the manifest");
  run->add_option("--emit-plan", o.emit_plan, "also write the plan as DOT ('-' for stdout)");
  run->add_option("--out", o.out, "output directory")->required();

  auto* validate = app.add_subcommand("validate", "replay a chase dump");
  inputs(validate, true, true, false);
  chase_in(validate, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(cf::ExitCode::Usage);
  }

  try {
    if (*parse) cmd_parse(o);
    if (*chase) cmd_chase(o);
    if (*verbalize) cmd_verbalize(o);
    if (*plan) cmd_plan(o);
    if (*corpus) cmd_corpus(o);
    if (*qual) cmd_quality(o);
    if (*run) cmd_run(o);
    if (*validate) return cmd_validate(o);
  } catch (const cf::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(cf::ExitCode::Usage);
  }
  return 0;
}
