#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "chaseforge/corpus.hpp"
#include "chaseforge/logic_plan.hpp"
#include "chaseforge/quality.hpp"
#include "chaseforge/replay.hpp"

namespace chaseforge {

enum class CorpusMode { Chase, Ground };
const char* mode_name(CorpusMode m);
/// Throws UsageError.
CorpusMode parse_mode(std::string_view name);

struct PipelineConfig {
  std::filesystem::path program;
  std::filesystem::path data;
  std::filesystem::path glossary;
  std::optional<std::filesystem::path> lexicon;
  std::optional<std::filesystem::path> denylist;
  std::vector<NlpTask> tasks{NlpTask::QuestionAnswering, NlpTask::Explanation};
  CorpusMode mode = CorpusMode::Chase;
  /// "deterministic" or an http:// URL.
  std::string backend = "deterministic";
  double threshold = 0.5;
  std::size_t paraphrases = 1;
  std::uint64_t seed = 42;
  double split = 0.9;
  std::size_t max_steps = 10'000;
  /// Name of the downstream model; recorded in the manifest only.
  std::string model = "unspecified";
  std::filesystem::path out;
};

/// Throws UsageError for missing files or out-of-range values.
void validate_config(const PipelineConfig& config);

std::string read_file(const std::filesystem::path& path);
std::string sha256_hex(std::string_view data);

/// One phrase per line; blank lines and '#' comments are skipped.
std::vector<std::string> parse_denylist(const std::string& text);

/// Parsed inputs plus the raw rule and glossary text, which the backend
/// boundary treats as public.
struct Inputs {
  Program program;
  FactStore facts;
  Glossary glossary;
  Lexicon lexicon;
  std::vector<std::string> denylist;
  std::string public_text;
};

/// Parses every input and checks that the glossary covers all predicates.
Inputs load_inputs(const PipelineConfig& config);

/// Glossary entries missing for predicates of the program or the facts.
void check_glossary_total(const Glossary& glossary, const Program& program, const FactStore& facts);

std::unique_ptr<GeneratorBackend> make_backend(const std::string& name, const Program& program,
                                               const Glossary& glossary, const Lexicon& lexicon);

struct CorpusBuild {
  std::vector<CorpusPair> pairs;
  TemplateSet templates;
  std::size_t backend_calls = 0;
  std::vector<std::string> transcript;
  std::vector<std::string> skipped;
};

/// Lifted generation: templates once per plan node and task, then mapping
/// of every step and extensional fact.
CorpusBuild build_chase_corpus(const Chase& chase, const std::vector<VerbalizedStep>& verbalized,
                               const Glossary& glossary, const Lexicon& lexicon, const std::vector<NlpTask>& tasks,
                               GeneratorBackend& backend, std::string_view public_text);

CorpusBuild build_ground_corpus(const FactStore& facts, const Glossary& glossary, const std::vector<NlpTask>& tasks);

struct QualityOutcome {
  /// Every scored pair followed by the paraphrase variants, with one report each.
  std::vector<CorpusPair> scored;
  std::vector<QualityReport> reports;
  std::vector<std::string> removed;
  std::size_t kept = 0;
  std::size_t filtered = 0;
  std::size_t paraphrases_added = 0;
  FinalCorpus final;
};

QualityOutcome run_quality(const std::vector<CorpusPair>& pairs, const QualityContext& ctx, double threshold,
                           std::size_t paraphrases, std::uint64_t seed, double split);

/// `{"prompt",...,"specificity","plausibility","bias","residual_token","aggregate","verdict","reason"}` lines.
std::string write_quality_report(const std::vector<CorpusPair>& pairs, const std::vector<QualityReport>& reports);

/// `{"step","rule","sentence","contributions","bindings"}` lines.
std::string write_verbalized(const std::vector<VerbalizedStep>& steps);

/// Plan nodes as `{"node","sentence","head","edges_out"}` lines.
std::string write_verbalized_plan(const VerbalizedPlan& plan);

struct PipelineResult {
  Chase chase;
  CorpusBuild corpus;
  QualityOutcome quality;
  std::string manifest;
  std::vector<std::filesystem::path> files;
};

/// Runs parse, reason, verbalize, plan, templates, map, quality and
/// postprocess, writing every output into `config.out`. A backend passed
/// in replaces the one named by `config.backend`. On failure the files
/// written so far are removed and the error is rethrown tagged with the
/// failing stage.
PipelineResult run_pipeline(const PipelineConfig& config, GeneratorBackend* backend = nullptr);

}  // namespace chaseforge
