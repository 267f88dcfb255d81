#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "chaseforge/chase.hpp"
#include "chaseforge/error.hpp"
#include "chaseforge/glossary.hpp"
#include "chaseforge/logic_plan.hpp"
#include "chaseforge/verbalizer.hpp"

namespace chaseforge {

enum class NlpTask { Explanation, Description, QuestionAnswering, Translation };

inline constexpr NlpTask kAllTasks[] = {NlpTask::Explanation, NlpTask::Description, NlpTask::QuestionAnswering,
                                        NlpTask::Translation};

/// "explanation", "description", "qa", "translation".
const char* task_name(NlpTask task);
/// Accepts the short names plus "question_answering"; throws UsageError.
NlpTask parse_task(std::string_view name);
/// Comma-separated list, duplicates removed, order kept.
std::vector<NlpTask> parse_task_list(std::string_view list);

/// Node id of the whole-plan description request.
inline constexpr std::string_view kPlanNode = "@plan";
/// "fact:<predicate>".
std::string fact_node(std::string_view predicate);
bool is_fact_node(std::string_view node);

/// Tokenized input for one backend call.
struct GenerationRequest {
  std::string node;
  NlpTask task = NlpTask::Explanation;
  std::string text;
  /// Tokens the templates may use, sorted.
  std::vector<std::string> tokens;
};

struct GeneratedPair {
  std::string prompt;
  std::string response;
};

struct Template {
  std::string template_id;  // "<node>/<task>/<n>"
  std::string node;         // rule id, fact:<predicate> or @plan
  NlpTask task = NlpTask::Explanation;
  std::string prompt;
  std::string response;
  std::set<std::string> tokens;
};

struct TemplateSet {
  std::vector<Template> templates;
  /// Request text per (node, task); lets mapping recognize a response that
  /// is the node sentence itself.
  std::map<std::pair<std::string, NlpTask>, std::string> request_text;
  /// Templates rejected by validation, one message each.
  std::vector<std::string> dropped;

  std::vector<const Template*> for_node(const std::string& node, NlpTask task) const;
  void append(TemplateSet other);
};

class GeneratorBackend {
 public:
  virtual ~GeneratorBackend() = default;
  /// Throws BackendTransportError for retryable failures, BackendError otherwise.
  virtual std::vector<GeneratedPair> expand(const GenerationRequest& request) = 0;
  virtual std::string name() const = 0;
};

class BackendTransportError : public BackendError {
 public:
  using BackendError::BackendError;
};

/// Network-free backend built from the rules and the glossary only.
class DeterministicBackend : public GeneratorBackend {
 public:
  DeterministicBackend(const Program& program, const Glossary& glossary, const Lexicon& lexicon = {});
  std::vector<GeneratedPair> expand(const GenerationRequest& request) override;
  std::string name() const override { return "deterministic"; }

 private:
  const Program& program_;
  const Glossary& glossary_;
  Lexicon lexicon_;
};

/// POST <base>/expand with {"node","task","text","tokens"}; expects
/// {"templates":[{"prompt","response"}]}.
class HttpBackend : public GeneratorBackend {
 public:
  explicit HttpBackend(std::string url, int timeout_seconds = 30);
  std::vector<GeneratedPair> expand(const GenerationRequest& request) override;
  std::string name() const override { return url_; }

 private:
  std::string url_;
  int timeout_;
};

/// Constants of D that a request may never contain: every printed constant
/// of the store minus those that also occur in the rule or glossary text.
std::set<std::string> protected_constants(const FactStore& facts, std::string_view public_text);

/// Wraps a backend: scans every request for protected constants, records
/// the request payloads, counts calls and retries transport failures.
class BackendBoundary {
 public:
  BackendBoundary(GeneratorBackend& backend, const std::set<std::string>& protected_constants,
                  int max_attempts = 3);

  /// Throws BackendError on a disclosure or after the last failed attempt.
  std::vector<GeneratedPair> call(const GenerationRequest& request);

  std::size_t calls() const { return calls_; }
  /// JSON payload of every request, in call order.
  const std::vector<std::string>& transcript() const { return transcript_; }
  const std::string& backend_name() const { return name_; }

 private:
  std::optional<std::string> disclosed(const GenerationRequest& request) const;

  GeneratorBackend& backend_;
  std::string name_;
  std::set<std::string> whole_;  // constants matched as word n-grams
  std::vector<std::string> raw_;  // constants without word characters
  std::size_t max_n_ = 1;
  int max_attempts_;
  std::size_t calls_ = 0;
  std::vector<std::string> transcript_;
};

/// JSON request body sent to remote backends.
std::string request_payload(const GenerationRequest& request);

/// One request per plan node; the description task adds a whole-plan request.
std::vector<GenerationRequest> preprocess(const VerbalizedPlan& plan, NlpTask task);

/// QA and description requests for extensional predicates; empty for other tasks.
std::vector<GenerationRequest> preprocess_facts(const Glossary& glossary, const std::vector<std::string>& predicates,
                                                NlpTask task);

/// Calls the boundary once per request and validates the returned pairs.
/// Throws BackendError when a request yields no valid template.
TemplateSet generate_templates(const std::vector<GenerationRequest>& requests, BackendBoundary& boundary);

/// Templates the deterministic backend produces for an extensional predicate.
std::vector<GeneratedPair> fact_templates(const GlossaryEntry& entry, NlpTask task);

struct CorpusPair {
  std::string prompt;
  std::string response;
  NlpTask task = NlpTask::Explanation;
  std::string rule;  // rule id, fact:<predicate> or @plan
  std::vector<StepId> steps;
  std::vector<FactId> facts;
  std::string template_id;
  std::optional<double> score;

  friend bool operator==(const CorpusPair&, const CorpusPair&) = default;
};

struct MappingResult {
  std::vector<CorpusPair> pairs;
  /// One message per template skipped for an unresolved token.
  std::vector<std::string> skipped;
};

/// Instantiates the templates of the step's rule. Performs no backend call.
MappingResult map_step(const TemplateSet& templates, NlpTask task, const VerbalizedStep& step);

/// Instantiates the fact templates of an extensional fact.
MappingResult map_fact(const TemplateSet& templates, NlpTask task, const Fact& fact, const Glossary& glossary);

/// Instantiates whole-plan templates: tokens become the rule variable names.
MappingResult map_plan(const TemplateSet& templates, NlpTask task);

/// Maps every step, every extensional fact and the plan templates for one task.
MappingResult map_chase(const TemplateSet& templates, NlpTask task, const Chase& chase,
                        const std::vector<VerbalizedStep>& verbalized, const Glossary& glossary);

/// Ablation baseline: pairs built from extensional facts only, without a backend.
std::vector<CorpusPair> generate_ground_corpus(const FactStore& facts, const Glossary& glossary, NlpTask task);

/// `{"prompt","response","task","rule","steps","facts","template","score"}`.
std::string to_json_line(const CorpusPair& pair);
std::string write_corpus(const std::vector<CorpusPair>& pairs);
/// Throws ParseError.
std::vector<CorpusPair> read_corpus(std::string_view text);

std::string write_templates(const TemplateSet& set);

}  // namespace chaseforge
