#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "chaseforge/corpus.hpp"
#include "chaseforge/text_scan.hpp"

namespace chaseforge {

enum class Verdict { Kept, Filtered, ParaphraseAdded };
const char* verdict_name(Verdict v);

struct QualityReport {
  double specificity = 1.0;
  double plausibility = 1.0;
  double bias = 1.0;
  bool residual_token = false;
  /// Minimum of the subscores; 0 when a placeholder survived mapping.
  double aggregate = 1.0;
  Verdict verdict = Verdict::Kept;
  /// Names of failed criteria, comma separated; empty when all passed.
  std::string reason;
};

/// Reference material for scoring: the sentences a response may draw its
/// constants from and the constants that count as data.
class QualityContext {
 public:
  /// `reference` holds the verbalized chase steps and extensional facts;
  /// `constants` are the printed constants of the store and program.
  QualityContext(const std::vector<std::string>& reference, const std::vector<std::string>& constants,
                 std::vector<std::string> denylist = {});

  /// Builds the reference from a chase: step sentences, extensional fact
  /// sentences and program constants.
  static QualityContext from_chase(const Chase& chase, const std::vector<VerbalizedStep>& verbalized,
                                   const Glossary& glossary, std::vector<std::string> denylist = {});

  /// Constants of the response that are data constants or numbers must all
  /// occur in the reference sentences.
  bool plausible(std::string_view response) const;
  bool unbiased(const CorpusPair& pair) const;

 private:
  std::size_t max_n_ = 1;
  std::unordered_set<std::string> constants_;
  NgramIndex reference_;
  std::vector<std::string> denylist_;  // lower-cased
};

/// Prompt index for specificity: a pair is specific unless another pair
/// shares its prompt with a different response. Both sides are compared in
/// canonical form, so paraphrases of one pair never count as different.
class PromptIndex {
 public:
  explicit PromptIndex(const std::vector<CorpusPair>& corpus);
  bool specific(const CorpusPair& pair) const;

 private:
  // canonical prompt -> distinct canonical responses
  std::unordered_map<std::string, std::set<std::string>> index_;
};

/// Undoes every phrase-table rewrite, mapping a text and all its
/// paraphrases to one form.
std::string canonical_text(std::string_view text);

QualityReport check_quality(const CorpusPair& pair, const QualityContext& ctx, const PromptIndex& prompts,
                            double threshold);

/// Scores every pair against the corpus-wide prompt index.
std::vector<QualityReport> check_corpus(const std::vector<CorpusPair>& corpus, const QualityContext& ctx,
                                        double threshold);

struct FilterResult {
  std::vector<CorpusPair> kept;
  /// One line per removed pair.
  std::vector<std::string> removed;
};

/// Drops pairs whose aggregate score is at most `threshold`; kept pairs
/// carry their score.
FilterResult filter(const std::vector<CorpusPair>& corpus, const std::vector<QualityReport>& reports,
                    double threshold);

/// Up to `max_variants` phrase-table rewrites of a pair, chosen by `seed`.
/// Variants keep provenance and score.
std::vector<CorpusPair> paraphrase(const CorpusPair& pair, std::uint64_t seed, std::size_t max_variants);

/// Collapses whitespace and drops spaces before punctuation.
std::string normalize_text(std::string_view text);

/// Uniform draw in [0, bound) by rejection sampling; unlike
/// std::uniform_int_distribution the sequence is the same on every platform.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound);

struct FinalCorpus {
  std::vector<CorpusPair> train;
  std::vector<CorpusPair> validation;
  std::size_t duplicates_removed = 0;
};

/// Normalizes, removes exact duplicates (first copy wins), shuffles with
/// `seed` and splits with round(n * split) pairs in the training part.
FinalCorpus postprocess(std::vector<CorpusPair> corpus, std::uint64_t seed, double split = 0.9);

}  // namespace chaseforge
