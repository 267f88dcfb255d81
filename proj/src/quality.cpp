#include "chaseforge/quality.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "chaseforge/tokens.hpp"

namespace chaseforge {

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Kept: return "kept";
    case Verdict::Filtered: return "filtered";
    case Verdict::ParaphraseAdded: return "paraphrase-added";
  }
  return "?";
}

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

}  // namespace

QualityContext::QualityContext(const std::vector<std::string>& reference, const std::vector<std::string>& constants,
                               std::vector<std::string> denylist) {
  for (const auto& c : constants) {
    auto words = word_tokens(c);
    if (words.empty()) continue;
    max_n_ = std::max(max_n_, words.size());
    constants_.insert(phrase_key(c));
  }
  reference_ = NgramIndex(max_n_);
  for (const auto& r : reference) reference_.add(r);
  for (auto& d : denylist)
    if (!d.empty()) denylist_.push_back(lower(d));
}

QualityContext QualityContext::from_chase(const Chase& chase, const std::vector<VerbalizedStep>& verbalized,
                                          const Glossary& glossary, std::vector<std::string> denylist) {
  std::vector<std::string> reference, constants;
  for (const auto& v : verbalized) reference.push_back(v.sentence);
  for (const auto& f : chase.store.facts()) {
    if (f.extensional()) reference.push_back(verbalize_fact(f, glossary));
    for (const auto& v : f.atom.args) constants.push_back(v.to_text());
  }
  // Constants written in the rules may appear in translation responses.
  for (const auto& r : chase.program.rules) reference.push_back(to_source(r, false));
  return QualityContext(reference, constants, std::move(denylist));
}

bool QualityContext::plausible(std::string_view response) const {
  bool ok = true;
  for_each_ngram(word_tokens(response), max_n_, [&](const std::string& g) {
    if (!ok) return;
    bool candidate = constants_.count(g) || (g.find(' ') == std::string::npos && is_numeric_token(g));
    if (candidate && !reference_.contains(g)) ok = false;
  });
  return ok;
}

bool QualityContext::unbiased(const CorpusPair& pair) const {
  if (denylist_.empty()) return true;
  std::string p = lower(pair.prompt), r = lower(pair.response);
  for (const auto& d : denylist_)
    if (p.find(d) != std::string::npos || r.find(d) != std::string::npos) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Phrase table

namespace {

struct Swap {
  std::string_view a;
  std::string_view b;
};

// Canonical side first.
constexpr Swap kSwaps[] = {
    {"sends an order to open", "places an order to open"},
    {"send an order to open", "place an order to open"},
    {"it is not true that", "it is not the case that"},
    {"together with", "along with"},
};

bool replace_all(std::string& s, std::string_view from, std::string_view to) {
  bool any = false;
  std::size_t pos = 0;
  while ((pos = s.find(from, pos)) != std::string::npos) {
    s.replace(pos, from.size(), to);
    pos += to.size();
    any = true;
  }
  return any;
}

std::string lower_first(std::string s) {
  if (!s.empty() && s[0] >= 'A' && s[0] <= 'Z') s[0] = static_cast<char>(s[0] - 'A' + 'a');
  return s;
}

/// "Since A, then B." -> {A, B}.
std::optional<std::pair<std::string, std::string>> split_since(std::string_view s) {
  if (!s.starts_with("Since ") || !s.ends_with(".")) return std::nullopt;
  auto then = s.rfind(", then ");
  if (then == std::string_view::npos || then < 6) return std::nullopt;
  return std::pair{std::string(s.substr(6, then - 6)), std::string(s.substr(then + 7, s.size() - then - 8))};
}

/// "B, because A." -> {A, B}.
std::optional<std::pair<std::string, std::string>> split_because(std::string_view s) {
  if (!s.ends_with(".")) return std::nullopt;
  auto because = s.find(", because ");
  if (because == std::string_view::npos || because == 0) return std::nullopt;
  return std::pair{std::string(s.substr(because + 10, s.size() - because - 11)), std::string(s.substr(0, because))};
}

}  // namespace

std::string canonical_text(std::string_view text) {
  std::string s(text);
  if (auto parts = split_because(s)) s = "Since " + parts->first + ", then " + lower_first(parts->second) + ".";
  if (auto parts = split_since(s)) s = "Since " + parts->first + ", then " + lower_first(parts->second) + ".";
  for (const auto& sw : kSwaps) replace_all(s, sw.b, sw.a);
  return s;
}

std::vector<CorpusPair> paraphrase(const CorpusPair& pair, std::uint64_t seed, std::size_t max_variants) {
  if (max_variants == 0) return {};
  using Rewrite = std::function<bool(CorpusPair&)>;
  std::vector<Rewrite> rules;
  rules.push_back([](CorpusPair& p) {
    if (auto parts = split_since(p.response)) {
      p.response = capitalize(parts->second) + ", because " + parts->first + ".";
      return true;
    }
    if (auto parts = split_because(p.response)) {
      p.response = "Since " + parts->first + ", then " + lower_first(parts->second) + ".";
      return true;
    }
    return false;
  });
  // Verb forms of one phrase change together.
  std::vector<std::vector<Swap>> groups{{kSwaps[0], kSwaps[1]}, {kSwaps[2]}, {kSwaps[3]}};
  for (const auto& group : groups)
    rules.push_back([group](CorpusPair& p) {
      bool changed = false;
      for (const auto& sw : group)
        for (std::string* s : {&p.prompt, &p.response}) {
          if (s->find(sw.a) != std::string::npos)
            changed |= replace_all(*s, sw.a, sw.b);
          else if (s->find(sw.b) != std::string::npos)
            changed |= replace_all(*s, sw.b, sw.a);
        }
      return changed;
    });

  std::vector<std::size_t> applicable;
  for (std::size_t i = 0; i < rules.size(); ++i) {
    CorpusPair probe = pair;
    if (rules[i](probe)) applicable.push_back(i);
  }
  std::vector<CorpusPair> candidates;
  std::set<std::pair<std::string, std::string>> seen{{pair.prompt, pair.response}};
  for (std::size_t mask = 1; mask < (std::size_t{1} << applicable.size()); ++mask) {
    CorpusPair v = pair;
    for (std::size_t k = 0; k < applicable.size(); ++k)
      if (mask & (std::size_t{1} << k)) rules[applicable[k]](v);
    if (seen.insert({v.prompt, v.response}).second) candidates.push_back(std::move(v));
  }
  std::mt19937_64 rng(seed ^ fnv1a(pair.prompt + '\x1f' + pair.response));
  for (std::size_t i = candidates.size(); i > 1; --i) std::swap(candidates[i - 1], candidates[uniform_below(rng, i)]);
  if (candidates.size() > max_variants) candidates.resize(max_variants);
  return candidates;
}

// ---------------------------------------------------------------------------
// Scoring

PromptIndex::PromptIndex(const std::vector<CorpusPair>& corpus) {
  for (const auto& p : corpus) index_[canonical_text(p.prompt)].insert(canonical_text(p.response));
}

bool PromptIndex::specific(const CorpusPair& pair) const {
  auto it = index_.find(canonical_text(pair.prompt));
  if (it == index_.end()) return true;
  const auto& responses = it->second;
  return responses.size() == 1 && responses.count(canonical_text(pair.response));
}

QualityReport check_quality(const CorpusPair& pair, const QualityContext& ctx, const PromptIndex& prompts,
                            double threshold) {
  QualityReport r;
  r.residual_token = has_token_remnant(pair.prompt) || has_token_remnant(pair.response);
  r.specificity = prompts.specific(pair) ? 1.0 : 0.0;
  r.plausibility = ctx.plausible(pair.response) ? 1.0 : 0.0;
  r.bias = ctx.unbiased(pair) ? 1.0 : 0.0;
  r.aggregate = r.residual_token ? 0.0 : std::min({r.specificity, r.plausibility, r.bias});
  std::vector<std::string> failed;
  if (r.residual_token) failed.push_back("residual-token");
  if (r.specificity == 0) failed.push_back("specificity");
  if (r.plausibility == 0) failed.push_back("plausibility");
  if (r.bias == 0) failed.push_back("bias");
  for (const auto& f : failed) r.reason += (r.reason.empty() ? "" : ",") + f;
  r.verdict = r.aggregate > threshold ? Verdict::Kept : Verdict::Filtered;
  return r;
}

std::vector<QualityReport> check_corpus(const std::vector<CorpusPair>& corpus, const QualityContext& ctx,
                                        double threshold) {
  PromptIndex prompts(corpus);
  std::vector<QualityReport> out;
  out.reserve(corpus.size());
  for (const auto& p : corpus) out.push_back(check_quality(p, ctx, prompts, threshold));
  return out;
}

FilterResult filter(const std::vector<CorpusPair>& corpus, const std::vector<QualityReport>& reports,
                    double threshold) {
  if (corpus.size() != reports.size()) throw QualityError("filter: corpus and report sizes differ");
  FilterResult out;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    if (reports[i].aggregate > threshold) {
      CorpusPair p = corpus[i];
      p.score = reports[i].aggregate;
      out.kept.push_back(std::move(p));
    } else {
      out.removed.push_back(corpus[i].template_id + " (" + corpus[i].rule + "): score " +
                            std::to_string(reports[i].aggregate) + " <= " + std::to_string(threshold) +
                            (reports[i].reason.empty() ? "" : ", failed " + reports[i].reason));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Postprocessing

std::string normalize_text(std::string_view text) {
  std::string out;
  bool space = false;
  for (char c : text) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      space = !out.empty();
      continue;
    }
    bool punct = c == ',' || c == '.' || c == '?' || c == '!' || c == ';' || c == ':';
    if (space && !punct) out += ' ';
    space = false;
    out += c;
  }
  return out;
}

std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  if (bound <= 1) return 0;
  std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
  std::uint64_t x;
  do x = rng();
  while (x >= limit);
  return x % bound;
}

FinalCorpus postprocess(std::vector<CorpusPair> corpus, std::uint64_t seed, double split) {
  if (!(split >= 0.0 && split <= 1.0)) throw QualityError("split must lie in [0, 1]");
  FinalCorpus out;
  std::vector<CorpusPair> unique;
  std::set<std::pair<std::string, std::string>> seen;
  for (auto& p : corpus) {
    p.prompt = normalize_text(p.prompt);
    p.response = normalize_text(p.response);
    if (seen.insert({p.prompt, p.response}).second)
      unique.push_back(std::move(p));
    else
      ++out.duplicates_removed;
  }
  std::mt19937_64 rng(seed);
  for (std::size_t i = unique.size(); i > 1; --i) std::swap(unique[i - 1], unique[uniform_below(rng, i)]);
  auto n_train = static_cast<std::size_t>(std::llround(static_cast<double>(unique.size()) * split));
  n_train = std::min(n_train, unique.size());
  out.train.assign(std::make_move_iterator(unique.begin()), std::make_move_iterator(unique.begin() + n_train));
  out.validation.assign(std::make_move_iterator(unique.begin() + n_train), std::make_move_iterator(unique.end()));
  return out;
}

}  // namespace chaseforge
