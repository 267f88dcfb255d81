#include "chaseforge/corpus.hpp"

#include <algorithm>
#include <sstream>

#include "json.hpp"

#include "chaseforge/text_scan.hpp"
#include "chaseforge/tokens.hpp"

namespace chaseforge {

using json = nlohmann::ordered_json;

const char* task_name(NlpTask task) {
  switch (task) {
    case NlpTask::Explanation: return "explanation";
    case NlpTask::Description: return "description";
    case NlpTask::QuestionAnswering: return "qa";
    case NlpTask::Translation: return "translation";
  }
  return "?";
}

NlpTask parse_task(std::string_view name) {
  if (name == "explanation") return NlpTask::Explanation;
  if (name == "description") return NlpTask::Description;
  if (name == "qa" || name == "question_answering") return NlpTask::QuestionAnswering;
  if (name == "translation") return NlpTask::Translation;
  throw UsageError("unknown task '" + std::string(name) +
                   "' (expected explanation, description, qa or translation)");
}

std::vector<NlpTask> parse_task_list(std::string_view list) {
  std::vector<NlpTask> out;
  std::size_t start = 0;
  while (start <= list.size()) {
    auto comma = list.find(',', start);
    auto part = list.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    while (!part.empty() && part.front() == ' ') part.remove_prefix(1);
    while (!part.empty() && part.back() == ' ') part.remove_suffix(1);
    if (!part.empty()) {
      NlpTask t = parse_task(part);
      if (std::find(out.begin(), out.end(), t) == out.end()) out.push_back(t);
    }
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  if (out.empty()) throw UsageError("no task given");
  return out;
}

std::string fact_node(std::string_view predicate) { return "fact:" + std::string(predicate); }
bool is_fact_node(std::string_view node) { return node.substr(0, 5) == "fact:"; }

std::vector<const Template*> TemplateSet::for_node(const std::string& node, NlpTask task) const {
  std::vector<const Template*> out;
  for (const auto& t : templates)
    if (t.node == node && t.task == task) out.push_back(&t);
  return out;
}

void TemplateSet::append(TemplateSet other) {
  for (auto& t : other.templates) templates.push_back(std::move(t));
  for (auto& [k, v] : other.request_text) request_text.emplace(k, std::move(v));
  for (auto& d : other.dropped) dropped.push_back(std::move(d));
}

// ---------------------------------------------------------------------------
// Deterministic template construction

namespace {

bool lower_word(std::string_view w) {
  if (w.empty()) return false;
  for (char c : w)
    if (c < 'a' || c > 'z') return false;
  return true;
}

std::string base_form(const std::string& verb) {
  if (verb == "has") return "have";
  if (verb == "does") return "do";
  auto ends = [&](std::string_view s) { return verb.size() > s.size() && verb.ends_with(s); };
  if (ends("ies")) return verb.substr(0, verb.size() - 3) + "y";
  for (std::string_view s : {"sses", "shes", "ches", "xes", "zes", "oes"})
    if (ends(s)) return verb.substr(0, verb.size() - 2);
  return verb.substr(0, verb.size() - 1);
}

/// A clause turned around an auxiliary: "<aux> <subject> <rest>".
struct Inversion {
  std::string aux;  // "is" or "does"
  std::string subject;
  std::string rest;  // starts with the participle or base verb
};

std::optional<Inversion> invert(const std::string& clause) {
  std::optional<Inversion> best;
  std::size_t best_pos = std::string::npos;
  auto is_pos = clause.find(" is ");
  if (is_pos != std::string::npos) {
    best = Inversion{"is", clause.substr(0, is_pos), clause.substr(is_pos + 4)};
    best_pos = is_pos;
  }
  // First word ending in -s that directly follows a placeholder.
  std::size_t from = 0;
  while (true) {
    auto close = clause.find(kTokenClose, from);
    if (close == std::string::npos || close >= best_pos) break;
    std::size_t start = close + kTokenClose.size();
    from = start;
    if (start >= clause.size() || clause[start] != ' ') continue;
    std::size_t wb = start + 1;
    std::size_t we = clause.find(' ', wb);
    std::string word = clause.substr(wb, we == std::string::npos ? std::string::npos : we - wb);
    if (word.size() > 2 && lower_word(word) && word.back() == 's' && word != "is" && word != "was") {
      std::string rest = base_form(word) + (we == std::string::npos ? "" : clause.substr(we));
      best = Inversion{"does", clause.substr(0, start), rest};
      break;
    }
  }
  return best;
}

std::string yes_no_question(const std::string& clause) {
  if (auto inv = invert(clause)) return capitalize(inv->aux) + " " + inv->subject + " " + inv->rest + "?";
  return "Is it true that " + clause + "?";
}

std::string why_question(const std::string& clause) {
  if (auto inv = invert(clause)) return "Why " + inv->aux + " " + inv->subject + " " + inv->rest + "?";
  return "Why is it the case that " + clause + "?";
}

std::string describe_phrase(const GlossaryEntry& e) {
  return e.description ? *e.description : "the " + e.predicate + " facts";
}

/// One wh-question per open position plus a yes/no question, all answered
/// by the clause itself.
std::vector<GeneratedPair> qa_pairs(const GlossaryEntry& e, const std::vector<std::string>& values,
                                    const std::vector<bool>& open) {
  std::vector<GeneratedPair> out;
  std::string clause = e.render(values);
  std::string response = capitalize(clause) + ".";
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!open[i]) continue;
    SlotPhrase ph = e.phrase(i);
    std::string span = e.fill(ph.answer, values);
    auto pos = clause.find(span);
    if (span.empty() || pos == std::string::npos) continue;
    std::string q = clause;
    q.replace(pos, span.size(), ph.wh);
    out.push_back({capitalize(q) + "?", response});
  }
  out.push_back({yes_no_question(clause), response});
  return out;
}

std::vector<std::string> slot_tokens(const std::string& node, const GlossaryEntry& e) {
  std::vector<std::string> v;
  for (const auto& s : e.slots) v.push_back(make_token(node, s));
  return v;
}

std::string record_text(const GlossaryEntry& e, const std::vector<std::string>& values) {
  std::string s = e.predicate + "(";
  for (std::size_t i = 0; i < values.size(); ++i) s += (i ? ", " : "") + values[i];
  return s + ")";
}

}  // namespace

std::vector<GeneratedPair> fact_templates(const GlossaryEntry& entry, NlpTask task) {
  std::string node = fact_node(entry.predicate);
  auto values = slot_tokens(node, entry);
  switch (task) {
    case NlpTask::QuestionAnswering: return qa_pairs(entry, values, std::vector<bool>(values.size(), true));
    case NlpTask::Description:
      return {{"What does the record " + record_text(entry, values) + " state?",
               capitalize(entry.render(values)) + "."}};
    default: return {};
  }
}

DeterministicBackend::DeterministicBackend(const Program& program, const Glossary& glossary, const Lexicon& lexicon)
    : program_(program), glossary_(glossary), lexicon_(lexicon) {}

std::vector<GeneratedPair> DeterministicBackend::expand(const GenerationRequest& req) {
  if (req.node == kPlanNode) {
    if (req.task != NlpTask::Description) return {};
    return {{"How do the rules of the program work together?", req.text}};
  }
  if (is_fact_node(req.node)) {
    const GlossaryEntry* e = glossary_.find(req.node.substr(5));
    if (!e) throw BackendError("no glossary entry for " + req.node);
    return fact_templates(*e, req.task);
  }
  const Rule* rule = program_.find_rule(req.node);
  if (!rule) throw BackendError("unknown plan node " + req.node);
  const GlossaryEntry& e = glossary_.at(rule->head.predicate, rule->head.args.size());
  std::vector<std::string> values;
  std::vector<bool> open;
  for (const auto& t : rule->head.args) {
    if (auto v = t.as_variable()) {
      values.push_back(make_token(rule->id, v->name));
      open.push_back(true);
    } else if (auto x = t.as_existential()) {
      values.push_back(make_token(rule->id, x->name));
      open.push_back(false);
    } else {
      values.push_back(t.as_constant() ? t.as_constant()->value.to_text() : to_source(t));
      open.push_back(false);
    }
  }
  std::string clause = e.render(values);
  switch (req.task) {
    case NlpTask::QuestionAnswering: return qa_pairs(e, values, open);
    case NlpTask::Explanation: return {{why_question(clause), req.text}};
    case NlpTask::Description:
      return {{"How does the rule for " + describe_phrase(e) + " behave when " + clause + "?", req.text}};
    case NlpTask::Translation: {
      std::size_t same_head = 0;
      for (const auto& r : program_.rules)
        if (r.head.predicate == rule->head.predicate) ++same_head;
      std::string prompt = same_head > 1 ? "Which query of rule " + rule->id + " retrieves " + describe_phrase(e) + "?"
                                         : "Which query retrieves " + describe_phrase(e) + "?";
      return {{prompt, to_source(*rule, false)}};
    }
  }
  return {};
}

// ---------------------------------------------------------------------------
// Boundary

std::string request_payload(const GenerationRequest& r) {
  json j;
  j["node"] = r.node;
  j["task"] = task_name(r.task);
  j["text"] = r.text;
  j["tokens"] = r.tokens;
  return j.dump();
}

std::set<std::string> protected_constants(const FactStore& facts, std::string_view public_text) {
  std::set<std::string> texts;
  std::size_t max_n = 1;
  for (const auto& f : facts.facts())
    for (const auto& v : f.atom.args) {
      if (v.is_null()) continue;
      auto [it, fresh] = texts.insert(v.to_text());
      if (fresh) max_n = std::max(max_n, word_tokens(*it).size());
    }
  NgramIndex pub(max_n);
  pub.add(public_text);
  std::set<std::string> out;
  for (const auto& t : texts) {
    std::string key = phrase_key(t);
    bool is_public = key.empty() ? public_text.find(t) != std::string_view::npos : pub.contains(key);
    if (!is_public && !t.empty()) out.insert(t);
  }
  return out;
}

BackendBoundary::BackendBoundary(GeneratorBackend& backend, const std::set<std::string>& protected_constants,
                                 int max_attempts)
    : backend_(backend), name_(backend.name()), max_attempts_(std::max(1, max_attempts)) {
  for (const auto& c : protected_constants) {
    std::string key = phrase_key(c);
    if (key.empty()) {
      raw_.push_back(c);
    } else {
      max_n_ = std::max(max_n_, word_tokens(c).size());
      whole_.insert(std::move(key));
    }
  }
}

std::optional<std::string> BackendBoundary::disclosed(const GenerationRequest& r) const {
  std::string masked = mask_placeholders(r.text);
  std::optional<std::string> hit;
  for_each_ngram(word_tokens(masked), max_n_, [&](const std::string& g) {
    if (!hit && whole_.count(g)) hit = g;
  });
  if (hit) return hit;
  for (const auto& c : raw_)
    if (masked.find(c) != std::string::npos) return c;
  return std::nullopt;
}

std::vector<GeneratedPair> BackendBoundary::call(const GenerationRequest& request) {
  if (auto c = disclosed(request))
    throw BackendError("request for " + request.node + "/" + task_name(request.task) +
                       " would disclose the data constant '" + *c + "'");
  transcript_.push_back(request_payload(request));
  ++calls_;
  for (int attempt = 1;; ++attempt) {
    try {
      return backend_.expand(request);
    } catch (const BackendTransportError& e) {
      if (attempt >= max_attempts_)
        throw BackendError("backend " + name_ + " failed after " + std::to_string(attempt) +
                           " attempts: " + e.what());
    }
  }
}

// ---------------------------------------------------------------------------
// Requests and templates

namespace {

std::vector<std::string> sorted_tokens(const std::string& text) {
  auto s = find_tokens(text);
  return {s.begin(), s.end()};
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

/// Validates generated pairs against a request and appends the survivors.
std::size_t add_templates(TemplateSet& set, const GenerationRequest& req, const std::vector<GeneratedPair>& pairs) {
  set.request_text[{req.node, req.task}] = req.text;
  std::set<std::string> allowed(req.tokens.begin(), req.tokens.end());
  std::set<std::pair<std::string, std::string>> seen;
  std::size_t kept = 0;
  for (const auto& g : pairs) {
    std::string where = req.node + "/" + task_name(req.task);
    std::string prompt = trim(g.prompt), response = trim(g.response);
    if (prompt.empty() || response.empty()) {
      set.dropped.push_back(where + ": empty prompt or response");
      continue;
    }
    std::set<std::string> used = find_tokens(prompt);
    for (const auto& t : find_tokens(response)) used.insert(t);
    auto bad = std::find_if(used.begin(), used.end(), [&](const std::string& t) { return !allowed.count(t); });
    if (bad != used.end()) {
      set.dropped.push_back(where + ": undeclared token " + *bad);
      continue;
    }
    if (has_token_remnant(mask_placeholders(prompt)) || has_token_remnant(mask_placeholders(response))) {
      set.dropped.push_back(where + ": malformed placeholder");
      continue;
    }
    if (!seen.insert({prompt, response}).second) continue;
    ++kept;
    set.templates.push_back(Template{where + "/" + std::to_string(kept), req.node, req.task, std::move(prompt),
                                     std::move(response), std::move(used)});
  }
  return kept;
}

}  // namespace

std::vector<GenerationRequest> preprocess(const VerbalizedPlan& plan, NlpTask task) {
  std::vector<GenerationRequest> out;
  for (const auto& n : plan.nodes) out.push_back({n.rule_id, task, n.sentence, sorted_tokens(n.sentence)});
  if (task == NlpTask::Description && !plan.nodes.empty()) {
    std::string text;
    for (const auto& n : plan.nodes) text += (text.empty() ? "" : " ") + n.sentence;
    for (const auto& e : plan.edges) {
      const VerbalizedNode* from = plan.find(e.from);
      const VerbalizedNode* to = plan.find(e.to);
      text += " " + capitalize(to->head_description) + " build on " + from->head_description + ".";
    }
    out.push_back({std::string(kPlanNode), task, text, sorted_tokens(text)});
  }
  return out;
}

std::vector<GenerationRequest> preprocess_facts(const Glossary& glossary, const std::vector<std::string>& predicates,
                                                NlpTask task) {
  std::vector<GenerationRequest> out;
  if (task != NlpTask::QuestionAnswering && task != NlpTask::Description) return out;
  for (const auto& p : predicates) {
    const GlossaryEntry& e = glossary.at(p);
    std::string node = fact_node(p);
    std::string text = e.render(slot_tokens(node, e));
    out.push_back({node, task, text, sorted_tokens(text)});
  }
  return out;
}

TemplateSet generate_templates(const std::vector<GenerationRequest>& requests, BackendBoundary& boundary) {
  TemplateSet set;
  for (const auto& req : requests) {
    auto pairs = boundary.call(req);
    if (add_templates(set, req, pairs) == 0)
      throw BackendError("backend " + boundary.backend_name() + " returned no valid template for " + req.node + "/" +
                         task_name(req.task) +
                         (set.dropped.empty() ? std::string() : " (last problem: " + set.dropped.back() + ")"));
  }
  return set;
}

// ---------------------------------------------------------------------------
// Mapping

namespace {

using Resolver = std::function<std::optional<std::string>(const TokenRef&)>;

void instantiate(const Template& t, const Resolver& resolve, const std::string* node_sentence,
                 const std::string* step_sentence, CorpusPair base, MappingResult& out) {
  std::set<std::string> unresolved;
  base.prompt = substitute_tokens(t.prompt, resolve, &unresolved);
  if (node_sentence && step_sentence && t.response == *node_sentence)
    base.response = *step_sentence;
  else
    base.response = substitute_tokens(t.response, resolve, &unresolved);
  if (!unresolved.empty()) {
    out.skipped.push_back(t.template_id + ": no binding for " + *unresolved.begin());
    return;
  }
  base.task = t.task;
  base.template_id = t.template_id;
  out.pairs.push_back(std::move(base));
}

const std::string* node_text(const TemplateSet& set, const std::string& node, NlpTask task) {
  auto it = set.request_text.find({node, task});
  return it == set.request_text.end() ? nullptr : &it->second;
}

}  // namespace

MappingResult map_step(const TemplateSet& templates, NlpTask task, const VerbalizedStep& step) {
  MappingResult out;
  Resolver resolve = [&](const TokenRef& ref) -> std::optional<std::string> {
    if (ref.node != step.rule_id) return std::nullopt;
    auto it = step.slot_bindings.find(ref.var);
    if (it == step.slot_bindings.end()) return std::nullopt;
    return it->second;
  };
  const std::string* sentence = node_text(templates, step.rule_id, task);
  CorpusPair base;
  base.rule = step.rule_id;
  base.steps = step.contributions.empty() ? std::vector<StepId>{step.step_id} : step.contributions;
  for (const Template* t : templates.for_node(step.rule_id, task))
    instantiate(*t, resolve, sentence, &step.sentence, base, out);
  return out;
}

MappingResult map_fact(const TemplateSet& templates, NlpTask task, const Fact& fact, const Glossary& glossary) {
  MappingResult out;
  std::string node = fact_node(fact.atom.predicate);
  auto tmpls = templates.for_node(node, task);
  if (tmpls.empty()) return out;
  const GlossaryEntry& e = glossary.at(fact.atom.predicate, fact.atom.args.size());
  Resolver resolve = [&](const TokenRef& ref) -> std::optional<std::string> {
    if (ref.node != node) return std::nullopt;
    for (std::size_t i = 0; i < e.slots.size(); ++i)
      if (e.slots[i] == ref.var) return fact.atom.args[i].to_text();
    return std::nullopt;
  };
  CorpusPair base;
  base.rule = node;
  base.facts = {fact.id};
  for (const Template* t : tmpls) instantiate(*t, resolve, nullptr, nullptr, base, out);
  return out;
}

MappingResult map_plan(const TemplateSet& templates, NlpTask task) {
  MappingResult out;
  Resolver resolve = [](const TokenRef& ref) -> std::optional<std::string> { return ref.var; };
  CorpusPair base;
  base.rule = std::string(kPlanNode);
  for (const Template* t : templates.for_node(std::string(kPlanNode), task))
    instantiate(*t, resolve, nullptr, nullptr, base, out);
  return out;
}

MappingResult map_chase(const TemplateSet& templates, NlpTask task, const Chase& chase,
                        const std::vector<VerbalizedStep>& verbalized, const Glossary& glossary) {
  MappingResult out;
  auto merge = [&](MappingResult r) {
    for (auto& p : r.pairs) out.pairs.push_back(std::move(p));
    for (auto& s : r.skipped) out.skipped.push_back(std::move(s));
  };
  for (const auto& v : verbalized) merge(map_step(templates, task, v));
  for (const auto& f : chase.store.facts())
    if (f.extensional()) merge(map_fact(templates, task, f, glossary));
  merge(map_plan(templates, task));
  return out;
}

std::vector<CorpusPair> generate_ground_corpus(const FactStore& facts, const Glossary& glossary, NlpTask task) {
  TemplateSet set;
  for (const auto& req : preprocess_facts(glossary, facts.predicates(), task)) {
    const GlossaryEntry& e = glossary.at(req.node.substr(5));
    add_templates(set, req, fact_templates(e, task));
  }
  std::vector<CorpusPair> out;
  for (const auto& f : facts.facts()) {
    if (!f.extensional()) continue;
    for (auto& p : map_fact(set, task, f, glossary).pairs) out.push_back(std::move(p));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Serialization

std::string to_json_line(const CorpusPair& p) {
  json j;
  j["prompt"] = p.prompt;
  j["response"] = p.response;
  j["task"] = task_name(p.task);
  j["rule"] = p.rule;
  j["steps"] = p.steps;
  j["facts"] = p.facts;
  j["template"] = p.template_id;
  if (p.score)
    j["score"] = *p.score;
  else
    j["score"] = nullptr;
  return j.dump();
}

std::string write_corpus(const std::vector<CorpusPair>& pairs) {
  std::string out;
  for (const auto& p : pairs) out += to_json_line(p) + "\n";
  return out;
}

std::vector<CorpusPair> read_corpus(std::string_view text) {
  std::vector<CorpusPair> out;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      json j = json::parse(line);
      CorpusPair p;
      p.prompt = j.at("prompt").get<std::string>();
      p.response = j.at("response").get<std::string>();
      p.task = parse_task(j.at("task").get<std::string>());
      p.rule = j.at("rule").get<std::string>();
      p.steps = j.at("steps").get<std::vector<StepId>>();
      if (j.contains("facts")) p.facts = j["facts"].get<std::vector<FactId>>();
      p.template_id = j.at("template").get<std::string>();
      if (j.contains("score") && !j["score"].is_null()) p.score = j["score"].get<double>();
      out.push_back(std::move(p));
    } catch (const json::exception& e) {
      throw ParseError(std::string("corpus: ") + e.what(), {lineno, 1});
    } catch (const UsageError& e) {
      throw ParseError(std::string("corpus: ") + e.what(), {lineno, 1});
    }
  }
  return out;
}

std::string write_templates(const TemplateSet& set) {
  std::string out;
  for (const auto& t : set.templates) {
    json j;
    j["template"] = t.template_id;
    j["node"] = t.node;
    j["task"] = task_name(t.task);
    j["prompt"] = t.prompt;
    j["response"] = t.response;
    j["tokens"] = std::vector<std::string>(t.tokens.begin(), t.tokens.end());
    out += j.dump() + "\n";
  }
  return out;
}

}  // namespace chaseforge
