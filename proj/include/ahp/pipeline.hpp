#pragma once

// Stage-by-stage driver: advice, personas, the three propose/ballot rounds,
// the three pairwise rounds, aggregation and synthesis. Each stage runs on a
// copy of the session and is committed (and checkpointed) only when it
// completes.

#include <atomic>
#include <exception>
#include <filesystem>
#include <functional>
#include <mutex>
#include <thread>

#include "ahp/config.hpp"
#include "ahp/repair.hpp"
#include "ahp/session.hpp"

namespace ahp {

// Runs work(0..count-1) on up to `parallelism` threads. Errors are rethrown
// in index order once every task has finished.
template <class F>
void fan_out(std::size_t count, int parallelism, F&& work) {
  std::vector<std::exception_ptr> errors(count);
  const std::size_t threads = std::min<std::size_t>(count, static_cast<std::size_t>(std::max(parallelism, 1)));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) try {
        work(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
  } else {
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (std::size_t i; (i = next.fetch_add(1)) < count;) try {
          work(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
    };
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

inline std::string join(const std::vector<std::string>& v, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? sep : "") + v[i];
  return out;
}

inline std::string numbered_list(const std::vector<std::string>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "\n" : "") + std::to_string(i + 1) + ". " + v[i];
  return out;
}

class Pipeline {
 public:
  Pipeline(PipelineConfig config, ExpertBackend& backend, PromptLibrary prompts,
           std::filesystem::path session_path = {})
      : cfg_(std::move(config)), backend_(backend), lib_(std::move(prompts)), path_(std::move(session_path)) {
    cfg_.validate();
  }

  const PipelineConfig& config() const { return cfg_; }

  SessionState start() const {
    SessionState s;
    s.config = config_summary(cfg_);
    s.backend = backend_.kind();
    s.templates = lib_.version();
    s.tree.goal = cfg_.goal;
    return s;
  }

  // A resumed session must have been produced by an equivalent config.
  void check_resumable(const SessionState& s) const {
    if (s.config != config_summary(cfg_))
      throw DataError("session was recorded with a different configuration; resume needs the same config");
    if (s.templates != lib_.version())
      throw DataError("session was recorded with different prompt templates (" + s.templates + " vs " +
                      lib_.version() + ")");
  }

  // Runs `stage` if it is the next one. Completed stages are a no-op.
  void run_stage(SessionState& session, Stage stage) {
    if (stage <= session.completed) return;
    if (stage != next_stage(session.completed))
      throw UsageError(std::string("stage ") + to_string(stage) + " cannot run before " +
                       to_string(next_stage(session.completed)));
    SessionState work = session;
    {
      std::lock_guard lk(mu_);
      failures_.clear();
    }
    try {
      execute(work, stage);
    } catch (const RepairExhausted&) {
      {
        std::lock_guard lk(mu_);
        for (auto& f : failures_) session.failures.push_back(std::move(f));
        failures_.clear();
      }
      checkpoint(session);
      throw;
    }
    work.completed = stage;
    checkpoint(work);
    session = std::move(work);
  }

  // Runs every remaining stage, or up to and including `stop_after`.
  void run(SessionState& session, std::optional<Stage> stop_after = std::nullopt,
           const std::function<void(Stage)>& on_stage = {}) {
    while (session.completed != Stage::done) {
      if (stop_after && session.completed >= *stop_after) return;
      const Stage s = next_stage(session.completed);
      run_stage(session, s);
      if (on_stage) on_stage(s);
    }
  }

 private:
  PipelineConfig cfg_;
  ExpertBackend& backend_;
  PromptLibrary lib_;
  std::filesystem::path path_;
  std::mutex mu_;
  std::vector<FailureRecord> failures_;

  void checkpoint(const SessionState& s) const {
    if (!path_.empty()) save_session(path_, s);
  }

  ContextBudget budget() const { return cfg_.context; }

  std::string carryover_text(const SessionState& s) const {
    std::vector<std::string> lines;
    if (!s.tree.top_level().empty()) {
      std::vector<std::string> top;
      for (const auto* c : s.tree.top_level()) top.push_back(c->label);
      lines.push_back("- Top-level criteria: " + join(top, ", ") + ".");
      for (const auto* c : s.tree.top_level()) {
        std::vector<std::string> kids;
        for (const auto* k : s.tree.children(c->label)) kids.push_back(k->label);
        if (!kids.empty()) lines.push_back("- Sub-criteria of " + c->label + ": " + join(kids, ", ") + ".");
      }
    }
    if (!s.tree.alternatives.empty()) lines.push_back("- Alternatives: " + join(s.tree.alternative_labels(), ", ") + ".");
    return lib_.render("carryover", {{"goal", cfg_.goal}, {"items", join(lines, "\n")}});
  }

  // One elicitation on a persona's active conversation: rotate when the
  // conversation is near its budget, retry once on a fresh conversation if
  // the message does not fit, and record the transcript of a hard failure.
  template <class T>
  Elicited<T> ask(const ExpertPersona& persona, ConversationLog& log, const std::string& carryover,
                  const std::string& prompt, const std::function<Parsed<T>(const std::string&)>& parse,
                  Stage stage) {
    const ElicitOptions opt{cfg_.max_repairs, budget(), to_string(stage)};
    if (!log.active.messages().empty() &&
        log.active.tokens() >= static_cast<int>(cfg_.context.rotate_at * cfg_.context.budget_tokens))
      log.rotate(carryover, cfg_.context.tokens_per_word);
    try {
      try {
        return elicit<T>(backend_, persona, log.active, prompt, parse, lib_, opt);
      } catch (const ContextBudgetExceeded&) {
        if (log.active.messages().empty()) throw;
        log.rotate(carryover, cfg_.context.tokens_per_word);
        return elicit<T>(backend_, persona, log.active, prompt, parse, lib_, opt);
      }
    } catch (const RepairExhausted& e) {
      std::lock_guard lk(mu_);
      failures_.push_back({to_string(stage), persona.id, e.what(), log.active});
      throw;
    }
  }

  // Per-expert work over the panel; `body(e)` returns the repairs it used.
  void each_expert(SessionState& s, Stage stage, const std::function<int(std::size_t)>& body) {
    std::vector<int> repairs(s.personas.size(), 0);
    fan_out(s.personas.size(), cfg_.parallelism, [&](std::size_t e) { repairs[e] = body(e); });
    for (std::size_t e = 0; e < repairs.size(); ++e)
      if (repairs[e] > 0) s.repairs.push_back({to_string(stage), s.personas[e].id, repairs[e]});
  }

  void execute(SessionState& s, Stage stage) {
    switch (stage) {
      case Stage::advise: return advise(s);
      case Stage::personas: return personas(s);
      case Stage::criteria: return criteria(s);
      case Stage::subcriteria: return subcriteria(s);
      case Stage::alternatives: return alternatives(s);
      case Stage::pairwise_top: return pairwise_top(s);
      case Stage::pairwise_sub: return pairwise_sub(s);
      case Stage::pairwise_alt: return pairwise_alt(s);
      case Stage::aggregate: return aggregate_stage(s);
      case Stage::synthesize: return synthesize(s);
      default: return;  // init, done: cursor only
    }
  }

  ConversationLog& guide_log(SessionState& s) const {
    if (!s.guide_log) {
      const auto& g = guide_persona();
      s.guide_log = ConversationLog{{}, Conversation(g.id, g.instructions, cfg_.context.tokens_per_word)};
    }
    return *s.guide_log;
  }

  // --- stages ---------------------------------------------------------------

  void advise(SessionState& s) {
    auto& adv = s.advice;
    if (!cfg_.skip_advice) {
      const auto& g = guide_persona();
      auto& log = guide_log(s);
      const auto carry = carryover_text(s);
      using Range = std::optional<std::pair<int, int>>;
      auto r = ask<Range>(g, log, carry, lib_.render("advise_experts", {{"goal", cfg_.goal}}),
                          [](const std::string& reply) {
                            Parsed<Range> p;
                            p.value = parse_expert_count_advice(reply);
                            return p;
                          },
                          Stage::advise);
      adv.expert_range = r.value;
      if (!adv.expert_range) adv.warnings.push_back("could not read an expert count from the guide's advice");
      auto l = ask<std::optional<int>>(g, log, carry, lib_.render("advise_levels", {}),
                                       [](const std::string& reply) {
                                         Parsed<std::optional<int>> p;
                                         p.value = parse_levels_advice(reply);
                                         return p;
                                       },
                                       Stage::advise);
      adv.levels = l.value;
      if (!adv.levels)
        adv.warnings.push_back("could not read a level count from the guide's advice; using 2");
      else if (*adv.levels != 2)
        adv.warnings.push_back("guide suggested " + std::to_string(*adv.levels) +
                               " criteria levels; clamped to 2");
    }
    if (cfg_.expert_count)
      s.expert_count = *cfg_.expert_count;
    else if (adv.expert_range)
      s.expert_count = std::max(2, adv.expert_range->second);
    else {
      s.expert_count = 7;
      if (!cfg_.skip_advice) adv.warnings.push_back("expert count defaulted to 7");
    }
  }

  void personas(SessionState& s) {
    const auto n = static_cast<std::size_t>(s.expert_count);
    if (!cfg_.personas_file.empty()) {
      auto j = read_json_file(cfg_.personas_file);
      try {
        s.personas = j.get<std::vector<ExpertPersona>>();
      } catch (const nlohmann::json::exception& e) {
        throw DataError("persona file '" + cfg_.personas_file + "': " + e.what());
      }
      if (s.personas.size() != n)
        throw DataError("persona file has " + std::to_string(s.personas.size()) + " personas, expected " +
                        std::to_string(n));
    } else {
      auto& log = guide_log(s);
      auto r = ask<std::vector<ExpertPersona>>(
          guide_persona(), log, carryover_text(s), lib_.render("personas", {{"n", std::to_string(n)}}),
          [n](const std::string& reply) { return parse_personas(reply, n); }, Stage::personas);
      if (r.repairs) s.repairs.push_back({to_string(Stage::personas), guide_persona().id, r.repairs});
      s.personas = std::move(r.value);
    }
    check_panel(s.personas);
    for (const auto& p : s.personas)
      if (p.id == guide_persona().id) throw DataError("expert id '" + p.id + "' is reserved for the guide");
    s.expert_logs.clear();
    for (const auto& p : s.personas)
      s.expert_logs.push_back({{}, Conversation(p.id, p.instructions, cfg_.context.tokens_per_word)});
  }

  // Ballot round over a deduplicated pool; one ballot per expert in panel order.
  std::vector<ScoreBallot> ballots(SessionState& s, Stage stage, const std::vector<std::string>& labels,
                                   const std::function<std::string()>& prompt) {
    std::vector<ScoreBallot> out(s.personas.size());
    const auto carry = carryover_text(s);
    const auto text = prompt();
    each_expert(s, stage, [&](std::size_t e) {
      const auto& p = s.personas[e];
      auto r = ask<ScoreBallot>(p, s.expert_logs[e], carry, text,
                                [&](const std::string& reply) { return parse_ballot(reply, labels, p.id); }, stage);
      out[e] = std::move(r.value);
      return r.repairs;
    });
    return out;
  }

  CandidatePool pool_of(const std::string& stage, const std::string& parent, const SessionState& s,
                        const std::vector<std::vector<std::string>>& proposals) const {
    CandidatePool pool{stage, parent, {}, {}};
    for (std::size_t e = 0; e < proposals.size(); ++e)
      for (const auto& label : proposals[e]) pool.items.push_back({label, s.personas[e].id});
    return pool;
  }

  void criteria(SessionState& s) {
    const auto n = static_cast<std::size_t>(cfg_.top_criteria);
    std::vector<std::vector<std::string>> proposals(s.personas.size());
    const auto carry = carryover_text(s);
    const auto prompt = lib_.render("criteria", {{"goal", cfg_.goal}, {"n", std::to_string(n)}});
    each_expert(s, Stage::criteria, [&](std::size_t e) {
      auto r = ask<std::vector<std::string>>(s.personas[e], s.expert_logs[e], carry, prompt,
                                             [n](const std::string& reply) { return parse_item_list(reply, n, 3); },
                                             Stage::criteria);
      proposals[e] = std::move(r.value);
      return r.repairs;
    });
    auto& round = s.criteria;
    round.proposed = pool_of("criteria", "", s, proposals);
    round.pool = dedupe(round.proposed, make_aliases(cfg_.aliases));
    const auto labels = round.pool.labels();
    round.ballots = ballots(s, Stage::criteria, labels, [&] {
      return lib_.render("criteria_ballot", {{"n", std::to_string(labels.size())}, {"items", numbered_list(labels)}});
    });
    round.tally = tally_and_select(round.ballots, round.pool, n);
    s.tree.criteria.clear();
    for (const auto& label : round.tally.selected) s.tree.criteria.push_back({label, 1, std::nullopt, {}, {}});
  }

  std::vector<std::string> top_labels(const SessionState& s) const {
    std::vector<std::string> out;
    for (const auto* c : s.tree.top_level()) out.push_back(c->label);
    return out;
  }

  void subcriteria(SessionState& s) {
    const auto n = static_cast<std::size_t>(cfg_.sub_per_criterion);
    const auto parents = top_labels(s);
    std::vector<std::vector<std::vector<std::string>>> proposals(s.personas.size());
    const auto carry = carryover_text(s);
    const auto prompt = lib_.render("subcriteria", {{"n", std::to_string(n)}, {"items", join(parents, ", ")}});
    each_expert(s, Stage::subcriteria, [&](std::size_t e) {
      auto r = ask<std::vector<std::vector<std::string>>>(
          s.personas[e], s.expert_logs[e], carry, prompt,
          [&](const std::string& reply) { return parse_sectioned_lists(reply, parents, n, 3); }, Stage::subcriteria);
      proposals[e] = std::move(r.value);
      return r.repairs;
    });
    const auto aliases = make_aliases(cfg_.aliases);
    s.subcriteria.clear();
    for (std::size_t k = 0; k < parents.size(); ++k) {
      std::vector<std::vector<std::string>> per_parent;
      for (const auto& p : proposals) per_parent.push_back(p[k]);
      ElicitationRound round;
      round.parent = parents[k];
      round.proposed = pool_of("subcriteria", parents[k], s, per_parent);
      round.pool = dedupe(round.proposed, aliases);
      s.subcriteria.push_back(std::move(round));
    }
    // One ballot per expert per parent, asked parent by parent.
    std::vector<std::vector<ScoreBallot>> by_expert(s.personas.size());
    each_expert(s, Stage::subcriteria, [&](std::size_t e) {
      int repairs = 0;
      const auto& p = s.personas[e];
      for (const auto& round : s.subcriteria) {
        const auto labels = round.pool.labels();
        const auto text = lib_.render("subcriteria_ballot", {{"n", std::to_string(labels.size())},
                                                             {"parent", round.parent},
                                                             {"items", numbered_list(labels)}});
        auto r = ask<ScoreBallot>(p, s.expert_logs[e], carry, text,
                                  [&](const std::string& reply) { return parse_ballot(reply, labels, p.id); },
                                  Stage::subcriteria);
        by_expert[e].push_back(std::move(r.value));
        repairs += r.repairs;
      }
      return repairs;
    });
    for (std::size_t k = 0; k < s.subcriteria.size(); ++k) {
      auto& round = s.subcriteria[k];
      for (auto& b : by_expert) round.ballots.push_back(b[k]);
      round.tally = tally_and_select(round.ballots, round.pool, n);
      for (const auto& label : round.tally.selected)
        s.tree.criteria.push_back({label, 2, round.parent, {}, {}});
    }
  }

  void alternatives(SessionState& s) {
    const auto n = static_cast<std::size_t>(cfg_.alternatives_per_expert);
    std::vector<std::vector<std::string>> proposals(s.personas.size());
    const auto carry = carryover_text(s);
    const auto prompt = lib_.render("alternatives", {{"n", std::to_string(n)}, {"goal", cfg_.goal}});
    each_expert(s, Stage::alternatives, [&](std::size_t e) {
      auto r = ask<std::vector<std::string>>(s.personas[e], s.expert_logs[e], carry, prompt,
                                             [n](const std::string& reply) { return parse_item_list(reply, n, 6); },
                                             Stage::alternatives);
      proposals[e] = std::move(r.value);
      return r.repairs;
    });
    auto& round = s.alternatives;
    round.proposed = pool_of("alternatives", "", s, proposals);
    round.pool = dedupe(round.proposed, make_aliases(cfg_.aliases));
    const auto labels = round.pool.labels();
    round.ballots = ballots(s, Stage::alternatives, labels, [&] {
      return lib_.render("alternatives_ballot", {{"goal", cfg_.goal},
                                                 {"n", std::to_string(labels.size())},
                                                 {"items", numbered_list(labels)}});
    });
    round.tally = tally_and_select(round.ballots, round.pool, static_cast<std::size_t>(cfg_.final_alternatives));
    s.tree.alternatives.clear();
    for (const auto& label : round.tally.selected) s.tree.alternatives.push_back({label, std::nullopt});
  }

  // Matrix rounds. Each expert answers a sequence of batched prompts; results
  // are appended expert-major in panel order.
  struct Batch {
    std::string prompt;
    std::vector<MatrixRequest> requests;
  };

  void matrix_round(SessionState& s, Stage stage, MatrixLevel level, const std::vector<Batch>& batches,
                    bool rotate_first) {
    const auto carry = carryover_text(s);
    std::vector<std::vector<ExpertMatrix>> got(s.personas.size());
    each_expert(s, stage, [&](std::size_t e) {
      const auto& p = s.personas[e];
      auto& log = s.expert_logs[e];
      if (rotate_first && !log.active.messages().empty()) log.rotate(carry, cfg_.context.tokens_per_word);
      int repairs = 0;
      for (const auto& b : batches) {
        auto r = ask<std::vector<PairwiseMatrix>>(
            p, log, carry, b.prompt, [&](const std::string& reply) { return parse_matrix_batch(reply, b.requests); },
            stage);
        for (std::size_t k = 0; k < b.requests.size(); ++k)
          got[e].push_back({level, b.requests[k].name, p.id, std::move(r.value[k])});
        repairs += r.repairs;
      }
      return repairs;
    });
    for (auto& g : got)
      for (auto& m : g) s.matrices.push_back(std::move(m));
  }

  void pairwise_top(SessionState& s) {
    const auto labels = top_labels(s);
    Batch b{lib_.render("pairwise_top", {{"items", join(labels, ", ")},
                                         {"goal", cfg_.goal},
                                         {"scale_instructions", prompts::kScaleInstructions}}),
            {{s.tree.goal, labels}}};
    matrix_round(s, Stage::pairwise_top, MatrixLevel::top, {b}, false);
  }

  void pairwise_sub(SessionState& s) {
    std::vector<const CriterionNode*> parents;
    for (const auto* c : s.tree.top_level())
      if (!s.tree.children(c->label).empty()) parents.push_back(c);
    std::vector<Batch> batches;
    const auto size = static_cast<std::size_t>(cfg_.matrix_batch_size);
    for (std::size_t i = 0; i < parents.size(); i += size) {
      Batch b;
      std::vector<std::string> outline;
      for (std::size_t k = i; k < std::min(parents.size(), i + size); ++k) {
        std::vector<std::string> kids;
        for (const auto* c : s.tree.children(parents[k]->label)) kids.push_back(c->label);
        std::string block = parents[k]->label + ":";
        for (const auto& kid : kids) block += "\n  - " + kid;
        outline.push_back(block);
        b.requests.push_back({parents[k]->label, kids});
      }
      b.prompt = lib_.render("pairwise_sub", {{"n", std::to_string(cfg_.sub_per_criterion)},
                                              {"items", join(outline, "\n")},
                                              {"scale_instructions", prompts::kScaleInstructions}});
      batches.push_back(std::move(b));
    }
    matrix_round(s, Stage::pairwise_sub, MatrixLevel::sub, batches, true);
  }

  void pairwise_alt(SessionState& s) {
    const auto leaves = s.tree.leaves();
    const auto alts = s.tree.alternative_labels();
    std::vector<Batch> batches;
    const auto size = static_cast<std::size_t>(cfg_.matrix_batch_size);
    for (std::size_t i = 0; i < leaves.size(); i += size) {
      Batch b;
      std::vector<std::string> names;
      for (std::size_t k = i; k < std::min(leaves.size(), i + size); ++k) {
        names.push_back(leaves[k]->label);
        b.requests.push_back({leaves[k]->label, alts});
      }
      b.prompt = lib_.render("pairwise_alt", {{"n", std::to_string(names.size())},
                                              {"items", join(names, ", ")},
                                              {"alternatives", join(alts, ", ")},
                                              {"scale_instructions", prompts::kScaleInstructions}});
      batches.push_back(std::move(b));
    }
    matrix_round(s, Stage::pairwise_alt, MatrixLevel::alt, batches, true);
  }

  AggregateRecord aggregate_node(const SessionState& s, MatrixLevel level, const std::string& node) const {
    std::vector<PairwiseMatrix> ms;
    for (const auto& m : s.matrices)
      if (m.level == level && m.node == node) ms.push_back(m.matrix);
    if (ms.size() != s.personas.size())
      throw DataError("node '" + node + "' has " + std::to_string(ms.size()) + " expert matrices, expected " +
                      std::to_string(s.personas.size()));
    AggregateRecord a;
    a.level = level;
    a.node = node;
    a.matrix = aggregate(ms, cfg_.aggregation);
    auto [pv, rep] = consistency(a.matrix, cfg_.cr_threshold);
    a.priorities = std::move(pv);
    a.consistency = rep;
    a.flagged = !rep.consistent;
    if (a.flagged && cfg_.strict)
      throw DataError("aggregate matrix for '" + node + "' is inconsistent (CR " + format_fixed(rep.cr, 4) +
                      " >= " + format_fixed(cfg_.cr_threshold, 4) + ") and strict consistency is on");
    return a;
  }

  void aggregate_stage(SessionState& s) {
    s.aggregates.clear();
    s.aggregates.push_back(aggregate_node(s, MatrixLevel::top, s.tree.goal));
    for (const auto* c : s.tree.top_level())
      if (!s.tree.children(c->label).empty()) s.aggregates.push_back(aggregate_node(s, MatrixLevel::sub, c->label));
    for (const auto* leaf : s.tree.leaves()) s.aggregates.push_back(aggregate_node(s, MatrixLevel::alt, leaf->label));

    for (const auto& a : s.aggregates) {
      if (a.level == MatrixLevel::alt) continue;
      for (auto& c : s.tree.criteria) {
        const bool mine = a.level == MatrixLevel::top ? c.level == 1 : (c.level == 2 && c.parent == a.node);
        if (mine) c.local_priority = a.priorities.weight_of(c.label);
      }
    }
    s.tree = global_leaf_priorities(std::move(s.tree));
  }

  void synthesize(SessionState& s) {
    std::vector<LeafWeight> weights;
    for (const auto* leaf : s.tree.leaves()) weights.push_back({leaf->label, *leaf->global_priority});
    std::vector<LeafAlternatives> locals;
    for (const auto& a : s.aggregates)
      if (a.level == MatrixLevel::alt) locals.push_back({a.node, a.priorities});
    s.scores = score_alternatives(weights, locals);
    for (auto& alt : s.tree.alternatives) alt.score = s.scores->score_of(alt.label);
  }
};

}  // namespace ahp
