// Acceptance checks: one PASS/FAIL line per criterion, details indented below.
// Runs offline: printed tables, the scripted/replay case-study fixture and the
// cost fixture. Exit status is non-zero if any criterion fails other than the
// ones listed in kKnownUnattainable (each of those is explained when printed).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "ahp/backends.hpp"
#include "ahp/config.hpp"
#include "ahp/matrix.hpp"
#include "ahp/matrix_csv.hpp"
#include "ahp/pipeline.hpp"
#include "ahp/report.hpp"
#include "ahp/session.hpp"
#include "support/generators.hpp"
#include "support/paper_data.hpp"

using namespace ahp;
using Clock = std::chrono::steady_clock;

namespace {

const std::string kFixtures = AHP_FIXTURE_DIR;
const std::string kPaper = kFixtures + "/paper";

// Criterion 4 asks for 231 expert matrices, but the same text fixes the panel
// at 7 experts answering 1 top + 7 sub + 21 alternative matrices each, i.e. 203.
const std::map<int, std::string> kKnownUnattainable{
    {4, "231 expert matrices is not reachable: 7 experts x (1 + 7 + 21) matrices = 203"}};

struct Check {
  std::vector<std::string> notes;
  bool ok = true;

  void expect(bool cond, const std::string& what) {
    if (!cond) ok = false;
    notes.push_back(std::string(cond ? "ok   " : "MISS ") + what);
  }
  void near(double got, double want, double tol, const std::string& what) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%s = %.6f (want %.6f +/- %g)", what.c_str(), got, want, tol);
    expect(std::fabs(got - want) <= tol, buf);
  }
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

PipelineConfig paper_config(const std::string& name = "paper.ini") { return load_config(kPaper + "/" + name); }

SessionState full_run(const PipelineConfig& cfg, ExpertBackend& backend) {
  Pipeline p(cfg, backend, PromptLibrary{});
  auto s = p.start();
  p.run(s);
  return s;
}

nlohmann::json without_provenance(const SessionState& s) {
  auto j = to_json_value(s);
  j.erase("provenance");
  return j;
}

// ---------------------------------------------------------------------------

Check table1() {
  Check c;
  const auto t0 = Clock::now();
  auto [pv, r] = consistency(csv::load_matrix(kFixtures + "/table1_aggregated_top.csv"));
  const double dt = seconds_since(t0);
  const std::vector<double> want{0.120, 0.131, 0.099, 0.096, 0.126, 0.164, 0.264};
  for (std::size_t i = 0; i < want.size(); ++i) c.near(pv.weights[i], want[i], 0.005, "priority[" + pv.labels[i] + "]");
  c.near(r.lambda_max, 7.13, 0.05, "lambda_max");
  c.near(r.ci, 0.022, 0.002, "CI");
  c.near(r.cr, 0.016, 0.004, "CR");
  c.expect(dt < 1.0, "runtime " + std::to_string(dt) + " s < 1 s");
  return c;
}

Check table2() {
  Check c;
  auto [pv, r] = consistency(csv::load_matrix(kFixtures + "/table2_chen_se_awareness.csv"));
  const std::vector<double> want{0.539, 0.297, 0.164};
  for (std::size_t i = 0; i < 3; ++i) c.near(pv.weights[i], want[i], 0.002, "priority[" + pv.labels[i] + "]");
  c.expect(r.cr < 0.1, "CR " + std::to_string(r.cr) + " < 0.1");
  c.near(r.cr, 0.008, 0.001, "CR (RI = 0.58)");
  return c;
}

Check synthesis() {
  Check c;
  // Per-leaf alternative vectors: the aggregates of the recorded fixture run.
  const auto s = load_session(kPaper + "/recorded/session.json");
  std::vector<LeafAlternatives> locals;
  for (const auto& a : s.aggregates)
    if (a.level == MatrixLevel::alt) locals.push_back({a.node, a.priorities});
  std::vector<LeafWeight> globals;
  for (const auto& [leaf, g] : testing::paper_globals()) globals.push_back({leaf, g});
  c.expect(locals.size() == 21 && globals.size() == 21, "21 leaves on both sides");
  const auto scores = score_alternatives(globals, locals);
  const std::vector<std::pair<std::string, double>> want{
      {"Comprehensive Employee Training Programs", 0.2774}, {"Advanced Intrusion Detection Systems", 0.2240},
      {"Cloud-Based Data Backup Solutions", 0.1938},        {"Security Personnel Training Update", 0.1795},
      {"Physical Barrier Reinforcement", 0.1254}};
  for (const auto& [label, v] : want) c.near(scores.score_of(label), v, 0.003, "score[" + label + "]");
  std::vector<std::string> ranked;
  for (auto i : scores.ranking) ranked.push_back(scores.labels[i]);
  std::vector<std::string> want_rank;
  for (const auto& [label, v] : want) want_rank.push_back(label);
  c.expect(ranked == want_rank, "ranking Comprehensive > Advanced > Cloud > Security Personnel > Physical");
  return c;
}

Check counts() {
  Check c;
  auto cfg = paper_config();
  auto backend = ScriptedBackend::from_file(cfg.backend.script);
  const auto s = full_run(cfg, backend);
  const auto r = build_report(s);
  c.expect(r.counts.expert_matrices == 231,
           "expert matrices " + std::to_string(r.counts.expert_matrices) + " == 231");
  c.expect(r.counts.aggregates == 29, "aggregates " + std::to_string(r.counts.aggregates) + " == 29");
  c.expect(r.counts.criteria_proposed == 49 && r.counts.criteria_pool == 45,
           "criteria " + std::to_string(r.counts.criteria_proposed) + " -> " + std::to_string(r.counts.criteria_pool) +
               " == 49 -> 45");
  c.expect(r.counts.alternatives_proposed == 35,
           "alternative candidates " + std::to_string(r.counts.alternatives_proposed) + " == 35");
  c.expect(r.counts.leaves == 21, "leaf criteria " + std::to_string(r.counts.leaves) + " == 21");
  c.expect(r.counts.subcriteria_proposed == 147,
           "sub-criteria proposed " + std::to_string(r.counts.subcriteria_proposed) + " == 147");
  return c;
}

Check properties() {
  using namespace ahp::testing;
  Check c;
  constexpr int kCases = 1000;
  const auto t0 = Clock::now();
  std::mt19937_64 rng(2024);
  double worst_ci = 0, worst_sum = 0, worst_recip = 0, worst_perm = 0, worst_lambda = 0;
  for (int k = 0; k < kCases; ++k) {
    const auto n = random_order(rng);
    const auto w = random_weights(rng, n);
    auto [cpv, cr] = consistency(PairwiseMatrix::from_weights(labels(n), w));
    worst_ci = std::max(worst_ci, std::fabs(cr.ci));

    auto m = random_saaty(rng, n);
    auto [pv, r] = consistency(m);
    worst_sum = std::max(worst_sum, std::fabs(pv.sum() - 1.0));
    worst_lambda = std::max(worst_lambda, static_cast<double>(n) - r.lambda_max);

    std::vector<PairwiseMatrix> ms{m};
    const auto experts = std::uniform_int_distribution<int>(2, 9)(rng);
    for (int e = 1; e < experts; ++e) ms.push_back(random_saaty(rng, n));
    const auto agg = aggregate(ms, Aggregation::geometric);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) worst_recip = std::max(worst_recip, std::fabs(agg(i, j) * agg(j, i) - 1.0));

    const auto perm = random_permutation(rng, n);
    auto [ppv, pr] = consistency(m.permuted(perm));
    for (std::size_t i = 0; i < n; ++i)
      worst_perm = std::max(worst_perm, std::fabs(ppv.weights[i] - pv.weights[perm[i]]));
    worst_perm = std::max(worst_perm, std::fabs(pr.cr - r.cr));
  }
  const double dt = seconds_since(t0);
  auto fmt = [](double v) {
    char b[32];
    std::snprintf(b, sizeof b, "%.3g", v);
    return std::string(b);
  };
  c.expect(worst_ci <= 1e-9, "consistent matrices: max |CI| " + fmt(worst_ci) + " <= 1e-9 (1000 cases, n 3..9)");
  c.expect(worst_sum <= 1e-9, "priority sums: max |sum - 1| " + fmt(worst_sum) + " <= 1e-9");
  c.expect(worst_recip <= 1e-12, "geometric aggregation: max |a_ij a_ji - 1| " + fmt(worst_recip) + " <= 1e-12");
  c.expect(worst_perm <= 1e-9, "permutation equivariance: max deviation " + fmt(worst_perm) + " <= 1e-9");
  c.expect(worst_lambda <= 1e-9, "lambda_max >= n: max shortfall " + fmt(worst_lambda) + " <= 1e-9");
  c.expect(dt < 30.0, "runtime " + fmt(dt) + " s < 30 s");
  return c;
}

Check determinism() {
  Check c;
  auto cfg = paper_config();
  auto backend = ScriptedBackend::from_file(cfg.backend.script);
  const auto a = report_json(build_report(full_run(cfg, backend)));
  auto serial = cfg;
  serial.parallelism = 1;
  const auto b = report_json(build_report(full_run(serial, backend)));
  c.expect(a == b, "two scripted runs (parallelism 4 and 1) give byte-identical reports");

  for (std::size_t k = 0; k + 1 < kStageNames.size(); ++k) {
    const auto stop = static_cast<Stage>(k);
    Pipeline first(cfg, backend, PromptLibrary{});
    auto s = first.start();
    first.run(s, stop);
    // Round-trip through the on-disk form before resuming.
    auto resumed = session_from_json(nlohmann::json::parse(dump_session(s)));
    Pipeline second(cfg, backend, PromptLibrary{});
    second.check_resumable(resumed);
    second.run(resumed);
    c.expect(report_json(build_report(resumed)) == a,
             "interrupted after " + std::string(to_string(stop)) + " and resumed: same report");
  }
  return c;
}

Check cost() {
  Check c;
  const auto s = load_session(kPaper + "/cost_session.json");
  const auto r = session_cost(s, pricing_from_summary(s.config));
  c.expect(r.experts.size() == 7, "7 expert conversations");
  for (const auto& e : r.experts)
    c.expect(e.cents == 44, e.persona + ": " + std::to_string(e.tokens()) + " tokens -> " + std::to_string(e.cents) +
                                " cents == 44");
  c.expect(r.panel_cents == 308, "panel total " + std::to_string(r.panel_cents) + " cents == 308");
  return c;
}

Check replay() {
  Check c;
  auto cfg = paper_config("replay.ini");
  auto backend = ReplayBackend::from_file(cfg.backend.transcript);
  const auto replayed = full_run(cfg, backend);
  const auto recorded = load_session(kPaper + "/recorded/session.json");
  c.expect(replayed.backend == "replay", "session provenance names the replay backend");
  c.expect(without_provenance(replayed).dump(1) == without_provenance(recorded).dump(1),
           "every parsed artifact matches the recorded session byte for byte (provenance aside)");
  auto md = [](const SessionState& s) {
    auto r = build_report(s);
    r.backend.clear();
    return report_markdown(r);
  };
  c.expect(md(replayed) == md(recorded), "markdown report identical apart from the backend name");
  c.expect(replayed.scores && replayed.scores->best() == "Comprehensive Employee Training Programs",
           "best alternative: Comprehensive Employee Training Programs");
  return c;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Check()>>> criteria{
      {"Table 1 reproduction", table1},
      {"Table 2 oracle", table2},
      {"synthesis fixture", synthesis},
      {"count conservation", counts},
      {"property suites", properties},
      {"determinism and resume", determinism},
      {"cost model", cost},
      {"replay fidelity (stands in for live elicitation)", replay},
  };
  int unexpected = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    Check c;
    try {
      c = criteria[i].second();
    } catch (const std::exception& e) {
      c.ok = false;
      c.notes.push_back(std::string("MISS threw: ") + e.what());
    }
    std::printf("%s %d %s\n", c.ok ? "PASS" : "FAIL", id, criteria[i].first.c_str());
    for (const auto& n : c.notes) std::printf("    %s\n", n.c_str());
    if (!c.ok) {
      auto known = kKnownUnattainable.find(id);
      if (known != kKnownUnattainable.end())
        std::printf("    known: %s\n", known->second.c_str());
      else
        ++unexpected;
    }
  }
  return unexpected == 0 ? 0 : 1;
}
