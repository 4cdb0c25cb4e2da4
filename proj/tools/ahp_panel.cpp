// ahp-panel: run the virtual-expert AHP pipeline, or use the AHP arithmetic
// on its own.
//
// Exit codes: 0 ok, 1 usage, 2 data/validation, 3 backend.
// With --json, machine-readable output (including errors) goes to stdout and
// everything meant for humans goes to stderr.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>

#include "CLI11.hpp"
#include "ahp/backends.hpp"
#include "ahp/live_backend.hpp"
#include "ahp/matrix_csv.hpp"
#include "ahp/pipeline.hpp"
#include "ahp/report.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Options {
  bool json = false;
  std::string config;
  std::string backend;
  std::string session;
  std::string out;
  bool strict = false;
  int parallelism = 0;
  std::string stop_after;
  std::string record;
  std::vector<std::string> matrices;
  std::string aggregation = "geometric";
  double tolerance = ahp::kDefaultReciprocityTolerance;
  double cr_threshold = ahp::kDefaultCrThreshold;
  std::optional<double> blended, input_rate, output_rate;
  std::string format = "outline";
};

std::ostream& human(const Options& o) { return o.json ? std::cerr : std::cout; }

void emit_json(const json& j) { std::cout << j.dump(2) << "\n"; }

ahp::PipelineConfig load_run_config(const Options& o) {
  if (o.config.empty()) throw ahp::UsageError("--config is required");
  auto c = ahp::load_config(o.config);
  if (!o.backend.empty()) c.backend.kind = ahp::parse_backend_kind(o.backend);
  if (o.strict) c.strict = true;
  if (o.parallelism > 0) c.parallelism = o.parallelism;
  c.validate();
  return c;
}

std::unique_ptr<ahp::ExpertBackend> make_backend(const ahp::PipelineConfig& c) {
  switch (c.backend.kind) {
    case ahp::BackendKind::live:
      return std::make_unique<ahp::LiveBackend>(c.backend.live);
    case ahp::BackendKind::replay:
      if (c.backend.transcript.empty()) throw ahp::DataError("config: replay backend needs [backend] transcript");
      return std::make_unique<ahp::ReplayBackend>(ahp::ReplayBackend::from_file(c.backend.transcript));
    default:
      if (c.backend.script.empty()) throw ahp::DataError("config: scripted backend needs [backend] script");
      return std::make_unique<ahp::ScriptedBackend>(ahp::ScriptedBackend::from_file(c.backend.script));
  }
}

ahp::PromptLibrary load_prompts(const ahp::PipelineConfig& c) {
  return c.prompt_dir.empty() ? ahp::PromptLibrary{} : ahp::PromptLibrary::from_directory(c.prompt_dir);
}

fs::path out_dir(const Options& o) { return o.out.empty() ? fs::path(".") : fs::path(o.out); }

fs::path session_path(const Options& o) {
  return o.session.empty() ? out_dir(o) / "session.json" : fs::path(o.session);
}

std::vector<ahp::ConversationLog> all_logs(const ahp::SessionState& s) {
  std::vector<ahp::ConversationLog> logs;
  if (s.guide_log) logs.push_back(*s.guide_log);
  logs.insert(logs.end(), s.expert_logs.begin(), s.expert_logs.end());
  return logs;
}

// Report files next to the session; returns the summary printed for the run.
json finish(const Options& o, const ahp::SessionState& s, const fs::path& spath) {
  const auto dir = out_dir(o);
  const auto report = ahp::build_report(s);
  ahp::write_file_atomic(dir / "report.json", ahp::report_json(report));
  ahp::write_file_atomic(dir / "report.md", ahp::report_markdown(report));
  if (!o.record.empty()) {
    json t = ahp::transcript_from_logs(all_logs(s));
    ahp::write_file_atomic(o.record, t.dump(1) + "\n");
  }
  json j = {{"session", spath.string()},
            {"report", (dir / "report.json").string()},
            {"markdown", (dir / "report.md").string()},
            {"completed", ahp::to_string(s.completed)}};
  j["best"] = s.scores ? json(s.scores->best()) : json(nullptr);
  if (o.json) {
    emit_json(j);
  } else {
    human(o) << "stage reached: " << ahp::to_string(s.completed) << "\n";
    if (s.scores) human(o) << "best alternative: " << s.scores->best() << " (" << ahp::format_fixed(s.scores->score_of(s.scores->best()), 4) << ")\n";
    human(o) << "session: " << spath.string() << "\nreport: " << (dir / "report.md").string() << "\n";
  }
  for (const auto& f : report.flagged) std::cerr << "warning: inconsistent aggregate " << f << "\n";
  return j;
}

std::optional<ahp::Stage> stop_stage(const Options& o) {
  if (o.stop_after.empty()) return std::nullopt;
  return ahp::parse_stage(o.stop_after);
}

void progress(ahp::Stage s) { std::cerr << "completed stage " << ahp::to_string(s) << "\n"; }

int cmd_run(const Options& o) {
  const auto cfg = load_run_config(o);
  const auto stop = stop_stage(o);
  auto prompts = load_prompts(cfg);
  auto backend = make_backend(cfg);  // credential problems surface here, before any file is written
  const auto spath = session_path(o);
  ahp::Pipeline p(cfg, *backend, std::move(prompts), spath);
  auto s = p.start();
  ahp::save_session(spath, s);
  p.run(s, stop, progress);
  finish(o, s, spath);
  return 0;
}

int cmd_resume(const Options& o) {
  if (o.session.empty()) throw ahp::UsageError("--session is required");
  const auto cfg = load_run_config(o);
  const auto stop = stop_stage(o);
  auto s = ahp::load_session(o.session);
  if (s.completed == ahp::Stage::done) {  // nothing left to ask anyone
    finish(o, s, o.session);
    return 0;
  }
  auto prompts = load_prompts(cfg);
  auto backend = make_backend(cfg);
  ahp::Pipeline p(cfg, *backend, std::move(prompts), o.session);
  p.check_resumable(s);
  p.run(s, stop, progress);
  finish(o, s, o.session);
  return 0;
}

std::vector<ahp::PairwiseMatrix> load_matrices(const Options& o) {
  if (o.matrices.empty()) throw ahp::UsageError("at least one matrix file is required");
  std::vector<ahp::PairwiseMatrix> ms;
  for (const auto& f : o.matrices) ms.push_back(ahp::csv::load_matrix(f));
  return ms;
}

int cmd_compute(const Options& o) {
  const auto ms = load_matrices(o);
  const auto method = ahp::parse_aggregation(o.aggregation);
  const auto m = ms.size() == 1 ? (ahp::require_valid(ms[0], o.tolerance), ms[0]) : ahp::aggregate(ms, method, o.tolerance);
  const auto [pv, rep] = ahp::consistency(m, o.cr_threshold);
  if (o.json) {
    json j = {{"priorities", pv}, {"consistency", rep}, {"matrices", ms.size()}};
    if (ms.size() > 1) j["aggregate"] = m, j["aggregation"] = ahp::to_string(method);
    emit_json(j);
    return 0;
  }
  auto& out = human(o);
  if (ms.size() > 1) out << "aggregated " << ms.size() << " matrices (" << ahp::to_string(method) << ")\n";
  std::size_t width = 0;
  for (const auto& l : pv.labels) width = std::max(width, l.size());
  for (std::size_t i = 0; i < pv.labels.size(); ++i)
    out << pv.labels[i] << std::string(width + 2 - pv.labels[i].size(), ' ') << ahp::format_fixed(pv.weights[i], 4) << "\n";
  out << "lambda_max " << ahp::format_fixed(rep.lambda_max, 4) << "\nCI " << ahp::format_fixed(rep.ci, 4) << "\nRI "
      << ahp::format_fixed(rep.ri, 2) << "\nCR " << ahp::format_fixed(rep.cr, 4) << "\n"
      << (rep.consistent ? "consistent" : "inconsistent") << " (threshold " << o.cr_threshold << ")\n";
  return 0;
}

int cmd_validate(const Options& o) {
  json results = json::array();
  bool ok = true;
  if (!o.config.empty()) {
    auto c = ahp::load_config(o.config);
    results.push_back({{"file", o.config}, {"kind", "config"}, {"ok", true}});
    (void)c;
  }
  if (!o.session.empty()) {
    auto s = ahp::load_session(o.session);
    results.push_back({{"file", o.session}, {"kind", "session"}, {"ok", true}, {"completed", ahp::to_string(s.completed)}});
  }
  for (const auto& f : o.matrices) {
    auto m = ahp::csv::load_matrix(f);
    auto v = ahp::validate_pairwise(m, o.tolerance);
    json viol = json::array();
    for (const auto& x : v.violations) viol.push_back({{"rule", x.rule}, {"message", x.message}});
    results.push_back({{"file", f}, {"kind", "matrix"}, {"ok", v.ok()}, {"violations", viol}});
    ok = ok && v.ok();
  }
  if (results.empty()) throw ahp::UsageError("nothing to validate: give matrix files, --config or --session");
  if (o.json) emit_json({{"ok", ok}, {"results", results}});
  auto& out = o.json ? std::cerr : std::cout;
  for (const auto& r : results) {
    out << r["file"].get<std::string>() << ": " << (r["ok"].get<bool>() ? "ok" : "INVALID") << "\n";
    if (r.contains("violations"))
      for (const auto& v : r["violations"]) out << "  " << v["message"].get<std::string>() << "\n";
  }
  if (!ok) {
    if (!o.json) std::cerr << "error: validation failed\n";
    return static_cast<int>(ahp::ErrorKind::data);
  }
  return 0;
}

int cmd_report(const Options& o) {
  if (o.session.empty()) throw ahp::UsageError("--session is required");
  const auto report = ahp::build_report(ahp::load_session(o.session));
  if (!o.out.empty()) {
    ahp::write_file_atomic(fs::path(o.out) / "report.json", ahp::report_json(report));
    ahp::write_file_atomic(fs::path(o.out) / "report.md", ahp::report_markdown(report));
  }
  if (o.json)
    std::cout << ahp::report_json(report);
  else
    std::cout << ahp::report_markdown(report);
  return 0;
}

int cmd_estimate_cost(const Options& o) {
  if (o.session.empty()) throw ahp::UsageError("--session is required");
  const auto s = ahp::load_session(o.session);
  ahp::Pricing p;
  if (o.blended || o.input_rate || o.output_rate) {
    p.blended_per_1k = o.blended;
    p.per_1k_input = o.input_rate;
    p.per_1k_output = o.output_rate;
  } else {
    p = ahp::pricing_from_summary(s.config);
  }
  if (!ahp::has_pricing(p))
    throw ahp::UsageError("no pricing: pass --blended or --input-rate and --output-rate, or set [pricing] in the config");
  const auto r = ahp::session_cost(s, p);
  if (o.json) {
    emit_json(r);
    return 0;
  }
  auto& out = human(o);
  for (const auto* group : {&r.experts, &r.guide})
    for (const auto& c : *group)
      out << c.persona << " (" << c.role << "): " << c.tokens() << " tokens, " << ahp::format_cents(c.cents) << "\n";
  out << "panel total: " << ahp::format_cents(r.panel_cents) << "\nguide: " << ahp::format_cents(r.guide_cents)
      << "\ntotal: " << ahp::format_cents(r.total_cents) << " (headline $" << r.headline_dollars << ")\n"
      << "pricing: " << r.pricing << "\nrounding: " << r.rounding_rule << "\n";
  return 0;
}

int cmd_export_tree(const Options& o) {
  if (o.session.empty()) throw ahp::UsageError("--session is required");
  const auto s = ahp::load_session(o.session);
  if (o.json) {
    emit_json(s.tree);
    return 0;
  }
  ahp::TreeFormat f;
  if (o.format == "outline")
    f = ahp::TreeFormat::outline;
  else if (o.format == "dot")
    f = ahp::TreeFormat::graph;
  else
    throw ahp::UsageError("unknown tree format '" + o.format + "' (outline or dot)");
  std::cout << ahp::export_tree(s.tree, f);
  return 0;
}

int report_error(const Options& o, ahp::ErrorKind kind, const std::string& code, const std::string& msg) {
  if (o.json) emit_json({{"error", {{"code", code}, {"exit_code", static_cast<int>(kind)}, {"message", msg}}}});
  std::cerr << "error: " << msg << "\n";
  return static_cast<int>(kind);
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  CLI::App app{"AHP decision pipeline with a panel of LLM-backed virtual experts"};
  app.require_subcommand(1);
  app.add_flag("--json", o.json, "machine-readable output on stdout");

  auto run_flags = [&o](CLI::App* c) {
    c->add_option("--config", o.config, "pipeline config (INI)")->check(CLI::ExistingFile);
    c->add_option("--backend", o.backend, "override the configured backend")
        ->check(CLI::IsMember({"live", "replay", "scripted"}));
    c->add_option("--out", o.out, "directory for the session and report files");
    c->add_flag("--strict-consistency", o.strict, "abort when an aggregate matrix is inconsistent");
    c->add_option("--parallelism", o.parallelism, "concurrent expert conversations")->check(CLI::PositiveNumber);
    c->add_option("--stop-after", o.stop_after, "stop after this stage");
    c->add_option("--record", o.record, "write a replay transcript of every exchange");
    c->add_flag("--json", o.json, "machine-readable output on stdout");
  };

  auto* run = app.add_subcommand("run", "run the pipeline from the start");
  run_flags(run);
  run->add_option("--session", o.session, "session file (default <out>/session.json)");

  auto* resume = app.add_subcommand("resume", "continue an interrupted session");
  run_flags(resume);
  resume->add_option("--session", o.session, "session file")->required();

  auto* compute = app.add_subcommand("compute", "priorities and consistency of a matrix (several are aggregated)");
  compute->add_option("matrices", o.matrices, "matrix CSV files")->required()->check(CLI::ExistingFile);
  compute->add_option("--aggregation", o.aggregation, "geometric or arithmetic")
      ->check(CLI::IsMember({"geometric", "arithmetic"}));
  compute->add_option("--tolerance", o.tolerance, "reciprocity tolerance");
  compute->add_option("--cr-threshold", o.cr_threshold, "consistency threshold");
  compute->add_flag("--json", o.json, "machine-readable output on stdout");

  auto* validate = app.add_subcommand("validate", "check matrix files, a config or a session");
  validate->add_option("matrices", o.matrices, "matrix CSV files")->check(CLI::ExistingFile);
  validate->add_option("--config", o.config, "pipeline config")->check(CLI::ExistingFile);
  validate->add_option("--session", o.session, "session file")->check(CLI::ExistingFile);
  validate->add_option("--tolerance", o.tolerance, "reciprocity tolerance");
  validate->add_flag("--json", o.json, "machine-readable output on stdout");

  auto* report = app.add_subcommand("report", "render the report of a session");
  report->add_option("--session", o.session, "session file")->required();
  report->add_option("--out", o.out, "also write report.json and report.md here");
  report->add_flag("--json", o.json, "print the JSON report instead of markdown");

  auto* cost = app.add_subcommand("estimate-cost", "token cost of a session's conversations");
  cost->add_option("--session", o.session, "session file")->required();
  cost->add_option("--blended", o.blended, "blended $ per 1k tokens");
  cost->add_option("--input-rate", o.input_rate, "$ per 1k input tokens");
  cost->add_option("--output-rate", o.output_rate, "$ per 1k output tokens");
  cost->add_flag("--json", o.json, "machine-readable output on stdout");

  auto* tree = app.add_subcommand("export-tree", "print the hierarchy of a session");
  tree->add_option("--session", o.session, "session file")->required();
  tree->add_option("--format", o.format, "outline or dot");
  tree->add_flag("--json", o.json, "print the tree as JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report_error(o, ahp::ErrorKind::usage, "usage", e.what());
  }

  try {
    if (*run) return cmd_run(o);
    if (*resume) return cmd_resume(o);
    if (*compute) return cmd_compute(o);
    if (*validate) return cmd_validate(o);
    if (*report) return cmd_report(o);
    if (*cost) return cmd_estimate_cost(o);
    if (*tree) return cmd_export_tree(o);
    return report_error(o, ahp::ErrorKind::usage, "usage", "no command given");
  } catch (const ahp::Error& e) {
    return report_error(o, e.kind(), e.code(), e.what());
  } catch (const fs::filesystem_error& e) {
    return report_error(o, ahp::ErrorKind::data, "data", e.what());
  } catch (const std::exception& e) {
    return report_error(o, ahp::ErrorKind::data, "data", e.what());
  }
}
