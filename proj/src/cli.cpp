/*
 * Copyright 2026 The MSRAG Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "msrag/cli.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <tuple>

#include <CLI11.hpp>

#include "msrag/channels.hpp"
#include "msrag/error.hpp"
#include "msrag/eval/dataset.hpp"
#include "msrag/eval/records.hpp"
#include "msrag/eval/report.hpp"
#include "msrag/log.hpp"
#include "msrag/pipeline.hpp"
#include "msrag/providers/counting.hpp"
#include "msrag/providers/digest.hpp"
#include "msrag/select.hpp"
#include "msrag/text.hpp"

namespace msrag::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Raw flag values; `given()` tells which ones override the config file.
struct Flags {
  std::string config;
  std::string dataset;
  std::string schema = "generic";
  std::string tag;
  std::string mode;
  int runs = 0;
  std::string out;
  std::string selector;
  std::string providers;
  bool replay_strict = false;
  std::string cache_dir;
  std::string mock_script;
  std::string mock_embedder;
  std::string prompts_dir;
  int workers = 0;
  std::uint64_t seed = 0;
  std::size_t sample_n = 0;
  bool sample_random = false;
  bool verbose = false;
  bool quiet = false;
  // ask
  std::string question;
  std::vector<std::string> gold;
  bool boolean = false;
  // report
  std::string format = "markdown";
};

void add_shared_options(CLI::App& sub, Flags& f) {
  sub.add_option("--config", f.config, "JSON configuration file");
  sub.add_option("--out", f.out, "Output directory");
  sub.add_option("--providers", f.providers, "Provider backend: mock or http");
  sub.add_flag("--replay-strict", f.replay_strict, "Fail on cache misses instead of calling providers");
  sub.add_option("--cache-dir", f.cache_dir, "Response cache directory");
  sub.add_option("--mock-script", f.mock_script, "Mock provider script (JSON)");
  sub.add_option("--mock-embedder", f.mock_embedder, "Mock embedder: bow, exact or scripted");
  sub.add_option("--prompts-dir", f.prompts_dir, "Directory overriding the built-in prompts");
  sub.add_option("--seed", f.seed, "Base random seed");
  sub.add_option("--selector", f.selector, "Answer selector: oracle or consensus");
  sub.add_flag("-v,--verbose", f.verbose, "Log progress to stderr");
  sub.add_flag("-q,--quiet", f.quiet, "Suppress warnings");
}

void add_run_options(CLI::App& sub, Flags& f) {
  add_shared_options(sub, f);
  sub.add_option("--dataset", f.dataset, "Dataset file (JSON lines or JSON array)");
  sub.add_option("--schema", f.schema, "Dataset schema: hotpot, 2wiki, strategyqa or generic");
  sub.add_option("--tag", f.tag, "Dataset label used in reports (default: file stem)");
  sub.add_option("--runs", f.runs, "Independent passes per dataset");
  sub.add_option("--workers", f.workers, "Examples processed concurrently");
  sub.add_option("--sample-n", f.sample_n, "Evaluate only N questions");
  sub.add_flag("--sample-random", f.sample_random, "Draw the N questions at random (seeded)");
}

bool given(const CLI::App& sub, const std::string& name) {
  try {
    return sub.count(name) > 0;
  } catch (const CLI::OptionNotFound&) {
    return false;
  }
}

config::CliConfig build_config(const CLI::App& sub, const Flags& f) {
  config::CliConfig cfg = f.config.empty() ? config::defaults() : config::load_config(f.config);
  auto& p = cfg.pipeline;
  if (given(sub, "--mode")) p.mode = mode_from_string(f.mode);
  if (given(sub, "--runs")) p.runs = f.runs;
  if (given(sub, "--seed")) p.random_seed = f.seed;
  if (given(sub, "--replay-strict")) p.replay_strict = f.replay_strict;
  if (given(sub, "--cache-dir")) p.cache_dir = f.cache_dir;
  if (given(sub, "--out")) cfg.out_dir = f.out;
  if (given(sub, "--selector")) cfg.selector = selector_from_string(f.selector);
  if (given(sub, "--providers")) cfg.providers = f.providers;
  if (given(sub, "--mock-script")) cfg.mock_script = f.mock_script;
  if (given(sub, "--mock-embedder")) cfg.mock_embedder = f.mock_embedder;
  if (given(sub, "--prompts-dir")) cfg.prompts_dir = f.prompts_dir;
  if (given(sub, "--workers")) cfg.workers = f.workers;

  if (given(sub, "--dataset")) {
    config::DatasetSpec spec;
    spec.path = f.dataset;
    spec.schema = eval::schema_from_string(f.schema);
    spec.tag = f.tag;
    cfg.datasets = {spec};
  }
  for (auto& d : cfg.datasets) {
    if (given(sub, "--sample-n")) d.sampling.n = f.sample_n;
    if (given(sub, "--sample-random")) d.sampling.random = f.sample_random;
    d.sampling.seed = p.random_seed;
    if (d.tag.empty()) d.tag = fs::path(d.path).stem().string();
  }
  config::validate(cfg);
  if (!cfg.mock_script.empty() && cfg.providers == "mock" && !fs::exists(cfg.mock_script)) {
    throw ConfigError("mock script not found: " + cfg.mock_script);
  }
  return cfg;
}

std::string utc_now(const char* fmt) {
  std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, fmt, &tm);
  return buf;
}

void write_text(const fs::path& path, const std::string& text) {
  fs::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + path.string());
    out << text;
  }
  fs::rename(tmp, path);
}

std::string safe_component(std::string s) {
  for (char& c : s) {
    const bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.';
    if (!ok) c = '_';
  }
  return s;
}

/// Wraps each provider with a call counter that sits above the cache.
struct CountedProviders {
  Providers providers;
  std::shared_ptr<providers::CountingChat> chat;
  std::shared_ptr<providers::CountingChat> reader;
  std::shared_ptr<providers::CountingSearch> search;
  std::shared_ptr<providers::CountingEmbedder> embed;

  eval::CallCounts counts() const {
    eval::CallCounts c;
    c.chat = chat->calls() + (reader != chat ? reader->calls() : 0);
    c.search = search->calls();
    c.embed = embed->calls();
    return c;
  }
};

CountedProviders count_calls(const Providers& raw) {
  CountedProviders out;
  out.chat = std::make_shared<providers::CountingChat>(raw.chat);
  out.reader = raw.reader == raw.chat ? out.chat
                                      : std::make_shared<providers::CountingChat>(raw.reader);
  out.search = std::make_shared<providers::CountingSearch>(raw.search);
  out.embed = std::make_shared<providers::CountingEmbedder>(raw.embedder);
  out.providers = Providers{out.chat, out.reader, out.search, out.embed};
  return out;
}

config::ProviderStack build_stack(const Environment& env, const config::CliConfig& cfg) {
  return env.build_providers ? env.build_providers(cfg) : config::build_providers(cfg);
}

using ManifestKey = std::tuple<std::string, std::string, int>;  // config, dataset, run index

/// Completed runs already present under `out`, keyed for resumption.
std::map<ManifestKey, eval::RunMetrics> completed_runs(const fs::path& out) {
  std::map<ManifestKey, eval::RunMetrics> found;
  std::error_code ec;
  if (!fs::is_directory(out, ec)) return found;
  for (const auto& entry : fs::directory_iterator(out, ec)) {
    auto path = entry.path() / "manifest.json";
    if (!entry.is_directory() || !fs::exists(path)) continue;
    try {
      auto m = eval::read_manifest(path);
      if (m.complete && m.metrics) {
        found[{m.config_digest, m.dataset_digest, m.run_index}] = *m.metrics;
      }
    } catch (const std::exception& e) {
      log::warn("ignoring unreadable manifest " + path.string() + ": " + e.what());
    }
  }
  return found;
}

struct Interrupted {};

/// One mode over one dataset: `runs` passes, each with its own manifest,
/// followed by the averaged report. Returns the report path.
fs::path run_mode(const config::CliConfig& cfg, const config::DatasetSpec& dataset,
                  const std::vector<Question>& questions, const prompts::PromptSet& prompts,
                  const Environment& env, std::ostream& out) {
  const auto& p = cfg.pipeline;
  const fs::path out_dir = cfg.out_dir;
  const json view = config::results_view(cfg, prompts);
  const std::string cdigest = config::config_digest(view);
  const std::string ddigest = eval::dataset_digest(questions);
  const auto done = completed_runs(out_dir);

  std::vector<eval::RunMetrics> per_run;
  for (int k = 0; k < p.runs; ++k) {
    if (auto it = done.find({cdigest, ddigest, k}); it != done.end()) {
      log::info("skipping completed run " + std::to_string(k) + " of " +
                std::string(to_string(p.mode)) + " on " + dataset.tag);
      per_run.push_back(it->second);
      continue;
    }
    log::info("run " + std::to_string(k) + " of " + std::string(to_string(p.mode)) + " on " +
              dataset.tag);

    auto stack = build_stack(env, cfg);
    auto counted = count_calls(stack.providers);
    RunContext ctx{p, counted.providers, prompts,
                   static_cast<std::int64_t>(p.random_seed) + k, cfg.workers > 1};
    auto result = pipeline::run_dataset(questions, ctx, cfg.selector, {cfg.workers, env.stop});

    eval::Manifest m;
    m.created_at = utc_now("%Y-%m-%dT%H:%M:%SZ");
    m.run_id = utc_now("%Y%m%dT%H%M%SZ") + "-" + cdigest.substr(0, 8) + "-" +
               safe_component(dataset.tag) + "-r" + std::to_string(k);
    m.run_index = k;
    m.seed = static_cast<std::int64_t>(p.random_seed) + k;
    m.complete = result.complete;
    m.dataset_tag = dataset.tag;
    m.mode = p.mode;
    m.selector = cfg.selector;
    m.config = view;
    m.config_digest = cdigest;
    m.dataset_digest = ddigest;
    m.records = std::move(result.records);
    m.calls = counted.counts();
    std::optional<std::string> empty_run;
    try {
      if (!m.records.empty()) m.metrics = eval::aggregate_run(m.records);
    } catch (const EmptyRun& e) {
      empty_run = e.what();
    }
    const fs::path manifest_path = out_dir / m.run_id / "manifest.json";
    eval::write_manifest(manifest_path, m);
    out << "wrote " << manifest_path.string() << (m.complete ? "" : " (incomplete)") << '\n';

    if (!m.complete) throw Interrupted{};
    if (empty_run || !m.metrics) {
      std::string first_error;
      for (const auto& r : m.records) {
        if (r.error) {
          first_error = *r.error;
          break;
        }
      }
      throw Error("run " + std::to_string(k) + " scored no examples" +
                  (first_error.empty() ? std::string{} : "; first error: " + first_error));
    }
    per_run.push_back(*m.metrics);
  }

  auto report = eval::make_report(dataset.tag, p.mode, cfg.selector, per_run, cdigest, ddigest);
  const fs::path report_path = out_dir / "reports" /
                               (std::string(to_string(p.mode)) + "__" +
                                safe_component(dataset.tag) + ".json");
  eval::write_report_json(report_path, report);
  return report_path;
}

std::vector<eval::RunReport> collect_reports(const fs::path& out_dir) {
  std::vector<eval::RunReport> reports;
  const fs::path dir = out_dir / "reports";
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) return reports;
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir, ec)) {
    if (e.path().extension() == ".json") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& f : files) reports.push_back(eval::read_report_json(f));
  return reports;
}

/// Rewrites report.md / report.csv from every stored report; returns the markdown.
std::string refresh_tables(const fs::path& out_dir) {
  auto reports = collect_reports(out_dir);
  if (reports.empty()) throw Error("no reports under " + (out_dir / "reports").string());
  auto md = eval::emit_report(reports, eval::ReportFormat::Markdown);
  write_text(out_dir / "report.md", md);
  write_text(out_dir / "report.csv", eval::emit_report(reports, eval::ReportFormat::Csv));
  return md;
}

int execute(const config::CliConfig& cfg, const std::vector<Mode>& modes, const Environment& env,
            std::ostream& out) {
  if (cfg.datasets.empty()) throw ConfigError("no dataset given (use --dataset or \"datasets\")");
  const auto prompts = config::load_prompts(cfg);

  struct Loaded {
    const config::DatasetSpec* spec;
    std::vector<Question> questions;
  };
  std::vector<Loaded> loaded;
  for (const auto& d : cfg.datasets) {
    auto all = eval::load_dataset(d.path, d.schema, d.tag);
    auto picked = eval::sample(all, d.sampling);
    if (picked.empty()) throw Error("dataset " + d.path + " has no questions");
    loaded.push_back({&d, std::move(picked)});
  }

  for (Mode mode : modes) {
    auto mode_cfg = cfg;
    mode_cfg.pipeline.mode = mode;
    for (const auto& l : loaded) run_mode(mode_cfg, *l.spec, l.questions, prompts, env, out);
  }
  out << refresh_tables(cfg.out_dir);
  return kOk;
}

int ask(const config::CliConfig& cfg, const Flags& f, const Environment& env, std::ostream& out,
        std::ostream& err) {
  if (text::trim(f.question).empty()) {
    err << "error: the question is empty\n";
    return kUsage;
  }
  if (cfg.selector == SelectorKind::Oracle && f.gold.empty()) {
    err << "error: the oracle selector ranks answers against a reference; pass --gold "
           "<answer> or use --selector consensus\n";
    return kUsage;
  }
  const auto prompts = config::load_prompts(cfg);
  Question q;
  q.text = f.question;
  q.id = "ask-" + providers::sha256_hex(q.text).substr(0, 8);
  q.gold_answers = f.gold;
  q.answer_kind = f.boolean ? AnswerKind::Boolean : AnswerKind::Span;
  q.dataset_tag = "ask";

  auto stack = build_stack(env, cfg);
  auto counted = count_calls(stack.providers);
  const auto& p = cfg.pipeline;
  RunContext ctx{p, counted.providers, prompts, static_cast<std::int64_t>(p.random_seed),
                 false};

  eval::ExampleRecord record;
  record.question_id = q.id;
  try {
    auto outcome = channels::run_example_channels(q, ctx);
    record.sub_questions = std::move(outcome.sub_questions);
    record.web = std::move(outcome.web);
    record.information_gpt = std::move(outcome.information_gpt);
    record.traces = std::move(outcome.traces);
    record.candidates = std::move(outcome.candidates);
    auto& embedder = *ctx.providers.embedder;
    if (record.candidates.size() == 1) {
      record.selection = select::pass_through(record.candidates.front());
    } else if (cfg.selector == SelectorKind::Oracle) {
      record.selection = select::select_answer(record.candidates, q.gold_answers, embedder);
    } else {
      record.selection = select::select_consensus(record.candidates, embedder);
    }
    if (!q.gold_answers.empty()) record.metrics = eval::score(q, record.selection->selected_text);
  } catch (const std::exception& e) {
    record.selection.reset();
    record.error = e.what();
  }

  const json view = config::results_view(cfg, prompts);
  eval::Manifest m;
  m.created_at = utc_now("%Y-%m-%dT%H:%M:%SZ");
  m.config = view;
  m.config_digest = config::config_digest(view);
  m.run_id = utc_now("%Y%m%dT%H%M%SZ") + "-" + m.config_digest.substr(0, 8) + "-" + q.id;
  m.seed = static_cast<std::int64_t>(p.random_seed);
  m.dataset_tag = q.dataset_tag;
  m.mode = p.mode;
  m.selector = cfg.selector;
  m.dataset_digest = eval::dataset_digest({q});
  m.records = {record};
  m.calls = counted.counts();
  const fs::path manifest_path = fs::path(cfg.out_dir) / m.run_id / "manifest.json";
  eval::write_manifest(manifest_path, m);

  if (record.error) {
    err << "error: " << *record.error << '\n';
    err << "manifest: " << manifest_path.string() << '\n';
    return kFatal;
  }

  const auto& sel = *record.selection;
  out << "answer: " << sel.selected_text << '\n';
  const bool multi = record.candidates.size() > 1;
  if (multi) {
    out << "selected: " << to_string(sel.selected_channel)
        << (sel.tie_broken ? " (tie broken by channel order)" : "") << '\n';
  }
  out << "candidates:\n";
  for (const auto& c : record.candidates) {
    out << "  " << to_string(c.channel) << ": " << c.text << '\n';
  }
  if (multi) {
    out << "similarities (" << to_string(cfg.selector) << "):\n";
    for (const auto& c : record.candidates) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.6f", sel.similarities.at(c.channel));
      out << "  " << to_string(c.channel) << ": " << buf
          << (sel.degenerate_flags.count(c.channel) ? " (empty embedding)" : "") << '\n';
    }
  }
  if (record.metrics) {
    const auto& mt = *record.metrics;
    if (mt.em) out << "em: " << *mt.em << "  f1: " << eval::format_number(*mt.f1) << '\n';
    if (mt.acc) out << "acc: " << *mt.acc << (mt.unparseable ? " (unparseable)" : "") << '\n';
  }
  out << "manifest: " << manifest_path.string() << '\n';
  return kOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
            const Environment& env) {
  CLI::App app{"Multi-source retrieval-augmented question answering"};
  app.name("msrag");
  app.require_subcommand(1);
  Flags f;

  auto* run = app.add_subcommand("run", "Evaluate one mode over the configured datasets");
  add_run_options(*run, f);
  run->add_option("--mode", f.mode, "full, no-gpt, no-web, gpt-only, web-only or direct-only");

  auto* ablate = app.add_subcommand("ablate", "Evaluate the ablation modes and compare them");
  add_run_options(*ablate, f);

  auto* ask_cmd = app.add_subcommand("ask", "Answer one question and show every channel");
  add_shared_options(*ask_cmd, f);
  ask_cmd->add_option("question", f.question, "Question text")->required();
  ask_cmd->add_option("--mode", f.mode, "Channels to use (default full)");
  ask_cmd->add_option("--gold", f.gold, "Reference answer (repeatable)");
  ask_cmd->add_flag("--boolean", f.boolean, "Treat as a yes/no question");

  auto* report = app.add_subcommand("report", "Rebuild comparison tables from stored reports");
  report->add_option("--out", f.out, "Output directory holding reports/")->required();
  report->add_option("--format", f.format, "Printed format: markdown or csv")
      ->check(CLI::IsMember({"markdown", "csv"}));

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    auto* sub = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
    err << sub->help();
    return kUsage;
  }

  CLI::App* sub = app.get_subcommands().front();
  log::set_level(f.quiet ? log::Level::Quiet : f.verbose ? log::Level::Info : log::Level::Warn);

  if (sub == report) {
    try {
      auto md = refresh_tables(f.out);
      out << (f.format == "csv" ? eval::emit_report(collect_reports(f.out), eval::ReportFormat::Csv)
                                : md);
      return kOk;
    } catch (const std::exception& e) {
      err << "error: " << e.what() << '\n';
      return kFatal;
    }
  }

  config::CliConfig cfg;
  try {
    cfg = build_config(*sub, f);
    if (sub == ask_cmd && !given(*sub, "--selector")) cfg.selector = SelectorKind::Consensus;
    for (const auto& d : cfg.datasets) {
      if (sub != ask_cmd && !fs::exists(d.path)) throw ConfigError("dataset not found: " + d.path);
    }
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kUsage;
  } catch (const InvalidInput& e) {
    err << "config error: " << e.what() << '\n';
    return kUsage;
  }

  try {
    if (sub == ask_cmd) return ask(cfg, f, env, out, err);
    if (sub == run) return execute(cfg, {cfg.pipeline.mode}, env, out);
    return execute(cfg, {Mode::DirectOnly, Mode::GptOnly, Mode::NoGpt, Mode::NoWeb, Mode::Full},
                   env, out);
  } catch (const Interrupted&) {
    err << "interrupted; partial manifest written\n";
    return kInterrupted;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFatal;
  }
}

}  // namespace msrag::cli
