// radlabel: command line front end for the labeling pipeline.

#include <algorithm>
#include <csignal>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "radlabel/corpus.hpp"
#include "radlabel/deid.hpp"
#include "radlabel/error.hpp"
#include "radlabel/fpr.hpp"
#include "radlabel/lexicon.hpp"
#include "radlabel/nlp_extract.hpp"
#include "radlabel/pipeline.hpp"
#include "radlabel/review_service.hpp"
#include "radlabel/stats.hpp"
#include "radlabel/text.hpp"

namespace fs = std::filesystem;
using namespace radlabel;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

struct CommonLexicon {
  std::string path;
  Lexicon load() const { return path.empty() ? default_lexicon() : load_lexicon(path); }
  std::optional<fs::path> optional_path() const {
    return path.empty() ? std::nullopt : std::optional<fs::path>(path);
  }
};

void add_lexicon_option(CLI::App* cmd, CommonLexicon& lex) {
  cmd->add_option("--lexicon", lex.path, "Lexicon TOML file (default: built-in lexicon)")
      ->check(CLI::ExistingFile);
}

void add_ci_options(CLI::App* cmd, stats::CiParams& ci) {
  cmd->add_option("--t", ci.t, "t multiplier for the interval")->capture_default_str();
  cmd->add_flag("--df-exact", ci.df_exact,
                "Use the Student t quantile for n-1 degrees of freedom instead of --t");
  cmd->add_option("--min-n", ci.interval_min_n,
                  "Smallest sample that gets an interval; smaller samples get a point estimate")
      ->capture_default_str();
}

stats::Stage stage_from(const std::string& s) { return stats::parse_stage(s); }

// ------------------------------------------------------------------- deid

struct DeidArgs {
  std::string in, store, out, passes = "both";
  std::size_t jobs = default_jobs();
};

int run_deid(const DeidArgs& a) {
  const bool first = a.passes == "1" || a.passes == "both";
  const bool second = a.passes == "2" || a.passes == "both";
  if (second && a.out.empty()) throw CLI::ValidationError("--out", "required for pass 2");
  Corpus corpus = load_corpus(a.in);
  deid::PhiStore store;
  if (fs::exists(a.store)) {
    store.load(a.store);
  } else if (!first) {
    throw IoError("PHI store " + a.store + " does not exist; run pass 1 first");
  }
  Corpus out = deid_corpus(corpus, store, a.jobs, first, second);
  if (first) store.save(a.store);
  if (second) {
    const Provenance p = make_provenance(a.in, std::nullopt, 0, "deid");
    write_corpus(out, a.out, &p);
  }
  std::fprintf(stderr, "%zu reports, %zu PHI entities in store\n", corpus.size(), store.size());
  return kExitOk;
}

// ------------------------------------------------------------------ label

void print_explain(const Corpus& corpus, const Lexicon& lexicon, const std::string& report_id,
                   const std::string& keyword) {
  const Report* report = corpus.find(report_id);
  if (!report) throw NotFoundError("report " + report_id + " not in corpus");
  const Keyword& k = lexicon.keyword(keyword);
  const NlpAnnotation ann = annotate_report(*report, lexicon);
  const auto records = reduce_report(ann, *report, lexicon);
  const auto rec = std::find_if(records.begin(), records.end(),
                                [&](const LabelRecord& r) { return r.keyword == k.surface; });
  std::cout << "report " << report_id << ", keyword \"" << k.surface << "\" (" << k.condition
            << ")\n";
  std::cout << "nlp: " << to_string(rec->nlp_status) << ", final: " << to_string(rec->final_status)
            << "\n";
  for (const ExplainRow& row : explain(*report, k, lexicon)) {
    std::string sentence(text::trim(row.sentence.text));
    std::cout << "  [" << row.sentence.index << "] " << to_string(row.evaluation.verdict);
    if (!row.evaluation.trigger.empty()) {
      std::cout << " by \"" << row.evaluation.trigger << "\"";
      if (!row.evaluation.category.empty()) std::cout << " (" << row.evaluation.category << ")";
    }
    std::cout << ": " << sentence << "\n";
  }
}

struct LabelArgs {
  std::string corpus, out, stage = "final", annotations;
  std::vector<std::string> explain;
  std::size_t jobs = default_jobs();
  CommonLexicon lexicon;
};

int run_label(const LabelArgs& a) {
  const Lexicon lexicon = a.lexicon.load();
  const Corpus corpus = load_corpus(a.corpus);
  if (!a.explain.empty()) {
    print_explain(corpus, lexicon, a.explain[0], a.explain[1]);
    return kExitOk;
  }
  if (a.out.empty()) throw CLI::ValidationError("--out", "required unless --explain is given");
  LabelOptions options{stage_from(a.stage), a.jobs, nullptr};
  std::vector<NlpAnnotation> external;
  if (!a.annotations.empty()) {
    external = ingest_external_annotations(a.annotations, corpus, lexicon);
    options.external = &external;
  }
  const auto labels = label_corpus(corpus, lexicon, options);
  const Provenance p = make_provenance(a.corpus, a.lexicon.optional_path(), 0, a.stage);
  write_labels(labels, a.out, &p);
  std::cout << count_table(labels, lexicon);
  return kExitOk;
}

// ----------------------------------------------------------------- sample

struct SampleArgs {
  std::string labels, keyword, stage = "final", out;
  std::size_t n = stats::kDefaultSampleSize;
  std::uint64_t seed = 0;
};

int run_sample(const SampleArgs& a) {
  const auto labels = load_labels(a.labels);
  auto population = stats::positive_population(labels, a.keyword, stage_from(a.stage));
  SampleRecord rec;
  rec.keyword = a.keyword;
  rec.population = population.size();
  rec.n = a.n;
  rec.seed = a.seed;
  rec.sample = stats::draw_sample({a.keyword, population.size(), a.n, a.seed}, std::move(population));
  const std::string line = serialize_sample(rec);
  if (a.out.empty()) {
    std::cout << line << "\n";
  } else {
    std::ofstream out(a.out, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + a.out + " for writing");
    out << line << "\n";
  }
  return kExitOk;
}

// --------------------------------------------------------------------- ci

struct CiArgs {
  std::string labels, arbitrations, stage = "final", out;
  stats::CiParams ci;
  CommonLexicon lexicon;
};

int run_ci(const CiArgs& a) {
  const Lexicon lexicon = a.lexicon.load();
  const auto labels = load_labels(a.labels);
  const auto arbitrations = load_arbitrations(a.arbitrations);
  const auto rows = stats::summarize(labels, arbitrations, lexicon, stage_from(a.stage), a.ci);
  Provenance p;
  p.fields["labels_sha256"] = sha256_file(a.labels);
  p.fields["arbitrations_sha256"] = sha256_file(a.arbitrations);
  p.fields["stage"] = a.stage;
  p.fields["tool_version"] = std::string(tool_version());
  if (a.out.empty()) {
    stats::write_summary_csv(std::cout, rows, provenance_comment(p));
  } else {
    stats::write_summary_csv(fs::path(a.out), rows, provenance_comment(p));
  }
  return kExitOk;
}

// ------------------------------------------------------------------ serve

struct ServeArgs {
  std::string labels, corpus, log, host = "127.0.0.1", stage = "final";
  int port = 8080;
  bool allow_raw = false;
  stats::CiParams ci;
  CommonLexicon lexicon;
};

int run_serve(const ServeArgs& a) {
  static const Lexicon lexicon = a.lexicon.load();
  review::ReviewOptions options{stage_from(a.stage), a.ci, a.allow_raw};
  review::ReviewService service(load_corpus(a.corpus), load_labels(a.labels), lexicon, a.log,
                                options);
  review::ReviewServer server(service);

  // Signals are taken by a waiter thread so stop() runs outside a handler.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  const int port = server.bind(a.host, a.port);
  std::fprintf(stderr, "review service listening on http://%s:%d\n", a.host.c_str(), port);
  std::jthread waiter([&] {
    int sig = 0;
    sigwait(&signals, &sig);
    server.stop();
  });
  server.serve();
  // Wake the waiter if serve() returned for another reason.
  pthread_kill(waiter.native_handle(), SIGTERM);
  return kExitOk;
}

// -------------------------------------------------------------------- run

struct RunArgs {
  std::string corpus, store, annotations, arbitrations, out_dir, stage = "final";
  std::uint64_t seed = 0;
  std::size_t n = stats::kDefaultSampleSize;
  std::size_t jobs = default_jobs();
  stats::CiParams ci;
  CommonLexicon lexicon;
};

int run_run(const RunArgs& a) {
  PipelineConfig config;
  config.corpus = a.corpus;
  config.lexicon = a.lexicon.optional_path();
  if (!a.store.empty()) config.phi_store = a.store;
  if (!a.annotations.empty()) config.annotations = a.annotations;
  if (!a.arbitrations.empty()) config.arbitrations = a.arbitrations;
  config.out_dir = a.out_dir;
  config.stage = stage_from(a.stage);
  config.seed = a.seed;
  config.sample_size = a.n;
  config.ci = a.ci;
  config.jobs = a.jobs;
  const PipelineResult result = run_pipeline(config);
  std::cout << result.table;
  std::fprintf(stderr, "wrote %s, %s, %s\n", result.labels_path.c_str(),
               result.samples_path.c_str(), result.summary_path.c_str());
  return kExitOk;
}

// ---------------------------------------------------------------- explain

struct ExplainArgs {
  std::string corpus, report, keyword;
  CommonLexicon lexicon;
};

int run_explain(const ExplainArgs& a) {
  const Lexicon lexicon = a.lexicon.load();
  print_explain(load_corpus(a.corpus), lexicon, a.report, a.keyword);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"radlabel: label radiology reports and validate the labels by spot checks"};
  app.set_version_flag("--version", std::string(tool_version()));
  app.require_subcommand(1);
  const auto stage_check = CLI::IsMember({"nlp", "final"});

  DeidArgs deid_args;
  auto* deid_cmd = app.add_subcommand("deid", "Two-pass de-identification of a report corpus");
  deid_cmd->add_option("--in", deid_args.in, "Reports JSONL")->required()->check(CLI::ExistingFile);
  deid_cmd->add_option("--store", deid_args.store, "PHI store JSONL (read if present, then updated)")
      ->required();
  deid_cmd->add_option("--out", deid_args.out, "De-identified reports JSONL (pass 2)");
  deid_cmd->add_option("--passes", deid_args.passes, "Which passes to run")
      ->check(CLI::IsMember({"1", "2", "both"}))
      ->capture_default_str();
  deid_cmd->add_option("--jobs", deid_args.jobs, "Worker threads")->capture_default_str();

  LabelArgs label_args;
  auto* label_cmd = app.add_subcommand("label", "Label reports at the NLP or final stage");
  label_cmd->add_option("--corpus", label_args.corpus, "Reports JSONL")
      ->required()
      ->check(CLI::ExistingFile);
  label_cmd->add_option("--out", label_args.out, "Labels JSONL");
  label_cmd->add_option("--stage", label_args.stage, "nlp or final")
      ->check(stage_check)
      ->capture_default_str();
  label_cmd->add_option("--annotations", label_args.annotations,
                        "External concept-extractor output to use instead of the built-in one")
      ->check(CLI::ExistingFile);
  label_cmd->add_option("--explain", label_args.explain,
                        "Trace one report: REPORT_ID KEYWORD (prints instead of labeling)")
      ->expected(2);
  label_cmd->add_option("--jobs", label_args.jobs, "Worker threads")->capture_default_str();
  add_lexicon_option(label_cmd, label_args.lexicon);

  SampleArgs sample_args;
  auto* sample_cmd = app.add_subcommand("sample", "Draw a reproducible spot-check sample");
  sample_cmd->add_option("--labels", sample_args.labels, "Labels JSONL")
      ->required()
      ->check(CLI::ExistingFile);
  sample_cmd->add_option("--keyword", sample_args.keyword, "Keyword to sample")->required();
  sample_cmd->add_option("--n", sample_args.n, "Sample size")->capture_default_str();
  sample_cmd->add_option("--seed", sample_args.seed, "RNG seed")->capture_default_str();
  sample_cmd->add_option("--stage", sample_args.stage, "Population stage: nlp or final")
      ->check(stage_check)
      ->capture_default_str();
  sample_cmd->add_option("--out", sample_args.out, "Write the sample here instead of stdout");

  CiArgs ci_args;
  auto* ci_cmd = app.add_subcommand("ci", "Per-keyword accuracy and confidence intervals");
  ci_cmd->add_option("--labels", ci_args.labels, "Labels JSONL")
      ->required()
      ->check(CLI::ExistingFile);
  ci_cmd->add_option("--arbitrations", ci_args.arbitrations, "Arbitration log JSONL")
      ->required()
      ->check(CLI::ExistingFile);
  ci_cmd->add_option("--stage", ci_args.stage, "nlp or final")
      ->check(stage_check)
      ->capture_default_str();
  ci_cmd->add_option("--out", ci_args.out, "Summary CSV (default: stdout)");
  add_ci_options(ci_cmd, ci_args.ci);
  add_lexicon_option(ci_cmd, ci_args.lexicon);

  ServeArgs serve_args;
  auto* serve_cmd = app.add_subcommand("serve", "Run the spot-check review HTTP service");
  serve_cmd->add_option("--labels", serve_args.labels, "Labels JSONL")
      ->required()
      ->check(CLI::ExistingFile);
  serve_cmd->add_option("--corpus", serve_args.corpus, "De-identified reports JSONL")
      ->required()
      ->check(CLI::ExistingFile);
  serve_cmd->add_option("--log", serve_args.log, "Arbitration log JSONL (appended)")->required();
  serve_cmd->add_option("--port", serve_args.port, "TCP port, 0 for any free port")
      ->capture_default_str();
  serve_cmd->add_option("--host", serve_args.host, "Bind address")->capture_default_str();
  serve_cmd->add_option("--stage", serve_args.stage, "Population stage: nlp or final")
      ->check(stage_check)
      ->capture_default_str();
  serve_cmd->add_flag("--allow-raw", serve_args.allow_raw,
                      "Serve reports that were not de-identified");
  add_ci_options(serve_cmd, serve_args.ci);
  add_lexicon_option(serve_cmd, serve_args.lexicon);

  RunArgs run_args;
  auto* run_cmd = app.add_subcommand("run", "End-to-end: deid, label, sample, summarize");
  run_cmd->add_option("--corpus", run_args.corpus, "Reports JSONL")
      ->required()
      ->check(CLI::ExistingFile);
  run_cmd->add_option("--out-dir", run_args.out_dir, "Output directory")->required();
  run_cmd->add_option("--store", run_args.store, "PHI store; enables de-identification");
  run_cmd->add_option("--annotations", run_args.annotations, "External concept-extractor output")
      ->check(CLI::ExistingFile);
  run_cmd->add_option("--arbitrations", run_args.arbitrations, "Arbitration log JSONL")
      ->check(CLI::ExistingFile);
  run_cmd->add_option("--stage", run_args.stage, "nlp or final")
      ->check(stage_check)
      ->capture_default_str();
  run_cmd->add_option("--seed", run_args.seed, "RNG seed for sampling")->capture_default_str();
  run_cmd->add_option("--n", run_args.n, "Sample size per keyword")->capture_default_str();
  run_cmd->add_option("--jobs", run_args.jobs, "Worker threads")->capture_default_str();
  add_ci_options(run_cmd, run_args.ci);
  add_lexicon_option(run_cmd, run_args.lexicon);

  ExplainArgs explain_args;
  auto* explain_cmd = app.add_subcommand("explain", "Per-sentence trace for one report and keyword");
  explain_cmd->add_option("--corpus", explain_args.corpus, "Reports JSONL")
      ->required()
      ->check(CLI::ExistingFile);
  explain_cmd->add_option("--report", explain_args.report, "Report id")->required();
  explain_cmd->add_option("--keyword", explain_args.keyword, "Keyword")->required();
  add_lexicon_option(explain_cmd, explain_args.lexicon);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (deid_cmd->parsed()) return run_deid(deid_args);
    if (label_cmd->parsed()) return run_label(label_args);
    if (sample_cmd->parsed()) return run_sample(sample_args);
    if (ci_cmd->parsed()) return run_ci(ci_args);
    if (serve_cmd->parsed()) return run_serve(serve_args);
    if (run_cmd->parsed()) return run_run(run_args);
    if (explain_cmd->parsed()) return run_explain(explain_args);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}
