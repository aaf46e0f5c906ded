#include "radlabel/pipeline.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "jsonl.hpp"
#include "radlabel/embedded_data.hpp"
#include "radlabel/fpr.hpp"

#ifndef RADLABEL_VERSION
#define RADLABEL_VERSION "0.0.0"
#endif

namespace radlabel {

using detail::json;

std::string_view tool_version() { return RADLABEL_VERSION; }

namespace {

class Sha256 {
 public:
  Sha256() : ctx_(EVP_MD_CTX_new()) {
    if (!ctx_ || EVP_DigestInit_ex(ctx_, EVP_sha256(), nullptr) != 1) {
      throw std::runtime_error("SHA-256 unavailable");
    }
  }
  ~Sha256() { EVP_MD_CTX_free(ctx_); }
  Sha256(const Sha256&) = delete;
  Sha256& operator=(const Sha256&) = delete;

  void update(const void* data, std::size_t size) { EVP_DigestUpdate(ctx_, data, size); }

  std::string hex() {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx_, md, &len);
    std::string out;
    char buf[3];
    for (unsigned int i = 0; i < len; ++i) {
      std::snprintf(buf, sizeof buf, "%02x", md[i]);
      out += buf;
    }
    return out;
  }

 private:
  EVP_MD_CTX* ctx_;
};

}  // namespace

std::string sha256_hex(std::string_view data) {
  Sha256 h;
  h.update(data.data(), data.size());
  return h.hex();
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  Sha256 h;
  char buf[1 << 16];
  while (in) {
    in.read(buf, sizeof buf);
    h.update(buf, static_cast<std::size_t>(in.gcount()));
  }
  return h.hex();
}

std::size_t default_jobs() { return std::max(1u, std::thread::hardware_concurrency()); }

void parallel_for(std::size_t count, std::size_t jobs,
                  const std::function<void(std::size_t)>& fn) {
  jobs = std::clamp<std::size_t>(jobs, 1, std::max<std::size_t>(count, 1));
  if (jobs == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::size_t error_index = count;
  std::mutex error_mutex;
  {
    std::vector<std::jthread> workers;
    workers.reserve(jobs);
    for (std::size_t w = 0; w < jobs; ++w) {
      workers.emplace_back([&] {
        for (std::size_t i = next++; i < count && !failed; i = next++) {
          try {
            fn(i);
          } catch (...) {
            std::lock_guard lock(error_mutex);
            if (i < error_index) {
              error_index = i;
              error = std::current_exception();
            }
            failed = true;
          }
        }
      });
    }
  }
  if (error) std::rethrow_exception(error);
}

StageError::StageError(std::string stage, std::string record_id, const std::string& what)
    : DataError("stage " + stage + ", record " + record_id + ": " + what),
      stage_(std::move(stage)),
      record_id_(std::move(record_id)) {}

std::vector<LabelRecord> nlp_labels(const NlpAnnotation& annotation, const Report& report,
                                    const Lexicon& lexicon) {
  const auto sentences = split_sentences(report.text);
  std::vector<LabelRecord> out;
  out.reserve(lexicon.keywords().size());
  for (const Keyword& k : lexicon.keywords()) {
    LabelRecord rec;
    rec.report_id = report.report_id;
    rec.keyword = k.surface;
    rec.condition = k.condition;
    auto it = annotation.status.find(k.surface);
    rec.nlp_status = it == annotation.status.end() ? KeywordStatus::kIrrelevant : it->second;
    if (rec.nlp_status == KeywordStatus::kPositive) {
      for (const Mention& m : annotation.mentions) {
        if (m.keyword == k.surface) rec.evidence.push_back({m.sentence_index, m.start, m.end});
      }
    }
    out.push_back(std::move(rec));
  }
  return out;
}

std::vector<LabelRecord> label_corpus(const Corpus& corpus, const Lexicon& lexicon,
                                      const LabelOptions& options) {
  std::map<std::string_view, const NlpAnnotation*> external;
  if (options.external) {
    for (const auto& a : *options.external) external[a.report_id] = &a;
  }
  std::vector<std::vector<LabelRecord>> per_report(corpus.size());
  parallel_for(corpus.size(), options.jobs, [&](std::size_t i) {
    const Report& report = corpus.reports[i];
    try {
      NlpAnnotation annotation;
      if (options.external) {
        auto it = external.find(report.report_id);
        annotation = it == external.end() ? irrelevant_annotation(report.report_id, lexicon)
                                          : *it->second;
      } else {
        annotation = annotate_report(report, lexicon);
      }
      per_report[i] = options.stage == stats::Stage::kNlp
                          ? nlp_labels(annotation, report, lexicon)
                          : reduce_report(annotation, report, lexicon);
    } catch (const std::exception& e) {
      throw StageError(std::string(stats::to_string(options.stage)), report.report_id, e.what());
    }
  });
  std::vector<LabelRecord> out;
  out.reserve(corpus.size() * lexicon.keywords().size());
  for (auto& v : per_report) {
    std::move(v.begin(), v.end(), std::back_inserter(out));
  }
  return out;
}

Corpus deid_corpus(const Corpus& corpus, deid::PhiStore& store, std::size_t jobs,
                   bool run_first_pass, bool run_second_pass, const deid::Patterns& patterns) {
  if (run_first_pass) store = deid::first_pass(corpus, std::move(store), {}, patterns);
  if (!run_second_pass) return corpus;
  const deid::Replacer replacer(store, patterns);
  Corpus out;
  out.source_path = corpus.source_path;
  out.reports.resize(corpus.size());
  parallel_for(corpus.size(), jobs, [&](std::size_t i) {
    try {
      out.reports[i] = deid::second_pass(corpus.reports[i], replacer, patterns);
    } catch (const std::exception& e) {
      throw StageError("deid", corpus.reports[i].report_id, e.what());
    }
  });
  return out;
}

std::vector<SampleRecord> draw_samples(const std::vector<LabelRecord>& labels,
                                       const Lexicon& lexicon, stats::Stage stage,
                                       std::size_t n, std::uint64_t seed) {
  std::vector<SampleRecord> out;
  for (const Keyword& k : lexicon.keywords()) {
    auto population = stats::positive_population(labels, k.surface, stage);
    if (population.empty()) continue;
    SampleRecord rec;
    rec.keyword = k.surface;
    rec.population = population.size();
    rec.n = std::min(n, population.size());
    rec.seed = seed;
    rec.sample = stats::draw_sample({k.surface, rec.population, rec.n, seed}, std::move(population));
    out.push_back(std::move(rec));
  }
  return out;
}

std::string serialize_sample(const SampleRecord& r) {
  json j = {{"keyword", r.keyword},
            {"population", r.population},
            {"n", r.n},
            {"seed", r.seed},
            {"draw_order", r.sample.draw_order},
            {"sorted", r.sample.sorted}};
  return detail::dump_compact(j);
}

std::string count_table(const std::vector<LabelRecord>& labels, const Lexicon& lexicon) {
  std::map<std::string, std::pair<std::size_t, std::size_t>> counts;
  for (const auto& r : labels) {
    auto& c = counts[r.keyword];
    if (r.nlp_status == KeywordStatus::kPositive) ++c.first;
    if (r.final_status == FinalStatus::kPositive) ++c.second;
  }
  std::vector<const Keyword*> rows;
  for (const Keyword& k : lexicon.keywords()) rows.push_back(&k);
  std::stable_sort(rows.begin(), rows.end(), [](const Keyword* a, const Keyword* b) {
    return a->condition < b->condition;
  });
  std::ostringstream out;
  char line[160];
  std::snprintf(line, sizeof line, "%-26s %-24s %10s %10s\n", "Condition", "Keyword", "NLP-pos",
                "Final-pos");
  out << line;
  for (const Keyword* k : rows) {
    const auto c = counts[k->surface];
    std::snprintf(line, sizeof line, "%-26s %-24s %10zu %10zu\n", k->condition.c_str(),
                  k->surface.c_str(), c.first, c.second);
    out << line;
  }
  return out.str();
}

Provenance make_provenance(const std::filesystem::path& corpus_path,
                           const std::optional<std::filesystem::path>& lexicon_path,
                           std::uint64_t seed, std::string_view stage) {
  Provenance p;
  p.fields["corpus_sha256"] = sha256_file(corpus_path);
  p.fields["lexicon_sha256"] =
      lexicon_path ? sha256_file(*lexicon_path) : sha256_hex(default_lexicon_text());
  p.fields["seed"] = std::to_string(seed);
  p.fields["stage"] = std::string(stage);
  p.fields["tool_version"] = std::string(tool_version());
  return p;
}

std::string provenance_comment(const Provenance& provenance) {
  std::string out = "provenance";
  for (const auto& [k, v] : provenance.fields) out += " " + k + "=" + v;
  return out;
}

PipelineResult run_pipeline(const PipelineConfig& config) {
  const Lexicon lexicon_storage =
      config.lexicon ? load_lexicon(*config.lexicon) : default_lexicon();
  const Lexicon& lexicon = lexicon_storage;
  const std::string stage_name(stats::to_string(config.stage));
  const Provenance provenance =
      make_provenance(config.corpus, config.lexicon, config.seed, stage_name);

  Corpus corpus = load_corpus(config.corpus);
  std::filesystem::create_directories(config.out_dir);
  PipelineResult result;

  if (config.phi_store) {
    deid::PhiStore store;
    if (std::filesystem::exists(*config.phi_store)) store.load(*config.phi_store);
    corpus = deid_corpus(corpus, store, config.jobs);
    store.save(*config.phi_store);
    result.deid_path = config.out_dir / "reports.deid.jsonl";
    write_corpus(corpus, *result.deid_path, &provenance);
  }

  std::vector<NlpAnnotation> external;
  LabelOptions options{config.stage, config.jobs, nullptr};
  if (config.annotations) {
    external = ingest_external_annotations(*config.annotations, corpus, lexicon);
    options.external = &external;
  }
  result.labels = label_corpus(corpus, lexicon, options);
  result.labels_path = config.out_dir / "labels.jsonl";
  write_labels(result.labels, result.labels_path, &provenance);

  result.samples_path = config.out_dir / "samples.jsonl";
  {
    auto out = detail::open_for_write(result.samples_path);
    out << serialize_provenance(provenance) << '\n';
    for (const auto& s : draw_samples(result.labels, lexicon, config.stage, config.sample_size,
                                      config.seed)) {
      out << serialize_sample(s) << '\n';
    }
    out.flush();
    if (!out) throw IoError("write failed for " + result.samples_path.string());
  }

  std::vector<ArbitrationRecord> arbitrations;
  if (config.arbitrations) arbitrations = load_arbitrations(*config.arbitrations);
  result.summary = stats::summarize(result.labels, arbitrations, lexicon, config.stage, config.ci);
  result.summary_path = config.out_dir / "summary.csv";
  stats::write_summary_csv(result.summary_path, result.summary, provenance_comment(provenance));

  result.table = count_table(result.labels, lexicon);
  return result;
}

}  // namespace radlabel
