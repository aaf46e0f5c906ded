#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "radlabel/corpus.hpp"
#include "radlabel/deid.hpp"
#include "radlabel/error.hpp"
#include "radlabel/lexicon.hpp"
#include "radlabel/nlp_extract.hpp"
#include "radlabel/stats.hpp"

namespace radlabel {

std::string_view tool_version();

std::string sha256_hex(std::string_view data);
std::string sha256_file(const std::filesystem::path& path);

// Hardware concurrency, at least 1.
std::size_t default_jobs();

// Runs fn(i) for i in [0, count) on up to `jobs` threads. Callers write
// results by index, so output order never depends on scheduling. The first
// exception thrown by fn is rethrown after all workers finish.
void parallel_for(std::size_t count, std::size_t jobs,
                  const std::function<void(std::size_t)>& fn);

// Error raised by a pipeline stage; names the stage and the record.
class StageError : public DataError {
 public:
  StageError(std::string stage, std::string record_id, const std::string& what);
  const std::string& stage() const { return stage_; }
  const std::string& record_id() const { return record_id_; }

 private:
  std::string stage_;
  std::string record_id_;
};

// NLP-stage records for one report: final_status stays Unmarked and the
// evidence lists the keyword's mentions when it is Positive.
std::vector<LabelRecord> nlp_labels(const NlpAnnotation& annotation, const Report& report,
                                    const Lexicon& lexicon);

struct LabelOptions {
  stats::Stage stage = stats::Stage::kFinal;
  std::size_t jobs = 1;
  // Replaces the built-in extractor when set. Reports missing from the
  // file count as having no relevant keyword.
  const std::vector<NlpAnnotation>* external = nullptr;
};

// Labels every report; records sorted by (report_id, keyword).
std::vector<LabelRecord> label_corpus(const Corpus& corpus, const Lexicon& lexicon,
                                      const LabelOptions& options = {});

// Both de-identification passes over a corpus. `store` is extended by the
// first pass and then used for the second.
Corpus deid_corpus(const Corpus& corpus, deid::PhiStore& store, std::size_t jobs = 1,
                   bool run_first_pass = true, bool run_second_pass = true,
                   const deid::Patterns& patterns = deid::Patterns::defaults());

struct SampleRecord {
  std::string keyword;
  std::size_t population = 0;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  stats::Sample sample;
};

// One sample per keyword with positives; samples never exceed the
// population.
std::vector<SampleRecord> draw_samples(const std::vector<LabelRecord>& labels,
                                       const Lexicon& lexicon, stats::Stage stage,
                                       std::size_t n, std::uint64_t seed);
std::string serialize_sample(const SampleRecord& record);

// Per-keyword counts laid out like a published accuracy table:
// condition, keyword, NLP-positive, final-positive.
std::string count_table(const std::vector<LabelRecord>& labels, const Lexicon& lexicon);

struct PipelineConfig {
  std::filesystem::path corpus;
  std::optional<std::filesystem::path> lexicon;
  std::optional<std::filesystem::path> phi_store;     // enables de-identification
  std::optional<std::filesystem::path> annotations;   // external NLP output
  std::optional<std::filesystem::path> arbitrations;
  std::filesystem::path out_dir;
  stats::Stage stage = stats::Stage::kFinal;
  std::uint64_t seed = 0;
  std::size_t sample_size = stats::kDefaultSampleSize;
  stats::CiParams ci;
  std::size_t jobs = 1;
};

struct PipelineResult {
  std::filesystem::path labels_path;
  std::filesystem::path summary_path;
  std::filesystem::path samples_path;
  std::optional<std::filesystem::path> deid_path;
  std::vector<LabelRecord> labels;
  std::vector<stats::SummaryRow> summary;
  std::string table;
};

// deid (when a store is given) -> nlp -> fpr -> sample -> summary. Writes
// labels.jsonl, samples.jsonl and summary.csv (plus reports.deid.jsonl) into
// out_dir. Outputs depend only on the inputs and the seed.
PipelineResult run_pipeline(const PipelineConfig& config);

// Provenance fields shared by every output of one run.
Provenance make_provenance(const std::filesystem::path& corpus_path,
                           const std::optional<std::filesystem::path>& lexicon_path,
                           std::uint64_t seed, std::string_view stage);

// Same fields rendered as a single "key=value ..." line for CSV comments.
std::string provenance_comment(const Provenance& provenance);

}  // namespace radlabel
