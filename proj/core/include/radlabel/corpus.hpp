#pragma once

#include <cstddef>
#include <cstdio>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace radlabel {

// One study's report. `metadata` stands in for structured DICOM header
// fields (e.g. "PatientName" -> "SMITH^JANE^Q").
struct Report {
  std::string report_id;
  std::string site;
  std::string text;
  std::map<std::string, std::string> metadata;

  bool operator==(const Report&) const = default;
};

// Reports sorted by report_id, ids unique. Immutable after load.
struct Corpus {
  std::vector<Report> reports;
  std::string source_path;

  std::size_t size() const { return reports.size(); }
  bool empty() const { return reports.empty(); }
  const Report* find(std::string_view report_id) const;
};

enum class KeywordStatus { kPositive, kNegative, kIrrelevant };
enum class FinalStatus { kPositive, kUnmarked };

std::string_view to_string(KeywordStatus s);
std::string_view to_string(FinalStatus s);
KeywordStatus parse_keyword_status(std::string_view s);
FinalStatus parse_final_status(std::string_view s);

struct EvidenceSpan {
  std::size_t sentence_index = 0;
  std::size_t start = 0;
  std::size_t end = 0;

  bool operator==(const EvidenceSpan&) const = default;
};

// Status of one keyword in one report, at the NLP stage and after false
// positive reduction.
struct LabelRecord {
  std::string report_id;
  std::string keyword;
  std::string condition;
  KeywordStatus nlp_status = KeywordStatus::kIrrelevant;
  FinalStatus final_status = FinalStatus::kUnmarked;
  std::vector<EvidenceSpan> evidence;

  bool operator==(const LabelRecord&) const = default;
};

// A human verdict on one sampled (report, keyword) pair. `correct` is true
// when the abnormality is indeed present.
struct ArbitrationRecord {
  std::string report_id;
  std::string keyword;
  bool correct = false;
  std::string arbiter_id;
  std::string timestamp;

  bool operator==(const ArbitrationRecord&) const = default;
};

// Free-form key/value header written as the first line of CLI outputs.
struct Provenance {
  std::map<std::string, std::string> fields;
};

// Reports file: JSON Lines with report_id, site, text, optional metadata.
// Blank lines are ignored. Throws DataError naming the line number for a
// malformed record and naming the id for duplicates.
Corpus load_corpus(const std::filesystem::path& path);
Corpus parse_corpus(std::istream& in, std::string source);
void write_corpus(const Corpus& corpus, const std::filesystem::path& path,
                  const Provenance* provenance = nullptr);
std::string serialize_report(const Report& report);

// Records must be strictly sorted by (report_id, keyword).
void write_labels(const std::vector<LabelRecord>& records,
                  const std::filesystem::path& path,
                  const Provenance* provenance = nullptr);
std::vector<LabelRecord> load_labels(const std::filesystem::path& path);
std::string serialize_label(const LabelRecord& record);

std::vector<ArbitrationRecord> load_arbitrations(
    const std::filesystem::path& path);
std::string serialize_arbitration(const ArbitrationRecord& record);
ArbitrationRecord parse_arbitration(std::string_view json_line);

// Append-only writer for the arbitration log. Each append is flushed before
// returning. Not thread-safe; callers serialize access.
class ArbitrationLogWriter {
 public:
  explicit ArbitrationLogWriter(std::filesystem::path path);
  ~ArbitrationLogWriter();
  ArbitrationLogWriter(const ArbitrationLogWriter&) = delete;
  ArbitrationLogWriter& operator=(const ArbitrationLogWriter&) = delete;

  void append(const ArbitrationRecord& record);
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  std::FILE* file_ = nullptr;
};

std::string serialize_provenance(const Provenance& provenance);

// True if the line is a provenance header written by serialize_provenance.
bool is_provenance_line(std::string_view line);

}  // namespace radlabel
