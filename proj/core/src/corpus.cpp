#include "radlabel/corpus.hpp"

#include <algorithm>
#include <iostream>
#include <sstream>

#include "jsonl.hpp"

namespace radlabel {

namespace detail {

void for_each_line(std::istream& in,
                   const std::function<void(std::size_t, std::string_view)>& fn) {
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    fn(number, line);
  }
}

void for_each_line(const std::filesystem::path& path,
                   const std::function<void(std::size_t, std::string_view)>& fn) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  for_each_line(in, fn);
}

json parse_object(std::string_view line, const std::string& where) {
  json j = json::parse(line, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded() || !j.is_object()) {
    throw DataError(where + ": not a JSON object");
  }
  return j;
}

const std::string& require_string(const json& obj, const char* field,
                                  const std::string& where) {
  auto it = obj.find(field);
  if (it == obj.end() || !it->is_string()) {
    throw DataError(where + ": missing string field '" + field + "'");
  }
  return it->get_ref<const std::string&>();
}

std::ofstream open_for_write(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

}  // namespace detail

using detail::json;

namespace {

std::string at_line(const std::string& source, std::size_t line) {
  return source + ":" + std::to_string(line);
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace

const Report* Corpus::find(std::string_view report_id) const {
  auto it = std::lower_bound(
      reports.begin(), reports.end(), report_id,
      [](const Report& r, std::string_view id) { return r.report_id < id; });
  if (it == reports.end() || it->report_id != report_id) return nullptr;
  return &*it;
}

std::string_view to_string(KeywordStatus s) {
  switch (s) {
    case KeywordStatus::kPositive: return "positive";
    case KeywordStatus::kNegative: return "negative";
    case KeywordStatus::kIrrelevant: return "irrelevant";
  }
  return "irrelevant";
}

std::string_view to_string(FinalStatus s) {
  return s == FinalStatus::kPositive ? "positive" : "unmarked";
}

KeywordStatus parse_keyword_status(std::string_view s) {
  if (s == "positive") return KeywordStatus::kPositive;
  if (s == "negative") return KeywordStatus::kNegative;
  if (s == "irrelevant") return KeywordStatus::kIrrelevant;
  throw DataError("unknown keyword status '" + std::string(s) + "'");
}

FinalStatus parse_final_status(std::string_view s) {
  if (s == "positive") return FinalStatus::kPositive;
  if (s == "unmarked") return FinalStatus::kUnmarked;
  throw DataError("unknown final status '" + std::string(s) + "'");
}

// ---------------------------------------------------------------- provenance

std::string serialize_provenance(const Provenance& provenance) {
  json j = json::object();
  j["provenance"] = provenance.fields;
  return detail::dump_compact(j);
}

bool is_provenance_line(std::string_view line) {
  return line.starts_with("{\"provenance\":");
}

// -------------------------------------------------------------------- corpus

std::string serialize_report(const Report& report) {
  json j = {{"report_id", report.report_id},
            {"site", report.site},
            {"text", report.text}};
  if (!report.metadata.empty()) j["metadata"] = report.metadata;
  return detail::dump_compact(j);
}

Corpus parse_corpus(std::istream& in, std::string source) {
  Corpus corpus;
  corpus.source_path = std::move(source);
  std::map<std::string, std::size_t> seen;
  detail::for_each_line(in, [&](std::size_t number, std::string_view line) {
    if (is_provenance_line(line)) return;
    const std::string where = at_line(corpus.source_path, number);
    json j = detail::parse_object(line, where);
    Report r;
    r.report_id = detail::require_string(j, "report_id", where);
    r.text = detail::require_string(j, "text", where);
    if (auto it = j.find("site"); it != j.end()) {
      if (!it->is_string()) throw DataError(where + ": 'site' must be a string");
      r.site = it->get<std::string>();
    }
    if (r.report_id.empty()) throw DataError(where + ": empty report_id");
    if (r.text.empty()) throw DataError(where + ": empty text for " + r.report_id);
    if (auto it = j.find("metadata"); it != j.end() && !it->is_null()) {
      if (!it->is_object()) throw DataError(where + ": 'metadata' must be an object");
      for (const auto& [key, value] : it->items()) {
        if (!value.is_string()) {
          throw DataError(where + ": metadata value for '" + key +
                          "' must be a string");
        }
        r.metadata[key] = value.get<std::string>();
      }
    }
    if (auto [it, inserted] = seen.emplace(r.report_id, number); !inserted) {
      throw DataError(where + ": duplicate report_id '" + r.report_id +
                      "' (first seen on line " + std::to_string(it->second) +
                      ")");
    }
    corpus.reports.push_back(std::move(r));
  });
  std::sort(corpus.reports.begin(), corpus.reports.end(),
            [](const Report& a, const Report& b) {
              return a.report_id < b.report_id;
            });
  if (corpus.reports.empty()) {
    std::cerr << "warning: " << corpus.source_path << " contains no reports\n";
  }
  return corpus;
}

Corpus load_corpus(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return parse_corpus(in, path.string());
}

void write_corpus(const Corpus& corpus, const std::filesystem::path& path,
                  const Provenance* provenance) {
  auto out = detail::open_for_write(path);
  if (provenance) out << serialize_provenance(*provenance) << '\n';
  for (const Report& r : corpus.reports) out << serialize_report(r) << '\n';
  finish(out, path);
}

// -------------------------------------------------------------------- labels

std::string serialize_label(const LabelRecord& record) {
  json evidence = json::array();
  for (const auto& e : record.evidence) {
    evidence.push_back(
        {{"sentence_index", e.sentence_index}, {"start", e.start}, {"end", e.end}});
  }
  json j = {{"report_id", record.report_id},
            {"keyword", record.keyword},
            {"condition", record.condition},
            {"nlp_status", to_string(record.nlp_status)},
            {"final_status", to_string(record.final_status)},
            {"evidence", std::move(evidence)}};
  return detail::dump_compact(j);
}

void write_labels(const std::vector<LabelRecord>& records,
                  const std::filesystem::path& path,
                  const Provenance* provenance) {
  for (std::size_t i = 1; i < records.size(); ++i) {
    const auto& a = records[i - 1];
    const auto& b = records[i];
    if (std::tie(a.report_id, a.keyword) >= std::tie(b.report_id, b.keyword)) {
      throw DataError("label records not strictly sorted by (report_id, keyword) at index " +
                      std::to_string(i) + " (" + b.report_id + ", " + b.keyword + ")");
    }
  }
  auto out = detail::open_for_write(path);
  if (provenance) out << serialize_provenance(*provenance) << '\n';
  for (const auto& r : records) out << serialize_label(r) << '\n';
  finish(out, path);
}

std::vector<LabelRecord> load_labels(const std::filesystem::path& path) {
  std::vector<LabelRecord> records;
  const std::string source = path.string();
  detail::for_each_line(path, [&](std::size_t number, std::string_view line) {
    if (is_provenance_line(line)) return;
    const std::string where = at_line(source, number);
    json j = detail::parse_object(line, where);
    LabelRecord r;
    r.report_id = detail::require_string(j, "report_id", where);
    r.keyword = detail::require_string(j, "keyword", where);
    r.condition = detail::require_string(j, "condition", where);
    try {
      r.nlp_status = parse_keyword_status(detail::require_string(j, "nlp_status", where));
      r.final_status = parse_final_status(detail::require_string(j, "final_status", where));
    } catch (const DataError& e) {
      throw DataError(where + ": " + e.what());
    }
    if (auto it = j.find("evidence"); it != j.end()) {
      if (!it->is_array()) throw DataError(where + ": 'evidence' must be an array");
      for (const auto& e : *it) {
        try {
          r.evidence.push_back({e.at("sentence_index").get<std::size_t>(),
                                e.at("start").get<std::size_t>(),
                                e.at("end").get<std::size_t>()});
        } catch (const json::exception&) {
          throw DataError(where + ": malformed evidence entry");
        }
      }
    }
    records.push_back(std::move(r));
  });
  return records;
}

// ------------------------------------------------------------- arbitrations

std::string serialize_arbitration(const ArbitrationRecord& record) {
  json j = {{"report_id", record.report_id},
            {"keyword", record.keyword},
            {"correct", record.correct},
            {"arbiter_id", record.arbiter_id},
            {"timestamp", record.timestamp}};
  return detail::dump_compact(j);
}

namespace {

ArbitrationRecord arbitration_from_json(const json& j, const std::string& where) {
  ArbitrationRecord r;
  r.report_id = detail::require_string(j, "report_id", where);
  r.keyword = detail::require_string(j, "keyword", where);
  auto it = j.find("correct");
  if (it == j.end() || !it->is_boolean()) {
    throw DataError(where + ": missing boolean field 'correct'");
  }
  r.correct = it->get<bool>();
  r.arbiter_id = detail::require_string(j, "arbiter_id", where);
  if (auto ts = j.find("timestamp"); ts != j.end() && ts->is_string()) {
    r.timestamp = ts->get<std::string>();
  }
  return r;
}

}  // namespace

ArbitrationRecord parse_arbitration(std::string_view json_line) {
  return arbitration_from_json(detail::parse_object(json_line, "arbitration"),
                               "arbitration");
}

std::vector<ArbitrationRecord> load_arbitrations(
    const std::filesystem::path& path) {
  std::vector<ArbitrationRecord> records;
  const std::string source = path.string();
  detail::for_each_line(path, [&](std::size_t number, std::string_view line) {
    if (is_provenance_line(line)) return;
    const std::string where = at_line(source, number);
    records.push_back(arbitration_from_json(detail::parse_object(line, where), where));
  });
  return records;
}

ArbitrationLogWriter::ArbitrationLogWriter(std::filesystem::path path)
    : path_(std::move(path)) {
  file_ = std::fopen(path_.c_str(), "ab");
  if (!file_) throw IoError("cannot open arbitration log " + path_.string());
}

ArbitrationLogWriter::~ArbitrationLogWriter() {
  if (file_) std::fclose(file_);
}

void ArbitrationLogWriter::append(const ArbitrationRecord& record) {
  std::string line = serialize_arbitration(record);
  line.push_back('\n');
  if (std::fwrite(line.data(), 1, line.size(), file_) != line.size() ||
      std::fflush(file_) != 0) {
    throw IoError("append failed for " + path_.string());
  }
}

}  // namespace radlabel
