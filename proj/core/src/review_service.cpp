#include "radlabel/review_service.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <mutex>
#include <set>

#include "radlabel/deid.hpp"
#include "radlabel/error.hpp"
#include "radlabel/nlp_extract.hpp"
#include "radlabel/sentence.hpp"

namespace radlabel::review {

struct ReviewService::Session {
  SessionInfo info;
  std::map<std::string, std::size_t> index;  // keyword -> position in info.samples
  std::map<std::string, std::set<std::string>> members;
};

namespace {

bool positive_at(const LabelRecord& r, stats::Stage stage) {
  return stage == stats::Stage::kNlp ? r.nlp_status == KeywordStatus::kPositive
                                     : r.final_status == FinalStatus::kPositive;
}

// FNV-1a, stable across platforms and runs.
std::string session_id_for(const std::vector<std::string>& keywords, std::size_t n,
                           std::uint64_t seed, stats::Stage stage) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&](std::string_view s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
    h ^= 0xff;
    h *= 0x100000001b3ULL;
  };
  for (const auto& k : keywords) mix(k);
  mix(std::to_string(n));
  mix(std::to_string(seed));
  mix(stats::to_string(stage));
  char buf[24];
  std::snprintf(buf, sizeof buf, "s%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

ReviewService::ReviewService(Corpus corpus, std::vector<LabelRecord> labels,
                             const Lexicon& lexicon, std::filesystem::path log_path,
                             ReviewOptions options)
    : corpus_(std::move(corpus)), lexicon_(lexicon), options_(options), labels_(std::move(labels)) {
  if (!options_.allow_raw) {
    for (const Report& r : corpus_.reports) {
      if (!deid::is_deidentified(r)) {
        throw DataError("report " + r.report_id +
                        " is not de-identified; run deid first or pass --allow-raw");
      }
    }
  }
  for (const LabelRecord& r : labels_) {
    if (!lexicon_.find_keyword(r.keyword)) {
      throw DataError("labels reference unknown keyword '" + r.keyword + "'");
    }
    if (!positive_at(r, options_.stage)) continue;
    if (!corpus_.find(r.report_id)) {
      throw DataError("labels reference report " + r.report_id + " missing from the corpus");
    }
    positives_[r.keyword][r.report_id] = &r;
  }
  if (std::filesystem::exists(log_path)) {
    log_ = load_arbitrations(log_path);
    // Validates every entry against the positive pairs.
    stats::summarize(labels_, log_, lexicon_, options_.stage, options_.params);
    verdicts_ = stats::effective_verdicts(log_);
  }
  writer_ = std::make_unique<ArbitrationLogWriter>(std::move(log_path));
}

ReviewService::~ReviewService() = default;

SessionInfo ReviewService::create_session(const SessionRequest& request) {
  if (request.n == 0) throw DataError("sample size must be positive");
  std::vector<std::string> keywords = request.keywords;
  if (keywords.empty()) {
    for (const Keyword& k : lexicon_.keywords()) keywords.push_back(k.surface);
  }
  std::sort(keywords.begin(), keywords.end());
  keywords.erase(std::unique(keywords.begin(), keywords.end()), keywords.end());
  for (const auto& k : keywords) {
    if (!lexicon_.find_keyword(k)) throw NotFoundError("unknown keyword '" + k + "'");
  }
  const std::string id = session_id_for(keywords, request.n, request.seed, options_.stage);

  std::unique_lock lock(mutex_);
  if (auto it = sessions_.find(id); it != sessions_.end()) return it->second->info;

  auto session = std::make_unique<Session>();
  session->info.session_id = id;
  session->info.n = request.n;
  session->info.seed = request.seed;
  for (const auto& k : keywords) {
    KeywordSample ks;
    ks.keyword = k;
    std::vector<std::string> population;
    if (auto it = positives_.find(k); it != positives_.end()) {
      for (const auto& [report_id, record] : it->second) population.push_back(report_id);
    }
    ks.population = population.size();
    if (!population.empty()) {
      // Samples larger than the population become a census.
      const std::size_t n = std::min(request.n, ks.population);
      ks.draw_order =
          stats::draw_sample({k, ks.population, n, request.seed}, std::move(population))
              .draw_order;
    }
    session->index[k] = session->info.samples.size();
    session->members[k] = {ks.draw_order.begin(), ks.draw_order.end()};
    session->info.samples.push_back(std::move(ks));
  }
  SessionInfo info = session->info;
  sessions_.emplace(id, std::move(session));
  return info;
}

const ReviewService::Session& ReviewService::find_locked(const std::string& session_id) const {
  auto it = sessions_.find(session_id);
  if (it == sessions_.end()) throw NotFoundError("unknown session '" + session_id + "'");
  return *it->second;
}

SessionInfo ReviewService::session(const std::string& session_id) const {
  std::shared_lock lock(mutex_);
  return find_locked(session_id).info;
}

std::optional<ReviewItem> ReviewService::next_item(const std::string& session_id,
                                                   const std::string& keyword) const {
  std::shared_lock lock(mutex_);
  const Session& s = find_locked(session_id);
  auto idx = s.index.find(keyword);
  if (idx == s.index.end()) {
    throw NotFoundError("keyword '" + keyword + "' is not part of session " + session_id);
  }
  const KeywordSample& sample = s.info.samples[idx->second];
  std::size_t remaining = 0;
  std::optional<std::size_t> first;
  for (std::size_t i = 0; i < sample.draw_order.size(); ++i) {
    if (verdicts_.contains({sample.draw_order[i], keyword})) continue;
    ++remaining;
    if (!first) first = i;
  }
  if (!first) return std::nullopt;

  const std::string& report_id = sample.draw_order[*first];
  const Report* report = corpus_.find(report_id);
  const LabelRecord* record = positives_.at(keyword).at(report_id);
  ReviewItem item;
  item.report_id = report_id;
  item.keyword = keyword;
  item.text = report->text;
  item.evidence = record->evidence;
  item.position = *first;
  item.sample_size = sample.draw_order.size();
  item.remaining = remaining;
  const auto sentences = split_sentences(report->text);
  if (item.evidence.empty()) {
    // NLP-stage labels carry no evidence; fall back to the mentions.
    for (const Mention& m : find_keyword_mentions(report->text, lexicon_.keyword(keyword))) {
      item.evidence.push_back({sentence_index_at(sentences, m.start), m.start, m.end});
    }
  }
  std::set<std::size_t> seen;
  for (const EvidenceSpan& e : item.evidence) {
    if (e.sentence_index < sentences.size() && seen.insert(e.sentence_index).second) {
      item.sentences.push_back({sentences[e.sentence_index].start, sentences[e.sentence_index].end});
    }
  }
  return item;
}

stats::SummaryRow ReviewService::row_locked(const std::string& keyword) const {
  std::size_t population = 0;
  if (auto it = positives_.find(keyword); it != positives_.end()) population = it->second.size();
  return stats::summarize_keyword(keyword, population, verdicts_, options_.params);
}

stats::SummaryRow ReviewService::submit_verdict(const std::string& session_id,
                                                ArbitrationRecord verdict) {
  if (verdict.arbiter_id.empty()) throw DataError("verdict lacks arbiter_id");
  if (verdict.timestamp.empty()) verdict.timestamp = utc_timestamp();
  std::unique_lock lock(mutex_);
  const Session& s = find_locked(session_id);
  auto members = s.members.find(verdict.keyword);
  if (members == s.members.end()) {
    throw NotFoundError("keyword '" + verdict.keyword + "' is not part of session " + session_id);
  }
  if (!members->second.contains(verdict.report_id)) {
    throw DataError("(" + verdict.report_id + ", " + verdict.keyword +
                    ") is not in the session's sample");
  }
  writer_->append(verdict);
  log_.push_back(verdict);
  verdicts_ = stats::effective_verdicts(log_);
  return row_locked(verdict.keyword);
}

std::vector<stats::SummaryRow> ReviewService::summary(const std::string& session_id) const {
  std::shared_lock lock(mutex_);
  const Session& s = find_locked(session_id);
  std::vector<stats::SummaryRow> rows;
  for (const auto& sample : s.info.samples) rows.push_back(row_locked(sample.keyword));
  return rows;
}

std::vector<ArbitrationRecord> ReviewService::log() const {
  std::shared_lock lock(mutex_);
  return log_;
}

}  // namespace radlabel::review
