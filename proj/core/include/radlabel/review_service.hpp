#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "radlabel/corpus.hpp"
#include "radlabel/lexicon.hpp"
#include "radlabel/stats.hpp"

namespace radlabel::review {

struct ReviewOptions {
  stats::Stage stage = stats::Stage::kFinal;
  stats::CiParams params;
  // Serve reports that lack the de-identification marker.
  bool allow_raw = false;
};

struct SessionRequest {
  std::vector<std::string> keywords;  // empty means every lexicon keyword
  std::size_t n = stats::kDefaultSampleSize;
  std::uint64_t seed = 0;
};

struct KeywordSample {
  std::string keyword;
  std::size_t population = 0;
  std::vector<std::string> draw_order;
};

struct SessionInfo {
  std::string session_id;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  std::vector<KeywordSample> samples;  // sorted by keyword
};

struct SentenceSpan {
  std::size_t start = 0;
  std::size_t end = 0;
};

struct ReviewItem {
  std::string report_id;
  std::string keyword;
  std::string text;
  std::vector<EvidenceSpan> evidence;
  std::vector<SentenceSpan> sentences;  // evidence sentences, report offsets
  std::size_t position = 0;             // index in the draw order
  std::size_t sample_size = 0;
  std::size_t remaining = 0;            // unarbitrated pairs including this one
};

// Live spot-check sessions over one labeled corpus and one arbitration log.
//
// A session's id is derived from its request, so re-creating a session after
// a restart yields the same id and sample, and the replayed log restores its
// progress. Every interval is computed from the whole log exactly as the
// `ci` command does.
class ReviewService {
 public:
  // Replays `log_path` if it exists. Throws DataError on a raw corpus (unless
  // allowed) or on a log entry that does not reference a positive pair.
  ReviewService(Corpus corpus, std::vector<LabelRecord> labels, const Lexicon& lexicon,
                std::filesystem::path log_path, ReviewOptions options = {});
  ~ReviewService();

  ReviewService(const ReviewService&) = delete;
  ReviewService& operator=(const ReviewService&) = delete;

  SessionInfo create_session(const SessionRequest& request);
  SessionInfo session(const std::string& session_id) const;

  // Next unarbitrated pair in draw order, or nullopt when exhausted. Throws
  // NotFoundError for an unknown session or a keyword outside the session.
  std::optional<ReviewItem> next_item(const std::string& session_id,
                                      const std::string& keyword) const;

  // Appends the verdict to the log and returns the keyword's updated
  // interval. Throws NotFoundError for an unknown session and DataError when
  // the pair is not in the session's sample. A fresh verdict for an already
  // arbitrated pair supersedes the earlier one; both stay in the log.
  stats::SummaryRow submit_verdict(const std::string& session_id, ArbitrationRecord verdict);

  std::vector<stats::SummaryRow> summary(const std::string& session_id) const;

  std::vector<ArbitrationRecord> log() const;
  const ReviewOptions& options() const { return options_; }

 private:
  struct Session;

  stats::SummaryRow row_locked(const std::string& keyword) const;
  const Session& find_locked(const std::string& session_id) const;

  Corpus corpus_;
  const Lexicon& lexicon_;
  ReviewOptions options_;
  std::map<std::string, std::map<std::string, const LabelRecord*>> positives_;
  std::vector<LabelRecord> labels_;
  std::vector<ArbitrationRecord> log_;
  std::map<std::pair<std::string, std::string>, bool> verdicts_;
  std::unique_ptr<ArbitrationLogWriter> writer_;
  std::map<std::string, std::unique_ptr<Session>> sessions_;
  mutable std::shared_mutex mutex_;
};

// Current UTC time as ISO 8601 with seconds, used when a verdict omits it.
std::string utc_timestamp();

// Minimal HTTP front end. bind() with port 0 picks a free port.
class ReviewServer {
 public:
  explicit ReviewServer(ReviewService& service);
  ~ReviewServer();

  ReviewServer(const ReviewServer&) = delete;
  ReviewServer& operator=(const ReviewServer&) = delete;

  // Returns the bound port; throws IoError on failure.
  int bind(const std::string& host, int port);
  // Blocks until stop().
  void serve();
  // Returns once serve() is accepting connections.
  void wait_until_ready() const;
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace radlabel::review
