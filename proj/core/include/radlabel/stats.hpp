#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "radlabel/corpus.hpp"
#include "radlabel/lexicon.hpp"

namespace radlabel::stats {

inline constexpr std::size_t kDefaultSampleSize = 33;
inline constexpr double kDefaultT = 2.04;
inline constexpr std::size_t kDefaultIntervalMinN = 20;

struct SampleSpec {
  std::string keyword;
  std::size_t population_size = 0;
  std::size_t sample_size = kDefaultSampleSize;
  std::uint64_t seed = 0;
};

struct Sample {
  std::vector<std::string> draw_order;  // order in which ids were drawn
  std::vector<std::string> sorted;      // same ids, sorted for display
};

// Uniform sample without replacement, reproducible from the seed and
// independent of the order of `population`. Throws DataError when n == 0,
// n > N, or the population size disagrees with spec.population_size.
Sample draw_sample(const SampleSpec& spec, std::vector<std::string> population);

// Finite population correction sqrt((N - n) / (N - 1)).
double fpc(std::size_t population, std::size_t sample);

struct CiParams {
  double t = kDefaultT;
  double confidence_level = 0.95;
  // Intervals are only reported for samples at least this large; smaller
  // samples get a point estimate.
  std::size_t interval_min_n = kDefaultIntervalMinN;
  // Use the Student t quantile for n - 1 degrees of freedom instead of `t`.
  bool df_exact = false;
};

struct CiResult {
  std::string keyword;
  std::size_t population = 0;  // N
  std::size_t sample = 0;      // n
  std::size_t hits = 0;
  double p_hat = 0.0;
  double se = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  bool point_only = false;

  bool operator==(const CiResult&) const = default;
};

// p = hits / n, SE = sqrt(p (1 - p)) * fpc(N, n), bounds p -/+ t SE / sqrt(n)
// clamped to [0, 1]. When n < interval_min_n the bounds collapse to p.
CiResult confidence_interval(std::size_t population, std::size_t sample, std::size_t hits,
                             const CiParams& params = {});

// t value used for a sample of size n under `params`.
double t_value(std::size_t sample, const CiParams& params);

enum class Stage { kNlp, kFinal };
Stage parse_stage(std::string_view s);
std::string_view to_string(Stage s);

// Report ids that are positive for `keyword` at `stage`, sorted.
std::vector<std::string> positive_population(const std::vector<LabelRecord>& labels,
                                             const std::string& keyword, Stage stage);

// Effective verdicts: last entry per (report, keyword, arbiter) wins, and the
// latest of those per (report, keyword) is the pair's verdict.
std::map<std::pair<std::string, std::string>, bool> effective_verdicts(
    const std::vector<ArbitrationRecord>& arbitrations);

enum class RowKind { kInterval, kPointOnly, kUnsampled, kNoPositives };

struct SummaryRow {
  std::string keyword;
  RowKind kind = RowKind::kUnsampled;
  CiResult ci;  // population is always set; the rest only when sampled
};

// One row per lexicon keyword, sorted by keyword. Throws DataError when an
// arbitration references a pair that is not positive at `stage`.
std::vector<SummaryRow> summarize(const std::vector<LabelRecord>& labels,
                                  const std::vector<ArbitrationRecord>& arbitrations,
                                  const Lexicon& lexicon, Stage stage,
                                  const CiParams& params = {});

// Row for a single keyword; same rules as summarize.
SummaryRow summarize_keyword(const std::string& keyword, std::size_t population,
                             const std::map<std::pair<std::string, std::string>, bool>& verdicts,
                             const CiParams& params);

inline constexpr const char* kSummaryHeader =
    "keyword,n_positive,n_sampled,n_correct,p_hat,ci_lower,ci_upper";

// 3-decimal fixed formatting used for every printed proportion.
std::string format3(double value);
std::string summary_csv_line(const SummaryRow& row);
void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows,
                       const std::string& provenance_comment = {});
void write_summary_csv(const std::filesystem::path& path, const std::vector<SummaryRow>& rows,
                       const std::string& provenance_comment = {});

}  // namespace radlabel::stats
