#include "radlabel/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <set>

#include <boost/math/distributions/students_t.hpp>

#include "radlabel/error.hpp"

namespace radlabel::stats {

namespace {

// Uniform integer in [0, bound) by rejection; identical across standard
// library implementations, unlike std::uniform_int_distribution.
std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  while (true) {
    const std::uint64_t r = rng();
    if (r < limit) return r % bound;
  }
}

}  // namespace

Sample draw_sample(const SampleSpec& spec, std::vector<std::string> population) {
  const std::size_t n = spec.sample_size;
  const std::size_t N = spec.population_size;
  if (population.size() != N) {
    throw DataError("population for '" + spec.keyword + "' has " +
                    std::to_string(population.size()) + " ids but N = " + std::to_string(N));
  }
  if (n == 0) throw DataError("sample size must be at least 1");
  if (n > N) {
    throw DataError("sample size " + std::to_string(n) + " exceeds the " + std::to_string(N) +
                    " positive reports for '" + spec.keyword +
                    "'; review the whole population as a point estimate instead");
  }
  std::sort(population.begin(), population.end());
  if (std::adjacent_find(population.begin(), population.end()) != population.end()) {
    throw DataError("population for '" + spec.keyword + "' contains duplicate ids");
  }

  std::mt19937_64 rng(spec.seed);
  Sample s;
  s.draw_order.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(bounded(rng, N - i));
    std::swap(population[i], population[j]);
    s.draw_order.push_back(population[i]);
  }
  s.sorted = s.draw_order;
  std::sort(s.sorted.begin(), s.sorted.end());
  return s;
}

double fpc(std::size_t population, std::size_t sample) {
  if (population < 2) throw DataError("finite population correction needs N >= 2");
  if (sample < 1 || sample > population) {
    throw DataError("finite population correction needs 1 <= n <= N");
  }
  return std::sqrt(static_cast<double>(population - sample) /
                   static_cast<double>(population - 1));
}

double t_value(std::size_t sample, const CiParams& params) {
  if (!params.df_exact) return params.t;
  if (sample < 2) return params.t;
  boost::math::students_t dist(static_cast<double>(sample - 1));
  return boost::math::quantile(dist, 1.0 - (1.0 - params.confidence_level) / 2.0);
}

CiResult confidence_interval(std::size_t population, std::size_t sample, std::size_t hits,
                             const CiParams& params) {
  if (sample == 0) throw DataError("confidence interval needs at least one sampled report");
  if (hits > sample || sample > population) {
    throw DataError("confidence interval needs 0 <= hits <= n <= N (hits=" +
                    std::to_string(hits) + ", n=" + std::to_string(sample) +
                    ", N=" + std::to_string(population) + ")");
  }
  if (!(params.t > 0.0)) throw DataError("t must be positive");

  CiResult r;
  r.population = population;
  r.sample = sample;
  r.hits = hits;
  r.p_hat = static_cast<double>(hits) / static_cast<double>(sample);
  const double f = population >= 2 ? fpc(population, sample) : 0.0;
  r.se = std::sqrt(r.p_hat * (1.0 - r.p_hat)) * f;
  if (sample < params.interval_min_n) {
    r.point_only = true;
    r.lower = r.upper = r.p_hat;
    return r;
  }
  const double half = t_value(sample, params) * r.se / std::sqrt(static_cast<double>(sample));
  r.lower = std::clamp(r.p_hat - half, 0.0, 1.0);
  r.upper = std::clamp(r.p_hat + half, 0.0, 1.0);
  return r;
}

Stage parse_stage(std::string_view s) {
  if (s == "nlp") return Stage::kNlp;
  if (s == "final") return Stage::kFinal;
  throw DataError("unknown stage '" + std::string(s) + "' (expected nlp or final)");
}

std::string_view to_string(Stage s) { return s == Stage::kNlp ? "nlp" : "final"; }

namespace {

bool positive_at(const LabelRecord& r, Stage stage) {
  return stage == Stage::kNlp ? r.nlp_status == KeywordStatus::kPositive
                              : r.final_status == FinalStatus::kPositive;
}

}  // namespace

std::vector<std::string> positive_population(const std::vector<LabelRecord>& labels,
                                             const std::string& keyword, Stage stage) {
  std::vector<std::string> out;
  for (const auto& r : labels) {
    if (r.keyword == keyword && positive_at(r, stage)) out.push_back(r.report_id);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::map<std::pair<std::string, std::string>, bool> effective_verdicts(
    const std::vector<ArbitrationRecord>& arbitrations) {
  // Log order is the time order; the last write wins per pair, which also
  // makes it win per (pair, arbiter).
  std::map<std::pair<std::string, std::string>, bool> out;
  for (const auto& a : arbitrations) out[{a.report_id, a.keyword}] = a.correct;
  return out;
}

SummaryRow summarize_keyword(const std::string& keyword, std::size_t population,
                             const std::map<std::pair<std::string, std::string>, bool>& verdicts,
                             const CiParams& params) {
  SummaryRow row;
  row.keyword = keyword;
  row.ci.keyword = keyword;
  row.ci.population = population;
  std::size_t n = 0, hits = 0;
  for (const auto& [pair, correct] : verdicts) {
    if (pair.second != keyword) continue;
    ++n;
    if (correct) ++hits;
  }
  if (population == 0) {
    row.kind = RowKind::kNoPositives;
    return row;
  }
  if (n == 0) {
    row.kind = RowKind::kUnsampled;
    return row;
  }
  row.ci = confidence_interval(population, n, hits, params);
  row.ci.keyword = keyword;
  row.kind = row.ci.point_only ? RowKind::kPointOnly : RowKind::kInterval;
  return row;
}

std::vector<SummaryRow> summarize(const std::vector<LabelRecord>& labels,
                                  const std::vector<ArbitrationRecord>& arbitrations,
                                  const Lexicon& lexicon, Stage stage, const CiParams& params) {
  std::map<std::string, std::set<std::string>> positives;
  for (const auto& r : labels) {
    if (positive_at(r, stage)) positives[r.keyword].insert(r.report_id);
  }
  for (const auto& a : arbitrations) {
    if (!lexicon.find_keyword(a.keyword)) {
      throw DataError("arbitration references unknown keyword '" + a.keyword + "'");
    }
    auto it = positives.find(a.keyword);
    if (it == positives.end() || !it->second.contains(a.report_id)) {
      throw DataError("arbitration for (" + a.report_id + ", " + a.keyword +
                      ") does not reference a " + std::string(to_string(stage)) +
                      "-positive label");
    }
  }
  const auto verdicts = effective_verdicts(arbitrations);
  std::vector<SummaryRow> rows;
  for (const Keyword& k : lexicon.keywords()) {
    auto it = positives.find(k.surface);
    const std::size_t N = it == positives.end() ? 0 : it->second.size();
    rows.push_back(summarize_keyword(k.surface, N, verdicts, params));
  }
  return rows;
}

std::string format3(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", value);
  return buf;
}

std::string summary_csv_line(const SummaryRow& row) {
  std::string keyword = row.keyword;
  if (keyword.find_first_of(",\"") != std::string::npos) {
    std::string quoted = "\"";
    for (char c : keyword) {
      if (c == '"') quoted.push_back('"');
      quoted.push_back(c);
    }
    keyword = quoted + "\"";
  }
  std::string line = keyword + "," + std::to_string(row.ci.population) + ",";
  switch (row.kind) {
    case RowKind::kNoPositives:
      return line + "0,0,N/A,N/A,N/A";
    case RowKind::kUnsampled:
      return line + "0,0,unsampled,unsampled,unsampled";
    case RowKind::kPointOnly:
    case RowKind::kInterval:
      return line + std::to_string(row.ci.sample) + "," + std::to_string(row.ci.hits) + "," +
             format3(row.ci.p_hat) + "," + format3(row.ci.lower) + "," + format3(row.ci.upper);
  }
  return line;
}

void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows,
                       const std::string& provenance_comment) {
  if (!provenance_comment.empty()) out << "# " << provenance_comment << '\n';
  out << kSummaryHeader << '\n';
  for (const auto& row : rows) out << summary_csv_line(row) << '\n';
}

void write_summary_csv(const std::filesystem::path& path, const std::vector<SummaryRow>& rows,
                       const std::string& provenance_comment) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  write_summary_csv(out, rows, provenance_comment);
  out.flush();
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace radlabel::stats
