#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "radlabel/corpus.hpp"
#include "radlabel/lexicon.hpp"
#include "radlabel/sentence.hpp"

namespace radlabel {

// One occurrence of a keyword. Offsets are byte offsets into the report text.
struct Mention {
  std::string keyword;
  std::size_t sentence_index = 0;
  std::size_t start = 0;
  std::size_t end = 0;

  bool operator==(const Mention&) const = default;
};

enum class Assertion { kAffirmed, kNegated };

// Per-report result of the concept extraction + assertion stage. `status`
// holds every lexicon keyword.
struct NlpAnnotation {
  std::string report_id;
  std::map<std::string, KeywordStatus> status;
  std::vector<Mention> mentions;
};

// All non-overlapping occurrences of every keyword (and its variants):
// case-insensitive, on token boundaries, with an optional "s"/"es" on the
// final token. Sorted by (start, keyword).
std::vector<Mention> find_mentions(std::string_view text, const Lexicon& lexicon);

// Mentions of a single keyword inside `text`, offsets relative to `text`.
std::vector<Mention> find_keyword_mentions(std::string_view text, const Keyword& keyword);

// Negated iff a trigger precedes the mention in the same sentence, the
// mention's first token is within `lexicon.scope_window()` word tokens of the
// trigger, and no scope breaker lies between them. `sentence_start` is the
// byte offset of `sentence` within the report.
Assertion classify_assertion(const Mention& mention, std::string_view sentence,
                             std::size_t sentence_start, const Lexicon& lexicon);

NlpAnnotation annotate_report(const Report& report, const Lexicon& lexicon);

// Reads JSON Lines {report_id, keyword, status, spans?} produced by an
// external concept extractor. Returns one annotation per report named in the
// file, sorted by report_id; keywords not listed are Irrelevant. Unknown
// report ids or keywords raise DataError with the line number.
std::vector<NlpAnnotation> ingest_external_annotations(
    const std::filesystem::path& path, const Corpus& corpus, const Lexicon& lexicon);

// Empty annotation with every keyword Irrelevant.
NlpAnnotation irrelevant_annotation(std::string report_id, const Lexicon& lexicon);

}  // namespace radlabel
