#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "radlabel/corpus.hpp"
#include "radlabel/lexicon.hpp"
#include "radlabel/nlp_extract.hpp"
#include "radlabel/sentence.hpp"

namespace radlabel {

enum class SentenceVerdict { kPositiveEvidence, kExcluded, kAbsent };

std::string_view to_string(SentenceVerdict v);

// Verdict plus what caused it. `mentions` carry absolute offsets when the
// sentence carries its report offsets. `trigger` is the excluded word that
// fired (or "history block"), empty otherwise.
struct SentenceEvaluation {
  SentenceVerdict verdict = SentenceVerdict::kAbsent;
  std::vector<Mention> mentions;
  std::string trigger;
  std::string category;
};

// Absent when the keyword does not occur; Excluded when any applicable
// excluded word occurs anywhere in the sentence; otherwise PositiveEvidence.
SentenceVerdict sentence_verdict(const Sentence& sentence, const Keyword& keyword,
                                 const Lexicon& lexicon);
SentenceEvaluation evaluate_sentence(const Sentence& sentence, const Keyword& keyword,
                                     const Lexicon& lexicon);

// in_block[i] is true when sentence i lies inside a history block: from a
// sentence that begins with a history marker up to the next section header.
std::vector<bool> history_block_mask(std::string_view text,
                                     const std::vector<Sentence>& sentences,
                                     const Lexicon& lexicon);

// Every keyword of the lexicon, sorted by keyword. A keyword is final
// Positive iff it is NLP-Positive and at least one sentence outside a history
// block yields PositiveEvidence; all such sentences are recorded as evidence.
// Nothing is ever marked negative here.
std::vector<LabelRecord> reduce_report(const NlpAnnotation& annotation,
                                       const Report& report, const Lexicon& lexicon);

// Per-sentence trace for one keyword of one report.
struct ExplainRow {
  Sentence sentence;
  SentenceEvaluation evaluation;
  bool in_history_block = false;
};

std::vector<ExplainRow> explain(const Report& report, const Keyword& keyword,
                                const Lexicon& lexicon);

}  // namespace radlabel
