#include "radlabel/fpr.hpp"

#include <algorithm>

#include "radlabel/text.hpp"

namespace radlabel {

// ----------------------------------------------------------------- sentences

namespace {

bool is_break_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

bool is_blank(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](char c) { return text::is_space(c); });
}

}  // namespace

std::vector<Sentence> split_sentences(std::string_view text) {
  std::vector<std::size_t> ends;
  const std::size_t n = text.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (text[i] == '.' && i + 1 < n && is_break_space(text[i + 1])) {
      ends.push_back(i + 2);
      ++i;
    } else if (text[i] == ':') {
      std::size_t j = i + 1;
      while (j < n && (text[j] == ' ' || text[j] == '\t' || text[j] == '\r')) ++j;
      if (j < n && text[j] == '\n') {
        ends.push_back(j + 1);
        i = j;
      }
    }
  }
  if (ends.empty() || ends.back() != n) ends.push_back(n);

  std::vector<Sentence> out;
  std::size_t start = 0;
  for (std::size_t end : ends) {
    if (end <= start) continue;
    std::string_view slice = text.substr(start, end - start);
    if (is_blank(slice)) {
      if (!out.empty()) {
        out.back().end = end;
        out.back().text.append(slice);
      } else if (end != n) {
        // Leading blank run before the first break; keep it with what follows.
        continue;
      }
      start = end;
      continue;
    }
    out.push_back({out.size(), start, end, std::string(slice)});
    start = end;
  }
  return out;
}

std::size_t sentence_index_at(const std::vector<Sentence>& sentences, std::size_t offset) {
  auto it = std::upper_bound(sentences.begin(), sentences.end(), offset,
                             [](std::size_t off, const Sentence& s) { return off < s.end; });
  if (it == sentences.end()) return sentences.empty() ? 0 : sentences.size() - 1;
  return it->index;
}

namespace {

bool is_upper_header_line(std::string_view line) {
  std::size_t letters = 0;
  for (char c : line) {
    if (c >= 'A' && c <= 'Z') {
      ++letters;
    } else if (c == ' ' || c == '\t' || c == '/' || c == '-' || c == '&' || c == ':') {
      continue;
    } else {
      return false;
    }
  }
  return letters >= 2;
}

bool is_colon_header_line(std::string_view line) {
  const std::size_t colon = line.find(':');
  if (colon == std::string_view::npos || colon == 0) return false;
  std::size_t words = 0;
  bool in_word = false;
  for (std::size_t i = 0; i < colon; ++i) {
    const char c = line[i];
    const bool letter = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
    if (letter) {
      if (!in_word) ++words;
      in_word = true;
    } else if (c == ' ' || c == '\t' || c == '/' || c == '-' || c == '&') {
      in_word = false;
    } else {
      return false;
    }
  }
  return words >= 1 && words <= 4;
}

}  // namespace

std::vector<std::size_t> section_header_offsets(std::string_view text) {
  std::vector<std::size_t> out;
  std::size_t line_start = 0;
  while (line_start <= text.size()) {
    std::size_t line_end = text.find('\n', line_start);
    if (line_end == std::string_view::npos) line_end = text.size();
    std::size_t first = line_start;
    while (first < line_end && (text[first] == ' ' || text[first] == '\t')) ++first;
    std::string_view line = text::trim(text.substr(first, line_end - first));
    if (!line.empty() && (is_colon_header_line(line) || is_upper_header_line(line))) {
      out.push_back(first);
    }
    if (line_end == text.size()) break;
    line_start = line_end + 1;
  }
  return out;
}

// ----------------------------------------------------------------- verdicts

std::string_view to_string(SentenceVerdict v) {
  switch (v) {
    case SentenceVerdict::kPositiveEvidence: return "positive-evidence";
    case SentenceVerdict::kExcluded: return "excluded";
    case SentenceVerdict::kAbsent: return "absent";
  }
  return "absent";
}

SentenceEvaluation evaluate_sentence(const Sentence& sentence, const Keyword& keyword,
                                     const Lexicon& lexicon) {
  SentenceEvaluation eval;
  eval.mentions = find_keyword_mentions(sentence.text, keyword);
  if (eval.mentions.empty()) return eval;
  for (auto& m : eval.mentions) {
    m.sentence_index = sentence.index;
    m.start += sentence.start;
    m.end += sentence.start;
  }

  const auto tokens = text::tokenize(sentence.text);
  for (const ExcludedWord& w : lexicon.excluded_words_for(keyword.surface)) {
    bool hit = false;
    if (w.char_match) {
      hit = sentence.text.find(w.phrase) != std::string::npos;
    } else {
      hit = std::any_of(w.forms.begin(), w.forms.end(),
                        [&](const TokenSeq& f) { return text::contains_phrase(tokens, f); });
    }
    if (hit) {
      eval.verdict = SentenceVerdict::kExcluded;
      eval.trigger = w.phrase;
      eval.category = w.category;
      return eval;
    }
  }
  eval.verdict = SentenceVerdict::kPositiveEvidence;
  return eval;
}

SentenceVerdict sentence_verdict(const Sentence& sentence, const Keyword& keyword,
                                 const Lexicon& lexicon) {
  return evaluate_sentence(sentence, keyword, lexicon).verdict;
}

std::vector<bool> history_block_mask(std::string_view text,
                                     const std::vector<Sentence>& sentences,
                                     const Lexicon& lexicon) {
  std::vector<bool> mask(sentences.size(), false);
  if (lexicon.history_markers().empty()) return mask;
  const auto headers = section_header_offsets(text);

  auto content_start = [](const Sentence& s) {
    std::size_t k = 0;
    while (k < s.text.size() && text::is_space(s.text[k])) ++k;
    return s.start + k;
  };

  for (const Sentence& s : sentences) {
    const auto tokens = text::tokenize(s.text);
    const bool opens = std::any_of(
        lexicon.history_markers().begin(), lexicon.history_markers().end(),
        [&](const TokenSeq& marker) { return text::match_at(tokens, 0, marker); });
    if (!opens) continue;
    const std::size_t block_start = content_start(s);
    auto next = std::upper_bound(headers.begin(), headers.end(), block_start);
    const std::size_t block_end = next == headers.end() ? text.size() : *next;
    for (std::size_t i = s.index; i < sentences.size(); ++i) {
      const std::size_t at = content_start(sentences[i]);
      if (at >= block_end) break;
      mask[i] = true;
    }
  }
  return mask;
}

std::vector<LabelRecord> reduce_report(const NlpAnnotation& annotation, const Report& report,
                                       const Lexicon& lexicon) {
  const auto sentences = split_sentences(report.text);
  std::vector<bool> in_block;
  bool block_computed = false;

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
      if (!block_computed) {
        in_block = history_block_mask(report.text, sentences, lexicon);
        block_computed = true;
      }
      for (const Sentence& s : sentences) {
        if (in_block[s.index]) continue;
        SentenceEvaluation eval = evaluate_sentence(s, k, lexicon);
        if (eval.verdict != SentenceVerdict::kPositiveEvidence) continue;
        rec.final_status = FinalStatus::kPositive;
        for (const auto& m : eval.mentions) rec.evidence.push_back({s.index, m.start, m.end});
      }
    }
    out.push_back(std::move(rec));
  }
  return out;
}

std::vector<ExplainRow> explain(const Report& report, const Keyword& keyword,
                                const Lexicon& lexicon) {
  const auto sentences = split_sentences(report.text);
  const auto in_block = history_block_mask(report.text, sentences, lexicon);
  std::vector<ExplainRow> rows;
  for (const Sentence& s : sentences) {
    ExplainRow row{s, evaluate_sentence(s, keyword, lexicon), in_block[s.index]};
    if (row.in_history_block && row.evaluation.verdict == SentenceVerdict::kPositiveEvidence) {
      row.evaluation.verdict = SentenceVerdict::kExcluded;
      row.evaluation.trigger = "history block";
      row.evaluation.category = "Patient History Information";
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace radlabel
