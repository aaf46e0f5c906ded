#include "radlabel/nlp_extract.hpp"

#include <algorithm>
#include <set>

#include "jsonl.hpp"
#include "radlabel/error.hpp"
#include "radlabel/text.hpp"

namespace radlabel {

namespace {

const std::vector<std::string_view> kPluralSuffixes = {"s", "es"};

}  // namespace

std::vector<Mention> find_keyword_mentions(std::string_view text, const Keyword& keyword) {
  std::vector<const TokenSeq*> forms;
  for (const auto& f : keyword.forms) forms.push_back(&f);
  std::stable_sort(forms.begin(), forms.end(),
                   [](const auto* a, const auto* b) { return a->size() > b->size(); });

  const auto tokens = text::tokenize(text);
  std::vector<Mention> out;
  std::size_t i = 0;
  while (i < tokens.size()) {
    std::size_t matched = 0;
    for (const TokenSeq* form : forms) {
      if (text::match_at(tokens, i, *form, kPluralSuffixes)) {
        matched = form->size();
        break;
      }
    }
    if (matched == 0) {
      ++i;
      continue;
    }
    out.push_back({keyword.surface, 0, tokens[i].start, tokens[i + matched - 1].end});
    i += matched;
  }
  return out;
}

std::vector<Mention> find_mentions(std::string_view text, const Lexicon& lexicon) {
  const auto sentences = split_sentences(text);
  std::vector<Mention> out;
  for (const Keyword& k : lexicon.keywords()) {
    for (Mention m : find_keyword_mentions(text, k)) {
      m.sentence_index = sentence_index_at(sentences, m.start);
      out.push_back(std::move(m));
    }
  }
  std::sort(out.begin(), out.end(), [](const Mention& a, const Mention& b) {
    return std::tie(a.start, a.keyword) < std::tie(b.start, b.keyword);
  });
  return out;
}

Assertion classify_assertion(const Mention& mention, std::string_view sentence,
                             std::size_t sentence_start, const Lexicon& lexicon) {
  const auto tokens = text::tokenize(sentence);
  const std::size_t rel = mention.start >= sentence_start ? mention.start - sentence_start : 0;
  std::size_t target = 0;
  while (target < tokens.size() && tokens[target].start < rel) ++target;
  if (target >= tokens.size()) return Assertion::kAffirmed;

  auto breaker_between = [&](std::size_t from, std::size_t to) {
    for (std::size_t j = from; j < to; ++j) {
      for (const auto& b : lexicon.scope_breakers()) {
        if (j + b.size() <= to && text::match_at(tokens, j, b)) return true;
      }
    }
    return false;
  };

  std::size_t i = 0;
  while (i < target) {
    std::size_t len = 0;
    for (const auto& trig : lexicon.negation_triggers()) {
      if (i + trig.size() <= target && text::match_at(tokens, i, trig)) {
        len = trig.size();
        break;
      }
    }
    if (len == 0) {
      ++i;
      continue;
    }
    // Word-token distance from the trigger to the mention's first token.
    std::size_t distance = 0;
    for (std::size_t j = i + len; j <= target; ++j) {
      if (tokens[j].is_word) ++distance;
    }
    if (distance <= lexicon.scope_window() && !breaker_between(i + len, target)) {
      return Assertion::kNegated;
    }
    i += len;
  }
  return Assertion::kAffirmed;
}

NlpAnnotation irrelevant_annotation(std::string report_id, const Lexicon& lexicon) {
  NlpAnnotation a;
  a.report_id = std::move(report_id);
  for (const Keyword& k : lexicon.keywords()) a.status[k.surface] = KeywordStatus::kIrrelevant;
  return a;
}

NlpAnnotation annotate_report(const Report& report, const Lexicon& lexicon) {
  NlpAnnotation a = irrelevant_annotation(report.report_id, lexicon);
  const auto sentences = split_sentences(report.text);
  std::set<std::string> affirmed;
  std::set<std::string> mentioned;
  for (const Keyword& k : lexicon.keywords()) {
    for (Mention m : find_keyword_mentions(report.text, k)) {
      m.sentence_index = sentence_index_at(sentences, m.start);
      const Sentence& s = sentences[m.sentence_index];
      mentioned.insert(k.surface);
      if (classify_assertion(m, s.text, s.start, lexicon) == Assertion::kAffirmed) {
        affirmed.insert(k.surface);
      }
      a.mentions.push_back(std::move(m));
    }
  }
  for (const auto& k : mentioned) {
    a.status[k] = affirmed.contains(k) ? KeywordStatus::kPositive : KeywordStatus::kNegative;
  }
  std::sort(a.mentions.begin(), a.mentions.end(), [](const Mention& x, const Mention& y) {
    return std::tie(x.start, x.keyword) < std::tie(y.start, y.keyword);
  });
  return a;
}

std::vector<NlpAnnotation> ingest_external_annotations(
    const std::filesystem::path& path, const Corpus& corpus, const Lexicon& lexicon) {
  using detail::json;
  std::map<std::string, NlpAnnotation> by_report;
  std::set<std::pair<std::string, std::string>> seen;
  const std::string source = path.string();

  detail::for_each_line(path, [&](std::size_t number, std::string_view line) {
    const std::string where = source + ":" + std::to_string(number);
    json j = detail::parse_object(line, where);
    const std::string& report_id = detail::require_string(j, "report_id", where);
    const std::string& keyword = detail::require_string(j, "keyword", where);
    const Report* report = corpus.find(report_id);
    if (!report) throw DataError(where + ": unknown report_id '" + report_id + "'");
    if (!lexicon.find_keyword(keyword)) {
      throw DataError(where + ": unknown keyword '" + keyword + "'");
    }
    if (!seen.emplace(report_id, keyword).second) {
      throw DataError(where + ": duplicate annotation for (" + report_id + ", " + keyword + ")");
    }
    KeywordStatus status;
    try {
      status = parse_keyword_status(detail::require_string(j, "status", where));
    } catch (const DataError& e) {
      throw DataError(where + ": " + e.what());
    }

    auto [it, inserted] = by_report.try_emplace(report_id);
    if (inserted) it->second = irrelevant_annotation(report_id, lexicon);
    NlpAnnotation& a = it->second;
    a.status[keyword] = status;

    if (auto spans = j.find("spans"); spans != j.end() && !spans->is_null()) {
      if (!spans->is_array()) throw DataError(where + ": 'spans' must be an array");
      if (status == KeywordStatus::kIrrelevant && !spans->empty()) {
        throw DataError(where + ": irrelevant keyword cannot carry spans");
      }
      const auto sentences = split_sentences(report->text);
      for (const auto& s : *spans) {
        std::size_t start = 0, end = 0;
        try {
          start = s.at("start").get<std::size_t>();
          end = s.at("end").get<std::size_t>();
        } catch (const json::exception&) {
          throw DataError(where + ": malformed span");
        }
        if (start >= end || end > report->text.size()) {
          throw DataError(where + ": span out of range");
        }
        a.mentions.push_back({keyword, sentence_index_at(sentences, start), start, end});
      }
    }
  });

  std::vector<NlpAnnotation> out;
  for (auto& [id, a] : by_report) {
    std::sort(a.mentions.begin(), a.mentions.end(), [](const Mention& x, const Mention& y) {
      return std::tie(x.start, x.keyword) < std::tie(y.start, y.keyword);
    });
    out.push_back(std::move(a));
  }
  return out;
}

}  // namespace radlabel
