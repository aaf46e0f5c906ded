#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "radlabel/fpr.hpp"
#include "radlabel/sentence.hpp"
#include "radlabel/text.hpp"
#include "support/oracle.hpp"
#include "support/synthetic.hpp"

using namespace radlabel;

namespace {

Sentence whole(const std::string& text) { return Sentence{0, 0, text.size(), text}; }

SentenceVerdict verdict(const std::string& sentence, const std::string& keyword) {
  const Lexicon& lex = default_lexicon();
  return sentence_verdict(whole(sentence), lex.keyword(keyword), lex);
}

std::vector<LabelRecord> reduce(const std::string& text, const Lexicon& lex = default_lexicon()) {
  Report r{"r", "s", text, {}};
  return reduce_report(annotate_report(r, lex), r, lex);
}

FinalStatus final_of(const std::vector<LabelRecord>& labels, const std::string& keyword) {
  for (const auto& l : labels) {
    if (l.keyword == keyword) return l.final_status;
  }
  ADD_FAILURE() << "missing " << keyword;
  return FinalStatus::kUnmarked;
}

std::set<std::string> finals(const std::vector<LabelRecord>& labels) {
  std::set<std::string> out;
  for (const auto& l : labels) {
    if (l.final_status == FinalStatus::kPositive) out.insert(l.keyword);
  }
  return out;
}

}  // namespace

TEST(SplitSentences, Examples) {
  EXPECT_EQ(split_sentences("A b. C d.\nE f").size(), 3u);
  EXPECT_EQ(split_sentences("3.5 cm lesion.").size(), 1u);
  EXPECT_TRUE(split_sentences("").empty());
  EXPECT_TRUE(split_sentences("  \n ").empty());
  const auto s = split_sentences("FINDINGS:\nNo bleed.");
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s[0].text, "FINDINGS:\n");
}

TEST(SplitSentences, PartitionsText) {
  for (const Report& r : radlabel::testing::generate_reports(200, 3, default_lexicon())) {
    const auto sentences = split_sentences(r.text);
    std::string joined;
    std::size_t expect_start = 0;
    for (std::size_t i = 0; i < sentences.size(); ++i) {
      EXPECT_EQ(sentences[i].index, i);
      EXPECT_EQ(sentences[i].start, expect_start);
      EXPECT_EQ(sentences[i].end, sentences[i].start + sentences[i].text.size());
      expect_start = sentences[i].end;
      joined += sentences[i].text;
    }
    EXPECT_EQ(joined, r.text);
  }
}

TEST(SentenceVerdict, Examples) {
  EXPECT_EQ(verdict("Acute hemorrhage in the left frontal lobe.", "hemorrhage"),
            SentenceVerdict::kPositiveEvidence);
  EXPECT_EQ(verdict("No hemorrhage.", "hemorrhage"), SentenceVerdict::kExcluded);
  EXPECT_EQ(verdict("Ventricles are normal.", "hemorrhage"), SentenceVerdict::kAbsent);
  EXPECT_EQ(verdict("Streak artifact from aneurysm clip.", "aneurysm"), SentenceVerdict::kExcluded);
  EXPECT_EQ(verdict("Prior aneurysm clipping.", "aneurysm"), SentenceVerdict::kExcluded);
  EXPECT_EQ(verdict("Aneurysm coiling was performed.", "aneurysm"), SentenceVerdict::kExcluded);
  EXPECT_EQ(verdict("Metallic densities near the aneurysm.", "aneurysm"),
            SentenceVerdict::kPositiveEvidence);
  EXPECT_EQ(verdict("Hemorrhage?", "hemorrhage"), SentenceVerdict::kExcluded);
  EXPECT_EQ(verdict("Subacute infarct.", "infarct"), SentenceVerdict::kPositiveEvidence);
  EXPECT_EQ(verdict("Subacute ischemic change.", "acute ischemic event"), SentenceVerdict::kAbsent);
  EXPECT_EQ(verdict("Sub-acute acute ischemic event.", "acute ischemic event"),
            SentenceVerdict::kExcluded);
  EXPECT_EQ(verdict("Craniotomy for tumor.", "tumor"), SentenceVerdict::kExcluded);
  EXPECT_EQ(verdict("Craniotomy; meningioma.", "meningioma"), SentenceVerdict::kPositiveEvidence);
}

TEST(SentenceVerdict, EvaluationNamesTrigger) {
  const Lexicon& lex = default_lexicon();
  const auto ev = evaluate_sentence(whole("Family history of aneurysm."), lex.keyword("aneurysm"), lex);
  EXPECT_EQ(ev.verdict, SentenceVerdict::kExcluded);
  EXPECT_FALSE(ev.trigger.empty());
  EXPECT_FALSE(ev.category.empty());
  EXPECT_EQ(ev.mentions.size(), 1u);
}

TEST(ReduceReport, OrOverSentences) {
  const auto labels = reduce("No hemorrhage identified. Small hemorrhage in the left occipital lobe.");
  EXPECT_EQ(final_of(labels, "hemorrhage"), FinalStatus::kPositive);
  const auto& rec = *std::find_if(labels.begin(), labels.end(),
                                  [](const LabelRecord& l) { return l.keyword == "hemorrhage"; });
  ASSERT_EQ(rec.evidence.size(), 1u);
  EXPECT_EQ(rec.evidence[0].sentence_index, 1u);
  EXPECT_EQ(rec.nlp_status, KeywordStatus::kPositive);
}

TEST(ReduceReport, NeverPositiveWithoutNlpPositive) {
  const auto labels = reduce("No hemorrhage. Ventricles normal.");
  for (const auto& l : labels) {
    if (l.nlp_status != KeywordStatus::kPositive) EXPECT_EQ(l.final_status, FinalStatus::kUnmarked);
  }
  EXPECT_EQ(labels.size(), default_lexicon().keywords().size());
}

TEST(ReduceReport, HistoryBlockMasksUntilHeader) {
  const std::string text =
      "CLINICAL INDICATION:\nKnown stroke.\nRight-sided weakness.\nFINDINGS:\nHematoma in the pons.\n";
  const auto labels = reduce(text);
  EXPECT_EQ(final_of(labels, "hematoma"), FinalStatus::kPositive);
  EXPECT_EQ(final_of(labels, "stroke"), FinalStatus::kUnmarked);
}

TEST(ReduceReport, ExternalAnnotationDrivesNlpStatus) {
  const Lexicon& lex = default_lexicon();
  Report r{"r", "s", "Hemorrhage seen.", {}};
  NlpAnnotation a = irrelevant_annotation("r", lex);
  auto labels = reduce_report(a, r, lex);
  EXPECT_EQ(final_of(labels, "hemorrhage"), FinalStatus::kUnmarked);
  a.status["hemorrhage"] = KeywordStatus::kPositive;
  labels = reduce_report(a, r, lex);
  EXPECT_EQ(final_of(labels, "hemorrhage"), FinalStatus::kPositive);
}

TEST(ReduceReportProperty, SentenceOrderDoesNotMatter) {
  const Lexicon& lex = default_lexicon();
  radlabel::testing::ReportGenOptions opts;
  opts.structure = false;
  std::mt19937 rng(99);
  for (const Report& r : radlabel::testing::generate_reports(200, 21, lex, opts)) {
    auto sentences = split_sentences(r.text);
    std::vector<std::string> parts;
    for (const auto& s : sentences) {
      std::string t(text::trim(s.text));
      // A trailing fragment such as "Query mass?" has no terminator of its
      // own; close it so it cannot merge with whatever follows.
      if (t.back() != '.') t += '.';
      parts.push_back(t);
    }
    std::shuffle(parts.begin(), parts.end(), rng);
    std::string shuffled;
    for (const auto& p : parts) shuffled += p + "\n";
    EXPECT_EQ(finals(reduce(r.text)), finals(reduce(shuffled))) << r.text << "\n--\n" << shuffled;
  }
}

TEST(ReduceReportProperty, AddingExclusionsOnlyShrinksPositives) {
  const Lexicon& base = default_lexicon();
  LexiconConfig cfg = base.config();
  cfg.exclusions.push_back({"extra", "Extra", true, {"left", "mild", "small"}, {}, {}});
  const Lexicon more = Lexicon::build(cfg);
  std::size_t shrunk = 0;
  for (const Report& r : radlabel::testing::generate_reports(300, 31, base)) {
    const auto a = finals(reduce(r.text, base));
    const auto b = finals(reduce(r.text, more));
    EXPECT_TRUE(std::includes(a.begin(), a.end(), b.begin(), b.end())) << r.report_id;
    shrunk += a.size() - b.size();
  }
  EXPECT_GT(shrunk, 0u);
}

TEST(Oracle, AgreesWithLibrary) {
  const Lexicon& lex = default_lexicon();
  const radlabel::testing::FprOracle oracle(lex.config());
  for (const Report& r : radlabel::testing::generate_reports(300, 41, lex)) {
    const auto a = annotate_report(r, lex);
    std::set<std::string> nlp;
    for (const auto& [k, s] : a.status) {
      if (s == KeywordStatus::kPositive) nlp.insert(k);
    }
    EXPECT_EQ(finals(reduce_report(a, r, lex)), oracle.final_positive(r.text, nlp)) << r.text;
  }
}

TEST(Oracle, IsNotTrivial) {
  const Lexicon& lex = default_lexicon();
  const radlabel::testing::FprOracle oracle(lex.config());
  EXPECT_EQ(oracle.final_positive("Small hematoma.", {"hematoma"}), (std::set<std::string>{"hematoma"}));
  EXPECT_TRUE(oracle.final_positive("Old hematoma.", {"hematoma"}).empty());
  EXPECT_TRUE(oracle.final_positive("Small hematoma.", {}).empty());
  // An oracle built from a different lexicon must disagree somewhere.
  LexiconConfig cfg = lex.config();
  cfg.exclusions.push_back({"extra", "Extra", true, {"small"}, {}, {}});
  const radlabel::testing::FprOracle other(cfg);
  EXPECT_NE(other.final_positive("Small hematoma.", {"hematoma"}),
            oracle.final_positive("Small hematoma.", {"hematoma"}));
}

TEST(Explain, RowsCoverEverySentence) {
  const Lexicon& lex = default_lexicon();
  Report r{"r", "s", "History: aneurysm.\nFINDINGS:\nAneurysm clip artifact. Aneurysm seen.", {}};
  const auto rows = explain(r, lex.keyword("aneurysm"), lex);
  ASSERT_EQ(rows.size(), split_sentences(r.text).size());
  EXPECT_TRUE(rows[0].in_history_block);
  EXPECT_EQ(rows.back().evaluation.verdict, SentenceVerdict::kPositiveEvidence);
  EXPECT_EQ(rows[rows.size() - 2].evaluation.verdict, SentenceVerdict::kExcluded);
}
