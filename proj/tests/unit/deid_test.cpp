#include <gtest/gtest.h>

#include <random>

#include "radlabel/deid.hpp"
#include "radlabel/error.hpp"
#include "radlabel/text.hpp"
#include "support/synthetic.hpp"
#include "test_util.hpp"

using namespace radlabel;
using namespace radlabel::deid;
using radlabel::testing::TempDir;

namespace {

Report make_report(std::string text, std::map<std::string, std::string> meta = {}) {
  return Report{"r1", "site1", std::move(text), std::move(meta)};
}

std::string scrub(const Report& r, const FirstPassOptions& opts = {}) {
  Corpus c;
  c.reports = {r};
  const PhiStore store = first_pass(c, {}, opts);
  return second_pass(r, store).text;
}

bool contains_token_ci(std::string_view text, std::string_view needle) {
  const std::string hay = text::to_lower(text);
  const std::string n = text::to_lower(needle);
  for (std::size_t pos = hay.find(n); pos != std::string::npos; pos = hay.find(n, pos + 1)) {
    const bool left = pos == 0 || !std::isalnum(static_cast<unsigned char>(hay[pos - 1]));
    const std::size_t e = pos + n.size();
    const bool right = e >= hay.size() || !std::isalnum(static_cast<unsigned char>(hay[e]));
    if (left && right) return true;
  }
  return false;
}

}  // namespace

TEST(Sidecar, DicomNameCanonical) {
  const auto e = parse_sidecar_value(PhiCategory::kPersonName, "SMITH^JANE^Q");
  ASSERT_TRUE(e);
  EXPECT_EQ(e->canonical, (Canonical{{"family", "SMITH"}, {"given", "JANE"}, {"middle", "Q"}}));
  EXPECT_EQ(e->source, PhiSource::kMetadataSidecar);
}

TEST(Sidecar, NameVariants) {
  const auto e = parse_sidecar_value(PhiCategory::kPersonName, "SMITH^JANE^Q");
  const auto v = variants(*e);
  for (const char* s : {"Jane Smith", "Smith, Jane", "J. Smith", "Jane Q. Smith", "SMITH^JANE^Q",
                        "Smith"}) {
    EXPECT_TRUE(std::any_of(v.begin(), v.end(),
                            [&](const std::string& x) { return text::to_lower(x) == text::to_lower(s); }))
        << s;
  }
}

TEST(Sidecar, DateAndUnparseable) {
  const auto d = parse_sidecar_value(PhiCategory::kDate, "20150302");
  ASSERT_TRUE(d);
  EXPECT_EQ(d->canonical, (Canonical{{"year", "2015"}, {"month", "3"}, {"day", "2"}}));
  EXPECT_FALSE(parse_sidecar_value(PhiCategory::kDate, "20151302"));
  EXPECT_FALSE(parse_sidecar_value(PhiCategory::kPhone, "12"));
  const auto age = parse_sidecar_value(PhiCategory::kAge, "045Y");
  ASSERT_TRUE(age);
  EXPECT_EQ(age->canonical.at("years"), "45");
}

TEST(Canonical, Validation) {
  EXPECT_THROW(validate_canonical(PhiCategory::kPersonName, {{"given", "X"}}), DataError);
  EXPECT_THROW(validate_canonical(PhiCategory::kDate, {{"year", "2015"}, {"month", "2"}, {"day", "30"}}),
               DataError);
  EXPECT_NO_THROW(validate_canonical(PhiCategory::kDate, {{"year", "2016"}, {"month", "2"}, {"day", "29"}}));
}

TEST(Categories, NamesAndFiducials) {
  for (PhiCategory c : kAllCategories) EXPECT_EQ(parse_category(to_string(c)), c);
  EXPECT_EQ(fiducial(PhiCategory::kDate), "{{DATETIME}}");
  EXPECT_EQ(fiducial(PhiCategory::kTime), "{{DATETIME}}");
  EXPECT_EQ(fiducial(PhiCategory::kMedicalRecordNumber), "{{MRN}}");
}

TEST(SecondPass, DateFromSidecarCatchesTextForms) {
  const Report r = make_report("Comparison: March 2, 2015", {{"StudyDate", "20150302"}});
  EXPECT_EQ(scrub(r), "Comparison: {{DATETIME}}");
}

TEST(SecondPass, TwentyDateLayouts) {
  const char* surfaces[] = {
      "March 2, 2015", "March 2 2015",  "March 2nd, 2015", "Mar 2, 2015", "Mar. 2, 2015",
      "Mar 2 2015",    "2 March 2015",  "2 Mar 2015",      "2nd March 2015", "02-Mar-2015",
      "2-Mar-2015",    "03/02/2015",    "3/2/2015",        "03-02-2015",  "3-2-2015",
      "03.02.2015",    "2015-03-02",    "2015/03/02",      "2015.03.02",  "20150302",
  };
  const auto e = parse_sidecar_value(PhiCategory::kDate, "20150302");
  PhiStore store;
  store.add(*e);
  const Replacer replacer(store);
  for (const char* s : surfaces) {
    EXPECT_EQ(replacer.apply(std::string("Prior exam ") + s + ". Stable."),
              "Prior exam {{DATETIME}}. Stable.")
        << s;
  }
}

TEST(SecondPass, TokenBoundaries) {
  PhiStore store;
  store.add(*parse_sidecar_value(PhiCategory::kPersonName, "SMITH^JANE"));
  const Replacer replacer(store);
  EXPECT_EQ(replacer.apply("Smithson noted. Smith's film. JANE  SMITH."),
            "Smithson noted. {{NAME}}'s film. {{NAME}}.");
}

TEST(SecondPass, DropsFlaggedFieldsAndMarks) {
  Report r = make_report("Seen by Dr. Jones.", {{"PatientName", "DOE^JOHN"},
                                                {"Modality", "CT"},
                                                {"StudyDescription", "CT HEAD for DOE"}});
  Corpus c;
  c.reports = {r};
  const Report out = second_pass(r, first_pass(c, {}));
  EXPECT_FALSE(out.metadata.count("PatientName"));
  EXPECT_EQ(out.metadata.at("Modality"), "CT");
  EXPECT_EQ(out.metadata.at("StudyDescription"), "CT HEAD for {{NAME}}");
  EXPECT_TRUE(is_deidentified(out));
  EXPECT_FALSE(is_deidentified(r));
  EXPECT_EQ(out.text, "Seen by {{NAME}}.");
}

TEST(SecondPass, NoOccurrencesLeavesTextUnchanged) {
  PhiStore store;
  store.add(*parse_sidecar_value(PhiCategory::kPersonName, "SMITH^JANE"));
  const std::string text = "No acute intracranial hemorrhage. Ventricles normal.";
  EXPECT_EQ(Replacer(store).apply(text), text);
}

TEST(Recognizers, TextPatterns) {
  const std::string text =
      "MRN: 00123456. Accession 7781234. Call (555) 123-4567 at 14:35. "
      "A 45 year old seen at Riverside General Hospital, 12 Oak Street.";
  const std::string out = scrub(make_report(text), {false, true});
  EXPECT_EQ(out,
            "MRN: {{MRN}}. Accession {{ACCESSION}}. Call {{PHONE}} at {{DATETIME}}. "
            "A {{AGE}} seen at {{INSTITUTION}}, {{ADDRESS}}.");
}

TEST(Recognizers, ClinicalWordsUntouched) {
  const std::string text = "According to protocol, accession of contrast was normal.";
  EXPECT_EQ(scrub(make_report(text), {false, true}), text);
}

TEST(SecondPass, SeededNamesLeaveNoResidue) {
  const std::vector<std::string> families = {"Okafor", "Lindqvist", "Moreau", "Tanaka", "Brennan",
                                             "Kowalski", "Haddad", "Novak", "Ferreira", "Nguyen"};
  const std::vector<std::string> givens = {"Amara", "Erik", "Claire", "Hiro", "Siobhan",
                                           "Piotr", "Layla", "Jana", "Tiago", "Minh"};
  std::mt19937 rng(2024);
  for (std::size_t i = 0; i < 10; ++i) {
    const std::string& f = families[rng() % families.size()];
    const std::string& g = givens[rng() % givens.size()];
    const char m = static_cast<char>('A' + rng() % 26);
    const std::string dicom = text::to_lower(f) + "^" + text::to_lower(g) + "^" + m;
    std::string upper_dicom;
    for (char ch : dicom) upper_dicom += static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
    const std::string text = "Patient " + g + " " + f + " (" + f + ", " + g + " " + m +
                             ".) was reviewed with Dr. " + f + ". " + g.substr(0, 1) + ". " + f +
                             " agreed. " + upper_dicom + " on file.";
    const std::string out = scrub(make_report(text, {{"PatientName", upper_dicom}}));
    EXPECT_FALSE(contains_token_ci(out, f)) << out;
    EXPECT_FALSE(contains_token_ci(out, g)) << out;
  }
}

TEST(SecondPass, Idempotent) {
  for (const auto& pr : radlabel::testing::generate_phi_reports(30, 5, default_lexicon())) {
    Corpus c;
    c.reports = {pr.report};
    const PhiStore store = first_pass(c, {});
    const Replacer replacer(store);
    const Report once = second_pass(pr.report, replacer);
    const Report twice = second_pass(once, replacer);
    EXPECT_EQ(once, twice);
  }
}

TEST(FirstPass, FusionRecallAtLeastTextOnly) {
  for (const auto& pr : radlabel::testing::generate_phi_reports(40, 17, default_lexicon())) {
    const std::string fused = scrub(pr.report);
    const std::string text_only = scrub(pr.report, {false, true});
    std::size_t fused_left = 0, text_left = 0;
    for (const auto& p : pr.planted) {
      if (!p.in_text) continue;
      fused_left += contains_token_ci(fused, p.surface);
      text_left += contains_token_ci(text_only, p.surface);
    }
    EXPECT_LE(fused_left, text_left) << pr.report.report_id;
  }
}

TEST(PhiStore, DedupAndSaveLoadAccumulates) {
  TempDir dir;
  PhiStore a;
  auto e1 = *parse_sidecar_value(PhiCategory::kPersonName, "SMITH^JANE");
  a.add(e1);
  auto e2 = e1;
  e2.source = PhiSource::kReportText;
  e2.surfaces = {"Jane Smith"};
  a.add(e2);
  ASSERT_EQ(a.size(), 1u);
  EXPECT_EQ(a.entities()[0].source, PhiSource::kMetadataSidecar);
  EXPECT_TRUE(a.entities()[0].surfaces.count("Jane Smith"));
  a.save(dir / "s1.jsonl");

  PhiStore b;
  b.add(*parse_sidecar_value(PhiCategory::kDate, "20150302"));
  b.save(dir / "s2.jsonl");

  PhiStore both;
  both.load(dir / "s1.jsonl");
  both.load(dir / "s2.jsonl");
  EXPECT_EQ(both.size(), 2u);
  both.load(dir / "s1.jsonl");
  EXPECT_EQ(both.size(), 2u);
}

TEST(PhiStore, LoadRejectsBadCanonical) {
  TempDir dir;
  radlabel::testing::write_file(dir / "s.jsonl",
                                R"({"category":"Date","canonical":{"year":"2015"},"surfaces":[],"source":"ReportText"})"
                                "\n");
  PhiStore s;
  EXPECT_THROW(s.load(dir / "s.jsonl"), DataError);
}

TEST(Patterns, ParseErrors) {
  EXPECT_THROW(Patterns::parse("{not json"), DataError);
  EXPECT_THROW(Patterns::parse(R"({"recognizers":[{"category":"Bogus","parser":"verbatim","pattern":"x"}]})"),
               DataError);
  EXPECT_GT(Patterns::defaults().recognizers.size(), 10u);
}
