#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "radlabel/error.hpp"
#include "radlabel/lexicon.hpp"

using namespace radlabel;

namespace {

const char* kSmall = R"(
[conditions]
"Hemorrhage" = ["hemorrhage", "bleeding"]
"Stroke" = ["stroke", "acute ischemic event"]

[exclusions.universal.neg]
name = "Negators"
words = ["no", "without"]

[exclusions.specific.stroke]
name = "Stroke words"
words = ["mri"]
scope = ["stroke"]

[exclusions.specific.acute]
name = "Acute"
words = ["subacute"]
scope_token = "acute"
)";

}  // namespace

TEST(DefaultLexicon, Shape) {
  const Lexicon& lex = default_lexicon();
  EXPECT_EQ(lex.keywords().size(), 33u);
  EXPECT_EQ(lex.conditions().size(), 11u);
  EXPECT_EQ(lex.exclusions().size(), 15u);
  EXPECT_TRUE(std::is_sorted(lex.keywords().begin(), lex.keywords().end(),
                             [](const Keyword& a, const Keyword& b) { return a.surface < b.surface; }));
  std::size_t universal = 0;
  for (const auto& c : lex.exclusions()) universal += c.scope == ExclusionScope::kUniversal;
  EXPECT_EQ(universal, 7u);
}

TEST(DefaultLexicon, EveryKeywordHasOneCondition) {
  const Lexicon& lex = default_lexicon();
  EXPECT_EQ(lex.keyword("hematoma").condition, "Hemorrhage");
  EXPECT_EQ(lex.keyword("rupture").condition, "Hemorrhage");
  EXPECT_EQ(lex.keyword("acute ischemic event").condition, "Stroke");
  EXPECT_THROW(lex.keyword("pneumonia"), NotFoundError);
}

TEST(DefaultLexicon, AneurysmSpecificWords) {
  const Lexicon& lex = default_lexicon();
  const auto words = lex.applicable_exclusions("aneurysm");
  auto universal = lex.universal_words();
  std::set<std::string> extra;
  std::set_difference(words.begin(), words.end(), universal.begin(), universal.end(),
                      std::inserter(extra, extra.end()));
  EXPECT_EQ(extra, (std::set<std::string>{"clip", "metal", "artifact", "coil"}));
}

TEST(DefaultLexicon, TumorIncludesCraniotomy) {
  const auto words = default_lexicon().applicable_exclusions("tumor");
  for (const char* w : {"craniotomy", "postop", "resection", "cavity", "residual", "pseudotumor",
                        "debulked"}) {
    EXPECT_TRUE(words.count(w)) << w;
  }
  EXPECT_FALSE(words.count("clip"));
}

TEST(DefaultLexicon, EncephalomalaciaGetsUniversalOnly) {
  const Lexicon& lex = default_lexicon();
  EXPECT_EQ(lex.applicable_exclusions("encephalomalacia"), lex.universal_words());
}

TEST(DefaultLexicon, AcuteKeywordsGetSubacute) {
  const Lexicon& lex = default_lexicon();
  const auto words = lex.applicable_exclusions("acute ischemic event");
  EXPECT_TRUE(words.count("subacute"));
  EXPECT_TRUE(words.count("sub-acute"));
  EXPECT_FALSE(lex.applicable_exclusions("chronic ischemic event").count("subacute"));
}

TEST(DefaultLexicon, ApplicableIsSupersetOfUniversal) {
  const Lexicon& lex = default_lexicon();
  const auto universal = lex.universal_words();
  for (const auto& k : lex.keywords()) {
    const auto words = lex.applicable_exclusions(k.surface);
    EXPECT_TRUE(std::includes(words.begin(), words.end(), universal.begin(), universal.end()))
        << k.surface;
  }
  EXPECT_THROW(lex.applicable_exclusions("unknown"), NotFoundError);
}

TEST(DefaultLexicon, ExclusionVariantsCompiled) {
  const auto& words = default_lexicon().excluded_words_for("aneurysm");
  auto it = std::find_if(words.begin(), words.end(),
                         [](const ExcludedWord& w) { return w.phrase == "clip"; });
  ASSERT_NE(it, words.end());
  EXPECT_EQ(it->forms.size(), 3u);
  auto q = std::find_if(words.begin(), words.end(),
                        [](const ExcludedWord& w) { return w.phrase == "?"; });
  ASSERT_NE(q, words.end());
  EXPECT_TRUE(q->char_match);
}

TEST(DefaultLexicon, InfarctionIsAVariant) {
  const Keyword& k = default_lexicon().keyword("infarct");
  ASSERT_EQ(k.forms.size(), 2u);
  EXPECT_EQ(k.forms[1], (TokenSeq{"infarction"}));
}

TEST(ParseLexicon, SmallFile) {
  const Lexicon lex = parse_lexicon(kSmall);
  EXPECT_EQ(lex.keywords().size(), 4u);
  EXPECT_EQ(lex.applicable_exclusions("stroke"), (std::set<std::string>{"mri", "no", "without"}));
  EXPECT_EQ(lex.applicable_exclusions("acute ischemic event"),
            (std::set<std::string>{"no", "subacute", "without"}));
  EXPECT_EQ(lex.applicable_exclusions("bleeding"), (std::set<std::string>{"no", "without"}));
}

TEST(ParseLexicon, UnknownScopeKeyword) {
  std::string text = kSmall;
  text += "\n[exclusions.specific.bad]\nname = \"Bad\"\nwords = [\"x\"]\nscope = [\"tumour\"]\n";
  try {
    parse_lexicon(text);
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("tumour"), std::string::npos);
  }
}

TEST(ParseLexicon, EmptyCategory) {
  std::string text = kSmall;
  text += "\n[exclusions.universal.empty]\nname = \"Empty\"\nwords = []\n";
  EXPECT_THROW(parse_lexicon(text), DataError);
}

TEST(ParseLexicon, KeywordUnderTwoConditions) {
  EXPECT_THROW(parse_lexicon("[conditions]\n\"A\" = [\"x\"]\n\"B\" = [\"x\"]\n"), DataError);
}

TEST(ParseLexicon, KeywordExcludedByOwnCategory) {
  EXPECT_THROW(parse_lexicon("[conditions]\n\"A\" = [\"mass\"]\n"
                             "[exclusions.universal.u]\nname = \"U\"\nwords = [\"mass\"]\n"),
               DataError);
}

TEST(ParseLexicon, SyntaxErrorNamesLine) {
  try {
    parse_lexicon("[conditions]\n\"A\" = [\"x\"\n", "lex.toml");
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("lex.toml:"), std::string::npos) << e.what();
  }
}

TEST(ParseLexicon, NegationTriggersTableAlias) {
  std::string text = kSmall;
  text += "\n[negation_triggers]\ntriggers = [\"absent\"]\n";
  const Lexicon lex = parse_lexicon(text);
  EXPECT_EQ(lex.negation_triggers(), (std::vector<TokenSeq>{{"absent"}}));
}

TEST(ParseLexicon, CategoryOrderDoesNotMatter) {
  const LexiconConfig base = default_lexicon().config();
  std::mt19937 rng(5);
  for (int round = 0; round < 5; ++round) {
    LexiconConfig cfg = base;
    std::shuffle(cfg.exclusions.begin(), cfg.exclusions.end(), rng);
    const Lexicon lex = Lexicon::build(cfg);
    for (const auto& k : lex.keywords()) {
      EXPECT_EQ(lex.applicable_exclusions(k.surface),
                default_lexicon().applicable_exclusions(k.surface));
    }
  }
}

TEST(LoadLexicon, MissingFile) {
  EXPECT_THROW(load_lexicon("/nonexistent/lexicon.toml"), IoError);
}
