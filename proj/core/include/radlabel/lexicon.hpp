#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace radlabel {

using TokenSeq = std::vector<std::string>;

struct Keyword {
  std::string surface;    // lower-case, possibly multi-word
  std::string condition;  // one of the lexicon's conditions
  // Token forms that count as a mention: the surface itself first, then any
  // configured variants.
  std::vector<TokenSeq> forms;
};

enum class ExclusionScope { kUniversal, kKeywordSpecific };

struct ExclusionCategory {
  std::string id;
  std::string name;
  std::vector<std::string> words;
  ExclusionScope scope = ExclusionScope::kUniversal;
  std::set<std::string> keywords;  // resolved scope, empty when universal
};

// One excluded word or phrase, compiled for matching. Phrases without any
// word character (the literal "?") match by character presence; everything
// else matches as a contiguous token sequence, including listed variants.
struct ExcludedWord {
  std::string phrase;
  std::string category;
  bool char_match = false;
  std::vector<TokenSeq> forms;
};

// Plain-data form of a lexicon file. Lexicon::build validates it.
struct LexiconConfig {
  struct Category {
    std::string id;
    std::string name;
    bool universal = true;
    std::vector<std::string> words;
    std::vector<std::string> scope;
    std::string scope_token;
  };

  std::vector<std::pair<std::string, std::vector<std::string>>> conditions;
  std::map<std::string, std::vector<std::string>> keyword_variants;
  std::vector<Category> exclusions;
  std::map<std::string, std::vector<std::string>> exclusion_variants;
  std::vector<std::string> negation_triggers;
  std::vector<std::string> scope_breakers;
  std::size_t scope_window = 8;
  std::vector<std::string> history_markers;
};

class Lexicon {
 public:
  // Throws DataError when a scope names an unknown keyword, a category has no
  // words, a keyword maps to two conditions, or a keyword is excluded by a
  // category that applies to it.
  static Lexicon build(const LexiconConfig& config);

  // Keywords sorted by surface.
  const std::vector<Keyword>& keywords() const { return keywords_; }
  const Keyword* find_keyword(std::string_view surface) const;
  const Keyword& keyword(std::string_view surface) const;  // throws NotFoundError
  std::vector<std::string> conditions() const;

  // Categories sorted by id, independent of declaration order.
  const std::vector<ExclusionCategory>& exclusions() const { return exclusions_; }

  // Union of every universal category and every specific category whose
  // scope contains `keyword`. Throws NotFoundError for unknown keywords.
  std::set<std::string> applicable_exclusions(std::string_view keyword) const;
  std::set<std::string> universal_words() const;

  // Compiled form of applicable_exclusions, sorted by phrase.
  const std::vector<ExcludedWord>& excluded_words_for(std::string_view keyword) const;

  const std::vector<TokenSeq>& negation_triggers() const { return triggers_; }
  const std::vector<TokenSeq>& scope_breakers() const { return breakers_; }
  std::size_t scope_window() const { return scope_window_; }
  const std::vector<TokenSeq>& history_markers() const { return history_markers_; }

  const LexiconConfig& config() const { return config_; }

 private:
  LexiconConfig config_;
  std::vector<Keyword> keywords_;
  std::vector<ExclusionCategory> exclusions_;
  std::map<std::string, std::vector<ExcludedWord>, std::less<>> compiled_;
  std::vector<TokenSeq> triggers_;
  std::vector<TokenSeq> breakers_;
  std::size_t scope_window_ = 8;
  std::vector<TokenSeq> history_markers_;
};

LexiconConfig parse_lexicon_config(std::string_view text, const std::string& source);
Lexicon parse_lexicon(std::string_view text, const std::string& source = "<lexicon>");
Lexicon load_lexicon(const std::filesystem::path& path);

// The shipped lexicon (33 keywords, 11 conditions, 15 exclusion categories).
const Lexicon& default_lexicon();

}  // namespace radlabel
