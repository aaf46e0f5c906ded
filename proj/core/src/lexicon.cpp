#include "radlabel/lexicon.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <variant>

#include "radlabel/embedded_data.hpp"
#include "radlabel/error.hpp"
#include "radlabel/text.hpp"

namespace radlabel {

namespace {

// ---------------------------------------------------------------------------
// Minimal reader for the configuration subset used by lexicon files: table
// headers with dotted (optionally quoted) names, `key = value` pairs where the
// value is a string, an array of strings (may span lines, trailing comma ok)
// or a non-negative integer, and '#' comments.

using Value = std::variant<std::string, std::vector<std::string>, long>;

struct Entry {
  std::vector<std::string> table;
  std::string key;
  Value value;
  std::size_t line = 0;
};

class ConfigReader {
 public:
  ConfigReader(std::string_view text, std::string source)
      : text_(text), source_(std::move(source)) {}

  std::vector<Entry> read() {
    std::vector<Entry> entries;
    std::vector<std::string> table;
    while (true) {
      skip_blank_and_comments();
      if (at_end()) break;
      if (peek() == '[') {
        ++pos_;
        table = dotted_name(']');
        expect(']');
        expect_line_end();
        continue;
      }
      Entry e;
      e.line = line_;
      e.table = table;
      e.key = key();
      skip_inline_space();
      expect('=');
      skip_inline_space();
      e.value = value();
      expect_line_end();
      entries.push_back(std::move(e));
    }
    return entries;
  }

 private:
  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }

  [[noreturn]] void fail(const std::string& what) const {
    throw DataError(source_ + ":" + std::to_string(line_) + ": " + what);
  }

  void advance() {
    if (text_[pos_] == '\n') ++line_;
    ++pos_;
  }

  void skip_inline_space() {
    while (!at_end() && (peek() == ' ' || peek() == '\t' || peek() == '\r')) ++pos_;
  }

  void skip_comment() {
    if (!at_end() && peek() == '#') {
      while (!at_end() && peek() != '\n') ++pos_;
    }
  }

  void skip_blank_and_comments() {
    while (!at_end()) {
      skip_inline_space();
      skip_comment();
      if (!at_end() && peek() == '\n') {
        advance();
        continue;
      }
      break;
    }
  }

  void expect(char c) {
    if (at_end() || peek() != c) fail(std::string("expected '") + c + "'");
    advance();
  }

  void expect_line_end() {
    skip_inline_space();
    skip_comment();
    if (!at_end()) expect('\n');
  }

  std::string quoted() {
    expect('"');
    std::string out;
    while (true) {
      if (at_end() || peek() == '\n') fail("unterminated string");
      char c = peek();
      advance();
      if (c == '"') break;
      if (c == '\\') {
        if (at_end()) fail("unterminated escape");
        char e = peek();
        advance();
        switch (e) {
          case '"': out.push_back('"'); break;
          case '\\': out.push_back('\\'); break;
          case 'n': out.push_back('\n'); break;
          case 't': out.push_back('\t'); break;
          default: fail(std::string("unsupported escape \\") + e);
        }
        continue;
      }
      out.push_back(c);
    }
    return out;
  }

  std::string bare() {
    std::string out;
    while (!at_end()) {
      char c = peek();
      if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
          (c >= '0' && c <= '9') || c == '_' || c == '-') {
        out.push_back(c);
        ++pos_;
      } else {
        break;
      }
    }
    if (out.empty()) fail("expected a key");
    return out;
  }

  std::string key() {
    if (!at_end() && peek() == '"') return quoted();
    return bare();
  }

  std::vector<std::string> dotted_name(char terminator) {
    std::vector<std::string> parts;
    while (true) {
      skip_inline_space();
      parts.push_back(key());
      skip_inline_space();
      if (!at_end() && peek() == '.') {
        ++pos_;
        continue;
      }
      if (!at_end() && peek() == terminator) return parts;
      fail("malformed table name");
    }
  }

  Value value() {
    if (at_end()) fail("expected a value");
    if (peek() == '"') return quoted();
    if (peek() == '[') {
      advance();
      std::vector<std::string> items;
      while (true) {
        skip_blank_and_comments();
        if (at_end()) fail("unterminated array");
        if (peek() == ']') {
          advance();
          return items;
        }
        items.push_back(quoted());
        skip_blank_and_comments();
        if (!at_end() && peek() == ',') {
          advance();
          continue;
        }
        skip_blank_and_comments();
        if (!at_end() && peek() == ']') {
          advance();
          return items;
        }
        fail("expected ',' or ']' in array");
      }
    }
    if (peek() >= '0' && peek() <= '9') {
      long v = 0;
      while (!at_end() && peek() >= '0' && peek() <= '9') {
        v = v * 10 + (peek() - '0');
        ++pos_;
      }
      return v;
    }
    fail("unsupported value");
  }

  std::string_view text_;
  std::string source_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
};

std::string where(const std::string& source, const Entry& e) {
  return source + ":" + std::to_string(e.line);
}

const std::vector<std::string>& as_list(const Entry& e, const std::string& source) {
  if (auto* v = std::get_if<std::vector<std::string>>(&e.value)) return *v;
  throw DataError(where(source, e) + ": '" + e.key + "' must be an array of strings");
}

const std::string& as_string(const Entry& e, const std::string& source) {
  if (auto* v = std::get_if<std::string>(&e.value)) return *v;
  throw DataError(where(source, e) + ": '" + e.key + "' must be a string");
}

// Lower-cased with whitespace runs collapsed; punctuation is kept so
// "sub-acute" stays readable.
std::string normalize_phrase(std::string_view s) {
  std::string out;
  for (char c : text::to_lower(text::trim(s))) {
    if (text::is_space(c)) {
      if (!out.empty() && out.back() != ' ') out.push_back(' ');
    } else {
      out.push_back(c);
    }
  }
  return out;
}

bool has_word_char(std::string_view s) {
  return std::any_of(s.begin(), s.end(), [](char c) {
    return text::is_word_byte(static_cast<unsigned char>(c));
  });
}

}  // namespace

LexiconConfig parse_lexicon_config(std::string_view text, const std::string& source) {
  LexiconConfig cfg;
  std::map<std::string, LexiconConfig::Category> categories;

  for (const Entry& e : ConfigReader(text, source).read()) {
    const auto& t = e.table;
    if (t.size() == 1 && t[0] == "conditions") {
      cfg.conditions.emplace_back(e.key, as_list(e, source));
    } else if (t.size() == 1 && t[0] == "keyword_variants") {
      cfg.keyword_variants[e.key] = as_list(e, source);
    } else if (t.size() == 1 && t[0] == "exclusion_variants") {
      cfg.exclusion_variants[e.key] = as_list(e, source);
    } else if (t.size() == 3 && t[0] == "exclusions" &&
               (t[1] == "universal" || t[1] == "specific")) {
      auto& cat = categories[t[2]];
      cat.id = t[2];
      cat.universal = t[1] == "universal";
      if (e.key == "name") {
        cat.name = as_string(e, source);
      } else if (e.key == "words") {
        cat.words = as_list(e, source);
      } else if (e.key == "scope" && !cat.universal) {
        cat.scope = as_list(e, source);
      } else if (e.key == "scope_token" && !cat.universal) {
        cat.scope_token = as_string(e, source);
      } else {
        throw DataError(where(source, e) + ": unexpected key '" + e.key +
                        "' in exclusion category " + t[2]);
      }
    } else if (t.size() == 1 && t[0] == "negation") {
      if (e.key == "triggers") {
        cfg.negation_triggers = as_list(e, source);
      } else if (e.key == "scope_breakers") {
        cfg.scope_breakers = as_list(e, source);
      } else if (e.key == "window") {
        auto* v = std::get_if<long>(&e.value);
        if (!v) throw DataError(where(source, e) + ": 'window' must be an integer");
        cfg.scope_window = static_cast<std::size_t>(*v);
      } else {
        throw DataError(where(source, e) + ": unexpected key '" + e.key + "'");
      }
    } else if (t.size() == 1 && t[0] == "negation_triggers" &&
               (e.key == "triggers" || e.key == "words")) {
      cfg.negation_triggers = as_list(e, source);
    } else if (t.size() == 1 && t[0] == "history" && e.key == "markers") {
      cfg.history_markers = as_list(e, source);
    } else {
      std::string table;
      for (const auto& part : t) table += (table.empty() ? "" : ".") + part;
      throw DataError(where(source, e) + ": unexpected key '" + e.key +
                      "' in [" + table + "]");
    }
  }
  for (auto& [id, cat] : categories) cfg.exclusions.push_back(std::move(cat));
  return cfg;
}

Lexicon Lexicon::build(const LexiconConfig& config) {
  Lexicon lex;
  lex.config_ = config;

  // Keywords.
  std::map<std::string, std::string> keyword_condition;
  for (const auto& [condition, words] : config.conditions) {
    if (words.empty()) throw DataError("condition '" + condition + "' has no keywords");
    for (const auto& w : words) {
      std::string surface = normalize_phrase(w);
      if (surface.empty()) throw DataError("empty keyword under '" + condition + "'");
      auto [it, inserted] = keyword_condition.emplace(surface, condition);
      if (!inserted) {
        throw DataError("keyword '" + surface + "' maps to both '" + it->second +
                        "' and '" + condition + "'");
      }
    }
  }
  for (const auto& [surface, condition] : keyword_condition) {
    Keyword k{surface, condition, {text::phrase_tokens(surface)}};
    lex.keywords_.push_back(std::move(k));
  }
  for (const auto& [surface, variants] : config.keyword_variants) {
    const std::string norm = normalize_phrase(surface);
    auto k = std::find_if(lex.keywords_.begin(), lex.keywords_.end(),
                          [&](const Keyword& kw) { return kw.surface == norm; });
    if (k == lex.keywords_.end()) throw DataError("keyword_variants references unknown keyword '" + surface + "'");
    for (const auto& v : variants) {
      auto toks = text::phrase_tokens(v);
      if (toks.empty()) throw DataError("empty variant for keyword '" + surface + "'");
      k->forms.push_back(std::move(toks));
    }
  }

  // Exclusion categories.
  std::set<std::string> ids;
  for (const auto& c : config.exclusions) {
    if (!ids.insert(c.id).second) throw DataError("duplicate exclusion category '" + c.id + "'");
    if (c.words.empty()) throw DataError("exclusion category '" + c.id + "' has no words");
    ExclusionCategory cat;
    cat.id = c.id;
    cat.name = c.name.empty() ? c.id : c.name;
    cat.scope = c.universal ? ExclusionScope::kUniversal : ExclusionScope::kKeywordSpecific;
    std::set<std::string> words;
    for (const auto& w : c.words) {
      std::string norm = has_word_char(w) ? normalize_phrase(w) : std::string(text::trim(w));
      if (norm.empty()) throw DataError("empty excluded word in '" + c.id + "'");
      words.insert(norm);
    }
    cat.words.assign(words.begin(), words.end());
    if (!c.universal) {
      for (const auto& s : c.scope) {
        std::string surface = normalize_phrase(s);
        if (!lex.find_keyword(surface)) {
          throw DataError("exclusion category '" + c.id +
                          "' scopes unknown keyword '" + s + "'");
        }
        cat.keywords.insert(surface);
      }
      if (!c.scope_token.empty()) {
        const std::string token = text::to_lower(c.scope_token);
        for (const auto& k : lex.keywords_) {
          const auto& toks = k.forms.front();
          if (std::find(toks.begin(), toks.end(), token) != toks.end()) {
            cat.keywords.insert(k.surface);
          }
        }
      }
      if (cat.keywords.empty()) {
        throw DataError("exclusion category '" + c.id + "' applies to no keyword");
      }
    }
    lex.exclusions_.push_back(std::move(cat));
  }
  std::sort(lex.exclusions_.begin(), lex.exclusions_.end(),
            [](const auto& a, const auto& b) { return a.id < b.id; });

  std::map<std::string, std::vector<TokenSeq>> variants;
  for (const auto& [word, forms] : config.exclusion_variants) {
    for (const auto& f : forms) variants[normalize_phrase(word)].push_back(text::phrase_tokens(f));
  }

  for (const auto& k : lex.keywords_) {
    std::map<std::string, ExcludedWord> compiled;
    for (const auto& cat : lex.exclusions_) {
      if (cat.scope == ExclusionScope::kKeywordSpecific && !cat.keywords.contains(k.surface)) {
        continue;
      }
      for (const auto& w : cat.words) {
        if (w == k.surface) {
          throw DataError("keyword '" + k.surface + "' is an excluded word of category '" +
                          cat.id + "', which applies to it");
        }
        if (compiled.contains(w)) continue;
        ExcludedWord ew{w, cat.name, !has_word_char(w), {}};
        if (!ew.char_match) {
          ew.forms.push_back(text::phrase_tokens(w));
          if (auto it = variants.find(w); it != variants.end()) {
            ew.forms.insert(ew.forms.end(), it->second.begin(), it->second.end());
          }
        }
        compiled.emplace(w, std::move(ew));
      }
    }
    auto& list = lex.compiled_[k.surface];
    for (auto& [w, ew] : compiled) list.push_back(std::move(ew));
  }

  auto compile_phrases = [](const std::vector<std::string>& phrases) {
    std::vector<TokenSeq> out;
    for (const auto& p : phrases) {
      auto toks = text::phrase_tokens(p);
      if (toks.empty()) throw DataError("empty phrase in lexicon");
      out.push_back(std::move(toks));
    }
    // Longest phrase first so "no evidence of" wins over "no".
    std::stable_sort(out.begin(), out.end(),
                     [](const auto& a, const auto& b) { return a.size() > b.size(); });
    return out;
  };
  lex.triggers_ = compile_phrases(config.negation_triggers);
  lex.breakers_ = compile_phrases(config.scope_breakers);
  lex.history_markers_ = compile_phrases(config.history_markers);
  lex.scope_window_ = config.scope_window;
  return lex;
}

const Keyword* Lexicon::find_keyword(std::string_view surface) const {
  auto it = std::lower_bound(
      keywords_.begin(), keywords_.end(), surface,
      [](const Keyword& k, std::string_view s) { return k.surface < s; });
  if (it == keywords_.end() || it->surface != surface) return nullptr;
  return &*it;
}

const Keyword& Lexicon::keyword(std::string_view surface) const {
  if (const Keyword* k = find_keyword(surface)) return *k;
  throw NotFoundError("unknown keyword '" + std::string(surface) + "'");
}

std::vector<std::string> Lexicon::conditions() const {
  std::set<std::string> out;
  for (const auto& k : keywords_) out.insert(k.condition);
  return {out.begin(), out.end()};
}

std::set<std::string> Lexicon::applicable_exclusions(std::string_view keyword) const {
  std::set<std::string> out;
  for (const auto& w : excluded_words_for(keyword)) out.insert(w.phrase);
  return out;
}

std::set<std::string> Lexicon::universal_words() const {
  std::set<std::string> out;
  for (const auto& cat : exclusions_) {
    if (cat.scope == ExclusionScope::kUniversal) out.insert(cat.words.begin(), cat.words.end());
  }
  return out;
}

const std::vector<ExcludedWord>& Lexicon::excluded_words_for(std::string_view keyword) const {
  auto it = compiled_.find(keyword);
  if (it == compiled_.end()) {
    throw NotFoundError("unknown keyword '" + std::string(keyword) + "'");
  }
  return it->second;
}

Lexicon parse_lexicon(std::string_view text, const std::string& source) {
  return Lexicon::build(parse_lexicon_config(text, source));
}

Lexicon load_lexicon(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_lexicon(buf.str(), path.string());
}

const Lexicon& default_lexicon() {
  static const Lexicon lexicon = parse_lexicon(default_lexicon_text(), "default_lexicon.toml");
  return lexicon;
}

}  // namespace radlabel
