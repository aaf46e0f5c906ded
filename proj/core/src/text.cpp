#include "radlabel/text.hpp"

#include <algorithm>

namespace radlabel::text {

bool is_word_byte(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
         (c >= '0' && c <= '9') || c >= 0x80;
}

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

std::string to_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

namespace {

// U+2018 / U+2019 single quotes in UTF-8.
bool is_curly_apostrophe(std::string_view text, std::size_t i) {
  return i + 2 < text.size() && static_cast<unsigned char>(text[i]) == 0xE2 &&
         static_cast<unsigned char>(text[i + 1]) == 0x80 &&
         (static_cast<unsigned char>(text[i + 2]) == 0x98 ||
          static_cast<unsigned char>(text[i + 2]) == 0x99);
}

}  // namespace

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    const auto c = static_cast<unsigned char>(text[i]);
    if (is_space(static_cast<char>(c))) {
      ++i;
      continue;
    }
    if (is_curly_apostrophe(text, i)) {
      tokens.push_back({i, i + 3, "'", false});
      i += 3;
      continue;
    }
    if (is_word_byte(c)) {
      std::size_t j = i;
      while (j < n && is_word_byte(static_cast<unsigned char>(text[j])) &&
             !is_curly_apostrophe(text, j)) {
        ++j;
      }
      tokens.push_back({i, j, to_lower(text.substr(i, j - i)), true});
      i = j;
      continue;
    }
    tokens.push_back({i, i + 1, std::string(1, static_cast<char>(c)), false});
    ++i;
  }
  return tokens;
}

std::vector<std::string> phrase_tokens(std::string_view phrase) {
  std::vector<std::string> out;
  for (auto& t : tokenize(phrase)) out.push_back(std::move(t.norm));
  return out;
}

bool match_at(const std::vector<Token>& tokens, std::size_t pos,
              const std::vector<std::string>& phrase,
              const std::vector<std::string_view>& last_token_suffixes) {
  if (phrase.empty() || pos + phrase.size() > tokens.size()) return false;
  for (std::size_t k = 0; k < phrase.size(); ++k) {
    const std::string& have = tokens[pos + k].norm;
    const std::string& want = phrase[k];
    if (have == want) continue;
    if (k + 1 != phrase.size()) return false;
    bool ok = false;
    for (std::string_view suffix : last_token_suffixes) {
      if (have.size() == want.size() + suffix.size() &&
          have.compare(0, want.size(), want) == 0 &&
          have.compare(want.size(), std::string::npos, suffix) == 0) {
        ok = true;
        break;
      }
    }
    if (!ok) return false;
  }
  return true;
}

bool contains_phrase(const std::vector<Token>& tokens,
                     const std::vector<std::string>& phrase) {
  if (phrase.empty()) return false;
  for (std::size_t i = 0; i + phrase.size() <= tokens.size(); ++i) {
    if (match_at(tokens, i, phrase)) return true;
  }
  return false;
}

}  // namespace radlabel::text
