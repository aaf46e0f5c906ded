#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace radlabel::text {

// A token is either a maximal run of word characters (ASCII letters, digits,
// and any non-ASCII UTF-8 byte) or a single punctuation character.
// Whitespace never forms a token. `norm` is the lower-cased token text; the
// typographic apostrophe U+2019 is normalized to "'".
struct Token {
  std::size_t start = 0;
  std::size_t end = 0;
  std::string norm;
  bool is_word = false;
};

std::vector<Token> tokenize(std::string_view text);

// Lower-cased token texts of a phrase such as "ct angiogram" or "sub-acute".
std::vector<std::string> phrase_tokens(std::string_view phrase);

std::string to_lower(std::string_view s);
bool is_word_byte(unsigned char c);
bool is_space(char c);
std::string_view trim(std::string_view s);

// True when `tokens[pos..]` begins with `phrase`. The last phrase token may
// additionally accept one of `last_token_suffixes` appended to it (used for
// the plural rule on keywords).
bool match_at(const std::vector<Token>& tokens, std::size_t pos,
              const std::vector<std::string>& phrase,
              const std::vector<std::string_view>& last_token_suffixes = {});

// True if `phrase` occurs anywhere in `tokens` as a contiguous token sequence.
bool contains_phrase(const std::vector<Token>& tokens,
                     const std::vector<std::string>& phrase);

}  // namespace radlabel::text
