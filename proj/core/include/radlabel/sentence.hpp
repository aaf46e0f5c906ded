#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace radlabel {

// A slice [start, end) of a report. Sentences returned by split_sentences
// partition the text: concatenating their `text` reproduces the input.
struct Sentence {
  std::size_t index = 0;
  std::size_t start = 0;
  std::size_t end = 0;
  std::string text;
};

// Breaks after a period followed by whitespace, after a ':' that ends a line,
// and at end of text. A trailing whitespace-only fragment is folded into the
// previous sentence; whitespace-only input yields no sentences.
std::vector<Sentence> split_sentences(std::string_view text);

// Index of the sentence containing byte `offset`.
std::size_t sentence_index_at(const std::vector<Sentence>& sentences,
                              std::size_t offset);

// Byte offsets of section headers: lines that open with 1-4 words and a
// ':' ("Findings:", "CLINICAL INDICATION:CVA?") or that are entirely
// upper-case ("CT HEAD WITHOUT CONTRAST"). Offsets point at the first
// non-blank character of the line.
std::vector<std::size_t> section_header_offsets(std::string_view text);

}  // namespace radlabel
