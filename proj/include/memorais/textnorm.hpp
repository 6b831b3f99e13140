#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "memorais/ocr.hpp"

namespace memorais {

/// Half-open byte range of LabelText::text contributed by one fragment.
struct TextSpan {
  std::size_t start = 0;
  std::size_t end = 0;
  std::size_t fragment = 0;  ///< position in the list passed to normalize()

  friend bool operator==(const TextSpan&, const TextSpan&) = default;
};

struct LabelText {
  std::string text;
  std::vector<TextSpan> spans;

  /// Fragment that produced the byte at `offset`, if any (spaces between
  /// fragments belong to none).
  std::optional<std::size_t> fragment_at(std::size_t offset) const;
};

/// Value of a cardinal number word ("seven", "twenty-one", "hundred"), or
/// nullopt for anything outside the closed vocabulary. Input must already
/// be lowercase.
std::optional<int> cardinal_value(std::string_view word);

/// Lowercases, replaces cardinal number words by digits and collapses
/// whitespace in one piece of text.
std::string normalize_piece(std::string_view text);

/// Normalizes reading-ordered pieces of text and joins them with single
/// spaces. Pieces that normalize to nothing produce no span.
LabelText normalize(const std::vector<std::string>& pieces);

LabelText normalize(const std::vector<OcrFragment>& ordered_fragments);

}  // namespace memorais
