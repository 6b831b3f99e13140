#include "memorais/textnorm.hpp"

#include <algorithm>
#include <array>
#include <utility>

namespace memorais {

namespace {

constexpr std::array<std::pair<std::string_view, int>, 20> kUnits{{
    {"one", 1},       {"two", 2},        {"three", 3},     {"four", 4},
    {"five", 5},      {"six", 6},        {"seven", 7},     {"eight", 8},
    {"nine", 9},      {"ten", 10},       {"eleven", 11},   {"twelve", 12},
    {"thirteen", 13}, {"fourteen", 14},  {"fifteen", 15},  {"sixteen", 16},
    {"seventeen", 17}, {"eighteen", 18}, {"nineteen", 19}, {"twenty", 20},
}};

constexpr std::array<std::pair<std::string_view, int>, 9> kTens{{
    {"twenty", 20}, {"thirty", 30},  {"forty", 40},  {"fifty", 50},
    {"sixty", 60},  {"seventy", 70}, {"eighty", 80}, {"ninety", 90},
    {"hundred", 100},
}};

template <std::size_t N>
std::optional<int> lookup(const std::array<std::pair<std::string_view, int>, N>& table,
                          std::string_view word) {
  for (const auto& [name, value] : table)
    if (name == word) return value;
  return std::nullopt;
}

bool is_word_byte(char c) {
  return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '-' || c == '\'';
}

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

char to_lower_ascii(char c) { return (c >= 'A' && c <= 'Z') ? char(c - 'A' + 'a') : c; }

}  // namespace

std::optional<int> cardinal_value(std::string_view word) {
  if (auto v = lookup(kUnits, word)) return v;
  if (auto v = lookup(kTens, word)) return v;

  // "twenty-one" .. "ninety-nine"
  auto dash = word.find('-');
  if (dash == std::string_view::npos) return std::nullopt;
  auto tens = lookup(kTens, word.substr(0, dash));
  auto unit = lookup(kUnits, word.substr(dash + 1));
  if (!tens || !unit || *tens == 100 || *unit > 9) return std::nullopt;
  return *tens + *unit;
}

std::string normalize_piece(std::string_view text) {
  // Case fold and collapse whitespace.
  std::string folded;
  folded.reserve(text.size());
  bool pending_space = false;
  for (char c : text) {
    if (is_space(c)) {
      pending_space = !folded.empty();
      continue;
    }
    if (pending_space) folded.push_back(' ');
    pending_space = false;
    folded.push_back(to_lower_ascii(c));
  }

  // Replace whole tokens that are number words.
  std::string out;
  out.reserve(folded.size());
  std::size_t i = 0;
  while (i < folded.size()) {
    if (!is_word_byte(folded[i])) {
      out.push_back(folded[i++]);
      continue;
    }
    std::size_t j = i;
    while (j < folded.size() && is_word_byte(folded[j])) ++j;
    std::string_view token(folded.data() + i, j - i);
    if (auto v = cardinal_value(token))
      out += std::to_string(*v);
    else
      out += token;
    i = j;
  }
  return out;
}

LabelText normalize(const std::vector<std::string>& pieces) {
  LabelText label;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    std::string piece = normalize_piece(pieces[i]);
    if (piece.empty()) continue;
    if (!label.text.empty()) label.text.push_back(' ');
    std::size_t start = label.text.size();
    label.text += piece;
    label.spans.push_back(TextSpan{start, label.text.size(), i});
  }
  return label;
}

LabelText normalize(const std::vector<OcrFragment>& ordered_fragments) {
  std::vector<std::string> pieces;
  pieces.reserve(ordered_fragments.size());
  for (const auto& f : ordered_fragments) pieces.push_back(f.text);
  return normalize(pieces);
}

std::optional<std::size_t> LabelText::fragment_at(std::size_t offset) const {
  auto it = std::upper_bound(
      spans.begin(), spans.end(), offset,
      [](std::size_t off, const TextSpan& s) { return off < s.start; });
  if (it == spans.begin()) return std::nullopt;
  --it;
  if (offset < it->end) return it->fragment;
  return std::nullopt;
}

}  // namespace memorais
