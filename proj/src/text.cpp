#include "rasum/text.hpp"

#include "rasum/embedded_data.hpp"

#include <array>
#include <cctype>
#include <sstream>

namespace rasum::text {

namespace {

bool is_word_char(unsigned char c) { return std::isalnum(c) != 0; }

// Abbreviations that end with '.' but do not end a sentence.
const std::array<std::string, 14> kAbbreviations = {
    "mr", "mrs", "ms", "dr", "prof", "sr", "jr", "st", "no", "vs", "etc", "inc", "ltd", "mt"};

bool ends_with_abbreviation(const std::string& s, size_t dot_pos) {
  size_t start = dot_pos;
  while (start > 0 && std::isalpha(static_cast<unsigned char>(s[start - 1]))) --start;
  std::string word = to_lower(s.substr(start, dot_pos - start));
  for (const auto& a : kAbbreviations) {
    if (word == a) return true;
  }
  // Single letters ("U.S.", initials) never end a sentence.
  return word.size() == 1;
}

}  // namespace

std::string to_lower(const std::string& s) {
  std::string out(s.size(), '\0');
  for (size_t i = 0; i < s.size(); ++i) {
    out[i] = static_cast<char>(std::tolower(static_cast<unsigned char>(s[i])));
  }
  return out;
}

std::vector<std::string> tokenize_preserve_case(const std::string& raw) {
  std::vector<std::string> tokens;
  const size_t n = raw.size();
  size_t i = 0;
  while (i < n) {
    if (!is_word_char(raw[i])) {
      ++i;
      continue;
    }
    size_t j = i;
    while (j < n) {
      if (is_word_char(raw[j])) {
        ++j;
      } else if ((raw[j] == '\'' || raw[j] == '-') && j + 1 < n && is_word_char(raw[j + 1])) {
        j += 2;
        while (j < n && is_word_char(raw[j])) ++j;
      } else {
        break;
      }
    }
    tokens.push_back(raw.substr(i, j - i));
    i = j;
  }
  return tokens;
}

std::vector<std::string> tokenize(const std::string& raw) {
  std::vector<std::string> tokens = tokenize_preserve_case(raw);
  for (auto& t : tokens) t = to_lower(t);
  return tokens;
}

std::string normalize_whitespace(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  bool in_space = true;  // trims leading space
  for (unsigned char c : s) {
    if (std::isspace(c)) {
      if (!in_space) out.push_back(' ');
      in_space = true;
    } else {
      out.push_back(static_cast<char>(c));
      in_space = false;
    }
  }
  while (!out.empty() && out.back() == ' ') out.pop_back();
  return out;
}

std::vector<std::string> split_sentences(const std::string& paragraph) {
  const std::string s = normalize_whitespace(paragraph);
  std::vector<std::string> sentences;
  size_t start = 0;
  for (size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    if (c != '.' && c != '?' && c != '!') continue;
    // Boundary: terminator (+ optional closing quote), whitespace, uppercase.
    size_t j = i + 1;
    if (j < s.size() && (s[j] == '"' || s[j] == '\'')) ++j;
    if (j >= s.size() || s[j] != ' ') continue;
    size_t k = j + 1;
    if (k >= s.size() || !std::isupper(static_cast<unsigned char>(s[k]))) continue;
    if (c == '.' && ends_with_abbreviation(s, i)) continue;
    sentences.push_back(s.substr(start, j - start));
    start = k;
    i = k - 1;
  }
  if (start < s.size()) sentences.push_back(s.substr(start));
  return sentences;
}

const std::set<std::string>& stopword_set() {
  static const std::set<std::string> words = [] {
    std::set<std::string> out;
    std::istringstream in(embedded::kStopwordsText);
    std::string line;
    while (std::getline(in, line)) {
      line = normalize_whitespace(line);
      if (!line.empty()) out.insert(line);
    }
    return out;
  }();
  return words;
}

bool is_stopword(const std::string& lowercased) {
  return stopword_set().count(lowercased) > 0;
}

}  // namespace rasum::text
