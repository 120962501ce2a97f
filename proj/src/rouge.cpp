#include "rasum/rouge.hpp"

#include "rasum/text.hpp"

#include <algorithm>
#include <map>
#include <string>
#include <vector>

namespace rasum::rouge {

namespace {

// ---------------------------------------------------------------------------
// Porter stemmer, following the 1980 algorithm definition.
// ---------------------------------------------------------------------------

bool is_consonant(const std::string& w, size_t i) {
  switch (w[i]) {
    case 'a':
    case 'e':
    case 'i':
    case 'o':
    case 'u':
      return false;
    case 'y':
      return i == 0 ? true : !is_consonant(w, i - 1);
    default:
      return true;
  }
}

// Number of VC sequences in w[0..end).
int measure(const std::string& w, size_t end) {
  int m = 0;
  size_t i = 0;
  while (i < end && is_consonant(w, i)) ++i;  // skip leading consonants
  while (i < end) {
    while (i < end && !is_consonant(w, i)) ++i;  // vowel run
    if (i >= end) break;
    ++m;
    while (i < end && is_consonant(w, i)) ++i;  // consonant run
  }
  return m;
}

bool contains_vowel(const std::string& w, size_t end) {
  for (size_t i = 0; i < end; ++i) {
    if (!is_consonant(w, i)) return true;
  }
  return false;
}

bool double_consonant(const std::string& w) {
  const size_t n = w.size();
  return n >= 2 && w[n - 1] == w[n - 2] && is_consonant(w, n - 1);
}

// consonant-vowel-consonant ending where the final consonant is not w, x or y.
bool cvc_ending(const std::string& w) {
  const size_t n = w.size();
  if (n < 3) return false;
  if (!is_consonant(w, n - 3) || is_consonant(w, n - 2) || !is_consonant(w, n - 1)) return false;
  const char c = w[n - 1];
  return c != 'w' && c != 'x' && c != 'y';
}

bool ends_with(const std::string& w, const std::string& suffix) {
  return w.size() >= suffix.size() &&
         w.compare(w.size() - suffix.size(), suffix.size(), suffix) == 0;
}

// Replace `suffix` by `repl` when the remaining stem has measure > min_m.
bool replace_if(std::string& w, const std::string& suffix, const std::string& repl, int min_m) {
  if (!ends_with(w, suffix)) return false;
  const size_t stem_len = w.size() - suffix.size();
  if (measure(w, stem_len) <= min_m) return true;  // matched but condition failed
  w.replace(stem_len, suffix.size(), repl);
  return true;
}

void step_1a(std::string& w) {
  if (ends_with(w, "sses")) {
    w.erase(w.size() - 2);
  } else if (ends_with(w, "ies")) {
    w.erase(w.size() - 2);
  } else if (ends_with(w, "ss")) {
    // keep
  } else if (ends_with(w, "s") && w.size() > 1) {
    w.pop_back();
  }
}

void step_1b(std::string& w) {
  if (ends_with(w, "eed")) {
    if (measure(w, w.size() - 3) > 0) w.pop_back();
    return;
  }
  bool stripped = false;
  if (ends_with(w, "ed") && contains_vowel(w, w.size() - 2)) {
    w.erase(w.size() - 2);
    stripped = true;
  } else if (ends_with(w, "ing") && contains_vowel(w, w.size() - 3)) {
    w.erase(w.size() - 3);
    stripped = true;
  }
  if (!stripped) return;
  if (ends_with(w, "at") || ends_with(w, "bl") || ends_with(w, "iz")) {
    w.push_back('e');
  } else if (double_consonant(w) && !ends_with(w, "l") && !ends_with(w, "s") &&
             !ends_with(w, "z")) {
    w.pop_back();
  } else if (measure(w, w.size()) == 1 && cvc_ending(w)) {
    w.push_back('e');
  }
}

void step_1c(std::string& w) {
  if (ends_with(w, "y") && contains_vowel(w, w.size() - 1)) w.back() = 'i';
}

void step_2(std::string& w) {
  static const std::vector<std::pair<std::string, std::string>> rules = {
      {"ational", "ate"}, {"tional", "tion"}, {"enci", "ence"}, {"anci", "ance"},
      {"izer", "ize"},    {"abli", "able"},   {"alli", "al"},   {"entli", "ent"},
      {"eli", "e"},       {"ousli", "ous"},   {"ization", "ize"}, {"ation", "ate"},
      {"ator", "ate"},    {"alism", "al"},    {"iveness", "ive"}, {"fulness", "ful"},
      {"ousness", "ous"}, {"aliti", "al"},    {"iviti", "ive"},  {"biliti", "ble"}};
  for (const auto& [suffix, repl] : rules) {
    if (ends_with(w, suffix)) {
      replace_if(w, suffix, repl, 0);
      return;
    }
  }
}

void step_3(std::string& w) {
  static const std::vector<std::pair<std::string, std::string>> rules = {
      {"icate", "ic"}, {"ative", ""}, {"alize", "al"}, {"iciti", "ic"},
      {"ical", "ic"},  {"ful", ""},   {"ness", ""}};
  for (const auto& [suffix, repl] : rules) {
    if (ends_with(w, suffix)) {
      replace_if(w, suffix, repl, 0);
      return;
    }
  }
}

void step_4(std::string& w) {
  static const std::vector<std::string> suffixes = {
      "al", "ance", "ence", "er", "ic", "able", "ible", "ant", "ement", "ment",
      "ent", "ion", "ou", "ism", "ate", "iti", "ous", "ive", "ize"};
  for (const auto& suffix : suffixes) {
    if (!ends_with(w, suffix)) continue;
    const size_t stem_len = w.size() - suffix.size();
    if (suffix == "ion" && stem_len > 0 && w[stem_len - 1] != 's' && w[stem_len - 1] != 't') {
      return;
    }
    if (measure(w, stem_len) > 1) w.erase(stem_len);
    return;
  }
}

void step_5a(std::string& w) {
  if (!ends_with(w, "e")) return;
  const int m = measure(w, w.size() - 1);
  if (m > 1) {
    w.pop_back();
  } else if (m == 1) {
    std::string stem = w.substr(0, w.size() - 1);
    if (!cvc_ending(stem)) w.pop_back();
  }
}

void step_5b(std::string& w) {
  if (measure(w, w.size()) > 1 && double_consonant(w) && ends_with(w, "l")) w.pop_back();
}

// ---------------------------------------------------------------------------
// Counting units: joined n-grams / skip-bigrams keyed as strings.
// ---------------------------------------------------------------------------

using Counts = std::map<std::string, int>;

std::vector<std::string> prepare(const std::vector<std::string>& tokens, bool stem) {
  if (!stem) return tokens;
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) out.push_back(porter_stem(t));
  return out;
}

Counts ngram_counts(const std::vector<std::string>& tokens, int n) {
  Counts out;
  if (static_cast<int>(tokens.size()) < n) return out;
  for (size_t i = 0; i + n <= tokens.size(); ++i) {
    std::string key = tokens[i];
    for (int k = 1; k < n; ++k) key += " " + tokens[i + k];
    ++out[key];
  }
  return out;
}

// Skip-bigrams with at most max_gap intervening words, plus all unigrams.
// Unit kinds are kept distinct by key prefix.
Counts su_counts(const std::vector<std::string>& tokens, int max_gap) {
  Counts out;
  for (size_t i = 0; i < tokens.size(); ++i) {
    ++out["u " + tokens[i]];
    for (size_t j = i + 1; j < tokens.size() && j - i - 1 <= static_cast<size_t>(max_gap); ++j) {
      ++out["s " + tokens[i] + " " + tokens[j]];
    }
  }
  return out;
}

long total(const Counts& c) {
  long t = 0;
  for (const auto& [key, n] : c) t += n;
  return t;
}

long clipped_overlap(const Counts& cand, const Counts& ref) {
  long overlap = 0;
  for (const auto& [key, n] : cand) {
    auto it = ref.find(key);
    if (it != ref.end()) overlap += std::min(n, it->second);
  }
  return overlap;
}

template <typename UnitFn>
RougeScore score_units(Metric metric, const std::vector<std::string>& candidate,
                       const std::vector<std::vector<std::string>>& references, bool stem,
                       UnitFn units) {
  const Counts cand = units(prepare(candidate, stem));
  long overlap_sum = 0, cand_sum = 0, ref_sum = 0;
  for (const auto& ref_tokens : references) {
    const Counts ref = units(prepare(ref_tokens, stem));
    overlap_sum += clipped_overlap(cand, ref);
    cand_sum += total(cand);
    ref_sum += total(ref);
  }
  RougeScore s;
  s.metric = metric;
  s.precision = cand_sum > 0 ? static_cast<double>(overlap_sum) / cand_sum : 0.0;
  s.recall = ref_sum > 0 ? static_cast<double>(overlap_sum) / ref_sum : 0.0;
  s.f = (s.precision + s.recall) > 0.0
            ? 2.0 * s.precision * s.recall / (s.precision + s.recall)
            : 0.0;
  return s;
}

}  // namespace

std::string porter_stem(const std::string& word) {
  std::string w = text::to_lower(word);
  if (w.size() <= 2) return w;
  for (char c : w) {
    if (c < 'a' || c > 'z') return w;  // stem plain alphabetic words only
  }
  step_1a(w);
  step_1b(w);
  step_1c(w);
  step_2(w);
  step_3(w);
  step_4(w);
  step_5a(w);
  step_5b(w);
  return w;
}

RougeScore rouge_n(const std::vector<std::string>& candidate,
                   const std::vector<std::vector<std::string>>& references, int n, bool stem) {
  if (n != 1 && n != 2) throw InvalidInputError("rouge_n supports n = 1 or 2");
  return score_units(n == 1 ? Metric::R1 : Metric::R2, candidate, references, stem,
                     [n](const std::vector<std::string>& toks) { return ngram_counts(toks, n); });
}

RougeScore rouge_su4(const std::vector<std::string>& candidate,
                     const std::vector<std::vector<std::string>>& references, bool stem) {
  return score_units(Metric::SU4, candidate, references, stem,
                     [](const std::vector<std::string>& toks) { return su_counts(toks, 4); });
}

std::vector<RougeScore> evaluate_topic(const std::string& summary_text,
                                       const corpus::Topic& topic,
                                       const EvaluateOptions& options) {
  if (topic.model_summaries.empty()) {
    throw InvalidInputError("topic " + topic.id + " has no model summaries");
  }
  std::vector<std::string> candidate = text::tokenize(summary_text);
  if (static_cast<int>(candidate.size()) > topic.summary_word_limit) {
    candidate.resize(topic.summary_word_limit);
  }
  return {
      rouge_n(candidate, topic.model_summaries, 1, options.stem),
      rouge_n(candidate, topic.model_summaries, 2, options.stem),
      rouge_su4(candidate, topic.model_summaries, options.stem),
  };
}

std::string metric_name(Metric m) {
  switch (m) {
    case Metric::R1: return "ROUGE-1";
    case Metric::R2: return "ROUGE-2";
    case Metric::SU4: return "ROUGE-SU4";
  }
  return "ROUGE-1";
}

}  // namespace rasum::rouge
