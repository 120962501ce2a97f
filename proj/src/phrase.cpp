#include "rasum/phrase.hpp"

#include "rasum/embedded_data.hpp"
#include "rasum/text.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <unordered_map>

namespace rasum::phrase {

namespace {

const std::set<std::string> kClauseLabels = {"ROOT", "S", "SINV", "SQ", "SBAR", "SBARQ", "FRAG"};

std::string normalize_label(const std::string& raw) {
  const size_t cut = raw.find_first_of("-=");
  return cut == std::string::npos ? raw : raw.substr(0, cut);
}

bool has_word_char(const std::string& s) {
  return std::any_of(s.begin(), s.end(),
                     [](unsigned char c) { return std::isalnum(c) != 0; });
}

struct TreeParser {
  const std::string& src;
  size_t pos = 0;

  explicit TreeParser(const std::string& s) : src(s) {}

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("parse tree, offset " + std::to_string(pos) + ": " + what);
  }

  void skip_space() {
    while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) ++pos;
  }

  std::string read_atom() {
    const size_t start = pos;
    while (pos < src.size() && !std::isspace(static_cast<unsigned char>(src[pos])) &&
           src[pos] != '(' && src[pos] != ')') {
      ++pos;
    }
    if (pos == start) fail("expected a label or token");
    return src.substr(start, pos - start);
  }

  ParseNode parse_node() {
    skip_space();
    if (pos >= src.size() || src[pos] != '(') fail("expected '('");
    ++pos;
    skip_space();
    ParseNode node;
    node.label = normalize_label(read_atom());
    skip_space();
    if (pos < src.size() && src[pos] != '(' && src[pos] != ')') {
      // Pre-terminal: (TAG token)
      ParseNode leaf;
      leaf.token = read_atom();
      leaf.label = node.label;
      node.children.clear();
      skip_space();
      if (pos >= src.size() || src[pos] != ')') fail("expected ')' after token");
      ++pos;
      return leaf;
    }
    while (true) {
      skip_space();
      if (pos >= src.size()) fail("unbalanced '('");
      if (src[pos] == ')') {
        ++pos;
        break;
      }
      node.children.push_back(parse_node());
    }
    if (node.children.empty()) fail("empty constituent");
    return node;
  }
};

void collect_leaves(const ParseNode& node, std::vector<std::string>& out) {
  if (node.is_leaf()) {
    out.push_back(node.token);
    return;
  }
  for (const auto& c : node.children) collect_leaves(c, out);
}

int count_leaves(const ParseNode& node) {
  if (node.is_leaf()) return 1;
  int n = 0;
  for (const auto& c : node.children) n += count_leaves(c);
  return n;
}

PhraseCandidate make_candidate(const corpus::Sentence& sentence, PhraseKind kind,
                               const std::vector<std::string>& leaves, int span_begin) {
  PhraseCandidate p;
  p.kind = kind;
  p.doc_id = sentence.doc_id;
  p.sentence_index = sentence.index;
  p.span_begin = span_begin;
  p.span_end = span_begin + static_cast<int>(leaves.size());
  for (const auto& leaf : leaves) {
    if (has_word_char(leaf)) p.tokens.push_back(text::to_lower(leaf));
  }
  p.word_count = static_cast<int>(p.tokens.size());
  return p;
}

void extract_from_tree(const ParseNode& node, const corpus::Sentence& sentence, int leaf_offset,
                       std::vector<PhraseCandidate>& out) {
  if (node.is_leaf()) return;
  const bool clause = kClauseLabels.count(node.label) > 0;
  int offset = leaf_offset;
  for (const auto& child : node.children) {
    const int child_leaves = count_leaves(child);
    if (clause && (child.label == "NP" || child.label == "VP")) {
      std::vector<std::string> leaves;
      collect_leaves(child, leaves);
      PhraseCandidate p = make_candidate(
          sentence, child.label == "NP" ? PhraseKind::NounPhrase : PhraseKind::VerbPhrase,
          leaves, offset);
      if (p.word_count > 0) out.push_back(std::move(p));
      // Clauses nested inside this constituent may still contribute.
      extract_from_tree(child, sentence, offset, out);
    } else {
      extract_from_tree(child, sentence, offset, out);
    }
    offset += child_leaves;
  }
}

const std::unordered_map<std::string, std::string>& pos_lexicon() {
  static const std::unordered_map<std::string, std::string> table = [] {
    std::unordered_map<std::string, std::string> out;
    std::istringstream in(embedded::kPosLexiconText);
    std::string line;
    while (std::getline(in, line)) {
      line = text::normalize_whitespace(line);
      if (line.empty() || line[0] == '#') continue;
      std::istringstream row(line);
      std::string word, tag;
      row >> word >> tag;
      if (!word.empty() && !tag.empty()) out.emplace(word, tag);
    }
    return out;
  }();
  return table;
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::vector<PhraseCandidate> chunk_fallback(const corpus::Sentence& sentence) {
  const auto& tokens = sentence.tokens;
  const int n = static_cast<int>(tokens.size());
  std::vector<std::string> tags(n);
  for (int i = 0; i < n; ++i) tags[i] = chunker_tag(tokens[i]);

  std::vector<bool> in_vp(n, false);
  std::vector<PhraseCandidate> out;

  // Verb + following complement run.
  static const std::set<std::string> kVpTags = {"VB", "MD", "RB", "TO", "IN", "DT",
                                                "JJ", "CD", "NN", "PRP", "PRP$"};
  int i = 0;
  while (i < n) {
    if (tags[i] != "VB" && tags[i] != "MD") {
      ++i;
      continue;
    }
    int j = i;
    while (j < n && kVpTags.count(tags[j]) > 0) ++j;
    std::vector<std::string> leaves(tokens.begin() + i, tokens.begin() + j);
    out.push_back(make_candidate(sentence, PhraseKind::VerbPhrase, leaves, i));
    for (int k = i; k < j; ++k) in_vp[k] = true;
    i = j;
  }

  // Noun runs outside the verb spans.
  static const std::set<std::string> kNpTags = {"DT", "PRP$", "JJ", "CD", "NN", "PRP"};
  i = 0;
  while (i < n) {
    if (in_vp[i] || kNpTags.count(tags[i]) == 0) {
      ++i;
      continue;
    }
    int j = i;
    bool has_noun = false;
    while (j < n && !in_vp[j] && kNpTags.count(tags[j]) > 0) {
      if (tags[j] == "NN" || tags[j] == "PRP") has_noun = true;
      ++j;
    }
    if (has_noun) {
      std::vector<std::string> leaves(tokens.begin() + i, tokens.begin() + j);
      out.push_back(make_candidate(sentence, PhraseKind::NounPhrase, leaves, i));
    }
    i = j;
  }

  std::sort(out.begin(), out.end(), [](const PhraseCandidate& a, const PhraseCandidate& b) {
    if (a.span_begin != b.span_begin) return a.span_begin < b.span_begin;
    return a.kind == PhraseKind::NounPhrase && b.kind == PhraseKind::VerbPhrase;
  });
  return out;
}

std::set<std::string> content_token_set(const PhraseCandidate& p) {
  std::set<std::string> out;
  for (const auto& t : p.tokens) {
    if (!text::is_stopword(t)) out.insert(t);
  }
  return out;
}

}  // namespace

ParseNode parse_tree(const std::string& bracketed) {
  TreeParser parser(bracketed);
  ParseNode root = parser.parse_node();
  parser.skip_space();
  if (parser.pos != bracketed.size()) parser.fail("trailing characters after tree");
  return root;
}

std::string chunker_tag(const std::string& lower_token) {
  const auto& lex = pos_lexicon();
  auto it = lex.find(lower_token);
  if (it != lex.end()) return it->second;
  if (!lower_token.empty() &&
      std::all_of(lower_token.begin(), lower_token.end(),
                  [](unsigned char c) { return std::isdigit(c) != 0; })) {
    return "CD";
  }
  if (ends_with(lower_token, "ly")) return "RB";
  if (ends_with(lower_token, "ing") || ends_with(lower_token, "ed")) return "VB";
  return "NN";
}

std::vector<PhraseCandidate> extract_phrases(const corpus::Sentence& sentence,
                                             bool allow_fallback) {
  if (sentence.parse.has_value()) {
    ParseNode root = parse_tree(*sentence.parse);
    std::vector<PhraseCandidate> out;
    // A bare (S ...) root is itself a clause; wrap so its NP/VP children are seen.
    ParseNode wrapper;
    wrapper.label = "ROOT";
    wrapper.children.push_back(std::move(root));
    extract_from_tree(wrapper, sentence, 0, out);
    return out;
  }
  if (!allow_fallback) {
    throw InvalidInputError("sentence " + sentence.doc_id + "#" +
                            std::to_string(sentence.index) +
                            " has no parse and the chunker fallback is disabled");
  }
  return chunk_fallback(sentence);
}

void score_phrases(std::vector<PhraseCandidate>& candidates,
                   const std::map<std::pair<std::string, int>, double>& sentence_scores,
                   const std::set<std::string>& aspect_terms) {
  for (auto& p : candidates) {
    auto it = sentence_scores.find({p.doc_id, p.sentence_index});
    if (it == sentence_scores.end()) {
      throw InvalidInputError("no salience score for sentence " + p.doc_id + "#" +
                              std::to_string(p.sentence_index));
    }
    int overlap = 0;
    std::set<std::string> seen;
    for (const auto& t : p.tokens) {
      if (aspect_terms.count(t) > 0 && seen.insert(t).second) ++overlap;
    }
    p.salience = it->second * static_cast<double>(overlap + 1);
  }
}

double jaccard(const PhraseCandidate& a, const PhraseCandidate& b) {
  const std::set<std::string> sa = content_token_set(a);
  const std::set<std::string> sb = content_token_set(b);
  if (sa.empty() && sb.empty()) return 0.0;
  int inter = 0;
  for (const auto& t : sa) {
    if (sb.count(t) > 0) ++inter;
  }
  const int uni = static_cast<int>(sa.size() + sb.size()) - inter;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

}  // namespace rasum::phrase
