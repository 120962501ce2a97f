#pragma once

#include "rasum/common.hpp"
#include "rasum/corpus.hpp"

#include <map>
#include <set>
#include <string>
#include <vector>

namespace rasum::phrase {

enum class PhraseKind { NounPhrase, VerbPhrase };

struct PhraseCandidate {
  int id = -1;
  PhraseKind kind = PhraseKind::NounPhrase;
  std::vector<std::string> tokens;  // lowercased word tokens, punctuation dropped
  std::string doc_id;
  int sentence_index = 0;
  int span_begin = 0;  // token span within the source sentence, [begin, end)
  int span_end = 0;
  double salience = 0.0;
  int word_count = 0;
};

struct ParseNode {
  std::string label;  // normalized: functional annotations after - = stripped
  std::string token;  // leaves only
  std::vector<ParseNode> children;

  bool is_leaf() const { return children.empty() && !token.empty(); }
};

/// Parse one bracketed constituency tree, e.g.
/// "(S (NP (DT the) (NN headset)) (VP (VBZ works)))".
ParseNode parse_tree(const std::string& bracketed);

/// Maximal NP and VP constituents directly under a clause-level node, from
/// the sentence's tree; without a tree the heuristic chunker runs when
/// allow_fallback is set.
std::vector<PhraseCandidate> extract_phrases(const corpus::Sentence& sentence,
                                             bool allow_fallback = true);

/// POS tag from the bundled lexicon + suffix rules; unknown words are NN.
std::string chunker_tag(const std::string& lower_token);

/// S_i = sentence salience * (|phrase tokens ∩ aspect terms| + 1).
void score_phrases(std::vector<PhraseCandidate>& candidates,
                   const std::map<std::pair<std::string, int>, double>& sentence_scores,
                   const std::set<std::string>& aspect_terms);

/// Jaccard index over lowercased non-stopword token sets; 0 when both are
/// empty after stopword removal.
double jaccard(const PhraseCandidate& a, const PhraseCandidate& b);

}  // namespace rasum::phrase
