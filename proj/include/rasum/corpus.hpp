#pragma once

#include "rasum/common.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace rasum::corpus {

enum class Category {
  AccidentsAndNaturalDisasters,
  Attacks,
  NewTechnology,
  HealthAndSafety,
  EndangeredResources,
  InvestigationsAndTrials,
};

std::string category_name(Category c);
std::optional<Category> parse_category(const std::string& name);

struct Sentence {
  std::string doc_id;
  int index = 0;  // position within its document
  std::vector<std::string> tokens;  // lowercased, stopwords retained
  std::string raw;
  std::optional<std::string> parse;  // bracketed constituency tree
};

struct CommentSentence {
  std::string comment_id;
  std::vector<std::string> tokens;
  std::string raw;
};

struct NewsDocument {
  std::string id;
  std::string source;
  std::optional<std::string> timestamp;  // ISO date string when present
  std::vector<Sentence> sentences;
};

struct Topic {
  std::string id;
  Category category = Category::NewTechnology;
  std::vector<NewsDocument> documents;
  std::vector<CommentSentence> comments;
  std::vector<std::vector<std::string>> model_summaries;  // tokenized
  int summary_word_limit = 100;

  int news_sentence_count() const;
  /// All news sentences in document order (documents are lexicographic by id).
  std::vector<const Sentence*> all_sentences() const;
};

struct Vocabulary {
  std::vector<std::string> terms;  // ordering: document frequency desc, then lexicographic
  std::unordered_map<std::string, int> index;

  int size() const { return static_cast<int>(terms.size()); }
  /// FNV-1a over the ordered term list; checkpoint compatibility key.
  uint64_t hash() const;
};

struct BowMatrix {
  enum class Kind { News, Comment };
  Matrix data;  // binary indicators, one row per surviving sentence
  Kind kind = Kind::News;

  Eigen::Index rows() const { return data.rows(); }
  Eigen::Index cols() const { return data.cols(); }
};

struct VectorizeResult {
  BowMatrix matrix;
  /// matrix row -> index into the input sentence list (zero rows dropped).
  std::vector<int> row_to_sentence;
};

/// Load a topic directory: news/*.xml, comments.xml (optional), summaries/
/// (optional), parses/ (optional), category.txt (optional).
Topic load_topic(const std::filesystem::path& dir);

/// Terms are non-stopword unigrams, non-stopword bigrams ("a_b"), and
/// capitalization-run entity terms, filtered to document frequency >= min_df
/// over all news + comment sentences of the topic.
Vocabulary build_vocabulary(const Topic& topic, int min_df);

/// The term set a sentence contributes to the vocabulary and its BoW row.
std::vector<std::string> sentence_terms(const std::vector<std::string>& tokens,
                                        const std::string& raw);

VectorizeResult vectorize(const std::vector<const Sentence*>& sentences,
                          const Vocabulary& vocab);
VectorizeResult vectorize(const std::vector<CommentSentence>& comments,
                          const Vocabulary& vocab);

}  // namespace rasum::corpus
