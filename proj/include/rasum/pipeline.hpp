#pragma once

#include "rasum/corpus.hpp"
#include "rasum/ilp.hpp"
#include "rasum/rouge.hpp"
#include "rasum/salience.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace rasum::pipeline {

struct RunConfig {
  int aspects = 5;          // m
  int hidden = 500;         // d_h
  int latent = 100;         // K
  double lambda_p = 0.2;
  double learning_rate = 0.001;
  int epochs = 300;
  uint64_t seed = 42;
  int min_df = 2;
  int word_limit = 100;
  int exact_cap = 25;
  bool cosine_weights = false;
  bool literal_alignment = false;
  bool cooccur_all_pairs = false;
  bool chunker_fallback = true;
  bool stem = false;
  bool no_comments = false;
  std::string save_model_path;  // write a VAE checkpoint here after training

  salience::TrainConfig train_config() const;
  void validate() const;
};

struct IngestReport {
  std::string topic_id;
  int documents = 0;
  int news_sentences = 0;
  int comment_sentences = 0;
  int model_summaries = 0;
  int vocabulary_size = 0;
  int dropped_news_rows = 0;
  int dropped_comment_rows = 0;
  int parsed_sentences = 0;
};

IngestReport run_ingest(const std::filesystem::path& topic_dir, const RunConfig& config);

struct SummarizeOutput {
  std::string summary;
  ilp::IlpSolution solution;
  ilp::AuditResult audit;
  bool exact = false;  // solved exactly vs greedy fallback
  salience::SalienceResult salience;
  std::vector<std::string> comment_ids;  // aligned with salience.weights rows
  std::string sidecar_json;              // selection + audit + diagnostics
  std::string salience_json;             // per-sentence scores + aspect terms
  std::string weights_json;              // rho diagnostics
  std::string candidates_json;           // every scored phrase candidate
};

SummarizeOutput run_summarize(const std::filesystem::path& topic_dir, const RunConfig& config);

struct TopicEvaluation {
  std::string topic_id;
  std::vector<rouge::RougeScore> scores;  // R1, R2, SU4
};

TopicEvaluation run_evaluate(const std::filesystem::path& candidate_file,
                             const std::filesystem::path& topic_dir, const RunConfig& config);

/// Batch evaluation: each entry is (candidate file, topic dir). The returned
/// list carries one row per topic plus a final "mean" row.
std::vector<TopicEvaluation> run_evaluate_batch(
    const std::vector<std::pair<std::filesystem::path, std::filesystem::path>>& entries,
    const RunConfig& config);

std::string evaluation_tsv(const std::vector<TopicEvaluation>& rows);
std::string evaluation_json(const std::vector<TopicEvaluation>& rows);

}  // namespace rasum::pipeline
