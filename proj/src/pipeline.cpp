#include "rasum/pipeline.hpp"

#include "rasum/text.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <map>
#include <set>

namespace rasum::pipeline {

using nlohmann::json;

salience::TrainConfig RunConfig::train_config() const {
  salience::TrainConfig t;
  t.aspects = aspects;
  t.hidden = hidden;
  t.latent = latent;
  t.lambda_p = lambda_p;
  t.learning_rate = learning_rate;
  t.epochs = epochs;
  t.seed = seed;
  t.literal_alignment = literal_alignment;
  t.cosine_weights = cosine_weights;
  return t;
}

void RunConfig::validate() const {
  if (aspects <= 0 || hidden <= 0 || latent <= 0 || epochs <= 0 || min_df <= 0 ||
      word_limit <= 0 || exact_cap <= 0 || learning_rate <= 0.0) {
    throw InvalidInputError("config: all hyperparameters must be positive");
  }
  if (lambda_p < 0.0 || lambda_p > 1.0) {
    throw InvalidInputError("config: lambda_p must lie in [0,1]");
  }
}

namespace {

struct PreparedTopic {
  corpus::Topic topic;
  corpus::Vocabulary vocab;
  corpus::VectorizeResult news;
  corpus::VectorizeResult comments;
  std::vector<const corpus::Sentence*> sentences;  // aligned with vectorize input
};

PreparedTopic prepare_topic(const std::filesystem::path& dir, const RunConfig& config) {
  PreparedTopic p;
  p.topic = corpus::load_topic(dir);
  if (config.no_comments) p.topic.comments.clear();
  p.vocab = corpus::build_vocabulary(p.topic, config.min_df);
  p.sentences = p.topic.all_sentences();
  p.news = corpus::vectorize(p.sentences, p.vocab);
  if (p.news.matrix.rows() == 0) {
    throw InvalidInputError("no news sentence has an in-vocabulary term in " + dir.string());
  }
  if (!p.topic.comments.empty()) {
    p.comments = corpus::vectorize(p.topic.comments, p.vocab);
  } else {
    p.comments.matrix.kind = corpus::BowMatrix::Kind::Comment;
    p.comments.matrix.data = Matrix::Zero(0, p.vocab.size());
  }
  p.topic.summary_word_limit = config.word_limit;
  return p;
}

json weights_to_json(const salience::SalienceResult& result,
                     const std::vector<std::string>& comment_ids) {
  json rows = json::array();
  for (Eigen::Index j = 0; j < result.weights.rho.size(); ++j) {
    rows.push_back({
        {"comment_id", comment_ids[static_cast<size_t>(j)]},
        {"rho_x", result.weights.rho_x(j)},
        {"rho_z", result.weights.rho_z(j)},
        {"rho", result.weights.rho(j)},
    });
  }
  return {{"lambda_p", result.weights.lambda_p}, {"comments", rows}};
}

json salience_to_json(const PreparedTopic& p, const salience::SalienceResult& result) {
  json sentences = json::array();
  for (size_t r = 0; r < p.news.row_to_sentence.size(); ++r) {
    const auto* s = p.sentences[static_cast<size_t>(p.news.row_to_sentence[r])];
    sentences.push_back({
        {"doc_id", s->doc_id},
        {"index", s->index},
        {"score", result.scores(static_cast<Eigen::Index>(r))},
    });
  }
  json aspects = json::array();
  for (const auto& terms : result.aspect_terms) aspects.push_back(terms);
  return {{"sentences", sentences}, {"aspects", aspects}};
}

}  // namespace

IngestReport run_ingest(const std::filesystem::path& topic_dir, const RunConfig& config) {
  config.validate();
  PreparedTopic p = prepare_topic(topic_dir, config);
  IngestReport r;
  r.topic_id = p.topic.id;
  r.documents = static_cast<int>(p.topic.documents.size());
  r.news_sentences = p.topic.news_sentence_count();
  r.comment_sentences = static_cast<int>(p.topic.comments.size());
  r.model_summaries = static_cast<int>(p.topic.model_summaries.size());
  r.vocabulary_size = p.vocab.size();
  r.dropped_news_rows = r.news_sentences - static_cast<int>(p.news.matrix.rows());
  r.dropped_comment_rows = r.comment_sentences - static_cast<int>(p.comments.matrix.rows());
  for (const auto* s : p.sentences) {
    if (s->parse.has_value()) ++r.parsed_sentences;
  }
  return r;
}

SummarizeOutput run_summarize(const std::filesystem::path& topic_dir, const RunConfig& config) {
  config.validate();
  PreparedTopic p = prepare_topic(topic_dir, config);

  auto [model, sal] = salience::train(p.news.matrix.data, p.comments.matrix.data,
                                      config.train_config(), &p.vocab);
  if (!config.save_model_path.empty()) {
    vae::save_checkpoint(config.save_model_path, model.params.vae, model.vae_adam,
                         p.vocab.hash());
  }

  SummarizeOutput out;
  out.salience = sal;
  for (int row : p.comments.row_to_sentence) {
    out.comment_ids.push_back(p.topic.comments[static_cast<size_t>(row)].comment_id);
  }

  // Phrase candidates from the sentences that survived vectorization.
  std::map<std::pair<std::string, int>, double> sentence_scores;
  for (size_t r = 0; r < p.news.row_to_sentence.size(); ++r) {
    const auto* s = p.sentences[static_cast<size_t>(p.news.row_to_sentence[r])];
    sentence_scores[{s->doc_id, s->index}] = sal.scores(static_cast<Eigen::Index>(r));
  }
  std::set<std::string> aspect_terms;
  for (const auto& terms : sal.aspect_terms) aspect_terms.insert(terms.begin(), terms.end());

  std::vector<phrase::PhraseCandidate> candidates;
  for (size_t r = 0; r < p.news.row_to_sentence.size(); ++r) {
    const auto* s = p.sentences[static_cast<size_t>(p.news.row_to_sentence[r])];
    auto extracted = phrase::extract_phrases(*s, config.chunker_fallback);
    candidates.insert(candidates.end(), extracted.begin(), extracted.end());
  }
  if (candidates.empty()) {
    throw InvalidInputError("no phrase candidates extracted from " + topic_dir.string());
  }
  phrase::score_phrases(candidates, sentence_scores, aspect_terms);

  json all_candidates = json::array();
  for (const auto& ph : candidates) {
    all_candidates.push_back({
        {"kind", ph.kind == phrase::PhraseKind::NounPhrase ? "NP" : "VP"},
        {"doc_id", ph.doc_id},
        {"sentence_index", ph.sentence_index},
        {"span", {ph.span_begin, ph.span_end}},
        {"tokens", ph.tokens},
        {"salience", ph.salience},
    });
  }
  out.candidates_json = all_candidates.dump(2) + "\n";

  ilp::IlpInstance instance =
      ilp::build_instance(std::move(candidates), config.word_limit, config.cooccur_all_pairs);
  out.exact = static_cast<int>(instance.phrases.size()) <= config.exact_cap;
  out.solution = out.exact ? ilp::solve_exact(instance) : ilp::solve_greedy(instance);
  out.audit = ilp::audit(instance, out.solution);
  out.summary = ilp::render_summary(out.solution, instance, p.topic);

  json selected = json::array();
  for (int id : out.solution.selected) {
    const auto& ph = instance.phrases[id];
    selected.push_back({
        {"id", id},
        {"kind", ph.kind == phrase::PhraseKind::NounPhrase ? "NP" : "VP"},
        {"doc_id", ph.doc_id},
        {"sentence_index", ph.sentence_index},
        {"tokens", ph.tokens},
        {"salience", ph.salience},
    });
  }
  json sidecar = {
      {"topic", p.topic.id},
      {"seed", config.seed},
      {"status", out.solution.status == ilp::SolveStatus::Optimal      ? "optimal"
                 : out.solution.status == ilp::SolveStatus::Heuristic ? "heuristic"
                                                                      : "infeasible"},
      {"objective", out.solution.objective},
      {"word_limit", config.word_limit},
      {"candidate_count", instance.phrases.size()},
      {"selected", selected},
      {"constraint_audit",
       {{"ok", out.audit.ok},
        {"violations", out.audit.violations},
        {"recomputed_objective", out.audit.recomputed_objective}}},
  };
  out.sidecar_json = sidecar.dump(2) + "\n";
  out.salience_json = salience_to_json(p, sal).dump(2) + "\n";
  out.weights_json = weights_to_json(sal, out.comment_ids).dump(2) + "\n";
  return out;
}

TopicEvaluation run_evaluate(const std::filesystem::path& candidate_file,
                             const std::filesystem::path& topic_dir, const RunConfig& config) {
  config.validate();
  std::ifstream in(candidate_file);
  if (!in) throw InvalidInputError("cannot read candidate summary: " + candidate_file.string());
  std::string summary((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

  corpus::Topic topic = corpus::load_topic(topic_dir);
  topic.summary_word_limit = config.word_limit;
  rouge::EvaluateOptions options;
  options.stem = config.stem;
  TopicEvaluation out;
  out.topic_id = topic.id;
  out.scores = rouge::evaluate_topic(summary, topic, options);
  return out;
}

std::vector<TopicEvaluation> run_evaluate_batch(
    const std::vector<std::pair<std::filesystem::path, std::filesystem::path>>& entries,
    const RunConfig& config) {
  if (entries.empty()) throw InvalidInputError("evaluate batch: no entries");
  std::vector<TopicEvaluation> rows;
  rows.reserve(entries.size() + 1);
  for (const auto& [candidate, topic] : entries) {
    rows.push_back(run_evaluate(candidate, topic, config));
  }
  TopicEvaluation mean;
  mean.topic_id = "mean";
  mean.scores = rows[0].scores;
  for (auto& s : mean.scores) s.precision = s.recall = s.f = 0.0;
  for (const auto& row : rows) {
    for (size_t k = 0; k < row.scores.size(); ++k) {
      mean.scores[k].precision += row.scores[k].precision;
      mean.scores[k].recall += row.scores[k].recall;
      mean.scores[k].f += row.scores[k].f;
    }
  }
  const double n = static_cast<double>(rows.size());
  for (auto& s : mean.scores) {
    s.precision /= n;
    s.recall /= n;
    s.f /= n;
  }
  rows.push_back(std::move(mean));
  return rows;
}

std::string evaluation_tsv(const std::vector<TopicEvaluation>& rows) {
  std::string out = "topic\tmetric\tprecision\trecall\tf\n";
  char buf[128];
  for (const auto& row : rows) {
    for (const auto& s : row.scores) {
      std::snprintf(buf, sizeof(buf), "%s\t%s\t%.5f\t%.5f\t%.5f\n", row.topic_id.c_str(),
                    rouge::metric_name(s.metric).c_str(), s.precision, s.recall, s.f);
      out += buf;
    }
  }
  return out;
}

std::string evaluation_json(const std::vector<TopicEvaluation>& rows) {
  json out = json::array();
  for (const auto& row : rows) {
    json metrics;
    for (const auto& s : row.scores) {
      metrics[rouge::metric_name(s.metric)] = {
          {"precision", s.precision}, {"recall", s.recall}, {"f", s.f}};
    }
    out.push_back({{"topic", row.topic_id}, {"metrics", metrics}});
  }
  return out.dump(2) + "\n";
}

}  // namespace rasum::pipeline
