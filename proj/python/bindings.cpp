#include "rasum/pipeline.hpp"
#include "rasum/phrase.hpp"
#include "rasum/rouge.hpp"
#include "rasum/salience.hpp"
#include "rasum/text.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <filesystem>

namespace py = pybind11;
using namespace rasum;

namespace {

pipeline::RunConfig config_from_kwargs(int aspects, int hidden, int latent, double lambda_p,
                                       double learning_rate, int epochs, uint64_t seed,
                                       int min_df, int word_limit, int exact_cap,
                                       bool cosine_weights, bool literal_alignment,
                                       bool cooccur_all_pairs, bool chunker_fallback, bool stem,
                                       bool no_comments) {
  pipeline::RunConfig c;
  c.aspects = aspects;
  c.hidden = hidden;
  c.latent = latent;
  c.lambda_p = lambda_p;
  c.learning_rate = learning_rate;
  c.epochs = epochs;
  c.seed = seed;
  c.min_df = min_df;
  c.word_limit = word_limit;
  c.exact_cap = exact_cap;
  c.cosine_weights = cosine_weights;
  c.literal_alignment = literal_alignment;
  c.cooccur_all_pairs = cooccur_all_pairs;
  c.chunker_fallback = chunker_fallback;
  c.stem = stem;
  c.no_comments = no_comments;
  return c;
}

py::dict score_to_dict(const rouge::RougeScore& s) {
  py::dict d;
  d["metric"] = rouge::metric_name(s.metric);
  d["precision"] = s.precision;
  d["recall"] = s.recall;
  d["f"] = s.f;
  return d;
}

}  // namespace

PYBIND11_MODULE(_rasum, m) {
  m.doc() = "Reader-aware multi-document summarization core";

  py::register_exception<InvalidInputError>(m, "InvalidInputError", PyExc_ValueError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<NumericError>(m, "NumericError", PyExc_ArithmeticError);

#define RASUM_CONFIG_ARGS                                                                    \
  py::arg("aspects") = 5, py::arg("hidden") = 500, py::arg("latent") = 100,                  \
  py::arg("lambda_p") = 0.2, py::arg("learning_rate") = 0.001, py::arg("epochs") = 300,      \
  py::arg("seed") = 42, py::arg("min_df") = 2, py::arg("word_limit") = 100,                  \
  py::arg("exact_cap") = 25, py::arg("cosine_weights") = false,                              \
  py::arg("literal_alignment") = false, py::arg("cooccur_all_pairs") = false,                \
  py::arg("chunker_fallback") = true, py::arg("stem") = false, py::arg("no_comments") = false

  m.def(
      "ingest",
      [](const std::string& topic_dir, int aspects, int hidden, int latent, double lambda_p,
         double learning_rate, int epochs, uint64_t seed, int min_df, int word_limit,
         int exact_cap, bool cosine_weights, bool literal_alignment, bool cooccur_all_pairs,
         bool chunker_fallback, bool stem, bool no_comments) {
        auto r = pipeline::run_ingest(
            topic_dir, config_from_kwargs(aspects, hidden, latent, lambda_p, learning_rate,
                                          epochs, seed, min_df, word_limit, exact_cap,
                                          cosine_weights, literal_alignment, cooccur_all_pairs,
                                          chunker_fallback, stem, no_comments));
        py::dict d;
        d["topic_id"] = r.topic_id;
        d["documents"] = r.documents;
        d["news_sentences"] = r.news_sentences;
        d["comment_sentences"] = r.comment_sentences;
        d["model_summaries"] = r.model_summaries;
        d["vocabulary_size"] = r.vocabulary_size;
        d["parsed_sentences"] = r.parsed_sentences;
        return d;
      },
      py::arg("topic_dir"), RASUM_CONFIG_ARGS,
      "Load a topic directory and report counts and diagnostics.");

  m.def(
      "summarize",
      [](const std::string& topic_dir, int aspects, int hidden, int latent, double lambda_p,
         double learning_rate, int epochs, uint64_t seed, int min_df, int word_limit,
         int exact_cap, bool cosine_weights, bool literal_alignment, bool cooccur_all_pairs,
         bool chunker_fallback, bool stem, bool no_comments) {
        auto out = pipeline::run_summarize(
            topic_dir, config_from_kwargs(aspects, hidden, latent, lambda_p, learning_rate,
                                          epochs, seed, min_df, word_limit, exact_cap,
                                          cosine_weights, literal_alignment, cooccur_all_pairs,
                                          chunker_fallback, stem, no_comments));
        py::dict d;
        d["summary"] = out.summary;
        d["objective"] = out.solution.objective;
        d["status"] = out.solution.status == ilp::SolveStatus::Optimal      ? "optimal"
                      : out.solution.status == ilp::SolveStatus::Heuristic ? "heuristic"
                                                                           : "infeasible";
        d["selected"] = out.solution.selected;
        d["audit_ok"] = out.audit.ok;
        d["scores"] = Vector(out.salience.scores);
        d["rho"] = Vector(out.salience.weights.rho);
        d["aspect_terms"] = out.salience.aspect_terms;
        d["sidecar_json"] = out.sidecar_json;
        return d;
      },
      py::arg("topic_dir"), RASUM_CONFIG_ARGS,
      "Run the full pipeline on a topic directory and return the summary plus diagnostics.");

  m.def(
      "evaluate_text",
      [](const std::string& summary, const std::string& topic_dir, bool stem, int word_limit) {
        corpus::Topic topic = corpus::load_topic(topic_dir);
        topic.summary_word_limit = word_limit;
        rouge::EvaluateOptions options;
        options.stem = stem;
        py::list out;
        for (const auto& s : rouge::evaluate_topic(summary, topic, options)) {
          out.append(score_to_dict(s));
        }
        return out;
      },
      py::arg("summary"), py::arg("topic_dir"), py::arg("stem") = false,
      py::arg("word_limit") = 100,
      "Score a summary string against a topic's model summaries.");

  m.def(
      "train_salience",
      [](const Matrix& X_d, const Matrix& X_c, int aspects, int hidden, int latent,
         double lambda_p, double learning_rate, int epochs, uint64_t seed,
         bool literal_alignment, bool cosine_weights) {
        salience::TrainConfig cfg;
        cfg.aspects = aspects;
        cfg.hidden = hidden;
        cfg.latent = latent;
        cfg.lambda_p = lambda_p;
        cfg.learning_rate = learning_rate;
        cfg.epochs = epochs;
        cfg.seed = seed;
        cfg.literal_alignment = literal_alignment;
        cfg.cosine_weights = cosine_weights;
        auto [model, result] = salience::train(X_d, X_c, cfg);
        py::dict d;
        d["scores"] = Vector(result.scores);
        d["rho"] = Vector(result.weights.rho);
        d["rho_x"] = Vector(result.weights.rho_x);
        d["rho_z"] = Vector(result.weights.rho_z);
        d["bound_history"] = model.bound_history;
        d["aspect_term_bank"] = Matrix(model.S_x_final);
        d["coefficients"] = Matrix(model.A_d_final);
        return d;
      },
      py::arg("X_d"), py::arg("X_c"), py::arg("aspects") = 5, py::arg("hidden") = 500,
      py::arg("latent") = 100, py::arg("lambda_p") = 0.2, py::arg("learning_rate") = 0.001,
      py::arg("epochs") = 300, py::arg("seed") = 42, py::arg("literal_alignment") = false,
      py::arg("cosine_weights") = false,
      "Train the salience model on binary bag-of-words matrices (news rows, comment rows).");

  m.def(
      "rouge_n",
      [](const std::vector<std::string>& candidate,
         const std::vector<std::vector<std::string>>& references, int n, bool stem) {
        return score_to_dict(rouge::rouge_n(candidate, references, n, stem));
      },
      py::arg("candidate"), py::arg("references"), py::arg("n") = 1, py::arg("stem") = false);

  m.def(
      "rouge_su4",
      [](const std::vector<std::string>& candidate,
         const std::vector<std::vector<std::string>>& references, bool stem) {
        return score_to_dict(rouge::rouge_su4(candidate, references, stem));
      },
      py::arg("candidate"), py::arg("references"), py::arg("stem") = false);

  m.def("porter_stem", &rouge::porter_stem, py::arg("word"));
  m.def("tokenize", &text::tokenize, py::arg("raw"), "Lowercased word tokens.");

  m.def(
      "jaccard",
      [](const std::vector<std::string>& a, const std::vector<std::string>& b) {
        phrase::PhraseCandidate pa, pb;
        pa.tokens = a;
        pb.tokens = b;
        return phrase::jaccard(pa, pb);
      },
      py::arg("tokens_a"), py::arg("tokens_b"),
      "Jaccard index over non-stopword token sets.");

#undef RASUM_CONFIG_ARGS
}
