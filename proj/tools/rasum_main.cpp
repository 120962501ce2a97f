#include "rasum/pipeline.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

namespace fs = std::filesystem;
using rasum::pipeline::RunConfig;

constexpr int kExitOk = 0;
constexpr int kExitInvalidInput = 1;
constexpr int kExitNumeric = 2;
constexpr int kExitInfeasible = 3;

void add_config_options(CLI::App* cmd, RunConfig& config) {
  cmd->set_config("--config", "", "flat key = value config file; flags override it");
  cmd->add_option("--aspects,-m", config.aspects, "latent aspect count");
  cmd->add_option("--hidden", config.hidden, "hidden layer size");
  cmd->add_option("--latent", config.latent, "latent code size");
  cmd->add_option("--lambda-p", config.lambda_p, "latent/term comment-weight mix in [0,1]");
  cmd->add_option("--learning-rate", config.learning_rate, "Adam learning rate");
  cmd->add_option("--epochs", config.epochs, "training epochs");
  cmd->add_option("--seed", config.seed, "master RNG seed");
  cmd->add_option("--min-df", config.min_df, "minimum sentence frequency for vocabulary terms");
  cmd->add_option("--word-limit", config.word_limit, "summary length budget in words");
  cmd->add_option("--exact-cap", config.exact_cap,
                  "max candidate count for the exact solver; greedy beyond");
  cmd->add_flag("--cosine-weights", config.cosine_weights,
                "row-normalize matrices before the comment-weight relation product");
  cmd->add_flag("--literal-alignment", config.literal_alignment,
                "keep rho-gated attention rows unnormalized");
  cmd->add_option_function<std::string>(
         "--cooccur",
         [&config](const std::string& mode) { config.cooccur_all_pairs = mode == "all-pairs"; },
         "co-occurrence indicator: same-sentence (default) or all-pairs")
      ->check(CLI::IsMember({"same-sentence", "all-pairs"}));
  cmd->add_flag("!--no-chunker-fallback", config.chunker_fallback,
                "fail on sentences without a constituency parse");
  cmd->add_option("--save-model", config.save_model_path,
                  "write the trained VAE checkpoint here");
  cmd->add_flag("--stem", config.stem, "Porter-stem tokens in ROUGE");
  cmd->add_flag("--no-comments", config.no_comments,
                "drop reader comments right after loading (ablation)");
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw rasum::InvalidInputError("cannot write " + path.string());
  out << content;
}

int dispatch(int argc, char** argv) {
  CLI::App app{"reader-aware multi-document summarizer"};
  app.require_subcommand(1);
  app.fallthrough();  // shared options may follow the subcommand name
  RunConfig config;

  std::string topic_dir;
  std::string candidate_file;
  std::string out_path, sidecar_path, salience_path, weights_path, candidates_path;
  std::string batch_file;
  bool as_json = false;

  add_config_options(&app, config);

  auto* ingest = app.add_subcommand("ingest", "load a topic and report counts");
  ingest->add_option("topic", topic_dir, "topic directory")->required();

  auto* summarize = app.add_subcommand("summarize", "run the full pipeline on one topic");
  summarize->add_option("topic", topic_dir, "topic directory")->required();
  summarize->add_option("--out", out_path, "write the summary here instead of stdout");
  summarize->add_option("--sidecar", sidecar_path,
                        "selection/audit JSON (default: <out>.json when --out is set)");
  summarize->add_option("--dump-salience", salience_path, "write per-sentence salience JSON");
  summarize->add_option("--dump-weights", weights_path, "write comment-weight JSON");
  summarize->add_option("--dump-candidates", candidates_path,
                        "write every scored phrase candidate as JSON");

  auto* evaluate = app.add_subcommand("evaluate", "score a candidate summary with ROUGE");
  evaluate->add_option("candidate", candidate_file, "candidate summary text file");
  evaluate->add_option("topic", topic_dir, "topic directory with summaries/");
  evaluate->add_option("--batch", batch_file,
                       "file of tab-separated '<candidate>\\t<topic-dir>' lines; "
                       "emits per-topic rows plus the mean");
  evaluate->add_flag("--json", as_json, "emit JSON instead of TSV");

  auto* dump_salience = app.add_subcommand("dump-salience", "train and emit salience JSON");
  dump_salience->add_option("topic", topic_dir, "topic directory")->required();
  dump_salience->add_option("--out", out_path, "output file (default stdout)");

  auto* dump_weights = app.add_subcommand("dump-weights", "train and emit comment-weight JSON");
  dump_weights->add_option("topic", topic_dir, "topic directory")->required();
  dump_weights->add_option("--out", out_path, "output file (default stdout)");

  CLI11_PARSE(app, argc, argv);

  if (ingest->parsed()) {
    auto r = rasum::pipeline::run_ingest(topic_dir, config);
    std::cout << r.topic_id << ": " << r.documents << " docs, " << r.news_sentences
              << " news sentences, " << r.comment_sentences << " comment sentences, "
              << r.model_summaries << " model summaries, vocabulary " << r.vocabulary_size
              << " terms\n";
    if (r.dropped_news_rows > 0 || r.dropped_comment_rows > 0) {
      std::cout << "dropped rows without in-vocabulary terms: " << r.dropped_news_rows
                << " news, " << r.dropped_comment_rows << " comment\n";
    }
    std::cout << "sentences with constituency parses: " << r.parsed_sentences << "\n";
    return kExitOk;
  }

  if (summarize->parsed()) {
    auto out = rasum::pipeline::run_summarize(topic_dir, config);
    if (out_path.empty()) {
      std::cout << out.summary << "\n";
    } else {
      write_file(out_path, out.summary + "\n");
      if (sidecar_path.empty()) sidecar_path = out_path + ".json";
    }
    if (!sidecar_path.empty()) write_file(sidecar_path, out.sidecar_json);
    if (!salience_path.empty()) write_file(salience_path, out.salience_json);
    if (!weights_path.empty()) write_file(weights_path, out.weights_json);
    if (!candidates_path.empty()) write_file(candidates_path, out.candidates_json);
    if (out.solution.status == rasum::ilp::SolveStatus::Infeasible) {
      std::cerr << "no feasible phrase selection under the word limit\n";
      return kExitInfeasible;
    }
    return kExitOk;
  }

  if (evaluate->parsed()) {
    std::vector<rasum::pipeline::TopicEvaluation> rows;
    if (!batch_file.empty()) {
      std::ifstream in(batch_file);
      if (!in) throw rasum::InvalidInputError("cannot read batch file: " + batch_file);
      std::vector<std::pair<fs::path, fs::path>> entries;
      std::string line;
      while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto tab = line.find('\t');
        if (tab == std::string::npos) {
          throw rasum::InvalidInputError("batch line is not '<candidate>\\t<topic>': " + line);
        }
        entries.emplace_back(line.substr(0, tab), line.substr(tab + 1));
      }
      rows = rasum::pipeline::run_evaluate_batch(entries, config);
    } else {
      if (candidate_file.empty() || topic_dir.empty()) {
        throw rasum::InvalidInputError("evaluate needs <candidate> <topic> or --batch");
      }
      rows = {rasum::pipeline::run_evaluate(candidate_file, topic_dir, config)};
    }
    std::cout << (as_json ? rasum::pipeline::evaluation_json(rows)
                          : rasum::pipeline::evaluation_tsv(rows));
    return kExitOk;
  }

  if (dump_salience->parsed() || dump_weights->parsed()) {
    auto out = rasum::pipeline::run_summarize(topic_dir, config);
    const std::string& payload =
        dump_salience->parsed() ? out.salience_json : out.weights_json;
    if (out_path.empty()) {
      std::cout << payload;
    } else {
      write_file(out_path, payload);
    }
    return kExitOk;
  }

  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return dispatch(argc, argv);
  } catch (const rasum::NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const rasum::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitInvalidInput;
  } catch (const rasum::InvalidInputError& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kExitInvalidInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalidInput;
  }
}
