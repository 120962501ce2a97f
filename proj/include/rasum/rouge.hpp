#pragma once

#include "rasum/corpus.hpp"

#include <string>
#include <vector>

namespace rasum::rouge {

enum class Metric { R1, R2, SU4 };

struct RougeScore {
  Metric metric = Metric::R1;
  double precision = 0.0;
  double recall = 0.0;
  double f = 0.0;  // balanced F1
};

/// Porter (1980) stemmer.
std::string porter_stem(const std::string& word);

/// Clipped n-gram overlap, micro-averaged over references (sum of overlaps /
/// sum of counts). stem applies the Porter stemmer to every token first.
RougeScore rouge_n(const std::vector<std::string>& candidate,
                   const std::vector<std::vector<std::string>>& references, int n, bool stem);

/// Skip-bigrams with at most 4 intervening words, plus unigrams.
RougeScore rouge_su4(const std::vector<std::string>& candidate,
                     const std::vector<std::vector<std::string>>& references, bool stem);

struct EvaluateOptions {
  bool stem = false;
};

/// R-1, R-2 and R-SU4 of a summary against all of a topic's model summaries.
/// The candidate is truncated to topic.summary_word_limit tokens first.
std::vector<RougeScore> evaluate_topic(const std::string& summary_text,
                                       const corpus::Topic& topic,
                                       const EvaluateOptions& options);

std::string metric_name(Metric m);

}  // namespace rasum::rouge
