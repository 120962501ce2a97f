#pragma once

#include "rasum/common.hpp"
#include "rasum/corpus.hpp"
#include "rasum/phrase.hpp"

#include <string>
#include <vector>

namespace rasum::ilp {

/// Phrase selection problem: maximize sum(S_i) over selected phrases minus
/// (S_i + S_j) * R_ij for selected co-occurring pairs, subject to the word
/// limit and per-sentence NP+VP compatibility.
struct IlpInstance {
  std::vector<phrase::PhraseCandidate> phrases;  // ids are indices into this list
  Matrix R;                                      // symmetric Jaccard similarities
  std::vector<int> sentence_group;               // phrase -> sentence group
  std::vector<std::vector<int>> group_nps, group_vps;
  int word_limit = 100;
  bool cooccur_all_pairs = false;  // co-occurrence indicator covers every pair

  bool cooccur(int i, int j) const {
    return cooccur_all_pairs || sentence_group[i] == sentence_group[j];
  }
  double pair_penalty(int i, int j) const {
    if (!cooccur(i, j)) return 0.0;
    return (phrases[i].salience + phrases[j].salience) * R(i, j);
  }
  /// Objective evaluated on an arbitrary selection.
  double objective_of(const std::vector<int>& selected) const;
};

enum class SolveStatus { Optimal, Heuristic, Infeasible };

struct IlpSolution {
  std::vector<int> selected;  // ascending phrase ids
  double objective = 0.0;
  SolveStatus status = SolveStatus::Optimal;
};

IlpInstance build_instance(std::vector<phrase::PhraseCandidate> candidates, int word_limit,
                           bool cooccur_all_pairs = false);

/// Globally optimal selection by best-first branch and bound; intended for
/// instances up to ~25 phrases.
IlpSolution solve_exact(const IlpInstance& instance);

/// Adds the feasible phrase (or the NP+VP entry pair of a new sentence) with
/// the best positive marginal gain until none remains.
IlpSolution solve_greedy(const IlpInstance& instance);

struct AuditResult {
  bool ok = true;
  std::vector<std::string> violations;
  double recomputed_objective = 0.0;
};

/// Post-hoc constraint and objective check of a solution.
AuditResult audit(const IlpInstance& instance, const IlpSolution& solution);

/// Selected phrases grouped into sentences: phrases in original span order,
/// sentences by descending max phrase salience (ties: timestamp, doc id,
/// sentence index), each sentence terminated with a period.
std::string render_summary(const IlpSolution& solution, const IlpInstance& instance,
                           const corpus::Topic& topic);

}  // namespace rasum::ilp
