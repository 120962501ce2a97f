#include "rasum/ilp.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <queue>
#include <sstream>

namespace rasum::ilp {

namespace {

constexpr double kTieEps = 1e-12;

struct SearchNode {
  double bound;
  double objective;
  int depth;  // next phrase to branch on
  int words;
  uint32_t mask;  // selected phrases among [0, depth)
};

struct NodeOrder {
  bool operator()(const SearchNode& a, const SearchNode& b) const {
    if (a.bound != b.bound) return a.bound < b.bound;  // max-heap on bound
    if (a.depth != b.depth) return a.depth > b.depth;  // lower phrase id first
    return a.mask > b.mask;
  }
};

std::vector<int> mask_to_ids(uint32_t mask, int n) {
  std::vector<int> out;
  for (int i = 0; i < n; ++i) {
    if (mask & (1u << i)) out.push_back(i);
  }
  return out;
}

// A contributing sentence must include an NP when it offers NPs and a VP
// when it offers VPs; sentences with only one kind may contribute it alone.
bool compatible(const IlpInstance& inst, const std::vector<int>& selected) {
  std::map<int, std::pair<int, int>> np_vp;  // group -> (#np, #vp)
  for (int id : selected) {
    auto& counts = np_vp[inst.sentence_group[id]];
    if (inst.phrases[id].kind == phrase::PhraseKind::NounPhrase) {
      ++counts.first;
    } else {
      ++counts.second;
    }
  }
  for (const auto& [group, counts] : np_vp) {
    if (counts.first == 0 && !inst.group_nps[group].empty()) return false;
    if (counts.second == 0 && !inst.group_vps[group].empty()) return false;
  }
  return true;
}

int min_word_count(const IlpInstance& inst, const std::vector<int>& ids) {
  int best = std::numeric_limits<int>::max();
  for (int id : ids) best = std::min(best, inst.phrases[id].word_count);
  return best;
}

/// Smallest word cost of bringing the sentence into the selection, or INT_MAX.
int min_entry_words(const IlpInstance& inst, int group) {
  const bool has_np = !inst.group_nps[group].empty();
  const bool has_vp = !inst.group_vps[group].empty();
  int words = 0;
  if (has_np) words += min_word_count(inst, inst.group_nps[group]);
  if (has_vp) words += min_word_count(inst, inst.group_vps[group]);
  return (has_np || has_vp) ? words : std::numeric_limits<int>::max();
}

bool nonempty_selection_exists(const IlpInstance& inst) {
  for (size_t g = 0; g < inst.group_nps.size(); ++g) {
    if (min_entry_words(inst, static_cast<int>(g)) <= inst.word_limit) return true;
  }
  return false;
}

}  // namespace

double IlpInstance::objective_of(const std::vector<int>& selected) const {
  double obj = 0.0;
  for (size_t a = 0; a < selected.size(); ++a) {
    obj += phrases[selected[a]].salience;
    for (size_t b = a + 1; b < selected.size(); ++b) {
      obj -= pair_penalty(selected[a], selected[b]);
    }
  }
  return obj;
}

IlpInstance build_instance(std::vector<phrase::PhraseCandidate> candidates, int word_limit,
                           bool cooccur_all_pairs) {
  if (candidates.empty()) throw InvalidInputError("build_instance: no phrase candidates");
  if (word_limit <= 0) throw InvalidInputError("build_instance: word limit must be positive");
  IlpInstance inst;
  inst.word_limit = word_limit;
  inst.cooccur_all_pairs = cooccur_all_pairs;
  inst.phrases = std::move(candidates);

  const int n = static_cast<int>(inst.phrases.size());
  std::map<std::pair<std::string, int>, int> groups;
  inst.sentence_group.resize(n);
  for (int i = 0; i < n; ++i) {
    inst.phrases[i].id = i;
    auto key = std::make_pair(inst.phrases[i].doc_id, inst.phrases[i].sentence_index);
    auto [it, inserted] = groups.emplace(key, static_cast<int>(groups.size()));
    inst.sentence_group[i] = it->second;
  }
  inst.group_nps.resize(groups.size());
  inst.group_vps.resize(groups.size());
  for (int i = 0; i < n; ++i) {
    if (inst.phrases[i].kind == phrase::PhraseKind::NounPhrase) {
      inst.group_nps[inst.sentence_group[i]].push_back(i);
    } else {
      inst.group_vps[inst.sentence_group[i]].push_back(i);
    }
  }

  inst.R = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    inst.R(i, i) = 1.0;
    for (int j = i + 1; j < n; ++j) {
      const double sim = phrase::jaccard(inst.phrases[i], inst.phrases[j]);
      inst.R(i, j) = sim;
      inst.R(j, i) = sim;
    }
  }
  return inst;
}

IlpSolution solve_exact(const IlpInstance& inst) {
  const int n = static_cast<int>(inst.phrases.size());
  if (n > 31) throw InvalidInputError("solve_exact: instance exceeds the exact-solver cap");

  if (!nonempty_selection_exists(inst)) {
    return {{}, 0.0, SolveStatus::Infeasible};
  }

  // Optimistic bound: current objective plus every remaining positive gain.
  std::vector<double> positive_suffix(n + 1, 0.0);
  for (int i = n - 1; i >= 0; --i) {
    positive_suffix[i] =
        positive_suffix[i + 1] + std::max(0.0, inst.phrases[i].salience);
  }

  double best_obj = 0.0;  // the empty selection is always feasible
  uint32_t best_mask = 0;

  std::priority_queue<SearchNode, std::vector<SearchNode>, NodeOrder> open;
  open.push({positive_suffix[0], 0.0, 0, 0, 0});
  while (!open.empty()) {
    SearchNode node = open.top();
    open.pop();
    if (node.bound <= best_obj + kTieEps) break;
    if (node.depth == n) {
      if (node.objective > best_obj &&
          compatible(inst, mask_to_ids(node.mask, n))) {
        best_obj = node.objective;
        best_mask = node.mask;
      }
      continue;
    }
    const int k = node.depth;
    // Exclude branch.
    open.push({node.objective + positive_suffix[k + 1], node.objective, k + 1, node.words,
               node.mask});
    // Include branch, when the word limit allows.
    const int words = node.words + inst.phrases[k].word_count;
    if (words <= inst.word_limit) {
      double obj = node.objective + inst.phrases[k].salience;
      for (int j = 0; j < k; ++j) {
        if (node.mask & (1u << j)) obj -= inst.pair_penalty(j, k);
      }
      open.push({obj + positive_suffix[k + 1], obj, k + 1, words, node.mask | (1u << k)});
    }
  }

  IlpSolution sol;
  sol.selected = mask_to_ids(best_mask, n);
  sol.objective = inst.objective_of(sol.selected);
  sol.status = SolveStatus::Optimal;
  return sol;
}

IlpSolution solve_greedy(const IlpInstance& inst) {
  const int n = static_cast<int>(inst.phrases.size());
  if (!nonempty_selection_exists(inst)) {
    return {{}, 0.0, SolveStatus::Infeasible};
  }

  std::vector<bool> selected(n, false);
  std::vector<bool> group_active(inst.group_nps.size(), false);
  int words = 0;
  double objective = 0.0;

  auto marginal_gain = [&](int id) {
    double gain = inst.phrases[id].salience;
    for (int j = 0; j < n; ++j) {
      if (selected[j]) gain -= inst.pair_penalty(j, id);
    }
    return gain;
  };

  while (true) {
    double best_gain = 0.0;
    int best_a = -1, best_b = -1;

    // Single phrases keep the selection compatible when the sentence already
    // contributes or only offers one phrase kind.
    for (int id = 0; id < n; ++id) {
      if (selected[id]) continue;
      const int g = inst.sentence_group[id];
      const bool single_kind = inst.group_nps[g].empty() || inst.group_vps[g].empty();
      if (!group_active[g] && !single_kind) continue;
      if (words + inst.phrases[id].word_count > inst.word_limit) continue;
      const double gain = marginal_gain(id);
      if (gain > best_gain + kTieEps) {
        best_gain = gain;
        best_a = id;
        best_b = -1;
      }
    }
    // NP+VP entry pairs for two-kind sentences not yet contributing.
    for (size_t g = 0; g < inst.group_nps.size(); ++g) {
      if (group_active[g] || inst.group_nps[g].empty() || inst.group_vps[g].empty()) continue;
      for (int np : inst.group_nps[g]) {
        for (int vp : inst.group_vps[g]) {
          if (words + inst.phrases[np].word_count + inst.phrases[vp].word_count >
              inst.word_limit) {
            continue;
          }
          const double gain =
              marginal_gain(np) + marginal_gain(vp) - inst.pair_penalty(np, vp);
          if (gain > best_gain + kTieEps) {
            best_gain = gain;
            best_a = np;
            best_b = vp;
          }
        }
      }
    }

    if (best_a < 0) break;  // no positive-gain feasible addition remains
    objective += best_gain;
    selected[best_a] = true;
    words += inst.phrases[best_a].word_count;
    if (best_b >= 0) {
      selected[best_b] = true;
      words += inst.phrases[best_b].word_count;
    }
    group_active[inst.sentence_group[best_a]] = true;
  }

  IlpSolution sol;
  for (int i = 0; i < n; ++i) {
    if (selected[i]) sol.selected.push_back(i);
  }
  sol.objective = inst.objective_of(sol.selected);
  sol.status = SolveStatus::Heuristic;
  return sol;
}

AuditResult audit(const IlpInstance& inst, const IlpSolution& sol) {
  AuditResult out;
  int words = 0;
  std::vector<bool> seen(inst.phrases.size(), false);
  for (int id : sol.selected) {
    if (id < 0 || id >= static_cast<int>(inst.phrases.size())) {
      out.violations.push_back("unknown phrase id " + std::to_string(id));
      continue;
    }
    if (seen[id]) out.violations.push_back("phrase " + std::to_string(id) + " selected twice");
    seen[id] = true;
    words += inst.phrases[id].word_count;
  }
  if (words > inst.word_limit) {
    out.violations.push_back("word limit exceeded: " + std::to_string(words) + " > " +
                             std::to_string(inst.word_limit));
  }
  if (!compatible(inst, sol.selected)) {
    out.violations.push_back("a sentence contributes phrases without its NP+VP complement");
  }
  out.recomputed_objective = inst.objective_of(sol.selected);
  if (std::abs(out.recomputed_objective - sol.objective) > 1e-9) {
    out.violations.push_back("objective mismatch: reported " + std::to_string(sol.objective) +
                             ", recomputed " + std::to_string(out.recomputed_objective));
  }
  out.ok = out.violations.empty();
  return out;
}

std::string render_summary(const IlpSolution& sol, const IlpInstance& inst,
                           const corpus::Topic& topic) {
  std::map<std::string, std::string> doc_time;
  for (const auto& d : topic.documents) doc_time[d.id] = d.timestamp.value_or("");

  struct SentenceOut {
    double max_salience;
    std::string timestamp;
    std::string doc_id;
    int sentence_index;
    std::vector<int> phrase_ids;
  };
  std::map<int, SentenceOut> by_group;
  for (int id : sol.selected) {
    const auto& p = inst.phrases[id];
    auto [it, inserted] = by_group.try_emplace(
        inst.sentence_group[id],
        SentenceOut{p.salience, doc_time[p.doc_id], p.doc_id, p.sentence_index, {}});
    it->second.max_salience = std::max(it->second.max_salience, p.salience);
    it->second.phrase_ids.push_back(id);
  }

  std::vector<SentenceOut> sentences;
  sentences.reserve(by_group.size());
  for (auto& [group, s] : by_group) {
    std::sort(s.phrase_ids.begin(), s.phrase_ids.end(), [&](int a, int b) {
      if (inst.phrases[a].span_begin != inst.phrases[b].span_begin) {
        return inst.phrases[a].span_begin < inst.phrases[b].span_begin;
      }
      return a < b;
    });
    sentences.push_back(std::move(s));
  }
  std::sort(sentences.begin(), sentences.end(), [](const SentenceOut& a, const SentenceOut& b) {
    if (a.max_salience != b.max_salience) return a.max_salience > b.max_salience;
    if (a.timestamp != b.timestamp) return a.timestamp < b.timestamp;
    if (a.doc_id != b.doc_id) return a.doc_id < b.doc_id;
    return a.sentence_index < b.sentence_index;
  });

  std::ostringstream out;
  bool first_sentence = true;
  for (const auto& s : sentences) {
    if (!first_sentence) out << " ";
    first_sentence = false;
    bool first_token = true;
    for (int id : s.phrase_ids) {
      for (const auto& tok : inst.phrases[id].tokens) {
        if (!first_token) out << " ";
        first_token = false;
        out << tok;
      }
    }
    out << ".";
  }
  return out.str();
}

}  // namespace rasum::ilp
