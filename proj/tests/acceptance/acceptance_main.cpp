// Acceptance suite: runs every release criterion at its stated tolerance and
// prints one pass/fail line per criterion.

#include "rasum/pipeline.hpp"
#include "rasum/rouge.hpp"
#include "rasum/salience.hpp"
#include "rasum/text.hpp"
#include "rasum/vae.hpp"

#include "../synthetic.hpp"
#include "../testutil.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

using namespace rasum;
namespace fs = std::filesystem;

namespace {

const fs::path kFixtures = fs::path(RASUM_SOURCE_DIR) / "data" / "fixtures";

struct Criterion {
  bool pass = false;
  std::string detail;
};

int g_failures = 0;

void run(int number, const std::string& name, double budget_seconds,
         const std::function<Criterion()>& fn) {
  const auto start = std::chrono::steady_clock::now();
  Criterion result;
  try {
    result = fn();
  } catch (const std::exception& e) {
    result.pass = false;
    result.detail = std::string("exception: ") + e.what();
  }
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (elapsed > budget_seconds) {
    result.pass = false;
    result.detail += (result.detail.empty() ? "" : "; ") + std::string("over time budget of ") +
                     std::to_string(budget_seconds) + "s";
  }
  std::printf("[%s] criterion %d: %s (%s) [%.1fs]\n", result.pass ? "PASS" : "FAIL", number,
              name.c_str(), result.detail.c_str(), elapsed);
  std::fflush(stdout);
  if (!result.pass) ++g_failures;
}

// --------------------------------------------------------------------------
// 1. Analytic gradients of the full objective vs central finite differences.
// --------------------------------------------------------------------------
Criterion gradient_oracle() {
  double worst = 0.0;
  std::string worst_block;
  for (uint64_t seed : {11ULL, 22ULL}) {
    const int V = 8, H = 4, K = 2, m = 2, n_d = 3, n_c = 2;
    Rng rng(seed);
    salience::ModelParams params = salience::init_model_params(V, H, K, m, n_d, n_c, rng);
    testutil::randomize_blocks(params.blocks(), rng, 0.5);
    Matrix X_d = testutil::random_binary(n_d, V, rng);
    Matrix X_c = testutil::random_binary(n_c, V, rng);
    Matrix eps_d(n_d, K), eps_c(n_c, K);
    for (int i = 0; i < n_d; ++i) {
      for (int k = 0; k < K; ++k) eps_d(i, k) = rng.gaussian();
    }
    Vector rho(n_c);
    for (int j = 0; j < n_c; ++j) {
      for (int k = 0; k < K; ++k) eps_c(j, k) = rng.gaussian();
      rho(j) = rng.uniform(0.3, 0.9);
    }
    auto f = [&]() {
      return salience::objective(params, X_d, X_c, rho, eps_d, eps_c, false, nullptr);
    };
    salience::ForwardCache cache;
    salience::objective(params, X_d, X_c, rho, eps_d, eps_c, false, &cache);
    salience::ModelParams grads = salience::gradients(params, X_d, X_c, rho, false, cache);
    auto report =
        testutil::finite_difference_check(params.blocks(), grads.blocks(), f, 1e-5, 1e-3);
    if (report.max_rel_err > worst) {
      worst = report.max_rel_err;
      worst_block = report.worst_block;
    }
  }
  Criterion c;
  c.pass = worst <= 1e-3;
  std::ostringstream os;
  os << "max rel err " << worst << " in " << worst_block << ", tolerance 1e-3, all blocks";
  c.detail = os.str();
  return c;
}

// --------------------------------------------------------------------------
// 2. Closed-form KL vs Monte-Carlo estimation over 1e5 draws, 20 pairs.
// --------------------------------------------------------------------------
Criterion kl_oracle() {
  Rng pair_rng(20260809);
  double worst_rel = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const int K = 2;
    Vector mu(K), log_var(K);
    for (int k = 0; k < K; ++k) {
      const double sign = pair_rng.uniform(0.0, 1.0) < 0.5 ? -1.0 : 1.0;
      mu(k) = sign * pair_rng.uniform(1.2, 2.0);
      log_var(k) = pair_rng.uniform(-0.4, 0.4);
    }
    vae::EncodeResult enc;
    enc.mu = mu;
    enc.log_var = log_var;
    vae::DecodeResult dec;
    dec.x_recon = Vector::Constant(2, 0.5);
    const double closed = vae::elbo(Vector::Zero(2), enc, dec).kl;

    Rng mc(1000 + trial);
    const int pairs = 50000;  // antithetic pairs: 1e5 draws total
    double acc = 0.0;
    for (int s = 0; s < pairs; ++s) {
      Vector u(K);
      for (int k = 0; k < K; ++k) u(k) = mc.gaussian();
      for (double sign : {1.0, -1.0}) {
        double lr = 0.0;
        for (int k = 0; k < K; ++k) {
          const double sigma = std::exp(log_var(k) / 2.0);
          const double z = mu(k) + sigma * sign * u(k);
          lr += (-log_var(k) / 2.0 - 0.5 * (z - mu(k)) * (z - mu(k)) / (sigma * sigma)) -
                (-0.5 * z * z);
        }
        acc += lr;
      }
    }
    const double mc_kl = acc / (2.0 * pairs);
    worst_rel = std::max(worst_rel, std::abs(mc_kl - closed) / std::abs(closed));
  }
  Criterion c;
  c.pass = worst_rel <= 0.01;
  std::ostringstream os;
  os << "worst |MC - closed| / closed = " << worst_rel << " over 20 pairs, tolerance 1%";
  c.detail = os.str();
  return c;
}

// --------------------------------------------------------------------------
// 3. Exact ILP solver vs exhaustive enumeration on 200 seeded instances.
// --------------------------------------------------------------------------
phrase::PhraseCandidate accept_phrase(phrase::PhraseKind kind, std::vector<std::string> tokens,
                                      int sentence, double salience) {
  phrase::PhraseCandidate p;
  p.kind = kind;
  p.tokens = std::move(tokens);
  p.doc_id = "d" + std::to_string(sentence % 2);
  p.sentence_index = sentence;
  p.word_count = static_cast<int>(p.tokens.size());
  p.salience = salience;
  return p;
}

double enumerate_optimum(const ilp::IlpInstance& inst) {
  const int n = static_cast<int>(inst.phrases.size());
  double best = 0.0;
  for (uint32_t mask = 0; mask < (1u << n); ++mask) {
    int words = 0;
    std::vector<int> sel;
    for (int i = 0; i < n; ++i) {
      if (mask & (1u << i)) {
        sel.push_back(i);
        words += inst.phrases[i].word_count;
      }
    }
    if (words > inst.word_limit) continue;
    std::map<int, std::pair<bool, bool>> seen;
    for (int id : sel) {
      auto& f = seen[inst.sentence_group[id]];
      if (inst.phrases[id].kind == phrase::PhraseKind::NounPhrase) f.first = true;
      else f.second = true;
    }
    bool ok = true;
    for (const auto& [g, f] : seen) {
      if (!f.first && !inst.group_nps[g].empty()) ok = false;
      if (!f.second && !inst.group_vps[g].empty()) ok = false;
    }
    if (!ok) continue;
    best = std::max(best, inst.objective_of(sel));
  }
  return best;
}

Criterion ilp_oracle() {
  const std::vector<std::string> pool = {"sony", "price", "headset", "fell", "game",
                                         "virtual", "reality", "market", "crash", "launch"};
  Rng rng(333);
  int checked = 0;
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<phrase::PhraseCandidate> cand;
    const int n_sentences = 2 + static_cast<int>(rng.next_u64() % 3);
    for (int s = 0; s < n_sentences && cand.size() < 12; ++s) {
      const int nps = 1 + static_cast<int>(rng.next_u64() % 2);
      const int vps = 1 + static_cast<int>(rng.next_u64() % 2);
      for (int k = 0; k < nps + vps && cand.size() < 12; ++k) {
        std::vector<std::string> tokens;
        const int len = 1 + static_cast<int>(rng.next_u64() % 4);
        for (int t = 0; t < len; ++t) tokens.push_back(pool[rng.next_u64() % pool.size()]);
        cand.push_back(accept_phrase(
            k < nps ? phrase::PhraseKind::NounPhrase : phrase::PhraseKind::VerbPhrase,
            std::move(tokens), s, rng.uniform(0.0, 3.0)));
      }
    }
    auto inst = ilp::build_instance(std::move(cand), 4 + static_cast<int>(rng.next_u64() % 12));
    auto sol = ilp::solve_exact(inst);
    const double reference = enumerate_optimum(inst);
    if (sol.status == ilp::SolveStatus::Infeasible) {
      if (reference != 0.0) return {false, "infeasible verdict disagrees with enumeration"};
      continue;
    }
    if (std::abs(sol.objective - reference) > 1e-9) {
      return {false, "objective mismatch at trial " + std::to_string(trial)};
    }
    auto audit = ilp::audit(inst, sol);
    if (!audit.ok) return {false, "constraint audit failed at trial " + std::to_string(trial)};
    ++checked;
  }
  return {true, "exact = enumeration on 200 seeded instances (<= 12 phrases), audits clean"};
}

// --------------------------------------------------------------------------
// 4. ROUGE vs hand fixtures and a brute-force unit enumerator.
// --------------------------------------------------------------------------
using UnitCounts = std::map<std::vector<std::string>, int>;

UnitCounts enum_ngrams(const std::vector<std::string>& t, int n) {
  UnitCounts out;
  for (size_t i = 0; i + n <= t.size(); ++i) {
    out[std::vector<std::string>(t.begin() + i, t.begin() + i + n)]++;
  }
  return out;
}

UnitCounts enum_su4(const std::vector<std::string>& t) {
  UnitCounts out;
  for (size_t i = 0; i < t.size(); ++i) {
    out[{"<u>", t[i]}]++;
    for (size_t j = i + 1; j < t.size() && j - i - 1 <= 4; ++j) out[{t[i], t[j]}]++;
  }
  return out;
}

Criterion rouge_oracle() {
  // Hand-counted fixture: candidate "the cat sat" vs reference "the cat".
  auto fixed = rouge::rouge_n({"the", "cat", "sat"}, {{"the", "cat"}}, 1, false);
  if (std::abs(fixed.precision - 2.0 / 3.0) > 1e-12 || std::abs(fixed.recall - 1.0) > 1e-12 ||
      std::abs(fixed.f - 0.8) > 1e-12) {
    return {false, "unigram hand fixture (p=2/3, r=1, f=0.8) mismatch"};
  }
  auto su = rouge::rouge_su4({"a", "b", "c"}, {{"a", "c", "b"}}, false);
  if (std::abs(su.precision - 5.0 / 6.0) > 1e-12) {
    return {false, "skip-bigram hand fixture mismatch"};
  }
  auto ident = rouge::rouge_su4({"x"}, {{"x"}}, false);
  if (ident.f != 1.0) return {false, "length-1 SU4 identity mismatch"};

  const std::vector<std::string> pool = {"a", "b", "c", "d", "e", "f"};
  Rng rng(444);
  auto random_text = [&](int max_len) {
    std::vector<std::string> t;
    const int len = 1 + static_cast<int>(rng.next_u64() % max_len);
    for (int i = 0; i < len; ++i) t.push_back(pool[rng.next_u64() % pool.size()]);
    return t;
  };
  auto score_of = [](const UnitCounts& cand, const std::vector<UnitCounts>& refs) {
    long overlap = 0, cand_total = 0, ref_total = 0, cand_sum = 0;
    for (const auto& [u, n] : cand) cand_sum += n;
    for (const auto& ref : refs) {
      for (const auto& [u, n] : cand) {
        auto it = ref.find(u);
        if (it != ref.end()) overlap += std::min(n, it->second);
      }
      cand_total += cand_sum;
      for (const auto& [u, n] : ref) ref_total += n;
    }
    const double p = cand_total > 0 ? static_cast<double>(overlap) / cand_total : 0.0;
    const double r = ref_total > 0 ? static_cast<double>(overlap) / ref_total : 0.0;
    return std::pair<double, double>(p, r);
  };
  for (int trial = 0; trial < 100; ++trial) {
    auto cand = random_text(12);
    auto ref1 = random_text(12);
    auto ref2 = random_text(10);
    for (int n = 1; n <= 2; ++n) {
      auto impl = rouge::rouge_n(cand, {ref1, ref2}, n, false);
      auto [p, r] = score_of(enum_ngrams(cand, n), {enum_ngrams(ref1, n), enum_ngrams(ref2, n)});
      if (impl.precision != p || impl.recall != r) {
        return {false, "n-gram counts diverge from the enumerator at trial " +
                           std::to_string(trial)};
      }
    }
    auto impl = rouge::rouge_su4(cand, {ref1, ref2}, false);
    auto [p, r] = score_of(enum_su4(cand), {enum_su4(ref1), enum_su4(ref2)});
    if (impl.precision != p || impl.recall != r) {
      return {false, "SU4 counts diverge from the enumerator at trial " + std::to_string(trial)};
    }
  }
  return {true, "hand fixtures exact; counts equal the enumerator on 100 random pairs"};
}

// --------------------------------------------------------------------------
// 5. Comments echoing a planted aspect improve its term and sentence ranks.
// --------------------------------------------------------------------------
Criterion comment_enhancement() {
  testutil::EchoCorpus e = testutil::make_echo_corpus();
  int passes = 0;
  for (uint64_t seed = 1; seed <= 10; ++seed) {
    salience::TrainConfig cfg;
    cfg.aspects = 2;
    cfg.hidden = 64;
    cfg.latent = 16;
    cfg.epochs = 300;
    cfg.seed = seed;
    cfg.learning_rate = 0.001;
    auto [m_with, r_with] = salience::train(e.X_d, e.X_c, cfg);
    auto [m_wo, r_wo] = salience::train(e.X_d, Matrix::Zero(0, e.X_d.cols()), cfg);
    const bool terms_up = testutil::mean_term_rank(m_with.S_x_final, e.b_cols) <
                          testutil::mean_term_rank(m_wo.S_x_final, e.b_cols);
    const bool sentences_ok = testutil::mean_score_rank(r_with.scores, e.b_rows) <=
                              testutil::mean_score_rank(r_wo.scores, e.b_rows);
    if (terms_up && sentences_ok) ++passes;
  }
  Criterion c;
  c.pass = passes >= 8;
  c.detail = std::to_string(passes) + "/10 paired seeds, threshold 8, d_h=64 K=16";
  return c;
}

// --------------------------------------------------------------------------
// 6. --no-comments output is byte-identical to the comment-stripped copy.
// --------------------------------------------------------------------------
Criterion ablation_parity() {
  testutil::TempDir a("accept_abl_a"), b("accept_abl_b");
  fs::create_directories(a.path() / "techfix");
  fs::create_directories(b.path() / "techfix");
  fs::copy(kFixtures / "techfix", a.path() / "techfix", fs::copy_options::recursive);
  fs::copy(kFixtures / "techfix", b.path() / "techfix", fs::copy_options::recursive);
  fs::remove(b.path() / "techfix" / "comments.xml");

  pipeline::RunConfig config;
  config.hidden = 64;
  config.latent = 16;
  config.epochs = 200;
  config.seed = 13;
  pipeline::RunConfig flagged = config;
  flagged.no_comments = true;

  auto lhs = pipeline::run_summarize(a.path() / "techfix", flagged);
  auto rhs = pipeline::run_summarize(b.path() / "techfix", config);
  const bool same = lhs.summary == rhs.summary && lhs.sidecar_json == rhs.sidecar_json &&
                    lhs.salience_json == rhs.salience_json &&
                    lhs.weights_json == rhs.weights_json;
  return {same, same ? "summary, sidecar, salience and weight dumps byte-identical"
                     : "outputs differ between the flag and the stripped copy"};
}

// --------------------------------------------------------------------------
// 7. Symmetry, rerun determinism, weight-range assertions.
// --------------------------------------------------------------------------
Criterion symmetry_determinism() {
  testutil::EchoCorpus e = testutil::make_echo_corpus();
  salience::TrainConfig cfg;
  cfg.aspects = 2;
  cfg.hidden = 24;
  cfg.latent = 8;
  cfg.epochs = 80;
  cfg.seed = 17;
  cfg.learning_rate = 0.005;

  Matrix X = e.X_d;
  X.row(7) = X.row(3);  // duplicated sentence
  auto [m1, r1] = salience::train(X, e.X_c, cfg);
  const double rel = std::abs(r1.scores(3) - r1.scores(7)) /
                     std::max({std::abs(r1.scores(3)), std::abs(r1.scores(7)), 1e-12});
  if (rel >= 1e-3) {
    return {false, "duplicated-sentence salience spread " + std::to_string(rel)};
  }

  auto [m2, r2] = salience::train(X, e.X_c, cfg);
  if (r1.scores != r2.scores || m1.A_d_final != m2.A_d_final ||
      m1.bound_history != m2.bound_history) {
    return {false, "rerun with the same seed is not byte-identical"};
  }

  Rng rng(99);
  for (int trial = 0; trial < 10; ++trial) {
    Matrix X_d = testutil::random_binary(6, 12, rng);
    Matrix X_c = testutil::random_binary(5, 12, rng);
    Matrix Z_d(6, 3), Z_c(5, 3);
    for (Eigen::Index i = 0; i < Z_d.size(); ++i) Z_d(i) = rng.uniform(-2, 2);
    for (Eigen::Index i = 0; i < Z_c.size(); ++i) Z_c(i) = rng.uniform(-2, 2);
    auto w = weights::compute_comment_weights(X_d, X_c, Z_d, Z_c, 0.2);
    for (Eigen::Index j = 0; j < w.rho.size(); ++j) {
      if (!(w.rho(j) > 0.0 && w.rho(j) < 1.0 && w.rho_x(j) >= 0.5 && w.rho_x(j) < 1.0)) {
        return {false, "comment weight out of range"};
      }
    }
  }
  return {true, "duplicate parity < 1e-3, byte-identical rerun, rho ranges hold"};
}

// --------------------------------------------------------------------------
// 8. Bundled fixture topic: train, summarize within limit, evaluate.
// --------------------------------------------------------------------------
Criterion desk_run() {
  pipeline::RunConfig config;
  config.hidden = 64;
  config.latent = 16;
  config.epochs = 300;
  config.seed = 7;
  config.word_limit = 100;

  auto report = pipeline::run_ingest(kFixtures / "techfix", config);
  if (report.documents != 2 || report.news_sentences != 30) {
    return {false, "fixture shape unexpected"};
  }
  auto out = pipeline::run_summarize(kFixtures / "techfix", config);
  const int words = static_cast<int>(text::tokenize(out.summary).size());
  if (words > 100 || words == 0) {
    return {false, "summary word count " + std::to_string(words)};
  }
  if (!out.audit.ok) return {false, "constraint audit failed"};

  corpus::Topic topic = corpus::load_topic(kFixtures / "techfix");
  auto scores = rouge::evaluate_topic(out.summary, topic, {});
  if (scores.size() != 3) return {false, "expected three metrics"};
  for (const auto& s : scores) {
    if (!(s.f > 0.0 && s.f <= 1.0)) return {false, "degenerate ROUGE score"};
  }
  std::ostringstream os;
  os << words << " words, R-1 f=" << scores[0].f << ", R-2 f=" << scores[1].f
     << ", R-SU4 f=" << scores[2].f << ", vs 2 references";
  return {true, os.str()};
}

}  // namespace

int main() {
  run(1, "gradient oracle, full objective", 10.0, gradient_oracle);
  run(2, "closed-form KL vs Monte-Carlo", 5.0, kl_oracle);
  run(3, "exact ILP vs exhaustive enumeration", 60.0, ilp_oracle);
  run(4, "ROUGE vs hand counts and enumerator", 10.0, rouge_oracle);
  run(5, "comment enhancement direction", 300.0, comment_enhancement);
  run(6, "comment ablation parity", 120.0, ablation_parity);
  run(7, "symmetry and determinism", 120.0, symmetry_determinism);
  run(8, "end-to-end desk run on the bundled fixture", 120.0, desk_run);
  if (g_failures > 0) {
    std::printf("%d criterion(s) failed\n", g_failures);
    return 1;
  }
  std::printf("all criteria passed\n");
  return 0;
}
