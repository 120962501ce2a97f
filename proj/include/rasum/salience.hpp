#pragma once

#include "rasum/common.hpp"
#include "rasum/corpus.hpp"
#include "rasum/vae.hpp"
#include "rasum/weights.hpp"

#include <optional>
#include <string>
#include <vector>

namespace rasum::salience {

/// Hidden-space alignment blend weights (hidden x hidden).
struct AlignParams {
  Matrix W_dh, W_ch, W_hh;
};

/// Term-space alignment blend weights (vocab x vocab).
struct OutputAlignParams {
  Matrix W_dx, W_cx, W_xx;
};

/// Every trainable tensor of the joint objective.
struct ModelParams {
  vae::VaeParams vae;
  AlignParams align;
  OutputAlignParams out_align;
  Matrix S_z;  // aspects x latent
  Matrix A_d;  // news reconstruction coefficients (n_d x aspects)
  Matrix A_c;  // comment reconstruction coefficients (n_c x aspects)

  std::vector<vae::ParamBlock> blocks();
  ModelParams zeros_like() const;
};

/// Initialization order is fixed: VAE, alignment, output alignment, S_z, A_d,
/// A_c. A_c comes last so comment-free and zero-weight runs share every other
/// tensor bit for bit.
ModelParams init_model_params(int vocab, int hidden, int latent, int aspects, int n_news,
                              int n_comments, Rng& rng);

/// Aspect rows pushed through the decoder layers (shared VAE parameters).
struct AspectBank {
  Matrix S_pre;  // decoder pre-activation
  Matrix S_h;    // relu output, aspects x hidden
  Matrix S_x;    // sigmoid output, aspects x vocab
};
AspectBank decode_aspects(const Matrix& S_z, const vae::VaeParams& params);

/// Dot-product attention of the query bank against news and comment
/// memories. Comment columns are gated by rho; with renormalize the gated
/// rows are rescaled to sum to one (zero-mass rows stay zero).
struct AttentionForward {
  Matrix scores_d, attn_d, C_d;
  Matrix scores_c, attn_c, weighted_c, attn_c_adj, C_c;
  Vector row_sums_c;
};
AttentionForward attention_forward(const Matrix& S, const Matrix& M_d, const Matrix& M_c,
                                   const Vector& rho, bool renormalize);

struct AttentionGrads {
  Matrix g_S;
  Matrix g_M_d, g_M_c;  // populated only when memory grads are requested
};
AttentionGrads attention_backward(const AttentionForward& fwd, const Matrix& S, const Matrix& M_d,
                                  const Matrix& M_c, const Vector& rho, bool renormalize,
                                  const Matrix& g_C_d, const Matrix& g_C_c,
                                  bool need_memory_grads);

/// Hidden-space alignment update: s~ = tanh(C_d W_dh + C_c W_ch + S_h W_hh).
struct HiddenAlignResult {
  AttentionForward attn;
  Matrix pre;
  Matrix S_h_updated;
};
HiddenAlignResult hidden_align(const Matrix& S_h, const Matrix& H_d, const Matrix& H_c,
                               const Vector& rho, const AlignParams& params, bool renormalize);

/// Term-space alignment update mirroring hidden_align, squashed back into
/// (0,1): s~ = sigmoid(tanh(C_d W_dx + C_c W_cx + S_x W_xx)).
struct OutputAlignResult {
  AttentionForward attn;
  Matrix pre;
  Matrix T;  // tanh output
  Matrix S_x_updated;
};
OutputAlignResult output_align(const Matrix& S_x, const Matrix& X_d, const Matrix& X_c,
                               const Vector& rho, const OutputAlignParams& params,
                               bool renormalize);

/// Joint reconstruction loss over latent, hidden and term spaces; comment
/// rows are weighted by rho.
double reconstruction_loss(const Matrix& Z_d, const Matrix& Z_c, const Matrix& H_d,
                           const Matrix& H_c, const Matrix& X_d, const Matrix& X_c,
                           const Matrix& A_d, const Matrix& A_c, const Matrix& S_z,
                           const Matrix& S_h_bank, const Matrix& S_x_bank, const Vector& rho);

struct TrainConfig {
  int aspects = 5;
  int hidden = 500;
  int latent = 100;
  double lambda_p = 0.2;
  double learning_rate = 0.001;
  int epochs = 300;
  uint64_t seed = 42;
  bool literal_alignment = false;  // keep rho-gated attention unnormalized
  bool cosine_weights = false;
  int rho_refresh_epochs = 10;
};

/// All forward intermediates of one full-objective evaluation.
struct ForwardCache {
  vae::EncodeBatch enc_d, enc_c;
  vae::DecodeBatch dec_d, dec_c;
  vae::ElboBatch elbo_d, elbo_c;
  Matrix S_pre, S_h;
  HiddenAlignResult halign;
  Matrix Q, S_x0;  // output bank from the updated hidden aspects
  OutputAlignResult oalign;
  Matrix Rz_d, Rh_d, Rx_d, Rz_c, Rh_c, Rx_c;  // reconstruction residuals
  double weighted_elbo = 0.0;
  double recon_loss = 0.0;
  double objective = 0.0;
};

/// J = -(weighted variational bound) + reconstruction loss. rho and the eps
/// draws are inputs, so the function is deterministic and differentiable in
/// the parameters alone.
double objective(const ModelParams& params, const Matrix& X_d, const Matrix& X_c,
                 const Vector& rho, const Matrix& eps_d, const Matrix& eps_c,
                 bool literal_alignment, ForwardCache* cache);

/// Analytic gradient of objective() w.r.t. every parameter block.
ModelParams gradients(const ModelParams& params, const Matrix& X_d, const Matrix& X_c,
                      const Vector& rho, bool literal_alignment, const ForwardCache& cache);

struct LatentModel {
  ModelParams params;
  TrainConfig config;
  std::vector<double> bound_history;  // weighted bound per epoch
  Matrix A_d_final;                   // deterministic-mean refit
  Matrix S_h_final, S_x_final;        // post-alignment banks at the final state
  vae::AdamState vae_adam;            // optimizer slices for the VAE blocks
};

struct SalienceResult {
  Vector scores;  // L2 norm of each row of the refit A_d
  weights::CommentWeights weights;
  std::vector<std::vector<std::string>> aspect_terms;  // top 10 per aspect
};

/// Full training loop: Adam on the joint objective with one eps draw per
/// sentence per epoch and periodic rho refreshes. Scores come from a
/// deterministic-mean closed-form refit of A_d at the end. rho_override (for
/// ablations) freezes rho for the whole run. vocab may be null; it only
/// feeds aspect_terms.
std::pair<LatentModel, SalienceResult> train(const Matrix& X_d, const Matrix& X_c,
                                             const TrainConfig& config,
                                             const corpus::Vocabulary* vocab = nullptr,
                                             const Vector* rho_override = nullptr);

/// Per-aspect top-k vocabulary terms by bank value, ties lexicographic.
std::vector<std::vector<std::string>> top_terms(const Matrix& S_x,
                                                const corpus::Vocabulary& vocab, int k);

/// Exact minimizer of the reconstruction loss w.r.t. the coefficient matrix
/// for fixed banks (row-separable ridge least squares).
Matrix refit_coefficients(const Matrix& Z, const Matrix& H, const Matrix& X, const Matrix& S_z,
                          const Matrix& S_h_bank, const Matrix& S_x_bank);

}  // namespace rasum::salience
