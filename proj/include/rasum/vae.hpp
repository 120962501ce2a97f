#pragma once

#include "rasum/common.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace rasum::vae {

/// Named view over one parameter tensor's storage; Adam, finite differences
/// and checkpointing all operate on these flat views.
struct ParamBlock {
  std::string name;
  double* data;
  Eigen::Index size;
};

struct VaeParams {
  Matrix W_xh;     // vocab x hidden
  RowVector b_xh;  // hidden
  Matrix W_hmu;    // hidden x latent
  RowVector b_hmu;
  Matrix W_hsig;   // hidden x latent (log-variance head)
  RowVector b_hsig;
  Matrix W_zh;     // latent x hidden
  RowVector b_zh;
  Matrix W_hx;     // hidden x vocab
  RowVector b_hx;

  int vocab_size() const { return static_cast<int>(W_xh.rows()); }
  int hidden_size() const { return static_cast<int>(W_xh.cols()); }
  int latent_size() const { return static_cast<int>(W_hmu.cols()); }

  std::vector<ParamBlock> blocks();
  /// Same-shape container with all entries zero; gradient accumulator.
  VaeParams zeros_like() const;
};

/// Uniform Glorot-range initialization, zero biases.
VaeParams init_vae_params(int vocab, int hidden, int latent, Rng& rng);

/// Uniform in +-sqrt(6 / (rows + cols)).
Matrix glorot_uniform(Eigen::Index rows, Eigen::Index cols, Rng& rng);

struct EncodeResult {
  Vector h_enc;
  Vector mu;
  Vector log_var;
  Vector eps;
  Vector z;
};

struct DecodeResult {
  Vector h_dec;
  Vector x_recon;  // sigmoid output, entries in (0,1)
};

/// eps == nullptr selects deterministic-mean mode (z = mu).
EncodeResult encode(const Vector& x, const VaeParams& params, const Vector* eps);
DecodeResult decode(const Vector& z, const VaeParams& params);

/// Row-per-sentence batch forms used by training.
struct EncodeBatch {
  Matrix Hpre, H;      // encoder pre-activation and relu output
  Matrix Mu, LogVar;
  Matrix Eps, Z;
};
struct DecodeBatch {
  Matrix Dpre, Hdec;   // decoder pre-activation and relu output
  Matrix Logits, Xr;
};

/// eps == nullptr selects deterministic-mean mode for every row.
EncodeBatch encode_batch(const Matrix& X, const VaeParams& params, const Matrix* eps);
DecodeBatch decode_batch(const Matrix& Z, const VaeParams& params);

struct ElboParts {
  double recon;
  double kl;
  double bound;  // recon - kl
};

/// Bernoulli reconstruction term + closed-form Gaussian KL. x_recon is
/// clamped to [1e-7, 1 - 1e-7] before the logs.
ElboParts elbo(const Vector& x, const EncodeResult& enc, const DecodeResult& dec);

struct ElboBatch {
  Vector recon, kl, bound;
};
ElboBatch elbo_batch(const Matrix& X, const EncodeBatch& enc, const DecodeBatch& dec);

/// sum(news_bounds) + sum(rho_j * comment_bounds_j).
double weighted_bound(const Vector& news_bounds, const Vector& comment_bounds, const Vector& rho);

/// Backprop of sum_i w_i * (kl_i - recon_i) through decoder + reparameterized
/// encoder, accumulating into grads. extra_z_grad / extra_h_grad inject
/// additional dJ/dZ and dJ/dH contributions from downstream consumers of the
/// latent codes and encoder hidden states (pass nullptr when unused).
void backprop_sentence_batch(const Matrix& X, const EncodeBatch& enc, const DecodeBatch& dec,
                             const Vector& weights, const VaeParams& params,
                             const Matrix* extra_z_grad, const Matrix* extra_h_grad,
                             VaeParams& grads);

/// Gradient of -weighted_bound w.r.t. all VAE parameters. Pass 0-row comment
/// matrices when there are no comments.
VaeParams backward(const Matrix& X_news, const EncodeBatch& enc_news, const DecodeBatch& dec_news,
                   const Matrix& X_com, const EncodeBatch& enc_com, const DecodeBatch& dec_com,
                   const Vector& rho, const VaeParams& params);

struct AdamConfig {
  double learning_rate = 0.001;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

struct AdamState {
  AdamConfig config;
  long step = 0;
  std::vector<Vector> m, v;  // aligned with the block list used at init

  static AdamState init(const std::vector<ParamBlock>& blocks, const AdamConfig& config);
};

/// Standard bias-corrected Adam update, in place. Throws NumericError on
/// non-finite gradients.
void adam_step(std::vector<ParamBlock> params, const std::vector<ParamBlock>& grads,
               AdamState& state);

/// Versioned binary container of VaeParams + AdamState keyed by a vocabulary
/// hash; load refuses a mismatched vocabulary. Layout documented in
/// docs/format.md.
void save_checkpoint(const std::filesystem::path& path, VaeParams& params, const AdamState& adam,
                     uint64_t vocab_hash);

struct Checkpoint {
  VaeParams params;
  AdamState adam;
  uint64_t vocab_hash = 0;
};
Checkpoint load_checkpoint(const std::filesystem::path& path, uint64_t expected_vocab_hash);

}  // namespace rasum::vae
