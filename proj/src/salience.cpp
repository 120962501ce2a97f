#include "rasum/salience.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace rasum::salience {

namespace {

template <typename T>
vae::ParamBlock block(const char* name, T& m) {
  return {name, m.data(), m.size()};
}

Matrix row_softmax(const Matrix& scores) {
  Matrix out(scores.rows(), scores.cols());
  for (Eigen::Index i = 0; i < scores.rows(); ++i) {
    if (scores.cols() == 0) continue;
    const double mx = scores.row(i).maxCoeff();
    Eigen::ArrayXd e = (scores.row(i).array() - mx).exp();
    out.row(i) = (e / e.sum()).matrix();
  }
  return out;
}

// dL/dscores for a = row_softmax(scores): a .* (g - <g,a>).
Matrix row_softmax_backward(const Matrix& attn, const Matrix& g_attn) {
  Matrix out(attn.rows(), attn.cols());
  for (Eigen::Index i = 0; i < attn.rows(); ++i) {
    const double dot = attn.row(i).dot(g_attn.row(i));
    out.row(i) = (attn.row(i).array() * (g_attn.row(i).array() - dot)).matrix();
  }
  return out;
}

Matrix tanh_mat(const Matrix& m) { return m.array().tanh().matrix(); }

Matrix sigmoid_mat(const Matrix& m) {
  return m.unaryExpr([](double v) { return sigmoid(v); });
}

double weighted_sq_norm(const Matrix& resid, const Vector* row_weights) {
  if (row_weights == nullptr) return resid.squaredNorm();
  double total = 0.0;
  for (Eigen::Index i = 0; i < resid.rows(); ++i) {
    total += (*row_weights)(i)*resid.row(i).squaredNorm();
  }
  return total;
}

}  // namespace

std::vector<vae::ParamBlock> ModelParams::blocks() {
  std::vector<vae::ParamBlock> out = vae.blocks();
  out.push_back(block("W_dh", align.W_dh));
  out.push_back(block("W_ch", align.W_ch));
  out.push_back(block("W_hh", align.W_hh));
  out.push_back(block("W_dx", out_align.W_dx));
  out.push_back(block("W_cx", out_align.W_cx));
  out.push_back(block("W_xx", out_align.W_xx));
  out.push_back(block("S_z", S_z));
  out.push_back(block("A_d", A_d));
  out.push_back(block("A_c", A_c));
  return out;
}

ModelParams ModelParams::zeros_like() const {
  ModelParams z;
  z.vae = vae.zeros_like();
  z.align.W_dh = Matrix::Zero(align.W_dh.rows(), align.W_dh.cols());
  z.align.W_ch = Matrix::Zero(align.W_ch.rows(), align.W_ch.cols());
  z.align.W_hh = Matrix::Zero(align.W_hh.rows(), align.W_hh.cols());
  z.out_align.W_dx = Matrix::Zero(out_align.W_dx.rows(), out_align.W_dx.cols());
  z.out_align.W_cx = Matrix::Zero(out_align.W_cx.rows(), out_align.W_cx.cols());
  z.out_align.W_xx = Matrix::Zero(out_align.W_xx.rows(), out_align.W_xx.cols());
  z.S_z = Matrix::Zero(S_z.rows(), S_z.cols());
  z.A_d = Matrix::Zero(A_d.rows(), A_d.cols());
  z.A_c = Matrix::Zero(A_c.rows(), A_c.cols());
  return z;
}

ModelParams init_model_params(int vocab, int hidden, int latent, int aspects, int n_news,
                              int n_comments, Rng& rng) {
  ModelParams p;
  p.vae = vae::init_vae_params(vocab, hidden, latent, rng);
  p.align.W_dh = vae::glorot_uniform(hidden, hidden, rng);
  p.align.W_ch = vae::glorot_uniform(hidden, hidden, rng);
  p.align.W_hh = vae::glorot_uniform(hidden, hidden, rng);
  p.out_align.W_dx = vae::glorot_uniform(vocab, vocab, rng);
  p.out_align.W_cx = vae::glorot_uniform(vocab, vocab, rng);
  p.out_align.W_xx = vae::glorot_uniform(vocab, vocab, rng);
  p.S_z = vae::glorot_uniform(aspects, latent, rng);
  p.A_d = vae::glorot_uniform(n_news, aspects, rng);
  p.A_c = vae::glorot_uniform(n_comments, aspects, rng);
  return p;
}

AspectBank decode_aspects(const Matrix& S_z, const vae::VaeParams& params) {
  if (!S_z.allFinite()) throw NumericError("decode_aspects: non-finite aspect vectors");
  AspectBank bank;
  bank.S_pre = (S_z * params.W_zh).rowwise() + params.b_zh;
  bank.S_h = bank.S_pre.cwiseMax(0.0);
  bank.S_x = sigmoid_mat((bank.S_h * params.W_hx).rowwise() + params.b_hx);
  return bank;
}

AttentionForward attention_forward(const Matrix& S, const Matrix& M_d, const Matrix& M_c,
                                   const Vector& rho, bool renormalize) {
  if (M_d.rows() == 0) throw InvalidInputError("attention: empty news memory");
  if (M_c.rows() != rho.size()) {
    throw InvalidInputError("attention: comment memory rows do not match rho");
  }
  AttentionForward f;
  f.scores_d = S * M_d.transpose();
  f.attn_d = row_softmax(f.scores_d);
  f.C_d = f.attn_d * M_d;

  f.scores_c = S * M_c.transpose();
  f.attn_c = row_softmax(f.scores_c);
  f.weighted_c = f.attn_c * rho.asDiagonal();
  if (renormalize) {
    f.row_sums_c = f.weighted_c.rowwise().sum();
    f.attn_c_adj = Matrix::Zero(f.weighted_c.rows(), f.weighted_c.cols());
    for (Eigen::Index i = 0; i < f.weighted_c.rows(); ++i) {
      if (f.row_sums_c(i) > 0.0) f.attn_c_adj.row(i) = f.weighted_c.row(i) / f.row_sums_c(i);
    }
  } else {
    f.row_sums_c = Vector::Ones(f.weighted_c.rows());
    f.attn_c_adj = f.weighted_c;
  }
  f.C_c = f.attn_c_adj * M_c;
  return f;
}

AttentionGrads attention_backward(const AttentionForward& fwd, const Matrix& S, const Matrix& M_d,
                                  const Matrix& M_c, const Vector& rho, bool renormalize,
                                  const Matrix& g_C_d, const Matrix& g_C_c,
                                  bool need_memory_grads) {
  AttentionGrads g;
  g.g_S = Matrix::Zero(S.rows(), S.cols());
  if (need_memory_grads) {
    g.g_M_d = Matrix::Zero(M_d.rows(), M_d.cols());
    g.g_M_c = Matrix::Zero(M_c.rows(), M_c.cols());
  }

  Matrix g_attn_d = g_C_d * M_d.transpose();
  if (need_memory_grads) g.g_M_d += fwd.attn_d.transpose() * g_C_d;
  Matrix g_scores_d = row_softmax_backward(fwd.attn_d, g_attn_d);
  g.g_S += g_scores_d * M_d;
  if (need_memory_grads) g.g_M_d += g_scores_d.transpose() * S;

  if (M_c.rows() > 0) {
    Matrix g_adj = g_C_c * M_c.transpose();
    if (need_memory_grads) g.g_M_c += fwd.attn_c_adj.transpose() * g_C_c;
    Matrix g_weighted;
    if (renormalize) {
      g_weighted = Matrix::Zero(g_adj.rows(), g_adj.cols());
      for (Eigen::Index i = 0; i < g_adj.rows(); ++i) {
        if (fwd.row_sums_c(i) > 0.0) {
          const double dot = g_adj.row(i).dot(fwd.attn_c_adj.row(i));
          g_weighted.row(i) =
              (g_adj.row(i) - Matrix::Constant(1, g_adj.cols(), dot)) / fwd.row_sums_c(i);
        }
      }
    } else {
      g_weighted = g_adj;
    }
    Matrix g_attn_c = g_weighted * rho.asDiagonal();
    Matrix g_scores_c = row_softmax_backward(fwd.attn_c, g_attn_c);
    g.g_S += g_scores_c * M_c;
    if (need_memory_grads) g.g_M_c += g_scores_c.transpose() * S;
  }
  return g;
}

HiddenAlignResult hidden_align(const Matrix& S_h, const Matrix& H_d, const Matrix& H_c,
                               const Vector& rho, const AlignParams& params, bool renormalize) {
  HiddenAlignResult r;
  r.attn = attention_forward(S_h, H_d, H_c, rho, renormalize);
  r.pre = r.attn.C_d * params.W_dh + r.attn.C_c * params.W_ch + S_h * params.W_hh;
  r.S_h_updated = tanh_mat(r.pre);
  return r;
}

OutputAlignResult output_align(const Matrix& S_x, const Matrix& X_d, const Matrix& X_c,
                               const Vector& rho, const OutputAlignParams& params,
                               bool renormalize) {
  OutputAlignResult r;
  r.attn = attention_forward(S_x, X_d, X_c, rho, renormalize);
  r.pre = r.attn.C_d * params.W_dx + r.attn.C_c * params.W_cx + S_x * params.W_xx;
  r.T = tanh_mat(r.pre);
  r.S_x_updated = sigmoid_mat(r.T);
  return r;
}

double reconstruction_loss(const Matrix& Z_d, const Matrix& Z_c, const Matrix& H_d,
                           const Matrix& H_c, const Matrix& X_d, const Matrix& X_c,
                           const Matrix& A_d, const Matrix& A_c, const Matrix& S_z,
                           const Matrix& S_h_bank, const Matrix& S_x_bank, const Vector& rho) {
  if (A_d.rows() != Z_d.rows() || A_c.rows() != Z_c.rows() || rho.size() != Z_c.rows() ||
      A_d.cols() != S_z.rows() || S_z.cols() != Z_d.cols() || S_h_bank.cols() != H_d.cols() ||
      S_x_bank.cols() != X_d.cols()) {
    throw InvalidInputError("reconstruction_loss: inconsistent shapes");
  }
  double loss = weighted_sq_norm(Z_d - A_d * S_z, nullptr) +
                weighted_sq_norm(H_d - A_d * S_h_bank, nullptr) +
                weighted_sq_norm(X_d - A_d * S_x_bank, nullptr);
  if (Z_c.rows() > 0) {
    loss += weighted_sq_norm(Z_c - A_c * S_z, &rho) +
            weighted_sq_norm(H_c - A_c * S_h_bank, &rho) +
            weighted_sq_norm(X_c - A_c * S_x_bank, &rho);
  }
  return loss;
}

double objective(const ModelParams& params, const Matrix& X_d, const Matrix& X_c_in,
                 const Vector& rho, const Matrix& eps_d, const Matrix& eps_c,
                 bool literal_alignment, ForwardCache* cache) {
  ForwardCache local;
  ForwardCache& c = cache != nullptr ? *cache : local;
  const bool renorm = !literal_alignment;
  // Accept an empty comment matrix of any width.
  const Matrix empty_c = Matrix::Zero(0, X_d.cols());
  const Matrix& X_c = X_c_in.rows() > 0 ? X_c_in : empty_c;

  c.enc_d = vae::encode_batch(X_d, params.vae, &eps_d);
  c.dec_d = vae::decode_batch(c.enc_d.Z, params.vae);
  c.elbo_d = vae::elbo_batch(X_d, c.enc_d, c.dec_d);
  c.enc_c = vae::encode_batch(X_c, params.vae, X_c.rows() > 0 ? &eps_c : nullptr);
  c.dec_c = vae::decode_batch(c.enc_c.Z, params.vae);
  c.elbo_c = vae::elbo_batch(X_c, c.enc_c, c.dec_c);
  c.weighted_elbo = vae::weighted_bound(c.elbo_d.bound, c.elbo_c.bound, rho);

  // Aspect decode through the shared decoder, then both alignment stages.
  c.S_pre = (params.S_z * params.vae.W_zh).rowwise() + params.vae.b_zh;
  c.S_h = c.S_pre.cwiseMax(0.0);
  c.halign = hidden_align(c.S_h, c.enc_d.H, c.enc_c.H, rho, params.align, renorm);
  c.Q = (c.halign.S_h_updated * params.vae.W_hx).rowwise() + params.vae.b_hx;
  c.S_x0 = sigmoid_mat(c.Q);
  c.oalign = output_align(c.S_x0, X_d, X_c, rho, params.out_align, renorm);

  const Matrix& S_h_bank = c.halign.S_h_updated;
  const Matrix& S_x_bank = c.oalign.S_x_updated;
  c.Rz_d = c.enc_d.Z - params.A_d * params.S_z;
  c.Rh_d = c.enc_d.H - params.A_d * S_h_bank;
  c.Rx_d = X_d - params.A_d * S_x_bank;
  c.Rz_c = c.enc_c.Z - params.A_c * params.S_z;
  c.Rh_c = c.enc_c.H - params.A_c * S_h_bank;
  c.Rx_c = X_c - params.A_c * S_x_bank;

  c.recon_loss = c.Rz_d.squaredNorm() + c.Rh_d.squaredNorm() + c.Rx_d.squaredNorm();
  for (Eigen::Index j = 0; j < X_c.rows(); ++j) {
    c.recon_loss += rho(j) * (c.Rz_c.row(j).squaredNorm() + c.Rh_c.row(j).squaredNorm() +
                              c.Rx_c.row(j).squaredNorm());
  }
  c.objective = -c.weighted_elbo + c.recon_loss;
  if (!std::isfinite(c.objective)) throw NumericError("objective is non-finite");
  return c.objective;
}

ModelParams gradients(const ModelParams& params, const Matrix& X_d, const Matrix& X_c_in,
                      const Vector& rho, bool literal_alignment, const ForwardCache& c) {
  ModelParams g = params.zeros_like();
  const bool renorm = !literal_alignment;
  const Matrix empty_c = Matrix::Zero(0, X_d.cols());
  const Matrix& X_c = X_c_in.rows() > 0 ? X_c_in : empty_c;
  const Eigen::Index n_c = X_c.rows();
  const Matrix& S_h_bank = c.halign.S_h_updated;
  const Matrix& S_x_bank = c.oalign.S_x_updated;
  const Matrix rho_Rz_c = rho.asDiagonal() * c.Rz_c;
  const Matrix rho_Rh_c = rho.asDiagonal() * c.Rh_c;
  const Matrix rho_Rx_c = rho.asDiagonal() * c.Rx_c;

  // Reconstruction residual paths.
  g.A_d = -2.0 * (c.Rz_d * params.S_z.transpose() + c.Rh_d * S_h_bank.transpose() +
                  c.Rx_d * S_x_bank.transpose());
  if (n_c > 0) {
    g.A_c = -2.0 * (rho_Rz_c * params.S_z.transpose() + rho_Rh_c * S_h_bank.transpose() +
                    rho_Rx_c * S_x_bank.transpose());
  }
  Matrix g_S_z_direct = -2.0 * params.A_d.transpose() * c.Rz_d;
  Matrix g_S_h_bank = -2.0 * params.A_d.transpose() * c.Rh_d;
  Matrix g_S_x_bank = -2.0 * params.A_d.transpose() * c.Rx_d;
  if (n_c > 0) {
    g_S_z_direct -= 2.0 * params.A_c.transpose() * rho_Rz_c;
    g_S_h_bank -= 2.0 * params.A_c.transpose() * rho_Rh_c;
    g_S_x_bank -= 2.0 * params.A_c.transpose() * rho_Rx_c;
  }
  // The encodings are reconstruction targets as well.
  Matrix g_Z_d_extra = 2.0 * c.Rz_d;
  Matrix g_H_d_extra = 2.0 * c.Rh_d;
  Matrix g_Z_c_extra = 2.0 * rho_Rz_c;
  Matrix g_H_c_extra = 2.0 * rho_Rh_c;

  // Output alignment backward: S_x_bank = sigmoid(tanh(pre)).
  Matrix g_T =
      (g_S_x_bank.array() * S_x_bank.array() * (1.0 - S_x_bank.array())).matrix();
  Matrix g_pre_o = (g_T.array() * (1.0 - c.oalign.T.array().square())).matrix();
  g.out_align.W_dx = c.oalign.attn.C_d.transpose() * g_pre_o;
  g.out_align.W_cx = c.oalign.attn.C_c.transpose() * g_pre_o;
  g.out_align.W_xx = c.S_x0.transpose() * g_pre_o;
  Matrix g_Cp_d = g_pre_o * params.out_align.W_dx.transpose();
  Matrix g_Cp_c = g_pre_o * params.out_align.W_cx.transpose();
  Matrix g_S_x0 = g_pre_o * params.out_align.W_xx.transpose();
  AttentionGrads oa = attention_backward(c.oalign.attn, c.S_x0, X_d, X_c, rho, renorm, g_Cp_d,
                                         g_Cp_c, /*need_memory_grads=*/false);
  g_S_x0 += oa.g_S;

  // Output bank: S_x0 = sigmoid(S_h_updated * W_hx + b_hx).
  Matrix g_Q = (g_S_x0.array() * c.S_x0.array() * (1.0 - c.S_x0.array())).matrix();
  g.vae.W_hx += S_h_bank.transpose() * g_Q;
  g.vae.b_hx += g_Q.colwise().sum();
  Matrix g_S_h_updated = g_S_h_bank + g_Q * params.vae.W_hx.transpose();

  // Hidden alignment backward.
  Matrix g_pre_h = (g_S_h_updated.array() * (1.0 - S_h_bank.array().square())).matrix();
  g.align.W_dh = c.halign.attn.C_d.transpose() * g_pre_h;
  g.align.W_ch = c.halign.attn.C_c.transpose() * g_pre_h;
  g.align.W_hh = c.S_h.transpose() * g_pre_h;
  Matrix g_C_d = g_pre_h * params.align.W_dh.transpose();
  Matrix g_C_c = g_pre_h * params.align.W_ch.transpose();
  Matrix g_S_h = g_pre_h * params.align.W_hh.transpose();
  AttentionGrads ha = attention_backward(c.halign.attn, c.S_h, c.enc_d.H, c.enc_c.H, rho, renorm,
                                         g_C_d, g_C_c, /*need_memory_grads=*/true);
  g_S_h += ha.g_S;
  g_H_d_extra += ha.g_M_d;
  if (n_c > 0) g_H_c_extra += ha.g_M_c;

  // Aspect decode backward (shared decoder first layer).
  Matrix g_S_pre = g_S_h.cwiseProduct((c.S_pre.array() > 0.0).cast<double>().matrix());
  g.vae.W_zh += params.S_z.transpose() * g_S_pre;
  g.vae.b_zh += g_S_pre.colwise().sum();
  g.S_z = g_S_z_direct + g_S_pre * params.vae.W_zh.transpose();

  // Sentence batches: ELBO terms plus injected target/attention gradients.
  vae::backprop_sentence_batch(X_d, c.enc_d, c.dec_d, Vector::Ones(X_d.rows()), params.vae,
                               &g_Z_d_extra, &g_H_d_extra, g.vae);
  if (n_c > 0) {
    vae::backprop_sentence_batch(X_c, c.enc_c, c.dec_c, rho, params.vae, &g_Z_c_extra,
                                 &g_H_c_extra, g.vae);
  }
  return g;
}

Matrix refit_coefficients(const Matrix& Z, const Matrix& H, const Matrix& X, const Matrix& S_z,
                          const Matrix& S_h_bank, const Matrix& S_x_bank) {
  const Eigen::Index m = S_z.rows();
  Matrix gram = S_z * S_z.transpose() + S_h_bank * S_h_bank.transpose() +
                S_x_bank * S_x_bank.transpose() + 1e-9 * Matrix::Identity(m, m);
  Matrix rhs = S_z * Z.transpose() + S_h_bank * H.transpose() + S_x_bank * X.transpose();
  return gram.ldlt().solve(rhs).transpose();
}

namespace {

Matrix draw_eps(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = rng.gaussian();
  }
  return m;
}

}  // namespace

std::pair<LatentModel, SalienceResult> train(const Matrix& X_d, const Matrix& X_c_in,
                                             const TrainConfig& config,
                                             const corpus::Vocabulary* vocab,
                                             const Vector* rho_override) {
  if (X_d.rows() == 0) throw InvalidInputError("train: no news sentences");
  if (X_c_in.rows() > 0 && X_c_in.cols() != X_d.cols()) {
    throw InvalidInputError("train: news/comment vocabulary width mismatch");
  }
  const Matrix empty_c = Matrix::Zero(0, X_d.cols());
  const Matrix& X_c = X_c_in.rows() > 0 ? X_c_in : empty_c;
  const auto n_d = X_d.rows();
  const auto n_c = X_c.rows();
  const int V = static_cast<int>(X_d.cols());

  Rng init_rng(splitmix64(config.seed ^ 0x1a51f5eedULL));
  const uint64_t eps_seed = splitmix64(config.seed ^ 0x0e95d4a77ULL);

  LatentModel model;
  model.config = config;
  model.params = init_model_params(V, config.hidden, config.latent, config.aspects,
                                   static_cast<int>(n_d), static_cast<int>(n_c), init_rng);
  auto adam = vae::AdamState::init(model.params.blocks(),
                                   vae::AdamConfig{.learning_rate = config.learning_rate});

  weights::CommentWeights w;
  w.lambda_p = config.lambda_p;
  if (n_c > 0) {
    w.rho_x = weights::pool_and_squash(
        weights::relation_matrix(X_d, X_c, config.cosine_weights));
    // Before any training the latent space is noise; seed rho_z from rho_x.
    w.rho_z = w.rho_x;
    w.rho = weights::merge_weights(w.rho_z, w.rho_x, config.lambda_p);
  } else {
    w.rho_x = w.rho_z = w.rho = Vector::Zero(0);
  }
  if (rho_override != nullptr) {
    if (rho_override->size() != n_c) {
      throw InvalidInputError("train: rho override length mismatch");
    }
    w.rho = *rho_override;
  }

  auto refresh_rho = [&](weights::CommentWeights& out) {
    Matrix Z_d = vae::encode_batch(X_d, model.params.vae, nullptr).Z;
    Matrix Z_c = vae::encode_batch(X_c, model.params.vae, nullptr).Z;
    out = weights::compute_comment_weights(X_d, X_c, Z_d, Z_c, config.lambda_p,
                                           config.cosine_weights);
  };

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    if (rho_override == nullptr && n_c > 0 && epoch > 0 && config.rho_refresh_epochs > 0 &&
        epoch % config.rho_refresh_epochs == 0) {
      refresh_rho(w);
    }
    // Fresh stream per epoch, news rows first: the news noise sequence does
    // not depend on how many comment sentences follow.
    Rng eps_rng(splitmix64(eps_seed + static_cast<uint64_t>(epoch)));
    Matrix eps_d = draw_eps(eps_rng, n_d, config.latent);
    Matrix eps_c = draw_eps(eps_rng, n_c, config.latent);
    try {
      ForwardCache cache;
      objective(model.params, X_d, X_c, w.rho, eps_d, eps_c, config.literal_alignment, &cache);
      ModelParams grads =
          gradients(model.params, X_d, X_c, w.rho, config.literal_alignment, cache);
      vae::adam_step(model.params.blocks(), grads.blocks(), adam);
      model.bound_history.push_back(cache.weighted_elbo);
    } catch (const NumericError& e) {
      throw NumericError("epoch " + std::to_string(epoch) + ": " + e.what());
    }
  }

  // Deterministic-mean scoring pass.
  if (rho_override == nullptr && n_c > 0) refresh_rho(w);
  vae::EncodeBatch enc_d = vae::encode_batch(X_d, model.params.vae, nullptr);
  vae::EncodeBatch enc_c = vae::encode_batch(X_c, model.params.vae, nullptr);
  Matrix S_pre = (model.params.S_z * model.params.vae.W_zh).rowwise() + model.params.vae.b_zh;
  Matrix S_h = S_pre.cwiseMax(0.0);
  HiddenAlignResult halign = hidden_align(S_h, enc_d.H, enc_c.H, w.rho, model.params.align,
                                          !config.literal_alignment);
  Matrix S_x0 =
      sigmoid_mat((halign.S_h_updated * model.params.vae.W_hx).rowwise() + model.params.vae.b_hx);
  OutputAlignResult oalign = output_align(S_x0, X_d, X_c, w.rho, model.params.out_align,
                                          !config.literal_alignment);
  model.S_h_final = halign.S_h_updated;
  model.S_x_final = oalign.S_x_updated;
  model.A_d_final =
      refit_coefficients(enc_d.Z, enc_d.H, X_d, model.params.S_z, model.S_h_final, model.S_x_final);

  // Checkpointable optimizer state for the shared VAE blocks (they are the
  // leading blocks of the model's block list).
  model.vae_adam = vae::AdamState::init(model.params.vae.blocks(),
                                        vae::AdamConfig{.learning_rate = config.learning_rate});
  model.vae_adam.step = adam.step;
  for (size_t k = 0; k < model.vae_adam.m.size(); ++k) {
    model.vae_adam.m[k] = adam.m[k];
    model.vae_adam.v[k] = adam.v[k];
  }

  SalienceResult result;
  result.scores = model.A_d_final.rowwise().norm();
  result.weights = w;
  if (vocab != nullptr) result.aspect_terms = top_terms(model.S_x_final, *vocab, 10);
  return {std::move(model), std::move(result)};
}

std::vector<std::vector<std::string>> top_terms(const Matrix& S_x,
                                                const corpus::Vocabulary& vocab, int k) {
  if (S_x.cols() != vocab.size()) {
    throw InvalidInputError("top_terms: bank width does not match vocabulary");
  }
  if (k > vocab.size()) {
    log_warning("top_terms: k=" + std::to_string(k) + " clamped to vocabulary size " +
                std::to_string(vocab.size()));
    k = vocab.size();
  }
  if (k < 0) k = 0;
  std::vector<std::vector<std::string>> out;
  out.reserve(S_x.rows());
  for (Eigen::Index i = 0; i < S_x.rows(); ++i) {
    std::vector<int> order(vocab.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      if (S_x(i, a) != S_x(i, b)) return S_x(i, a) > S_x(i, b);
      return vocab.terms[a] < vocab.terms[b];
    });
    std::vector<std::string> terms;
    terms.reserve(k);
    for (int j = 0; j < k; ++j) terms.push_back(vocab.terms[order[j]]);
    out.push_back(std::move(terms));
  }
  return out;
}

}  // namespace rasum::salience
