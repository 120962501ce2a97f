#include "rasum/vae.hpp"

#include <cmath>
#include <cstring>
#include <fstream>

namespace rasum::vae {

namespace {

constexpr double kClamp = 1e-7;
constexpr uint32_t kCheckpointMagic = 0x52415643;  // "RAVC"
constexpr uint32_t kCheckpointVersion = 1;

Matrix relu(const Matrix& m) { return m.cwiseMax(0.0); }

Matrix sigmoid_mat(const Matrix& m) {
  return m.unaryExpr([](double v) { return sigmoid(v); });
}

void check_finite(const Matrix& m, const char* layer) {
  if (!m.allFinite()) {
    throw NumericError(std::string("non-finite values in ") + layer);
  }
}

template <typename T>
ParamBlock block(const char* name, T& m) {
  return {name, m.data(), m.size()};
}

}  // namespace

std::vector<ParamBlock> VaeParams::blocks() {
  return {
      block("W_xh", W_xh),   block("b_xh", b_xh),   block("W_hmu", W_hmu),
      block("b_hmu", b_hmu), block("W_hsig", W_hsig), block("b_hsig", b_hsig),
      block("W_zh", W_zh),   block("b_zh", b_zh),   block("W_hx", W_hx),
      block("b_hx", b_hx),
  };
}

VaeParams VaeParams::zeros_like() const {
  VaeParams z;
  z.W_xh = Matrix::Zero(W_xh.rows(), W_xh.cols());
  z.b_xh = RowVector::Zero(b_xh.size());
  z.W_hmu = Matrix::Zero(W_hmu.rows(), W_hmu.cols());
  z.b_hmu = RowVector::Zero(b_hmu.size());
  z.W_hsig = Matrix::Zero(W_hsig.rows(), W_hsig.cols());
  z.b_hsig = RowVector::Zero(b_hsig.size());
  z.W_zh = Matrix::Zero(W_zh.rows(), W_zh.cols());
  z.b_zh = RowVector::Zero(b_zh.size());
  z.W_hx = Matrix::Zero(W_hx.rows(), W_hx.cols());
  z.b_hx = RowVector::Zero(b_hx.size());
  return z;
}

Matrix glorot_uniform(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  const double limit = std::sqrt(6.0 / static_cast<double>(rows + cols));
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = rng.uniform(-limit, limit);
  }
  return m;
}

VaeParams init_vae_params(int vocab, int hidden, int latent, Rng& rng) {
  VaeParams p;
  p.W_xh = glorot_uniform(vocab, hidden, rng);
  p.b_xh = RowVector::Zero(hidden);
  p.W_hmu = glorot_uniform(hidden, latent, rng);
  p.b_hmu = RowVector::Zero(latent);
  p.W_hsig = glorot_uniform(hidden, latent, rng);
  p.b_hsig = RowVector::Zero(latent);
  p.W_zh = glorot_uniform(latent, hidden, rng);
  p.b_zh = RowVector::Zero(hidden);
  p.W_hx = glorot_uniform(hidden, vocab, rng);
  p.b_hx = RowVector::Zero(vocab);
  return p;
}

EncodeBatch encode_batch(const Matrix& X, const VaeParams& params, const Matrix* eps) {
  EncodeBatch out;
  out.Hpre = (X * params.W_xh).rowwise() + params.b_xh;
  check_finite(out.Hpre, "encoder hidden layer");
  out.H = relu(out.Hpre);
  out.Mu = (out.H * params.W_hmu).rowwise() + params.b_hmu;
  check_finite(out.Mu, "encoder mean layer");
  out.LogVar = (out.H * params.W_hsig).rowwise() + params.b_hsig;
  check_finite(out.LogVar, "encoder log-variance layer");
  if (eps != nullptr) {
    out.Eps = *eps;
    out.Z = out.Mu + (out.LogVar * 0.5).array().exp().matrix().cwiseProduct(out.Eps);
  } else {
    out.Eps = Matrix::Zero(out.Mu.rows(), out.Mu.cols());
    out.Z = out.Mu;
  }
  check_finite(out.Z, "latent sample");
  return out;
}

DecodeBatch decode_batch(const Matrix& Z, const VaeParams& params) {
  DecodeBatch out;
  out.Dpre = (Z * params.W_zh).rowwise() + params.b_zh;
  check_finite(out.Dpre, "decoder hidden layer");
  out.Hdec = relu(out.Dpre);
  out.Logits = (out.Hdec * params.W_hx).rowwise() + params.b_hx;
  check_finite(out.Logits, "decoder output layer");
  out.Xr = sigmoid_mat(out.Logits);
  return out;
}

EncodeResult encode(const Vector& x, const VaeParams& params, const Vector* eps) {
  Matrix eps_row;
  const Matrix* eps_ptr = nullptr;
  if (eps != nullptr) {
    eps_row = eps->transpose();
    eps_ptr = &eps_row;
  }
  EncodeBatch b = encode_batch(x.transpose(), params, eps_ptr);
  EncodeResult r;
  r.h_enc = b.H.row(0).transpose();
  r.mu = b.Mu.row(0).transpose();
  r.log_var = b.LogVar.row(0).transpose();
  r.eps = b.Eps.row(0).transpose();
  r.z = b.Z.row(0).transpose();
  return r;
}

DecodeResult decode(const Vector& z, const VaeParams& params) {
  DecodeBatch b = decode_batch(z.transpose(), params);
  DecodeResult r;
  r.h_dec = b.Hdec.row(0).transpose();
  r.x_recon = b.Xr.row(0).transpose();
  return r;
}

ElboBatch elbo_batch(const Matrix& X, const EncodeBatch& enc, const DecodeBatch& dec) {
  const Eigen::Index n = X.rows();
  ElboBatch out;
  out.recon = Vector::Zero(n);
  out.kl = Vector::Zero(n);
  out.bound = Vector::Zero(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double recon = 0.0;
    for (Eigen::Index v = 0; v < X.cols(); ++v) {
      const double xr = std::clamp(dec.Xr(i, v), kClamp, 1.0 - kClamp);
      recon += X(i, v) * std::log(xr) + (1.0 - X(i, v)) * std::log(1.0 - xr);
    }
    double kl = 0.0;
    for (Eigen::Index k = 0; k < enc.Mu.cols(); ++k) {
      const double mu = enc.Mu(i, k);
      const double lv = enc.LogVar(i, k);
      kl += 1.0 + lv - mu * mu - std::exp(lv);
    }
    kl *= -0.5;
    out.recon(i) = recon;
    out.kl(i) = kl;
    out.bound(i) = recon - kl;
  }
  if (!out.bound.allFinite()) throw NumericError("non-finite variational bound");
  return out;
}

ElboParts elbo(const Vector& x, const EncodeResult& enc, const DecodeResult& dec) {
  EncodeBatch eb;
  eb.Mu = enc.mu.transpose();
  eb.LogVar = enc.log_var.transpose();
  DecodeBatch db;
  db.Xr = dec.x_recon.transpose();
  ElboBatch b = elbo_batch(x.transpose(), eb, db);
  return {b.recon(0), b.kl(0), b.bound(0)};
}

double weighted_bound(const Vector& news_bounds, const Vector& comment_bounds, const Vector& rho) {
  if (comment_bounds.size() != rho.size()) {
    throw InvalidInputError("weighted_bound: comment bound / weight length mismatch");
  }
  return news_bounds.sum() + comment_bounds.dot(rho);
}

void backprop_sentence_batch(const Matrix& X, const EncodeBatch& enc, const DecodeBatch& dec,
                             const Vector& weights, const VaeParams& params,
                             const Matrix* extra_z_grad, const Matrix* extra_h_grad,
                             VaeParams& grads) {
  const Eigen::Index n = X.rows();
  if (n == 0) return;
  if (weights.size() != n) {
    throw InvalidInputError("backprop: weight vector does not match batch rows");
  }
  if (enc.H.rows() != n || dec.Xr.rows() != n) {
    throw InvalidInputError("backprop: cache does not match batch rows");
  }

  // d(-recon)/dLogits = w * (x' - x), zeroed where the clamp was active.
  Matrix g_logits(n, X.cols());
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index v = 0; v < X.cols(); ++v) {
      const double xr = dec.Xr(i, v);
      const bool clamped = xr <= kClamp || xr >= 1.0 - kClamp;
      g_logits(i, v) = clamped ? 0.0 : weights(i) * (xr - X(i, v));
    }
  }
  grads.W_hx += dec.Hdec.transpose() * g_logits;
  grads.b_hx += g_logits.colwise().sum();
  Matrix g_hdec = g_logits * params.W_hx.transpose();
  Matrix g_dpre = g_hdec.cwiseProduct((dec.Dpre.array() > 0.0).cast<double>().matrix());
  grads.W_zh += enc.Z.transpose() * g_dpre;
  grads.b_zh += g_dpre.colwise().sum();

  Matrix g_z = g_dpre * params.W_zh.transpose();
  if (extra_z_grad != nullptr) g_z += *extra_z_grad;

  // KL path: d(w*kl)/dmu = w*mu, d(w*kl)/dlogvar = w*(exp(logvar)-1)/2.
  Matrix g_mu = weights.asDiagonal() * enc.Mu + g_z;
  Matrix g_lv = weights.asDiagonal() * ((enc.LogVar.array().exp() - 1.0) * 0.5).matrix() +
                0.5 * g_z.cwiseProduct(enc.Eps)
                          .cwiseProduct((enc.LogVar * 0.5).array().exp().matrix());

  grads.W_hmu += enc.H.transpose() * g_mu;
  grads.b_hmu += g_mu.colwise().sum();
  grads.W_hsig += enc.H.transpose() * g_lv;
  grads.b_hsig += g_lv.colwise().sum();

  Matrix g_h = g_mu * params.W_hmu.transpose() + g_lv * params.W_hsig.transpose();
  if (extra_h_grad != nullptr) g_h += *extra_h_grad;
  Matrix g_hpre = g_h.cwiseProduct((enc.Hpre.array() > 0.0).cast<double>().matrix());
  grads.W_xh += X.transpose() * g_hpre;
  grads.b_xh += g_hpre.colwise().sum();
}

VaeParams backward(const Matrix& X_news, const EncodeBatch& enc_news, const DecodeBatch& dec_news,
                   const Matrix& X_com, const EncodeBatch& enc_com, const DecodeBatch& dec_com,
                   const Vector& rho, const VaeParams& params) {
  VaeParams grads = params.zeros_like();
  backprop_sentence_batch(X_news, enc_news, dec_news, Vector::Ones(X_news.rows()), params,
                          nullptr, nullptr, grads);
  backprop_sentence_batch(X_com, enc_com, dec_com, rho, params, nullptr, nullptr, grads);
  return grads;
}

AdamState AdamState::init(const std::vector<ParamBlock>& blocks, const AdamConfig& config) {
  AdamState s;
  s.config = config;
  s.m.reserve(blocks.size());
  s.v.reserve(blocks.size());
  for (const auto& b : blocks) {
    s.m.push_back(Vector::Zero(b.size));
    s.v.push_back(Vector::Zero(b.size));
  }
  return s;
}

void adam_step(std::vector<ParamBlock> params, const std::vector<ParamBlock>& grads,
               AdamState& state) {
  if (params.size() != grads.size() || params.size() != state.m.size()) {
    throw InvalidInputError("adam_step: parameter/gradient/state block mismatch");
  }
  state.step += 1;
  const double b1 = state.config.beta1;
  const double b2 = state.config.beta2;
  const double corr1 = 1.0 - std::pow(b1, static_cast<double>(state.step));
  const double corr2 = 1.0 - std::pow(b2, static_cast<double>(state.step));
  for (size_t k = 0; k < params.size(); ++k) {
    if (params[k].size != grads[k].size) {
      throw InvalidInputError("adam_step: block size mismatch at " + params[k].name);
    }
    Eigen::Map<Vector> theta(params[k].data, params[k].size);
    Eigen::Map<const Vector> g(grads[k].data, grads[k].size);
    if (!g.allFinite()) throw NumericError("non-finite gradient in block " + params[k].name);
    Vector& m = state.m[k];
    Vector& v = state.v[k];
    m = b1 * m + (1.0 - b1) * g;
    v = b2 * v + (1.0 - b2) * g.cwiseProduct(g);
    const Vector m_hat = m / corr1;
    const Vector v_hat = v / corr2;
    theta.array() -= state.config.learning_rate * m_hat.array() /
                     (v_hat.array().sqrt() + state.config.epsilon);
  }
}

namespace {

void write_u32(std::ofstream& out, uint32_t v) { out.write(reinterpret_cast<const char*>(&v), 4); }
void write_u64(std::ofstream& out, uint64_t v) { out.write(reinterpret_cast<const char*>(&v), 8); }
void write_doubles(std::ofstream& out, const double* p, Eigen::Index n) {
  out.write(reinterpret_cast<const char*>(p), static_cast<std::streamsize>(n * sizeof(double)));
}

uint32_t read_u32(std::ifstream& in) {
  uint32_t v = 0;
  in.read(reinterpret_cast<char*>(&v), 4);
  return v;
}
uint64_t read_u64(std::ifstream& in) {
  uint64_t v = 0;
  in.read(reinterpret_cast<char*>(&v), 8);
  return v;
}

}  // namespace

void save_checkpoint(const std::filesystem::path& path, VaeParams& params, const AdamState& adam,
                     uint64_t vocab_hash) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInputError("cannot open checkpoint for writing: " + path.string());
  write_u32(out, kCheckpointMagic);
  write_u32(out, kCheckpointVersion);
  write_u64(out, vocab_hash);
  write_u32(out, static_cast<uint32_t>(params.vocab_size()));
  write_u32(out, static_cast<uint32_t>(params.hidden_size()));
  write_u32(out, static_cast<uint32_t>(params.latent_size()));
  auto blocks = params.blocks();
  write_u32(out, static_cast<uint32_t>(blocks.size()));
  for (const auto& b : blocks) {
    write_u64(out, static_cast<uint64_t>(b.size));
    write_doubles(out, b.data, b.size);
  }
  write_u64(out, static_cast<uint64_t>(adam.step));
  for (size_t k = 0; k < blocks.size(); ++k) {
    write_doubles(out, adam.m[k].data(), adam.m[k].size());
    write_doubles(out, adam.v[k].data(), adam.v[k].size());
  }
  if (!out) throw InvalidInputError("failed writing checkpoint: " + path.string());
}

Checkpoint load_checkpoint(const std::filesystem::path& path, uint64_t expected_vocab_hash) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInputError("cannot open checkpoint: " + path.string());
  if (read_u32(in) != kCheckpointMagic) throw ParseError(path.string() + ": not a checkpoint file");
  if (read_u32(in) != kCheckpointVersion) {
    throw ParseError(path.string() + ": unsupported checkpoint version");
  }
  Checkpoint cp;
  cp.vocab_hash = read_u64(in);
  if (cp.vocab_hash != expected_vocab_hash) {
    throw InvalidInputError(path.string() + ": checkpoint vocabulary hash mismatch");
  }
  const auto vocab = static_cast<int>(read_u32(in));
  const auto hidden = static_cast<int>(read_u32(in));
  const auto latent = static_cast<int>(read_u32(in));
  Rng dummy(0);
  cp.params = init_vae_params(vocab, hidden, latent, dummy);
  auto blocks = cp.params.blocks();
  if (read_u32(in) != blocks.size()) throw ParseError(path.string() + ": block count mismatch");
  for (auto& b : blocks) {
    const auto size = static_cast<Eigen::Index>(read_u64(in));
    if (size != b.size) throw ParseError(path.string() + ": block size mismatch at " + b.name);
    in.read(reinterpret_cast<char*>(b.data), static_cast<std::streamsize>(size * sizeof(double)));
  }
  cp.adam = AdamState::init(blocks, AdamConfig{});
  cp.adam.step = static_cast<long>(read_u64(in));
  for (size_t k = 0; k < blocks.size(); ++k) {
    in.read(reinterpret_cast<char*>(cp.adam.m[k].data()),
            static_cast<std::streamsize>(cp.adam.m[k].size() * sizeof(double)));
    in.read(reinterpret_cast<char*>(cp.adam.v[k].data()),
            static_cast<std::streamsize>(cp.adam.v[k].size() * sizeof(double)));
  }
  if (!in) throw ParseError(path.string() + ": truncated checkpoint");
  return cp;
}

}  // namespace rasum::vae
