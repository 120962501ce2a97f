#include "rasum/weights.hpp"

namespace rasum::weights {

namespace {

Matrix normalize_rows(const Matrix& m) {
  Matrix out = m;
  for (Eigen::Index i = 0; i < out.rows(); ++i) {
    const double norm = out.row(i).norm();
    if (norm > 0.0) out.row(i) /= norm;
  }
  return out;
}

}  // namespace

Matrix relation_matrix(const Matrix& A, const Matrix& B, bool cosine) {
  if (A.cols() != B.cols()) {
    throw InvalidInputError("relation_matrix: column counts differ");
  }
  if (cosine) return normalize_rows(A) * normalize_rows(B).transpose();
  return A * B.transpose();
}

Vector pool_and_squash(const Matrix& R) {
  if (!R.allFinite()) throw NumericError("pool_and_squash: non-finite relation matrix");
  Vector out(R.cols());
  const double n_news = static_cast<double>(R.rows());
  for (Eigen::Index j = 0; j < R.cols(); ++j) {
    const double mean = R.rows() > 0 ? R.col(j).sum() / n_news : 0.0;
    out(j) = sigmoid(mean);
  }
  return out;
}

Vector merge_weights(const Vector& rho_z, const Vector& rho_x, double lambda_p) {
  if (rho_z.size() != rho_x.size()) {
    throw InvalidInputError("merge_weights: component length mismatch");
  }
  if (lambda_p < 0.0 || lambda_p > 1.0) {
    throw InvalidInputError("merge_weights: lambda_p outside [0,1]");
  }
  return lambda_p * rho_z + (1.0 - lambda_p) * rho_x;
}

CommentWeights compute_comment_weights(const Matrix& X_d, const Matrix& X_c, const Matrix& Z_d,
                                       const Matrix& Z_c, double lambda_p, bool cosine) {
  CommentWeights w;
  w.lambda_p = lambda_p;
  w.rho_x = pool_and_squash(relation_matrix(X_d, X_c, cosine));
  w.rho_z = pool_and_squash(relation_matrix(Z_d, Z_c, cosine));
  w.rho = merge_weights(w.rho_z, w.rho_x, lambda_p);
  return w;
}

}  // namespace rasum::weights
