#pragma once

#include "rasum/common.hpp"

namespace rasum::weights {

/// Per-comment-sentence gates in (0,1) plus the two space-specific components
/// they were merged from: rho = lambda_p * rho_z + (1 - lambda_p) * rho_x.
struct CommentWeights {
  Vector rho;
  Vector rho_x;  // term space
  Vector rho_z;  // latent space
  double lambda_p = 0.2;
};

/// R = A * B^T. With binary bag-of-words rows, R(i,j) is the shared-term
/// count. cosine=true L2-normalizes rows first (zero rows stay zero).
Matrix relation_matrix(const Matrix& A, const Matrix& B, bool cosine = false);

/// Column-mean over news rows followed by a sigmoid: one weight per comment
/// sentence.
Vector pool_and_squash(const Matrix& R);

Vector merge_weights(const Vector& rho_z, const Vector& rho_x, double lambda_p);

/// rho_x from the term matrices, rho_z from the latent encodings, merged.
CommentWeights compute_comment_weights(const Matrix& X_d, const Matrix& X_c, const Matrix& Z_d,
                                       const Matrix& Z_c, double lambda_p, bool cosine = false);

}  // namespace rasum::weights
