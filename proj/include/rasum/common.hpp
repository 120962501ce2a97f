#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace rasum {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using RowVector = Eigen::RowVectorXd;

/// Input violates a documented precondition (bad topic layout, shape
/// mismatch, empty vocabulary, ...). Maps to exit code 1 in the CLI.
class InvalidInputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Structured text (XML, bracketed parse trees) could not be parsed.
/// Messages carry file and line/offset where available.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numeric computation produced non-finite values or diverged.
/// Maps to exit code 2 in the CLI.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// SplitMix64 scrambler; used to derive independent seeds from one master.
uint64_t splitmix64(uint64_t x);

/// Deterministic RNG. All randomness in the library flows through this so
/// a seed fully determines every trajectory.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(splitmix64(seed)) {}

  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(engine_);
  }
  double gaussian() {
    return std::normal_distribution<double>(0.0, 1.0)(engine_);
  }
  uint64_t next_u64() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

void log_warning(const std::string& msg);

/// Numerically stable logistic function.
double sigmoid(double x);

/// True iff every entry of m is finite.
bool all_finite(const Matrix& m);

}  // namespace rasum
