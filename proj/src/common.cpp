#include "rasum/common.hpp"

#include <cmath>
#include <iostream>

namespace rasum {

uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

void log_warning(const std::string& msg) { std::cerr << "[warn] " << msg << "\n"; }

double sigmoid(double x) {
  if (x >= 0.0) {
    return 1.0 / (1.0 + std::exp(-x));
  }
  const double e = std::exp(x);
  return e / (1.0 + e);
}

bool all_finite(const Matrix& m) { return m.allFinite(); }

}  // namespace rasum
