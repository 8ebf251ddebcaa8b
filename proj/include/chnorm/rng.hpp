#pragma once

#include <cstdint>

#include "chnorm/linalg.hpp"

namespace chnorm {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Counter-split deterministic random stream. The generator and the Gaussian
/// transform are pinned here rather than taken from <random>, whose
/// distributions are implementation-defined; identical (seed, stream) pairs
/// give identical draws on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) {
    std::uint64_t s = seed;
    state_ = splitmix64(s);
    s = state_ ^ (0x9e3779b97f4a7c15ULL * (stream + 1));
    state_ = splitmix64(s);
  }

  std::uint64_t bits() { return splitmix64(state_); }

  /// Uniform in (0, 1).
  double uniform() {
    double u = static_cast<double>(bits() >> 11) * 0x1.0p-53;
    return u > 0.0 ? u : 0x1.0p-53;
  }

  /// Standard normal via Box-Muller.
  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double theta = 2.0 * M_PI * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
  }

  Complex cgaussian() {
    double re = gaussian();
    double im = gaussian();
    return Complex(re, im);
  }

  Matrix gaussian_matrix(int rows, int cols) {
    Matrix m(rows, cols);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) m(i, j) = cgaussian();
    return m;
  }

  Vector gaussian_vector(int n) {
    Vector v(n);
    for (int i = 0; i < n; ++i) v[i] = cgaussian();
    return v;
  }

  RealVector gaussian_real_vector(int n) {
    RealVector v(n);
    for (int i = 0; i < n; ++i) v[i] = gaussian();
    return v;
  }

  /// Uniform integer in [0, n).
  int below(int n) { return static_cast<int>(bits() % static_cast<std::uint64_t>(n)); }

 private:
  std::uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace chnorm
