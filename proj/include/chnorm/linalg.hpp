#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace chnorm {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr double kHermitianTol = 1e-10;
// Eigenvalues in [-kEigClipTol, 0) are roundoff and get clipped to zero;
// anything below is a genuine negativity.
inline constexpr double kEigClipTol = 1e-10;
inline constexpr double kSupportCutoff = 1e-12;

/// Schatten index: a finite real p >= 1 or the distinguished value infinity.
class PNorm {
 public:
  PNorm(double p) : value_(p), infinite_(std::isinf(p)) {
    if (std::isnan(p) || (!infinite_ && p < 1.0))
      throw std::invalid_argument("PNorm: index must be >= 1 or infinity");
  }

  static PNorm infinity() { return PNorm(std::numeric_limits<double>::infinity()); }

  bool is_inf() const { return infinite_; }

  double value() const {
    if (infinite_)
      throw std::logic_error("PNorm: infinite index has no finite value");
    return value_;
  }

  /// The index of the "square-root" norm ||A||_{2p} used by the Choi-form objectives.
  PNorm doubled() const { return infinite_ ? infinity() : PNorm(2.0 * value_); }

  std::string str() const { return infinite_ ? "inf" : [this] {
    std::string s = std::to_string(value_);
    s.erase(s.find_last_not_of('0') + 1);
    if (!s.empty() && s.back() == '.') s.pop_back();
    return s;
  }(); }

  friend bool operator==(const PNorm& a, const PNorm& b) {
    if (a.infinite_ || b.infinite_) return a.infinite_ && b.infinite_;
    return a.value_ == b.value_;
  }

 private:
  double value_;
  bool infinite_;
};

inline bool is_hermitian(const Matrix& m, double tol = kHermitianTol) {
  if (m.rows() != m.cols()) return false;
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

inline Matrix hermitize(const Matrix& m) { return 0.5 * (m + m.adjoint()); }

struct HermEig {
  RealVector eigenvalues;  // ascending
  Matrix vectors;
};

inline HermEig herm_eig(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitize(m));
  if (es.info() != Eigen::Success)
    throw std::runtime_error("herm_eig: eigensolver failed");
  return {es.eigenvalues(), es.eigenvectors()};
}

/// Schatten p-norm (sum of p-th powers of singular values, to the 1/p).
/// Hermitian inputs go through an eigendecomposition, general ones through SVD.
inline double schatten_norm(const Matrix& m, const PNorm& p) {
  if (m.rows() != m.cols())
    throw std::invalid_argument("schatten_norm: matrix must be square");
  RealVector sv;
  if (is_hermitian(m)) {
    sv = herm_eig(m).eigenvalues.cwiseAbs();
  } else {
    Eigen::JacobiSVD<Matrix> svd(m);
    sv = svd.singularValues();
  }
  if (p.is_inf()) return sv.size() ? sv.maxCoeff() : 0.0;
  const double pv = p.value();
  double acc = 0.0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) acc += std::pow(sv[i], pv);
  return std::pow(acc, 1.0 / pv);
}

/// M^s for Hermitian PSD M. s = 0 yields the support projection
/// (eigenvalues above kSupportCutoff).
inline Matrix frac_power(const Matrix& m, double s) {
  if (m.rows() != m.cols() || !is_hermitian(m))
    throw std::invalid_argument("frac_power: matrix must be Hermitian");
  HermEig eig = herm_eig(m);
  RealVector lam = eig.eigenvalues;
  if (lam.size() && lam.minCoeff() < -kEigClipTol)
    throw std::invalid_argument("frac_power: matrix is not PSD");
  RealVector f(lam.size());
  for (Eigen::Index i = 0; i < lam.size(); ++i) {
    double l = std::max(lam[i], 0.0);
    if (s == 0.0)
      f[i] = (l > kSupportCutoff) ? 1.0 : 0.0;
    else
      f[i] = (l > 0.0) ? std::pow(l, s) : 0.0;
  }
  return eig.vectors * f.asDiagonal() * eig.vectors.adjoint();
}

/// Kronecker product; index convention (i1, i2) -> i1 * dim2 + i2
/// (first factor is the slow index), matching partial_trace.
inline Matrix tensor(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

/// Trace out one tensor factor of a (d1*d2)x(d1*d2) matrix.
/// subsystem = 1 traces out the first factor (result d2 x d2),
/// subsystem = 2 the second (result d1 x d1).
inline Matrix partial_trace(const Matrix& m, int d1, int d2, int subsystem) {
  if (d1 <= 0 || d2 <= 0 || m.rows() != m.cols() ||
      m.rows() != static_cast<Eigen::Index>(d1) * d2)
    throw std::invalid_argument("partial_trace: dimension mismatch");
  if (subsystem == 2) {
    Matrix r = Matrix::Zero(d1, d1);
    for (int i = 0; i < d1; ++i)
      for (int j = 0; j < d1; ++j)
        for (int k = 0; k < d2; ++k) r(i, j) += m(i * d2 + k, j * d2 + k);
    return r;
  }
  if (subsystem == 1) {
    Matrix r = Matrix::Zero(d2, d2);
    for (int a = 0; a < d2; ++a)
      for (int b = 0; b < d2; ++b)
        for (int k = 0; k < d1; ++k) r(a, b) += m(k * d2 + a, k * d2 + b);
    return r;
  }
  throw std::invalid_argument("partial_trace: subsystem must be 1 or 2");
}

/// Bipartite pure state on C^{dim_1} (x) C^{dim_2}, unit norm.
struct PureState {
  int dim_1 = 0;
  int dim_2 = 0;
  Vector amplitudes;

  PureState() = default;
  PureState(int d1, int d2, Vector amps) : dim_1(d1), dim_2(d2), amplitudes(std::move(amps)) {
    if (dim_1 <= 0 || dim_2 <= 0 ||
        amplitudes.size() != static_cast<Eigen::Index>(dim_1) * dim_2)
      throw std::invalid_argument("PureState: dimension mismatch");
    if (std::abs(amplitudes.squaredNorm() - 1.0) > 1e-12)
      throw std::invalid_argument("PureState: amplitudes must be unit norm");
  }

  Matrix density() const { return amplitudes * amplitudes.adjoint(); }
};

/// Purification of a unit-trace PSD matrix X on C^n: the vector
/// sum_i sqrt(lambda_i) v_i (x) e_i in C^n (x) C^n, with eigenvalues in
/// descending order so a pure X maps to |v> (x) |e_1| up to phase.
inline PureState purify(const Matrix& x) {
  if (x.rows() != x.cols() || !is_hermitian(x))
    throw std::invalid_argument("purify: matrix must be Hermitian");
  const int n = static_cast<int>(x.rows());
  HermEig eig = herm_eig(x);
  if (eig.eigenvalues.minCoeff() < -kEigClipTol)
    throw std::invalid_argument("purify: matrix is not PSD");
  if (std::abs(eig.eigenvalues.sum() - 1.0) > 1e-10)
    throw std::invalid_argument("purify: trace must be 1");
  Vector amps = Vector::Zero(static_cast<Eigen::Index>(n) * n);
  for (int i = 0; i < n; ++i) {
    double lam = std::max(eig.eigenvalues[n - 1 - i], 0.0);  // descending
    if (lam <= 0.0) continue;
    const double r = std::sqrt(lam);
    for (int a = 0; a < n; ++a) amps[a * n + i] = r * eig.vectors(a, n - 1 - i);
  }
  amps /= amps.norm();
  return PureState(n, n, std::move(amps));
}

/// Von Neumann entropy with natural log; 0 log 0 = 0.
inline double von_neumann_entropy(const Matrix& rho) {
  HermEig eig = herm_eig(rho);
  double s = 0.0;
  for (Eigen::Index i = 0; i < eig.eigenvalues.size(); ++i) {
    double l = eig.eigenvalues[i];
    if (l > 0.0) s -= l * std::log(l);
  }
  return s;
}

}  // namespace chnorm
