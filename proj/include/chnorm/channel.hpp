#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "chnorm/linalg.hpp"
#include "chnorm/rng.hpp"

namespace chnorm {

inline constexpr double kChannelTol = 1e-10;
// Choi eigenvalues at or below this are dropped when extracting Kraus operators.
inline constexpr double kKrausDropTol = 1e-11;

/// CPT map M_{d_in} -> M_{d_out}, held canonically as a Kraus list.
/// Immutable after construction; all operations on channels are pure.
struct QuantumChannel {
  int d_in = 0;
  int d_out = 0;
  std::vector<Matrix> kraus;

  QuantumChannel() = default;
  QuantumChannel(int din, int dout, std::vector<Matrix> ops)
      : d_in(din), d_out(dout), kraus(std::move(ops)) {
    validate();
  }

  int kappa() const { return static_cast<int>(kraus.size()); }

  void validate() const {
    if (d_in <= 0 || d_out <= 0 || kraus.empty())
      throw std::invalid_argument("QuantumChannel: bad dimensions or empty Kraus list");
    Matrix sum = Matrix::Zero(d_in, d_in);
    for (const Matrix& f : kraus) {
      if (f.rows() != d_out || f.cols() != d_in)
        throw std::invalid_argument("QuantumChannel: Kraus operator has wrong shape");
      sum += f.adjoint() * f;
    }
    if ((sum - Matrix::Identity(d_in, d_in)).cwiseAbs().maxCoeff() > kChannelTol)
      throw std::invalid_argument("QuantumChannel: trace preservation violated");
  }

  Matrix apply(const Matrix& rho) const {
    if (rho.rows() != d_in || rho.cols() != d_in)
      throw std::invalid_argument("QuantumChannel::apply: dimension mismatch");
    Matrix out = Matrix::Zero(d_out, d_out);
    for (const Matrix& f : kraus) out += f * rho * f.adjoint();
    return out;
  }

  /// The adjoint map (unital for a CPT channel): Y -> sum_k F_k^dag Y F_k.
  Matrix apply_adjoint(const Matrix& y) const {
    if (y.rows() != d_out || y.cols() != d_out)
      throw std::invalid_argument("QuantumChannel::apply_adjoint: dimension mismatch");
    Matrix out = Matrix::Zero(d_in, d_in);
    for (const Matrix& f : kraus) out += f.adjoint() * y * f;
    return out;
  }
};

struct ChoiMatrix {
  int d_in = 0;
  int d_out = 0;
  Matrix matrix;  // (d_in*d_out) x (d_in*d_out)

  void validate() const {
    if (matrix.rows() != static_cast<Eigen::Index>(d_in) * d_out || matrix.rows() != matrix.cols())
      throw std::invalid_argument("ChoiMatrix: dimension mismatch");
    if (!is_hermitian(matrix))
      throw std::invalid_argument("ChoiMatrix: matrix is not Hermitian");
    HermEig eig = herm_eig(matrix);
    if (eig.eigenvalues.minCoeff() < -kEigClipTol)
      throw std::invalid_argument("ChoiMatrix: matrix is not PSD");
    Matrix pt = partial_trace(matrix, d_in, d_out, 2);
    if ((pt - Matrix::Identity(d_in, d_in)).cwiseAbs().maxCoeff() > 1e-9)
      throw std::invalid_argument("ChoiMatrix: partial trace is not the identity");
  }
};

/// V : C^{d_out} -> C^{d_in} (x) C^kappa with Phi(rho) = V^dag (rho (x) I) V.
struct StinespringIsometry {
  int d_in = 0;
  int d_out = 0;
  int kappa = 0;
  Matrix v;  // (d_in*kappa) x d_out
};

/// Phi(rho) = Tr_2 U (rho (x) |phi><phi|) U^dag with a partial isometry
/// U : C^{d_in} (x) C^kappa -> C^{d_out} (x) C^kappa.
struct LindbladForm {
  int d_in = 0;
  int d_out = 0;
  int kappa = 0;
  Matrix u;    // (d_out*kappa) x (d_in*kappa)
  Vector phi;  // unit vector in C^kappa

  Matrix apply(const Matrix& rho) const {
    Matrix in = tensor(rho, phi * phi.adjoint());
    Matrix out = u * in * u.adjoint();
    return partial_trace(out, d_out, kappa, 2);
  }
};

inline QuantumChannel identity_channel(int d) {
  return QuantumChannel(d, d, {Matrix::Identity(d, d)});
}

/// rho -> Tr(rho), Kraus operators <e_k| (kappa = d).
inline QuantumChannel trace_channel(int d) {
  std::vector<Matrix> ops;
  for (int k = 0; k < d; ++k) {
    Matrix f = Matrix::Zero(1, d);
    f(0, k) = 1.0;
    ops.push_back(f);
  }
  return QuantumChannel(d, 1, std::move(ops));
}

/// Qubit dephasing {sqrt(1-t) I, sqrt(t) Z}.
inline QuantumChannel dephasing_channel(double t) {
  if (t < 0.0 || t > 1.0)
    throw std::invalid_argument("dephasing_channel: t must lie in [0, 1]");
  Matrix z = Matrix::Zero(2, 2);
  z(0, 0) = 1.0;
  z(1, 1) = -1.0;
  std::vector<Matrix> ops;
  if (t < 1.0) ops.push_back(std::sqrt(1.0 - t) * Matrix::Identity(2, 2));
  if (t > 0.0) ops.push_back(std::sqrt(t) * z);
  return QuantumChannel(2, 2, std::move(ops));
}

/// The n^2 shift/clock products X^a Z^b with X e_i = e_{i+1 mod n},
/// Z e_i = w^i e_i, w = exp(2 pi i / n). Their uniform twirl satisfies
/// sum_k U_k A U_k^dag = n Tr(A) I_n.
inline std::vector<Matrix> weyl_unitaries(int n) {
  if (n < 1) throw std::invalid_argument("weyl_unitaries: n must be >= 1");
  Matrix shift = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) shift((i + 1) % n, i) = 1.0;
  Matrix clock = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i)
    clock(i, i) = std::polar(1.0, 2.0 * M_PI * i / n);
  std::vector<Matrix> us;
  us.reserve(static_cast<std::size_t>(n) * n);
  Matrix xa = Matrix::Identity(n, n);
  for (int a = 0; a < n; ++a) {
    Matrix u = xa;
    for (int b = 0; b < n; ++b) {
      us.push_back(u);
      u = u * clock;
    }
    xa = shift * xa;
  }
  return us;
}

/// Mixture of Weyl conjugations sum_k p_k U_k rho U_k^dag.
inline QuantumChannel weyl_covariant_channel(int d, const std::vector<double>& probs) {
  if (static_cast<int>(probs.size()) != d * d)
    throw std::invalid_argument("weyl_covariant_channel: need d^2 probabilities");
  double sum = 0.0;
  for (double p : probs) {
    if (p < -1e-12) throw std::invalid_argument("weyl_covariant_channel: negative probability");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw std::invalid_argument("weyl_covariant_channel: probabilities must sum to 1");
  std::vector<Matrix> us = weyl_unitaries(d);
  std::vector<Matrix> ops;
  for (int k = 0; k < d * d; ++k)
    if (probs[k] > 0.0) ops.push_back(std::sqrt(probs[k]) * us[k]);
  return QuantumChannel(d, d, std::move(ops));
}

/// rho -> lambda rho + (1 - lambda) Tr(rho) I/d, CP for
/// lambda in [-1/(d^2-1), 1]. Realized as a Weyl mixture.
inline QuantumChannel depolarizing_channel(int d, double lambda) {
  const double lo = -1.0 / (d * d - 1.0);
  if (d < 2 || lambda < lo - 1e-12 || lambda > 1.0 + 1e-12)
    throw std::invalid_argument("depolarizing_channel: lambda outside the CP interval");
  std::vector<double> probs(static_cast<std::size_t>(d) * d, (1.0 - lambda) / (d * d));
  probs[0] += lambda;
  if (probs[0] < 0.0) probs[0] = 0.0;  // roundoff at the CP boundary
  return weyl_covariant_channel(d, probs);
}

inline ChoiMatrix choi_from_channel(const QuantumChannel& ch);
inline QuantumChannel kraus_from_choi(const ChoiMatrix& x);

/// Transpose-depolarizing (Werner-Holevo) channel rho -> (Tr(rho) I - rho^T)/(d-1).
inline QuantumChannel transpose_depolarizing_channel(int d) {
  if (d < 2) throw std::invalid_argument("transpose_depolarizing_channel: d must be >= 2");
  const int n = d * d;
  // Choi matrix (I - SWAP)/(d-1)
  Matrix swap = Matrix::Zero(n, n);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) swap(i * d + j, j * d + i) = 1.0;
  ChoiMatrix x{d, d, (Matrix::Identity(n, n) - swap) / (d - 1.0)};
  return kraus_from_choi(x);
}

/// Choi-Jamiolkowski matrix: block (i, j) is Phi(|e_i><e_j|). Equal to
/// sum_k |w_k><w_k| with w_k = sum_i e_i (x) F_k e_i.
inline ChoiMatrix choi_from_channel(const QuantumChannel& ch) {
  const int d = ch.d_in, dp = ch.d_out;
  Matrix x = Matrix::Zero(static_cast<Eigen::Index>(d) * dp, static_cast<Eigen::Index>(d) * dp);
  for (const Matrix& f : ch.kraus) {
    Vector w(static_cast<Eigen::Index>(d) * dp);
    for (int i = 0; i < d; ++i)
      for (int a = 0; a < dp; ++a) w[i * dp + a] = f(a, i);
    x += w * w.adjoint();
  }
  return ChoiMatrix{d, dp, std::move(x)};
}

/// Kraus operators from the eigendecomposition of the Choi matrix;
/// eigenvalues <= kKrausDropTol are dropped (canonicalization).
inline QuantumChannel kraus_from_choi(const ChoiMatrix& x) {
  x.validate();
  const int d = x.d_in, dp = x.d_out;
  HermEig eig = herm_eig(x.matrix);
  std::vector<Matrix> ops;
  for (Eigen::Index k = eig.eigenvalues.size() - 1; k >= 0; --k) {
    double lam = eig.eigenvalues[k];
    if (lam <= kKrausDropTol) continue;
    const double r = std::sqrt(lam);
    Matrix f(dp, d);
    for (int i = 0; i < d; ++i)
      for (int a = 0; a < dp; ++a) f(a, i) = r * eig.vectors(i * dp + a, k);
    ops.push_back(std::move(f));
  }
  return QuantumChannel(d, dp, std::move(ops));
}

/// V = sum_k F_k^dag (x) |e_k>, so Phi(rho) = V^dag (rho (x) I_kappa) V
/// and Tr_2 V V^dag = I_{d_in}.
inline StinespringIsometry stinespring_from_kraus(const QuantumChannel& ch) {
  const int d = ch.d_in, dp = ch.d_out, kap = ch.kappa();
  Matrix v = Matrix::Zero(static_cast<Eigen::Index>(d) * kap, dp);
  for (int k = 0; k < kap; ++k) {
    const Matrix fdag = ch.kraus[k].adjoint();  // d x dp
    for (int i = 0; i < d; ++i)
      for (int a = 0; a < dp; ++a) v(i * kap + k, a) = fdag(i, a);
  }
  return StinespringIsometry{d, dp, kap, std::move(v)};
}

/// Conjugate-channel action evaluated entrywise:
/// Phi^C(rho) = sum_{jk} Tr(F_j rho F_k^dag) |e_j><e_k|.
inline Matrix conjugate_apply_explicit(const QuantumChannel& ch, const Matrix& rho) {
  const int kap = ch.kappa();
  Matrix out(kap, kap);
  for (int j = 0; j < kap; ++j)
    for (int k = 0; k < kap; ++k)
      out(j, k) = (ch.kraus[j] * rho * ch.kraus[k].adjoint()).trace();
  return out;
}

/// Conjugate (complementary) channel M_{d_in} -> M_kappa. Its Kraus operators
/// are the index-swapped slices (G_i)_{kj} = (F_k)_{ij} of the same dilation;
/// the result is checked against the entrywise formula on a matrix-unit basis.
inline QuantumChannel conjugate(const QuantumChannel& ch) {
  const int d = ch.d_in, dp = ch.d_out, kap = ch.kappa();
  std::vector<Matrix> ops;
  ops.reserve(dp);
  for (int i = 0; i < dp; ++i) {
    Matrix g(kap, d);
    for (int k = 0; k < kap; ++k)
      for (int j = 0; j < d; ++j) g(k, j) = ch.kraus[k](i, j);
    ops.push_back(std::move(g));
  }
  QuantumChannel conj(d, kap, std::move(ops));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      Matrix unit = Matrix::Zero(d, d);
      unit(i, j) = 1.0;
      Matrix diff = conj.apply(unit) - conjugate_apply_explicit(ch, unit);
      if (diff.cwiseAbs().maxCoeff() > 1e-12)
        throw std::logic_error("conjugate: slice construction disagrees with the entrywise formula");
    }
  return conj;
}

struct Lemma1Pair {
  Matrix conjugate_choi;        // X_{Phi^C} via the entrywise conjugate formula
  Matrix stinespring_transpose; // (V V^dag)^T via the dilation
};

/// Both sides of X_{Phi^C} = (V V^dag)^T, computed by independent paths.
inline Lemma1Pair lemma1_pair(const QuantumChannel& ch) {
  const int d = ch.d_in, kap = ch.kappa();
  const Eigen::Index n = static_cast<Eigen::Index>(d) * kap;
  Matrix left = Matrix::Zero(n, n);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      Matrix unit = Matrix::Zero(d, d);
      unit(i, j) = 1.0;
      Matrix block = conjugate_apply_explicit(ch, unit);
      left.block(i * kap, j * kap, kap, kap) = block;
    }
  StinespringIsometry st = stinespring_from_kraus(ch);
  Matrix right = (st.v * st.v.adjoint()).transpose();
  return Lemma1Pair{std::move(left), std::move(right)};
}

/// Kraus set {F_i (x) G_j}; kappa multiplies before any canonicalization.
inline QuantumChannel tensor_channels(const QuantumChannel& a, const QuantumChannel& b) {
  std::vector<Matrix> ops;
  ops.reserve(a.kraus.size() * b.kraus.size());
  for (const Matrix& f : a.kraus)
    for (const Matrix& g : b.kraus) ops.push_back(tensor(f, g));
  return QuantumChannel(a.d_in * b.d_in, a.d_out * b.d_out, std::move(ops));
}

/// Haar-style random channel from a Gaussian matrix orthonormalized by QR,
/// with column phases fixed so the draw is reproducible across backends.
inline QuantumChannel random_channel(int d_in, int d_out, int kappa, std::uint64_t seed) {
  if (d_in <= 0 || d_out <= 0 || kappa <= 0 ||
      static_cast<long>(d_out) * kappa < d_in)
    throw std::invalid_argument("random_channel: need d_out * kappa >= d_in > 0");
  Rng rng(seed);
  const int rows = d_out * kappa;
  Matrix g = rng.gaussian_matrix(rows, d_in);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix w = qr.householderQ() * Matrix::Identity(rows, d_in);
  for (int j = 0; j < d_in; ++j) {
    for (int i = 0; i < rows; ++i) {
      Complex z = w(i, j);
      if (std::abs(z) > 1e-12) {
        w.col(j) *= std::conj(z) / std::abs(z);
        break;
      }
    }
  }
  std::vector<Matrix> ops;
  ops.reserve(kappa);
  for (int k = 0; k < kappa; ++k) {
    Matrix f(d_out, d_in);
    for (int a = 0; a < d_out; ++a)
      for (int i = 0; i < d_in; ++i) f(a, i) = w(k * d_out + a, i);
    ops.push_back(std::move(f));
  }
  return QuantumChannel(d_in, d_out, std::move(ops));
}

/// U acts as W = sum_k F_k (x) |e_k> on the subspace C^{d_in} (x) |phi|,
/// phi = e_1, and as zero on its complement; U^dag U is the projection onto
/// that subspace, so U is a partial isometry reproducing the Kraus action.
inline LindbladForm lindblad_from_kraus(const QuantumChannel& ch) {
  const int d = ch.d_in, dp = ch.d_out, kap = ch.kappa();
  Matrix u = Matrix::Zero(static_cast<Eigen::Index>(dp) * kap,
                          static_cast<Eigen::Index>(d) * kap);
  for (int j = 0; j < d; ++j)
    for (int k = 0; k < kap; ++k)
      for (int a = 0; a < dp; ++a) u(a * kap + k, j * kap + 0) += ch.kraus[k](a, j);
  Vector phi = Vector::Zero(kap);
  phi[0] = 1.0;
  return LindbladForm{d, dp, kap, std::move(u), std::move(phi)};
}

struct NamedChannelParams {
  int d = 2;
  double lambda = 1.0;
  double t = 0.0;
  std::vector<double> probs;  // for weyl_covariant; empty means uniform
};

inline QuantumChannel named_channel(const std::string& name, const NamedChannelParams& p) {
  if (name == "identity") return identity_channel(p.d);
  if (name == "trace") return trace_channel(p.d);
  if (name == "depolarize") return depolarizing_channel(p.d, p.lambda);
  if (name == "dephase") return dephasing_channel(p.t);
  if (name == "transpose_depolarize") return transpose_depolarizing_channel(p.d);
  if (name == "weyl_covariant") {
    std::vector<double> probs = p.probs;
    if (probs.empty())
      probs.assign(static_cast<std::size_t>(p.d) * p.d, 1.0 / (p.d * p.d));
    return weyl_covariant_channel(p.d, probs);
  }
  throw std::invalid_argument("named_channel: unknown name '" + name + "'");
}

}  // namespace chnorm
