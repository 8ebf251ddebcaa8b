#pragma once

#include <functional>
#include <vector>

#include "chnorm/channel.hpp"

namespace chnorm {

struct OptimizerConfig {
  int restarts = 64;
  int max_iters = 2000;
  double step_tolerance = 1e-10;
  double value_tolerance = 1e-9;
  std::uint64_t seed = 0;
};

/// Value of an optimized norm plus the input attaining it. All estimators
/// return certified lower bounds: the value is reproducible by re-evaluating
/// the objective at the certificate.
struct NormEstimate {
  double value = 0.0;
  Matrix certificate;
  int restarts_agreeing = 0;
  bool converged = false;
};

namespace detail {

struct NormGrad {
  double value = 0.0;
  Matrix grad;  // supergradient w.r.t. the Hermitian PSD argument
};

/// Schatten p-norm and its (super)gradient at a Hermitian PSD matrix.
/// p = 1 gives the trace with gradient I; p = inf gives the top eigenvalue
/// with the uniform projector onto the near-top eigenspace.
inline NormGrad psd_norm_grad(const Matrix& m, const PNorm& p) {
  const Eigen::Index n = m.rows();
  HermEig eig = herm_eig(m);
  RealVector lam = eig.eigenvalues.cwiseMax(0.0);
  if (p.is_inf()) {
    double top = lam.maxCoeff();
    if (top <= 0.0) return {0.0, Matrix::Zero(n, n)};
    double cut = top * (1.0 - 1e-9);
    Matrix proj = Matrix::Zero(n, n);
    int count = 0;
    for (Eigen::Index i = 0; i < n; ++i)
      if (lam[i] >= cut) {
        proj += eig.vectors.col(i) * eig.vectors.col(i).adjoint();
        ++count;
      }
    return {top, proj / count};
  }
  const double pv = p.value();
  if (pv == 1.0) return {lam.sum(), Matrix::Identity(n, n)};
  double acc = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) acc += std::pow(lam[i], pv);
  if (acc <= 0.0) return {0.0, Matrix::Zero(n, n)};
  double nrm = std::pow(acc, 1.0 / pv);
  RealVector f(n);
  for (Eigen::Index i = 0; i < n; ++i)
    f[i] = lam[i] > 0.0 ? std::pow(lam[i], pv - 1.0) : 0.0;
  Matrix g = eig.vectors * f.asDiagonal() * eig.vectors.adjoint() / std::pow(nrm, pv - 1.0);
  return {nrm, std::move(g)};
}

// Real parameterization of complex matrices: x[2(i*cols+j)] = Re, +1 = Im.
inline Matrix unpack_matrix(const RealVector& x, int rows, int cols) {
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) {
      int k = 2 * (i * cols + j);
      m(i, j) = Complex(x[k], x[k + 1]);
    }
  return m;
}

inline RealVector pack_wirtinger(const Matrix& g) {
  // Euclidean gradient over (Re, Im) parts from dF/d(conj B) = g: twice g.
  RealVector x(2 * g.rows() * g.cols());
  for (int i = 0; i < g.rows(); ++i)
    for (int j = 0; j < g.cols(); ++j) {
      int k = 2 * static_cast<int>(i * g.cols() + j);
      x[k] = 2.0 * g(i, j).real();
      x[k + 1] = 2.0 * g(i, j).imag();
    }
  return x;
}

inline Vector unpack_vector(const RealVector& x, int n) {
  Vector v(n);
  for (int i = 0; i < n; ++i) v[i] = Complex(x[2 * i], x[2 * i + 1]);
  return v;
}

inline RealVector pack_wirtinger(const Vector& g) {
  RealVector x(2 * g.size());
  for (int i = 0; i < g.size(); ++i) {
    x[2 * i] = 2.0 * g[i].real();
    x[2 * i + 1] = 2.0 * g[i].imag();
  }
  return x;
}

// Objective over a real parameter vector; returns the value and fills *grad.
// All objectives here are scale-invariant, so iterates stay normalized.
using Objective = std::function<double(const RealVector&, RealVector*)>;

struct AscentOutcome {
  RealVector x;
  double value = 0.0;
  bool stationary = false;
};

/// Monotone ascent with an adaptive step: grow on success, halve on failure.
/// Accept-only-if-improving makes it a valid lower-bound search even at the
/// nonsmooth p = 1, inf objectives where only supergradients exist.
inline AscentOutcome ascend(const Objective& f, RealVector x, const OptimizerConfig& cfg) {
  x.normalize();
  RealVector g;
  double v = f(x, &g);
  double eta = 0.1;
  bool stationary = false;
  for (int it = 0; it < cfg.max_iters; ++it) {
    double gn = g.norm();
    if (eta * gn < cfg.step_tolerance || eta < 1e-14) {
      stationary = true;
      break;
    }
    RealVector trial = (x + eta * g).normalized();
    RealVector gt;
    double vt = f(trial, &gt);
    if (vt > v) {
      x = std::move(trial);
      v = vt;
      g = std::move(gt);
      eta = std::min(eta * 1.5, 100.0);
    } else {
      eta *= 0.5;
    }
  }
  return {std::move(x), v, stationary};
}

/// Multi-restart driver. Restart r draws its start from stream (seed, r), so
/// adding restarts extends the search without perturbing earlier ones and the
/// returned value is monotone in cfg.restarts. Each restart ascends the
/// stages in order, warm-starting from the previous stage's iterate; earlier
/// stages are smooth surrogates of the final (reported) objective.
inline NormEstimate run_restarts(const std::vector<Objective>& stages, int nparams,
                                 const std::function<Matrix(const RealVector&)>& certificate_of,
                                 const OptimizerConfig& cfg) {
  double best = -std::numeric_limits<double>::infinity();
  RealVector best_x;
  bool best_stationary = false;
  std::vector<double> values;
  values.reserve(cfg.restarts);
  for (int r = 0; r < cfg.restarts; ++r) {
    Rng rng(cfg.seed, static_cast<std::uint64_t>(r));
    AscentOutcome out;
    out.x = rng.gaussian_real_vector(nparams);
    for (const Objective& f : stages) out = ascend(f, out.x, cfg);
    values.push_back(out.value);
    if (out.value > best) {  // strict: ties keep the first attaining restart
      best = out.value;
      best_x = std::move(out.x);
      best_stationary = out.stationary;
    }
  }
  int agree = 0;
  for (double v : values)
    if (v >= best - cfg.value_tolerance) ++agree;
  NormEstimate est;
  est.value = best;
  est.certificate = certificate_of(best_x);
  est.restarts_agreeing = agree;
  est.converged = best_stationary && agree >= (cfg.restarts + 3) / 4;
  return est;
}

inline NormEstimate run_restarts(const Objective& f, int nparams,
                                 const std::function<Matrix(const RealVector&)>& certificate_of,
                                 const OptimizerConfig& cfg) {
  return run_restarts(std::vector<Objective>{f}, nparams, certificate_of, cfg);
}

/// Finite stand-in for an infinite norm index during continuation stages.
inline PNorm surrogate(const PNorm& p, double cap) { return p.is_inf() ? PNorm(cap) : p; }

/// Continuation schedule: the operator-norm objectives are piecewise smooth
/// and trap plain ascent, so approach p = inf through large finite p.
constexpr double kContinuationCaps[] = {16.0, 64.0};

}  // namespace detail

/// ||Phi||_{q->p} = sup_{A >= 0} ||Phi(A)||_p / ||A||_q via multi-restart
/// ascent over A = B^dag B with unconstrained complex B.
inline NormEstimate norm_q_to_p(const QuantumChannel& ch, const PNorm& q, const PNorm& p,
                                const OptimizerConfig& cfg = {}) {
  const int d = ch.d_in;
  const int nparams = 2 * d * d;
  auto make = [&ch, d](PNorm qe, PNorm pe) -> detail::Objective {
    return [&ch, qe, pe, d](const RealVector& x, RealVector* grad) {
      Matrix b = detail::unpack_matrix(x, d, d);
      Matrix a = b.adjoint() * b;
      detail::NormGrad den = detail::psd_norm_grad(a, qe);
      detail::NormGrad num = detail::psd_norm_grad(ch.apply(a), pe);
      if (den.value <= 0.0) {
        if (grad) *grad = RealVector::Zero(x.size());
        return 0.0;
      }
      if (grad) {
        Matrix gnum = ch.apply_adjoint(num.grad);
        Matrix ga = hermitize((gnum * den.value - num.value * den.grad) / (den.value * den.value));
        *grad = detail::pack_wirtinger(Matrix(b * ga));
      }
      return num.value / den.value;
    };
  };
  std::vector<detail::Objective> stages;
  if (q.is_inf() || p.is_inf())
    for (double cap : detail::kContinuationCaps)
      stages.push_back(make(detail::surrogate(q, cap), detail::surrogate(p, cap)));
  stages.push_back(make(q, p));
  auto cert = [q, d](const RealVector& x) {
    Matrix b = detail::unpack_matrix(x, d, d);
    Matrix a = hermitize(b.adjoint() * b);
    double n = schatten_norm(a, q);
    return n > 0.0 ? Matrix(a / n) : a;
  };
  return detail::run_restarts(stages, nparams, cert, cfg);
}

namespace detail {

/// Shared core of the Choi-form objectives:
/// sup_{A >= 0, ||A||_s <= 1} ||(A (x) I) X (A (x) I)||_p with s = 2q.
inline NormEstimate choi_form_sup(const Matrix& x_choi, int d1, int d2, const PNorm& q,
                                  const PNorm& p, const OptimizerConfig& cfg) {
  const PNorm s = q.doubled();
  const int nparams = 2 * d1 * d1;
  const Matrix eye2 = Matrix::Identity(d2, d2);
  auto make = [&x_choi, d1, d2, &eye2](PNorm se, PNorm pe) -> Objective {
    return [&x_choi, se, pe, d1, d2, &eye2](const RealVector& xv, RealVector* grad) {
      Matrix b = unpack_matrix(xv, d1, d1);
      Matrix a = b.adjoint() * b;
      NormGrad den0 = psd_norm_grad(a, se);
      if (den0.value <= 0.0) {
        if (grad) *grad = RealVector::Zero(xv.size());
        return 0.0;
      }
      Matrix ai = tensor(a, eye2);
      Matrix m = ai * x_choi * ai;
      NormGrad num = psd_norm_grad(m, pe);
      double den = den0.value * den0.value;
      if (grad) {
        Matrix k = x_choi * ai * num.grad;
        Matrix gnum = 2.0 * hermitize(partial_trace(k, d1, d2, 2));
        Matrix gden = 2.0 * den0.value * den0.grad;
        Matrix ga = hermitize((gnum * den - num.value * gden) / (den * den));
        *grad = pack_wirtinger(Matrix(b * ga));
      }
      return num.value / den;
    };
  };
  std::vector<Objective> stages;
  if (s.is_inf() || p.is_inf())
    for (double cap : kContinuationCaps)
      stages.push_back(make(surrogate(s, 2.0 * cap), surrogate(p, cap)));
  stages.push_back(make(s, p));
  auto cert = [s, d1](const RealVector& xv) {
    Matrix b = unpack_matrix(xv, d1, d1);
    Matrix a = hermitize(b.adjoint() * b);
    double n = schatten_norm(a, s);
    return n > 0.0 ? Matrix(a / n) : a;
  };
  return run_restarts(stages, nparams, cert, cfg);
}

}  // namespace detail

/// omega_p via the Choi formula:
/// sup_{A >= 0, ||A||_{2p} <= 1} ||(A (x) I) X_Phi (A (x) I)||_p.
inline NormEstimate omega_p_choi(const QuantumChannel& ch, const PNorm& p,
                                 const OptimizerConfig& cfg = {}) {
  ChoiMatrix x = choi_from_channel(ch);
  return detail::choi_form_sup(x.matrix, ch.d_in, ch.d_out, p, p, cfg);
}

/// omega_p via its defining supremum over bipartite pure states:
/// sup_psi ||(I (x) Phi)(psi psi*)||_p / ||Tr_2 psi psi*||_p.
inline NormEstimate omega_p_pure(const QuantumChannel& ch, const PNorm& p,
                                 const OptimizerConfig& cfg = {}) {
  const int d = ch.d_in;
  const int n = d * ch.d_in;  // reference factor has dimension d_in
  std::vector<Matrix> ext;    // I (x) F_k
  ext.reserve(ch.kraus.size());
  const Matrix eye = Matrix::Identity(d, d);
  for (const Matrix& fk : ch.kraus) ext.push_back(tensor(eye, fk));
  const int dout = d * ch.d_out;
  auto make = [&, d](PNorm pe) -> detail::Objective {
    return [&, d, pe](const RealVector& xv, RealVector* grad) {
      Vector psi = detail::unpack_vector(xv, n);
      Matrix rho = psi * psi.adjoint();
      Matrix m = Matrix::Zero(dout, dout);
      for (const Matrix& e : ext) m += e * rho * e.adjoint();
      detail::NormGrad num = detail::psd_norm_grad(m, pe);
      detail::NormGrad den = detail::psd_norm_grad(partial_trace(rho, d, d, 2), pe);
      if (den.value <= 0.0) {
        if (grad) *grad = RealVector::Zero(xv.size());
        return 0.0;
      }
      if (grad) {
        Matrix gnum = Matrix::Zero(n, n);
        for (const Matrix& e : ext) gnum += e.adjoint() * num.grad * e;
        Matrix gden = tensor(den.grad, Matrix::Identity(d, d));
        Matrix gr = (gnum * den.value - num.value * gden) / (den.value * den.value);
        *grad = detail::pack_wirtinger(Vector(gr * psi));
      }
      return num.value / den.value;
    };
  };
  std::vector<detail::Objective> stages;
  if (p.is_inf())
    for (double cap : detail::kContinuationCaps) stages.push_back(make(PNorm(cap)));
  stages.push_back(make(p));
  auto cert = [n](const RealVector& xv) {
    Vector psi = detail::unpack_vector(xv, n).normalized();
    return Matrix(psi * psi.adjoint());
  };
  return detail::run_restarts(stages, 2 * n, cert, cfg);
}

/// ||Phi||_{q->p} for q >= p through the conjugate's Choi matrix:
/// sup_{A >= 0, ||A||_{2q} <= 1} ||(A (x) I) X_{Phi^C} (A (x) I)||_p.
inline NormEstimate norm_q_to_p_via_conjugate_choi(const QuantumChannel& ch, const PNorm& q,
                                                   const PNorm& p,
                                                   const OptimizerConfig& cfg = {}) {
  bool q_ge_p = q.is_inf() || (!p.is_inf() && q.value() >= p.value());
  if (p.is_inf() && !q.is_inf()) q_ge_p = false;
  if (!q_ge_p)
    throw std::invalid_argument("norm_q_to_p_via_conjugate_choi: requires q >= p");
  QuantumChannel conj = conjugate(ch);
  ChoiMatrix x = choi_from_channel(conj);
  return detail::choi_form_sup(x.matrix, conj.d_in, conj.d_out, q, p, cfg);
}

/// g_p(rho, Phi) = Tr[(rho^{1/2p} (x) I) X_Phi (rho^{1/2p} (x) I)]^p.
inline double g_p(const Matrix& rho, const QuantumChannel& ch, const PNorm& p) {
  if (p.is_inf()) throw std::invalid_argument("g_p: p must be finite");
  if (rho.rows() != ch.d_in || rho.cols() != ch.d_in)
    throw std::invalid_argument("g_p: rho has wrong dimension");
  if (rho.real().trace() > 1.0 + 1e-10)
    throw std::invalid_argument("g_p: Tr rho must be <= 1");
  const double pv = p.value();
  Matrix r = frac_power(rho, 1.0 / (2.0 * pv));  // throws if rho is not PSD
  Matrix ri = tensor(r, Matrix::Identity(ch.d_out, ch.d_out));
  Matrix m = ri * choi_from_channel(ch).matrix * ri;
  HermEig eig = herm_eig(m);
  double acc = 0.0;
  for (Eigen::Index i = 0; i < eig.eigenvalues.size(); ++i)
    acc += std::pow(std::max(eig.eigenvalues[i], 0.0), pv);
  return acc;
}

/// The equivalent form Tr[X^{1/2} (rho^{1/p} (x) I) X^{1/2}]^p.
inline double g_p_alt(const Matrix& rho, const QuantumChannel& ch, const PNorm& p) {
  if (p.is_inf()) throw std::invalid_argument("g_p_alt: p must be finite");
  const double pv = p.value();
  Matrix xh = frac_power(choi_from_channel(ch).matrix, 0.5);
  Matrix ri = tensor(frac_power(rho, 1.0 / pv), Matrix::Identity(ch.d_out, ch.d_out));
  Matrix m = xh * ri * xh;
  HermEig eig = herm_eig(m);
  double acc = 0.0;
  for (Eigen::Index i = 0; i < eig.eigenvalues.size(); ++i)
    acc += std::pow(std::max(eig.eigenvalues[i], 0.0), pv);
  return acc;
}

/// Concavity deficits g_p(lam rho1 + (1-lam) rho2) - lam g_p(rho1) - (1-lam) g_p(rho2);
/// concavity means every deficit is >= 0 up to roundoff.
inline std::vector<double> concavity_probe(const QuantumChannel& ch, const PNorm& p,
                                           const Matrix& rho1, const Matrix& rho2,
                                           const std::vector<double>& lambdas) {
  const double g1 = g_p(rho1, ch, p);
  const double g2 = g_p(rho2, ch, p);
  std::vector<double> deficits;
  deficits.reserve(lambdas.size());
  for (double lam : lambdas) {
    Matrix mix = lam * rho1 + (1.0 - lam) * rho2;
    deficits.push_back(g_p(mix, ch, p) - lam * g1 - (1.0 - lam) * g2);
  }
  return deficits;
}

/// CB minimal conditional entropy:
/// inf_psi S[(I (x) Phi)(psi psi*)] - S[Tr_2 psi psi*], natural log.
inline double s_cb_min(const QuantumChannel& ch, const OptimizerConfig& cfg = {}) {
  const int d = ch.d_in;
  const int n = d * d;
  std::vector<Matrix> ext;
  const Matrix eye = Matrix::Identity(d, d);
  for (const Matrix& fk : ch.kraus) ext.push_back(tensor(eye, fk));
  const int dout = d * ch.d_out;
  // log clipped well below any entropy tolerance; keeps gradients finite at
  // rank-deficient points.
  auto entropy_grad = [](const Matrix& c, Matrix* grad) {
    HermEig eig = herm_eig(c);
    double s = 0.0;
    RealVector gl(eig.eigenvalues.size());
    for (Eigen::Index i = 0; i < eig.eigenvalues.size(); ++i) {
      double l = std::max(eig.eigenvalues[i], 0.0);
      if (l > 0.0) s -= l * std::log(l);
      gl[i] = -(std::log(std::max(l, 1e-18)) + 1.0);
    }
    if (grad) *grad = eig.vectors * gl.asDiagonal() * eig.vectors.adjoint();
    return s;
  };
  // maximize the negated objective over unnormalized psi
  detail::Objective f = [&, d](const RealVector& xv, RealVector* grad) {
    Vector psi = detail::unpack_vector(xv, n);
    double t = psi.squaredNorm();
    if (t <= 0.0) {
      if (grad) *grad = RealVector::Zero(xv.size());
      return 0.0;
    }
    Matrix rho = (psi * psi.adjoint()) / t;
    Matrix m = Matrix::Zero(dout, dout);
    for (const Matrix& e : ext) m += e * rho * e.adjoint();
    Matrix gm, gr1;
    double sm = entropy_grad(m, grad ? &gm : nullptr);
    double s1 = entropy_grad(partial_trace(rho, d, d, 2), grad ? &gr1 : nullptr);
    if (grad) {
      Matrix g = Matrix::Zero(n, n);  // gradient of -(S[m] - S[rho1]) w.r.t. rho
      for (const Matrix& e : ext) g -= e.adjoint() * gm * e;
      g += tensor(gr1, Matrix::Identity(d, d));
      Vector gpsi = (g * psi - psi * ((psi.adjoint() * g * psi)(0, 0) / t)) / t;
      *grad = detail::pack_wirtinger(gpsi);
    }
    return -(sm - s1);
  };
  auto cert = [n](const RealVector& xv) {
    Vector psi = detail::unpack_vector(xv, n).normalized();
    return Matrix(psi * psi.adjoint());
  };
  NormEstimate est = detail::run_restarts(f, 2 * n, cert, cfg);
  return -est.value;
}

enum class SampleDomain { UnitVector, PsdSchattenBall, DensityMatrix };

struct DomainSpec {
  SampleDomain kind = SampleDomain::UnitVector;
  int dim = 2;
  PNorm ball_index = PNorm(2.0);  // PsdSchattenBall normalizes ||A||_{ball_index} = 1
};

/// Independent sampling oracle: draws `samples` random domain points, tracks
/// the running max, then polishes the best point with a derivative-free
/// pattern search. Deterministic given the seed; the sample stream is a
/// prefix, so raising `samples` never loses earlier draws.
inline double brute_force_sup(const std::function<double(const Matrix&)>& objective,
                              const DomainSpec& spec, int samples, std::uint64_t seed) {
  const int d = spec.dim;
  const int nparams = spec.kind == SampleDomain::UnitVector ? 2 * d : 2 * d * d;
  auto to_point = [&spec, d](const RealVector& x) -> Matrix {
    if (spec.kind == SampleDomain::UnitVector) {
      Vector v = detail::unpack_vector(x, d);
      double nn = v.norm();
      return nn > 0.0 ? Matrix(v / nn) : Matrix(v);
    }
    Matrix b = detail::unpack_matrix(x, d, d);
    Matrix a = hermitize(b.adjoint() * b);
    double nn = spec.kind == SampleDomain::DensityMatrix
                    ? a.real().trace()
                    : schatten_norm(a, spec.ball_index);
    return nn > 0.0 ? Matrix(a / nn) : a;
  };
  Rng rng(seed);
  double best = -std::numeric_limits<double>::infinity();
  RealVector best_x;
  for (int s = 0; s < samples; ++s) {
    RealVector x = rng.gaussian_real_vector(nparams);
    double v = objective(to_point(x));
    if (v > best) {
      best = v;
      best_x = std::move(x);
    }
  }
  // one local polish: deterministic coordinate pattern search from the best draw
  double sampled_best = best;
  RealVector x = best_x.normalized();
  double v = objective(to_point(x));
  double step = 0.1;
  while (step > 1e-7) {
    bool improved = false;
    for (int i = 0; i < nparams; ++i) {
      for (double sgn : {1.0, -1.0}) {
        RealVector trial = x;
        trial[i] += sgn * step;
        double vt = objective(to_point(trial));
        if (vt > v) {
          v = vt;
          x = std::move(trial);
          improved = true;
        }
      }
    }
    if (!improved) step *= 0.5;
  }
  return std::max(v, sampled_best);
}

}  // namespace chnorm
