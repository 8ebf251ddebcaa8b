#pragma once

#include <chrono>
#include <string>
#include <vector>

#include "chnorm/normcalc.hpp"

namespace chnorm {

struct SuiteOptions {
  std::uint64_t seed = 0;
  bool quick = false;  // shrinks instance counts for smoke runs
  OptimizerConfig opt;
};

struct VerificationInstance {
  std::string channel;  // human-readable descriptor
  std::string p;        // Schatten index, empty when not applicable
  std::string q;        // second index, empty when not applicable
  double lhs = 0.0;
  double rhs = 0.0;
  double abs_diff = 0.0;
  double rel_diff = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  std::string note;
};

/// Per-identity pass/fail record. A failing instance never aborts a suite;
/// failures are collected and summarized.
struct VerificationReport {
  std::string identity_name;
  std::vector<VerificationInstance> instances;
  std::uint64_t seed = 0;
  double wall_time_s = 0.0;

  int total() const { return static_cast<int>(instances.size()); }
  int passed() const {
    int n = 0;
    for (const auto& i : instances) n += i.passed ? 1 : 0;
    return n;
  }
  double max_rel_diff() const {
    double m = 0.0;
    for (const auto& i : instances) m = std::max(m, i.rel_diff);
    return m;
  }
  bool all_passed() const { return passed() == total(); }
};

namespace detail {

/// Difference against an exact-zero target: pass iff |diff| <= tol.
inline VerificationInstance zero_target_instance(std::string desc, double diff, double tol) {
  VerificationInstance inst;
  inst.channel = std::move(desc);
  inst.lhs = diff;
  inst.rhs = 0.0;
  inst.abs_diff = std::abs(diff);
  inst.rel_diff = inst.abs_diff;
  inst.tolerance = tol;
  inst.passed = inst.abs_diff <= tol;
  return inst;
}

/// Equality of two computed quantities at a relative tolerance
/// (relative to max(1, values), matching the estimator error model).
inline VerificationInstance equality_instance(std::string desc, const PNorm& p, double lhs,
                                              double rhs, double tol, std::string q = "") {
  VerificationInstance inst;
  inst.channel = std::move(desc);
  inst.p = p.str();
  inst.q = std::move(q);
  inst.lhs = lhs;
  inst.rhs = rhs;
  inst.abs_diff = std::abs(lhs - rhs);
  inst.rel_diff = inst.abs_diff / std::max(1.0, std::max(lhs, rhs));
  inst.tolerance = tol;
  inst.passed = inst.rel_diff <= tol;
  // both sides are lower-bound estimators; a genuine violation can only show
  // up as one certified side exceeding the other
  inst.note = lhs < rhs ? "lhs<rhs" : (lhs > rhs ? "lhs>rhs" : "equal");
  return inst;
}

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

struct DescribedChannel {
  std::string desc;
  QuantumChannel ch;
};

inline std::vector<DescribedChannel> random_suite(int count, int max_d, int max_kappa,
                                                  std::uint64_t seed) {
  std::vector<DescribedChannel> suite;
  Rng rng(seed, 0xc4a17e);
  for (int i = 0; i < count; ++i) {
    int d_in = 1 + rng.below(max_d);
    int d_out = 1 + rng.below(max_d);
    int kap = 1 + rng.below(max_kappa);
    while (d_out * kap < d_in) ++kap;
    std::uint64_t s = rng.bits();
    suite.push_back({"random(d=" + std::to_string(d_in) + ",d'=" + std::to_string(d_out) +
                         ",k=" + std::to_string(kap) + ",#" + std::to_string(i) + ")",
                     random_channel(d_in, d_out, kap, s)});
  }
  return suite;
}

}  // namespace detail

/// X_{Phi^C} = (V V^dag)^T, max-entry difference, tolerance 1e-10.
inline VerificationReport verify_lemma1(const SuiteOptions& opts = {}) {
  detail::Stopwatch sw;
  VerificationReport rep;
  rep.identity_name = "lemma1";
  rep.seed = opts.seed;
  const double tol = 1e-10;
  auto check = [&](const std::string& desc, const QuantumChannel& ch) {
    Lemma1Pair pair = lemma1_pair(ch);
    double diff = (pair.conjugate_choi - pair.stinespring_transpose).cwiseAbs().maxCoeff();
    rep.instances.push_back(detail::zero_target_instance(desc, diff, tol));
  };
  for (int d = 2; d <= 4; ++d) check("identity(d=" + std::to_string(d) + ")", identity_channel(d));
  for (double t : {0.0, 0.3, 0.5, 1.0})
    check("dephase(t=" + std::to_string(t) + ")", dephasing_channel(t));
  int n_random = opts.quick ? 10 : 100;
  for (const auto& dc : detail::random_suite(n_random, 4, 8, opts.seed)) check(dc.desc, dc.ch);
  rep.wall_time_s = sw.seconds();
  return rep;
}

/// ||Phi||_{p->p} = omega_p(Phi^C), both sides by optimizer, tolerance 1e-4.
inline VerificationReport verify_theorem2(const SuiteOptions& opts = {},
                                          std::vector<PNorm> ps = {PNorm(1), PNorm(1.5), PNorm(2),
                                                                   PNorm(3), PNorm::infinity()}) {
  detail::Stopwatch sw;
  VerificationReport rep;
  rep.identity_name = "theorem2";
  rep.seed = opts.seed;
  const double tol = 1e-4;
  std::vector<detail::DescribedChannel> suite = {
      {"identity(d=2)", identity_channel(2)},
      {"depolarize(2,0)", depolarizing_channel(2, 0.0)},
  };
  int n_random = opts.quick ? 3 : 20;
  if (opts.quick) ps = {PNorm(1), PNorm(2)};
  for (auto& dc : detail::random_suite(n_random, 3, 3, opts.seed)) suite.push_back(std::move(dc));
  for (const auto& dc : suite) {
    QuantumChannel conj = conjugate(dc.ch);
    for (const PNorm& p : ps) {
      double lhs = norm_q_to_p(dc.ch, p, p, opts.opt).value;
      double rhs = omega_p_choi(conj, p, opts.opt).value;
      rep.instances.push_back(detail::equality_instance(dc.desc, p, lhs, rhs, tol));
    }
  }
  rep.wall_time_s = sw.seconds();
  return rep;
}

/// ||Phi1 (x) Phi2||_{p->p} and omega_p(Phi1 (x) Phi2) factor into products,
/// tolerance 2e-3 (optimization on the product space is harder).
inline VerificationReport verify_multiplicativity(const SuiteOptions& opts = {},
                                                  std::vector<PNorm> ps = {PNorm(1.5), PNorm(2),
                                                                           PNorm(3)}) {
  detail::Stopwatch sw;
  VerificationReport rep;
  rep.identity_name = "multiplicativity";
  rep.seed = opts.seed;
  const double tol = 2e-3;
  int n_pairs = opts.quick ? 2 : 10;
  if (opts.quick) ps = {PNorm(2)};
  Rng rng(opts.seed, 0x3a1b);
  for (int i = 0; i < n_pairs; ++i) {
    QuantumChannel ch1 = random_channel(2, 2, 1 + rng.below(2), rng.bits());
    QuantumChannel ch2 =
        i == 0 ? identity_channel(2) : random_channel(2, 2, 1 + rng.below(2), rng.bits());
    QuantumChannel prod = tensor_channels(ch1, ch2);
    std::string desc = "pair#" + std::to_string(i);
    for (const PNorm& p : ps) {
      double n1 = norm_q_to_p(ch1, p, p, opts.opt).value;
      double n2 = norm_q_to_p(ch2, p, p, opts.opt).value;
      double np = norm_q_to_p(prod, p, p, opts.opt).value;
      rep.instances.push_back(
          detail::equality_instance(desc + " norm_pp", p, np, n1 * n2, tol));
      double w1 = omega_p_choi(ch1, p, opts.opt).value;
      double w2 = omega_p_choi(ch2, p, opts.opt).value;
      double wp = omega_p_choi(prod, p, opts.opt).value;
      rep.instances.push_back(detail::equality_instance(desc + " omega", p, wp, w1 * w2, tol));
    }
  }
  rep.wall_time_s = sw.seconds();
  return rep;
}

/// omega_p(Phi (x) Tr) = omega_p(Tr (x) Phi) = omega_p(Phi), tolerance 1e-3.
inline VerificationReport verify_trace_tensor(const SuiteOptions& opts = {},
                                              std::vector<PNorm> ps = {PNorm(2), PNorm(3)}) {
  detail::Stopwatch sw;
  VerificationReport rep;
  rep.identity_name = "trace-tensor";
  rep.seed = opts.seed;
  const double tol = 1e-3;
  const int trace_dim = 2;
  std::vector<detail::DescribedChannel> suite = {{"identity(d=2)", identity_channel(2)}};
  int n_random = opts.quick ? 1 : 4;
  if (opts.quick) ps = {PNorm(2)};
  Rng rng(opts.seed, 0x77aa);
  for (int i = 0; i < n_random; ++i)
    suite.push_back({"random qubit#" + std::to_string(i),
                     random_channel(2, 2, 1 + rng.below(2), rng.bits())});
  QuantumChannel tr = trace_channel(trace_dim);
  for (const auto& dc : suite) {
    for (const PNorm& p : ps) {
      double base = omega_p_choi(dc.ch, p, opts.opt).value;
      double left = omega_p_choi(tensor_channels(dc.ch, tr), p, opts.opt).value;
      double right = omega_p_choi(tensor_channels(tr, dc.ch), p, opts.opt).value;
      rep.instances.push_back(
          detail::equality_instance(dc.desc + " phi(x)tr", p, left, base, tol));
      rep.instances.push_back(
          detail::equality_instance(dc.desc + " tr(x)phi", p, right, base, tol));
    }
  }
  rep.wall_time_s = sw.seconds();
  return rep;
}

/// King's lemma for covariant channels Omega: the closed form
/// omega_p(Omega) = n^{-1/p} ||X_Omega||_p (tolerance 1e-8), the factorization
/// omega_p(Omega (x) Phi) = omega_p(Omega) omega_p(Phi) (tolerance 2e-3), and
/// concavity probes of g_p.
inline VerificationReport verify_king_lemma(const SuiteOptions& opts = {},
                                            std::vector<PNorm> ps = {PNorm(1.5), PNorm(2),
                                                                     PNorm(3)}) {
  detail::Stopwatch sw;
  VerificationReport rep;
  rep.identity_name = "king";
  rep.seed = opts.seed;
  Rng rng(opts.seed, 0x516);
  if (opts.quick) ps = {PNorm(2)};
  auto random_probs = [&rng](int n2) {
    std::vector<double> p(n2);
    double sum = 0.0;
    for (double& v : p) {
      v = rng.uniform();
      sum += v;
    }
    for (double& v : p) v /= sum;
    return p;
  };
  std::vector<std::pair<std::string, QuantumChannel>> covariant = {
      {"weyl_covariant(2,uniform)", weyl_covariant_channel(2, {0.25, 0.25, 0.25, 0.25})},
      {"weyl_covariant(2,random)", weyl_covariant_channel(2, random_probs(4))},
      {"depolarize(2,0.7)", depolarizing_channel(2, 0.7)},
  };
  if (!opts.quick) {
    covariant.emplace_back("weyl_covariant(3,random)", weyl_covariant_channel(3, random_probs(9)));
    covariant.emplace_back("depolarize(3,0.4)", depolarizing_channel(3, 0.4));
  }
  for (const auto& [desc, omega] : covariant) {
    Matrix x = choi_from_channel(omega).matrix;
    const int n = omega.d_in;
    for (const PNorm& p : ps) {
      double closed = std::pow(n, -1.0 / p.value()) * schatten_norm(x, p);
      double opt = omega_p_choi(omega, p, opts.opt).value;
      rep.instances.push_back(
          detail::equality_instance(desc + " closed-form", p, opt, closed, 1e-8));
    }
  }
  // factorization against a partner channel
  std::vector<std::pair<std::string, QuantumChannel>> partners = {
      {"identity(2)", identity_channel(2)},
      {"random qubit", random_channel(2, 2, 2, rng.bits())},
  };
  const auto& [odesc, omega] = covariant[opts.quick ? 0 : 1];
  for (const auto& [pdesc, phi] : partners) {
    QuantumChannel prod = tensor_channels(omega, phi);
    for (const PNorm& p : ps) {
      double wo = omega_p_choi(omega, p, opts.opt).value;
      double wphi = omega_p_choi(phi, p, opts.opt).value;
      double wprod = omega_p_choi(prod, p, opts.opt).value;
      rep.instances.push_back(detail::equality_instance(odesc + " (x) " + pdesc, p, wprod,
                                                        wo * wphi, 2e-3));
    }
  }
  // concavity of rho -> g_p(rho, Phi)
  int n_probes = opts.quick ? 20 : 200;
  double min_deficit = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n_probes; ++i) {
    QuantumChannel ch = random_channel(2, 2, 1 + rng.below(3), rng.bits());
    auto rand_density = [&rng]() {
      Matrix b = rng.gaussian_matrix(2, 2);
      Matrix a = hermitize(b.adjoint() * b);
      return Matrix(a / a.real().trace());
    };
    PNorm p = ps[i % ps.size()];
    auto deficits = concavity_probe(ch, p, rand_density(), rand_density(), {0.25, 0.5, 0.75});
    for (double d : deficits) min_deficit = std::min(min_deficit, d);
  }
  VerificationInstance conc =
      detail::zero_target_instance("g_p concavity min deficit", std::min(min_deficit, 0.0), 1e-9);
  conc.note = "deficit >= -tol";
  rep.instances.push_back(conc);
  rep.wall_time_s = sw.seconds();
  return rep;
}

}  // namespace chnorm
