#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "chnorm/channel.hpp"

using namespace chnorm;

namespace {

double maxdiff(const Matrix& a, const Matrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

Matrix random_density(Rng& rng, int d) {
  Matrix b = rng.gaussian_matrix(d, d);
  Matrix a = hermitize(b.adjoint() * b);
  return a / a.real().trace();
}

Matrix matrix_unit(int d, int i, int j) {
  Matrix m = Matrix::Zero(d, d);
  m(i, j) = 1.0;
  return m;
}

}  // namespace

TEST_CASE("apply: identity, dephasing, depolarizing") {
  Rng rng(1);
  Matrix rho = random_density(rng, 2);

  CHECK(maxdiff(identity_channel(2).apply(rho), rho) < 1e-14);

  Matrix out = dephasing_channel(0.5).apply(rho);
  CHECK(std::abs(out(0, 0) - rho(0, 0)) < 1e-14);
  CHECK(std::abs(out(0, 1)) < 1e-14);
  CHECK(std::abs(out(1, 0)) < 1e-14);
  CHECK(std::abs(out(1, 1) - rho(1, 1)) < 1e-14);

  Matrix dep = depolarizing_channel(2, 0.0).apply(rho);
  CHECK(maxdiff(dep, 0.5 * Matrix::Identity(2, 2)) < 1e-12);
}

TEST_CASE("apply preserves trace and positivity") {
  Rng rng(2);
  for (int trial = 0; trial < 10; ++trial) {
    QuantumChannel ch = random_channel(3, 2, 4, rng.bits());
    Matrix rho = random_density(rng, 3);
    Matrix out = ch.apply(rho);
    CHECK(std::abs(out.real().trace() - 1.0) < 1e-10);
    CHECK(herm_eig(out).eigenvalues.minCoeff() > -1e-10);
  }
}

TEST_CASE("choi_from_channel") {
  // identity on M_d has rank-1 Choi matrix with trace d
  for (int d : {2, 3}) {
    Matrix x = choi_from_channel(identity_channel(d)).matrix;
    CHECK(std::abs(x.real().trace() - d) < 1e-12);
    HermEig eig = herm_eig(x);
    CHECK(eig.eigenvalues.maxCoeff() == doctest::Approx(static_cast<double>(d)));
    CHECK(eig.eigenvalues.head(d * d - 1).cwiseAbs().maxCoeff() < 1e-12);
  }

  // trace channel M_d -> M_1 has Choi matrix I_d
  Matrix xt = choi_from_channel(trace_channel(3)).matrix;
  CHECK(maxdiff(xt, Matrix::Identity(3, 3)) < 1e-14);

  // random channel: Tr X = d and Tr_2 X = I_d
  Rng rng(3);
  QuantumChannel ch = random_channel(3, 2, 3, rng.bits());
  ChoiMatrix x = choi_from_channel(ch);
  CHECK(std::abs(x.matrix.real().trace() - 3.0) < 1e-10);
  CHECK(maxdiff(partial_trace(x.matrix, 3, 2, 2), Matrix::Identity(3, 3)) < 1e-10);
  x.validate();
}

TEST_CASE("kraus_from_choi") {
  // Choi I_d is the trace channel
  ChoiMatrix xi{3, 1, Matrix::Identity(3, 3)};
  QuantumChannel tr = kraus_from_choi(xi);
  Rng rng(4);
  Matrix rho = random_density(rng, 3);
  CHECK(std::abs(tr.apply(rho)(0, 0) - rho.trace()) < 1e-12);

  // Choi of identity gives a single Kraus operator, identity up to phase
  QuantumChannel id = kraus_from_choi(choi_from_channel(identity_channel(3)));
  CHECK(id.kappa() == 1);
  Complex phase = id.kraus[0](0, 0);
  CHECK(maxdiff(id.kraus[0], phase * Matrix::Identity(3, 3)) < 1e-10);

  // round trip on random channels
  for (int trial = 0; trial < 5; ++trial) {
    QuantumChannel ch = random_channel(3, 2, 4, rng.bits());
    ChoiMatrix x = choi_from_channel(ch);
    ChoiMatrix x2 = choi_from_channel(kraus_from_choi(x));
    CHECK(maxdiff(x.matrix, x2.matrix) < 1e-9);
  }
}

TEST_CASE("stinespring_from_kraus") {
  // identity channel has kappa = 1, so V is square and unitary
  StinespringIsometry vi = stinespring_from_kraus(identity_channel(2));
  Matrix vvd = vi.v * vi.v.adjoint();
  CHECK(maxdiff(vvd, Matrix::Identity(2, 2)) < 1e-14);

  // dephasing: V V^dag blocks (1-t) I, sqrt(t(1-t)) Z, t I
  double t = 0.3;
  StinespringIsometry vd = stinespring_from_kraus(dephasing_channel(t));
  Matrix z = Matrix::Zero(2, 2);
  z(0, 0) = 1.0;
  z(1, 1) = -1.0;
  Matrix m = vd.v * vd.v.adjoint();  // 4x4, indices (i, k) -> i*2 + k
  Matrix b00(2, 2), b01(2, 2), b11(2, 2);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      b00(i, j) = m(i * 2 + 0, j * 2 + 0);
      b01(i, j) = m(i * 2 + 0, j * 2 + 1);
      b11(i, j) = m(i * 2 + 1, j * 2 + 1);
    }
  CHECK(maxdiff(b00, (1 - t) * Matrix::Identity(2, 2)) < 1e-12);
  CHECK(maxdiff(b01, std::sqrt(t * (1 - t)) * z) < 1e-12);
  CHECK(maxdiff(b11, t * Matrix::Identity(2, 2)) < 1e-12);

  // random channel: V^dag (rho (x) I) V reproduces the Kraus action,
  // and Tr_2 V V^dag = I
  Rng rng(5);
  QuantumChannel ch = random_channel(3, 2, 3, rng.bits());
  StinespringIsometry st = stinespring_from_kraus(ch);
  CHECK(maxdiff(partial_trace(st.v * st.v.adjoint(), 3, 3, 2), Matrix::Identity(3, 3)) < 1e-10);
  for (int trial = 0; trial < 5; ++trial) {
    Matrix rho = random_density(rng, 3);
    Matrix via_v =
        st.v.adjoint() * tensor(rho, Matrix::Identity(st.kappa, st.kappa)) * st.v;
    CHECK(maxdiff(via_v, ch.apply(rho)) < 1e-10);
  }
}

TEST_CASE("conjugate channel") {
  Rng rng(6);

  // conjugate of the identity is the trace channel
  QuantumChannel ct = conjugate(identity_channel(3));
  CHECK(ct.d_out == 1);
  Matrix rho = random_density(rng, 3);
  CHECK(std::abs(ct.apply(rho)(0, 0) - rho.trace()) < 1e-12);

  // conjugate of the trace channel written with bra Kraus operators:
  // Phi^C(rho)_{jk} = Tr(<e_j| rho |e_k>) = rho_{jk}, the identity action
  QuantumChannel ci = conjugate(trace_channel(3));
  CHECK(ci.d_out == 3);
  CHECK(maxdiff(ci.apply(rho), rho) < 1e-12);

  // dephasing t = 0.5: Phi^C(rho) = 0.5 [[Tr rho, Tr(Z rho)], [Tr(rho Z), Tr rho]]
  QuantumChannel cd = conjugate(dephasing_channel(0.5));
  Matrix z = Matrix::Zero(2, 2);
  z(0, 0) = 1.0;
  z(1, 1) = -1.0;
  Matrix rho2 = random_density(rng, 2);
  Matrix out = cd.apply(rho2);
  CHECK(std::abs(out(0, 0) - 0.5 * rho2.trace()) < 1e-12);
  CHECK(std::abs(out(0, 1) - 0.5 * (z * rho2).trace()) < 1e-12);
  CHECK(std::abs(out(1, 0) - 0.5 * (rho2 * z).trace()) < 1e-12);
  CHECK(std::abs(out(1, 1) - 0.5 * rho2.trace()) < 1e-12);
}

TEST_CASE("conjugation is a dimension/spectrum involution") {
  Rng rng(7);
  QuantumChannel ch = random_channel(3, 2, 4, rng.bits());
  QuantumChannel cc = conjugate(conjugate(ch));
  CHECK(cc.d_in == ch.d_in);
  CHECK((cc.d_out == ch.kappa() || cc.d_out == ch.d_out));  // a dilation dimension
  // the Choi matrices share their nonzero spectrum
  RealVector s1 = herm_eig(choi_from_channel(ch).matrix).eigenvalues;
  RealVector s2 = herm_eig(choi_from_channel(cc).matrix).eigenvalues;
  std::vector<double> nz1, nz2;
  for (Eigen::Index i = 0; i < s1.size(); ++i)
    if (s1[i] > 1e-9) nz1.push_back(s1[i]);
  for (Eigen::Index i = 0; i < s2.size(); ++i)
    if (s2[i] > 1e-9) nz2.push_back(s2[i]);
  REQUIRE(nz1.size() == nz2.size());
  for (std::size_t i = 0; i < nz1.size(); ++i)
    CHECK(nz1[i] == doctest::Approx(nz2[i]).epsilon(1e-8));
}

TEST_CASE("lemma1_pair: X_{Phi^C} = (V V^dag)^T") {
  // identity channel: both sides equal I_d
  Lemma1Pair pi = lemma1_pair(identity_channel(3));
  CHECK(maxdiff(pi.conjugate_choi, Matrix::Identity(3, 3)) < 1e-14);
  CHECK(maxdiff(pi.stinespring_transpose, Matrix::Identity(3, 3)) < 1e-14);

  // random channel d=3, kappa=4
  Rng rng(8);
  Lemma1Pair pr = lemma1_pair(random_channel(3, 2, 4, rng.bits()));
  CHECK(maxdiff(pr.conjugate_choi, pr.stinespring_transpose) < 1e-10);

  // dephasing t = 0.3: both sides equal the hand-computed block matrix
  double t = 0.3;
  Lemma1Pair pd = lemma1_pair(dephasing_channel(t));
  Matrix expect(4, 4);
  double c = std::sqrt(t * (1 - t));
  expect << 1 - t, c, 0, 0,
            c, t, 0, 0,
            0, 0, 1 - t, -c,
            0, 0, -c, t;
  CHECK(maxdiff(pd.conjugate_choi, expect) < 1e-12);
  CHECK(maxdiff(pd.stinespring_transpose, expect) < 1e-12);
}

TEST_CASE("lemma1 holds across generated channels") {
  Rng rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    int d = 1 + rng.below(4), dp = 1 + rng.below(4), k = 1 + rng.below(8);
    while (dp * k < d) ++k;
    Lemma1Pair p = lemma1_pair(random_channel(d, dp, k, rng.bits()));
    CHECK(maxdiff(p.conjugate_choi, p.stinespring_transpose) < 1e-10);
  }
}

TEST_CASE("tensor_channels") {
  Rng rng(10);
  QuantumChannel ii = tensor_channels(identity_channel(2), identity_channel(3));
  Matrix rho = random_density(rng, 6);
  CHECK(maxdiff(ii.apply(rho), rho) < 1e-12);

  // Phi (x) Tr on a product state gives Phi(rho1) Tr(rho2)
  QuantumChannel ch = random_channel(2, 2, 2, rng.bits());
  QuantumChannel pt = tensor_channels(ch, trace_channel(3));
  Matrix r1 = random_density(rng, 2), r2 = random_density(rng, 3);
  CHECK(maxdiff(pt.apply(tensor(r1, r2)), ch.apply(r1) * r2.trace()) < 1e-12);

  CHECK(pt.kappa() == ch.kappa() * 3);  // kappa multiplies before canonicalization

  // commutes with apply on product states
  QuantumChannel ch2 = random_channel(3, 2, 2, rng.bits());
  QuantumChannel prod = tensor_channels(ch, ch2);
  CHECK(maxdiff(prod.apply(tensor(r1, r2)), tensor(ch.apply(r1), ch2.apply(r2))) < 1e-12);
}

TEST_CASE("random_channel") {
  QuantumChannel a = random_channel(3, 2, 4, 77);
  QuantumChannel b = random_channel(3, 2, 4, 77);
  REQUIRE(a.kappa() == b.kappa());
  for (int k = 0; k < a.kappa(); ++k) CHECK(maxdiff(a.kraus[k], b.kraus[k]) == 0.0);

  // trace preservation within 1e-12
  Matrix sum = Matrix::Zero(3, 3);
  for (const Matrix& f : a.kraus) sum += f.adjoint() * f;
  CHECK(maxdiff(sum, Matrix::Identity(3, 3)) < 1e-12);

  // kappa = 1 forces a unitary channel
  QuantumChannel u = random_channel(2, 2, 1, 5);
  CHECK(maxdiff(u.kraus[0].adjoint() * u.kraus[0], Matrix::Identity(2, 2)) < 1e-12);

  CHECK_THROWS_AS(random_channel(4, 1, 2, 0), std::invalid_argument);
}

TEST_CASE("weyl_unitaries and the twirl identity") {
  std::vector<Matrix> w2 = weyl_unitaries(2);
  REQUIRE(w2.size() == 4);
  Matrix x(2, 2), z(2, 2);
  x << 0, 1, 1, 0;
  z << 1, 0, 0, -1;
  CHECK(maxdiff(w2[0], Matrix::Identity(2, 2)) < 1e-14);
  CHECK(maxdiff(w2[1], z) < 1e-14);
  CHECK(maxdiff(w2[2], x) < 1e-14);
  CHECK(maxdiff(w2[3], x * z) < 1e-14);

  Matrix a(2, 2);
  a << 1, 5, 7, 2;
  Matrix tw = Matrix::Zero(2, 2);
  for (const Matrix& u : w2) tw += u * a * u.adjoint();
  CHECK(maxdiff(tw, 2.0 * a.trace() * Matrix::Identity(2, 2)) < 1e-12);

  Rng rng(20);
  for (int n : {2, 3, 4}) {
    std::vector<Matrix> ws = weyl_unitaries(n);
    for (const Matrix& u : ws)
      CHECK(maxdiff(u.adjoint() * u, Matrix::Identity(n, n)) < 1e-12);
    for (int trial = 0; trial < 20; ++trial) {
      Matrix m = rng.gaussian_matrix(n, n);
      Matrix t = Matrix::Zero(n, n);
      for (const Matrix& u : ws) t += u * m * u.adjoint();
      CHECK(maxdiff(t, static_cast<double>(n) * m.trace() * Matrix::Identity(n, n)) < 1e-10);
    }
  }
}

TEST_CASE("named channels") {
  Rng rng(21);
  Matrix rho = random_density(rng, 2);

  CHECK(maxdiff(named_channel("depolarize", {.d = 2, .lambda = 0.0}).apply(rho),
                0.5 * Matrix::Identity(2, 2)) < 1e-12);
  CHECK(maxdiff(named_channel("dephase", {.t = 0.0}).apply(rho), rho) < 1e-14);

  // uniform Weyl mixture is completely depolarizing
  QuantumChannel wu = named_channel("weyl_covariant", {.d = 2});
  CHECK(maxdiff(wu.apply(rho), 0.5 * Matrix::Identity(2, 2)) < 1e-12);

  // transpose-depolarizing acts as (Tr(rho) I - rho^T)/(d-1)
  QuantumChannel wh = named_channel("transpose_depolarize", {.d = 3});
  Matrix r3 = random_density(rng, 3);
  CHECK(maxdiff(wh.apply(r3), (Matrix::Identity(3, 3) - r3.transpose()) / 2.0) < 1e-10);

  CHECK_THROWS_AS(named_channel("nope", {}), std::invalid_argument);
  CHECK_THROWS_AS(depolarizing_channel(2, 1.5), std::invalid_argument);
  CHECK_THROWS_AS(depolarizing_channel(2, -0.5), std::invalid_argument);  // below -1/(d^2-1)
}

TEST_CASE("lindblad form reproduces the Kraus action") {
  Rng rng(22);
  QuantumChannel ch = random_channel(3, 2, 3, rng.bits());
  LindbladForm lf = lindblad_from_kraus(ch);

  // U^dag U is the identity on C^d (x) |phi>
  Matrix udu = lf.u.adjoint() * lf.u;
  Matrix proj = tensor(Matrix::Identity(3, 3), lf.phi * lf.phi.adjoint());
  CHECK(maxdiff(udu, proj) < 1e-10);

  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      Matrix unit = matrix_unit(3, i, j);
      CHECK(maxdiff(lf.apply(unit), ch.apply(unit)) < 1e-10);
    }

  // F_k = Tr_2 U (I (x) |phi><e_k|)
  for (int k = 0; k < ch.kappa(); ++k) {
    Matrix bra = Matrix::Zero(lf.kappa, lf.kappa);
    bra.col(k) = lf.phi;
    // Tr_2 of U (I (x) |phi><e_k|) as a map C^d -> C^{d'}
    Matrix big = lf.u * tensor(Matrix::Identity(3, 3), bra);
    Matrix f = Matrix::Zero(ch.d_out, ch.d_in);
    for (int a = 0; a < ch.d_out; ++a)
      for (int i = 0; i < ch.d_in; ++i)
        for (int m = 0; m < lf.kappa; ++m) f(a, i) += big(a * lf.kappa + m, i * lf.kappa + m);
    CHECK(maxdiff(f, ch.kraus[k]) < 1e-10);
  }
}

TEST_CASE("kraus round trip reproduces apply on matrix units") {
  Rng rng(23);
  QuantumChannel ch = random_channel(3, 2, 4, rng.bits());
  QuantumChannel rt = kraus_from_choi(choi_from_channel(ch));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      Matrix unit = matrix_unit(3, i, j);
      CHECK(maxdiff(rt.apply(unit), ch.apply(unit)) < 1e-9);
    }
}
