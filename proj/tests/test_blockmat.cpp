#include <gtest/gtest.h>

#include "entlab/blockmat.hpp"
#include "entlab/random.hpp"

using namespace entlab;

namespace {

CMat diag(std::initializer_list<double> d) {
  RVec v(static_cast<Eigen::Index>(d.size()));
  Eigen::Index i = 0;
  for (double x : d) v(i++) = x;
  return v.cast<Complex>().asDiagonal();
}

CMat pauli_x() {
  CMat x(2, 2);
  x << 0, 1, 1, 0;
  return x;
}

CMat bell_density() {
  CVec v = CVec::Zero(4);
  v(0) = v(3) = 1.0 / std::sqrt(2.0);
  return v * v.adjoint();
}

}  // namespace

TEST(Kron, IdentityAndProjectors) {
  EXPECT_LT(max_abs(kron(CMat::Identity(2, 2), CMat::Identity(2, 2)) - CMat::Identity(4, 4)), 1e-15);
  EXPECT_LT(max_abs(kron(diag({1, 0}), diag({0, 1})) - diag({0, 1, 0, 0})), 1e-15);
}

TEST(Kron, PauliXIsAntiDiagonal) {
  CMat expected = CMat::Zero(4, 4);
  for (int i = 0; i < 4; ++i) expected(i, 3 - i) = 1.0;
  EXPECT_LT(max_abs(kron(pauli_x(), pauli_x()) - expected), 1e-15);
}

TEST(Kron, IndexConvention) {
  Rng rng(3);
  const CMat a = ginibre(2, 3, rng), b = ginibre(3, 2, rng);
  const CMat k = kron(a, b);
  ASSERT_EQ(k.rows(), 6);
  ASSERT_EQ(k.cols(), 6);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 3; ++j)
      for (int r = 0; r < 3; ++r)
        for (int s = 0; s < 2; ++s) EXPECT_EQ(k(i * 3 + r, j * 2 + s), a(i, j) * b(r, s));
}

TEST(Kron, SizeLimit) {
  try {
    kron(CMat::Identity(64, 64), CMat::Identity(65, 65));
    FAIL() << "expected a size error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Size);
  }
  EXPECT_NO_THROW(kron(CMat::Identity(2, 2), CMat::Identity(3, 3), 6));
  EXPECT_THROW(kron(CMat::Identity(2, 2), CMat::Identity(3, 3), 5), Error);
}

TEST(Kron, RandomIdentities) {
  Rng rng(11);
  for (int t = 0; t < 20; ++t) {
    const CMat a = ginibre(2, 2, rng), b = ginibre(3, 3, rng), c = ginibre(2, 2, rng);
    EXPECT_LT(max_abs(kron(kron(a, b), c) - kron(a, kron(b, c))), 1e-12);
    EXPECT_LT(std::abs(kron(a, b).trace() - a.trace() * b.trace()), 1e-12);
  }
}

TEST(PartialTrace, Examples) {
  Rng rng(5);
  const CMat s = random_density(2, rng), r = random_density(3, rng);
  EXPECT_LT(max_abs(partial_trace(kron(s, r), 2, 3, Side::Left) - r * s.trace()), 1e-12);
  EXPECT_LT(max_abs(partial_trace(kron(s, r), 2, 3, Side::Right) - s * r.trace()), 1e-12);
  EXPECT_LT(max_abs(partial_trace(CMat::Identity(4, 4), 2, 2, Side::Right) - 2.0 * CMat::Identity(2, 2)), 1e-15);
  EXPECT_LT(max_abs(partial_trace(bell_density(), 2, 2, Side::Left) - 0.5 * CMat::Identity(2, 2)), 1e-15);
}

TEST(PartialTrace, ShapeErrors) {
  EXPECT_THROW(partial_trace(CMat::Identity(4, 4), 2, 3, Side::Left), Error);
  EXPECT_THROW(partial_trace(CMat::Identity(4, 3), 2, 2, Side::Left), Error);
  EXPECT_THROW(partial_trace(CMat::Identity(4, 4), 0, 4, Side::Left), Error);
}

TEST(HermEig, DiagonalInputSortsDescending) {
  const EigenSystem es = herm_eig(diag({0.25, 0.75}));
  EXPECT_NEAR(es.values(0), 0.75, 1e-15);
  EXPECT_NEAR(es.values(1), 0.25, 1e-15);
  EXPECT_NEAR(std::abs(es.vectors(1, 0)), 1.0, 1e-15);
  EXPECT_NEAR(std::abs(es.vectors(0, 1)), 1.0, 1e-15);
}

TEST(HermEig, IdentityGivesUnitary) {
  const EigenSystem es = herm_eig(CMat::Identity(5, 5));
  for (int i = 0; i < 5; ++i) EXPECT_NEAR(es.values(i), 1.0, 1e-15);
  EXPECT_LT(max_abs(es.vectors.adjoint() * es.vectors - CMat::Identity(5, 5)), 1e-14);
}

TEST(HermEig, TwoByTwoAllHalf) {
  CMat h(2, 2);
  h << 0.5, 0.5, 0.5, 0.5;
  const EigenSystem es = herm_eig(h);
  EXPECT_NEAR(es.values(0), 1.0, 1e-14);
  EXPECT_NEAR(es.values(1), 0.0, 1e-14);
  const double r = 1.0 / std::sqrt(2.0);
  // phase convention: first largest-modulus component real and nonnegative
  EXPECT_NEAR(std::abs(es.vectors(0, 0) - r), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(es.vectors(1, 0) - r), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(es.vectors(0, 1) - r), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(es.vectors(1, 1) + r), 0.0, 1e-12);
}

TEST(HermEig, ReconstructionUpTo64) {
  Rng rng(7);
  for (int n : {1, 2, 3, 8, 17, 64}) {
    const CMat h = hermitize(ginibre(n, n, rng));
    const EigenSystem es = herm_eig(h);
    EXPECT_LT(max_abs(es.vectors * es.values.cast<Complex>().asDiagonal() * es.vectors.adjoint() - h), 1e-10) << n;
    for (int i = 1; i < n; ++i) EXPECT_GE(es.values(i - 1), es.values(i));
    EXPECT_LT((herm_eigenvalues(h) - es.values).cwiseAbs().maxCoeff(), 1e-10) << n;
  }
}

TEST(HermEig, Rejections) {
  CMat h(2, 2);
  h << 1, 1, 0, 1;
  EXPECT_THROW(herm_eig(h), Error);
  EXPECT_THROW(herm_eig(CMat::Identity(2, 3)), Error);
  CMat bad = CMat::Identity(2, 2);
  bad(0, 0) = std::nan("");
  EXPECT_THROW(herm_eig(bad), Error);
}

TEST(HermEig, Deterministic) {
  Rng rng(1);
  const CMat h = hermitize(ginibre(6, 6, rng));
  const EigenSystem a = herm_eig(h), b = herm_eig(h);
  EXPECT_EQ(a.values, b.values);
  EXPECT_EQ(a.vectors, b.vectors);
}

TEST(SpectralFn, Examples) {
  EXPECT_LT(max_abs(spectral_fn(CMat::Identity(3, 3), SpectralFn::Ln)), 1e-15);
  EXPECT_LT(max_abs(spectral_fn(diag({4, 0}), SpectralFn::Sqrt) - diag({2, 0})), 1e-15);
  const CMat l = spectral_fn(diag({0.75, 0.25}), SpectralFn::Ln);
  EXPECT_NEAR(l(0, 0).real(), -0.287682072451781, 1e-12);
  EXPECT_NEAR(l(1, 1).real(), -1.386294361119891, 1e-12);
  EXPECT_LT(std::abs(l(0, 1)), 1e-15);
}

TEST(SpectralFn, NotPsdAndClipping) {
  try {
    spectral_fn(diag({1.0, -1e-6}), SpectralFn::Sqrt);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotPsd);
  }
  // tiny negative rounding is clipped, not rejected
  const CMat r = spectral_fn(diag({1.0, -1e-11}), SpectralFn::Sqrt);
  EXPECT_NEAR(r(1, 1).real(), 0.0, 1e-15);
  EXPECT_NEAR(spectral_fn(diag({1.0, 1e-13}), SpectralFn::Ln)(1, 1).real(), 0.0, 1e-15);
}

TEST(SpectralFn, SqrtSquaredAndExpLn) {
  Rng rng(13);
  for (int n : {2, 3, 5, 9}) {
    const CMat rho = random_density(n, rng);
    const CMat s = spectral_fn(rho, SpectralFn::Sqrt);
    EXPECT_LT(max_abs(s * s - rho), 1e-9);
    const EigenSystem es = herm_eig(spectral_fn(rho, SpectralFn::Ln));
    const CMat back = es.vectors * es.values.array().exp().matrix().cast<Complex>().asDiagonal() * es.vectors.adjoint();
    EXPECT_LT(max_abs(back - rho), 1e-9);
  }
}

TEST(TransposeTilde, Examples) {
  EXPECT_EQ(transpose_tilde(CMat::Identity(3, 3)), CMat::Identity(3, 3));
  CMat e01 = CMat::Zero(2, 2);
  e01(0, 1) = 1.0;
  EXPECT_EQ(transpose_tilde(e01), CMat(e01.transpose()));
  Rng rng(2);
  const CMat b = ginibre(3, 3, rng);
  // J B^† J with J entrywise conjugation
  EXPECT_LT(max_abs(transpose_tilde(b) - CMat(b.adjoint()).conjugate()), 1e-15);
}

TEST(MakeMatrix, RowMajorAndValidation) {
  const std::vector<Complex> e{1, 2, Complex(3, 1), 4, 5, 6};
  const CMat m = make_matrix(2, 3, e);
  EXPECT_EQ(m(0, 2), Complex(3, 1));
  EXPECT_EQ(m(1, 0), Complex(4, 0));
  EXPECT_THROW(make_matrix(2, 2, e), Error);
  EXPECT_THROW(make_matrix(0, 6, e), Error);
  const std::vector<Complex> inf{std::numeric_limits<double>::infinity()};
  EXPECT_THROW(make_matrix(1, 1, inf), Error);
}

TEST(Entropy, MatrixEntropyAndPsd) {
  EXPECT_NEAR(entropy_of_matrix(diag({0.75, 0.25})), 0.562335144618808, 1e-12);
  EXPECT_NEAR(entropy_of_matrix(diag({1, 0, 0})), 0.0, 1e-15);
  EXPECT_TRUE(is_psd(diag({1, 0})));
  EXPECT_FALSE(is_psd(diag({1, -1e-6})));
  EXPECT_THROW(entropy_of_matrix(diag({1.5, -0.5})), Error);
}
