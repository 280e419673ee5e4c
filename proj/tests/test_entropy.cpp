#include <gtest/gtest.h>

#include "entlab/entropy.hpp"
#include "entlab/random.hpp"

using namespace entlab;

namespace {

constexpr double kLn2 = 0.693147180559945;

CMat diag2(double a, double b) {
  CMat m = CMat::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

CompoundState bell() { return standard_compound(DensityState::simple(CMat::Identity(2, 2) / 2.0)); }

CompoundState product(const DensityState& s, const DensityState& r) {
  return CompoundState(kron(s.full(), r.full()), s.structure(), r.structure());
}

}  // namespace

TEST(VonNeumann, Examples) {
  CVec eta(3);
  eta << Complex(0.6, 0), Complex(0, 0.8), 0.0;
  EXPECT_NEAR(vn_entropy(DensityState::simple(eta * eta.adjoint())), 0.0, 1e-12);
  EXPECT_NEAR(vn_entropy(DensityState::simple(diag2(0.75, 0.25))), 0.562335144618808, 1e-12);
  EXPECT_NEAR(vn_entropy(tracial_state(BlockStructure({2}))), kLn2, 1e-12);
}

TEST(VonNeumann, MaximumIsLnRank) {
  Rng rng(5);
  for (const auto& dims : std::vector<std::vector<int>>{{2}, {3}, {2, 1}, {1, 1, 1}}) {
    const BlockStructure a(dims);
    EXPECT_NEAR(vn_entropy(uniform_state(a)), std::log(a.rank()), 1e-12);
    for (int t = 0; t < 10; ++t) EXPECT_LE(vn_entropy(random_state(a, rng)), std::log(a.rank()) + 1e-12);
  }
}

TEST(RelativeEntropy, Examples) {
  Rng rng(6);
  const CMat w = random_density(3, rng);
  EXPECT_NEAR(relative_entropy(w, w).value, 0.0, 1e-10);
  EXPECT_FALSE(relative_entropy(diag2(1, 0), diag2(0, 1)).finite);
  EXPECT_NEAR(relative_entropy(diag2(0.75, 0.25), diag2(0.5, 0.5)).value, 0.130812035941137, 1e-12);

  CMat w1(2, 2), p1(2, 2);
  w1 << 0.6, Complex(0.2, 0.1), Complex(0.2, -0.1), 0.4;
  p1 << 0.5, Complex(0, -0.1), Complex(0, 0.1), 0.5;
  EXPECT_NEAR(relative_entropy(w1, p1).value, 0.186288157478085, 1e-12);
}

TEST(RelativeEntropy, SupportContainmentIsFinite) {
  // ω supported inside supp φ: finite even though φ is singular
  EXPECT_TRUE(relative_entropy(diag2(1, 0), diag2(0.5, 0)).finite);
  EXPECT_NEAR(relative_entropy(diag2(1, 0), diag2(0.5, 0)).value, std::log(2.0), 1e-12);
  EXPECT_THROW(relative_entropy(diag2(1, 0), CMat::Identity(3, 3)), Error);
}

TEST(RelativeEntropy, KleinInequality) {
  Rng rng(7);
  for (int t = 0; t < 100; ++t) {
    const int n = 1 + t % 16;
    const CMat w = random_density(n, rng), p = random_density(n, rng);
    const EntropyReport r = relative_entropy(w, p);
    ASSERT_TRUE(r.finite);
    EXPECT_GE(r.value, -1e-9);
    if (n > 1) EXPECT_GT(r.value, 1e-9);
  }
}

TEST(MutualInformation, Examples) {
  Rng rng(8);
  const DensityState s = random_state(BlockStructure({2}), rng), r = random_state(BlockStructure({3}), rng);
  EXPECT_NEAR(mutual_information(product(s, r)).value, 0.0, 1e-10);
  EXPECT_NEAR(mutual_information(bell()).value, 2 * kLn2, 1e-12);
  const Decomposition sch = schatten_decomposition(DensityState::simple(diag2(0.75, 0.25)));
  EXPECT_NEAR(mutual_information(d_compound(sch)).value, 0.562335144618808, 1e-12);

  CVec eta(2);
  eta << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  const Decomposition pair({0.5 * diag2(1, 0), 0.5 * eta * eta.adjoint()}, DecompositionKind::Pure);
  EXPECT_NEAR(mutual_information(d_compound(pair)).value, 0.416495530699688, 1e-12);
}

TEST(MutualInformation, BreakdownAndRoutesAgree) {
  Rng rng(9);
  for (int t = 0; t < 40; ++t) {
    const CompoundState omega = compound_from_amplitude(random_amplitude(2 + t % 3, 1 + t % 4, 1 + t % 5, rng));
    const EntropyReport i = mutual_information(omega);
    const Marginals m = marginals(omega);
    EXPECT_NEAR(i.breakdown.at("S_B"), vn_entropy(m.b), 1e-12);
    EXPECT_NEAR(i.breakdown.at("S_A"), vn_entropy(m.a), 1e-12);
    EXPECT_NEAR(i.value, i.breakdown.at("S_B") + i.breakdown.at("S_A") - i.breakdown.at("S_BA"), 1e-12);
    EXPECT_NEAR(i.value, mutual_information_direct(omega).value, 1e-9);
  }
}

TEST(QEntropy, Examples) {
  CVec eta(2);
  eta << Complex(0.6, 0), Complex(0, 0.8);
  EXPECT_NEAR(q_entropy(DensityState::simple(eta * eta.adjoint())).value, 0.0, 1e-12);
  const EntropyReport h = q_entropy(DensityState::simple(CMat::Identity(2, 2) / 2.0));
  EXPECT_NEAR(h.value, 1.386294361119891, 1e-12);
  EXPECT_NEAR(h.breakdown.at("S_C"), 0.0, 1e-15);
  EXPECT_NEAR(h.breakdown.at("H_A|C"), 1.386294361119891, 1e-12);

  const DensityState ab(BlockStructure({1, 1}), {CMat::Constant(1, 1, 0.3), CMat::Constant(1, 1, 0.7)});
  EXPECT_NEAR(q_entropy(ab).value, 0.610864302054894, 1e-12);
  EXPECT_NEAR(vn_entropy(ab), 0.610864302054894, 1e-12);
}

TEST(QEntropy, TwoBlockClosedForm) {
  CMat r1(2, 2);
  r1 << 0.7, 0.2, 0.2, 0.3;
  const DensityState rho(BlockStructure({2, 1}), {0.6 * r1, CMat::Constant(1, 1, 0.4)});
  const EntropyReport h = q_entropy(rho);
  EXPECT_NEAR(h.value, 1.300955366720828, 1e-12);
  EXPECT_NEAR(h.breakdown.at("S_C") + h.breakdown.at("H_A|C"), h.value, 1e-12);
  EXPECT_NEAR(mutual_information(standard_compound(rho)).value, 1.300955366720828, 1e-10);
  EXPECT_NEAR(vn_entropy(rho), 0.986983516865042, 1e-12);
}

TEST(QEntropy, TracialIsLnDim) {
  for (const auto& dims : std::vector<std::vector<int>>{{2}, {3}, {2, 1}, {1, 1}}) {
    const BlockStructure a(dims);
    EXPECT_NEAR(q_entropy(tracial_state(a)).value, std::log(a.dimension()), 1e-12);
  }
}

TEST(QEntropy, DominatesVonNeumann) {
  Rng rng(10);
  for (const auto& dims : std::vector<std::vector<int>>{{2}, {3}, {1, 1}, {2, 1}, {2, 2}, {3, 1}}) {
    const BlockStructure a(dims);
    for (int t = 0; t < 10; ++t) {
      const DensityState rho = random_state(a, rng);
      double excess = 0.0;
      for (std::size_t i = 0; i < a.block_count(); ++i) excess += rho.weight(i) * vn_entropy(rho.normalized_block(i));
      const double h = q_entropy(rho).value, s = vn_entropy(rho);
      EXPECT_NEAR(h - s, excess, 1e-10);
      EXPECT_GE(h, s - 1e-12);
      EXPECT_LE(h, std::log(a.dimension()) + 1e-10);
      EXPECT_NEAR(h, mutual_information(standard_compound(rho)).value, 1e-9);
    }
  }
}

TEST(QEntropy, ZeroWeightBlockIgnored) {
  const DensityState rho(BlockStructure({2, 1}), {CMat::Identity(2, 2) / 2.0, CMat::Zero(1, 1)});
  EXPECT_NEAR(q_entropy(rho).value, 2 * kLn2, 1e-12);
}

TEST(ConditionalQEntropy, Examples) {
  Rng rng(11);
  const DensityState s = random_state(BlockStructure({2}), rng), r = random_state(BlockStructure({2}), rng);
  EXPECT_NEAR(conditional_q_entropy(product(s, r), 0.9).value, 0.9, 1e-10);
  EXPECT_NEAR(conditional_q_entropy(bell()).value, 0.0, 1e-12);
  const Decomposition sch = schatten_decomposition(DensityState::simple(diag2(0.75, 0.25)));
  const CompoundState d = d_compound(sch);
  EXPECT_NEAR(q_entropy(marginals(d).b).value, 0.562335144618808, 1e-12);
  EXPECT_NEAR(conditional_q_entropy(d).value, 0.0, 1e-12);
}

TEST(ConditionalQEntropy, NonnegativeOnRandomCompounds) {
  Rng rng(12);
  for (int t = 0; t < 40; ++t) {
    const CompoundState omega = compound_from_amplitude(random_amplitude(2 + t % 2, 2 + t % 3, 1 + t % 4, rng));
    EXPECT_GE(conditional_q_entropy(omega).value, -1e-9);
  }
}

TEST(Disentanglement, Examples) {
  Rng rng(13);
  const DensityState s = random_state(BlockStructure({3}), rng), r = random_state(BlockStructure({2}), rng);
  EXPECT_NEAR(disentanglement(product(s, r)), vn_entropy(s), 1e-9);
  EXPECT_NEAR(disentanglement(bell()), -kLn2, 1e-12);
  EXPECT_NEAR(disentanglement(standard_compound(DensityState::simple(diag2(0.75, 0.25)))), -0.562335144618808, 1e-12);
}

TEST(Monotonicity, Examples) {
  const CompoundState b = bell();
  const MonotonicityResult id = monotonicity_check(b, Channel::identity(BlockStructure({2})));
  EXPECT_NEAR(id.after, id.before, 1e-12);
  EXPECT_TRUE(id.ok);

  const MonotonicityResult dep = monotonicity_check(b, completely_depolarizing(2));
  EXPECT_NEAR(dep.after, 0.0, 1e-10);
  EXPECT_TRUE(dep.ok);

  const MonotonicityResult ph = monotonicity_check(b, dephasing_qubit());
  EXPECT_NEAR(ph.before, 2 * kLn2, 1e-12);
  EXPECT_NEAR(ph.after, kLn2, 1e-12);
}

TEST(Monotonicity, RandomChannelsNeverIncrease) {
  Rng rng(14);
  for (int t = 0; t < 40; ++t) {
    const CompoundState omega = compound_from_amplitude(random_amplitude(2, 3, 1 + t % 3, rng));
    const MonotonicityResult r = monotonicity_check(omega, random_channel(2, 2 + t % 3, 1 + t % 4, rng));
    EXPECT_TRUE(r.ok);
    EXPECT_LE(r.after, r.before + 1e-8);
  }
}
