#include <gtest/gtest.h>

#include "mirror/monotones.hpp"
#include "oracles.hpp"

#include <random>

namespace {

using namespace mirror;
using Eigen::VectorXd;
using oracle::kPi;

VectorXd random_p(std::mt19937_64& gen, Eigen::Index d) {
  std::exponential_distribution<double> e(1.0);
  VectorXd p(d);
  for (Eigen::Index i = 0; i < d; ++i) p(i) = e(gen);
  return p / p.sum();
}

std::vector<double> random_phases(std::mt19937_64& gen, std::size_t d) {
  std::uniform_real_distribution<double> u(0, 2 * kPi);
  std::vector<double> th(d);
  for (auto& x : th) x = u(gen);
  return th;
}

TEST(FidelityBruteforce, PureVector) {
  std::mt19937_64 gen(1);
  for (Eigen::Index d = 1; d <= 6; ++d) {
    VectorXd p = VectorXd::Zero(d);
    p(0) = 1;
    const auto sol = fidelity_bruteforce(p, LUSpectrum::from_phases(random_phases(gen, static_cast<std::size_t>(d))));
    EXPECT_NEAR(sol.fidelity, 1.0, 1e-14);
    EXPECT_NEAR(sol.me, 0.0, 1e-14);
  }
}

TEST(FidelityBruteforce, QubitExamples) {
  const auto bell = fidelity_bruteforce(Eigen::Vector2d(0.5, 0.5), stellar(2));
  EXPECT_NEAR(bell.fidelity, 0.0, 1e-15);
  EXPECT_NEAR(bell.me, 1.0, 1e-15);
  const auto skew = fidelity_bruteforce(Eigen::Vector2d(0.75, 0.25), stellar(2));
  EXPECT_NEAR(skew.fidelity, 0.25, 1e-15);
  EXPECT_NEAR(skew.me, 0.75, 1e-15);
  const auto flat = fidelity_bruteforce(Eigen::Vector4d::Constant(0.25), stellar(4));
  EXPECT_NEAR(flat.fidelity, 0.0, 1e-15);
}

TEST(FidelityBruteforce, TiesPickSmallestPermutation) {
  const auto sol = fidelity_bruteforce(Eigen::Vector4d::Constant(0.25), stellar(4));
  EXPECT_EQ(sol.sigma, (std::vector<int>{0, 1, 2, 3}));
}

TEST(FidelityBruteforce, Capacity) {
  const VectorXd p = VectorXd::Constant(10, 0.1);
  EXPECT_THROW(fidelity_bruteforce(p, stellar(10)), CapacityError);
  EXPECT_NO_THROW(fidelity_exact(p, stellar(10)));
  EXPECT_THROW(fidelity_bruteforce(Eigen::Vector2d(0.5, 0.5), stellar(3)), ValidationError);
}

TEST(FidelityExact, IdentitySpectrum) {
  std::mt19937_64 gen(2);
  for (Eigen::Index d = 1; d <= 9; ++d) {
    const auto sol = fidelity_exact(random_p(gen, d), identity_spectrum(d));
    EXPECT_NEAR(sol.fidelity, 1.0, 1e-14);
    EXPECT_NEAR(sol.me, 0.0, 1e-14);
  }
}

TEST(FidelityExact, ThreeLevelExample) {
  const Eigen::Vector3d p(0.5, 0.3, 0.2);
  const auto exact = fidelity_exact(p, stellar(3));
  const auto brute = fidelity_bruteforce(p, stellar(3));
  EXPECT_EQ(exact.sigma, brute.sigma);
  EXPECT_NEAR(exact.fidelity, brute.fidelity, 1e-15);
  // |0.5 + 0.3 w + 0.2 w^2|^2 with w a primitive cube root: 0.19 - 0.06 - 0.1 + 0.04 = 0.07
  EXPECT_NEAR(exact.fidelity, 0.07, 1e-14);
}

TEST(FidelityExact, AgreesWithPhaseOracle) {
  std::mt19937_64 gen(3);
  for (Eigen::Index d = 2; d <= 8; ++d) {
    for (int trial = 0; trial < 500; ++trial) {
      const VectorXd p = random_p(gen, d);
      auto th = random_phases(gen, static_cast<std::size_t>(d));
      if (trial % 4 == 0) th[1] = th[0];
      const auto spec = LUSpectrum::from_phases(th);
      const auto exact = fidelity_exact(p, spec);
      const double ref = oracle::fidelity(oracle::to_std(p), th);
      ASSERT_NEAR(exact.fidelity, ref, 1e-12) << "d=" << d << " trial=" << trial;
      const auto brute = fidelity_bruteforce(p, spec);
      ASSERT_NEAR(brute.fidelity, ref, 1e-12);
      // The reported permutation realizes the reported value.
      std::complex<double> z = 0;
      for (Eigen::Index i = 0; i < d; ++i)
        z += p(i) * spec.canonical_eigenvalues()(exact.sigma[static_cast<std::size_t>(i)]);
      EXPECT_NEAR(std::norm(z), exact.fidelity, 1e-12);
      EXPECT_LT(std::abs(z - exact.overlap), 1e-12);
    }
  }
}

TEST(FidelityExact, TiesMatchBruteforce) {
  std::mt19937_64 gen(4);
  for (Eigen::Index d = 2; d <= 6; ++d) {
    for (int trial = 0; trial < 50; ++trial) {
      VectorXd p = random_p(gen, d);
      p(1) = p(0);
      p /= p.sum();
      const auto spec = stellar(d);
      EXPECT_EQ(fidelity_exact(p, spec).sigma, fidelity_bruteforce(p, spec).sigma) << "d=" << d;
    }
  }
}

TEST(MirrorEntanglement, States) {
  const auto product = schmidt_state(Eigen::Vector3d(1, 0, 0), 3, 3);
  EXPECT_NEAR(mirror_entanglement(product, stellar(3)), 0.0, 1e-14);
  const auto bell = schmidt_state(Eigen::Vector2d(0.5, 0.5), 2, 2);
  EXPECT_NEAR(mirror_entanglement(bell, stellar(2)), 1.0, 1e-14);
  const auto rank2 = schmidt_state(Eigen::Vector4d(0.5, 0.5, 0, 0), 4, 4);
  EXPECT_NEAR(mirror_entanglement(rank2, stellar(4)), 0.5, 1e-14);
  EXPECT_THROW(mirror_entanglement(bell, stellar(3)), ValidationError);
}

TEST(MirrorEntanglement, LocalUnitaryInvariance) {
  SplitMix64 rng(8);
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto s = random_pure(3, 4, seed);
    const Eigen::MatrixXcd ua = haar_unitary(3, rng);
    const Eigen::MatrixXcd ub = haar_unitary(4, rng);
    const PureState moved(ua * s.amplitudes() * ub.transpose());
    EXPECT_NEAR(mirror_entanglement(s, stellar(3)), mirror_entanglement(moved, stellar(3)), 1e-12);
  }
}

TEST(StellarEntanglement, QubitClosedForm) {
  for (double x = 0; x <= 1.0 + 1e-12; x += 0.05) {
    const VectorXd p = Eigen::Vector2d(x, 1 - x);
    EXPECT_NEAR(stellar_entanglement(p), 4 * x * (1 - x), 1e-14);
    EXPECT_NEAR(stellar_entanglement(p), linear_entropy(p), 1e-14);
  }
}

TEST(StellarEntanglement, BoundaryFamilies) {
  for (int k = 0; k <= 20; ++k) {
    const double x = 0.05 * k;
    const Eigen::Vector4d doubly((1 + x) / 4, (1 + x) / 4, (1 - x) / 4, (1 - x) / 4);
    EXPECT_NEAR(stellar_entanglement(doubly), 1 - x * x / 2, 1e-12);
    EXPECT_NEAR(stellar_entanglement(doubly), 1.5 * linear_entropy(doubly) - 0.5, 1e-12);
    EXPECT_NEAR(stellar_entanglement(doubly), oracle::stellar_me(oracle::to_std(doubly)), 1e-12);

    const Eigen::Vector4d bisectrix(x / 3, x / 3, x / 3, 1 - x);
    EXPECT_NEAR(stellar_entanglement(bisectrix), linear_entropy(bisectrix), 1e-12);

    const Eigen::Vector4d rank2(x, 1 - x, 0, 0);
    EXPECT_NEAR(stellar_entanglement(rank2), 0.75 * linear_entropy(rank2), 1e-12);
  }
}

TEST(StellarEntanglement, CosineFormMatchesOverlap) {
  std::mt19937_64 gen(5);
  for (Eigen::Index d = 2; d <= 8; ++d) {
    for (int trial = 0; trial < 50; ++trial) {
      const VectorXd p = random_p(gen, d);
      const auto sol = fidelity_exact(p, stellar(d));
      EXPECT_NEAR(stellar_cosine_form(p, sol.sigma), sol.me, 1e-12);
      EXPECT_NEAR(stellar_entanglement(p), oracle::stellar_me(oracle::to_std(p)), 1e-12);
    }
  }
}

TEST(StellarEntanglement, SandwichAndHierarchy) {
  std::mt19937_64 gen(6);
  for (Eigen::Index d = 2; d <= 7; ++d) {
    const double c = 2.0 * (d - 1) * std::pow(std::sin(kPi / d), 2) / d;
    for (int trial = 0; trial < 100; ++trial) {
      const VectorXd p = random_p(gen, d);
      const double el = linear_entropy(p);
      const double es = stellar_entanglement(p);
      EXPECT_GE(es, c * el - 1e-12);
      EXPECT_LE(es, el + 1e-12);
      // me stays in [0, 1] for arbitrary spectra.
      const auto spec = LUSpectrum::from_phases(random_phases(gen, static_cast<std::size_t>(d)));
      const double me = mirror_entanglement(p, spec);
      EXPECT_GE(me, -1e-15);
      EXPECT_LE(me, 1.0 + 1e-15);
    }
  }
}

TEST(OptimalUnitary, ProductAndBell) {
  const auto product = schmidt_state(Eigen::Vector2d(1, 0), 2, 2);
  const Eigen::MatrixXcd w = optimal_unitary(product, stellar(2));
  // <psi|(W x I)|psi> = Tr[M^dagger W M] for amplitude matrix M.
  const Eigen::MatrixXcd& m0 = product.amplitudes();
  EXPECT_NEAR(std::abs((m0.adjoint() * w * m0).trace()), 1.0, 1e-14);

  const auto bell = schmidt_state(Eigen::Vector2d(0.5, 0.5), 2, 2);
  const Eigen::MatrixXcd wb = optimal_unitary(bell, stellar(2));
  const Eigen::MatrixXcd m = bell.amplitudes();
  const std::complex<double> ov = (m.adjoint() * wb * m).trace();
  EXPECT_NEAR(std::abs(ov), 0.0, 1e-14);
}

TEST(OptimalUnitary, FullStateOverlapMatchesTrace) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const auto s = random_pure(3, 3, seed);
    const auto spec = seed % 2 ? stellar(3) : LUSpectrum::from_phases({0.3, 1.9, 4.0});
    const Eigen::MatrixXcd w = optimal_unitary(s, spec);
    EXPECT_LT((w.adjoint() * w - Eigen::MatrixXcd::Identity(3, 3)).cwiseAbs().maxCoeff(), 1e-12);
    // <psi|(W x I)|psi> via the explicit Kronecker product on the vectorized state.
    const Eigen::MatrixXcd& m = s.amplitudes();
    Eigen::VectorXcd psi(9);
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) psi(3 * a + b) = m(a, b);
    Eigen::MatrixXcd big = Eigen::MatrixXcd::Zero(9, 9);
    for (int a = 0; a < 3; ++a)
      for (int a2 = 0; a2 < 3; ++a2)
        for (int b = 0; b < 3; ++b) big(3 * a + b, 3 * a2 + b) = w(a, a2);
    const double full = std::norm(psi.dot(big * psi));
    const double trace = std::norm((w * s.reduced_a()).trace());
    EXPECT_NEAR(full, trace, 1e-12);
    const auto p = schmidt_spectrum(s);
    EXPECT_NEAR(full, fidelity_exact(p.probs, spec).fidelity, 1e-12);
  }
}

TEST(OptimalUnitary, DimensionMismatch) {
  EXPECT_THROW(optimal_unitary(random_pure(3, 3, 1), stellar(2)), ValidationError);
}

TEST(Bounds, Coefficients) {
  EXPECT_NEAR(lower_bound_coefficient(2), 1.0, 1e-15);
  EXPECT_NEAR(lower_bound_coefficient(3), 1.0, 1e-15);
  EXPECT_NEAR(lower_bound_coefficient(4), 0.75, 1e-15);
  const auto b = theorem4_bounds(0.6, 4);
  EXPECT_NEAR(b.lower, 0.45, 1e-15);
  EXPECT_DOUBLE_EQ(b.upper, 0.6);
  const auto same = theorem4_bounds(0.3, 3);
  EXPECT_NEAR(same.lower, same.upper, 1e-15);
  EXPECT_THROW(theorem4_bounds(1.5, 4), ValidationError);
  EXPECT_THROW(theorem4_bounds(0.5, 0), ValidationError);
}

TEST(Unistochastic, Examples) {
  const auto pure = lemma1_check(Eigen::Vector2d(1, 0), LUSpectrum::from_phases({0.2, 2.5}), 200, 1);
  EXPECT_NEAR(pure.optimum, 1.0, 1e-14);
  EXPECT_TRUE(pure.ok);
  const auto bell = lemma1_check(Eigen::Vector2d(0.5, 0.5), stellar(2), 1000, 2);
  EXPECT_NEAR(bell.optimum, 0.0, 1e-14);
  EXPECT_LE(bell.max_value, 1e-9);
  EXPECT_TRUE(bell.ok);
  std::mt19937_64 gen(9);
  const auto four = lemma1_check(random_p(gen, 4), stellar(4), 1000, 3);
  EXPECT_TRUE(four.ok);
  EXPECT_LE(four.max_excess, 1e-9);
  EXPECT_GT(four.max_value, 0.0);
}

TEST(MirrorMatrix, RankOne) {
  const Eigen::MatrixXcd m = mirror_matrix(Eigen::Vector3d(0.5, 0.3, 0.2), stellar(3));
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  EXPECT_LT(svd.singularValues()(1), 1e-14);
  EXPECT_NEAR(m.trace().real(), (Eigen::Vector3d(0.5, 0.3, 0.2).cast<std::complex<double>>().array() *
                                 stellar(3).canonical_eigenvalues().array())
                                    .sum()
                                    .real(),
              1e-15);
}

TEST(Monotones, LongDouble) {
  const Eigen::Matrix<long double, 3, 1> p(0.5L, 0.3L, 0.2L);
  const auto sol = fidelity_exact(p, stellar<long double>(3));
  EXPECT_NEAR(static_cast<double>(sol.fidelity), 0.07, 1e-15);
}

}  // namespace
