#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mirror/errors.hpp"
#include "mirror/random.hpp"
#include "mirror/spectra.hpp"
#include "mirror/states.hpp"

namespace mirror {

/// Largest d accepted by fidelity_bruteforce (9! = 362880 permutations).
inline constexpr Eigen::Index kBruteForceCap = 9;
/// Permutations whose fidelities differ by less than this are considered tied;
/// the lexicographically smallest one wins.
inline constexpr double kFidelityTieTolerance = 1e-13;

/// Optimal assignment of Schmidt coefficients to spectrum eigenvalues.
/// sigma[i] is the canonical spectrum index paired with probs(i), so the
/// optimal overlap is z = sum_i p_i lambda_{sigma[i]} and F = |z|^2.
template <typename Scalar = double>
struct BasicPermutationSolution {
  std::vector<int> sigma;
  Scalar fidelity = Scalar(1);
  Scalar me = Scalar(0);
  std::complex<Scalar> overlap{1, 0};
};

using PermutationSolution = BasicPermutationSolution<double>;

namespace detail {

template <typename Scalar, typename Derived>
std::complex<Scalar> overlap_for(const Eigen::MatrixBase<Derived>& p, const CVector<Scalar>& lambda,
                                 const std::vector<int>& sigma) {
  std::complex<Scalar> z(0, 0);
  for (Eigen::Index i = 0; i < p.size(); ++i) z += p(i) * lambda(sigma[static_cast<std::size_t>(i)]);
  return z;
}

template <typename Scalar>
BasicPermutationSolution<Scalar> make_solution(std::vector<int> sigma, std::complex<Scalar> z) {
  BasicPermutationSolution<Scalar> s;
  s.sigma = std::move(sigma);
  s.overlap = z;
  s.fidelity = std::clamp(std::norm(z), Scalar(0), Scalar(1));
  s.me = Scalar(1) - s.fidelity;
  return s;
}

template <typename Derived, typename Scalar>
void check_dims(const Eigen::MatrixBase<Derived>& p, const BasicLUSpectrum<Scalar>& spec, const char* who) {
  if (p.size() != spec.dim())
    throw ValidationError(std::string(who) + ": probability vector has " + std::to_string(p.size()) +
                          " entries but spectrum has d = " + std::to_string(spec.dim()));
  if (p.size() < 1) throw ValidationError(std::string(who) + ": empty probability vector");
}

}  // namespace detail

/// Rank-one matrix (M)_{ij} = p_i lambda_j whose trace against a doubly
/// stochastic B gives the overlap; for a permutation matrix S, Tr[M S] = z.
template <typename Derived, typename Scalar>
CMatrix<Scalar> mirror_matrix(const Eigen::MatrixBase<Derived>& p, const BasicLUSpectrum<Scalar>& spec) {
  detail::check_dims(p, spec, "mirror_matrix");
  return p.template cast<std::complex<Scalar>>() * spec.canonical_eigenvalues().transpose();
}

/// Exhaustive maximization of |sum_i p_i lambda_{sigma(i)}| over all d! permutations.
template <typename Derived, typename Scalar>
BasicPermutationSolution<Scalar> fidelity_bruteforce(const Eigen::MatrixBase<Derived>& p,
                                                     const BasicLUSpectrum<Scalar>& spec,
                                                     Eigen::Index cap = kBruteForceCap) {
  detail::check_dims(p, spec, "fidelity_bruteforce");
  const Eigen::Index d = p.size();
  if (d > cap)
    throw CapacityError("fidelity_bruteforce: d = " + std::to_string(d) + " exceeds the brute-force cap of " +
                        std::to_string(cap) + "; use fidelity_exact");
  const CVector<Scalar> lambda = spec.canonical_eigenvalues();
  std::vector<int> sigma(static_cast<std::size_t>(d));
  std::iota(sigma.begin(), sigma.end(), 0);

  std::vector<int> best_sigma = sigma;
  std::complex<Scalar> best_z = detail::overlap_for<Scalar>(p, lambda, sigma);
  Scalar best_f = std::norm(best_z);
  while (std::next_permutation(sigma.begin(), sigma.end())) {
    const std::complex<Scalar> z = detail::overlap_for<Scalar>(p, lambda, sigma);
    const Scalar f = std::norm(z);
    if (f > best_f + Scalar(kFidelityTieTolerance)) {
      best_f = f;
      best_z = z;
      best_sigma = sigma;
    }
  }
  return detail::make_solution(std::move(best_sigma), best_z);
}

namespace detail {

// Maps sigma to the lexicographically smallest permutation with the same
// overlap: positions with equal p may exchange their targets, and targets
// with equal eigenvalues may be relabeled. The greedy choice is safe because
// every partial assignment stays completable.
class TieCanonicalizer {
 public:
  template <typename Derived, typename Scalar>
  TieCanonicalizer(const Eigen::MatrixBase<Derived>& p, const RVector<Scalar>& theta)
      : n_(static_cast<std::size_t>(p.size())), p_group_(n_), l_class_(n_), demand_(n_ * n_), used_(n_) {
    for (std::size_t i = 0; i < n_; ++i) {
      p_group_[i] = l_class_[i] = i;
      const auto ii = static_cast<Eigen::Index>(i);
      for (std::size_t k = i; k-- > 0;) {
        if (p(static_cast<Eigen::Index>(k)) == p(ii)) p_group_[i] = p_group_[k];
        if (theta(static_cast<Eigen::Index>(k)) == theta(ii)) l_class_[i] = l_class_[k];
      }
    }
  }

  void apply(std::vector<int>& sigma) {
    std::fill(demand_.begin(), demand_.end(), 0);
    std::fill(used_.begin(), used_.end(), false);
    for (std::size_t i = 0; i < n_; ++i) ++demand_[p_group_[i] * n_ + l_class_[static_cast<std::size_t>(sigma[i])]];
    for (std::size_t i = 0; i < n_; ++i) {
      int* row = &demand_[p_group_[i] * n_];
      std::size_t pick = 0;
      while (used_[pick] || row[l_class_[pick]] == 0) ++pick;
      used_[pick] = true;
      --row[l_class_[pick]];
      sigma[i] = static_cast<int>(pick);
    }
  }

 private:
  std::size_t n_;
  std::vector<std::size_t> p_group_, l_class_;
  std::vector<int> demand_;
  std::vector<bool> used_;
};

}  // namespace detail

/// Polynomial-time maximization by sweeping the projection direction.
///
/// |z| = max_phi Re(e^{-i phi} z). For a fixed phi the rearrangement
/// inequality pairs the largest p with the largest Re(e^{-i phi} lambda), so
/// the optimum is attained by one of the sort orders of the projected
/// eigenvalues. Those orders only change at phi = arg(lambda_i - lambda_j)
/// +- pi/2; probing every crossing and every midpoint between consecutive
/// crossings visits each order, and |z| is evaluated exactly for each.
template <typename Derived, typename Scalar>
BasicPermutationSolution<Scalar> fidelity_exact(const Eigen::MatrixBase<Derived>& p,
                                                const BasicLUSpectrum<Scalar>& spec) {
  detail::check_dims(p, spec, "fidelity_exact");
  const Eigen::Index d = p.size();
  const auto n = static_cast<std::size_t>(d);
  const Scalar two_pi = Scalar(2) * std::numbers::pi_v<Scalar>;
  const CVector<Scalar> lambda = spec.canonical_eigenvalues();
  const RVector<Scalar>& theta = spec.thetas();

  // Work on p sorted descending so the result is independent of input order.
  std::vector<int> by_p(n);
  std::iota(by_p.begin(), by_p.end(), 0);
  std::stable_sort(by_p.begin(), by_p.end(), [&](int a, int b) { return p(a) > p(b); });

  std::vector<Scalar> directions;
  directions.reserve(2 * n * n);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = i + 1; j < d; ++j) {
      const std::complex<Scalar> diff = lambda(i) - lambda(j);
      if (std::abs(diff) <= Scalar(0)) continue;
      const Scalar a = std::arg(diff);
      for (Scalar c : {a + std::numbers::pi_v<Scalar> / 2, a - std::numbers::pi_v<Scalar> / 2}) {
        Scalar r = std::fmod(c, two_pi);
        if (r < Scalar(0)) r += two_pi;
        directions.push_back(r);
      }
    }
  std::sort(directions.begin(), directions.end());
  directions.erase(std::unique(directions.begin(), directions.end()), directions.end());
  const std::size_t crossings = directions.size();
  for (std::size_t k = 0; k < crossings; ++k) {
    const Scalar next = k + 1 < crossings ? directions[k + 1] : directions[0] + two_pi;
    directions.push_back((directions[k] + next) / Scalar(2));
  }
  if (directions.empty()) directions.push_back(Scalar(0));

  detail::TieCanonicalizer canonical(p, theta);
  std::vector<int> order(n), sigma(n), best_sigma;
  std::vector<Scalar> key(n);
  std::complex<Scalar> best_z;
  Scalar best_f = -Scalar(1);
  for (Scalar phi : directions) {
    for (std::size_t j = 0; j < n; ++j) key[j] = std::cos(theta(static_cast<Eigen::Index>(j)) - phi);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return key[a] > key[b]; });

    std::complex<Scalar> z(0, 0);
    for (std::size_t r = 0; r < n; ++r) {
      sigma[static_cast<std::size_t>(by_p[r])] = order[r];
      z += p(by_p[r]) * lambda(order[r]);
    }
    const Scalar f = std::norm(z);
    const bool better = f > best_f + Scalar(kFidelityTieTolerance);
    const bool tied = !better && f >= best_f - Scalar(kFidelityTieTolerance);
    if (!better && !tied) continue;
    canonical.apply(sigma);
    if (better || sigma < best_sigma) {
      best_f = std::max(f, best_f);
      best_z = z;
      best_sigma = sigma;
    }
  }
  return detail::make_solution(std::move(best_sigma), best_z);
}

template <typename Scalar>
BasicPermutationSolution<Scalar> fidelity_exact(const BasicSchmidtSpectrum<Scalar>& p,
                                                const BasicLUSpectrum<Scalar>& spec) {
  return fidelity_exact(p.probs, spec);
}

template <typename Scalar>
BasicPermutationSolution<Scalar> fidelity_bruteforce(const BasicSchmidtSpectrum<Scalar>& p,
                                                     const BasicLUSpectrum<Scalar>& spec,
                                                     Eigen::Index cap = kBruteForceCap) {
  return fidelity_bruteforce(p.probs, spec, cap);
}

/// Lambda-mirror entanglement 1 - F of a Schmidt probability vector.
template <typename Derived, typename Scalar>
Scalar mirror_entanglement(const Eigen::MatrixBase<Derived>& p, const BasicLUSpectrum<Scalar>& spec) {
  return fidelity_exact(p, spec).me;
}

/// Lambda-mirror entanglement of a pure state; spec.dim() must equal min(dA, dB).
template <typename Scalar>
Scalar mirror_entanglement(const BasicPureState<Scalar>& state, const BasicLUSpectrum<Scalar>& spec) {
  if (spec.dim() != state.local_dim())
    throw ValidationError("mirror_entanglement: spectrum has d = " + std::to_string(spec.dim()) +
                          " but min(dA, dB) = " + std::to_string(state.local_dim()));
  return fidelity_exact(schmidt_spectrum(state).probs, spec).me;
}

/// 1 - sum_{ij} cos[2 pi (sigma_i - sigma_j) / d] p_i p_j for a given pairing.
template <typename Derived>
typename Derived::Scalar stellar_cosine_form(const Eigen::MatrixBase<Derived>& p, const std::vector<int>& sigma) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index d = p.size();
  Scalar acc = Scalar(0);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) {
      const int diff = sigma[static_cast<std::size_t>(i)] - sigma[static_cast<std::size_t>(j)];
      acc += std::cos(Scalar(2) * std::numbers::pi_v<Scalar> * Scalar(diff) / Scalar(d)) * p(i) * p(j);
    }
  return Scalar(1) - acc;
}

/// Stellar mirror entanglement of a probability vector, evaluated through the
/// cosine form at the pairing found by fidelity_exact.
template <typename Derived>
typename Derived::Scalar stellar_entanglement(const Eigen::MatrixBase<Derived>& p) {
  using Scalar = typename Derived::Scalar;
  if (p.size() <= 1) return Scalar(0);
  const auto sol = fidelity_exact(p, stellar<Scalar>(p.size()));
  return std::clamp(stellar_cosine_form(p, sol.sigma), Scalar(0), Scalar(1));
}

template <typename Scalar>
Scalar stellar_entanglement(const BasicPureState<Scalar>& state) {
  return stellar_entanglement(schmidt_spectrum(state).probs);
}

/// Local unitary W on A with spectrum `spec` maximizing |<psi|W (x) 1|psi>|^2.
/// W = sum_i lambda_{sigma(i)} |i><i| in the eigenbasis of rho_A, so it
/// commutes with rho_A. Requires spec.dim() == dA; when dA > dB the kernel of
/// rho_A receives the remaining eigenvalues (zero Schmidt weight).
template <typename Scalar>
CMatrix<Scalar> optimal_unitary(const BasicPureState<Scalar>& state, const BasicLUSpectrum<Scalar>& spec) {
  if (spec.dim() != state.dim_a())
    throw ValidationError("optimal_unitary: spectrum has d = " + std::to_string(spec.dim()) +
                          " but dA = " + std::to_string(state.dim_a()));
  const Eigen::Index d = state.dim_a();
  Eigen::SelfAdjointEigenSolver<CMatrix<Scalar>> eig(state.reduced_a());
  RVector<Scalar> p(d);
  CMatrix<Scalar> basis(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    p(i) = std::max(eig.eigenvalues()(d - 1 - i), Scalar(0));
    basis.col(i) = eig.eigenvectors().col(d - 1 - i);
  }
  const auto sol = fidelity_exact(p, spec);
  const CVector<Scalar> lambda = spec.eigenvalues();
  CVector<Scalar> diag(d);
  for (Eigen::Index i = 0; i < d; ++i) diag(i) = lambda(sol.sigma[static_cast<std::size_t>(i)]);
  return basis * diag.asDiagonal() * basis.adjoint();
}

/// 2 (d - 1) sin^2(pi / d) / d: the linear-entropy multiple bounding E_stellar from below.
template <typename Scalar = double>
Scalar lower_bound_coefficient(Eigen::Index d) {
  if (d < 2) return Scalar(1);
  const Scalar s = std::sin(std::numbers::pi_v<Scalar> / Scalar(d));
  return Scalar(2) * Scalar(d - 1) * s * s / Scalar(d);
}

template <typename Scalar = double>
struct Bounds {
  Scalar lower;
  Scalar upper;
};

/// Sandwich coeff(d) E_L <= E_stellar <= E_L. For d = 1 both bounds are E_L (= 0).
template <typename Scalar = double>
Bounds<Scalar> theorem4_bounds(Scalar el, Eigen::Index d) {
  if (!(el >= Scalar(0) && el <= Scalar(1))) throw ValidationError("theorem4_bounds: el must lie in [0, 1]");
  if (d < 1) throw ValidationError("theorem4_bounds: d must be >= 1");
  return {lower_bound_coefficient<Scalar>(d) * el, el};
}

template <typename Scalar = double>
struct Lemma1Report {
  long trials = 0;
  Scalar optimum = Scalar(0);    // sqrt(F) from the permutation optimum
  Scalar max_value = Scalar(0);  // largest |Tr[M B(U)]| over sampled unitaries
  Scalar max_excess = Scalar(0); // max_value - optimum
  bool ok = true;                // max_excess <= 1e-9
};

/// Samples Haar unitaries U and checks that no unistochastic B(U)_{ij} = |u_ij|^2
/// beats the permutation optimum. Unitary t uses stream (seed, t).
template <typename Derived, typename Scalar>
Lemma1Report<Scalar> lemma1_check(const Eigen::MatrixBase<Derived>& p, const BasicLUSpectrum<Scalar>& spec,
                                  long trials, std::uint64_t seed) {
  const CMatrix<Scalar> m = mirror_matrix(p, spec);
  Lemma1Report<Scalar> rep;
  rep.trials = trials;
  rep.optimum = std::sqrt(fidelity_exact(p, spec).fidelity);
  const Eigen::Index d = p.size();
  for (long t = 0; t < trials; ++t) {
    SplitMix64 rng = SplitMix64::stream(seed, static_cast<std::uint64_t>(t));
    const CMatrix<Scalar> u = haar_unitary<Scalar>(d, rng);
    const CMatrix<Scalar> b = u.cwiseAbs2().template cast<std::complex<Scalar>>();
    rep.max_value = std::max(rep.max_value, std::abs((m * b).trace()));
  }
  rep.max_excess = rep.max_value - rep.optimum;
  rep.ok = rep.max_excess <= Scalar(1e-9);
  return rep;
}

}  // namespace mirror
