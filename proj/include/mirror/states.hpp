#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mirror/errors.hpp"
#include "mirror/random.hpp"

namespace mirror {

template <typename Scalar>
using CMatrix = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using CVector = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1>;
template <typename Scalar>
using RVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Inputs whose norm is off by at most this much are renormalized silently.
inline constexpr double kRenormalizeTolerance = 1e-6;
/// Schmidt coefficients below this count as zero when computing the rank.
inline constexpr double kRankTolerance = 1e-10;
/// Eigenvalues above -kClampFloor are treated as round-off and zeroed.
inline constexpr double kClampFloor = 1e-12;

/// A pure state |psi> in C^dA (x) C^dB stored as its dA x dB amplitude
/// matrix, entry (a, b) = <a|<b|psi>. Always normalized.
template <typename Scalar = double>
class BasicPureState {
 public:
  explicit BasicPureState(CMatrix<Scalar> amplitudes) : amplitudes_(std::move(amplitudes)) {
    if (amplitudes_.rows() < 1 || amplitudes_.cols() < 1)
      throw ValidationError("state: dimensions must be >= 1, got " + std::to_string(amplitudes_.rows()) + "x" +
                            std::to_string(amplitudes_.cols()));
    if (!amplitudes_.allFinite()) throw ValidationError("state: amplitudes must be finite");
    const Scalar norm = amplitudes_.norm();
    if (std::abs(norm - Scalar(1)) > Scalar(kRenormalizeTolerance))
      throw ValidationError("state: norm " + std::to_string(static_cast<double>(norm)) +
                            " is not 1 within " + std::to_string(kRenormalizeTolerance));
    amplitudes_ /= norm;
  }

  /// Normalizes any nonzero amplitude matrix (used by samplers and channels).
  static BasicPureState normalized(CMatrix<Scalar> amplitudes) {
    const Scalar norm = amplitudes.norm();
    if (!(norm > Scalar(0))) throw ValidationError("state: cannot normalize the zero vector");
    amplitudes /= norm;
    return BasicPureState(std::move(amplitudes));
  }

  Eigen::Index dim_a() const { return amplitudes_.rows(); }
  Eigen::Index dim_b() const { return amplitudes_.cols(); }
  Eigen::Index local_dim() const { return std::min(dim_a(), dim_b()); }
  const CMatrix<Scalar>& amplitudes() const { return amplitudes_; }

  /// Reduced state of subsystem A, rho_A = M M^dagger.
  CMatrix<Scalar> reduced_a() const { return amplitudes_ * amplitudes_.adjoint(); }

 private:
  CMatrix<Scalar> amplitudes_;
};

using PureState = BasicPureState<double>;

/// Which Gram matrix was diagonalized to obtain a SchmidtSpectrum.
enum class Side { A, B };

/// Eigenvalues of the reduced state, non-increasing, summing to one.
template <typename Scalar = double>
struct BasicSchmidtSpectrum {
  RVector<Scalar> probs;
  /// Eigenvectors of the diagonalized Gram matrix (M M^dagger for Side::A,
  /// M^dagger M for Side::B), column i paired with probs(i). Empty when the
  /// spectrum was built directly from probabilities.
  CMatrix<Scalar> basis;
  Side side = Side::A;

  Eigen::Index dim() const { return probs.size(); }

  Eigen::Index rank(Scalar tol = Scalar(kRankTolerance)) const {
    return static_cast<Eigen::Index>((probs.array() > tol).count());
  }

  /// Validates, clamps round-off negatives, renormalizes and sorts.
  static BasicSchmidtSpectrum from_probs(RVector<Scalar> p) {
    if (p.size() < 1) throw ValidationError("probs: need at least one entry");
    if (!p.allFinite()) throw ValidationError("probs: entries must be finite");
    for (Eigen::Index i = 0; i < p.size(); ++i) {
      if (p(i) < -Scalar(kClampFloor))
        throw ValidationError("probs: entry " + std::to_string(i) + " is negative");
      if (p(i) < Scalar(0)) p(i) = Scalar(0);
    }
    const Scalar total = p.sum();
    if (std::abs(total - Scalar(1)) > Scalar(kRenormalizeTolerance))
      throw ValidationError("probs: entries sum to " + std::to_string(static_cast<double>(total)) + ", expected 1");
    p /= total;
    std::sort(p.data(), p.data() + p.size(), std::greater<Scalar>());
    return BasicSchmidtSpectrum{std::move(p), {}, Side::A};
  }
};

using SchmidtSpectrum = BasicSchmidtSpectrum<double>;

/// Schmidt coefficients of `state` from the smaller of the two Gram matrices.
template <typename Scalar>
BasicSchmidtSpectrum<Scalar> schmidt_spectrum(const BasicPureState<Scalar>& state) {
  const auto& m = state.amplitudes();
  const bool use_a = state.dim_a() <= state.dim_b();
  const CMatrix<Scalar> gram = use_a ? CMatrix<Scalar>(m * m.adjoint()) : CMatrix<Scalar>(m.adjoint() * m);
  Eigen::SelfAdjointEigenSolver<CMatrix<Scalar>> eig(gram);
  const Eigen::Index d = gram.rows();

  BasicSchmidtSpectrum<Scalar> out;
  out.side = use_a ? Side::A : Side::B;
  out.probs.resize(d);
  out.basis.resize(d, d);
  // Eigen sorts ascending; flip to non-increasing.
  for (Eigen::Index i = 0; i < d; ++i) {
    out.probs(i) = std::max(eig.eigenvalues()(d - 1 - i), Scalar(0));
    out.basis.col(i) = eig.eigenvectors().col(d - 1 - i);
  }
  out.probs /= out.probs.sum();
  return out;
}

/// Normalized linear entropy d/(d-1) (1 - sum p_i^2); zero when d = 1.
template <typename Derived>
typename Derived::Scalar linear_entropy(const Eigen::MatrixBase<Derived>& p) {
  using Scalar = typename Derived::Scalar;
  const auto d = p.size();
  if (d <= 1) return Scalar(0);
  const Scalar value = Scalar(d) / Scalar(d - 1) * (Scalar(1) - p.squaredNorm());
  return std::clamp(value, Scalar(0), Scalar(1));
}

template <typename Scalar>
Scalar linear_entropy(const BasicSchmidtSpectrum<Scalar>& p) {
  return linear_entropy(p.probs);
}

/// Haar-random pure state: i.i.d. complex Gaussian amplitudes, normalized.
template <typename Scalar = double>
BasicPureState<Scalar> random_pure(Eigen::Index dim_a, Eigen::Index dim_b, std::uint64_t seed) {
  if (dim_a < 1 || dim_b < 1) throw ValidationError("random_pure: dimensions must be >= 1");
  if (dim_a == 1 && dim_b == 1) return BasicPureState<Scalar>(CMatrix<Scalar>::Ones(1, 1));
  SplitMix64 rng(seed);
  return BasicPureState<Scalar>::normalized(ginibre<Scalar>(dim_a, dim_b, rng));
}

/// State with the given Schmidt coefficients in the computational basis:
/// sum_i sqrt(p_i) |i>|i>, embedded in a dim_a x dim_b amplitude matrix.
template <typename Derived>
BasicPureState<typename Derived::Scalar> schmidt_state(const Eigen::MatrixBase<Derived>& p, Eigen::Index dim_a,
                                                       Eigen::Index dim_b) {
  using Scalar = typename Derived::Scalar;
  if (p.size() > std::min(dim_a, dim_b)) throw ValidationError("schmidt_state: more coefficients than min(dA, dB)");
  CMatrix<Scalar> m = CMatrix<Scalar>::Zero(dim_a, dim_b);
  for (Eigen::Index i = 0; i < p.size(); ++i) m(i, i) = std::sqrt(std::max(p(i), Scalar(0)));
  return BasicPureState<Scalar>::normalized(std::move(m));
}

}  // namespace mirror
