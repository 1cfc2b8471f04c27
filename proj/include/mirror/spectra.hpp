#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mirror/errors.hpp"
#include "mirror/states.hpp"

namespace mirror {

/// Default clustering distance (radians) for eigenvalue degeneracy.
inline constexpr double kDegeneracyTolerance = 1e-9;
/// Gap sequences closer than this (in turns) compare equal during canonicalization.
inline constexpr double kCanonicalTieTolerance = 1e-12;
/// Sum-of-gaps tolerance accepted by from_gaps.
inline constexpr double kGapSumTolerance = 1e-9;

/// Spectrum {e^{i theta_j}} of a local unitary in canonical form:
/// 0 = theta_1 <= ... <= theta_d < 2 pi. The global phase removed during
/// canonicalization is kept in offset() so the original eigenvalues can be
/// recovered; every monotone depends only on the canonical thetas.
template <typename Scalar = double>
class BasicLUSpectrum {
 public:
  /// Canonicalizes an arbitrary list of phases (radians, any range, any order).
  static BasicLUSpectrum from_phases(const std::vector<Scalar>& phases) {
    if (phases.empty()) throw ValidationError("spectrum: need at least one phase");
    const Scalar two_pi = Scalar(2) * std::numbers::pi_v<Scalar>;
    std::vector<Scalar> x;
    x.reserve(phases.size());
    for (Scalar ph : phases) {
      if (!std::isfinite(ph)) throw ValidationError("spectrum: phases must be finite");
      Scalar r = std::fmod(ph, two_pi);
      if (r < Scalar(0)) r += two_pi;
      if (r >= two_pi) r = Scalar(0);
      x.push_back(r);
    }
    std::sort(x.begin(), x.end());
    const std::size_t d = x.size();

    // Cyclic gaps in radians; gap[k] follows eigenvalue k.
    std::vector<Scalar> gap(d);
    for (std::size_t k = 0; k + 1 < d; ++k) gap[k] = x[k + 1] - x[k];
    gap[d - 1] = x[0] + two_pi - x[d - 1];

    // A start must open a cluster so that theta_d stays below 2 pi; among
    // those pick the lexicographically largest rotated gap sequence.
    const Scalar min_lead = Scalar(1e-14);
    const Scalar tie = Scalar(kCanonicalTieTolerance) * two_pi;
    std::size_t best = d;
    for (std::size_t k = 0; k < d; ++k) {
      if (gap[(k + d - 1) % d] <= min_lead) continue;
      if (best == d || compare_rotations(gap, k, best, tie) > 0) best = k;
    }

    BasicLUSpectrum out;
    out.offset_ = x[best];
    out.thetas_.resize(static_cast<Eigen::Index>(d));
    for (std::size_t j = 0; j < d; ++j) {
      const std::size_t idx = (best + j) % d;
      Scalar t = x[idx] - x[best];
      if (best + j >= d) t += two_pi;
      out.thetas_(static_cast<Eigen::Index>(j)) = t;
    }
    out.thetas_(0) = Scalar(0);
    return out;
  }

  Eigen::Index dim() const { return thetas_.size(); }
  const RVector<Scalar>& thetas() const { return thetas_; }
  Scalar offset() const { return offset_; }

  /// phi_k = (theta_{k+1} - theta_k) / 2 pi, phi_d = 1 - theta_d / 2 pi.
  RVector<Scalar> gaps() const {
    const Scalar two_pi = Scalar(2) * std::numbers::pi_v<Scalar>;
    const Eigen::Index d = dim();
    RVector<Scalar> g(d);
    for (Eigen::Index k = 0; k + 1 < d; ++k) g(k) = (thetas_(k + 1) - thetas_(k)) / two_pi;
    g(d - 1) = Scalar(1) - thetas_(d - 1) / two_pi;
    return g;
  }

  /// Original eigenvalue phases, theta_j + offset reduced to [0, 2 pi).
  RVector<Scalar> phases() const {
    const Scalar two_pi = Scalar(2) * std::numbers::pi_v<Scalar>;
    RVector<Scalar> out = thetas_.array() + offset_;
    for (Eigen::Index j = 0; j < out.size(); ++j)
      if (out(j) >= two_pi) out(j) -= two_pi;
    return out;
  }

  /// e^{i (theta_j + offset)}.
  CVector<Scalar> eigenvalues() const { return polar_vector(phases()); }

  /// e^{i theta_j}; differs from eigenvalues() by a global phase only.
  CVector<Scalar> canonical_eigenvalues() const { return polar_vector(thetas_); }

  bool operator==(const BasicLUSpectrum& other) const { return thetas_ == other.thetas_; }

 private:
  static CVector<Scalar> polar_vector(const RVector<Scalar>& ph) {
    CVector<Scalar> out(ph.size());
    for (Eigen::Index j = 0; j < ph.size(); ++j) out(j) = std::polar(Scalar(1), ph(j));
    return out;
  }

  static int compare_rotations(const std::vector<Scalar>& gap, std::size_t a, std::size_t b, Scalar tie) {
    const std::size_t d = gap.size();
    for (std::size_t j = 0; j < d; ++j) {
      const Scalar diff = gap[(a + j) % d] - gap[(b + j) % d];
      if (diff > tie) return 1;
      if (diff < -tie) return -1;
    }
    return 0;
  }

  RVector<Scalar> thetas_;
  Scalar offset_ = Scalar(0);
};

using LUSpectrum = BasicLUSpectrum<double>;

/// Stellar spectrum: theta_j = (d - 2j + 1) pi / d, the d-th roots of (-1)^{d-1}.
template <typename Scalar = double>
BasicLUSpectrum<Scalar> stellar(Eigen::Index d) {
  if (d < 1) throw ValidationError("stellar: d must be >= 1");
  std::vector<Scalar> phases(static_cast<std::size_t>(d));
  for (Eigen::Index j = 1; j <= d; ++j)
    phases[static_cast<std::size_t>(j - 1)] = Scalar(d - 2 * j + 1) * std::numbers::pi_v<Scalar> / Scalar(d);
  return BasicLUSpectrum<Scalar>::from_phases(phases);
}

/// All eigenvalues equal to one; the associated monotone vanishes identically.
template <typename Scalar = double>
BasicLUSpectrum<Scalar> identity_spectrum(Eigen::Index d) {
  if (d < 1) throw ValidationError("identity_spectrum: d must be >= 1");
  return BasicLUSpectrum<Scalar>::from_phases(std::vector<Scalar>(static_cast<std::size_t>(d), Scalar(0)));
}

/// Spectrum from simplex coordinates: theta_1 = 0, theta_{k+1} = theta_k + 2 pi phi_k,
/// then canonicalized.
template <typename Derived>
BasicLUSpectrum<typename Derived::Scalar> from_gaps(const Eigen::MatrixBase<Derived>& gaps) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index d = gaps.size();
  if (d < 1) throw ValidationError("gaps: need at least one entry");
  Scalar total = Scalar(0);
  for (Eigen::Index k = 0; k < d; ++k) {
    if (!std::isfinite(gaps(k)) || gaps(k) < Scalar(0))
      throw ValidationError("gaps: entry " + std::to_string(k) + " is negative or not finite");
    total += gaps(k);
  }
  if (std::abs(total - Scalar(1)) > Scalar(kGapSumTolerance))
    throw ValidationError("gaps: entries sum to " + std::to_string(static_cast<double>(total)) + ", expected 1");
  const Scalar two_pi = Scalar(2) * std::numbers::pi_v<Scalar>;
  std::vector<Scalar> phases(static_cast<std::size_t>(d));
  Scalar acc = Scalar(0);
  for (Eigen::Index k = 0; k < d; ++k) {
    phases[static_cast<std::size_t>(k)] = two_pi * acc;
    acc += gaps(k);
  }
  return BasicLUSpectrum<Scalar>::from_phases(phases);
}

template <typename Scalar = double>
BasicLUSpectrum<Scalar> from_gaps(const std::vector<Scalar>& gaps) {
  return from_gaps(Eigen::Map<const RVector<Scalar>>(gaps.data(), static_cast<Eigen::Index>(gaps.size())));
}

/// Largest number of eigenvalues in one cluster, where neighbours closer than
/// `tol` radians on the circle (including across 2 pi) join a cluster.
template <typename Scalar>
Eigen::Index degeneracy(const BasicLUSpectrum<Scalar>& spec, Scalar tol = Scalar(kDegeneracyTolerance)) {
  const Eigen::Index d = spec.dim();
  const Scalar two_pi = Scalar(2) * std::numbers::pi_v<Scalar>;
  const auto& th = spec.thetas();
  auto gap_after = [&](Eigen::Index k) { return k + 1 < d ? th(k + 1) - th(k) : two_pi - th(d - 1) + th(0); };

  Eigen::Index open = -1;
  for (Eigen::Index k = 0; k < d; ++k)
    if (gap_after(k) >= tol) {
      open = k;
      break;
    }
  if (open < 0) return d;

  Eigen::Index best = 1, run = 1;
  for (Eigen::Index step = 1; step < d; ++step) {
    const Eigen::Index prev = (open + step) % d;
    if (gap_after(prev) < tol) {
      ++run;
    } else {
      run = 1;
    }
    best = std::max(best, run);
  }
  return best;
}

/// Faithful (vanishes exactly on product states) iff fully nondegenerate.
template <typename Scalar>
bool is_faithful(const BasicLUSpectrum<Scalar>& spec, Scalar tol = Scalar(kDegeneracyTolerance)) {
  return degeneracy(spec, tol) == 1;
}

}  // namespace mirror
