#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mirror/errors.hpp"
#include "mirror/monotones.hpp"
#include "mirror/random.hpp"
#include "mirror/spectra.hpp"
#include "mirror/states.hpp"

namespace mirror {

inline constexpr double kCompletenessTolerance = 1e-10;
/// Branches with weight below this are dropped instead of renormalized.
inline constexpr double kBranchDropThreshold = 1e-14;

/// Local instrument {A_i} on one subsystem with sum_i A_i^dagger A_i = 1.
template <typename Scalar = double>
class BasicKrausChannel {
 public:
  BasicKrausChannel(Side side, std::vector<CMatrix<Scalar>> operators)
      : side_(side), operators_(std::move(operators)) {
    if (operators_.empty()) throw ValidationError("kraus: need at least one operator");
    const Eigen::Index dx = operators_.front().rows();
    if (dx < 1) throw ValidationError("kraus: operators must be non-empty");
    CMatrix<Scalar> acc = CMatrix<Scalar>::Zero(dx, dx);
    for (const auto& a : operators_) {
      if (a.rows() != dx || a.cols() != dx) throw ValidationError("kraus: operators must all be dX x dX");
      acc.noalias() += a.adjoint() * a;
    }
    const Scalar defect = (acc - CMatrix<Scalar>::Identity(dx, dx)).cwiseAbs().maxCoeff();
    if (defect > Scalar(kCompletenessTolerance))
      throw ValidationError("kraus: completeness violated by " + std::to_string(static_cast<double>(defect)));
  }

  Side side() const { return side_; }
  Eigen::Index dim() const { return operators_.front().rows(); }
  const std::vector<CMatrix<Scalar>>& operators() const { return operators_; }

 private:
  Side side_;
  std::vector<CMatrix<Scalar>> operators_;
};

using KrausChannel = BasicKrausChannel<double>;

/// m Kraus operators sliced from the first dX columns of a Haar unitary on
/// C^{dX m}; completeness holds because those columns are orthonormal.
template <typename Scalar = double>
BasicKrausChannel<Scalar> random_channel(Eigen::Index dx, Eigen::Index m, Side side, std::uint64_t seed) {
  if (dx < 1 || m < 1) throw ValidationError("random_channel: dX and m must be >= 1");
  SplitMix64 rng(seed);
  const CMatrix<Scalar> u = haar_unitary<Scalar>(dx * m, rng);
  std::vector<CMatrix<Scalar>> ops;
  ops.reserve(static_cast<std::size_t>(m));
  for (Eigen::Index i = 0; i < m; ++i) ops.emplace_back(u.block(i * dx, 0, dx, dx));
  return BasicKrausChannel<Scalar>(side, std::move(ops));
}

template <typename Scalar = double>
struct Branch {
  Scalar weight;
  BasicPureState<Scalar> state;
};

/// Ensemble {p_i, psi_i} with sqrt(p_i) psi_i = (A_i (x) 1) psi, or (1 (x) B_i) psi.
template <typename Scalar>
std::vector<Branch<Scalar>> apply_channel(const BasicPureState<Scalar>& state, const BasicKrausChannel<Scalar>& ch) {
  const Eigen::Index target = ch.side() == Side::A ? state.dim_a() : state.dim_b();
  if (ch.dim() != target)
    throw ValidationError("apply_channel: channel acts on dimension " + std::to_string(ch.dim()) +
                          " but the subsystem has dimension " + std::to_string(target));
  std::vector<Branch<Scalar>> out;
  for (const auto& a : ch.operators()) {
    // (1 (x) B) acts on the column index of the amplitude matrix: M -> M B^T.
    CMatrix<Scalar> next = ch.side() == Side::A ? CMatrix<Scalar>(a * state.amplitudes())
                                                : CMatrix<Scalar>(state.amplitudes() * a.transpose());
    const Scalar w = next.squaredNorm();
    if (w < Scalar(kBranchDropThreshold)) continue;
    out.push_back({w, BasicPureState<Scalar>::normalized(std::move(next))});
  }
  return out;
}

template <typename Scalar = double>
struct MonotonicityTrial {
  Scalar before;
  Scalar after;
  Scalar slack;  // before - after; LOCC monotonicity requires slack >= 0
};

template <typename Scalar>
MonotonicityTrial<Scalar> monotonicity_trial(const BasicPureState<Scalar>& state,
                                             const BasicKrausChannel<Scalar>& ch,
                                             const BasicLUSpectrum<Scalar>& spec) {
  const Scalar before = mirror_entanglement(state, spec);
  Scalar after = Scalar(0);
  for (const auto& br : apply_channel(state, ch)) after += br.weight * mirror_entanglement(br.state, spec);
  return {before, after, before - after};
}

}  // namespace mirror
