#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "mirror/errors.hpp"
#include "mirror/monotones.hpp"
#include "mirror/spectra.hpp"
#include "mirror/states.hpp"

namespace mirror {

/// (1 - t) 1 + t W with W swapping entries i and j.
template <typename Scalar = double>
struct TTransform {
  Eigen::Index d;
  Eigen::Index i;
  Eigen::Index j;
  Scalar t;

  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> matrix() const {
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> m =
        Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Identity(d, d);
    m(i, i) = m(j, j) = Scalar(1) - t;
    m(i, j) = m(j, i) = t;
    return m;
  }

  template <typename Derived>
  void apply(Eigen::MatrixBase<Derived>& x) const {
    const Scalar xi = x(i), xj = x(j);
    x(i) = (Scalar(1) - t) * xi + t * xj;
    x(j) = (Scalar(1) - t) * xj + t * xi;
  }
};

/// Plain swap of entries i and j.
struct Transposition {
  Eigen::Index d;
  Eigen::Index i;
  Eigen::Index j;

  template <typename Scalar = double>
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> matrix() const {
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> m =
        Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Identity(d, d);
    m(i, i) = m(j, j) = Scalar(0);
    m(i, j) = m(j, i) = Scalar(1);
    return m;
  }

  template <typename Derived>
  void apply(Eigen::MatrixBase<Derived>& x) const {
    std::swap(x(i), x(j));
  }
};

template <typename Scalar = double>
using ChainStep = std::variant<TTransform<Scalar>, Transposition>;

/// Chain steps are stored in application order: steps[0] acts first.
template <typename Scalar = double>
using Chain = std::vector<ChainStep<Scalar>>;

/// q majorizes p: sorted partial sums of q dominate those of p, equal totals.
template <typename DerivedQ, typename DerivedP>
bool majorizes(const Eigen::MatrixBase<DerivedQ>& q, const Eigen::MatrixBase<DerivedP>& p,
               typename DerivedQ::Scalar tol = 1e-12) {
  using Scalar = typename DerivedQ::Scalar;
  if (q.size() != p.size()) throw ValidationError("majorizes: vectors differ in length");
  const RVector<Scalar> qv = q, pv = p;
  std::vector<Scalar> qs(qv.data(), qv.data() + qv.size());
  std::vector<Scalar> ps(pv.data(), pv.data() + pv.size());
  std::sort(qs.begin(), qs.end(), std::greater<Scalar>());
  std::sort(ps.begin(), ps.end(), std::greater<Scalar>());
  Scalar sq = 0, sp = 0;
  for (std::size_t k = 0; k < qs.size(); ++k) {
    sq += qs[k];
    sp += ps[k];
    if (sq < sp - tol) return false;
  }
  return std::abs(sq - sp) <= tol;
}

template <typename Scalar, typename Derived>
void apply_step(const ChainStep<Scalar>& step, Eigen::MatrixBase<Derived>& x) {
  std::visit([&](const auto& s) { s.apply(x); }, step);
}

template <typename Scalar>
RVector<Scalar> apply_chain(const Chain<Scalar>& chain, RVector<Scalar> x) {
  for (const auto& step : chain) apply_step(step, x);
  return x;
}

/// (1, 0, ..., 0) of length d.
template <typename Scalar = double>
RVector<Scalar> pure_vector(Eigen::Index d) {
  RVector<Scalar> q = RVector<Scalar>::Zero(d);
  q(0) = Scalar(1);
  return q;
}

/// T-transform chain carrying (1, 0, ..., 0) to p.
///
/// Works on p sorted descending: with x the current vector, take j the last
/// index where x exceeds the target and k the first later index where x falls
/// short, then move min(x_j - y_j, y_k - x_k) from j to k. Each move settles
/// one coordinate, so at most d - 1 T-transforms are needed. A move with
/// t > 1/2 is emitted as the swap W followed by T(1 - t), since T(t) = T(1 - t) W.
/// Trailing transpositions restore the caller's ordering of p.
template <typename Derived>
Chain<typename Derived::Scalar> ttransform_chain(const Eigen::MatrixBase<Derived>& p) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index d = p.size();
  if (d < 1) throw ValidationError("ttransform_chain: empty vector");
  if ((p.array() < Scalar(-1e-12)).any() || std::abs(p.sum() - Scalar(1)) > Scalar(1e-9))
    throw ValidationError("ttransform_chain: p must be a probability vector");

  std::vector<Eigen::Index> by_p(static_cast<std::size_t>(d));
  std::iota(by_p.begin(), by_p.end(), Eigen::Index(0));
  std::stable_sort(by_p.begin(), by_p.end(), [&](Eigen::Index a, Eigen::Index b) { return p(a) > p(b); });
  RVector<Scalar> y(d);
  for (Eigen::Index r = 0; r < d; ++r) y(r) = std::max(p(by_p[static_cast<std::size_t>(r)]), Scalar(0));

  const Scalar eps = Scalar(1e-15);
  RVector<Scalar> x = pure_vector<Scalar>(d);
  Chain<Scalar> chain;
  for (Eigen::Index iter = 0; iter < d; ++iter) {
    Eigen::Index j = -1;
    for (Eigen::Index i = d - 1; i >= 0; --i)
      if (x(i) > y(i) + eps) {
        j = i;
        break;
      }
    if (j < 0) break;
    Eigen::Index k = -1;
    for (Eigen::Index i = j + 1; i < d; ++i)
      if (x(i) < y(i) - eps) {
        k = i;
        break;
      }
    if (k < 0) break;

    const Scalar delta = std::min(x(j) - y(j), y(k) - x(k));
    const Scalar t = delta / (x(j) - x(k));
    const bool settles_j = x(j) - y(j) <= y(k) - x(k);
    if (t <= Scalar(0.5)) {
      chain.push_back(TTransform<Scalar>{d, j, k, t});
    } else {
      chain.push_back(Transposition{d, j, k});
      chain.push_back(TTransform<Scalar>{d, j, k, Scalar(1) - t});
    }
    x(j) -= delta;
    x(k) += delta;
    if (settles_j) x(j) = y(j); else x(k) = y(k);
  }

  // Reorder from descending to the caller's order with explicit swaps.
  std::vector<Eigen::Index> holds(static_cast<std::size_t>(d));  // holds[pos] = sorted rank at pos
  std::iota(holds.begin(), holds.end(), Eigen::Index(0));
  std::vector<Eigen::Index> rank_of(static_cast<std::size_t>(d));
  for (Eigen::Index r = 0; r < d; ++r) rank_of[static_cast<std::size_t>(by_p[static_cast<std::size_t>(r)])] = r;
  for (Eigen::Index pos = 0; pos < d; ++pos) {
    const Eigen::Index want = rank_of[static_cast<std::size_t>(pos)];
    if (holds[static_cast<std::size_t>(pos)] == want) continue;
    const auto it = std::find(holds.begin() + pos, holds.end(), want);
    const Eigen::Index q = static_cast<Eigen::Index>(it - holds.begin());
    chain.push_back(Transposition{d, pos, q});
    std::swap(holds[static_cast<std::size_t>(pos)], holds[static_cast<std::size_t>(q)]);
  }
  return chain;
}

inline constexpr int kDefaultSubdivisions = 64;

template <typename Scalar = double>
struct IncrementStep {
  Scalar d_estar;
  Scalar d_el;
  bool ratio_ok;
};

template <typename Scalar = double>
struct IncrementAudit {
  std::vector<IncrementStep<Scalar>> steps;
  Scalar coefficient = Scalar(1);
  Scalar total_estar = Scalar(0);
  Scalar total_el = Scalar(0);
  RVector<Scalar> endpoint;
  long ratio_failures = 0;
  bool aggregate_ok = true;
  bool el_monotone = true;
};

/// Walks the chain for p, splitting each T-transform into `subdivisions`
/// steps equally spaced in s (T(s) = (1 + e^{-s})/2 1 + (1 - e^{-s})/2 W), and
/// records the increments of the mirror entanglement for `spec` and of E_L.
/// The per-step ratio test is diagnostic; the aggregate test is the contract.
template <typename Derived, typename Scalar = typename Derived::Scalar>
IncrementAudit<Scalar> increment_audit(const Eigen::MatrixBase<Derived>& p, const BasicLUSpectrum<Scalar>& spec,
                                       int subdivisions = kDefaultSubdivisions) {
  const Eigen::Index d = p.size();
  if (spec.dim() != d) throw ValidationError("increment_audit: spectrum dimension differs from p");
  if (subdivisions < 1) throw ValidationError("increment_audit: subdivisions must be >= 1");
  const Chain<Scalar> chain = ttransform_chain(p);

  IncrementAudit<Scalar> audit;
  audit.coefficient = lower_bound_coefficient<Scalar>(d);
  RVector<Scalar> x = pure_vector<Scalar>(d);
  Scalar e_prev = mirror_entanglement(x, spec);
  Scalar l_prev = linear_entropy(x);
  const Scalar e_start = e_prev, l_start = l_prev;

  for (const auto& step : chain) {
    if (const auto* tt = std::get_if<TTransform<Scalar>>(&step)) {
      const RVector<Scalar> base = x;
      const Scalar u_end = Scalar(1) - Scalar(2) * tt->t;
      for (int k = 1; k <= subdivisions; ++k) {
        const Scalar tk = k == subdivisions
                              ? tt->t
                              : (Scalar(1) - std::pow(u_end, Scalar(k) / Scalar(subdivisions))) / Scalar(2);
        x = base;
        TTransform<Scalar>{d, tt->i, tt->j, tk}.apply(x);
        const Scalar e = mirror_entanglement(x, spec);
        const Scalar l = linear_entropy(x);
        const IncrementStep<Scalar> inc{e - e_prev, l - l_prev,
                                        e - e_prev >= audit.coefficient * (l - l_prev) - Scalar(1e-9)};
        if (!inc.ratio_ok) ++audit.ratio_failures;
        if (inc.d_el < -Scalar(1e-12)) audit.el_monotone = false;
        audit.steps.push_back(inc);
        e_prev = e;
        l_prev = l;
      }
    } else {
      apply_step(step, x);
    }
  }
  audit.endpoint = x;
  audit.total_estar = e_prev - e_start;
  audit.total_el = l_prev - l_start;
  audit.aggregate_ok = audit.total_estar >= audit.coefficient * audit.total_el - Scalar(1e-9);
  return audit;
}

template <typename Derived>
IncrementAudit<typename Derived::Scalar> increment_audit(const Eigen::MatrixBase<Derived>& p,
                                                         int subdivisions = kDefaultSubdivisions) {
  return increment_audit(p, stellar<typename Derived::Scalar>(p.size()), subdivisions);
}

}  // namespace mirror
