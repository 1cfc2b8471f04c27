#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>

#include <Eigen/Dense>

namespace mirror {

/// SplitMix64 (Steele, Lea, Flood 2014). Every draw is a pure function of
/// the 64-bit state, so streams are reproducible across platforms and
/// standard libraries. Independent streams are created with stream().
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  /// Stream for sample `index` of a run seeded with `seed`.
  static SplitMix64 stream(std::uint64_t seed, std::uint64_t index) {
    return SplitMix64(seed + index);
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  /// Uniform double in (0, 1].
  double uniform_open_zero() { return 1.0 - uniform(); }

  /// Uniform integer in [0, n). Rejection-free multiply-shift; bias < n / 2^64.
  std::uint64_t below(std::uint64_t n) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>((*this)()) * n) >> 64);
  }

 private:
  std::uint64_t state_;
};

/// Standard normal variate via Box-Muller. Uses both uniforms per call and
/// discards the second variate so each draw consumes a fixed amount of state.
inline double standard_normal(SplitMix64& rng) {
  const double u1 = rng.uniform_open_zero();
  const double u2 = rng.uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

/// Complex Gaussian with E|z|^2 = 1.
template <typename Scalar = double>
std::complex<Scalar> complex_normal(SplitMix64& rng) {
  const Scalar re = static_cast<Scalar>(standard_normal(rng));
  const Scalar im = static_cast<Scalar>(standard_normal(rng));
  return std::complex<Scalar>(re, im) / std::sqrt(Scalar(2));
}

template <typename Scalar = double>
Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic> ginibre(Eigen::Index rows, Eigen::Index cols,
                                                                            SplitMix64& rng) {
  Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic> g(rows, cols);
  // Row-major fill order keeps the layout independent of Eigen's storage order.
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) g(r, c) = complex_normal<Scalar>(rng);
  return g;
}

/// Haar-distributed n x n unitary: QR of a Ginibre matrix with the phases of
/// diag(R) absorbed into Q (Mezzadri's correction).
template <typename Scalar = double>
Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic> haar_unitary(Eigen::Index n, SplitMix64& rng) {
  using CMatrix = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;
  const CMatrix g = ginibre<Scalar>(n, n, rng);
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ();
  const CMatrix& r = qr.matrixQR();
  for (Eigen::Index j = 0; j < n; ++j) {
    const std::complex<Scalar> rjj = r(j, j);
    const Scalar mag = std::abs(rjj);
    if (mag > Scalar(0)) q.col(j) *= rjj / mag;
  }
  return q;
}

}  // namespace mirror
