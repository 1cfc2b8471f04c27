#pragma once

#include <atomic>
#include <cstdint>
#include <limits>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "mirror/locc.hpp"
#include "mirror/majorization.hpp"
#include "mirror/monotones.hpp"
#include "mirror/random.hpp"
#include "mirror/spectra.hpp"
#include "mirror/states.hpp"

namespace mirror::harness {

using nlohmann::json;

/// Outcome of one verification suite. A case fails when its violation
/// (amount by which it exceeds the allowed tolerance) is positive.
struct VerificationReport {
  std::string suite;
  long trials = 0;
  long failures = 0;
  double worst_violation = -std::numeric_limits<double>::infinity();
  json worst_case;                 // record of the case with the largest violation
  json details = json::array();    // failing cases, capped at kMaxDetails
  json summary = json::object();   // suite-specific statistics
  json params = json::object();
  std::uint64_t seed = 0;

  static constexpr std::size_t kMaxDetails = 20;

  bool passed() const { return failures == 0; }
  void record(double violation, json record);
  /// Folds another report into this one (counts add, worst is kept).
  void merge(const VerificationReport& other);
  json to_json() const;
};

/// One case: its violation and a machine-readable description.
struct CaseOutcome {
  double violation = -std::numeric_limits<double>::infinity();
  json record;
};

/// Worker count used when a suite is called with threads = 0.
unsigned default_threads();

/// Runs f(0..n-1) on up to `threads` workers; results are returned in index
/// order, so reductions over them are independent of scheduling.
template <typename F>
auto parallel_map(long n, unsigned threads, F f) -> std::vector<decltype(f(0L))> {
  std::vector<decltype(f(0L))> out(static_cast<std::size_t>(std::max(n, 0L)));
  if (threads == 0) threads = default_threads();
  threads = static_cast<unsigned>(std::min<long>(threads, std::max(n, 1L)));
  if (threads <= 1) {
    for (long i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = f(i);
    return out;
  }
  std::atomic<long> next{0};
  std::vector<std::jthread> pool;
  for (unsigned w = 0; w < threads; ++w)
    pool.emplace_back([&] {
      for (long i = next++; i < n; i = next++) out[static_cast<std::size_t>(i)] = f(i);
    });
  pool.clear();
  return out;
}

// Random instance generators. All draw from the supplied stream only.
RVector<double> random_simplex(Eigen::Index n, SplitMix64& rng);
/// Exactly s nonzero entries, each >= floor, at random positions among d.
RVector<double> random_probs_with_rank(Eigen::Index d, Eigen::Index s, SplitMix64& rng, double floor = 0.01);
/// r coincident phases, all other neighbouring phases separated by >= min_gap turns.
LUSpectrum random_degenerate_spectrum(Eigen::Index d, Eigen::Index r, SplitMix64& rng, double min_gap = 0.1);
/// Nondegenerate spectrum with every gap >= min_gap turns.
LUSpectrum random_nondegenerate_spectrum(Eigen::Index d, SplitMix64& rng, double min_gap = 0.01);
/// Phases i.i.d. uniform on [0, 2 pi).
LUSpectrum random_phase_spectrum(Eigen::Index d, SplitMix64& rng);

/// Hierarchy: me vanishes iff Schmidt rank <= degeneracy r.
VerificationReport theorem3_suite(Eigen::Index d, Eigen::Index r, long trials, std::uint64_t seed,
                                  unsigned threads = 0);

/// Sandwich coeff(d) E_L <= E_stellar <= E_L on random states plus the closed
/// forms of the boundary families (rank-2 for every d, the other two at d = 4).
VerificationReport theorem4_suite(Eigen::Index d, long samples, std::uint64_t seed, unsigned threads = 0);

struct WitnessResult {
  RVector<double> q;
  double estar;
  double el;
  /// max over all d! pairings of |g_sigma(q) - s|; -1 when d is too large to enumerate.
  double max_permutation_deviation;
};

/// q = (1 - sqrt(1 - s)) u + sqrt(1 - s) e_1 with u uniform, for which every
/// pairing with the stellar spectrum gives the same overlap.
WitnessResult appendix_a_witness(Eigen::Index d, double s);
VerificationReport witness_suite(Eigen::Index d, const std::vector<double>& s_values);

struct ScatterPoint {
  double el;
  double estar;
};

/// (E_L, E_stellar) for `samples` Haar-random states in C^d x C^{db}; sample i uses seed + i.
std::vector<ScatterPoint> figure3_scatter(Eigen::Index d, long samples, std::uint64_t seed, Eigen::Index db = 0,
                                          unsigned threads = 0);
/// Sandwich check over a scatter plus the soft boundary-proximity diagnostic.
VerificationReport scatter_suite(Eigen::Index d, const std::vector<ScatterPoint>& points, std::uint64_t seed);

/// LOCC monotonicity for random one-sided instruments on both sides.
VerificationReport locc_suite(Eigen::Index d, Eigen::Index db, Eigen::Index kraus_count, long trials,
                              std::uint64_t seed, const std::vector<LUSpectrum>& spectra, unsigned threads = 0);

struct MajorizationRow {
  long sample;
  long step;
  double d_estar;
  double d_el;
  bool ratio_ok;
};

/// Chain reconstruction, doubly stochastic steps and the aggregate increment inequality.
VerificationReport majorization_suite(Eigen::Index d, long samples, int subdivisions, std::uint64_t seed,
                                      unsigned threads = 0, std::vector<MajorizationRow>* rows = nullptr);

/// Exact vs brute-force optimizer, and random unistochastic matrices never beat the permutation optimum.
VerificationReport lemma1_suite(Eigen::Index d, long cases, long unitaries_per_case, std::uint64_t seed,
                                unsigned threads = 0);

/// Contracts of the optimal local unitary (unitarity, commutation, spectrum, overlap).
VerificationReport optimal_unitary_suite(Eigen::Index d, long samples, std::uint64_t seed, Eigen::Index db = 0,
                                         unsigned threads = 0);

}  // namespace mirror::harness
