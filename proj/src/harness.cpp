#include "mirror/harness.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace mirror::harness {

namespace {

json vec_json(const RVector<double>& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

VerificationReport collect(std::string suite, std::uint64_t seed, json params, const std::vector<CaseOutcome>& cases) {
  VerificationReport rep;
  rep.suite = std::move(suite);
  rep.seed = seed;
  rep.params = std::move(params);
  for (const auto& c : cases) rep.record(c.violation, c.record);
  return rep;
}

double max_abs(const CMatrix<double>& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

}  // namespace

void VerificationReport::record(double violation, json rec) {
  ++trials;
  const bool worst = violation > worst_violation;
  if (violation > 0) {
    ++failures;
    if (details.size() < kMaxDetails) details.push_back(rec);
  }
  if (worst) {
    worst_violation = violation;
    worst_case = std::move(rec);
  }
}

void VerificationReport::merge(const VerificationReport& other) {
  trials += other.trials;
  failures += other.failures;
  for (const auto& d : other.details)
    if (details.size() < kMaxDetails) details.push_back(d);
  if (other.worst_violation > worst_violation) {
    worst_violation = other.worst_violation;
    worst_case = other.worst_case;
  }
}

json VerificationReport::to_json() const {
  return json{{"suite", suite},
              {"trials", trials},
              {"failures", failures},
              {"passed", passed()},
              {"worst_violation", std::isfinite(worst_violation) ? json(worst_violation) : json(nullptr)},
              {"worst_case", worst_case},
              {"details", details},
              {"summary", summary},
              {"params", params},
              {"seed", seed}};
}

unsigned default_threads() { return std::max(1u, std::thread::hardware_concurrency()); }

RVector<double> random_simplex(Eigen::Index n, SplitMix64& rng) {
  RVector<double> x(n);
  for (Eigen::Index i = 0; i < n; ++i) x(i) = -std::log(rng.uniform_open_zero());
  return x / x.sum();
}

RVector<double> random_probs_with_rank(Eigen::Index d, Eigen::Index s, SplitMix64& rng, double floor) {
  if (s < 1 || s > d) throw ValidationError("random_probs_with_rank: need 1 <= s <= d");
  if (floor * static_cast<double>(s) > 1.0) throw ValidationError("random_probs_with_rank: floor too large");
  RVector<double> w;
  do {
    w = random_simplex(s, rng);
  } while (w.minCoeff() < floor);
  std::vector<Eigen::Index> slot(static_cast<std::size_t>(d));
  std::iota(slot.begin(), slot.end(), Eigen::Index(0));
  for (Eigen::Index i = d - 1; i > 0; --i)
    std::swap(slot[static_cast<std::size_t>(i)], slot[rng.below(static_cast<std::uint64_t>(i + 1))]);
  RVector<double> p = RVector<double>::Zero(d);
  for (Eigen::Index i = 0; i < s; ++i) p(slot[static_cast<std::size_t>(i)]) = w(i);
  return p;
}

LUSpectrum random_degenerate_spectrum(Eigen::Index d, Eigen::Index r, SplitMix64& rng, double min_gap) {
  if (r < 1 || r > d) throw ValidationError("random_degenerate_spectrum: need 1 <= r <= d");
  const Eigen::Index open = d - r + 1;
  if (min_gap * static_cast<double>(open) > 1.0) throw ValidationError("random_degenerate_spectrum: min_gap too large");
  const RVector<double> w = random_simplex(open, rng);
  RVector<double> gaps = RVector<double>::Zero(d);
  // r - 1 consecutive zero gaps glue r phases together.
  for (Eigen::Index k = 0; k < open; ++k)
    gaps(r - 1 + k) = min_gap + (1.0 - min_gap * static_cast<double>(open)) * w(k);
  gaps /= gaps.sum();
  const auto shift = static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(d)));
  RVector<double> rotated(d);
  for (Eigen::Index k = 0; k < d; ++k) rotated((k + shift) % d) = gaps(k);
  return from_gaps(rotated);
}

LUSpectrum random_nondegenerate_spectrum(Eigen::Index d, SplitMix64& rng, double min_gap) {
  if (min_gap * static_cast<double>(d) > 1.0) throw ValidationError("random_nondegenerate_spectrum: min_gap too large");
  RVector<double> gaps = min_gap + (1.0 - min_gap * static_cast<double>(d)) * random_simplex(d, rng).array();
  gaps /= gaps.sum();
  return from_gaps(gaps);
}

LUSpectrum random_phase_spectrum(Eigen::Index d, SplitMix64& rng) {
  std::vector<double> ph(static_cast<std::size_t>(d));
  for (auto& x : ph) x = 2.0 * std::numbers::pi * rng.uniform();
  return LUSpectrum::from_phases(ph);
}

VerificationReport theorem3_suite(Eigen::Index d, Eigen::Index r, long trials, std::uint64_t seed,
                                  unsigned threads) {
  if (r < 1 || r > d || d > 8) throw ValidationError("theorem3: need 1 <= r <= d <= 8");
  auto cases = parallel_map(trials, threads, [&](long t) {
    SplitMix64 rng = SplitMix64::stream(seed, static_cast<std::uint64_t>(t));
    const Eigen::Index s = 1 + t % d;
    const LUSpectrum spec = random_degenerate_spectrum(d, r, rng);
    const RVector<double> p = random_probs_with_rank(d, s, rng);
    const double me = mirror_entanglement(p, spec);
    const Eigen::Index measured_r = degeneracy(spec);
    // s <= r: me must vanish; s > r: me must be bounded away from zero.
    double violation = s <= r ? me - 1e-10 : 1e-8 - me;
    if (measured_r != r) violation = std::max(violation, 1.0);
    return CaseOutcome{violation, json{{"trial", t}, {"rank", s}, {"degeneracy", measured_r}, {"me", me},
                                       {"p", vec_json(p)}, {"gaps", vec_json(spec.gaps())}}};
  });
  auto rep = collect("theorem3", seed, json{{"d", d}, {"r", r}, {"trials", trials}}, cases);
  double min_faithful = 1.0, max_vanishing = 0.0;
  for (long t = 0; t < trials; ++t) {
    const auto& rec = cases[static_cast<std::size_t>(t)].record;
    const double me = rec.at("me").get<double>();
    if (rec.at("rank").get<long>() <= r)
      max_vanishing = std::max(max_vanishing, me);
    else
      min_faithful = std::min(min_faithful, me);
  }
  rep.summary = json{{"max_me_rank_le_r", max_vanishing}, {"min_me_rank_gt_r", min_faithful}};
  return rep;
}

VerificationReport theorem4_suite(Eigen::Index d, long samples, std::uint64_t seed, unsigned threads) {
  if (d < 2 || d > 8) throw ValidationError("theorem4: need 2 <= d <= 8");
  const double coeff = lower_bound_coefficient(d);
  auto cases = parallel_map(samples, threads, [&](long t) {
    const PureState psi = random_pure(d, d, seed + static_cast<std::uint64_t>(t));
    const RVector<double> p = schmidt_spectrum(psi).probs;
    const double el = linear_entropy(p), estar = stellar_entanglement(p);
    double violation = std::max(coeff * el - 1e-10 - estar, estar - el - 1e-10);
    if (d <= 3) violation = std::max(violation, std::abs(estar - el) - 1e-10);
    return CaseOutcome{violation, json{{"kind", "random"}, {"sample", t}, {"el", el}, {"estar", estar},
                                       {"p", vec_json(p)}}};
  });
  auto rep = collect("theorem4", seed, json{{"d", d}, {"samples", samples}}, cases);

  double min_gap_lower = 1.0, min_gap_upper = 1.0;
  for (const auto& c : cases) {
    const double el = c.record.at("el").get<double>(), estar = c.record.at("estar").get<double>();
    min_gap_lower = std::min(min_gap_lower, estar - coeff * el);
    min_gap_upper = std::min(min_gap_upper, el - estar);
  }

  // Boundary families on the grid p = 0, 0.05, ..., 1.
  for (int g = 0; g <= 20; ++g) {
    const double x = 0.05 * g;
    RVector<double> rank2 = RVector<double>::Zero(d);
    rank2(0) = x;
    rank2(1) = 1.0 - x;
    const double el2 = linear_entropy(rank2), e2 = stellar_entanglement(rank2);
    const double bound = static_cast<double>(d) / (2.0 * static_cast<double>(d - 1));
    rep.record(std::max(std::abs(e2 - coeff * el2) - 1e-10, el2 - bound - 1e-12),
               json{{"kind", "rank2"}, {"p", x}, {"el", el2}, {"estar", e2}});
    if (d != 4) continue;
    RVector<double> bis(4), dbl(4);
    bis << x / 3, x / 3, x / 3, 1.0 - x;
    dbl << (1 + x) / 4, (1 + x) / 4, (1 - x) / 4, (1 - x) / 4;
    const double elb = linear_entropy(bis), eb = stellar_entanglement(bis);
    rep.record(std::abs(eb - elb) - 1e-10, json{{"kind", "bisectrix"}, {"p", x}, {"el", elb}, {"estar", eb}});
    const double eld = linear_entropy(dbl), ed = stellar_entanglement(dbl);
    rep.record(std::abs(ed - (1.5 * eld - 0.5)) - 1e-10,
               json{{"kind", "doubly_degenerate"}, {"p", x}, {"el", eld}, {"estar", ed}});
  }
  rep.summary = json{{"coefficient", coeff},
                     {"min_estar_minus_lower", min_gap_lower},
                     {"min_upper_minus_estar", min_gap_upper}};
  return rep;
}

WitnessResult appendix_a_witness(Eigen::Index d, double s) {
  if (d < 2) throw ValidationError("witness: d must be >= 2");
  if (!(s >= 0.0 && s <= 1.0)) throw ValidationError("witness: s must lie in [0, 1]");
  const double root = std::sqrt(1.0 - s);
  RVector<double> q = RVector<double>::Constant(d, (1.0 - root) / static_cast<double>(d));
  q(0) += root;

  WitnessResult out{q, stellar_entanglement(q), linear_entropy(q), -1.0};
  if (d <= kBruteForceCap) {
    const CVector<double> lambda = stellar(d).canonical_eigenvalues();
    std::vector<int> sigma(static_cast<std::size_t>(d));
    std::iota(sigma.begin(), sigma.end(), 0);
    double dev = 0.0;
    do {
      std::complex<double> z(0, 0);
      for (Eigen::Index i = 0; i < d; ++i) z += lambda(i) * q(sigma[static_cast<std::size_t>(i)]);
      dev = std::max(dev, std::abs((1.0 - std::norm(z)) - s));
    } while (std::next_permutation(sigma.begin(), sigma.end()));
    out.max_permutation_deviation = dev;
  }
  return out;
}

VerificationReport witness_suite(Eigen::Index d, const std::vector<double>& s_values) {
  std::vector<CaseOutcome> cases;
  for (double s : s_values) {
    const auto w = appendix_a_witness(d, s);
    double violation = std::max(std::abs(w.estar - s), std::abs(w.el - s)) - 1e-10;
    if (w.max_permutation_deviation >= 0) violation = std::max(violation, w.max_permutation_deviation - 1e-10);
    cases.push_back({violation, json{{"s", s}, {"estar", w.estar}, {"el", w.el}, {"q", vec_json(w.q)},
                                     {"max_permutation_deviation", w.max_permutation_deviation}}});
  }
  return collect("witness", 0, json{{"d", d}, {"s_values", s_values}}, cases);
}

std::vector<ScatterPoint> figure3_scatter(Eigen::Index d, long samples, std::uint64_t seed, Eigen::Index db,
                                          unsigned threads) {
  if (d < 1) throw ValidationError("sample: d must be >= 1");
  if (db == 0) db = d;
  return parallel_map(samples, threads, [&](long t) {
    const PureState psi = random_pure(d, db, seed + static_cast<std::uint64_t>(t));
    const RVector<double> p = schmidt_spectrum(psi).probs;
    return ScatterPoint{linear_entropy(p), stellar_entanglement(p)};
  });
}

VerificationReport scatter_suite(Eigen::Index d, const std::vector<ScatterPoint>& points, std::uint64_t seed) {
  const double coeff = lower_bound_coefficient(d);
  VerificationReport rep;
  rep.suite = "scatter";
  rep.seed = seed;
  rep.params = json{{"d", d}, {"samples", points.size()}};
  double near_lower = 1.0, near_upper = 1.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& pt = points[i];
    rep.record(std::max(coeff * pt.el - 1e-10 - pt.estar, pt.estar - pt.el - 1e-10),
               json{{"sample", i}, {"el", pt.el}, {"estar", pt.estar}});
    near_lower = std::min(near_lower, pt.estar - coeff * pt.el);
    near_upper = std::min(near_upper, pt.el - pt.estar);
  }
  // Soft diagnostic only: nothing guarantees sample density near the boundaries.
  rep.summary = json{{"min_distance_to_lower", near_lower},
                     {"min_distance_to_upper", near_upper},
                     {"boundary_warning", d >= 2 && (near_lower >= 0.05 || near_upper >= 0.05)}};
  return rep;
}

VerificationReport locc_suite(Eigen::Index d, Eigen::Index db, Eigen::Index kraus_count, long trials,
                              std::uint64_t seed, const std::vector<LUSpectrum>& spectra, unsigned threads) {
  if (db == 0) db = d;
  const Eigen::Index local = std::min(d, db);
  for (const auto& s : spectra)
    if (s.dim() != local) throw ValidationError("locc: spectrum dimension must equal min(d, db)");
  struct TrialStats {
    std::vector<CaseOutcome> cases;
  };
  auto per_trial = parallel_map(trials, threads, [&](long t) {
    SplitMix64 rng = SplitMix64::stream(seed, static_cast<std::uint64_t>(t));
    const std::uint64_t state_seed = rng(), channel_seed = rng();
    const PureState psi = random_pure(d, db, state_seed);
    TrialStats out;
    for (Side side : {Side::A, Side::B}) {
      const KrausChannel ch = random_channel(side == Side::A ? d : db, kraus_count, side, channel_seed);
      for (std::size_t k = 0; k < spectra.size(); ++k) {
        const auto res = monotonicity_trial(psi, ch, spectra[k]);
        out.cases.push_back({-1e-9 - res.slack, json{{"trial", t},
                                                     {"side", side == Side::A ? "A" : "B"},
                                                     {"spectrum", k},
                                                     {"before", res.before},
                                                     {"after", res.after},
                                                     {"slack", res.slack}}});
      }
    }
    return out;
  });
  std::vector<CaseOutcome> cases;
  for (auto& tr : per_trial)
    for (auto& c : tr.cases) cases.push_back(std::move(c));
  double min_slack = std::numeric_limits<double>::infinity(), sum = 0;
  for (const auto& c : cases) {
    const double s = c.record.at("slack").get<double>();
    min_slack = std::min(min_slack, s);
    sum += s;
  }
  json spectra_json = json::array();
  for (const auto& s : spectra) spectra_json.push_back(vec_json(s.gaps()));
  auto rep = collect("locc", seed,
                     json{{"d", d}, {"db", db}, {"kraus_count", kraus_count}, {"trials", trials},
                          {"spectra_gaps", spectra_json}},
                     cases);
  rep.summary = json{{"trials", rep.trials},
                     {"min_slack", cases.empty() ? 0.0 : min_slack},
                     {"mean_slack", cases.empty() ? 0.0 : sum / static_cast<double>(cases.size())},
                     {"failures", rep.failures}};
  return rep;
}

VerificationReport majorization_suite(Eigen::Index d, long samples, int subdivisions, std::uint64_t seed,
                                      unsigned threads, std::vector<MajorizationRow>* rows) {
  if (d < 1) throw ValidationError("majorization: d must be >= 1");
  struct Sample {
    CaseOutcome outcome;
    std::vector<IncrementStep<double>> steps;
  };
  auto results = parallel_map(samples, threads, [&](long t) {
    SplitMix64 rng = SplitMix64::stream(seed, static_cast<std::uint64_t>(t));
    // Every fifth sample is rank-deficient to exercise zero targets.
    const Eigen::Index rank = t % 5 == 4 ? 1 + static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(d)))
                                         : d;
    const RVector<double> p = rank == d ? random_simplex(d, rng) : random_probs_with_rank(d, rank, rng, 0.0);
    const auto chain = ttransform_chain(p);

    long t_count = 0;
    double max_t = 0.0, stochastic_defect = 0.0;
    for (const auto& step : chain) {
      Eigen::MatrixXd m;
      if (const auto* tt = std::get_if<TTransform<double>>(&step)) {
        ++t_count;
        max_t = std::max(max_t, tt->t);
        m = tt->matrix();
      } else {
        m = std::get<Transposition>(step).matrix<double>();
      }
      stochastic_defect = std::max({stochastic_defect, (m.rowwise().sum().array() - 1.0).abs().maxCoeff(),
                                    (m.colwise().sum().array() - 1.0).abs().maxCoeff(), -m.minCoeff()});
    }
    const double reproduction = (apply_chain(chain, pure_vector(d)) - p).cwiseAbs().maxCoeff();
    const auto audit = increment_audit(p, subdivisions);

    double violation = std::max({reproduction - 1e-12, stochastic_defect - 1e-12, max_t - 0.5,
                                 audit.coefficient * audit.total_el - 1e-9 - audit.total_estar});
    if (t_count > std::max<Eigen::Index>(d - 1, 0)) violation = std::max(violation, 1.0);
    if (!audit.el_monotone) violation = std::max(violation, 1.0);
    Sample out;
    out.outcome = {violation, json{{"sample", t},
                                   {"p", vec_json(p)},
                                   {"t_transforms", t_count},
                                   {"max_t", max_t},
                                   {"reproduction_error", reproduction},
                                   {"total_estar", audit.total_estar},
                                   {"total_el", audit.total_el},
                                   {"ratio_failures", audit.ratio_failures},
                                   {"el_monotone", audit.el_monotone}}};
    out.steps = audit.steps;
    return out;
  });
  std::vector<CaseOutcome> cases;
  long ratio_failures = 0, steps = 0;
  for (std::size_t i = 0; i < results.size(); ++i) {
    ratio_failures += results[i].outcome.record.at("ratio_failures").get<long>();
    steps += static_cast<long>(results[i].steps.size());
    if (rows)
      for (std::size_t k = 0; k < results[i].steps.size(); ++k) {
        const auto& s = results[i].steps[k];
        rows->push_back({static_cast<long>(i), static_cast<long>(k), s.d_estar, s.d_el, s.ratio_ok});
      }
    cases.push_back(std::move(results[i].outcome));
  }
  auto rep = collect("majorization", seed, json{{"d", d}, {"samples", samples}, {"subdivisions", subdivisions}},
                     cases);
  rep.summary = json{{"steps", steps}, {"per_step_ratio_failures", ratio_failures},
                     {"coefficient", lower_bound_coefficient(d)}};
  return rep;
}

VerificationReport lemma1_suite(Eigen::Index d, long cases_n, long unitaries_per_case, std::uint64_t seed,
                                unsigned threads) {
  if (d < 1 || d > 8) throw ValidationError("lemma1: need 1 <= d <= 8");
  auto cases = parallel_map(cases_n, threads, [&](long c) {
    SplitMix64 rng = SplitMix64::stream(seed, static_cast<std::uint64_t>(c));
    const RVector<double> p = random_simplex(d, rng);
    const LUSpectrum spec = random_phase_spectrum(d, rng);
    const std::uint64_t unitary_seed = rng();
    const auto exact = fidelity_exact(p, spec);
    const auto brute = fidelity_bruteforce(p, spec);
    const auto mc = lemma1_check(p, spec, unitaries_per_case, unitary_seed);
    const double gap = std::abs(exact.fidelity - brute.fidelity);
    return CaseOutcome{std::max(gap - 1e-12, mc.max_excess - 1e-9),
                       json{{"case", c},
                            {"p", vec_json(p)},
                            {"thetas", vec_json(spec.thetas())},
                            {"fidelity_exact", exact.fidelity},
                            {"fidelity_bruteforce", brute.fidelity},
                            {"optimizer_gap", gap},
                            {"max_unistochastic", mc.max_value},
                            {"max_excess", mc.max_excess}}};
  });
  double worst_gap = 0.0, worst_excess = -1.0;
  for (const auto& c : cases) {
    worst_gap = std::max(worst_gap, c.record.at("optimizer_gap").get<double>());
    worst_excess = std::max(worst_excess, c.record.at("max_excess").get<double>());
  }
  auto rep = collect("lemma1", seed, json{{"d", d}, {"cases", cases_n}, {"unitaries_per_case", unitaries_per_case}},
                     cases);
  rep.summary = json{{"max_optimizer_gap", worst_gap}, {"max_unistochastic_excess", worst_excess}};
  return rep;
}

VerificationReport optimal_unitary_suite(Eigen::Index d, long samples, std::uint64_t seed, Eigen::Index db,
                                         unsigned threads) {
  if (db == 0) db = d;
  if (d > db) throw ValidationError("unitary suite: requires d <= db");
  auto cases = parallel_map(samples, threads, [&](long t) {
    SplitMix64 rng = SplitMix64::stream(seed, static_cast<std::uint64_t>(t));
    const PureState psi = random_pure(d, db, rng());
    const LUSpectrum spec = t % 2 == 0 ? stellar(d) : random_nondegenerate_spectrum(d, rng);
    const CMatrix<double> w = optimal_unitary(psi, spec);
    const CMatrix<double> rho = psi.reduced_a();
    const double fidelity = fidelity_exact(schmidt_spectrum(psi).probs, spec).fidelity;

    const double unitarity = max_abs(w * w.adjoint() - CMatrix<double>::Identity(d, d));
    const double commutator = max_abs(w * rho - rho * w);

    // Spectrum of W against Lambda, nearest-unused matching.
    Eigen::ComplexEigenSolver<CMatrix<double>> eig(w);
    const CVector<double> target = spec.eigenvalues();
    std::vector<bool> used(static_cast<std::size_t>(d), false);
    double spectrum_error = 0.0;
    for (Eigen::Index i = 0; i < d; ++i) {
      double best = std::numeric_limits<double>::infinity();
      std::size_t arg = 0;
      for (Eigen::Index j = 0; j < d; ++j)
        if (!used[static_cast<std::size_t>(j)] && std::abs(eig.eigenvalues()(i) - target(j)) < best) {
          best = std::abs(eig.eigenvalues()(i) - target(j));
          arg = static_cast<std::size_t>(j);
        }
      used[arg] = true;
      spectrum_error = std::max(spectrum_error, best);
    }

    // <psi|(W (x) 1)|psi> on the full d*db vector, index a*db + b.
    const auto& m = psi.amplitudes();
    std::complex<double> full(0, 0);
    for (Eigen::Index a = 0; a < d; ++a)
      for (Eigen::Index a2 = 0; a2 < d; ++a2)
        for (Eigen::Index b = 0; b < db; ++b) full += std::conj(m(a, b)) * w(a, a2) * m(a2, b);
    const double overlap = std::norm(full);
    const double trace_form = std::norm((w * rho).trace());

    const double violation = std::max({unitarity - 1e-10, commutator - 1e-10, spectrum_error - 1e-10,
                                       std::abs(overlap - fidelity) - 1e-10, std::abs(trace_form - overlap) - 1e-12});
    return CaseOutcome{violation, json{{"sample", t},
                                       {"unitarity", unitarity},
                                       {"commutator", commutator},
                                       {"spectrum_error", spectrum_error},
                                       {"overlap", overlap},
                                       {"fidelity", fidelity},
                                       {"trace_form", trace_form}}};
  });
  auto rep = collect("unitary", seed, json{{"d", d}, {"db", db}, {"samples", samples}}, cases);
  double worst = 0.0;
  for (const auto& c : cases)
    for (const char* k : {"unitarity", "commutator", "spectrum_error"})
      worst = std::max(worst, c.record.at(k).get<double>());
  rep.summary = json{{"max_matrix_defect", worst}};
  return rep;
}

}  // namespace mirror::harness
