#include "mirror/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>
#include <sstream>

#include "mirror/errors.hpp"
#include "mirror/harness.hpp"
#include "mirror/io.hpp"
#include "mirror/monotones.hpp"
#include "mirror/spectra.hpp"
#include "mirror/states.hpp"

namespace mirror::cli {

namespace {

using nlohmann::json;
using harness::VerificationReport;

json vec_json(const RVector<double>& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

void emit(const RunConfig& cfg, std::ostream& out, const std::string& text) {
  if (cfg.out)
    io::write_atomic(*cfg.out, text);
  else
    out << text;
}

json envelope(const RunConfig& cfg, json params, json results) {
  return json{{"tool_version", kToolVersion}, {"seed", cfg.seed}, {"params", std::move(params)},
              {"results", std::move(results)}};
}

std::vector<long> dims_or(const std::optional<long>& d, long lo, long hi) {
  if (d) return {*d};
  std::vector<long> out;
  for (long k = lo; k <= hi; ++k) out.push_back(k);
  return out;
}

long positive(const std::optional<long>& v, long fallback, const char* field) {
  const long x = v.value_or(fallback);
  if (x < 1) throw ValidationError(std::string(field) + ": must be >= 1");
  return x;
}

int do_compute(const RunConfig& cfg, std::ostream& out) {
  if (cfg.state_path.has_value() == cfg.probs.has_value())
    throw ValidationError("input: give exactly one of --state or --probs");
  SchmidtSpectrum p = cfg.state_path ? schmidt_spectrum(io::state_from_json(io::read_json_file(*cfg.state_path)))
                                     : SchmidtSpectrum::from_probs([&] {
                                         const auto v = io::parse_real_list(*cfg.probs, "probs");
                                         return RVector<double>(Eigen::Map<const RVector<double>>(
                                             v.data(), static_cast<Eigen::Index>(v.size())));
                                       }());
  const Eigen::Index d = p.dim();
  const std::string spec_arg = cfg.spectrum.value_or("stellar");
  const LUSpectrum spec = io::parse_spectrum_arg(spec_arg, d);
  const auto sol = fidelity_exact(p.probs, spec);
  const double el = linear_entropy(p.probs);
  const auto bounds = theorem4_bounds(el, d);
  json results{{"d", d},
               {"probs", vec_json(p.probs)},
               {"me", sol.me},
               {"fidelity", sol.fidelity},
               {"sigma", sol.sigma},
               {"overlap", {{"re", sol.overlap.real()}, {"im", sol.overlap.imag()}}},
               {"el", el},
               {"bounds", {{"lower", bounds.lower}, {"upper", bounds.upper}}}};
  json params{{"spectrum", spec_arg}};
  if (cfg.state_path) params["state"] = *cfg.state_path;
  if (cfg.probs) params["probs"] = *cfg.probs;
  emit(cfg, out, envelope(cfg, params, results).dump(2) + "\n");
  return kExitOk;
}

int do_spectrum(const RunConfig& cfg, std::ostream& out) {
  const std::string arg = cfg.spectrum.value_or("stellar");
  Eigen::Index d = 0;
  if (cfg.d) {
    d = *cfg.d;
  } else if (arg.starts_with("gaps:")) {
    d = static_cast<Eigen::Index>(io::parse_real_list(arg.substr(5), "spectrum gaps").size());
  } else if (arg.starts_with("file:")) {
    const auto j = io::read_json_file(arg.substr(5));
    if (!j.contains("d") || !j.at("d").is_number_integer()) throw ValidationError("d: expected an integer");
    d = j.at("d").get<long>();
  } else {
    throw ValidationError("d: --d is required for --kind " + arg);
  }
  if (d < 1) throw ValidationError("d: must be >= 1");
  const LUSpectrum spec = io::parse_spectrum_arg(arg, d);
  emit(cfg, out, envelope(cfg, json{{"kind", arg}, {"d", d}}, io::lu_spectrum_to_json(spec)).dump(2) + "\n");
  return kExitOk;
}

int do_sample(const RunConfig& cfg, std::ostream& out) {
  const long d = positive(cfg.d, 4, "d");
  const long db = positive(cfg.db, d, "db");
  const long samples = positive(cfg.samples ? cfg.samples : cfg.trials, 20000, "samples");
  const auto points = harness::figure3_scatter(d, samples, cfg.seed, db, cfg.threads);
  std::string text = "el,estar\n";
  text.reserve(static_cast<std::size_t>(samples) * 44);
  for (const auto& pt : points) {
    text += io::format_real(pt.el);
    text += ',';
    text += io::format_real(pt.estar);
    text += '\n';
  }
  emit(cfg, out, text);
  return kExitOk;
}

std::vector<LUSpectrum> locc_spectra(const RunConfig& cfg, Eigen::Index local) {
  if (cfg.spectrum) return {io::parse_spectrum_arg(*cfg.spectrum, local)};
  std::vector<LUSpectrum> out{stellar(local)};
  SplitMix64 rng = SplitMix64::stream(cfg.seed ^ 0x5eed5eed5eed5eedULL, static_cast<std::uint64_t>(local));
  for (int k = 0; k < 3; ++k) out.push_back(harness::random_nondegenerate_spectrum(local, rng, 0.02));
  return out;
}

std::vector<VerificationReport> run_suite(const std::string& suite, const RunConfig& cfg,
                                          std::vector<harness::MajorizationRow>* rows) {
  std::vector<VerificationReport> reports;
  const auto count = [&](long fallback) {
    return positive(cfg.samples ? cfg.samples : cfg.trials, fallback, "trials");
  };
  if (suite == "theorem3") {
    for (long d : dims_or(cfg.d, 2, 6)) {
      const std::vector<long> rs = cfg.r ? std::vector<long>{*cfg.r} : dims_or(std::nullopt, 1, d);
      for (long r : rs) reports.push_back(harness::theorem3_suite(d, r, count(200), cfg.seed, cfg.threads));
    }
  } else if (suite == "theorem4") {
    for (long d : dims_or(cfg.d, 2, 8)) reports.push_back(harness::theorem4_suite(d, count(10000), cfg.seed, cfg.threads));
  } else if (suite == "witness") {
    std::vector<double> grid;
    for (int k = 0; k <= 10; ++k) grid.push_back(0.1 * k);
    for (long d : dims_or(cfg.d, 2, 6)) reports.push_back(harness::witness_suite(d, grid));
  } else if (suite == "locc") {
    for (long d : dims_or(cfg.d, 2, 4)) {
      const long db = cfg.db.value_or(d + 1);
      const auto spectra = locc_spectra(cfg, std::min(d, db));
      const std::vector<long> ms = cfg.kraus_count ? std::vector<long>{*cfg.kraus_count} : std::vector<long>{2, 3};
      for (long m : ms) {
        auto rep = harness::locc_suite(d, db, m, count(1000), cfg.seed, spectra, cfg.threads);
        reports.push_back(std::move(rep));
      }
    }
  } else if (suite == "majorization") {
    for (long d : dims_or(cfg.d, 2, 8))
      reports.push_back(harness::majorization_suite(d, count(1000), cfg.subdivisions, cfg.seed, cfg.threads, rows));
  } else if (suite == "lemma1") {
    const long unitaries = positive(cfg.unitaries, 1000, "unitaries");
    for (long d : dims_or(cfg.d, 2, 8))
      reports.push_back(harness::lemma1_suite(d, count(500), unitaries, cfg.seed, cfg.threads));
  } else if (suite == "unitary") {
    for (long d : dims_or(cfg.d, 2, 4))
      reports.push_back(harness::optimal_unitary_suite(d, count(500), cfg.seed, cfg.db.value_or(d), cfg.threads));
  } else if (suite == "all") {
    for (const char* s : {"theorem3", "theorem4", "witness", "locc", "majorization", "lemma1", "unitary"}) {
      auto part = run_suite(s, cfg, rows);
      for (auto& r : part) reports.push_back(std::move(r));
    }
  } else {
    throw ValidationError("suite: unknown suite \"" + suite + "\"");
  }
  return reports;
}

int do_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  std::vector<harness::MajorizationRow> rows;
  const bool want_rows = cfg.csv.has_value();
  const auto reports = run_suite(cfg.suite, cfg, want_rows ? &rows : nullptr);

  json list = json::array();
  long failures = 0;
  const VerificationReport* worst = nullptr;
  for (const auto& r : reports) {
    list.push_back(r.to_json());
    failures += r.failures;
    if (r.failures > 0 && (!worst || r.worst_violation > worst->worst_violation)) worst = &r;
  }
  json params{{"suite", cfg.suite}, {"subdivisions", cfg.subdivisions}};
  for (const auto& [key, val] : {std::pair{"d", cfg.d}, std::pair{"db", cfg.db}, std::pair{"r", cfg.r},
                                 std::pair{"trials", cfg.trials}, std::pair{"samples", cfg.samples},
                                 std::pair{"kraus_count", cfg.kraus_count}, std::pair{"unitaries", cfg.unitaries}})
    if (val) params[key] = *val;
  if (cfg.spectrum) params["spectrum"] = *cfg.spectrum;

  if (want_rows) {
    std::string text = "sample,step,d_estar,d_el,ratio,ratio_ok\n";
    for (const auto& row : rows) {
      text += std::to_string(row.sample) + ',' + std::to_string(row.step) + ',' + io::format_real(row.d_estar) + ',' +
              io::format_real(row.d_el) + ',' + (row.d_el > 0 ? io::format_real(row.d_estar / row.d_el) : "") + ',' +
              (row.ratio_ok ? "1" : "0") + '\n';
    }
    io::write_atomic(*cfg.csv, text);
  }
  const json results{{"passed", failures == 0}, {"failures", failures}, {"suites", list}};
  emit(cfg, out, envelope(cfg, params, results).dump(2) + "\n");
  if (worst) {
    err << "error[suite]: " << worst->suite << " failed " << worst->failures << " of " << worst->trials
        << " cases; worst: " << worst->worst_case.dump() << "\n";
    return kExitSuiteFailure;
  }
  return kExitOk;
}

}  // namespace

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    switch (config.command) {
      case Command::Compute:
        return do_compute(config, out);
      case Command::Spectrum:
        return do_spectrum(config, out);
      case Command::Sample:
        return do_sample(config, out);
      case Command::Verify:
        return do_verify(config, out, err);
    }
  } catch (const std::exception& e) {
    std::string msg = e.what();
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    err << "error[validation]: " << msg << "\n";
    return kExitValidation;
  }
  return kExitValidation;
}

int main_entry(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Mirror entanglement monotones of pure bipartite states"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--seed", cfg.seed, "RNG seed (default 0)");
    sub->add_option("--out", cfg.out, "Write the artifact to this path instead of stdout");
    sub->add_option("--threads", cfg.threads, "Worker threads (0 = all cores)");
  };

  auto* compute = app.add_subcommand("compute", "Mirror entanglement of one state or Schmidt vector");
  compute->add_option("--state", cfg.state_path, "State JSON file");
  compute->add_option("--probs", cfg.probs, "Schmidt coefficients, e.g. 0.5,0.3,0.2");
  compute->add_option("--spectrum", cfg.spectrum, "stellar | identity | gaps:a,b,... | file:PATH");
  add_common(compute);

  auto* spectrum = app.add_subcommand("spectrum", "Print a canonical LU spectrum");
  spectrum->add_option("--d", cfg.d, "Dimension");
  spectrum->add_option("--kind,--spectrum", cfg.spectrum, "stellar | identity | gaps:a,b,... | file:PATH");
  add_common(spectrum);

  auto* sample = app.add_subcommand("sample", "CSV of (el, estar) for random pure states");
  sample->add_option("--d", cfg.d, "Local dimension dA (default 4)");
  sample->add_option("--db", cfg.db, "Dimension dB (default dA)");
  sample->add_option("--samples", cfg.samples, "Number of states (default 20000)");
  add_common(sample);

  auto* verify = app.add_subcommand("verify", "Run verification suites");
  verify->add_option("suite", cfg.suite, "all | theorem3 | theorem4 | witness | locc | majorization | lemma1 | unitary")
      ->required();
  verify->add_option("--d", cfg.d, "Restrict to one local dimension");
  verify->add_option("--db", cfg.db, "Dimension of subsystem B");
  verify->add_option("--r", cfg.r, "theorem3: restrict to one degeneracy");
  verify->add_option("--trials", cfg.trials, "Cases per configuration");
  verify->add_option("--samples", cfg.samples, "Alias of --trials");
  verify->add_option("--kraus-count", cfg.kraus_count, "locc: Kraus operators per channel (default 2 and 3)");
  verify->add_option("--unitaries", cfg.unitaries, "lemma1: random unitaries per case (default 1000)");
  verify->add_option("--spectrum", cfg.spectrum, "locc: spectrum to test (default stellar + 3 random)");
  verify->add_option("--subdiv", cfg.subdivisions, "majorization: sub-steps per T-transform (default 64)");
  verify->add_option("--csv", cfg.csv, "majorization: write per-step rows to this CSV");
  add_common(verify);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error[validation]: " << e.what() << "\n";
    return kExitValidation;
  }

  if (compute->parsed()) cfg.command = Command::Compute;
  if (spectrum->parsed()) cfg.command = Command::Spectrum;
  if (sample->parsed()) cfg.command = Command::Sample;
  if (verify->parsed()) cfg.command = Command::Verify;
  return run(cfg, out, err);
}

}  // namespace mirror::cli
