#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace mirror::cli {

inline constexpr const char* kToolVersion = "1.0.0";

enum class Command { Compute, Sample, Verify, Spectrum };

/// Exit codes of run().
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitSuiteFailure = 2;

struct RunConfig {
  Command command = Command::Compute;
  /// verify: all, theorem3, theorem4, witness, locc, majorization, lemma1, unitary.
  std::string suite = "all";

  std::optional<std::string> state_path;
  std::optional<std::string> probs;
  std::optional<std::string> spectrum;  // stellar | identity | gaps:... | file:PATH

  std::optional<long> d;
  std::optional<long> db;
  std::optional<long> r;
  std::optional<long> trials;
  std::optional<long> samples;
  std::optional<long> kraus_count;
  std::optional<long> unitaries;
  int subdivisions = 64;
  std::uint64_t seed = 0;
  unsigned threads = 0;

  std::optional<std::string> out;
  std::optional<std::string> csv;  // verify majorization: per-step rows
};

/// Executes one command. Artifacts go to config.out (written atomically) or
/// `out`; diagnostics go to `err` as single lines prefixed "error[<kind>]:".
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Parses argv with CLI11 and calls run().
int main_entry(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace mirror::cli
