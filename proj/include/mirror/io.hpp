#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "mirror/spectra.hpp"
#include "mirror/states.hpp"

namespace mirror::io {

using nlohmann::json;

/// {"dims": [dA, dB], "re": [...], "im": [...]}, row-major.
PureState state_from_json(const json& j);
json state_to_json(const PureState& state);

/// {"d": d, "probs": [...]}.
json spectrum_to_json(const SchmidtSpectrum& p);

/// {"d": d, "thetas": [...]} or {"d": d, "gaps": [...]}, exactly one of the two.
LUSpectrum lu_spectrum_from_json(const json& j);
json lu_spectrum_to_json(const LUSpectrum& spec);

/// "stellar", "identity", "gaps:0.2,0.3,0.5" or "file:PATH". `d` is the
/// dimension the caller needs; gap and file forms must agree with it.
LUSpectrum parse_spectrum_arg(std::string_view arg, Eigen::Index d);

/// Comma-separated list of reals.
std::vector<double> parse_real_list(std::string_view text, std::string_view field);

json read_json_file(const std::filesystem::path& path);

/// Writes to PATH.tmp and renames over PATH.
void write_atomic(const std::filesystem::path& path, std::string_view contents);

/// Shortest round-trip decimal form, independent of the C locale.
std::string format_real(double value);

}  // namespace mirror::io
