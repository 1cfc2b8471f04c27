#include "mirror/io.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>

#include "mirror/errors.hpp"

namespace mirror::io {

namespace {

std::vector<double> real_array(const json& j, const char* field) {
  if (!j.contains(field) || !j.at(field).is_array()) throw ValidationError(std::string(field) + ": expected an array");
  std::vector<double> out;
  for (const auto& v : j.at(field)) {
    if (!v.is_number()) throw ValidationError(std::string(field) + ": entries must be numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

json real_vector_json(const RVector<double>& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

}  // namespace

PureState state_from_json(const json& j) {
  if (!j.is_object()) throw ValidationError("state: expected a JSON object");
  if (!j.contains("dims") || !j.at("dims").is_array() || j.at("dims").size() != 2)
    throw ValidationError("dims: expected [dA, dB]");
  const auto& dims = j.at("dims");
  if (!dims[0].is_number_integer() || !dims[1].is_number_integer())
    throw ValidationError("dims: entries must be integers");
  const long da = dims[0].get<long>(), db = dims[1].get<long>();
  if (da < 1 || db < 1) throw ValidationError("dims: dimensions must be >= 1");
  const auto re = real_array(j, "re");
  const auto im = real_array(j, "im");
  const auto n = static_cast<std::size_t>(da * db);
  if (re.size() != n) throw ValidationError("re: expected dA*dB = " + std::to_string(n) + " entries");
  if (im.size() != n) throw ValidationError("im: expected dA*dB = " + std::to_string(n) + " entries");
  CMatrix<double> m(da, db);
  for (long a = 0; a < da; ++a)
    for (long b = 0; b < db; ++b) {
      const auto k = static_cast<std::size_t>(a * db + b);
      m(a, b) = {re[k], im[k]};
    }
  return PureState(std::move(m));
}

json state_to_json(const PureState& state) {
  json re = json::array(), im = json::array();
  const auto& m = state.amplitudes();
  for (Eigen::Index a = 0; a < m.rows(); ++a)
    for (Eigen::Index b = 0; b < m.cols(); ++b) {
      re.push_back(m(a, b).real());
      im.push_back(m(a, b).imag());
    }
  return json{{"dims", {state.dim_a(), state.dim_b()}}, {"re", re}, {"im", im}};
}

json spectrum_to_json(const SchmidtSpectrum& p) { return json{{"d", p.dim()}, {"probs", real_vector_json(p.probs)}}; }

LUSpectrum lu_spectrum_from_json(const json& j) {
  if (!j.is_object()) throw ValidationError("spectrum: expected a JSON object");
  if (!j.contains("d") || !j.at("d").is_number_integer()) throw ValidationError("d: expected an integer");
  const long d = j.at("d").get<long>();
  if (d < 1) throw ValidationError("d: must be >= 1");
  const bool has_thetas = j.contains("thetas"), has_gaps = j.contains("gaps");
  if (has_thetas == has_gaps) throw ValidationError("spectrum: exactly one of \"thetas\" or \"gaps\" is required");
  const auto values = real_array(j, has_thetas ? "thetas" : "gaps");
  if (static_cast<long>(values.size()) != d)
    throw ValidationError(std::string(has_thetas ? "thetas" : "gaps") + ": expected d = " + std::to_string(d) +
                          " entries");
  return has_thetas ? LUSpectrum::from_phases(values) : from_gaps(values);
}

json lu_spectrum_to_json(const LUSpectrum& spec) {
  const auto ev = spec.eigenvalues();
  json re = json::array(), im = json::array();
  for (Eigen::Index k = 0; k < ev.size(); ++k) {
    re.push_back(ev(k).real());
    im.push_back(ev(k).imag());
  }
  return json{{"d", spec.dim()},
              {"thetas", real_vector_json(spec.thetas())},
              {"phases", real_vector_json(spec.phases())},
              {"offset", spec.offset()},
              {"gaps", real_vector_json(spec.gaps())},
              {"eigenvalues", {{"re", re}, {"im", im}}},
              {"degeneracy", degeneracy(spec)},
              {"faithful", is_faithful(spec)}};
}

std::vector<double> parse_real_list(std::string_view text, std::string_view field) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = text.find(',', pos);
    std::string_view item = text.substr(pos, comma == std::string_view::npos ? text.npos : comma - pos);
    while (!item.empty() && std::isspace(static_cast<unsigned char>(item.front()))) item.remove_prefix(1);
    while (!item.empty() && std::isspace(static_cast<unsigned char>(item.back()))) item.remove_suffix(1);
    double v = 0;
    const auto res = std::from_chars(item.data(), item.data() + item.size(), v);
    if (item.empty() || res.ec != std::errc() || res.ptr != item.data() + item.size())
      throw ValidationError(std::string(field) + ": cannot parse \"" + std::string(item) + "\" as a number");
    out.push_back(v);
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

LUSpectrum parse_spectrum_arg(std::string_view arg, Eigen::Index d) {
  LUSpectrum spec = [&] {
    if (arg == "stellar") return stellar(d);
    if (arg == "identity") return identity_spectrum(d);
    if (arg.starts_with("gaps:")) return from_gaps(parse_real_list(arg.substr(5), "spectrum gaps"));
    if (arg.starts_with("file:")) return lu_spectrum_from_json(read_json_file(std::string(arg.substr(5))));
    throw ValidationError("spectrum: expected stellar, identity, gaps:... or file:PATH, got \"" + std::string(arg) +
                          "\"");
  }();
  if (spec.dim() != d)
    throw ValidationError("spectrum: has d = " + std::to_string(spec.dim()) + " but the state needs d = " +
                          std::to_string(d));
  return spec;
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("file: cannot read " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError("file: " + path.string() + " is not valid JSON: " + e.what());
  }
}

void write_atomic(const std::filesystem::path& path, std::string_view contents) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ValidationError("out: cannot write " + tmp.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw ValidationError("out: write to " + tmp.string() + " failed");
  }
  std::filesystem::rename(tmp, path);
}

std::string format_real(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

}  // namespace mirror::io
