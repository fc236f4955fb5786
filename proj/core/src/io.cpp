#include "spartan/io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <istream>
#include <ostream>

#include <nlohmann/json.hpp>

#include "spartan/errors.hpp"

namespace spartan::io {

namespace {

using nlohmann::json;

static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);

constexpr std::array<char, 4> binary_magic{'F', 'G', 'C', 'R'};

template <typename T>
void put_le(std::ostream& out, T value) {
  std::array<unsigned char, sizeof(T)> bytes;
  std::memcpy(bytes.data(), &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
  out.write(reinterpret_cast<const char*>(bytes.data()), sizeof(T));
}

template <typename T>
T get_le(std::istream& in) {
  std::array<unsigned char, sizeof(T)> bytes;
  if (!in.read(reinterpret_cast<char*>(bytes.data()), sizeof(T))) {
    throw InvalidArgument("truncated realization file");
  }
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
  T value;
  std::memcpy(&value, bytes.data(), sizeof(T));
  return value;
}

// JSON has no NaN/inf; non-finite numbers become null.
json number(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

json band_to_json(const Band& b) {
  if (b.is_infinite()) return "inf";
  return b.value();
}

double require_number(const json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_number()) throw InvalidArgument(std::string("params field '") + key + "' must be a number");
  return v.get<double>();
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.8e", v);
  return buf;
}

json params_to_json(const ModelParams& p) {
  return json{{"eta0", p.eta0}, {"eta1", p.eta1}, {"xi", p.xi}, {"kc", band_to_json(p.kc)}};
}

ModelParams params_from_json(const json& j) {
  if (!j.is_object()) throw InvalidArgument("params must be a JSON object");
  for (const auto& item : j.items()) {
    const std::string& k = item.key();
    if (k != "eta0" && k != "eta1" && k != "xi" && k != "kc") {
      throw InvalidArgument("unknown params field '" + k + "'");
    }
  }
  if (!j.contains("eta1")) throw InvalidArgument("params field 'eta1' is required");
  ModelParams p;
  p.eta0 = require_number(j, "eta0", 1.0);
  p.eta1 = require_number(j, "eta1", 0.0);
  p.xi = require_number(j, "xi", 1.0);
  p.kc = Band::infinite();
  if (j.contains("kc")) {
    const json& kc = j.at("kc");
    if (kc.is_string()) {
      if (kc.get<std::string>() != "inf") throw InvalidArgument("params field 'kc' must be a number or \"inf\"");
    } else if (kc.is_number()) {
      p.kc = Band::finite(kc.get<double>());
    } else {
      throw InvalidArgument("params field 'kc' must be a number or \"inf\"");
    }
  }
  p.validate();
  return p;
}

json permissibility_to_json(const PermissibilityReport& r) {
  json j{{"permissible", r.permissible}, {"regime", std::string(to_string(r.regime))},
         {"reason", r.reason}};
  j["max_allowed_xc"] = r.max_allowed_xc ? json(*r.max_allowed_xc) : json(nullptr);
  return j;
}

json constants_to_json(const DerivedConstants& c) {
  return json{{"beta1", c.beta1},   {"beta2", c.beta2}, {"omega1", c.omega1},
              {"omega2", c.omega2}, {"delta", c.delta}};
}

json profile_to_json(const CovarianceProfile& p) {
  json rows = json::array();
  for (std::size_t i = 0; i < p.lags.size(); ++i) {
    rows.push_back(json{{"r", p.lags[i]}, {"value", number(p.values[i])}});
  }
  return json{{"version", format_version},
              {"dimension", to_int(p.dimension)},
              {"method", std::string(to_string(p.method))},
              {"rows", rows}};
}

json smoothness_to_json(const SmoothnessReport& r) {
  json moments = json::object();
  for (const auto& [n, v] : r.moment_values) moments[std::to_string(n)] = number(v);
  json exponents = json::object();
  for (const auto& [n, e] : r.divergence_exponents) exponents[std::to_string(n)] = e;
  json j{{"version", format_version},
         {"dimension", to_int(r.dimension)},
         {"xc", band_to_json(r.band)},
         {"moment_values", moments},
         {"divergence_exponents", exponents}};
  j["max_ms_order"] = r.max_ms_order ? json(*r.max_ms_order) : json("unbounded");
  return j;
}

json stats_to_json(const EmpiricalStats& s) {
  json acf = json::array();
  json acf_se = json::array();
  for (std::size_t i = 0; i < s.acf.size(); ++i) {
    acf.push_back(number(s.acf[i]));
    acf_se.push_back(number(s.std_errors.acf[i]));
  }
  return json{{"version", format_version},
              {"realizations", s.realizations},
              {"lags", s.lags},
              {"mean", number(s.mean)},
              {"variance", number(s.variance)},
              {"acf", acf},
              {"std_errors",
               json{{"mean", number(s.std_errors.mean)},
                    {"variance", number(s.std_errors.variance)},
                    {"acf", acf_se}}}};
}

void write_profile_csv(std::ostream& out, const CovarianceProfile& p) {
  p.validate();
  const std::string method(to_string(p.method));
  out << "r,value,method\n";
  for (std::size_t i = 0; i < p.lags.size(); ++i) {
    out << format_number(p.lags[i]) << ',' << format_number(p.values[i]) << ',' << method << '\n';
  }
}

void write_realization_csv(std::ostream& out, const FieldRealization& f) {
  out << "s,value\n";
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    out << format_number(f.grid.position(i)) << ',' << format_number(f.values[i]) << '\n';
  }
}

void write_realization_binary(std::ostream& out, const FieldRealization& f) {
  if (f.values.size() != f.grid.count) throw InvalidArgument("realization size does not match its grid");
  out.write(binary_magic.data(), binary_magic.size());
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(format_version));
  put_le<std::uint64_t>(out, f.seed);
  put_le<std::uint64_t>(out, static_cast<std::uint64_t>(f.n_modes));
  put_le<double>(out, f.grid.start);
  put_le<double>(out, f.grid.step);
  put_le<std::uint64_t>(out, static_cast<std::uint64_t>(f.grid.count));
  for (double v : f.values) put_le<double>(out, v);
}

FieldRealization read_realization_binary(std::istream& in) {
  std::array<char, 4> magic{};
  if (!in.read(magic.data(), magic.size()) || magic != binary_magic) {
    throw InvalidArgument("not a realization file (bad magic)");
  }
  const auto version = get_le<std::uint32_t>(in);
  if (version != static_cast<std::uint32_t>(format_version)) {
    throw InvalidArgument("unsupported realization format version " + std::to_string(version));
  }
  FieldRealization f;
  f.seed = get_le<std::uint64_t>(in);
  f.n_modes = static_cast<int>(get_le<std::uint64_t>(in));
  f.grid.start = get_le<double>(in);
  f.grid.step = get_le<double>(in);
  f.grid.count = static_cast<std::size_t>(get_le<std::uint64_t>(in));
  f.grid.validate();
  f.values.resize(f.grid.count);
  for (double& v : f.values) v = get_le<double>(in);
  return f;
}

}  // namespace spartan::io
