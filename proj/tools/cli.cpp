#include "cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <nlohmann/json.hpp>
#include <numbers>
#include <sstream>

#include "spartan/closed_form.hpp"
#include "spartan/errors.hpp"
#include "spartan/io.hpp"
#include "spartan/smoothness.hpp"
#include "spartan/spectral.hpp"

namespace spartan::cli {

namespace {

using nlohmann::json;
using std::numbers::pi;

constexpr std::string_view all_subcommands[] = {"check",  "constants", "spectrum",
                                                "variance", "covariance", "acf",
                                                "iscale", "smoothness", "simulate",
                                                "figure"};

// Shape coefficients plotted by every figure sweep.
constexpr double figure_shapes[] = {-1.9, -1.0, 0.0, 2.0, 4.0};
constexpr double figure_xi = 0.1;

constexpr const char* output_dir_env = "SPARTAN_OUTPUT_DIR";

bool has_params(std::string_view sub) { return sub != "figure"; }
bool has_dim(std::string_view sub) {
  return sub == "spectrum" || sub == "variance" || sub == "covariance" || sub == "acf" ||
         sub == "iscale" || sub == "smoothness";
}
bool has_quadrature(std::string_view sub) {
  return sub == "variance" || sub == "covariance" || sub == "acf" || sub == "iscale" ||
         sub == "smoothness" || sub == "simulate";
}
bool has_range(std::string_view sub) {
  return sub == "spectrum" || sub == "covariance" || sub == "acf" || sub == "figure";
}
bool has_lag(std::string_view sub) { return sub == "covariance" || sub == "acf"; }
bool has_method(std::string_view sub) {
  return sub == "variance" || sub == "covariance" || sub == "acf" || sub == "iscale";
}

// Raw flag values before resolution.
struct RawFlags {
  std::optional<double> eta0, eta1, xi;
  std::optional<std::string> kc, xc, params_file;
  int dim = 1;
  std::string format = "csv";
  std::string output;
  double abs_tol = QuadratureSpec{}.abs_tol;
  double rel_tol = QuadratureSpec{}.rel_tol;
  int max_subdivisions = QuadratureSpec{}.max_subdivisions;
  bool no_oscillation_split = false;
  std::optional<double> from, to;
  std::optional<std::size_t> points;
  std::optional<double> r, h;
  std::string method = "auto";
  int terms = 40;
  std::optional<double> zeta_r, ratio_kr;
  std::uint64_t seed = 1;
  int modes = 4096;
  std::size_t realizations = 1;
  double start = 0.0;
  double step = 0.1;
  std::size_t count = 1000;
  std::vector<double> lags{0.0};
  std::string paths;
  std::string paths_format = "csv";
  std::string which;
  bool dump_config = false;
};

struct Parser {
  CLI::App app{"FGC Spartan spatial random field covariance toolkit", "spartan"};
  RawFlags raw;

  Parser() {
    app.require_subcommand(1);
    app.fallthrough(false);
    // "-h" is left free: --h is the normalized-lag flag.
    app.set_help_flag("--help", "Print this help message and exit");
    app.set_help_all_flag("--help-all", "Expand all help");
    for (std::string_view name : all_subcommands) add(std::string(name));
  }

  void add(const std::string& name) {
    CLI::App* s = app.add_subcommand(name, description(name));
    if (has_params(name)) {
      auto* p = s->add_option("--params", raw.params_file,
                              "JSON file with a params object, or a config with a \"params\" key");
      auto* e0 = s->add_option("--eta0", raw.eta0, "scale coefficient (default 1)");
      auto* e1 = s->add_option("--eta1", raw.eta1, "shape coefficient");
      auto* x = s->add_option("--xi", raw.xi, "characteristic length (default 1)");
      auto* kc = s->add_option("--kc", raw.kc, "wavenumber cutoff, or \"inf\"");
      auto* xc = s->add_option("--xc", raw.xc, "dimensionless cutoff kc*xi, or \"inf\"");
      kc->excludes(xc);
      for (CLI::Option* o : {e0, e1, x, kc, xc}) p->excludes(o);
    }
    if (has_dim(name)) {
      s->add_option("--dim", raw.dim, "spatial dimension")->check(CLI::Range(1, 3));
    }
    if (has_quadrature(name)) {
      s->add_option("--abs-tol", raw.abs_tol, "quadrature absolute tolerance")
          ->check(CLI::PositiveNumber);
      s->add_option("--rel-tol", raw.rel_tol, "quadrature relative tolerance")
          ->check(CLI::PositiveNumber);
      s->add_option("--max-subdivisions", raw.max_subdivisions, "quadrature interval budget")
          ->check(CLI::PositiveNumber);
      s->add_flag("--no-oscillation-split", raw.no_oscillation_split,
                  "do not pre-split oscillatory integrands");
    }
    if (has_range(name)) {
      s->add_option("--from", raw.from, "sweep start");
      s->add_option("--to", raw.to, "sweep end");
      s->add_option("--points", raw.points, "sweep sample count")->check(CLI::PositiveNumber);
    }
    if (has_lag(name)) {
      auto* r = s->add_option("--r", raw.r, "single lag distance");
      auto* h = s->add_option("--h", raw.h, "single normalized lag r/xi");
      r->excludes(h);
    }
    if (has_method(name)) s->add_option("--method", raw.method, "evaluation method (default auto)");
    if (name == "covariance" || name == "smoothness") {
      s->add_option("--terms", raw.terms, "series terms")->check(CLI::PositiveNumber);
    }
    if (name == "smoothness") {
      s->add_option("--zeta-r", raw.zeta_r, "also evaluate the Laplacian increment at this lag");
      s->add_option("--ratio-kr", raw.ratio_kr, "also report the ratio-test threshold for kc*r");
    }
    if (name == "simulate") {
      s->add_option("--seed", raw.seed, "64-bit base seed");
      s->add_option("--modes", raw.modes, "spectral modes")->check(CLI::PositiveNumber);
      s->add_option("--realizations", raw.realizations, "number of sample paths")
          ->check(CLI::PositiveNumber);
      s->add_option("--start", raw.start, "grid start");
      s->add_option("--step", raw.step, "grid spacing");
      s->add_option("--count", raw.count, "grid points");
      s->add_option("--lags", raw.lags, "lags for the empirical ACF")->delimiter(',');
      s->add_option("--paths", raw.paths, "write realizations to this file (or file_<i> per path)");
      s->add_option("--paths-format", raw.paths_format, "csv or binary")
          ->check(CLI::IsMember({"csv", "binary"}));
    }
    if (name == "figure") {
      s->add_option("--which", raw.which, "v1, v3, rho1 or rho3")
          ->required()
          ->check(CLI::IsMember({"v1", "v3", "rho1", "rho3"}));
    }
    s->add_option("--format", raw.format, "csv, json or pretty")
        ->check(CLI::IsMember({"csv", "json", "pretty"}));
    s->add_option("--output", raw.output,
                  std::string("output file (relative paths resolve against $") + output_dir_env + ")");
    s->add_flag("--dump-config", raw.dump_config, "print the resolved configuration as JSON and exit");
  }

  static std::string description(std::string_view name) {
    if (name == "check") return "permissibility report";
    if (name == "constants") return "derived constants, regime and closed-form branches";
    if (name == "spectrum") return "spectral density over a wavenumber sweep";
    if (name == "variance") return "variance by closed form and/or quadrature";
    if (name == "covariance") return "covariance profile over a lag grid";
    if (name == "acf") return "autocorrelation profile";
    if (name == "iscale") return "integral scale, numeric and asymptotic";
    if (name == "smoothness") return "mean-square differentiability report";
    if (name == "simulate") return "spectral-synthesis sample paths and empirical statistics";
    return "figure sweep tables";
  }
};

Band parse_band(const std::string& text, const char* flag) {
  if (text == "inf" || text == "infinity" || text == "Inf") return Band::infinite();
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || used == 0) {
    throw InvalidArgument(std::string(flag) + " must be a positive number or \"inf\"");
  }
  return Band::finite(v);
}

std::filesystem::path resolve_output(const std::string& path) {
  std::filesystem::path p(path);
  if (p.is_relative()) {
    if (const char* dir = std::getenv(output_dir_env); dir != nullptr && *dir != '\0') {
      return std::filesystem::path(dir) / p;
    }
  }
  return p;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open params file '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw InvalidArgument("params file '" + path + "' is not valid JSON: " + e.what());
  }
}

ModelParams resolve_params(const RawFlags& raw, std::string_view sub) {
  if (raw.params_file) {
    const json doc = read_json_file(*raw.params_file);
    if (doc.is_object() && doc.contains("params")) return io::params_from_json(doc.at("params"));
    return io::params_from_json(doc);
  }
  if (!raw.eta1) throw InvalidArgument(std::string(sub) + ": --eta1 or --params is required");
  ModelParams p;
  p.eta0 = raw.eta0.value_or(1.0);
  p.eta1 = *raw.eta1;
  p.xi = raw.xi.value_or(1.0);
  p.kc = Band::infinite();
  if (raw.kc) p.kc = parse_band(*raw.kc, "--kc");
  p.validate();
  if (raw.xc) p = params_from_xc(p.eta0, p.eta1, p.xi, parse_band(*raw.xc, "--xc"));
  return p;
}

std::string resolve_method(const std::string& requested, const CommandConfig& c) {
  const std::string& sub = c.subcommand;
  const bool closed_ok = c.dim != 2 && c.params.eta1 > -2.0;
  auto allow = [&](std::initializer_list<const char*> names) {
    for (const char* n : names) {
      if (requested == n) return;
    }
    std::string list;
    for (const char* n : names) list += std::string(list.empty() ? "" : ", ") + n;
    throw InvalidArgument(sub + ": --method must be one of " + list);
  };
  if (sub == "variance") {
    if (requested == "auto") return c.dim == 2 ? "quadrature" : "both";
    allow({"auto", "quadrature", "closed_form_exact", "both"});
  } else if (sub == "covariance") {
    if (requested == "auto") {
      return c.params.kc.is_infinite() && closed_ok ? "closed_form_asymptotic" : "quadrature";
    }
    allow({"auto", "quadrature", "closed_form_asymptotic", "series"});
  } else if (sub == "acf") {
    if (requested == "auto") {
      return c.params.kc.is_infinite() && closed_ok ? "closed_form_asymptotic" : "quadrature";
    }
    allow({"auto", "quadrature", "closed_form_asymptotic"});
  } else if (sub == "iscale") {
    if (requested == "auto") return closed_ok ? "both" : "quadrature";
    allow({"auto", "quadrature", "closed_form_asymptotic", "both"});
  }
  return requested;
}

SweepRange default_range(const CommandConfig& c) {
  if (c.subcommand == "spectrum") {
    const double top = c.params.kc.is_finite() ? c.params.kc.value() : 10.0 / c.params.xi;
    return {0.0, top, 101};
  }
  if (c.subcommand == "figure") {
    if (c.which == "v1" || c.which == "v3") return {0.1, 10.0, 100};
    return {0.0, 10.0 * figure_xi, 201};
  }
  return {0.0, 6.0 * c.params.xi, 61};
}

CommandConfig resolve(const std::string& sub, const RawFlags& raw) {
  CommandConfig c;
  c.subcommand = sub;
  if (has_params(sub)) {
    c.params = resolve_params(raw, sub);
    c.params_file = raw.params_file;
  }
  c.dim = raw.dim;
  dim_from_int(c.dim);
  if (raw.format == "json") {
    c.format = OutputFormat::json;
  } else if (raw.format == "pretty") {
    c.format = OutputFormat::pretty;
  } else {
    c.format = OutputFormat::csv;
  }
  c.output = raw.output;
  c.quadrature.abs_tol = raw.abs_tol;
  c.quadrature.rel_tol = raw.rel_tol;
  c.quadrature.max_subdivisions = raw.max_subdivisions;
  c.quadrature.oscillation_split = !raw.no_oscillation_split;
  c.quadrature.validate();
  c.which = raw.which;
  c.r = raw.r;
  c.h = raw.h;
  if ((c.r || c.h) && (raw.from || raw.to || raw.points)) {
    throw InvalidArgument(sub + ": --r/--h cannot be combined with a sweep range");
  }
  if (c.r && (!std::isfinite(*c.r) || *c.r < 0.0)) throw InvalidArgument("--r must be >= 0");
  if (c.h && (!std::isfinite(*c.h) || *c.h < 0.0)) throw InvalidArgument("--h must be >= 0");
  if (has_range(sub) && !c.r && !c.h) {
    SweepRange range = default_range(c);
    if (raw.from) range.from = *raw.from;
    if (raw.to) range.to = *raw.to;
    if (raw.points) range.points = *raw.points;
    range.validate();
    c.range = range;
  }
  c.terms = raw.terms;
  c.zeta_r = raw.zeta_r;
  c.ratio_kr = raw.ratio_kr;
  if (has_method(sub)) c.method = resolve_method(raw.method, c);
  if (sub == "simulate") {
    c.seed = raw.seed;
    c.modes = raw.modes;
    c.realizations = raw.realizations;
    c.grid = GridSpec{raw.start, raw.step, raw.count};
    c.grid.validate();
    c.lags = raw.lags;
    if (c.lags.empty()) throw InvalidArgument("simulate: --lags must not be empty");
    c.paths = raw.paths;
    c.paths_format = raw.paths_format;
  }
  return c;
}

// ---------------------------------------------------------------- output

std::string pretty_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

// Rows of a "quantity,value" report; value already formatted.
using KeyValues = std::vector<std::pair<std::string, std::string>>;

void emit_key_values(std::ostream& out, const KeyValues& rows, OutputFormat f, const json& doc) {
  switch (f) {
    case OutputFormat::csv:
      out << "quantity,value\n";
      for (const auto& [k, v] : rows) out << k << ',' << v << '\n';
      break;
    case OutputFormat::json:
      out << doc.dump(2) << '\n';
      break;
    case OutputFormat::pretty: {
      std::size_t width = 0;
      for (const auto& row : rows) width = std::max(width, row.first.size());
      for (const auto& [k, v] : rows) out << std::left << std::setw(static_cast<int>(width) + 2) << k << v << '\n';
      break;
    }
  }
}

std::string band_text(const Band& b) { return b.is_infinite() ? "inf" : io::format_number(b.value()); }

int cmd_check(const CommandConfig& c, std::ostream& out) {
  const PermissibilityReport r = check_permissibility(c.params);
  KeyValues rows{{"permissible", r.permissible ? "true" : "false"},
                 {"regime", std::string(to_string(classify_regime(c.params.eta1)))},
                 {"xc", band_text(c.params.xc())},
                 {"max_allowed_xc", r.max_allowed_xc ? io::format_number(*r.max_allowed_xc) : "none"}};
  if (c.format == OutputFormat::pretty) rows.emplace_back("reason", r.reason);
  json doc = io::permissibility_to_json(r);
  doc["params"] = io::params_to_json(c.params);
  doc["version"] = io::format_version;
  emit_key_values(out, rows, c.format, doc);
  return r.permissible ? 0 : static_cast<int>(ExitCode::permissibility);
}

int cmd_constants(const CommandConfig& c, std::ostream& out) {
  const DerivedConstants k = derive_constants(c.params.eta1);
  const Regime regime = classify_regime(c.params.eta1);
  KeyValues rows{{"beta1", io::format_number(k.beta1)},   {"beta2", io::format_number(k.beta2)},
                 {"omega1", io::format_number(k.omega1)}, {"omega2", io::format_number(k.omega2)},
                 {"delta", io::format_number(k.delta)},   {"regime", std::string(to_string(regime))}};
  json doc = io::constants_to_json(k);
  doc["regime"] = std::string(to_string(regime));
  json branches = json::object();
  constexpr std::pair<ClosedForm, const char*> forms[] = {
      {ClosedForm::v1, "v1"},         {ClosedForm::v3, "v3"},
      {ClosedForm::w1, "w1"},         {ClosedForm::w3, "w3"},
      {ClosedForm::rho1, "rho1"},     {ClosedForm::rho3, "rho3"},
      {ClosedForm::iscale1, "iscale1"}, {ClosedForm::iscale3, "iscale3"}};
  for (const auto& [form, name] : forms) {
    if (regime == Regime::BandRestricted && form != ClosedForm::v1 && form != ClosedForm::v3) continue;
    const BranchFormula b = branch_formula(form, c.params.eta1);
    branches[name] = std::string(b.expression);
    if (c.format == OutputFormat::pretty) rows.emplace_back(std::string("branch.") + name, std::string(b.expression));
  }
  doc["branches"] = branches;
  doc["version"] = io::format_version;
  emit_key_values(out, rows, c.format, doc);
  return 0;
}

int cmd_spectrum(const CommandConfig& c, std::ostream& out) {
  const Dim d = dim_from_int(c.dim);
  require_permissible(c.params);
  const std::vector<double> ks = c.range->values();
  std::vector<double> density(ks.size());
  std::vector<double> poly(ks.size());
  for (std::size_t i = 0; i < ks.size(); ++i) {
    density[i] = spectral_density(c.params, d, ks[i]).value;
    poly[i] = char_polynomial(ks[i] * c.params.xi, c.params.eta1);
  }
  switch (c.format) {
    case OutputFormat::csv:
      out << "k,density,pi\n";
      for (std::size_t i = 0; i < ks.size(); ++i) {
        out << io::format_number(ks[i]) << ',' << io::format_number(density[i]) << ','
            << io::format_number(poly[i]) << '\n';
      }
      break;
    case OutputFormat::json: {
      json rows = json::array();
      for (std::size_t i = 0; i < ks.size(); ++i) {
        rows.push_back(json{{"k", ks[i]}, {"density", density[i]}, {"pi", poly[i]}});
      }
      out << json{{"version", io::format_version}, {"dimension", c.dim}, {"rows", rows}}.dump(2) << '\n';
      break;
    }
    case OutputFormat::pretty:
      out << std::left << std::setw(18) << "k" << std::setw(18) << "density" << "Pi(k xi)\n";
      for (std::size_t i = 0; i < ks.size(); ++i) {
        out << std::setw(18) << pretty_number(ks[i]) << std::setw(18) << pretty_number(density[i])
            << pretty_number(poly[i]) << '\n';
      }
      break;
  }
  return 0;
}

void emit_scalars(std::ostream& out, OutputFormat f, const std::string& quantity,
                  const std::vector<std::pair<std::string, double>>& values, const json& extra) {
  KeyValues rows;
  json doc = extra;
  for (const auto& [method, v] : values) {
    rows.emplace_back(quantity + "." + method, io::format_number(v));
    doc[quantity][method] = v;
  }
  emit_key_values(out, rows, f, doc);
}

int cmd_variance(const CommandConfig& c, std::ostream& out) {
  const Dim d = dim_from_int(c.dim);
  std::vector<std::pair<std::string, double>> values;
  if (c.method == "closed_form_exact" || c.method == "both") {
    values.emplace_back("closed_form_exact", variance_closed_form(c.params, d));
  }
  if (c.method == "quadrature" || c.method == "both") {
    values.emplace_back("quadrature", variance_quadrature(c.params, d, c.quadrature));
  }
  emit_scalars(out, c.format, "variance", values,
               json{{"version", io::format_version}, {"dimension", c.dim},
                    {"params", io::params_to_json(c.params)}});
  return 0;
}

std::vector<double> lag_grid(const CommandConfig& c) {
  if (c.r) return {*c.r};
  if (c.h) return {*c.h * c.params.xi};
  return c.range->values();
}

void emit_profile(std::ostream& out, const CommandConfig& c, const CovarianceProfile& p) {
  switch (c.format) {
    case OutputFormat::csv:
      io::write_profile_csv(out, p);
      break;
    case OutputFormat::json:
      out << io::profile_to_json(p).dump(2) << '\n';
      break;
    case OutputFormat::pretty:
      if (p.lags.size() == 1) {
        out << pretty_number(p.values[0]) << '\n';
        break;
      }
      out << std::left << std::setw(18) << "r" << "value  [" << to_string(p.method) << "]\n";
      for (std::size_t i = 0; i < p.lags.size(); ++i) {
        out << std::setw(18) << pretty_number(p.lags[i]) << pretty_number(p.values[i]) << '\n';
      }
      break;
  }
}

int cmd_covariance(const CommandConfig& c, std::ostream& out) {
  const Dim d = dim_from_int(c.dim);
  const std::vector<double> lags = lag_grid(c);
  CovarianceProfile p;
  if (c.method == "quadrature") {
    p = covariance_profile_quadrature(c.params, d, lags, c.quadrature);
  } else {
    p.dimension = d;
    p.lags = lags;
    if (c.method == "series") {
      p.method = Method::series;
      for (double r : lags) p.values.push_back(covariance_series_small_r(c.params, d, r, c.terms, c.quadrature));
    } else {
      p.method = Method::closed_form_asymptotic;
      for (double r : lags) p.values.push_back(covariance_asymptotic(c.params, d, r));
    }
  }
  emit_profile(out, c, p);
  return 0;
}

int cmd_acf(const CommandConfig& c, std::ostream& out) {
  const Dim d = dim_from_int(c.dim);
  const std::vector<double> lags = lag_grid(c);
  CovarianceProfile p;
  p.dimension = d;
  p.lags = lags;
  if (c.method == "quadrature") {
    const CovarianceProfile g = covariance_profile_quadrature(c.params, d, lags, c.quadrature);
    const double var = variance_quadrature(c.params, d, c.quadrature);
    p.method = Method::quadrature;
    for (double v : g.values) p.values.push_back(v / var);
  } else {
    p.method = Method::closed_form_asymptotic;
    for (double r : lags) p.values.push_back(autocorrelation_asymptotic(c.params, d, r));
  }
  emit_profile(out, c, p);
  return 0;
}

int cmd_iscale(const CommandConfig& c, std::ostream& out) {
  const Dim d = dim_from_int(c.dim);
  std::vector<std::pair<std::string, double>> values;
  if (c.method == "quadrature" || c.method == "both") {
    values.emplace_back("quadrature", integral_scale(c.params, d, c.quadrature));
  }
  if (c.method == "closed_form_asymptotic" || c.method == "both") {
    if (d == Dim::two) throw InvalidArgument("iscale: no asymptotic closed form in d = 2");
    const double v = d == Dim::one ? iscale1_asymptotic(c.params.eta1, c.params.xi)
                                   : iscale3_asymptotic(c.params.eta1, c.params.xi);
    values.emplace_back("closed_form_asymptotic", v);
  }
  emit_scalars(out, c.format, "integral_scale", values,
               json{{"version", io::format_version}, {"dimension", c.dim},
                    {"params", io::params_to_json(c.params)}});
  return 0;
}

int cmd_smoothness(const CommandConfig& c, std::ostream& out) {
  const Dim d = dim_from_int(c.dim);
  const SmoothnessReport r = max_ms_derivative_order(c.params, d, c.quadrature);
  json doc = io::smoothness_to_json(r);
  KeyValues rows;
  rows.emplace_back("max_ms_order", r.max_ms_order ? std::to_string(*r.max_ms_order) : "unbounded");
  json derivative = json::object();
  for (const auto& [n, m] : r.moment_values) {
    rows.emplace_back("moment." + std::to_string(n), io::format_number(m));
    const double dm = derivative_moment(c.params, d, n, c.quadrature);
    rows.emplace_back("derivative_moment." + std::to_string(n), io::format_number(dm));
    derivative[std::to_string(n)] = dm;
  }
  doc["derivative_moments"] = derivative;
  for (const auto& [n, e] : r.divergence_exponents) {
    rows.emplace_back("divergence_exponent." + std::to_string(n), std::to_string(e));
  }
  if (c.ratio_kr) {
    const int n0 = ratio_test_threshold(*c.ratio_kr, d);
    rows.emplace_back("ratio_test_threshold", std::to_string(n0));
    doc["ratio_test_threshold"] = json{{"kc_r", *c.ratio_kr}, {"n0", n0}};
  }
  if (c.zeta_r) {
    const double z = zeta_partial_sum(c.params, d, *c.zeta_r, c.terms, c.quadrature);
    rows.emplace_back("zeta", io::format_number(z));
    doc["zeta"] = json{{"r", *c.zeta_r}, {"terms", c.terms}, {"value", z}};
  }
  emit_key_values(out, rows, c.format, doc);
  return 0;
}

std::filesystem::path path_for(const std::filesystem::path& base, std::size_t index, std::size_t total) {
  if (total == 1) return base;
  std::filesystem::path p = base;
  p.replace_filename(base.stem().string() + "_" + std::to_string(index) + base.extension().string());
  return p;
}

void write_paths(const CommandConfig& c, const std::vector<FieldRealization>& paths) {
  const std::filesystem::path base = resolve_output(c.paths);
  for (std::size_t i = 0; i < paths.size(); ++i) {
    const std::filesystem::path p = path_for(base, i, paths.size());
    std::ofstream f(p, std::ios::binary);
    if (!f) throw InvalidArgument("cannot write '" + p.string() + "'");
    if (c.paths_format == "binary") {
      io::write_realization_binary(f, paths[i]);
    } else {
      io::write_realization_csv(f, paths[i]);
    }
  }
}

int cmd_simulate(const CommandConfig& c, std::ostream& out, std::ostream& err) {
  if (!grid_covers_integral_scale(c.params, c.grid)) {
    err << "warning: code=short_grid message=grid span is below one integral scale\n";
  }
  std::vector<FieldRealization> paths;
  if (c.realizations == 1) {
    paths.push_back(sample_path_1d(c.params, c.grid, realization_seed(c.seed, 0), c.modes));
  } else {
    paths = sample_paths_1d(c.params, c.grid, c.seed, c.modes, c.realizations);
  }
  if (!c.paths.empty()) write_paths(c, paths);

  if (paths.size() == 1) {
    const FieldRealization& f = paths.front();
    switch (c.format) {
      case OutputFormat::csv:
        io::write_realization_csv(out, f);
        break;
      case OutputFormat::json:
        out << json{{"version", io::format_version},
                    {"seed", f.seed},
                    {"n_modes", f.n_modes},
                    {"grid", json{{"start", f.grid.start}, {"step", f.grid.step}, {"count", f.grid.count}}},
                    {"values", f.values}}
                   .dump(2)
            << '\n';
        break;
      case OutputFormat::pretty:
        out << "seed " << f.seed << ", " << f.n_modes << " modes\n";
        for (std::size_t i = 0; i < f.values.size(); ++i) {
          out << std::left << std::setw(18) << pretty_number(f.grid.position(i)) << pretty_number(f.values[i]) << '\n';
        }
        break;
    }
    return 0;
  }

  const EmpiricalStats s = empirical_stats(paths, c.lags);
  const double var0 = synthesis_covariance(c.params, c.modes, 0.0);
  std::vector<double> analytic_acf;
  for (double lag : s.lags) analytic_acf.push_back(synthesis_covariance(c.params, c.modes, lag) / var0);

  switch (c.format) {
    case OutputFormat::csv:
      out << "quantity,lag,value,std_error,analytic\n";
      out << "mean,," << io::format_number(s.mean) << ',' << io::format_number(s.std_errors.mean) << ','
          << io::format_number(0.0) << '\n';
      out << "variance,," << io::format_number(s.variance) << ','
          << io::format_number(s.std_errors.variance) << ',' << io::format_number(var0) << '\n';
      for (std::size_t i = 0; i < s.lags.size(); ++i) {
        out << "acf," << io::format_number(s.lags[i]) << ',' << io::format_number(s.acf[i]) << ','
            << io::format_number(s.std_errors.acf[i]) << ',' << io::format_number(analytic_acf[i]) << '\n';
      }
      break;
    case OutputFormat::json: {
      json doc = io::stats_to_json(s);
      doc["analytic"] = json{{"variance", var0}, {"acf", analytic_acf}};
      doc["params"] = io::params_to_json(c.params);
      doc["seed"] = c.seed;
      doc["n_modes"] = c.modes;
      out << doc.dump(2) << '\n';
      break;
    }
    case OutputFormat::pretty:
      out << s.realizations << " realizations, " << c.modes << " modes\n";
      out << "mean      " << pretty_number(s.mean) << " +- " << pretty_number(s.std_errors.mean) << '\n';
      out << "variance  " << pretty_number(s.variance) << " +- " << pretty_number(s.std_errors.variance)
          << "  (synthesis " << pretty_number(var0) << ")\n";
      for (std::size_t i = 0; i < s.lags.size(); ++i) {
        out << "acf(" << pretty_number(s.lags[i]) << ")  " << pretty_number(s.acf[i]) << " +- "
            << pretty_number(s.std_errors.acf[i]) << "  (synthesis " << pretty_number(analytic_acf[i]) << ")\n";
      }
      break;
  }
  return 0;
}

int cmd_figure(const CommandConfig& c, std::ostream& out) {
  const std::vector<double> xs = c.range->values();
  struct Row {
    double eta1, x, value;
  };
  std::vector<Row> rows;
  for (double eta1 : figure_shapes) {
    for (double x : xs) {
      double v = 0.0;
      if (c.which == "v1") {
        v = v1(eta1, Band::finite(x));
      } else if (c.which == "v3") {
        v = v3(eta1, Band::finite(x));
      } else {
        const NormalizedLag h = NormalizedLag::from_distance(x, figure_xi);
        v = c.which == "rho1" ? rho1(h, eta1) : rho3(h, eta1);
      }
      rows.push_back({eta1, x, v});
    }
  }
  switch (c.format) {
    case OutputFormat::csv:
      out << "eta1,x,value\n";
      for (const Row& r : rows) {
        out << io::format_number(r.eta1) << ',' << io::format_number(r.x) << ',' << io::format_number(r.value) << '\n';
      }
      break;
    case OutputFormat::json: {
      json arr = json::array();
      for (const Row& r : rows) arr.push_back(json{{"eta1", r.eta1}, {"x", r.x}, {"value", r.value}});
      const bool lag = c.which == "rho1" || c.which == "rho3";
      out << json{{"version", io::format_version},
                  {"which", c.which},
                  {"x", lag ? "r" : "xc"},
                  {"xi", lag ? json(figure_xi) : json(nullptr)},
                  {"rows", arr}}
                 .dump(2)
          << '\n';
      break;
    }
    case OutputFormat::pretty:
      out << std::left << std::setw(10) << "eta1" << std::setw(18) << "x" << c.which << '\n';
      for (const Row& r : rows) {
        out << std::setw(10) << pretty_number(r.eta1) << std::setw(18) << pretty_number(r.x)
            << pretty_number(r.value) << '\n';
      }
      break;
  }
  return 0;
}

int dispatch(const CommandConfig& c, std::ostream& out, std::ostream& err) {
  const std::string& s = c.subcommand;
  if (s == "check") return cmd_check(c, out);
  if (s == "constants") return cmd_constants(c, out);
  if (s == "spectrum") return cmd_spectrum(c, out);
  if (s == "variance") return cmd_variance(c, out);
  if (s == "covariance") return cmd_covariance(c, out);
  if (s == "acf") return cmd_acf(c, out);
  if (s == "iscale") return cmd_iscale(c, out);
  if (s == "smoothness") return cmd_smoothness(c, out);
  if (s == "simulate") return cmd_simulate(c, out, err);
  if (s == "figure") return cmd_figure(c, out);
  throw InvalidArgument("unknown subcommand '" + s + "'");
}

std::string one_line(std::string text) {
  for (char& ch : text) {
    if (ch == '\n' || ch == '\r') ch = ' ';
  }
  return text;
}

int report(std::ostream& err, ExitCode code, std::string_view name, const std::string& message) {
  err << "error: code=" << name << " exit=" << static_cast<int>(code) << " message=" << one_line(message)
      << '\n';
  return static_cast<int>(code);
}

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::optional<double> read_optional(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<double>();
}

}  // namespace

std::string_view to_string(OutputFormat f) noexcept {
  switch (f) {
    case OutputFormat::csv: return "csv";
    case OutputFormat::json: return "json";
    case OutputFormat::pretty: return "pretty";
  }
  return "csv";
}

void SweepRange::validate() const {
  if (points < 1) throw InvalidArgument("sweep needs at least one point");
  if (!std::isfinite(from) || !std::isfinite(to)) throw InvalidArgument("sweep bounds must be finite");
  if (points > 1 ? !(from < to) : !(from <= to)) {
    throw InvalidArgument("sweep range must be ordered (from < to)");
  }
}

std::vector<double> SweepRange::values() const {
  validate();
  std::vector<double> v(points);
  if (points == 1) {
    v[0] = from;
    return v;
  }
  const double step = (to - from) / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) v[i] = from + static_cast<double>(i) * step;
  v.back() = to;
  return v;
}

json config_to_json(const CommandConfig& c) {
  json j;
  j["version"] = io::format_version;
  j["subcommand"] = c.subcommand;
  j["params"] = io::params_to_json(c.params);
  j["params_file"] = c.params_file ? json(*c.params_file) : json(nullptr);
  j["dim"] = c.dim;
  j["format"] = std::string(to_string(c.format));
  j["output"] = c.output;
  j["quadrature"] = json{{"abs_tol", c.quadrature.abs_tol},
                         {"rel_tol", c.quadrature.rel_tol},
                         {"max_subdivisions", c.quadrature.max_subdivisions},
                         {"oscillation_split", c.quadrature.oscillation_split}};
  j["range"] = c.range ? json{{"from", c.range->from}, {"to", c.range->to}, {"points", c.range->points}}
                       : json(nullptr);
  j["r"] = optional_number(c.r);
  j["h"] = optional_number(c.h);
  j["method"] = c.method;
  j["terms"] = c.terms;
  j["zeta_r"] = optional_number(c.zeta_r);
  j["ratio_kr"] = optional_number(c.ratio_kr);
  j["seed"] = c.seed;
  j["modes"] = c.modes;
  j["realizations"] = c.realizations;
  j["grid"] = json{{"start", c.grid.start}, {"step", c.grid.step}, {"count", c.grid.count}};
  j["lags"] = c.lags;
  j["paths"] = c.paths;
  j["paths_format"] = c.paths_format;
  j["which"] = c.which;
  return j;
}

CommandConfig config_from_json(const json& j) {
  try {
    CommandConfig c;
    c.subcommand = j.at("subcommand").get<std::string>();
    c.params = io::params_from_json(j.at("params"));
    if (!j.at("params_file").is_null()) c.params_file = j.at("params_file").get<std::string>();
    c.dim = j.at("dim").get<int>();
    const std::string format = j.at("format").get<std::string>();
    if (format == "csv") {
      c.format = OutputFormat::csv;
    } else if (format == "json") {
      c.format = OutputFormat::json;
    } else if (format == "pretty") {
      c.format = OutputFormat::pretty;
    } else {
      throw InvalidArgument("unknown format '" + format + "'");
    }
    c.output = j.at("output").get<std::string>();
    const json& q = j.at("quadrature");
    c.quadrature.abs_tol = q.at("abs_tol").get<double>();
    c.quadrature.rel_tol = q.at("rel_tol").get<double>();
    c.quadrature.max_subdivisions = q.at("max_subdivisions").get<int>();
    c.quadrature.oscillation_split = q.at("oscillation_split").get<bool>();
    c.quadrature.validate();
    if (!j.at("range").is_null()) {
      const json& r = j.at("range");
      c.range = SweepRange{r.at("from").get<double>(), r.at("to").get<double>(),
                           r.at("points").get<std::size_t>()};
      c.range->validate();
    }
    c.r = read_optional(j, "r");
    c.h = read_optional(j, "h");
    c.method = j.at("method").get<std::string>();
    c.terms = j.at("terms").get<int>();
    c.zeta_r = read_optional(j, "zeta_r");
    c.ratio_kr = read_optional(j, "ratio_kr");
    c.seed = j.at("seed").get<std::uint64_t>();
    c.modes = j.at("modes").get<int>();
    c.realizations = j.at("realizations").get<std::size_t>();
    const json& g = j.at("grid");
    c.grid = GridSpec{g.at("start").get<double>(), g.at("step").get<double>(),
                      g.at("count").get<std::size_t>()};
    c.lags = j.at("lags").get<std::vector<double>>();
    c.paths = j.at("paths").get<std::string>();
    c.paths_format = j.at("paths_format").get<std::string>();
    c.which = j.at("which").get<std::string>();
    return c;
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("malformed config: ") + e.what());
  }
}

const std::vector<OperationBinding>& operation_registry() {
  static const std::vector<OperationBinding> registry = {
      {"check_permissibility", "check", {"check", "--eta1", "-3", "--xc", "0.5"}},
      {"classify_regime", "check", {"check", "--eta1", "1"}},
      {"derive_constants", "constants", {"constants", "--eta1", "3"}},
      {"branch_formula", "constants", {"constants", "--eta1", "3", "--format", "json"}},
      {"char_polynomial", "spectrum", {"spectrum", "--eta1", "1", "--kc", "2"}},
      {"spectral_density", "spectrum", {"spectrum", "--eta1", "1", "--kc", "2", "--dim", "3"}},
      {"variance_quadrature", "variance", {"variance", "--eta1", "1", "--dim", "2", "--xc", "5"}},
      {"variance_closed_form", "variance", {"variance", "--eta1", "1", "--method", "closed_form_exact"}},
      {"covariance_quadrature", "covariance", {"covariance", "--eta1", "0", "--xc", "5", "--r", "1"}},
      {"covariance_profile_quadrature", "covariance",
       {"covariance", "--eta1", "0", "--xc", "5", "--method", "quadrature"}},
      {"covariance_series_small_r", "covariance",
       {"covariance", "--eta1", "0", "--xc", "5", "--method", "series", "--r", "0.2"}},
      {"covariance_asymptotic", "covariance", {"covariance", "--eta1", "0", "--dim", "3"}},
      {"w1", "covariance", {"covariance", "--eta1", "3", "--h", "1"}},
      {"w3", "covariance", {"covariance", "--eta1", "3", "--h", "1", "--dim", "3"}},
      {"autocorrelation_asymptotic", "acf", {"acf", "--dim", "3", "--eta1", "2", "--h", "1"}},
      {"integral_scale", "iscale", {"iscale", "--eta1", "2", "--xc", "50"}},
      {"iscale1_asymptotic", "iscale", {"iscale", "--eta1", "2"}},
      {"iscale3_asymptotic", "iscale", {"iscale", "--eta1", "2", "--dim", "3"}},
      {"moment_integral", "smoothness", {"smoothness", "--eta1", "2", "--xc", "2"}},
      {"derivative_moment", "smoothness", {"smoothness", "--eta1", "2", "--xc", "2", "--xi", "2"}},
      {"max_ms_derivative_order", "smoothness", {"smoothness", "--eta1", "2", "--dim", "3"}},
      {"ratio_test_threshold", "smoothness", {"smoothness", "--eta1", "2", "--xc", "5", "--ratio-kr", "10"}},
      {"zeta_partial_sum", "smoothness", {"smoothness", "--eta1", "2", "--xc", "2", "--zeta-r", "0.1"}},
      {"sample_path_1d", "simulate", {"simulate", "--eta1", "2", "--xc", "10", "--count", "100", "--modes", "256"}},
      {"sample_paths_1d", "simulate",
       {"simulate", "--eta1", "2", "--xc", "10", "--count", "100", "--modes", "256", "--realizations", "4"}},
      {"empirical_stats", "simulate",
       {"simulate", "--eta1", "2", "--xc", "10", "--count", "100", "--modes", "256", "--realizations", "4",
        "--lags", "0,0.5"}},
      {"synthesis_covariance", "simulate",
       {"simulate", "--eta1", "2", "--xc", "10", "--count", "100", "--modes", "256", "--realizations", "3",
        "--format", "json"}},
      {"grid_covers_integral_scale", "simulate",
       {"simulate", "--eta1", "2", "--xc", "10", "--count", "3", "--modes", "64"}},
      {"v1", "figure", {"figure", "--which", "v1"}},
      {"v3", "figure", {"figure", "--which", "v3"}},
      {"rho1", "figure", {"figure", "--which", "rho1"}},
      {"rho3", "figure", {"figure", "--which", "rho3"}},
  };
  return registry;
}

std::span<const std::string_view> subcommands() { return all_subcommands; }

namespace {

CommandConfig parse_with(Parser& parser, const std::vector<std::string>& args) {
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  parser.app.parse(reversed);
  for (CLI::App* sub : parser.app.get_subcommands()) return resolve(sub->get_name(), parser.raw);
  throw InvalidArgument("a subcommand is required");
}

}  // namespace

CommandConfig parse(const std::vector<std::string>& args) {
  Parser parser;
  return parse_with(parser, args);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Parser parser;
  try {
    const CommandConfig config = parse_with(parser, args);
    std::ostringstream buffer;
    int status = 0;
    if (parser.raw.dump_config) {
      buffer << config_to_json(config).dump(2) << '\n';
    } else {
      status = dispatch(config, buffer, err);
    }
    if (config.output.empty()) {
      out << buffer.str();
    } else {
      const std::filesystem::path p = resolve_output(config.output);
      std::ofstream f(p, std::ios::binary);
      if (!f || !(f << buffer.str())) {
        return report(err, ExitCode::usage, "io", "cannot write '" + p.string() + "'");
      }
    }
    if (status == static_cast<int>(ExitCode::permissibility)) {
      report(err, ExitCode::permissibility, "not_permissible", "parameter set is not permissible");
    }
    return status;
  } catch (const CLI::CallForHelp&) {
    out << parser.app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << parser.app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    return report(err, ExitCode::usage, "usage", e.what());
  } catch (const PermissibilityError& e) {
    return report(err, ExitCode::permissibility, "permissibility", e.what());
  } catch (const AccuracyError& e) {
    return report(err, ExitCode::accuracy, "accuracy", e.what());
  } catch (const DivergenceError& e) {
    return report(err, ExitCode::accuracy, "divergence",
                  std::string(e.what()) + " (growth exponent " + std::to_string(e.exponent()) + ")");
  } catch (const InsufficientTermsError& e) {
    return report(err, ExitCode::usage, "insufficient_terms",
                  std::string(e.what()) + " (required " + std::to_string(e.required()) + ")");
  } catch (const InvalidArgument& e) {
    return report(err, ExitCode::usage, "invalid_argument", e.what());
  } catch (const json::exception& e) {
    return report(err, ExitCode::usage, "invalid_json", e.what());
  } catch (const std::exception& e) {
    return report(err, ExitCode::usage, "internal", e.what());
  }
}

}  // namespace spartan::cli
