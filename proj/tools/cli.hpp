#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "spartan/model.hpp"
#include "spartan/quadrature.hpp"
#include "spartan/simulate.hpp"

namespace spartan::cli {

enum class ExitCode : int { ok = 0, usage = 1, permissibility = 2, accuracy = 3 };

enum class OutputFormat { csv, json, pretty };

std::string_view to_string(OutputFormat f) noexcept;

/// Inclusive, evenly spaced sweep [from, to] with `points` samples.
struct SweepRange {
  double from = 0.0;
  double to = 1.0;
  std::size_t points = 2;

  /// Throws InvalidArgument unless points >= 1, values finite and from <= to
  /// (from < to when points > 1).
  void validate() const;
  std::vector<double> values() const;

  friend bool operator==(const SweepRange&, const SweepRange&) = default;
};

/// Fully resolved command line. Parameters are held resolved; the file they
/// came from (if any) is kept only for diagnostics.
struct CommandConfig {
  std::string subcommand;
  ModelParams params;
  std::optional<std::string> params_file;
  int dim = 1;
  OutputFormat format = OutputFormat::csv;
  std::string output;  ///< empty: stdout
  QuadratureSpec quadrature;
  std::optional<SweepRange> range;

  // Lag selection and method for covariance, acf.
  std::optional<double> r;
  std::optional<double> h;
  std::string method = "auto";
  int terms = 40;

  // smoothness extras.
  std::optional<double> zeta_r;
  std::optional<double> ratio_kr;

  // simulate.
  std::uint64_t seed = 1;
  int modes = 4096;
  std::size_t realizations = 1;
  GridSpec grid{0.0, 0.1, 1000};
  std::vector<double> lags{0.0};
  std::string paths;
  std::string paths_format = "csv";

  // figure.
  std::string which;

  friend bool operator==(const CommandConfig&, const CommandConfig&) = default;
};

nlohmann::json config_to_json(const CommandConfig& c);
/// Inverse of config_to_json. Throws InvalidArgument on malformed input.
CommandConfig config_from_json(const nlohmann::json& j);

/// Library operation reached from a subcommand, with an invocation that
/// exercises it.
struct OperationBinding {
  std::string_view operation;
  std::string_view subcommand;
  std::vector<std::string> example;
};

/// One entry per public library operation.
const std::vector<OperationBinding>& operation_registry();

/// Names of all subcommands.
std::span<const std::string_view> subcommands();

/// Parses args (without the program name) into a config. Throws
/// InvalidArgument or CLI11 parse errors.
CommandConfig parse(const std::vector<std::string>& args);

/// Runs one invocation. Results go to `out` (or the configured output
/// file); a single "error: code=<code> exit=<n> message=<text>" line goes to
/// `err` on failure.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace spartan::cli
