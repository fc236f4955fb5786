#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "spartan/model.hpp"

namespace spartan {

/// Regular 1-D sampling grid start + i * step, i = 0 .. count-1.
struct GridSpec {
  double start = 0.0;
  double step = 1.0;
  std::size_t count = 2;

  /// Throws InvalidArgument unless step > 0, count >= 2 and both ends finite.
  void validate() const;
  double position(std::size_t i) const noexcept { return start + static_cast<double>(i) * step; }
  double span() const noexcept { return step * static_cast<double>(count); }

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

struct FieldRealization {
  GridSpec grid;
  std::vector<double> values;
  std::uint64_t seed = 0;
  int n_modes = 0;
};

/// One Gaussian sample path by randomized spectral synthesis:
/// X(s) = sum_j sigma_j [A_j cos(k_j s) + B_j sin(k_j s)], k_j the midpoints
/// of n_modes equal cells of (0, kc], sigma_j^2 = f(k_j) dk / pi, A_j, B_j
/// standard normal. The generator is std::mt19937_64 seeded with `seed`; for
/// j = 0, 1, ... two 64-bit words produce (A_j, B_j) by Box-Muller.
/// Throws InvalidArgument for an infinite band and PermissibilityError for
/// non-permissible parameters.
FieldRealization sample_path_1d(const ModelParams& params, const GridSpec& grid,
                                std::uint64_t seed, int n_modes);

/// Seed of realization `index` in an ensemble built from `base_seed`.
std::uint64_t realization_seed(std::uint64_t base_seed, std::uint64_t index) noexcept;

/// `count` independent realizations with seeds realization_seed(base_seed, i).
/// Generated concurrently; the output is independent of scheduling.
std::vector<FieldRealization> sample_paths_1d(const ModelParams& params, const GridSpec& grid,
                                              std::uint64_t base_seed, int n_modes,
                                              std::size_t count);

/// Exact ensemble covariance of the n_modes synthesis at lag r:
/// sum_j sigma_j^2 cos(k_j r).
double synthesis_covariance(const ModelParams& params, int n_modes, double r);

/// True when the grid spans at least one integral scale (d = 1) of params.
bool grid_covers_integral_scale(const ModelParams& params, const GridSpec& grid);

struct EmpiricalStats {
  std::vector<double> lags;
  double mean = 0.0;
  double variance = 0.0;
  std::vector<double> acf;
  struct {
    double mean = 0.0;
    double variance = 0.0;
    std::vector<double> acf;
  } std_errors;
  std::size_t realizations = 0;
};

/// Cross-realization estimators with Monte-Carlo standard errors computed
/// from per-realization spatial averages. Lags must be nonnegative multiples
/// of the grid step shorter than the grid. Throws InvalidArgument on fewer
/// than two realizations or mismatched grids.
EmpiricalStats empirical_stats(std::span<const FieldRealization> realizations,
                               std::span<const double> lags);

}  // namespace spartan
