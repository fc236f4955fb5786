#include "spartan/simulate.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "parallel.hpp"
#include "spartan/errors.hpp"
#include "spartan/spectral.hpp"

namespace spartan {

namespace {

using std::numbers::pi;

// Re-anchor the trigonometric recurrence with exact values this often.
constexpr std::size_t anchor_stride = 64;

double unit_open(std::uint64_t word) {
  // (0, 1]: 53 random mantissa bits, shifted off zero.
  return (static_cast<double>(word >> 11) + 1.0) * 0x1.0p-53;
}

struct ModeTable {
  double dk = 0.0;
  std::vector<double> k;
  std::vector<double> sigma2;
};

ModeTable build_modes(const ModelParams& params, int n_modes) {
  require_permissible(params);
  if (params.kc.is_infinite()) {
    throw InvalidArgument("spectral synthesis requires a finite band");
  }
  if (n_modes < 1) throw InvalidArgument("n_modes must be >= 1");
  ModeTable t;
  const double kc = params.kc.value();
  t.dk = kc / n_modes;
  t.k.resize(n_modes);
  t.sigma2.resize(n_modes);
  for (int j = 0; j < n_modes; ++j) {
    const double k = (j + 0.5) * t.dk;
    t.k[j] = k;
    t.sigma2[j] = params.eta0 * params.xi / char_polynomial(k * params.xi, params.eta1) * t.dk / pi;
  }
  return t;
}

double sample_sd(std::span<const double> x, double mean) {
  if (x.size() < 2) return 0.0;
  CompensatedSum s;
  for (double v : x) s.add((v - mean) * (v - mean));
  return std::sqrt(s.value() / static_cast<double>(x.size() - 1));
}

double mean_of(std::span<const double> x) {
  CompensatedSum s;
  for (double v : x) s.add(v);
  return s.value() / static_cast<double>(x.size());
}

}  // namespace

void GridSpec::validate() const {
  if (!std::isfinite(start)) throw InvalidArgument("grid start must be finite");
  if (!std::isfinite(step) || !(step > 0.0)) throw InvalidArgument("grid step must be positive");
  if (count < 2) throw InvalidArgument("grid needs at least two points");
  if (!std::isfinite(position(count - 1))) throw InvalidArgument("grid end must be finite");
}

FieldRealization sample_path_1d(const ModelParams& params, const GridSpec& grid,
                                std::uint64_t seed, int n_modes) {
  grid.validate();
  const ModeTable modes = build_modes(params, n_modes);

  FieldRealization out;
  out.grid = grid;
  out.seed = seed;
  out.n_modes = n_modes;
  out.values.assign(grid.count, 0.0);

  std::mt19937_64 engine(seed);
  for (int j = 0; j < n_modes; ++j) {
    const double u1 = unit_open(engine());
    const double u2 = unit_open(engine());
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double a = radius * std::cos(2.0 * pi * u2);
    const double b = radius * std::sin(2.0 * pi * u2);
    const double sigma = std::sqrt(modes.sigma2[j]);
    const double k = modes.k[j];
    const double rot_c = std::cos(k * grid.step);
    const double rot_s = std::sin(k * grid.step);
    double c = 0.0;
    double s = 0.0;
    for (std::size_t i = 0; i < grid.count; ++i) {
      if (i % anchor_stride == 0) {
        const double phase = k * grid.position(i);
        c = std::cos(phase);
        s = std::sin(phase);
      } else {
        const double next_c = c * rot_c - s * rot_s;
        s = s * rot_c + c * rot_s;
        c = next_c;
      }
      out.values[i] += sigma * (a * c + b * s);
    }
  }
  return out;
}

std::uint64_t realization_seed(std::uint64_t base_seed, std::uint64_t index) noexcept {
  // splitmix64 finalizer over base + golden-ratio stride.
  std::uint64_t z = base_seed + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::vector<FieldRealization> sample_paths_1d(const ModelParams& params, const GridSpec& grid,
                                              std::uint64_t base_seed, int n_modes,
                                              std::size_t count) {
  grid.validate();
  build_modes(params, n_modes);  // validate once before spawning work
  std::vector<FieldRealization> out(count);
  detail::parallel_for(count, [&](std::size_t i) {
    out[i] = sample_path_1d(params, grid, realization_seed(base_seed, i), n_modes);
  });
  return out;
}

double synthesis_covariance(const ModelParams& params, int n_modes, double r) {
  if (!std::isfinite(r)) throw InvalidArgument("lag must be finite");
  const ModeTable modes = build_modes(params, n_modes);
  CompensatedSum sum;
  for (int j = 0; j < n_modes; ++j) sum.add(modes.sigma2[j] * std::cos(modes.k[j] * r));
  return sum.value();
}

bool grid_covers_integral_scale(const ModelParams& params, const GridSpec& grid) {
  return grid.span() >= integral_scale(params, Dim::one);
}

EmpiricalStats empirical_stats(std::span<const FieldRealization> realizations,
                               std::span<const double> lags) {
  if (realizations.size() < 2) throw InvalidArgument("need at least two realizations");
  const GridSpec grid = realizations.front().grid;
  grid.validate();
  for (const FieldRealization& f : realizations) {
    if (!(f.grid == grid) || f.values.size() != grid.count) {
      throw InvalidArgument("realizations are not on a common grid");
    }
  }
  std::vector<std::size_t> offsets;
  for (double lag : lags) {
    if (!std::isfinite(lag) || lag < 0.0) throw InvalidArgument("lags must be >= 0");
    const double steps = lag / grid.step;
    const double rounded = std::round(steps);
    if (std::abs(steps - rounded) > 1e-9 * std::max(1.0, steps)) {
      throw InvalidArgument("lags must be multiples of the grid step");
    }
    if (rounded >= static_cast<double>(grid.count)) {
      throw InvalidArgument("lag exceeds the grid length");
    }
    offsets.push_back(static_cast<std::size_t>(rounded));
  }

  const std::size_t m = realizations.size();
  const std::size_t n = grid.count;
  const double bessel = static_cast<double>(m) / static_cast<double>(m - 1);

  std::vector<double> point_mean(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    CompensatedSum s;
    for (const FieldRealization& f : realizations) s.add(f.values[i]);
    point_mean[i] = s.value() / static_cast<double>(m);
  }

  std::vector<double> spatial_mean(m);
  std::vector<double> var_r(m);
  std::vector<std::vector<double>> cov_r(offsets.size(), std::vector<double>(m));
  for (std::size_t r = 0; r < m; ++r) {
    const std::vector<double>& x = realizations[r].values;
    CompensatedSum mu;
    CompensatedSum v;
    for (std::size_t i = 0; i < n; ++i) {
      mu.add(x[i]);
      const double dev = x[i] - point_mean[i];
      v.add(dev * dev);
    }
    spatial_mean[r] = mu.value() / static_cast<double>(n);
    var_r[r] = bessel * v.value() / static_cast<double>(n);
    for (std::size_t l = 0; l < offsets.size(); ++l) {
      const std::size_t off = offsets[l];
      CompensatedSum c;
      for (std::size_t i = 0; i + off < n; ++i) {
        c.add((x[i] - point_mean[i]) * (x[i + off] - point_mean[i + off]));
      }
      cov_r[l][r] = bessel * c.value() / static_cast<double>(n - off);
    }
  }

  EmpiricalStats stats;
  stats.realizations = m;
  stats.lags.assign(lags.begin(), lags.end());
  stats.mean = mean_of(spatial_mean);
  stats.std_errors.mean = sample_sd(spatial_mean, stats.mean) / std::sqrt(static_cast<double>(m));
  stats.variance = mean_of(var_r);
  stats.std_errors.variance = sample_sd(var_r, stats.variance) / std::sqrt(static_cast<double>(m));

  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t l = 0; l < offsets.size(); ++l) {
    if (offsets[l] == 0) {
      stats.acf.push_back(1.0);
      stats.std_errors.acf.push_back(0.0);
      continue;
    }
    if (!(stats.variance > 0.0)) {
      stats.acf.push_back(nan);
      stats.std_errors.acf.push_back(nan);
      continue;
    }
    const double rho = mean_of(cov_r[l]) / stats.variance;
    // Linearized ratio estimator: z_r = (c_r - rho v_r) / variance.
    std::vector<double> z(m);
    for (std::size_t r = 0; r < m; ++r) z[r] = (cov_r[l][r] - rho * var_r[r]) / stats.variance;
    stats.acf.push_back(rho);
    stats.std_errors.acf.push_back(sample_sd(z, mean_of(z)) / std::sqrt(static_cast<double>(m)));
  }
  return stats;
}

}  // namespace spartan
