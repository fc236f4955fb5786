#include "spartan/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>

#include "spartan/errors.hpp"

namespace spartan {

namespace {

// 21-point Kronrod abscissae/weights and the embedded 10-point Gauss weights
// (QUADPACK qk21). Gauss nodes are the odd-indexed Kronrod nodes.
constexpr double kXgk[11] = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};
constexpr double kWgk[11] = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077208272420752, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
constexpr double kWg[5] = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Interval {
  double a;
  double b;
  double value;
  double error;
};

struct ByError {
  bool operator()(const Interval& x, const Interval& y) const { return x.error < y.error; }
};

Interval gauss_kronrod21(const std::function<double(double)>& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double abs_half = std::abs(half);

  const double fc = f(center);
  double resk = fc * kWgk[10];
  double resabs = std::abs(resk);
  double resg = 0.0;
  double fv1[10];
  double fv2[10];
  for (int j = 0; j < 10; ++j) {
    const double dx = half * kXgk[j];
    const double f1 = f(center - dx);
    const double f2 = f(center + dx);
    fv1[j] = f1;
    fv2[j] = f2;
    resk += kWgk[j] * (f1 + f2);
    resabs += kWgk[j] * (std::abs(f1) + std::abs(f2));
    if (j % 2 == 1) resg += kWg[j / 2] * (f1 + f2);
  }
  const double reskh = resk * 0.5;
  double resasc = kWgk[10] * std::abs(fc - reskh);
  for (int j = 0; j < 10; ++j) {
    resasc += kWgk[j] * (std::abs(fv1[j] - reskh) + std::abs(fv2[j] - reskh));
  }

  const double result = resk * half;
  resabs *= abs_half;
  resasc *= abs_half;
  double err = std::abs((resk - resg) * half);
  if (resasc != 0.0 && err != 0.0) {
    err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  }
  constexpr double eps = std::numeric_limits<double>::epsilon();
  constexpr double uflow = std::numeric_limits<double>::min();
  if (resabs > uflow / (50.0 * eps)) err = std::max(50.0 * eps * resabs, err);
  if (!std::isfinite(result)) err = std::numeric_limits<double>::infinity();
  return Interval{a, b, result, err};
}

}  // namespace

void QuadratureSpec::validate() const {
  if (!(abs_tol > 0.0) || !(rel_tol > 0.0)) {
    throw InvalidArgument("quadrature tolerances must be positive");
  }
  if (max_subdivisions < 1) throw InvalidArgument("max_subdivisions must be >= 1");
}

void CompensatedSum::add(double x) noexcept {
  const double t = sum_ + x;
  if (std::abs(sum_) >= std::abs(x)) {
    comp_ += (sum_ - t) + x;
  } else {
    comp_ += (x - t) + sum_;
  }
  sum_ = t;
}

QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           const QuadratureSpec& spec, std::span<const double> breakpoints) {
  spec.validate();
  if (!std::isfinite(a) || !std::isfinite(b)) {
    throw InvalidArgument("integration limits must be finite");
  }
  if (a == b) return {};
  if (a > b) {
    QuadratureResult r = integrate(f, b, a, spec, breakpoints);
    r.value = -r.value;
    return r;
  }

  std::vector<double> edges;
  edges.reserve(breakpoints.size() + 2);
  edges.push_back(a);
  for (double p : breakpoints) {
    if (p > a && p < b) edges.push_back(p);
  }
  edges.push_back(b);
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  std::priority_queue<Interval, std::vector<Interval>, ByError> active;
  std::vector<Interval> frozen;  // intervals too narrow to bisect further
  double total = 0.0;
  double total_err = 0.0;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    Interval iv = gauss_kronrod21(f, edges[i], edges[i + 1]);
    total += iv.value;
    total_err += iv.error;
    active.push(iv);
  }
  int count = static_cast<int>(edges.size()) - 1;

  auto tolerance = [&](double value) { return std::max(spec.abs_tol, spec.rel_tol * std::abs(value)); };

  auto exact_totals = [&]() {
    CompensatedSum v;
    CompensatedSum e;
    auto copy = active;
    while (!copy.empty()) {
      v.add(copy.top().value);
      e.add(copy.top().error);
      copy.pop();
    }
    for (const Interval& iv : frozen) {
      v.add(iv.value);
      e.add(iv.error);
    }
    total = v.value();
    total_err = e.value();
  };

  constexpr double eps = std::numeric_limits<double>::epsilon();
  while (!active.empty()) {
    if (total_err <= tolerance(total)) {
      exact_totals();
      if (total_err <= tolerance(total)) break;
    }
    if (count + 1 > spec.max_subdivisions) break;

    Interval worst = active.top();
    active.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b) ||
        (worst.b - worst.a) <= 64.0 * eps * std::max(std::abs(worst.a), std::abs(worst.b))) {
      frozen.push_back(worst);
      continue;
    }
    const Interval left = gauss_kronrod21(f, worst.a, mid);
    const Interval right = gauss_kronrod21(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    active.push(left);
    active.push(right);
    ++count;
  }
  exact_totals();

  QuadratureResult result{total, total_err, count};
  if (!std::isfinite(total) || !(total_err <= tolerance(total))) {
    std::ostringstream os;
    os.precision(3);
    os << "quadrature failed to converge: estimated error " << total_err << " exceeds tolerance "
       << tolerance(total) << " after " << count << " intervals";
    throw AccuracyError(os.str(), total_err, tolerance(total));
  }
  return result;
}

std::vector<double> periodic_breakpoints(double a, double b, double spacing, int max_count) {
  std::vector<double> points;
  if (!(spacing > 0.0) || !(b > a) || max_count < 1) return points;
  const double span = (b - a) / spacing;
  if (span > 1e9) {
    // Far too many periods to enumerate; coarsen to the cap directly.
    spacing = (b - a) / (max_count + 1);
  } else {
    const auto n = static_cast<long long>(std::ceil(b / spacing) - std::floor(a / spacing));
    if (n > max_count) spacing *= std::ceil(static_cast<double>(n) / max_count);
  }
  const double first = std::floor(a / spacing) + 1.0;
  for (double m = first;; m += 1.0) {
    const double p = m * spacing;
    if (p >= b) break;
    if (p > a) points.push_back(p);
  }
  return points;
}

}  // namespace spartan
