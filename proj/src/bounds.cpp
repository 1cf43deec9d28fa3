#include "cartan/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <complex>
#include <numbers>
#include <sstream>

#include "cartan/error.hpp"
#include "cartan/geometry.hpp"
#include "cartan/parallel.hpp"
#include "cartan/special.hpp"

namespace cartan {

namespace {

constexpr double kCalibrationS = 0.35;
constexpr double kCalibrationPrefactor = 0.000376;

double golden_max(int n, double lo, double hi, double& arg) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = zimmert_fried_lb(n, x1);
  double f2 = zimmert_fried_lb(n, x2);
  while (hi - lo > 1e-10) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = zimmert_fried_lb(n, x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = zimmert_fried_lb(n, x1);
    }
  }
  arg = 0.5 * (lo + hi);
  return zimmert_fried_lb(n, arg);
}

void check_n(int n) {
  if (n < 3) throw Error(ErrorKind::InvalidInput, "Zimmert bounds need n >= 3");
}

}  // namespace

ZimmertAB zimmert_ab(double s) {
  if (!(s > 0.0)) throw Error(ErrorKind::NonPositiveArgument, "Zimmert parameter s must be positive");
  ZimmertAB r;
  r.a = (1.0 + s) * (1.0 + 2.0 * s) * std::exp(2.0 / s + 1.0 / (1.0 + s));
  r.b = log_gamma(1.0 + s) - std::log(2.0) - (1.0 + s) * digamma((1.0 + s) / 2.0);
  return r;
}

double zimmert_calibration() { return kCalibrationPrefactor * zimmert_ab(kCalibrationS).a; }

double zimmert_raw_prefactor(double s) { return 1.0 / zimmert_ab(s).a; }

double zimmert_prefactor(double s) { return zimmert_calibration() / zimmert_ab(s).a; }

double zimmert_regulator_lb(int n, double s) {
  check_n(n);
  const ZimmertAB ab = zimmert_ab(s);
  return zimmert_calibration() / ab.a * std::exp(ab.b * n);
}

double zimmert_fried_lb(int n, double s) {
  return zimmert_regulator_lb(n, s) * std::pow(2.0, n - 1) / binomial(2 * n - 2, n - 1);
}

double zimmert_fried_lb_rough(int n, double s) { return zimmert_regulator_lb(n, s) / std::pow(2.0, n - 1); }

MinMaxScan min_max_scan(const ScanSettings& st) {
  if (st.n_min < 8 || st.n_max > 17 || st.n_min > st.n_max) {
    throw Error(ErrorKind::InvalidInput, "n range must lie in [8, 17]");
  }
  if (st.min_over_max_n < st.n_min || st.min_over_max_n > st.n_max) {
    throw Error(ErrorKind::InvalidInput, "minimum range must lie inside the scanned range");
  }
  if (!(st.s_min > 0.0) || !(st.s_max > st.s_min) || st.grid < 3) {
    throw Error(ErrorKind::InvalidInput, "invalid s grid");
  }
  MinMaxScan out;
  out.curves.resize(static_cast<std::size_t>(st.n_max - st.n_min + 1));
  const double step = (st.s_max - st.s_min) / (st.grid - 1);
  parallel_for(out.curves.size(), [&](std::size_t idx) {
    BoundCurve& c = out.curves[idx];
    c.n = st.n_min + static_cast<int>(idx);
    std::size_t best = 0;
    for (int i = 0; i < st.grid; ++i) {
      const double s = st.s_min + i * step;
      c.samples.emplace_back(s, zimmert_fried_lb(c.n, s));
      if (c.samples.back().second > c.samples[best].second) best = c.samples.size() - 1;
    }
    const double lo = c.samples[best == 0 ? 0 : best - 1].first;
    const double hi = c.samples[std::min(best + 1, c.samples.size() - 1)].first;
    c.max = golden_max(c.n, lo, hi, c.argmax);
    if (c.max < c.samples[best].second) {
      c.max = c.samples[best].second;
      c.argmax = c.samples[best].first;
    }
  });
  out.value = std::numeric_limits<double>::infinity();
  for (const auto& c : out.curves) {
    if (c.n <= st.min_over_max_n && c.max < out.value) {
      out.value = c.max;
      out.argmin_n = c.n;
    }
  }
  return out;
}

std::string curves_csv(const std::vector<BoundCurve>& curves) {
  std::ostringstream os;
  os.precision(10);
  os << "n,s,Z\n";
  for (const auto& c : curves) {
    for (const auto& [s, z] : c.samples) os << c.n << ',' << s << ',' << z << '\n';
  }
  return os.str();
}

bool is_unimodal(const BoundCurve& curve) {
  bool falling = false;
  for (std::size_t i = 1; i < curve.samples.size(); ++i) {
    const double d = curve.samples[i].second - curve.samples[i - 1].second;
    if (d < 0.0) falling = true;
    if (falling && d > 1e-15 * std::abs(curve.samples[i].second)) return false;
  }
  return true;
}

FriedmanValue friedman_g(double x, int n, const QuadratureSettings& st) {
  if (!(x > 0.0)) throw Error(ErrorKind::NonPositiveArgument, "friedman_g needs x > 0");
  if (n < 2 || n > 8) throw Error(ErrorKind::InvalidInput, "friedman_g supports 2 <= n <= 8");
  const double log_base = n * std::log(std::numbers::pi) + std::log(x);
  const double scale = 1.0 / (std::pow(2.0, n) * 2.0 * std::numbers::pi);
  // On s = 2 + it the integrand at -t is the conjugate of the one at t.
  auto integrand = [&](double t) {
    const std::complex<double> s(2.0, t);
    const std::complex<double> lg = static_cast<double>(n) * log_gamma(s / 2.0);
    return scale * std::real(std::exp(-s / 2.0 * log_base + lg) * (2.0 * s - 1.0));
  };
  auto magnitude = [&](double t) {
    const std::complex<double> s(2.0, t);
    const double lg = n * log_gamma(s / 2.0).real();
    return scale * std::exp(-log_base + lg) * std::abs(2.0 * s - 1.0);
  };
  double cut = 1.0;
  while (magnitude(cut) > st.truncation) {
    cut += 1.0;
    if (cut > 1e4) throw Error(ErrorKind::QuadratureNotConverged, "integrand does not decay");
  }
  auto simpson = [&](int m) {
    const double h = cut / m;
    double sum = integrand(0.0) + integrand(cut);
    for (int i = 1; i < m; ++i) sum += (i % 2 ? 4.0 : 2.0) * integrand(i * h);
    return sum * h / 3.0;
  };
  double abs_scale = 0.0;
  {
    const int m = 4096;
    for (int i = 0; i < m; ++i) abs_scale += magnitude((i + 0.5) * cut / m) * cut / m;
  }
  int m = 64;
  double prev = simpson(m);
  for (int r = 0; r < st.max_refinements; ++r) {
    m *= 2;
    const double cur = simpson(m);
    const double err = std::abs(cur - prev) / 15.0;
    if (err <= st.relative_tolerance * std::max(std::abs(cur), abs_scale)) {
      return {cur, err + st.truncation * cut, cut};
    }
    prev = cur;
  }
  throw Error(ErrorKind::QuadratureNotConverged, "Simpson refinement did not converge");
}

}  // namespace cartan
