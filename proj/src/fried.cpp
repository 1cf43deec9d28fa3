#include "cartan/fried.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "cartan/cartan.hpp"
#include "cartan/error.hpp"
#include "cartan/numberfield.hpp"
#include "cartan/parallel.hpp"

namespace cartan {

double golden_entropy_constant() { return 0.5 * std::log((1.0 + std::sqrt(5.0)) / 2.0); }

double fried_from_volume(int k, double vol) {
  if (!(vol > 0)) throw Error(ErrorKind::InvalidInput, "volume must be positive");
  return std::ldexp(1.0, k) / (factorial(k) * vol);
}

namespace {

Eigen::VectorXd box_halfwidths(const Eigen::MatrixXd& x) {
  Eigen::VectorXd w = Eigen::VectorXd::Zero(x.cols());
  for (const auto& v : abs_sum_vertices(x, 1.0)) w = w.cwiseMax(v.cwiseAbs());
  return w;
}

double polygon_area(const Eigen::MatrixXd& y) {
  // Vertices of {t in R^2 : 1/2 sum |y_j . t| <= 1} lie on the lines y_j . t = 0.
  std::vector<std::pair<double, Eigen::Vector2d>> pts;
  for (int j = 0; j < y.rows(); ++j) {
    Eigen::Vector2d d(-y(j, 1), y(j, 0));
    if (d.norm() < 1e-14) continue;
    double h = 0.5 * (y * d).cwiseAbs().sum();
    Eigen::Vector2d v = d / h;
    pts.emplace_back(std::atan2(v(1), v(0)), v);
    pts.emplace_back(std::atan2(-v(1), -v(0)), Eigen::Vector2d(-v));
  }
  std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  double area = 0;
  for (size_t i = 0; i < pts.size(); ++i) {
    const auto& a = pts[i].second;
    const auto& b = pts[(i + 1) % pts.size()].second;
    area += a(0) * b(1) - a(1) * b(0);
  }
  return 0.5 * std::abs(area);
}

}  // namespace

VolumeEstimate entropy_norm_ball_volume(const Eigen::MatrixXd& x, const MonteCarloSettings& mc, bool force_mc) {
  const int k = static_cast<int>(x.cols());
  if (classify(x) != ActionCase::P) throw Error(ErrorKind::CaseO, "entropy ball is unbounded");
  if (!force_mc && k == 2) {
    VolumeEstimate e;
    e.value = polygon_area(x);
    return e;
  }
  if (!force_mc && k <= 5 && x.rows() <= 16) {
    auto verts = abs_sum_vertices(x, 1.0);
    HPolytope h = hrep_abs_sum(x, 1.0);
    return polytope_volume(verts, k, &h);
  }
  Eigen::VectorXd w = box_halfwidths(x) * (1 + 1e-12);
  Eigen::MatrixXd xm = x;
  return mc_volume([xm](const Eigen::VectorXd& t) { return 0.5 * (xm * t).cwiseAbs().sum() <= 1.0; }, -w, w,
                   mc.samples, mc.seed);
}

BallVolumes entropy_ball_volume(const Eigen::MatrixXd& x, const MonteCarloSettings& mc) {
  const int n = static_cast<int>(x.rows());
  if (x.cols() != n - 1) throw Error(ErrorKind::InvalidInput, "entropy ball volume needs an n x (n-1) matrix");
  if (classify(x) != ActionCase::P) throw Error(ErrorKind::CaseO, "entropy function is not a norm");
  BallVolumes b;
  double r = regulator_of_log_matrix(x);
  b.closed_form = binomial(2 * n - 2, n - 1) / (r * factorial(n - 1));
  b.geometric = entropy_norm_ball_volume(x, mc, n > 5);
  return b;
}

double fried_average_entropy(const Eigen::MatrixXd& x) {
  const int n = static_cast<int>(x.rows());
  if (x.cols() != n - 1) throw Error(ErrorKind::InvalidInput, "Fried entropy closed form needs an n x (n-1) matrix");
  if (classify(x) != ActionCase::P) return 0.0;
  double r = regulator_of_log_matrix(x);
  double h = r * std::ldexp(1.0, n - 1) / binomial(2 * n - 2, n - 1);
  if (n <= 5) {
    double def = fried_from_volume(n - 1, entropy_norm_ball_volume(x).value);
    if (std::abs(def - h) > 1e-9 * h)
      throw Error(ErrorKind::NumericalFailure, "closed-form and geometric Fried entropy disagree");
  }
  return h;
}

double fried_definitional(const Eigen::MatrixXd& x, const MonteCarloSettings& mc) {
  if (classify(x) != ActionCase::P) return 0.0;
  return fried_from_volume(static_cast<int>(x.cols()), entropy_norm_ball_volume(x, mc).value);
}

OneEntropy one_entropy(const Eigen::MatrixXd& x, int seed_radius) {
  const int k = static_cast<int>(x.cols());
  if (classify(x) != ActionCase::P) throw Error(ErrorKind::CaseO, "1-entropy needs a CaseP matrix");
  if (seed_radius < 1) throw Error(ErrorKind::InvalidInput, "seed radius must be positive");
  OneEntropy out;
  out.seed_radius = seed_radius;
  out.value = std::numeric_limits<double>::infinity();
  auto consider = [&](const std::vector<long long>& m) {
    double h = entropy_of_element(x, m);
    ++out.points_checked;
    if (h < out.value - 1e-12 || (std::abs(h - out.value) <= 1e-12 && m < out.minimizer)) {
      out.value = h;
      out.minimizer = m;
    }
  };
  auto sweep = [&](const std::vector<long long>& bound) {
    double total = 1;
    for (auto b : bound) total *= 2.0 * b + 1;
    if (total > 2e8) throw Error(ErrorKind::DimensionTooLarge, "1-entropy enumeration box too large");
    std::vector<long long> m(k);
    for (int i = 0; i < k; ++i) m[i] = -bound[i];
    while (true) {
      // Canonical sign: first nonzero coordinate positive.
      int first = 0;
      while (first < k && m[first] == 0) ++first;
      if (first < k && m[first] > 0) consider(m);
      int i = k - 1;
      while (i >= 0 && m[i] == bound[i]) {
        m[i] = -bound[i];
        --i;
      }
      if (i < 0) break;
      ++m[i];
    }
  };
  sweep(std::vector<long long>(k, seed_radius));
  // Every lattice point with h(m) <= value lies in value * (unit ball box).
  Eigen::VectorXd w = box_halfwidths(x);
  std::vector<long long> bound(k);
  for (int i = 0; i < k; ++i) bound[i] = static_cast<long long>(std::floor(out.value * w(i) + 1e-9));
  bool larger = false;
  for (int i = 0; i < k; ++i) larger = larger || bound[i] > seed_radius;
  if (larger) sweep(bound);
  return out;
}

double l_entropy_lower_bound(int n, int ell) {
  double c = golden_entropy_constant();
  return std::pow(c * n, ell) / factorial(ell);
}

double exp_growth_exponent(double r) {
  double c = golden_entropy_constant();
  if (!(r > 0) || !(r < std::exp(1.0) * c)) throw Error(ErrorKind::RatioOutOfRange, "need 0 < l/n < e c");
  return r * std::log(c) - r * std::log(r) + r;
}

double exp_growth_bound(int n, int ell) {
  if (n <= 0) throw Error(ErrorKind::InvalidInput, "n must be positive");
  return exp_growth_exponent(static_cast<double>(ell) / n);
}

namespace {

long long det_small(std::vector<std::vector<long long>> a) {
  const int n = static_cast<int>(a.size());
  long long prev = 1;
  int sign = 1;
  for (int k = 0; k < n - 1; ++k) {
    if (a[k][k] == 0) {
      int s = -1;
      for (int i = k + 1; i < n; ++i)
        if (a[i][k] != 0) {
          s = i;
          break;
        }
      if (s < 0) return 0;
      std::swap(a[k], a[s]);
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i)
      for (int j = k + 1; j < n; ++j) a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
    prev = a[k][k];
  }
  return sign * a[n - 1][n - 1];
}

bool is_primitive(const std::vector<std::vector<long long>>& v, int k) {
  const int ell = static_cast<int>(v.size());
  std::vector<int> cols(ell);
  for (int i = 0; i < ell; ++i) cols[i] = i;
  long long g = 0;
  while (true) {
    std::vector<std::vector<long long>> m(ell, std::vector<long long>(ell));
    for (int i = 0; i < ell; ++i)
      for (int j = 0; j < ell; ++j) m[i][j] = v[i][cols[j]];
    g = std::gcd(g, std::llabs(det_small(m)));
    if (g == 1) return true;
    int i = ell - 1;
    while (i >= 0 && cols[i] == k - ell + i) --i;
    if (i < 0) break;
    ++cols[i];
    for (int j = i + 1; j < ell; ++j) cols[j] = cols[j - 1] + 1;
  }
  return g == 1;
}

// Iterates over row-HNF matrices of rank ell in Z^k (pivots in [1, b], entries
// above pivots in [0, pivot), other entries right of the pivot in [-b, b]).
template <class Visit>
void for_each_hnf(int k, int ell, int b, Visit&& visit) {
  std::vector<int> piv(ell);
  for (int i = 0; i < ell; ++i) piv[i] = i;
  while (true) {
    std::vector<int> a(ell, 1);
    while (true) {
      // Free cells and their ranges.
      std::vector<std::pair<int, int>> cells;
      std::vector<std::pair<long long, long long>> range;
      for (int i = 0; i < ell; ++i)
        for (int c = piv[i] + 1; c < k; ++c) {
          auto it = std::find(piv.begin(), piv.end(), c);
          cells.emplace_back(i, c);
          if (it != piv.end())
            range.emplace_back(0, a[it - piv.begin()] - 1);
          else
            range.emplace_back(-b, b);
        }
      std::vector<std::vector<long long>> v(ell, std::vector<long long>(k, 0));
      for (int i = 0; i < ell; ++i) v[i][piv[i]] = a[i];
      std::vector<long long> val(cells.size());
      for (size_t q = 0; q < cells.size(); ++q) val[q] = range[q].first;
      while (true) {
        for (size_t q = 0; q < cells.size(); ++q) v[cells[q].first][cells[q].second] = val[q];
        visit(v);
        size_t q = 0;
        while (q < cells.size() && val[q] == range[q].second) {
          val[q] = range[q].first;
          ++q;
        }
        if (q == cells.size()) break;
        ++val[q];
      }
      int i = 0;
      while (i < ell && a[i] == b) a[i++] = 1;
      if (i == ell) break;
      ++a[i];
    }
    int i = ell - 1;
    while (i >= 0 && piv[i] == k - ell + i) --i;
    if (i < 0) break;
    ++piv[i];
    for (int j = i + 1; j < ell; ++j) piv[j] = piv[j - 1] + 1;
  }
}

double hnf_count(int k, int ell, int b) {
  double total = 0;
  std::vector<int> piv(ell);
  for (int i = 0; i < ell; ++i) piv[i] = i;
  while (true) {
    // Sum over pivot values factorizes: each pivot a_j contributes a_j^(j) for
    // the j rows above it.
    double prod = 1;
    for (int j = 0; j < ell; ++j) {
      double s = 0;
      for (int aj = 1; aj <= b; ++aj) s += std::pow(aj, j);
      prod *= s;
    }
    for (int i = 0; i < ell; ++i) {
      int nonpivot = 0;
      for (int c = piv[i] + 1; c < k; ++c)
        if (std::find(piv.begin(), piv.end(), c) == piv.end()) ++nonpivot;
      prod *= std::pow(2.0 * b + 1, nonpivot);
    }
    total += prod;
    int i = ell - 1;
    while (i >= 0 && piv[i] == k - ell + i) --i;
    if (i < 0) break;
    ++piv[i];
    for (int j = i + 1; j < ell; ++j) piv[j] = piv[j - 1] + 1;
  }
  return total;
}

}  // namespace

LEntropy l_entropy_search(const Eigen::MatrixXd& x, int ell, int basis_bound, std::uint64_t budget) {
  const int k = static_cast<int>(x.cols());
  const int n = static_cast<int>(x.rows());
  if (ell < 1 || ell > k) throw Error(ErrorKind::InvalidInput, "need 1 <= l <= rank");
  if (basis_bound < 1) throw Error(ErrorKind::InvalidInput, "basis bound must be positive");
  if (classify(x) != ActionCase::P) throw Error(ErrorKind::CaseO, "l-entropy needs a CaseP matrix");
  // Volume evaluations above dimension 2 are far more expensive.
  const double effective_budget = ell <= 2 ? static_cast<double>(budget) : static_cast<double>(budget) / 30.0;
  int b = basis_bound;
  while (b > 1 && hnf_count(k, ell, b) > effective_budget) --b;
  LEntropy out;
  out.ell = ell;
  out.basis_bound = b;
  out.lower_bound = l_entropy_lower_bound(n, ell);
  out.upper_estimate = std::numeric_limits<double>::infinity();
  for_each_hnf(k, ell, b, [&](const std::vector<std::vector<long long>>& v) {
    if (!is_primitive(v, k)) return;
    Eigen::MatrixXd vt(k, ell);
    for (int i = 0; i < ell; ++i)
      for (int c = 0; c < k; ++c) vt(c, i) = static_cast<double>(v[i][c]);
    Eigen::MatrixXd y = x * vt;
    double h;
    if (ell == 1)
      h = 0.5 * y.cwiseAbs().sum();
    else if (ell == 2)
      h = fried_from_volume(2, polygon_area(y));
    else
      h = fried_from_volume(ell, entropy_norm_ball_volume(y).value);
    ++out.sublattices;
    if (h < out.upper_estimate - 1e-12) {
      out.upper_estimate = h;
      out.best = v;
    }
  });
  return out;
}

}  // namespace cartan
