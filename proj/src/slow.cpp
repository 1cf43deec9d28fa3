#include "cartan/slow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>

#include "cartan/cartan.hpp"
#include "cartan/error.hpp"
#include "cartan/fried.hpp"
#include "cartan/lp.hpp"
#include "cartan/numberfield.hpp"
#include "cartan/parallel.hpp"

namespace cartan {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::uint64_t kVolumeSamples = 1000000;
constexpr std::uint64_t kVolumeSeed = 20240601;

}  // namespace

PolyhedralNorm::PolyhedralNorm(Eigen::MatrixXd functionals, std::vector<double> coefficients)
    : functionals_(std::move(functionals)), coefficients_(std::move(coefficients)) {
  if (functionals_.cols() < 1 || functionals_.rows() != static_cast<Eigen::Index>(coefficients_.size())) {
    throw Error(ErrorKind::NotANorm, "need one coefficient per functional");
  }
  if (!functionals_.allFinite()) throw Error(ErrorKind::NotANorm, "non-finite functional");
  std::vector<Eigen::Index> active;
  for (std::size_t i = 0; i < coefficients_.size(); ++i) {
    if (!std::isfinite(coefficients_[i]) || coefficients_[i] < 0.0) {
      throw Error(ErrorKind::NotANorm, "coefficients must be finite and nonnegative");
    }
    if (coefficients_[i] > 0.0) active.push_back(static_cast<Eigen::Index>(i));
  }
  Eigen::MatrixXd a(static_cast<Eigen::Index>(active.size()), functionals_.cols());
  for (std::size_t r = 0; r < active.size(); ++r) {
    a.row(static_cast<Eigen::Index>(r)) = coefficients_[static_cast<std::size_t>(active[r])] * functionals_.row(active[r]);
  }
  if (a.rows() < a.cols()) throw Error(ErrorKind::NotANorm, "active functionals do not span");
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(s.size() - 1) <= 1e-12 * std::max(1.0, s(0))) {
    throw Error(ErrorKind::NotANorm, "active functionals do not span");
  }
}

double PolyhedralNorm::operator()(const Eigen::VectorXd& x) const {
  double best = 0.0;
  for (Eigen::Index i = 0; i < functionals_.rows(); ++i) {
    best = std::max(best, coefficients_[static_cast<std::size_t>(i)] * std::abs(functionals_.row(i).dot(x)));
  }
  return best;
}

HPolytope PolyhedralNorm::unit_ball() const {
  std::vector<Eigen::Index> active;
  for (std::size_t i = 0; i < coefficients_.size(); ++i) {
    if (coefficients_[i] > 0.0) active.push_back(static_cast<Eigen::Index>(i));
  }
  HPolytope h;
  h.dimension = dimension();
  h.normals.resize(2 * static_cast<Eigen::Index>(active.size()), functionals_.cols());
  h.offsets = Eigen::VectorXd::Ones(h.normals.rows());
  for (std::size_t r = 0; r < active.size(); ++r) {
    Eigen::RowVectorXd row = coefficients_[static_cast<std::size_t>(active[r])] * functionals_.row(active[r]);
    h.normals.row(2 * static_cast<Eigen::Index>(r)) = row;
    h.normals.row(2 * static_cast<Eigen::Index>(r) + 1) = -row;
  }
  return h;
}

const std::vector<Eigen::VectorXd>& PolyhedralNorm::vertices() const {
  if (vertices_.empty()) {
    if (dimension() == 1) {
      double m = 0.0;
      for (Eigen::Index i = 0; i < functionals_.rows(); ++i) {
        m = std::max(m, coefficients_[static_cast<std::size_t>(i)] * std::abs(functionals_(i, 0)));
      }
      vertices_ = {Eigen::VectorXd::Constant(1, -1.0 / m), Eigen::VectorXd::Constant(1, 1.0 / m)};
    } else {
      vertices_ = vertex_enumeration(unit_ball());
    }
  }
  return vertices_;
}

double PolyhedralNorm::volume() const {
  const int k = dimension();
  if (k == 1) return vertices()[1](0) - vertices()[0](0);
  HPolytope h = unit_ball();
  if (k <= 5) return polytope_volume(vertices(), k, &h).value;
  auto [lo, hi] = bounding_box(h);
  auto inside = [&h](const Eigen::VectorXd& x) { return ((h.normals * x).array() <= h.offsets.array()).all(); };
  return mc_volume(inside, lo, hi, kVolumeSamples, kVolumeSeed).value;
}

PolyhedralNorm PolyhedralNorm::scaled(double factor) const {
  if (!(factor > 0.0) || !std::isfinite(factor)) throw Error(ErrorKind::NotANorm, "scale factor must be positive");
  std::vector<double> c = coefficients_;
  for (double& v : c) v *= factor;
  return PolyhedralNorm(functionals_, std::move(c));
}

double dual_norm(const PolyhedralNorm& p, const Eigen::VectorXd& xi) {
  if (xi.size() != p.dimension()) throw Error(ErrorKind::InvalidInput, "functional has the wrong dimension");
  if (xi.isZero(0.0)) return 0.0;
  if (p.dimension() <= 5) {
    double best = 0.0;
    for (const auto& v : p.vertices()) best = std::max(best, std::abs(xi.dot(v)));
    return best;
  }
  HPolytope h = p.unit_ball();
  LpResult r = maximize(h.normals, h.offsets, xi);
  if (r.status != LpStatus::Optimal) throw Error(ErrorKind::NotANorm, "unit ball is unbounded");
  return r.value;
}

double sh_for_norm(const Eigen::MatrixXd& x, const PolyhedralNorm& p) {
  if (x.cols() != p.dimension()) throw Error(ErrorKind::InvalidInput, "Lyapunov matrix and norm dimensions differ");
  double total = 0.0;
  for (Eigen::Index j = 0; j < x.rows(); ++j) total += dual_norm(p, x.row(j).transpose());
  return total;
}

double SH_functional(const Eigen::MatrixXd& xi, const PolyhedralNorm& p) {
  if (xi.cols() != p.dimension()) throw Error(ErrorKind::InvalidInput, "functionals and norm dimensions differ");
  double total = 0.0;
  for (Eigen::Index j = 0; j < xi.rows(); ++j) total += dual_norm(p, xi.row(j).transpose());
  return total / std::pow(p.volume(), 1.0 / p.dimension());
}

namespace {

// F(c) with +inf outside the set of norms.
double objective(const std::vector<double>& c) {
  const std::size_t n = c.size();
  std::size_t zeros = 0;
  std::size_t imin = 0;
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(c[i]) || c[i] < 0.0) return kInf;
    total += c[i];
    if (c[i] < c[imin]) imin = i;
  }
  if (!(total > 0.0)) return kInf;
  for (double v : c) {
    if (v <= 1e-8 * total) ++zeros;
  }
  if (zeros > 1) return kInf;
  const double k = static_cast<double>(n - 1);
  const double cn = c[imin];
  double inv_sum = 0.0;
  double log_prod = 0.0;
  std::vector<double> eta;
  eta.reserve(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    if (i == imin) continue;
    inv_sum += 1.0 / c[i];
    log_prod += std::log(c[i]);
    eta.push_back(cn / c[i]);
  }
  const double geo = std::exp(log_prod / k);
  if (zeros == 1) return inv_sum * geo;  // Case I limit, c_n free
  const double slab = std::accumulate(eta.begin(), eta.end(), 0.0);
  const double numerator = inv_sum + std::min(1.0, slab) / cn;
  return numerator * geo / std::pow(box_slab_volume(eta), 1.0 / k);
}

struct Simplex {
  std::vector<std::vector<double>> points;
  std::vector<double> values;
};

// Nelder-Mead on u in R^(n-1) with c = (1, exp(u)).
std::vector<double> nelder_mead(const std::vector<double>& start, const OptimizerSettings& s, long long& evals,
                                double& best_value, int& iterations) {
  const std::size_t d = start.size();
  auto f = [&](const std::vector<double>& u) {
    ++evals;
    std::vector<double> c(d + 1, 1.0);
    for (std::size_t i = 0; i < d; ++i) c[i + 1] = std::exp(u[i]);
    return objective(c);
  };
  Simplex sx;
  sx.points.push_back(start);
  for (std::size_t i = 0; i < d; ++i) {
    auto p = start;
    p[i] += 0.2;
    sx.points.push_back(p);
  }
  for (const auto& p : sx.points) sx.values.push_back(f(p));
  std::vector<std::size_t> order(d + 1);
  for (iterations = 0; iterations < s.max_iterations; ++iterations) {
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return sx.values[a] < sx.values[b]; });
    const std::size_t best = order.front();
    const std::size_t worst = order.back();
    const std::size_t second = order[d - 1];
    if (std::isfinite(sx.values[worst]) && sx.values[worst] - sx.values[best] < s.tolerance) break;
    std::vector<double> centroid(d, 0.0);
    for (std::size_t i = 0; i <= d; ++i) {
      if (i == worst) continue;
      for (std::size_t j = 0; j < d; ++j) centroid[j] += sx.points[i][j] / static_cast<double>(d);
    }
    auto along = [&](double t) {
      std::vector<double> p(d);
      for (std::size_t j = 0; j < d; ++j) p[j] = centroid[j] + t * (sx.points[worst][j] - centroid[j]);
      return p;
    };
    auto reflected = along(-1.0);
    const double fr = f(reflected);
    if (fr < sx.values[best]) {
      auto expanded = along(-2.0);
      const double fe = f(expanded);
      if (fe < fr) {
        sx.points[worst] = expanded;
        sx.values[worst] = fe;
      } else {
        sx.points[worst] = reflected;
        sx.values[worst] = fr;
      }
      continue;
    }
    if (fr < sx.values[second]) {
      sx.points[worst] = reflected;
      sx.values[worst] = fr;
      continue;
    }
    const bool outside = fr < sx.values[worst];
    auto contracted = along(outside ? -0.5 : 0.5);
    const double fc = f(contracted);
    if (fc < (outside ? fr : sx.values[worst])) {
      sx.points[worst] = contracted;
      sx.values[worst] = fc;
      continue;
    }
    for (std::size_t i = 0; i <= d; ++i) {
      if (i == best) continue;
      for (std::size_t j = 0; j < d; ++j) sx.points[i][j] = sx.points[best][j] + 0.5 * (sx.points[i][j] - sx.points[best][j]);
      sx.values[i] = f(sx.points[i]);
    }
  }
  const auto it = std::min_element(sx.values.begin(), sx.values.end());
  best_value = *it;
  return sx.points[static_cast<std::size_t>(it - sx.values.begin())];
}

// Nonincreasing compositions of `total` into `parts` parts with at most one zero.
void partitions(int total, int parts, int cap, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (parts == 0) {
    if (total == 0) {
      int zeros = static_cast<int>(std::count(cur.begin(), cur.end(), 0));
      if (zeros <= 1) out.push_back(cur);
    }
    return;
  }
  for (int v = std::min(total, cap); v >= 0; --v) {
    if (v * parts < total) break;
    cur.push_back(v);
    partitions(total - v, parts - 1, v, cur, out);
    cur.pop_back();
  }
}

std::mutex cache_mutex;
std::map<std::pair<int, int>, CofN> cache;

CofN compute_c_of_n(int n, const OptimizerSettings& s) {
  CofN out;
  out.n = n;
  // F is symmetric in the coefficients, so the grid runs over sorted ones.
  std::vector<std::vector<int>> grid;
  std::vector<int> cur;
  partitions(s.grid_resolution, n, s.grid_resolution, cur, grid);
  std::vector<double> values(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) {
    std::vector<double> c(grid[i].begin(), grid[i].end());
    values[i] = objective(c);
  });
  out.evaluations = static_cast<long long>(grid.size());
  std::vector<std::size_t> order(grid.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  out.grid_value = values[order.front()];

  double best = kInf;
  std::vector<double> best_c;
  int total_iterations = 0;
  const std::size_t starts = std::min<std::size_t>(static_cast<std::size_t>(std::max(1, s.restarts)), order.size());
  for (std::size_t r = 0; r < starts; ++r) {
    const auto& g = grid[order[r]];
    // Zero grid coefficients start just inside the Case I region.
    std::vector<double> u(static_cast<std::size_t>(n - 1));
    for (int i = 1; i < n; ++i) {
      double ci = std::max(static_cast<double>(g[static_cast<std::size_t>(i)]), 0.05);
      u[static_cast<std::size_t>(i - 1)] = std::log(ci / g[0]);
    }
    double value = kInf;
    for (int pass = 0; pass < 2; ++pass) {
      int iterations = 0;
      u = nelder_mead(u, s, out.evaluations, value, iterations);
      total_iterations += iterations;
    }
    if (value < best) {
      best = value;
      best_c.assign(static_cast<std::size_t>(n), 1.0);
      for (int i = 1; i < n; ++i) best_c[static_cast<std::size_t>(i)] = std::exp(u[static_cast<std::size_t>(i - 1)]);
    }
  }
  if (out.grid_value < best) {
    best = out.grid_value;
    const auto& g = grid[order.front()];
    best_c.assign(g.begin(), g.end());
  }
  const double sum = std::accumulate(best_c.begin(), best_c.end(), 0.0);
  for (double& v : best_c) v /= sum;
  std::sort(best_c.begin(), best_c.end(), std::greater<>());
  out.value = best;
  out.coefficients = best_c;
  out.equal_coefficient_value = objective(std::vector<double>(static_cast<std::size_t>(n), 1.0));
  ++out.evaluations;

  std::ostringstream trace;
  trace << "grid 1/" << s.grid_resolution << " over " << grid.size() << " sorted coefficient vectors (best "
        << out.grid_value << "); Nelder-Mead in log coordinates from " << starts << " starts, " << total_iterations
        << " iterations, tolerance " << s.tolerance;
  out.trace = trace.str();

  const double lo = (n - 1) / 2.0;
  const double hi = n - 1.0;
  if (!(out.value >= lo - 1e-6 && out.value <= hi + 1e-6)) {
    std::ostringstream msg;
    msg << "C(" << n << ") = " << out.value << " outside [" << lo << ", " << hi << "]";
    throw Error(ErrorKind::BoundViolation, msg.str());
  }
  return out;
}

}  // namespace

double slow_objective(const std::vector<double>& c) {
  if (c.size() < 3) throw Error(ErrorKind::InvalidInput, "need at least 3 coefficients");
  double v = objective(c);
  if (!std::isfinite(v)) throw Error(ErrorKind::NotANorm, "coefficients do not define a norm");
  return v;
}

CofN c_of_n(int n, const OptimizerSettings& settings) {
  if (n < 3 || n > 12) throw Error(ErrorKind::InvalidInput, "C(n) is computed for 3 <= n <= 12");
  if (settings.grid_resolution < 1 || !(settings.tolerance > 0.0)) {
    throw Error(ErrorKind::InvalidInput, "invalid optimizer settings");
  }
  const bool cacheable = settings.tolerance == OptimizerSettings{}.tolerance &&
                         settings.max_iterations == OptimizerSettings{}.max_iterations &&
                         settings.restarts == OptimizerSettings{}.restarts;
  const auto key = std::make_pair(n, settings.grid_resolution);
  if (cacheable) {
    std::lock_guard<std::mutex> lock(cache_mutex);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  CofN out = compute_c_of_n(n, settings);
  if (cacheable) {
    std::lock_guard<std::mutex> lock(cache_mutex);
    cache.emplace(key, out);
  }
  return out;
}

double corollary_check(double fried, double sh, int k) {
  if (!(fried > 0.0) || !std::isfinite(fried)) throw Error(ErrorKind::InvalidInput, "h* must be positive");
  if (k < 2) throw Error(ErrorKind::InvalidInput, "k must be at least 2");
  const double kk = static_cast<double>(k);
  const double c = sh / (std::pow(binomial(2 * k, k), 1.0 / kk) * std::pow(fried, 1.0 / kk));
  const double expected = c_of_n(k + 1).value / 2.0;
  if (std::abs(c - expected) > 1e-9 * std::max(1.0, expected)) {
    std::ostringstream msg;
    msg << "c(" << k << ") = " << c << " but C(" << k + 1 << ")/2 = " << expected;
    throw Error(ErrorKind::IdentityViolation, msg.str());
  }
  if (c < kk / 4.0 - 1e-6 || c > kk / 2.0 + 1e-6) {
    std::ostringstream msg;
    msg << "c(" << k << ") = " << c << " outside [" << kk / 4.0 << ", " << kk / 2.0 << "]";
    throw Error(ErrorKind::IdentityViolation, msg.str());
  }
  return c;
}

SlowReport slow_entropy(const Eigen::MatrixXd& x) {
  SlowReport rep;
  rep.n = static_cast<int>(x.rows());
  rep.lower_bound = (rep.n - 1) / 2.0;
  rep.upper_bound = rep.n - 1.0;
  if (classify(x) == ActionCase::O) {
    rep.case_p = false;
    return rep;
  }
  if (rep.n < 3) throw Error(ErrorKind::InvalidInput, "slow entropy needs rank at least 2");
  rep.regulator = regulator_of_log_matrix(x);
  rep.c = c_of_n(rep.n);
  const int k = rep.n - 1;
  rep.sh = rep.c.value * std::pow(rep.regulator, 1.0 / k);
  rep.corollary_c = corollary_check(fried_average_entropy(x), rep.sh, k);
  return rep;
}

}  // namespace cartan
