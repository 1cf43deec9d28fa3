#include "cartan/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>

#include "cartan/error.hpp"
#include "cartan/lp.hpp"
#include "cartan/parallel.hpp"

namespace cartan {

std::string to_string(VolumeMethod m) { return m == VolumeMethod::Exact ? "exact" : "montecarlo"; }

double factorial(int n) {
  double r = 1;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  double r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return std::round(r);
}

namespace {

int numeric_rank(const Eigen::MatrixXd& m, double tol) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  int r = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > tol) ++r;
  return r;
}

void push_unique(std::vector<Eigen::VectorXd>& out, const Eigen::VectorXd& v, double tol) {
  for (const auto& w : out)
    if ((w - v).cwiseAbs().maxCoeff() <= tol) return;
  out.push_back(v);
}

}  // namespace

HPolytope hrep_abs_sum(const Eigen::MatrixXd& xi, double r) {
  const int n = static_cast<int>(xi.rows());
  const int k = static_cast<int>(xi.cols());
  if (n == 0 || numeric_rank(xi, 1e-12 * std::max(1.0, xi.cwiseAbs().maxCoeff())) < k)
    throw Error(ErrorKind::SpanDeficient, "functionals do not span the space");
  if (n > 20) throw Error(ErrorKind::DimensionTooLarge, "too many functionals for the sign-vector H-rep");
  HPolytope p;
  p.dimension = k;
  const std::uint64_t count = std::uint64_t{1} << n;
  p.normals = Eigen::MatrixXd(static_cast<Eigen::Index>(count), k);
  p.offsets = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(count), 2.0 * r);
  for (std::uint64_t code = 0; code < count; ++code) {
    Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(k);
    for (int j = 0; j < n; ++j) row += ((code >> j) & 1U ? -1.0 : 1.0) * xi.row(j);
    p.normals.row(static_cast<Eigen::Index>(code)) = row;
  }
  return p;
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> bounding_box(const HPolytope& p) {
  const int k = p.dimension;
  Eigen::VectorXd lo(k), hi(k);
  for (int i = 0; i < k; ++i) {
    Eigen::VectorXd c = Eigen::VectorXd::Zero(k);
    c(i) = 1.0;
    LpResult up = maximize(p.normals, p.offsets, c);
    LpResult down = maximize(p.normals, p.offsets, -c);
    if (up.status == LpStatus::Unbounded || down.status == LpStatus::Unbounded)
      throw Error(ErrorKind::Unbounded, "polytope is unbounded");
    hi(i) = up.value;
    lo(i) = -down.value;
  }
  return {lo, hi};
}

std::vector<Eigen::VectorXd> vertex_enumeration(const HPolytope& p) {
  const int k = p.dimension;
  const int m = static_cast<int>(p.normals.rows());
  if (k > 5) throw Error(ErrorKind::DimensionTooLarge, "vertex enumeration supports dimension <= 5");
  if (k < 1) throw Error(ErrorKind::InvalidInput, "dimension must be positive");
  // Recession cone {d : A d <= 0} must be trivial.
  for (int i = 0; i < k; ++i)
    for (double s : {1.0, -1.0}) {
      Eigen::VectorXd c = Eigen::VectorXd::Zero(k);
      c(i) = s;
      LpResult r = maximize(p.normals, Eigen::VectorXd::Zero(m), c);
      if (r.status == LpStatus::Unbounded || r.value > 1e-9) throw Error(ErrorKind::Unbounded, "polytope is unbounded");
    }
  if (binomial(m, k) > 5e7) throw Error(ErrorKind::DimensionTooLarge, "too many constraint subsets");
  const double scale = std::max(1.0, p.offsets.cwiseAbs().maxCoeff());
  std::vector<Eigen::VectorXd> out;
  std::vector<int> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
  if (m < k) return out;
  Eigen::MatrixXd a(k, k);
  Eigen::VectorXd b(k);
  while (true) {
    for (int i = 0; i < k; ++i) {
      a.row(i) = p.normals.row(idx[i]);
      b(i) = p.offsets(idx[i]);
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
    if (lu.rank() == k) {
      Eigen::VectorXd x = lu.solve(b);
      if (((p.normals * x - p.offsets).array() <= 1e-9 * scale).all()) push_unique(out, x, 1e-9 * scale);
    }
    int i = k - 1;
    while (i >= 0 && idx[i] == m - k + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
  std::sort(out.begin(), out.end(), [](const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
    for (int i = 0; i < u.size(); ++i)
      if (u(i) != v(i)) return u(i) < v(i);
    return false;
  });
  return out;
}

std::vector<Eigen::VectorXd> abs_sum_vertices(const Eigen::MatrixXd& xi, double r) {
  const int n = static_cast<int>(xi.rows());
  const int k = static_cast<int>(xi.cols());
  const double tol = 1e-10 * std::max(1.0, xi.cwiseAbs().maxCoeff());
  if (numeric_rank(xi, tol) < k) throw Error(ErrorKind::SpanDeficient, "functionals do not span the space");
  std::vector<Eigen::VectorXd> out;
  auto add_line = [&](const Eigen::VectorXd& d) {
    double h = 0.5 * (xi * d).cwiseAbs().sum();
    Eigen::VectorXd v = d * (r / h);
    push_unique(out, v, 1e-9 * std::max(1.0, v.cwiseAbs().maxCoeff()));
    push_unique(out, -v, 1e-9 * std::max(1.0, v.cwiseAbs().maxCoeff()));
  };
  if (k == 1) {
    add_line(Eigen::VectorXd::Ones(1));
    return out;
  }
  std::vector<int> idx(k - 1);
  for (int i = 0; i < k - 1; ++i) idx[i] = i;
  while (true) {
    Eigen::MatrixXd a(k - 1, k);
    for (int i = 0; i < k - 1; ++i) a.row(i) = xi.row(idx[i]);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
    lu.setThreshold(1e-10);
    if (lu.rank() == k - 1) {
      Eigen::MatrixXd ker = lu.kernel();
      Eigen::VectorXd d = ker.col(0).normalized();
      add_line(d);
    }
    int i = k - 2;
    while (i >= 0 && idx[i] == n - (k - 1) + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j < k - 1; ++j) idx[j] = idx[j - 1] + 1;
  }
  return out;
}

namespace {

struct FaceContext {
  const std::vector<Eigen::VectorXd>& vertices;
  std::vector<std::vector<int>> tight;  // tight[c] = sorted vertex ids tight at constraint c
  double tol;
};

int affine_rank(const FaceContext& ctx, const std::vector<int>& ids) {
  if (ids.size() <= 1) return 0;
  const int k = static_cast<int>(ctx.vertices[0].size());
  Eigen::MatrixXd m(k, static_cast<int>(ids.size()) - 1);
  for (size_t i = 1; i < ids.size(); ++i) m.col(static_cast<int>(i) - 1) = ctx.vertices[ids[i]] - ctx.vertices[ids[0]];
  return numeric_rank(m, ctx.tol);
}

// Volume of the face spanned by `ids` (affine dimension d): cone from its
// centroid over the faces one dimension lower.
double face_volume(const FaceContext& ctx, const std::vector<int>& ids, int d) {
  if (d == 0) return 1.0;
  if (d == 1) {
    double best = 0;
    for (int a : ids)
      for (int b : ids) best = std::max(best, (ctx.vertices[a] - ctx.vertices[b]).norm());
    return best;
  }
  const int k = static_cast<int>(ctx.vertices[0].size());
  Eigen::VectorXd centroid = Eigen::VectorXd::Zero(k);
  for (int id : ids) centroid += ctx.vertices[id];
  centroid /= static_cast<double>(ids.size());
  std::set<std::vector<int>> subfaces;
  for (const auto& t : ctx.tight) {
    std::vector<int> w;
    std::set_intersection(ids.begin(), ids.end(), t.begin(), t.end(), std::back_inserter(w));
    if (w.size() < static_cast<size_t>(d) || w.size() == ids.size()) continue;
    if (subfaces.count(w)) continue;
    if (affine_rank(ctx, w) == d - 1) subfaces.insert(w);
  }
  if (subfaces.empty()) throw Error(ErrorKind::DegenerateFacet, "face without facets");
  double total = 0;
  for (const auto& w : subfaces) {
    Eigen::MatrixXd span(k, static_cast<int>(w.size()) - 1);
    for (size_t i = 1; i < w.size(); ++i) span.col(static_cast<int>(i) - 1) = ctx.vertices[w[i]] - ctx.vertices[w[0]];
    Eigen::VectorXd rel = centroid - ctx.vertices[w[0]];
    // The subface has affine dimension d-1 exactly; projecting with that rank
    // keeps rounding noise in coplanar vertex sets out of the height.
    Eigen::VectorXd proj = Eigen::VectorXd::Zero(k);
    if (d > 1) {
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(span, Eigen::ComputeThinU);
      const Eigen::MatrixXd u = svd.matrixU().leftCols(d - 1);
      proj = u * (u.transpose() * rel);
    }
    double height = (rel - proj).norm();
    total += height * face_volume(ctx, w, d - 1) / d;
  }
  return total;
}

// Facet-defining hyperplanes of the hull of `vertices` by brute force over
// k-subsets (small inputs only).
HPolytope hull_hrep(const std::vector<Eigen::VectorXd>& vertices, int k, double tol) {
  const int nv = static_cast<int>(vertices.size());
  if (binomial(nv, k) > 2e6) throw Error(ErrorKind::DimensionTooLarge, "too many vertices for hull reconstruction");
  std::vector<Eigen::RowVectorXd> normals;
  std::vector<double> offsets;
  std::vector<int> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
  while (nv >= k) {
    Eigen::MatrixXd m(k - 1, k);
    for (int i = 1; i < k; ++i) m.row(i - 1) = (vertices[idx[i]] - vertices[idx[0]]).transpose();
    Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
    lu.setThreshold(1e-10);
    if (k == 1 || lu.rank() == k - 1) {
      Eigen::VectorXd nrm = k == 1 ? Eigen::VectorXd::Ones(1) : Eigen::VectorXd(lu.kernel().col(0).normalized());
      double off = nrm.dot(vertices[idx[0]]);
      bool below = true, above = true;
      for (const auto& v : vertices) {
        double s = nrm.dot(v) - off;
        if (s > tol) below = false;
        if (s < -tol) above = false;
      }
      if (below || above) {
        if (!below) {
          nrm = -nrm;
          off = -off;
        }
        normals.push_back(nrm.transpose());
        offsets.push_back(off);
      }
    }
    int i = k - 1;
    while (i >= 0 && idx[i] == nv - k + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
  HPolytope p;
  p.dimension = k;
  p.normals = Eigen::MatrixXd(static_cast<int>(normals.size()), k);
  p.offsets = Eigen::VectorXd(static_cast<int>(normals.size()));
  for (size_t i = 0; i < normals.size(); ++i) {
    p.normals.row(static_cast<int>(i)) = normals[i];
    p.offsets(static_cast<int>(i)) = offsets[i];
  }
  return p;
}

}  // namespace

VolumeEstimate polytope_volume(const std::vector<Eigen::VectorXd>& vertices, int dimension, const HPolytope* hrep) {
  if (dimension < 1) throw Error(ErrorKind::InvalidInput, "dimension must be positive");
  if (static_cast<int>(vertices.size()) < dimension + 1) throw Error(ErrorKind::DegenerateFacet, "too few vertices");
  double scale = 1.0;
  for (const auto& v : vertices) scale = std::max(scale, v.cwiseAbs().maxCoeff());
  const double tol = 1e-9 * scale;
  HPolytope own;
  if (!hrep) {
    own = hull_hrep(vertices, dimension, tol);
    hrep = &own;
  }
  FaceContext ctx{vertices, {}, tol};
  for (int c = 0; c < hrep->normals.rows(); ++c) {
    double nrm = hrep->normals.row(c).norm();
    if (nrm == 0) continue;
    std::vector<int> t;
    for (int i = 0; i < static_cast<int>(vertices.size()); ++i)
      if (std::abs(hrep->normals.row(c).dot(vertices[i]) - hrep->offsets(c)) <= tol * std::max(1.0, nrm)) t.push_back(i);
    if (!t.empty()) ctx.tight.push_back(std::move(t));
  }
  std::sort(ctx.tight.begin(), ctx.tight.end());
  ctx.tight.erase(std::unique(ctx.tight.begin(), ctx.tight.end()), ctx.tight.end());
  std::vector<int> all(vertices.size());
  for (size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
  if (affine_rank(ctx, all) != dimension) throw Error(ErrorKind::DegenerateFacet, "vertices are not full-dimensional");
  VolumeEstimate est;
  est.value = face_volume(ctx, all, dimension);
  est.method = VolumeMethod::Exact;
  return est;
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace

VolumeEstimate mc_volume(const std::function<bool(const Eigen::VectorXd&)>& inside, const Eigen::VectorXd& lo,
                         const Eigen::VectorXd& hi, std::uint64_t samples, std::uint64_t seed) {
  const int k = static_cast<int>(lo.size());
  double box = 1.0;
  for (int i = 0; i < k; ++i) box *= hi(i) - lo(i);
  VolumeEstimate est;
  est.method = VolumeMethod::MonteCarlo;
  est.samples = samples;
  if (samples == 0 || box <= 0) return est;
  constexpr std::uint64_t kPartitions = 64;
  std::vector<std::uint64_t> hits(kPartitions, 0);
  parallel_for(kPartitions, [&](std::size_t part) {
    std::uint64_t begin = samples * part / kPartitions;
    std::uint64_t end = samples * (part + 1) / kPartitions;
    std::mt19937_64 rng(splitmix64(seed ^ splitmix64(part)));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    Eigen::VectorXd x(k);
    std::uint64_t h = 0;
    for (std::uint64_t s = begin; s < end; ++s) {
      for (int i = 0; i < k; ++i) x(i) = lo(i) + (hi(i) - lo(i)) * unit(rng);
      if (inside(x)) ++h;
    }
    hits[part] = h;
  });
  std::uint64_t total = 0;
  for (auto h : hits) total += h;
  double p = static_cast<double>(total) / static_cast<double>(samples);
  est.value = box * p;
  est.half_width = 2.5758293035489004 * box * std::sqrt(p * (1 - p) / static_cast<double>(samples));
  return est;
}

double box_slab_volume(const std::vector<double>& a) {
  if (a.empty()) throw Error(ErrorKind::InvalidInput, "weight vector must be nonempty");
  std::vector<long double> w;
  int free_dims = 0;
  for (double v : a) {
    if (std::abs(v) < 1e-14)
      ++free_dims;
    else
      w.push_back(std::abs(static_cast<long double>(v)));
  }
  const long double free_factor = std::ldexp(1.0L, free_dims);
  const int m = static_cast<int>(w.size());
  if (m == 0) return static_cast<double>(free_factor);
  if (m > 24) throw Error(ErrorKind::DimensionTooLarge, "slab inclusion-exclusion supports at most 24 weights");
  long double sum = 0;
  for (auto v : w) sum += v;
  const long double full = std::ldexp(1.0L, m);
  if (sum <= 1) return static_cast<double>(free_factor * full);
  // On y = (x+1)/2 in [0,1]^m the slab is (A-1)/2 <= w.y <= (A+1)/2, and by
  // symmetry vol = 1 - 2 P((A-1)/2) with P(s) = vol{w.y <= s}.
  const long double s = (sum - 1) / 2;
  long double prod = 1;
  for (auto v : w) prod *= v;
  long double mfact = 1;
  for (int i = 2; i <= m; ++i) mfact *= i;
  long double acc = 0;
  // Depth-first over subsets, pruning once the subset sum exceeds s.
  std::sort(w.begin(), w.end());
  struct Frame {
    int next;
    long double partial;
    int parity;
  };
  std::vector<Frame> frames{{0, 0.0L, 0}};
  while (!frames.empty()) {
    Frame f = frames.back();
    frames.pop_back();
    long double t = s - f.partial;
    acc += (f.parity ? -1 : 1) * std::pow(t, static_cast<long double>(m));
    for (int i = f.next; i < m; ++i) {
      if (f.partial + w[i] >= s) break;
      frames.push_back({i + 1, f.partial + w[i], f.parity ^ 1});
    }
  }
  long double p = acc / (mfact * prod);
  long double vol = full * (1 - 2 * p);
  vol = std::clamp(vol, 0.0L, full);
  return static_cast<double>(free_factor * vol);
}

double l1_slice_volume(int n) {
  if (n < 2) throw Error(ErrorKind::InvalidInput, "n must be at least 2");
  return std::sqrt(static_cast<double>(n)) * binomial(2 * n - 2, n - 1) / factorial(n - 1);
}

}  // namespace cartan
