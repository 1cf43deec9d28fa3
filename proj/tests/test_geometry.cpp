#include <doctest.h>

#include <cmath>
#include <functional>
#include <numbers>

#include "cartan/error.hpp"
#include "cartan/geometry.hpp"
#include "support.hpp"

using cartan::ErrorKind;
using cartan::HPolytope;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const cartan::Error& e) {
    return e.kind();
  }
  FAIL("no error raised");
  return ErrorKind::InvalidInput;
}

HPolytope box(int k, double half) {
  HPolytope p;
  p.dimension = k;
  p.normals = Eigen::MatrixXd::Zero(2 * k, k);
  p.offsets = Eigen::VectorXd::Constant(2 * k, half);
  for (int i = 0; i < k; ++i) {
    p.normals(2 * i, i) = 1;
    p.normals(2 * i + 1, i) = -1;
  }
  return p;
}

HPolytope cross_polytope(int k) {
  HPolytope p;
  p.dimension = k;
  p.normals = Eigen::MatrixXd(1 << k, k);
  p.offsets = Eigen::VectorXd::Ones(1 << k);
  for (int code = 0; code < (1 << k); ++code)
    for (int i = 0; i < k; ++i) p.normals(code, i) = (code >> i) & 1 ? 1.0 : -1.0;
  return p;
}

double exact_volume(const HPolytope& p) {
  return cartan::polytope_volume(cartan::vertex_enumeration(p), p.dimension, &p).value;
}

bool inside(const HPolytope& p, const Eigen::VectorXd& x) { return ((p.normals * x - p.offsets).array() <= 0).all(); }

}  // namespace

TEST_CASE("entropy ball H-representations") {
  Eigen::MatrixXd line(2, 1);
  line << 1, -1;
  const auto seg = cartan::hrep_abs_sum(line, 1.0);
  const auto v = cartan::vertex_enumeration(seg);
  REQUIRE(v.size() == 2);
  CHECK(std::min(v[0](0), v[1](0)) == doctest::Approx(-1));
  CHECK(std::max(v[0](0), v[1](0)) == doctest::Approx(1));

  const Eigen::MatrixXd& x = testing::field_lyapunov(testing::kCubic49);
  const auto hex = cartan::hrep_abs_sum(x, 1.0);
  CHECK(cartan::vertex_enumeration(hex).size() == 6);
  CHECK(cartan::abs_sum_vertices(x, 1.0).size() == 6);
  CHECK(exact_volume(hex) == doctest::Approx(6 / (0.525454 * 2)).epsilon(1e-5));

  Eigen::MatrixXd doubled(4, 2);
  doubled << x.row(0), x.row(1), x.row(2), x.row(2);
  Eigen::MatrixXd single(3, 2);
  single << x.row(0), x.row(1), 2 * x.row(2);
  // Two copies of a functional count like the functional doubled.
  CHECK(exact_volume(cartan::hrep_abs_sum(doubled, 1.0)) ==
        doctest::Approx(exact_volume(cartan::hrep_abs_sum(single, 1.0))).epsilon(1e-10));
  Eigen::MatrixXd twice = x;
  twice *= 2;
  CHECK(exact_volume(cartan::hrep_abs_sum(twice, 1.0)) == doctest::Approx(exact_volume(hex) / 4).epsilon(1e-10));

  Eigen::MatrixXd deficient(3, 2);
  deficient << 1, 2, 2, 4, -1, -2;
  CHECK(kind_of([&] { cartan::hrep_abs_sum(deficient, 1.0); }) == ErrorKind::SpanDeficient);
}

TEST_CASE("vertex enumeration") {
  CHECK(cartan::vertex_enumeration(box(2, 1)).size() == 4);
  CHECK(cartan::vertex_enumeration(box(3, 1)).size() == 8);

  HPolytope half;
  half.dimension = 2;
  half.normals = Eigen::MatrixXd(3, 2);
  half.normals << 1, 0, 0, 1, -1, 0;
  half.offsets = Eigen::VectorXd::Ones(3);
  CHECK(kind_of([&] { cartan::vertex_enumeration(half); }) == ErrorKind::Unbounded);
  CHECK(kind_of([] { cartan::vertex_enumeration(box(6, 1)); }) == ErrorKind::DimensionTooLarge);
}

TEST_CASE("cube cut by a slab has the brute-force vertex set") {
  testing::Gen gen(51);
  for (int trial = 0; trial < 20; ++trial) {
    HPolytope p = box(3, 1);
    const Eigen::Vector3d a(gen.normal(), gen.normal(), gen.normal());
    const double b = gen.real(0.2, 1.0);
    p.normals.conservativeResize(8, 3);
    p.offsets.conservativeResize(8);
    p.normals.row(6) = a.transpose();
    p.normals.row(7) = -a.transpose();
    p.offsets(6) = b;
    p.offsets(7) = b;
    std::vector<Eigen::VectorXd> brute;
    for (int i = 0; i < 8; ++i)
      for (int j = i + 1; j < 8; ++j)
        for (int l = j + 1; l < 8; ++l) {
          Eigen::Matrix3d m;
          m << p.normals.row(i), p.normals.row(j), p.normals.row(l);
          if (std::abs(m.determinant()) < 1e-12) continue;
          const Eigen::VectorXd x = m.inverse() * Eigen::Vector3d(p.offsets(i), p.offsets(j), p.offsets(l));
          if (((p.normals * x - p.offsets).array() > 1e-9).any()) continue;
          bool dup = false;
          for (const auto& y : brute) dup = dup || (x - y).norm() < 1e-9;
          if (!dup) brute.push_back(x);
        }
    const auto v = cartan::vertex_enumeration(p);
    CHECK(v.size() == brute.size());
    for (const auto& x : v) {
      bool found = false;
      for (const auto& y : brute) found = found || (x - y).norm() < 1e-8;
      CHECK(found);
    }
  }
}

TEST_CASE("exact volumes") {
  CHECK(exact_volume(box(3, 1)) == doctest::Approx(8.0).epsilon(1e-12));
  for (int k = 1; k <= 5; ++k) {
    const double expected = std::pow(2.0, k) / cartan::factorial(k);
    CHECK(exact_volume(cross_polytope(k)) == doctest::Approx(expected).epsilon(1e-10));
    // Facets reconstructed from the vertices alone.
    CHECK(cartan::polytope_volume(cartan::vertex_enumeration(cross_polytope(k)), k).value ==
          doctest::Approx(expected).epsilon(1e-10));
  }
}

TEST_CASE("volume scales with the k-th power") {
  testing::Gen gen(52);
  for (int k = 2; k <= 4; ++k) {
    const Eigen::MatrixXd x = gen.lyapunov_like(k + 1);
    const double r = gen.real(0.3, 3.0);
    const double v1 = exact_volume(cartan::hrep_abs_sum(x, 1.0));
    CHECK(exact_volume(cartan::hrep_abs_sum(x, r)) == doctest::Approx(std::pow(r, k) * v1).epsilon(1e-10));
  }
}

TEST_CASE("Monte Carlo volumes") {
  const Eigen::VectorXd lo = Eigen::VectorXd::Constant(2, -1), hi = Eigen::VectorXd::Constant(2, 1);
  const auto disk = cartan::mc_volume([](const Eigen::VectorXd& x) { return x.squaredNorm() <= 1; }, lo, hi,
                                      1000000, 7);
  CHECK(std::abs(disk.value - std::numbers::pi) < 0.005);
  CHECK(disk.method == cartan::VolumeMethod::MonteCarlo);
  CHECK(disk.samples == 1000000);
  CHECK(disk.half_width > 0);
  CHECK(cartan::mc_volume([](const Eigen::VectorXd&) { return false; }, lo, hi, 10000, 7).value == 0.0);

  auto pred = [](const Eigen::VectorXd& x) { return x.lpNorm<1>() <= 1; };
  setenv("CARTAN_ENTROPY_THREADS", "1", 1);
  const auto a = cartan::mc_volume(pred, lo, hi, 200000, 99);
  setenv("CARTAN_ENTROPY_THREADS", "3", 1);
  const auto b = cartan::mc_volume(pred, lo, hi, 200000, 99);
  unsetenv("CARTAN_ENTROPY_THREADS");
  CHECK(a.value == b.value);
}

TEST_CASE("entropy ball of the 725 quartic matches the closed form") {
  const Eigen::MatrixXd& x = testing::field_lyapunov(testing::kQuartic725);
  const auto p = cartan::hrep_abs_sum(x, 1.0);
  const auto [lo, hi] = cartan::bounding_box(p);
  const auto mc = cartan::mc_volume([&](const Eigen::VectorXd& t) { return inside(p, t); }, lo, hi, 1000000, 3);
  const double closed = 20.0 / (0.825068 * 6.0);
  CHECK(std::abs(mc.value - closed) <= 3 * mc.half_width);
  CHECK(exact_volume(p) == doctest::Approx(closed).epsilon(1e-5));
}

TEST_CASE("exact and Monte Carlo volumes agree on random polytopes") {
  testing::Gen gen(53);
  for (int trial = 0; trial < 50; ++trial) {
    const int k = static_cast<int>(gen.integer(2, 4));
    const int m = static_cast<int>(gen.integer(k + 1, k + 6));
    HPolytope p;
    p.dimension = k;
    p.normals = gen.gaussian(m, k);
    p.offsets = Eigen::VectorXd(m);
    for (int i = 0; i < m; ++i) p.offsets(i) = gen.real(0.2, 1.5);
    // Keep it bounded.
    HPolytope b = box(k, 2);
    p.normals.conservativeResize(m + 2 * k, k);
    p.offsets.conservativeResize(m + 2 * k);
    p.normals.bottomRows(2 * k) = b.normals;
    p.offsets.tail(2 * k) = b.offsets;
    const double exact = exact_volume(p);
    const auto [lo, hi] = cartan::bounding_box(p);
    const auto mc = cartan::mc_volume([&](const Eigen::VectorXd& t) { return inside(p, t); }, lo, hi, 200000,
                                      static_cast<std::uint64_t>(trial) + 1);
    CHECK(std::abs(mc.value - exact) <= 3 * mc.half_width + 1e-12);
  }
}

TEST_CASE("box-slab volumes") {
  CHECK(cartan::box_slab_volume({0.1, 0.1}) == doctest::Approx(4.0));
  CHECK(cartan::box_slab_volume({1.0, 1.0}) == doctest::Approx(3.0));
  CHECK(cartan::box_slab_volume({1.0}) == doctest::Approx(2.0));
  CHECK(cartan::box_slab_volume({0.0, 0.5}) == doctest::Approx(4.0));
  testing::Gen gen(54);
  for (int trial = 0; trial < 30; ++trial) {
    const int m = static_cast<int>(gen.integer(1, 6));
    std::vector<double> a(static_cast<std::size_t>(m));
    for (auto& v : a) v = gen.real(-2, 2);
    const double vol = cartan::box_slab_volume(a);
    auto b = a;
    std::reverse(b.begin(), b.end());
    b[0] = -b[0];
    CHECK(cartan::box_slab_volume(b) == doctest::Approx(vol).epsilon(1e-10));
    double s = 0;
    for (double v : a) s += std::abs(v);
    std::vector<double> small = a;
    for (auto& v : small) v /= (s + 0.1);
    CHECK(cartan::box_slab_volume(small) == doctest::Approx(std::pow(2.0, m)).epsilon(1e-10));
  }
  for (int trial = 0; trial < 10; ++trial) {
    const int m = static_cast<int>(gen.integer(2, 4));
    Eigen::VectorXd a(m);
    for (int i = 0; i < m; ++i) a(i) = gen.real(-1.5, 1.5);
    const auto mc = cartan::mc_volume([&](const Eigen::VectorXd& x) { return std::abs(a.dot(x)) <= 1; },
                                      Eigen::VectorXd::Constant(m, -1), Eigen::VectorXd::Constant(m, 1), 400000,
                                      static_cast<std::uint64_t>(trial) + 100);
    std::vector<double> av(a.data(), a.data() + m);
    CHECK(std::abs(mc.value - cartan::box_slab_volume(av)) <= 3 * mc.half_width + 1e-12);
  }
}

TEST_CASE("sum-zero slice volumes") {
  CHECK(cartan::l1_slice_volume(3) == doctest::Approx(3 * std::sqrt(3.0)));
  CHECK(cartan::l1_slice_volume(2) == doctest::Approx(2 * std::sqrt(2.0)));
  CHECK(cartan::l1_slice_volume(4) == doctest::Approx(20.0 / 3.0));
  CHECK(cartan::binomial(6, 3) == 20);
  CHECK(cartan::factorial(5) == 120);
}

TEST_CASE("exact volume transforms with the determinant under integer maps") {
  testing::Gen gen(55);
  for (const char* poly : {testing::kQuartic725, testing::kQuintic14641}) {
    const Eigen::MatrixXd& x = testing::field_lyapunov(poly);
    const int k = static_cast<int>(x.cols());
    const double base = exact_volume(cartan::hrep_abs_sum(x, 1.0));
    for (int trial = 0; trial < 20; ++trial) {
      const Eigen::MatrixXd v = gen.invertible_integer(k, 2);
      const Eigen::MatrixXd y = x * v;
      const double vol = cartan::polytope_volume(cartan::abs_sum_vertices(y, 1.0), k, nullptr).value;
      CHECK(vol == doctest::Approx(base / std::abs(v.determinant())).epsilon(1e-8));
    }
  }
}
