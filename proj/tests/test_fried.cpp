#include <doctest.h>

#include <cmath>
#include <functional>

#include "cartan/bounds.hpp"
#include "cartan/cartan.hpp"
#include "cartan/error.hpp"
#include "cartan/fried.hpp"
#include "cartan/tables.hpp"
#include "support.hpp"

using cartan::ErrorKind;

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

const double kC = 0.5 * std::log((1 + std::sqrt(5.0)) / 2);

Eigen::MatrixXd golden_x() {
  Eigen::MatrixXd g(2, 1);
  g << -std::log((3 + std::sqrt(5.0)) / 2), std::log((3 + std::sqrt(5.0)) / 2);
  return g;
}

Eigen::MatrixXd block_diagonal(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(a.rows() + b.rows(), a.cols() + b.cols());
  out.topLeftCorner(a.rows(), a.cols()) = a;
  out.bottomRightCorner(b.rows(), b.cols()) = b;
  return out;
}

}  // namespace

TEST_CASE("Fried entropy from a ball volume") {
  CHECK(cartan::fried_from_volume(1, 2.0) == doctest::Approx(1.0));
  CHECK(cartan::fried_from_volume(2, 2.0) == doctest::Approx(1.0));
  CHECK(cartan::fried_from_volume(3, 8.0 / 6.0) == doctest::Approx(1.0));
  CHECK(kind_of([] { cartan::fried_from_volume(2, 0.0); }) == ErrorKind::InvalidInput);
  CHECK(cartan::golden_entropy_constant() == doctest::Approx(0.240606).epsilon(1e-6));
}

TEST_CASE("entropy ball volumes") {
  const auto v49 = cartan::entropy_ball_volume(testing::field_lyapunov(testing::kCubic49));
  CHECK(v49.closed_form == doctest::Approx(6 / (0.525454 * 2)).epsilon(1e-5));
  CHECK(v49.geometric.value == doctest::Approx(v49.closed_form).epsilon(0.01));
  const auto v725 = cartan::entropy_ball_volume(testing::field_lyapunov(testing::kQuartic725));
  CHECK(v725.closed_form == doctest::Approx(20 / (0.825068 * 6)).epsilon(1e-5));
  CHECK(v725.geometric.value == doctest::Approx(v725.closed_form).epsilon(1e-8));

  Eigen::MatrixXd degenerate(3, 2);
  degenerate << 1, 2, -2, -4, 1, 2;
  CHECK(kind_of([&] { cartan::entropy_ball_volume(degenerate); }) == ErrorKind::CaseO);
  CHECK(cartan::fried_average_entropy(degenerate) == 0.0);
}

TEST_CASE("Fried entropy of reference fields") {
  CHECK(cartan::fried_average_entropy(testing::field_lyapunov(testing::kQuartic725)) ==
        doctest::Approx(0.330027).epsilon(1e-4 / 0.330027));
  CHECK(cartan::fried_average_entropy(testing::field_lyapunov(testing::kCubic49)) ==
        doctest::Approx(0.350303).epsilon(1e-4 / 0.350303));
  CHECK(cartan::fried_average_entropy(testing::field_lyapunov(testing::kQuintic14641)) ==
        doctest::Approx(0.373873).epsilon(1e-4 / 0.373873));
  CHECK(cartan::fried_average_entropy(golden_x()) == doctest::Approx(std::log((3 + std::sqrt(5.0)) / 2)));
}

TEST_CASE("closed form agrees with the definitional volume") {
  for (const char* poly : {testing::kCubic49, testing::kCubic81, testing::kQuartic725, testing::kQuartic1125,
                           testing::kQuintic14641}) {
    const Eigen::MatrixXd& x = testing::field_lyapunov(poly);
    const double closed = cartan::fried_average_entropy(x);
    CHECK(cartan::fried_definitional(x) == doctest::Approx(closed).epsilon(1e-8));
    const auto mc = cartan::entropy_norm_ball_volume(x, {1000000, 17}, true);
    const double vol = cartan::entropy_ball_volume(x).closed_form;
    CHECK(std::abs(mc.value - vol) <= 3 * mc.half_width);
  }
}

TEST_CASE("Fried entropy exceeds the Zimmert bound for every reference field") {
  for (const auto& row : cartan::table_manifest()) {
    const Eigen::MatrixXd& x = testing::field_lyapunov(row.polynomial);
    const int n = static_cast<int>(x.rows());
    CHECK_MESSAGE(cartan::fried_average_entropy(x) > cartan::zimmert_fried_lb(n, 0.35), row.polynomial);
  }
}

TEST_CASE("1-entropy") {
  const auto o49 = cartan::one_entropy(testing::field_lyapunov(testing::kCubic49));
  CHECK(o49.value >= 3 * kC - 1e-9);
  // Attained at a generator of the unit group up to sign.
  int nonzero = 0;
  for (long long v : o49.minimizer) nonzero += v != 0;
  CHECK(nonzero >= 1);
  CHECK(cartan::one_entropy(golden_x()).value == doctest::Approx(std::log((3 + std::sqrt(5.0)) / 2)));

  for (const auto& row : cartan::table_manifest()) {
    const Eigen::MatrixXd& x = testing::field_lyapunov(row.polynomial);
    const auto o = cartan::one_entropy(x);
    CHECK_MESSAGE(o.value >= kC * static_cast<double>(x.rows()) - 1e-9, row.polynomial);
    CHECK(cartan::entropy_of_element(x, o.minimizer) == doctest::Approx(o.value).epsilon(1e-12));
  }
}

TEST_CASE("1-entropy is certified against a wider brute-force box") {
  const Eigen::MatrixXd& x = testing::field_lyapunov(testing::kQuartic725);
  const double value = cartan::one_entropy(x).value;
  double best = 1e300;
  for (long long a = -6; a <= 6; ++a)
    for (long long b = -6; b <= 6; ++b)
      for (long long c = -6; c <= 6; ++c) {
        if (a == 0 && b == 0 && c == 0) continue;
        best = std::min(best, cartan::entropy_of_element(x, std::vector<long long>{a, b, c}));
      }
  CHECK(value == doctest::Approx(best).epsilon(1e-12));
}

TEST_CASE("1-entropy is invariant under a change of generators") {
  testing::Gen gen(61);
  for (const char* poly : {testing::kCubic49, testing::kQuartic725, testing::kQuartic1125}) {
    const Eigen::MatrixXd& x = testing::field_lyapunov(poly);
    const double base = cartan::one_entropy(x).value;
    for (int trial = 0; trial < 5; ++trial) {
      const Eigen::MatrixXd u = gen.unimodular(static_cast<int>(x.cols()), 6);
      CHECK(cartan::one_entropy(x * u).value == doctest::Approx(base).epsilon(1e-10));
    }
  }
}

TEST_CASE("l-entropy search") {
  const Eigen::MatrixXd& x = testing::field_lyapunov(testing::kQuartic725);
  const auto full = cartan::l_entropy_search(x, 3, 2);
  CHECK(full.upper_estimate == doctest::Approx(cartan::fried_average_entropy(x)).epsilon(1e-8));
  const auto one = cartan::l_entropy_search(x, 1, 3);
  CHECK(std::abs(one.upper_estimate - cartan::one_entropy(x).value) <= 1e-9);
  const auto two = cartan::l_entropy_search(x, 2, 2);
  CHECK(two.upper_estimate >= two.lower_bound);
  CHECK(two.sublattices > 0);
  CHECK(two.best.size() == 2);
  CHECK(cartan::l_entropy_lower_bound(4, 2) == doctest::Approx(kC * kC * 16 / 2).epsilon(1e-12));
  CHECK(cartan::l_entropy_lower_bound(4, 2) == doctest::Approx(0.4631).epsilon(1e-3));
  CHECK(kind_of([&] { cartan::l_entropy_search(x, 4, 2); }) == ErrorKind::InvalidInput);
}

TEST_CASE("l-entropy budget lowers the basis bound") {
  const Eigen::MatrixXd& x = testing::field_lyapunov(testing::kQuintic14641);
  const auto r = cartan::l_entropy_search(x, 2, 6, 20000);
  CHECK(r.basis_bound < 6);
  CHECK(r.sublattices <= 20000);
}

TEST_CASE("exponential growth bound") {
  const double direct = 0.3 * std::log(kC) - 0.3 * std::log(0.3) + 0.3;
  CHECK(cartan::exp_growth_exponent(0.3) == doctest::Approx(direct).epsilon(1e-12));
  CHECK(cartan::exp_growth_exponent(0.3) == doctest::Approx(0.233812).epsilon(1e-5));
  CHECK(kind_of([] { cartan::exp_growth_exponent(std::exp(1.0) * 0.5 * std::log((1 + std::sqrt(5.0)) / 2)); }) ==
        ErrorKind::RatioOutOfRange);
  CHECK(kind_of([] { cartan::exp_growth_exponent(0.0); }) == ErrorKind::RatioOutOfRange);
  CHECK(cartan::exp_growth_exponent(0.1) > 0);
  CHECK(cartan::exp_growth_bound(10, 3) == doctest::Approx(cartan::exp_growth_exponent(0.3)).epsilon(1e-12));
}

TEST_CASE("Fried entropy scales with the index of a sublattice") {
  testing::Gen gen(62);
  for (const char* poly : {testing::kCubic49, testing::kQuartic725, testing::kQuintic14641}) {
    const Eigen::MatrixXd& x = testing::field_lyapunov(poly);
    const int k = static_cast<int>(x.cols());
    const double base = cartan::fried_average_entropy(x);
    for (int trial = 0; trial < 6; ++trial) {
      Eigen::MatrixXd v;
      long long index = 0;
      do {
        v = gen.invertible_integer(k, 2);
        index = std::llround(std::abs(v.determinant()));
      } while (index > 6);
      CHECK(cartan::fried_definitional(x * v) == doctest::Approx(static_cast<double>(index) * base).epsilon(1e-6));
    }
  }
}

TEST_CASE("Fried entropy is multiplicative for product actions") {
  const Eigen::MatrixXd& a = testing::field_lyapunov(testing::kCubic49);
  const Eigen::MatrixXd& b = testing::field_lyapunov(testing::kCubic81);
  const double pab = cartan::fried_definitional(block_diagonal(a, b));
  CHECK(pab == doctest::Approx(cartan::fried_average_entropy(a) * cartan::fried_average_entropy(b)).epsilon(1e-6));
  const double pag = cartan::fried_definitional(block_diagonal(a, golden_x()));
  CHECK(pag == doctest::Approx(cartan::fried_average_entropy(a) * cartan::fried_average_entropy(golden_x()))
                   .epsilon(1e-6));
}
