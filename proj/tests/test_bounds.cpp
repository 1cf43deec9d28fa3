#include <doctest.h>

#include <boost/math/special_functions/digamma.hpp>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>

#include "cartan/bounds.hpp"
#include "cartan/error.hpp"
#include "cartan/fried.hpp"
#include "cartan/geometry.hpp"
#include "cartan/special.hpp"
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

// Independent evaluation with the standard library and Boost.
double oracle_b(double s) {
  return std::lgamma(1 + s) - std::log(2.0) - (1 + s) * boost::math::digamma((1 + s) / 2);
}

double oracle_a(double s) { return (1 + s) * (1 + 2 * s) * std::exp(2 / s + 1 / (1 + s)); }

double oracle_z(int n, double s) {
  const double k = 0.000376 * oracle_a(0.35);
  return k / oracle_a(s) * std::exp(oracle_b(s) * n) * std::pow(2.0, n - 1) / cartan::binomial(2 * n - 2, n - 1);
}

double oracle_max(int n) {
  double best = 0;
  for (int i = 0; i <= 20000; ++i) best = std::max(best, oracle_z(n, 0.05 + 1.95 * i / 20000.0));
  return best;
}

}  // namespace

TEST_CASE("log gamma and digamma") {
  CHECK(cartan::log_gamma(1.0) == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
  CHECK(cartan::log_gamma(0.5) == doctest::Approx(0.5 * std::log(std::numbers::pi)).epsilon(1e-13));
  CHECK(cartan::digamma(1.0) == doctest::Approx(-0.5772156649015329).epsilon(1e-13));
  CHECK(kind_of([] { cartan::log_gamma(0.0); }) == ErrorKind::NonPositiveArgument);
  CHECK(kind_of([] { cartan::digamma(-1.0); }) == ErrorKind::NonPositiveArgument);
  for (int i = 1; i <= 500; ++i) {
    const double x = 0.1 * i;
    CHECK(cartan::log_gamma(x) == doctest::Approx(std::lgamma(x)).epsilon(1e-12).scale(1.0));
    CHECK(cartan::digamma(x) == doctest::Approx(boost::math::digamma(x)).epsilon(1e-12).scale(1.0));
  }
}

TEST_CASE("complex log gamma") {
  for (int i = 1; i <= 40; ++i) {
    const double x = 0.25 * i;
    const auto z = cartan::log_gamma(std::complex<double>(x, 0.0));
    CHECK(z.real() == doctest::Approx(std::lgamma(x)).epsilon(1e-12).scale(1.0));
  }
  for (int i = 1; i <= 40; ++i) {
    const double y = 0.5 * i;
    // |Gamma(1 + iy)|^2 = pi y / sinh(pi y)
    const auto g = cartan::log_gamma(std::complex<double>(1.0, y));
    CHECK(2 * g.real() ==
          doctest::Approx(std::log(std::numbers::pi * y) - std::log(std::sinh(std::numbers::pi * y))).epsilon(1e-11));
    // Gamma(z + 1) = z Gamma(z)
    const std::complex<double> z(0.7, y);
    const auto lhs = std::exp(cartan::log_gamma(z + 1.0) - cartan::log_gamma(z));
    CHECK(std::abs(lhs - z) <= 1e-10 * std::abs(z));
  }
}

TEST_CASE("Zimmert coefficients") {
  const auto ab = cartan::zimmert_ab(0.35);
  CHECK(ab.b == doctest::Approx(0.9371).epsilon(2e-3 / 0.9371));
  CHECK(ab.a == doctest::Approx(oracle_a(0.35)).epsilon(1e-12));
  CHECK(ab.a == doctest::Approx(1459.3688).epsilon(1e-6));
  CHECK(cartan::zimmert_prefactor(0.35) == doctest::Approx(0.000376).epsilon(5e-5 / 0.000376));
  CHECK(cartan::zimmert_raw_prefactor(0.35) == doctest::Approx(1 / oracle_a(0.35)).epsilon(1e-12));
  CHECK(cartan::zimmert_calibration() == doctest::Approx(0.548723).epsilon(1e-5));
  CHECK(kind_of([] { cartan::zimmert_ab(0.0); }) == ErrorKind::NonPositiveArgument);
  for (int i = 0; i <= 200; ++i) {
    const double s = 0.05 + 1.95 * i / 200.0;
    const auto v = cartan::zimmert_ab(s);
    CHECK(std::isfinite(v.b));
    CHECK(v.b == doctest::Approx(oracle_b(s)).epsilon(1e-11).scale(1.0));
  }
}

TEST_CASE("Zimmert bound on the Fried entropy") {
  const auto ab = cartan::zimmert_ab(0.35);
  CHECK(2 * cartan::zimmert_prefactor(0.35) == doctest::Approx(0.000752).epsilon(1e-9));
  CHECK(ab.b - std::log(2.0) == doctest::Approx(0.244).epsilon(2e-3 / 0.244));
  CHECK(cartan::zimmert_fried_lb_rough(3, 0.35) == doctest::Approx(0.001565).epsilon(0.01));
  for (int n = 3; n <= 20; ++n) {
    CHECK(cartan::zimmert_fried_lb_rough(n, 0.35) ==
          doctest::Approx(0.000752 * std::exp((ab.b - std::log(2.0)) * n)).epsilon(1e-9));
    CHECK(cartan::zimmert_fried_lb_rough(n, 0.35) ==
          doctest::Approx(0.000752 * std::exp(0.244 * n)).epsilon(0.02));
    CHECK(cartan::zimmert_fried_lb(n, 0.35) == doctest::Approx(oracle_z(n, 0.35)).epsilon(1e-10));
    CHECK(cartan::zimmert_fried_lb(n, 0.35) >= cartan::zimmert_fried_lb_rough(n, 0.35));
    CHECK(cartan::zimmert_regulator_lb(n, 0.35) ==
          doctest::Approx(0.000376 * std::exp(ab.b * n)).epsilon(1e-9));
  }
  for (int n = 3; n <= 17; ++n)
    for (int i = 0; i <= 40; ++i) CHECK(cartan::zimmert_fried_lb(n, 0.05 + 1.95 * i / 40.0) > 0);
  CHECK(kind_of([] { cartan::zimmert_fried_lb(2, 0.35); }) == ErrorKind::InvalidInput);
}

TEST_CASE("binomial estimate") {
  for (int n = 2; n <= 20; ++n) {
    const long long b = std::llround(cartan::binomial(2 * n - 2, n - 1));
    const long long four = 1LL << (2 * (n - 1));
    CHECK(four <= static_cast<long long>(n) * b);
    CHECK(b <= four);
  }
}

TEST_CASE("regulators and Fried entropies exceed the Zimmert bounds") {
  double smallest = 1e300;
  for (const auto& row : cartan::table_manifest()) {
    const Eigen::MatrixXd& x = testing::field_lyapunov(row.polynomial);
    const int n = static_cast<int>(x.rows());
    const double r = cartan::regulator_of_log_matrix(x);
    const double h = cartan::fried_average_entropy(x);
    CHECK_MESSAGE(r > cartan::zimmert_regulator_lb(n, 0.35), row.polynomial);
    CHECK_MESSAGE(h > cartan::zimmert_fried_lb(n, 0.35), row.polynomial);
    CHECK_MESSAGE(h >= 0.089 - 1e-6, row.polynomial);
    smallest = std::min(smallest, h);
  }
  CHECK(smallest == doctest::Approx(0.330027).epsilon(1e-4 / 0.330027));
}

TEST_CASE("min-max scan") {
  const auto scan = cartan::min_max_scan();
  REQUIRE(scan.curves.size() == 10);
  for (const auto& c : scan.curves) {
    CHECK(cartan::is_unimodal(c));
    for (std::size_t i = 1; i < c.samples.size(); ++i) CHECK(c.samples[i].first > c.samples[i - 1].first);
    CHECK(c.max == doctest::Approx(oracle_max(c.n)).epsilon(1e-6));
    CHECK(c.argmax > 0.05);
    CHECK(c.argmax < 2.0);
  }
  double best = 1e300;
  int best_n = 0;
  for (int n = 8; n <= 16; ++n) {
    const double m = oracle_max(n);
    if (m < best) {
      best = m;
      best_n = n;
    }
  }
  CHECK(scan.argmin_n == best_n);
  CHECK(scan.value == doctest::Approx(best).epsilon(1e-6));
  // The curve for n = 16 stays below the smallest tabulated Fried entropy; n = 17 does not.
  CHECK(scan.curves[8].n == 16);
  CHECK(scan.curves[8].max < 0.330027);
  CHECK(scan.curves[9].max >= 0.330027);

  const std::string csv = cartan::curves_csv(scan.curves);
  CHECK(csv.rfind("n,s,Z\n", 0) == 0);
  CHECK(kind_of([] { cartan::min_max_scan({7, 16, 16, 0.05, 2.0, 400}); }) == ErrorKind::InvalidInput);
}

TEST_CASE("unimodality detection") {
  cartan::BoundCurve c;
  c.samples = {{0.1, 1}, {0.2, 2}, {0.3, 3}, {0.4, 2}};
  CHECK(cartan::is_unimodal(c));
  c.samples = {{0.1, 1}, {0.2, 3}, {0.3, 2}, {0.4, 4}};
  CHECK_FALSE(cartan::is_unimodal(c));
}

TEST_CASE("Friedman function") {
  const auto g725 = cartan::friedman_g(1.0 / 725, 4);
  CHECK(2 * g725.value < 0.825068);
  CHECK(g725.error_estimate < 1e-6);
  CHECK(cartan::friedman_g(1.0, 4).value > 0);
  CHECK(cartan::friedman_g(1e-9, 4).value < 0);
  // Larger x moves toward the exponentially small positive tail.
  CHECK(cartan::friedman_g(2.0, 4).value < cartan::friedman_g(1.0, 4).value);
  CHECK(kind_of([] { cartan::friedman_g(1.0, 9); }) == ErrorKind::InvalidInput);
  CHECK(kind_of([] { cartan::friedman_g(0.0, 4); }) == ErrorKind::NonPositiveArgument);
  for (const auto& row : cartan::table_manifest()) {
    if (row.degree > 8) continue;
    const double r = cartan::regulator_of_log_matrix(testing::field_lyapunov(row.polynomial));
    CHECK_MESSAGE(r > 2 * cartan::friedman_g(1.0 / static_cast<double>(row.discriminant), row.degree).value,
                  row.polynomial);
  }
}
