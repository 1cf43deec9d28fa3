#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>

#include "cartan/error.hpp"
#include "cartan/polynomial.hpp"
#include "support.hpp"

using cartan::BigInt;
using cartan::ErrorKind;
using cartan::IntPolynomial;

namespace {

// Remainder of f by a monic g, in machine integers.
bool divides_monic(const std::vector<long long>& f, const std::vector<long long>& g) {
  std::vector<long long> r = f;
  const int dg = static_cast<int>(g.size()) - 1;
  for (int i = static_cast<int>(r.size()) - 1; i >= dg; --i) {
    const long long q = r[static_cast<std::size_t>(i)];
    if (q == 0) continue;
    for (int j = 0; j <= dg; ++j) r[static_cast<std::size_t>(i - dg + j)] -= q * g[static_cast<std::size_t>(j)];
  }
  return std::all_of(r.begin(), r.begin() + dg, [](long long v) { return v == 0; });
}

// Monic factors of degree 1 or 2 of a monic quartic or cubic with coefficients in [-3, 3]
// have |g_0| <= B^2 and |g_1| <= 2B for the Cauchy root bound B <= 4.
bool brute_force_irreducible(const std::vector<long long>& f) {
  const int n = static_cast<int>(f.size()) - 1;
  for (long long r = -4; r <= 4; ++r) {
    if (divides_monic(f, {-r, 1})) return false;
  }
  if (n >= 4) {
    for (long long g0 = -16; g0 <= 16; ++g0)
      for (long long g1 = -8; g1 <= 8; ++g1)
        if (divides_monic(f, {g0, g1, 1})) return false;
  }
  return true;
}

std::complex<long double> eval(const IntPolynomial& p, std::complex<long double> z) { return p.evaluate(z); }

}  // namespace

TEST_CASE("parse accepts text and coefficient lists") {
  const auto a = IntPolynomial::parse("x^4 - x^3 - 3*x^2 + x + 1");
  const auto b = IntPolynomial::parse("x^4-x^3-3x^2+x+1");
  const auto c = IntPolynomial::parse("[1,1,-3,-1,1]");
  CHECK(a == b);
  CHECK(a == c);
  CHECK(a.to_string() == "x^4 - x^3 - 3*x^2 + x + 1");
  CHECK(a.to_coefficient_list() == "[1,1,-3,-1,1]");
  CHECK(IntPolynomial::parse("3x^2").coefficient(2) == 3);
  CHECK(IntPolynomial::parse("-x").coefficient(1) == -1);
  CHECK(IntPolynomial::parse(a.to_string()) == a);
}

TEST_CASE("parse rejects malformed text") {
  for (const char* bad : {"", "x^", "x^2 +", "[1,,2]", "y^2", "x^-1", "2**x"}) {
    try {
      IntPolynomial::parse(bad);
      FAIL("accepted " << bad);
    } catch (const cartan::Error& e) {
      CHECK(e.kind() == ErrorKind::ParseError);
    }
  }
}

TEST_CASE("discriminants of known polynomials") {
  CHECK(cartan::discriminant(IntPolynomial::parse("x^3-3x-1")) == 81);
  CHECK(cartan::discriminant(IntPolynomial::parse("x^4-x^3-3x^2+x+1")) == 725);
  CHECK(cartan::discriminant(IntPolynomial::parse("x^2-2")) == 8);
  CHECK(cartan::discriminant(IntPolynomial::parse("x^3-x^2-2x+1")) == 49);
  CHECK(cartan::discriminant(IntPolynomial::parse("x^5-x^4-4x^3+3x^2+3x-1")) == 14641);
}

TEST_CASE("discriminant matches the product of squared root differences") {
  testing::Gen gen(11);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = static_cast<int>(gen.integer(2, 6));
    std::vector<BigInt> c;
    for (int i = 0; i < n; ++i) c.emplace_back(gen.integer(-5, 5));
    c.emplace_back(1);
    const IntPolynomial f(c);
    const auto roots = cartan::complex_roots(f);
    std::complex<long double> prod = 1;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) prod *= (roots[i] - roots[j]) * (roots[i] - roots[j]);
    const double expected = static_cast<double>(cartan::discriminant(f));
    CHECK(static_cast<double>(prod.real()) == doctest::Approx(expected).epsilon(1e-6).scale(1.0));
  }
}

TEST_CASE("resultant equals the product of g over the roots of f") {
  testing::Gen gen(12);
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<BigInt> fc, gc;
    const int n = static_cast<int>(gen.integer(1, 5));
    const int m = static_cast<int>(gen.integer(0, 4));
    for (int i = 0; i < n; ++i) fc.emplace_back(gen.integer(-4, 4));
    fc.emplace_back(1);
    for (int i = 0; i <= m; ++i) gc.emplace_back(gen.integer(-4, 4));
    const IntPolynomial f(fc), g(gc);
    if (g.is_zero()) continue;
    std::complex<long double> prod = 1;
    for (const auto& r : cartan::complex_roots(f)) prod *= eval(g, r);
    CHECK(static_cast<double>(prod.real()) ==
          doctest::Approx(static_cast<double>(cartan::resultant(f, g))).epsilon(1e-6).scale(1.0));
  }
}

TEST_CASE("irreducibility examples") {
  CHECK_FALSE(cartan::is_irreducible(IntPolynomial::parse("x^3-x^2-x+1")));
  CHECK(cartan::is_irreducible(IntPolynomial::parse("x^3-x^2-2x+1")));
  CHECK(cartan::is_irreducible(IntPolynomial::parse("x^2-2")));
  CHECK_FALSE(cartan::is_irreducible(IntPolynomial::parse("x^4-2x^3-x^2+2x+1")));  // (x^2-x-1)^2
  CHECK_FALSE(cartan::is_irreducible(IntPolynomial::parse("x^4+4")));              // Sophie Germain
  CHECK(cartan::is_irreducible(IntPolynomial::parse("x^6-x^5-7x^4+2x^3+7x^2-2x-1")));
}

TEST_CASE("irreducibility agrees with brute-force factor search for small quartics and cubics") {
  long long checked = 0;
  for (int n = 2; n <= 4; ++n) {
    std::vector<long long> c(static_cast<std::size_t>(n), -3);
    while (true) {
      std::vector<long long> f = c;
      f.push_back(1);
      std::vector<BigInt> big(f.begin(), f.end());
      REQUIRE_MESSAGE(cartan::is_irreducible(IntPolynomial(big)) == brute_force_irreducible(f),
                      IntPolynomial(big).to_string());
      ++checked;
      std::size_t i = 0;
      while (i < c.size() && c[i] == 3) c[i++] = -3;
      if (i == c.size()) break;
      ++c[i];
    }
  }
  CHECK(checked == 49 + 343 + 2401);
}

TEST_CASE("irreducibility input limits") {
  CHECK_THROWS_AS(cartan::is_irreducible(IntPolynomial::monomial(17) + IntPolynomial{1}), cartan::Error);
  try {
    cartan::is_irreducible(IntPolynomial::parse("2x^2-1"));
    FAIL("non-monic accepted");
  } catch (const cartan::Error& e) {
    CHECK(e.kind() == ErrorKind::NotMonic);
  }
}

TEST_CASE("squarefree test and gcd") {
  const auto f = IntPolynomial::parse("x^2-2");
  const auto g = IntPolynomial::parse("x^3-3x-1");
  CHECK(cartan::is_squarefree(f * g));
  CHECK_FALSE(cartan::is_squarefree(f * f * g));
  const auto d = cartan::polynomial_gcd(f * g, f * IntPolynomial::parse("x+5"));
  CHECK(d == f);
  auto q = cartan::exact_divide(f * g, g);
  REQUIRE(q.has_value());
  CHECK(*q == f);
  CHECK_FALSE(cartan::exact_divide(f, g).has_value());
}

TEST_CASE("Sturm count matches the real roots found numerically") {
  testing::Gen gen(13);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = static_cast<int>(gen.integer(1, 6));
    std::vector<BigInt> c;
    for (int i = 0; i < n; ++i) c.emplace_back(gen.integer(-6, 6));
    c.emplace_back(1);
    const IntPolynomial f(c);
    if (!cartan::is_squarefree(f)) continue;
    int real = 0;
    for (const auto& r : cartan::complex_roots(f)) real += std::abs(r.imag()) < 1e-9L;
    CHECK(cartan::count_real_roots(f) == real);
  }
}

TEST_CASE("arithmetic identities") {
  testing::Gen gen(14);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<BigInt> a, b;
    for (int i = 0; i < 4; ++i) a.emplace_back(gen.integer(-9, 9));
    for (int i = 0; i < 3; ++i) b.emplace_back(gen.integer(-9, 9));
    const IntPolynomial p(a), q(b);
    const BigInt x = gen.integer(-5, 5);
    CHECK((p * q).evaluate(x) == p.evaluate(x) * q.evaluate(x));
    CHECK((p + q).evaluate(x) == p.evaluate(x) + q.evaluate(x));
    CHECK((p * q).derivative() == p.derivative() * q + p * q.derivative());
  }
}
