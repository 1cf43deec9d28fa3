#pragma once

#include <complex>
#include <initializer_list>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cartan/linalg.hpp"

namespace cartan {

/// Polynomial with exact integer coefficients, constant term first.
/// The zero polynomial has degree -1.
class IntPolynomial {
 public:
  IntPolynomial() = default;
  explicit IntPolynomial(std::vector<BigInt> coefficients);
  IntPolynomial(std::initializer_list<long long> coefficients);

  /// Accepts "x^4 - x^3 - 3*x^2 + x + 1", "3x^2-2" and "[1,1,-3,-1,1]".
  static IntPolynomial parse(std::string_view text);
  static IntPolynomial monomial(int degree, const BigInt& coefficient = 1);

  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }
  bool is_monic() const { return !coeffs_.empty() && coeffs_.back() == 1; }
  const std::vector<BigInt>& coefficients() const { return coeffs_; }
  BigInt coefficient(int i) const;
  const BigInt& leading() const;
  BigInt max_abs_coefficient() const;
  BigInt content() const;

  std::string to_string() const;
  std::string to_coefficient_list() const;

  IntPolynomial derivative() const;
  IntPolynomial operator+(const IntPolynomial& other) const;
  IntPolynomial operator-(const IntPolynomial& other) const;
  IntPolynomial operator*(const IntPolynomial& other) const;
  IntPolynomial operator*(const BigInt& scalar) const;
  IntPolynomial operator-() const;
  bool operator==(const IntPolynomial& other) const = default;

  BigInt evaluate(const BigInt& x) const;
  long double evaluate(long double x) const;
  std::complex<long double> evaluate(std::complex<long double> x) const;

 private:
  void normalize();
  std::vector<BigInt> coeffs_;
};

/// lc(b)^(deg a - deg b + 1) * a mod b, computed without division.
IntPolynomial pseudo_remainder(const IntPolynomial& a, const IntPolynomial& b);

IntPolynomial primitive_part(const IntPolynomial& p);

/// Primitive gcd over Z[x] (positive leading coefficient).
IntPolynomial polynomial_gcd(const IntPolynomial& a, const IntPolynomial& b);

/// Quotient a / b when b divides a in Z[x], otherwise nullopt.
std::optional<IntPolynomial> exact_divide(const IntPolynomial& a, const IntPolynomial& b);

/// Resultant via the Sylvester matrix and fraction-free elimination.
BigInt resultant(const IntPolynomial& a, const IntPolynomial& b);

/// (-1)^(n(n-1)/2) Res(f, f') / lc(f).
BigInt discriminant(const IntPolynomial& f);

bool is_squarefree(const IntPolynomial& f);

/// Number of distinct real roots, by a Sturm sequence.
int count_real_roots(const IntPolynomial& f);

/// All complex roots with multiplicity, polished by Newton in extended precision.
std::vector<std::complex<long double>> complex_roots(const IntPolynomial& f);

/// True iff the monic polynomial f has no monic integer factor of degree 1..n/2.
bool is_irreducible(const IntPolynomial& f);

/// Cauchy bound on the absolute value of every complex root.
long double root_bound(const IntPolynomial& f);

}  // namespace cartan
