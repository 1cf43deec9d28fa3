#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_int.hpp>

namespace cartan {

using BigInt = boost::multiprecision::cpp_int;

/// Dense row-major matrix of exact integers.
class BigMatrix {
 public:
  BigMatrix() = default;
  BigMatrix(int rows, int cols) : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows) * cols) {}

  static BigMatrix identity(int n);

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  BigInt& operator()(int r, int c) { return data_[static_cast<size_t>(r) * cols_ + c]; }
  const BigInt& operator()(int r, int c) const { return data_[static_cast<size_t>(r) * cols_ + c]; }

  BigMatrix operator*(const BigMatrix& other) const;
  BigMatrix operator+(const BigMatrix& other) const;
  BigMatrix operator-(const BigMatrix& other) const;
  bool operator==(const BigMatrix& other) const = default;

  bool is_square() const { return rows_ == cols_; }
  Eigen::MatrixXd to_double() const;
  /// Throws NonIntegerEntry-free overflow check: every entry must fit in int64.
  std::vector<std::vector<long long>> to_int64() const;
  static BigMatrix from_int64(const std::vector<std::vector<long long>>& rows);

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<BigInt> data_;
};

/// Exact determinant by fraction-free (Bareiss) elimination.
BigInt determinant(const BigMatrix& m);

/// Characteristic polynomial det(tI - M), constant term first, via the
/// division-free Berkowitz algorithm.
std::vector<BigInt> characteristic_polynomial(const BigMatrix& m);

/// Same, with all arithmetic reduced modulo `modulus` (results in [0, modulus)).
std::vector<std::int64_t> characteristic_polynomial_mod(const std::vector<std::int64_t>& m, int n,
                                                        std::int64_t modulus);

struct HermiteResult {
  BigMatrix h;          // row-style Hermite normal form, zero rows last
  BigMatrix transform;  // unimodular, transform * input == h
  int rank = 0;
};

/// Row Hermite normal form. Pivots are positive and move left to right, entries
/// above a pivot are reduced into [0, pivot).
HermiteResult hermite_normal_form(const BigMatrix& m);

/// Basis of the kernel of {x : m x == 0 (mod p)}; vectors have entries in [0, p).
std::vector<std::vector<std::int64_t>> kernel_mod_p(const BigMatrix& m, std::int64_t p);

/// Determinant in double-double arithmetic (two-term compensated accumulation).
double compensated_determinant(const Eigen::MatrixXd& m);

/// Best rational approximation p/q with q <= max_denominator (continued fractions).
std::pair<long long, long long> rational_approximation(double x, long long max_denominator);

/// Integer power with exact arithmetic.
BigInt big_pow(const BigInt& base, unsigned exponent);

/// Rounds to nearest integer for doubles that are known to be integral up to noise.
BigInt round_to_big(long double x);

long long to_int64_checked(const BigInt& v);

}  // namespace cartan
