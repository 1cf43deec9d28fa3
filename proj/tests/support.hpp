#pragma once

// Shared fixtures and hand-rolled generators for the property tests.

#include <cstdint>
#include <map>
#include <mutex>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cartan/cartan.hpp"
#include "cartan/numberfield.hpp"
#include "cartan/polynomial.hpp"

namespace testing {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  long long integer(long long lo, long long hi) { return std::uniform_int_distribution<long long>(lo, hi)(rng_); }
  double real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(rng_); }

  Eigen::MatrixXd gaussian(int rows, int cols) {
    Eigen::MatrixXd m(rows, cols);
    for (int r = 0; r < rows; ++r)
      for (int c = 0; c < cols; ++c) m(r, c) = normal();
    return m;
  }

  // n x (n-1) with zero column sums, like a Lyapunov matrix.
  Eigen::MatrixXd lyapunov_like(int n) {
    Eigen::MatrixXd m = gaussian(n, n - 1);
    for (int c = 0; c < n - 1; ++c) m.col(c).array() -= m.col(c).mean();
    return m;
  }

  // Integer matrix with |det| >= 1.
  Eigen::MatrixXd invertible_integer(int k, int bound) {
    while (true) {
      Eigen::MatrixXd m(k, k);
      for (int r = 0; r < k; ++r)
        for (int c = 0; c < k; ++c) m(r, c) = static_cast<double>(integer(-bound, bound));
      if (std::abs(m.determinant()) > 0.5) return m;
    }
  }

  // Unimodular integer matrix as a product of elementary moves.
  Eigen::MatrixXd unimodular(int k, int moves) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Identity(k, k);
    for (int i = 0; i < moves; ++i) {
      int a = static_cast<int>(integer(0, k - 1));
      int b = static_cast<int>(integer(0, k - 1));
      if (a == b) continue;
      m.row(a) += static_cast<double>(integer(-1, 1)) * m.row(b);
    }
    return m;
  }

  std::vector<long long> integer_vector(int k, long long bound) {
    std::vector<long long> v(static_cast<std::size_t>(k));
    for (auto& x : v) x = integer(-bound, bound);
    return v;
  }

 private:
  std::mt19937_64 rng_;
};

// Lyapunov matrix of the unit action of a field, computed once per polynomial.
inline const Eigen::MatrixXd& field_lyapunov(const std::string& poly) {
  static std::mutex mutex;
  static std::map<std::string, Eigen::MatrixXd> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(poly);
  if (it != cache.end()) return it->second;
  const auto f = cartan::IntPolynomial::parse(poly);
  const auto field = cartan::NumberField::create(f);
  const auto us = cartan::fundamental_system(field, cartan::search_units(field, cartan::default_unit_bound(f.degree())));
  return cache.emplace(poly, us.log_matrix).first->second;
}

inline const char* const kCubic49 = "x^3-x^2-2x+1";
inline const char* const kCubic81 = "x^3-3x-1";
inline const char* const kQuartic725 = "x^4-x^3-3x^2+x+1";
inline const char* const kQuartic1125 = "x^4-x^3-4x^2+4x+1";
inline const char* const kQuintic14641 = "x^5-x^4-4x^3+3x^2+3x-1";
inline const char* const kSextic300125 = "x^6-x^5-7x^4+2x^3+7x^2-2x-1";

}  // namespace testing
