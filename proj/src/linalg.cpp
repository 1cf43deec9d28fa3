#include "cartan/linalg.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <utility>

#include "cartan/error.hpp"

namespace cartan {

BigMatrix BigMatrix::identity(int n) {
  BigMatrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

BigMatrix BigMatrix::operator*(const BigMatrix& other) const {
  if (cols_ != other.rows_) throw Error(ErrorKind::InvalidInput, "matrix product shape mismatch");
  BigMatrix out(rows_, other.cols_);
  for (int i = 0; i < rows_; ++i)
    for (int k = 0; k < cols_; ++k) {
      const BigInt& a = (*this)(i, k);
      if (a == 0) continue;
      for (int j = 0; j < other.cols_; ++j) out(i, j) += a * other(k, j);
    }
  return out;
}

BigMatrix BigMatrix::operator+(const BigMatrix& other) const {
  BigMatrix out = *this;
  for (size_t i = 0; i < data_.size(); ++i) out.data_[i] += other.data_[i];
  return out;
}

BigMatrix BigMatrix::operator-(const BigMatrix& other) const {
  BigMatrix out = *this;
  for (size_t i = 0; i < data_.size(); ++i) out.data_[i] -= other.data_[i];
  return out;
}

Eigen::MatrixXd BigMatrix::to_double() const {
  Eigen::MatrixXd out(rows_, cols_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) out(i, j) = (*this)(i, j).convert_to<double>();
  return out;
}

long long to_int64_checked(const BigInt& v) {
  if (v > std::numeric_limits<long long>::max() || v < std::numeric_limits<long long>::min())
    throw Error(ErrorKind::NumericalFailure, "integer does not fit in 64 bits");
  return v.convert_to<long long>();
}

std::vector<std::vector<long long>> BigMatrix::to_int64() const {
  std::vector<std::vector<long long>> out(rows_, std::vector<long long>(cols_));
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) out[i][j] = to_int64_checked((*this)(i, j));
  return out;
}

BigMatrix BigMatrix::from_int64(const std::vector<std::vector<long long>>& rows) {
  const int r = static_cast<int>(rows.size());
  const int c = r == 0 ? 0 : static_cast<int>(rows.front().size());
  BigMatrix m(r, c);
  for (int i = 0; i < r; ++i) {
    if (static_cast<int>(rows[i].size()) != c) throw Error(ErrorKind::InvalidInput, "ragged matrix");
    for (int j = 0; j < c; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

BigInt determinant(const BigMatrix& input) {
  if (!input.is_square()) throw Error(ErrorKind::InvalidInput, "determinant of non-square matrix");
  const int n = input.rows();
  if (n == 0) return 1;
  BigMatrix a = input;
  BigInt prev = 1;
  int sign = 1;
  for (int k = 0; k < n - 1; ++k) {
    if (a(k, k) == 0) {
      int swap = -1;
      for (int i = k + 1; i < n; ++i)
        if (a(i, k) != 0) {
          swap = i;
          break;
        }
      if (swap < 0) return 0;
      for (int j = 0; j < n; ++j) std::swap(a(k, j), a(swap, j));
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i)
      for (int j = k + 1; j < n; ++j) a(i, j) = (a(i, j) * a(k, k) - a(i, k) * a(k, j)) / prev;
    prev = a(k, k);
  }
  return sign * a(n - 1, n - 1);
}

std::vector<BigInt> characteristic_polynomial(const BigMatrix& a) {
  if (!a.is_square()) throw Error(ErrorKind::InvalidInput, "characteristic polynomial of non-square matrix");
  const int n = a.rows();
  if (n == 0) return {1};
  // Coefficients highest degree first during the recurrence.
  std::vector<BigInt> poly{1, -a(0, 0)};
  for (int r = 1; r < n; ++r) {
    std::vector<BigInt> q(r + 2);
    q[0] = 1;
    q[1] = -a(r, r);
    // v = C, then repeatedly v = S v; q[k] = -R v
    std::vector<BigInt> v(r);
    for (int i = 0; i < r; ++i) v[i] = a(i, r);
    for (int k = 2; k < r + 2; ++k) {
      BigInt dot = 0;
      for (int i = 0; i < r; ++i) dot += a(r, i) * v[i];
      q[k] = -dot;
      if (k + 1 < r + 2) {
        std::vector<BigInt> next(r);
        for (int i = 0; i < r; ++i)
          for (int j = 0; j < r; ++j) next[i] += a(i, j) * v[j];
        v = std::move(next);
      }
    }
    std::vector<BigInt> next(r + 2);
    for (int i = 0; i < r + 2; ++i)
      for (int j = 0; j <= std::min(i, r); ++j) next[i] += q[i - j] * poly[j];
    poly = std::move(next);
  }
  return {poly.rbegin(), poly.rend()};
}

namespace {

std::int64_t mulmod(std::int64_t a, std::int64_t b, std::int64_t m) {
  return static_cast<std::int64_t>((static_cast<__int128>(a) * b) % m);
}

std::int64_t normmod(std::int64_t a, std::int64_t m) {
  a %= m;
  return a < 0 ? a + m : a;
}

}  // namespace

std::vector<std::int64_t> characteristic_polynomial_mod(const std::vector<std::int64_t>& a, int n,
                                                        std::int64_t m) {
  auto at = [&](int i, int j) { return normmod(a[static_cast<size_t>(i) * n + j], m); };
  if (n == 0) return {1 % m};
  std::vector<std::int64_t> poly{1 % m, normmod(-at(0, 0), m)};
  for (int r = 1; r < n; ++r) {
    std::vector<std::int64_t> q(r + 2, 0);
    q[0] = 1 % m;
    q[1] = normmod(-at(r, r), m);
    std::vector<std::int64_t> v(r);
    for (int i = 0; i < r; ++i) v[i] = at(i, r);
    for (int k = 2; k < r + 2; ++k) {
      std::int64_t dot = 0;
      for (int i = 0; i < r; ++i) dot = (dot + mulmod(at(r, i), v[i], m)) % m;
      q[k] = normmod(-dot, m);
      if (k + 1 < r + 2) {
        std::vector<std::int64_t> next(r, 0);
        for (int i = 0; i < r; ++i)
          for (int j = 0; j < r; ++j) next[i] = (next[i] + mulmod(at(i, j), v[j], m)) % m;
        v = std::move(next);
      }
    }
    std::vector<std::int64_t> next(r + 2, 0);
    for (int i = 0; i < r + 2; ++i)
      for (int j = 0; j <= std::min(i, r); ++j) next[i] = (next[i] + mulmod(q[i - j], poly[j], m)) % m;
    poly = std::move(next);
  }
  return {poly.rbegin(), poly.rend()};
}

namespace {

// g = gcd(a, b) >= 0 with x*a + y*b == g.
void extended_gcd(const BigInt& a, const BigInt& b, BigInt& g, BigInt& x, BigInt& y) {
  BigInt old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
  while (r != 0) {
    BigInt q = old_r / r;
    BigInt tmp = old_r - q * r;
    old_r = r;
    r = tmp;
    tmp = old_s - q * s;
    old_s = s;
    s = tmp;
    tmp = old_t - q * t;
    old_t = t;
    t = tmp;
  }
  if (old_r < 0) {
    old_r = -old_r;
    old_s = -old_s;
    old_t = -old_t;
  }
  g = old_r;
  x = old_s;
  y = old_t;
}

BigInt floor_div(const BigInt& a, const BigInt& b) {
  BigInt q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) q -= 1;
  return q;
}

}  // namespace

HermiteResult hermite_normal_form(const BigMatrix& m) {
  const int rows = m.rows();
  const int cols = m.cols();
  BigMatrix h = m;
  BigMatrix u = BigMatrix::identity(rows);
  auto combine = [&](BigMatrix& mat, int r1, int r2, const BigInt& a, const BigInt& b, const BigInt& c,
                     const BigInt& d) {
    // (row r1, row r2) <- (a*r1 + b*r2, c*r1 + d*r2)
    for (int j = 0; j < mat.cols(); ++j) {
      BigInt x = mat(r1, j), y = mat(r2, j);
      mat(r1, j) = a * x + b * y;
      mat(r2, j) = c * x + d * y;
    }
  };
  int row = 0;
  for (int col = 0; col < cols && row < rows; ++col) {
    for (int i = row + 1; i < rows; ++i) {
      if (h(i, col) == 0) continue;
      BigInt g, x, y;
      extended_gcd(h(row, col), h(i, col), g, x, y);
      BigInt a = h(row, col) / g, b = h(i, col) / g;
      combine(h, row, i, x, y, -b, a);
      combine(u, row, i, x, y, -b, a);
    }
    if (h(row, col) == 0) continue;
    if (h(row, col) < 0) {
      for (int j = 0; j < cols; ++j) h(row, j) = -h(row, j);
      for (int j = 0; j < rows; ++j) u(row, j) = -u(row, j);
    }
    for (int i = 0; i < row; ++i) {
      BigInt q = floor_div(h(i, col), h(row, col));
      if (q == 0) continue;
      for (int j = 0; j < cols; ++j) h(i, j) -= q * h(row, j);
      for (int j = 0; j < rows; ++j) u(i, j) -= q * u(row, j);
    }
    ++row;
  }
  return {std::move(h), std::move(u), row};
}

std::vector<std::vector<std::int64_t>> kernel_mod_p(const BigMatrix& m, std::int64_t p) {
  const int rows = m.rows();
  const int cols = m.cols();
  std::vector<std::vector<std::int64_t>> a(rows, std::vector<std::int64_t>(cols));
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) {
      BigInt r = m(i, j) % p;
      if (r < 0) r += p;
      a[i][j] = r.convert_to<std::int64_t>();
    }
  auto inverse = [p](std::int64_t v) {
    // Fermat is not available for composite p; use extended Euclid.
    std::int64_t t = 0, nt = 1, r = p, nr = v;
    while (nr != 0) {
      std::int64_t q = r / nr;
      std::tie(t, nt) = std::make_pair(nt, t - q * nt);
      std::tie(r, nr) = std::make_pair(nr, r - q * nr);
    }
    if (r != 1) throw Error(ErrorKind::NumericalFailure, "modulus is not prime");
    return t < 0 ? t + p : t;
  };
  std::vector<int> pivot_col;
  int row = 0;
  for (int col = 0; col < cols && row < rows; ++col) {
    int sel = -1;
    for (int i = row; i < rows; ++i)
      if (a[i][col] != 0) {
        sel = i;
        break;
      }
    if (sel < 0) continue;
    std::swap(a[row], a[sel]);
    std::int64_t inv = inverse(a[row][col]);
    for (int j = 0; j < cols; ++j) a[row][j] = mulmod(a[row][j], inv, p);
    for (int i = 0; i < rows; ++i) {
      if (i == row || a[i][col] == 0) continue;
      std::int64_t f = a[i][col];
      for (int j = 0; j < cols; ++j) a[i][j] = normmod(a[i][j] - mulmod(f, a[row][j], p), p);
    }
    pivot_col.push_back(col);
    ++row;
  }
  std::vector<bool> is_pivot(cols, false);
  for (int c : pivot_col) is_pivot[c] = true;
  std::vector<std::vector<std::int64_t>> basis;
  for (int free = 0; free < cols; ++free) {
    if (is_pivot[free]) continue;
    std::vector<std::int64_t> v(cols, 0);
    v[free] = 1;
    for (size_t r = 0; r < pivot_col.size(); ++r) v[pivot_col[r]] = normmod(-a[r][free], p);
    basis.push_back(std::move(v));
  }
  return basis;
}

namespace {

struct DoubleDouble {
  double hi = 0.0;
  double lo = 0.0;
};

DoubleDouble two_sum(double a, double b) {
  double s = a + b;
  double bb = s - a;
  double err = (a - (s - bb)) + (b - bb);
  return {s, err};
}

DoubleDouble dd_add(DoubleDouble a, DoubleDouble b) {
  DoubleDouble s = two_sum(a.hi, b.hi);
  s.lo += a.lo + b.lo;
  return two_sum(s.hi, s.lo);
}

DoubleDouble dd_mul(DoubleDouble a, DoubleDouble b) {
  double p = a.hi * b.hi;
  double err = std::fma(a.hi, b.hi, -p);
  err += a.hi * b.lo + a.lo * b.hi;
  return two_sum(p, err);
}

DoubleDouble dd_div(DoubleDouble a, DoubleDouble b) {
  double q1 = a.hi / b.hi;
  DoubleDouble r = dd_add(a, dd_mul({-q1, 0.0}, b));
  double q2 = r.hi / b.hi;
  return two_sum(q1, q2);
}

}  // namespace

double compensated_determinant(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw Error(ErrorKind::InvalidInput, "determinant of non-square matrix");
  const int n = static_cast<int>(m.rows());
  std::vector<std::vector<DoubleDouble>> a(n, std::vector<DoubleDouble>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a[i][j] = {m(i, j), 0.0};
  DoubleDouble det{1.0, 0.0};
  for (int k = 0; k < n; ++k) {
    int piv = k;
    for (int i = k + 1; i < n; ++i)
      if (std::abs(a[i][k].hi) > std::abs(a[piv][k].hi)) piv = i;
    if (a[piv][k].hi == 0.0) return 0.0;
    if (piv != k) {
      std::swap(a[piv], a[k]);
      det.hi = -det.hi;
      det.lo = -det.lo;
    }
    det = dd_mul(det, a[k][k]);
    for (int i = k + 1; i < n; ++i) {
      DoubleDouble f = dd_div(a[i][k], a[k][k]);
      DoubleDouble neg_f{-f.hi, -f.lo};
      for (int j = k + 1; j < n; ++j) a[i][j] = dd_add(a[i][j], dd_mul(neg_f, a[k][j]));
    }
  }
  return det.hi + det.lo;
}

std::pair<long long, long long> rational_approximation(double x, long long max_denominator) {
  long long p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  double r = x;
  for (int iter = 0; iter < 64; ++iter) {
    double a_d = std::floor(r);
    if (std::abs(a_d) > 1e15) break;
    auto a = static_cast<long long>(a_d);
    long long p2 = a * p1 + p0;
    long long q2 = a * q1 + q0;
    if (q2 > max_denominator) break;
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
    double frac = r - a_d;
    if (frac < 1e-12) break;
    r = 1.0 / frac;
  }
  if (q1 == 0) return {static_cast<long long>(std::llround(x)), 1};
  return {p1, q1};
}

BigInt big_pow(const BigInt& base, unsigned exponent) {
  BigInt result = 1, b = base;
  while (exponent > 0) {
    if (exponent & 1U) result *= b;
    b *= b;
    exponent >>= 1U;
  }
  return result;
}

BigInt round_to_big(long double x) {
  long double r = std::round(x);
  if (std::abs(r) < 9.0e18L) return BigInt(static_cast<long long>(r));
  // Large magnitudes: split into high and low parts.
  long double scale = 4294967296.0L;
  long double hi = std::floor(r / scale);
  long double lo = r - hi * scale;
  return round_to_big(hi) * BigInt(4294967296LL) + BigInt(static_cast<long long>(lo));
}

}  // namespace cartan
