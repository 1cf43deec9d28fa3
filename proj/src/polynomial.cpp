#include "cartan/polynomial.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "cartan/error.hpp"

namespace cartan {

IntPolynomial::IntPolynomial(std::vector<BigInt> coefficients) : coeffs_(std::move(coefficients)) { normalize(); }

IntPolynomial::IntPolynomial(std::initializer_list<long long> coefficients) {
  for (long long c : coefficients) coeffs_.emplace_back(c);
  normalize();
}

void IntPolynomial::normalize() {
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

IntPolynomial IntPolynomial::monomial(int degree, const BigInt& coefficient) {
  std::vector<BigInt> c(static_cast<size_t>(degree) + 1);
  c.back() = coefficient;
  return IntPolynomial(std::move(c));
}

BigInt IntPolynomial::coefficient(int i) const {
  if (i < 0 || i > degree()) return 0;
  return coeffs_[i];
}

const BigInt& IntPolynomial::leading() const {
  if (coeffs_.empty()) throw Error(ErrorKind::InvalidInput, "zero polynomial has no leading coefficient");
  return coeffs_.back();
}

BigInt IntPolynomial::max_abs_coefficient() const {
  BigInt m = 0;
  for (const auto& c : coeffs_) m = std::max(m, BigInt(abs(c)));
  return m;
}

BigInt IntPolynomial::content() const {
  BigInt g = 0;
  for (const auto& c : coeffs_) g = gcd(g, BigInt(abs(c)));
  return g;
}

namespace {

[[noreturn]] void parse_fail(std::string_view text, const std::string& why) {
  throw Error(ErrorKind::ParseError, "cannot parse polynomial '" + std::string(text) + "': " + why);
}

BigInt parse_integer(std::string_view s, std::string_view whole) {
  if (s.empty()) parse_fail(whole, "missing number");
  for (char ch : s)
    if (!std::isdigit(static_cast<unsigned char>(ch))) parse_fail(whole, "bad digit");
  return BigInt(std::string(s));
}

}  // namespace

IntPolynomial IntPolynomial::parse(std::string_view text) {
  std::string s;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) s.push_back(ch);
  if (s.empty()) parse_fail(text, "empty");

  if (s.front() == '[') {
    if (s.back() != ']') parse_fail(text, "unterminated list");
    std::vector<BigInt> coeffs;
    std::string body = s.substr(1, s.size() - 2);
    if (body.empty()) parse_fail(text, "empty list");
    std::stringstream ss(body);
    std::string item;
    while (std::getline(ss, item, ',')) {
      bool neg = false;
      std::string_view v = item;
      if (!v.empty() && (v.front() == '-' || v.front() == '+')) {
        neg = v.front() == '-';
        v.remove_prefix(1);
      }
      BigInt c = parse_integer(v, text);
      coeffs.push_back(neg ? BigInt(-c) : c);
    }
    if (coeffs.empty()) parse_fail(text, "empty list");
    return IntPolynomial(std::move(coeffs));
  }

  std::vector<BigInt> coeffs;
  size_t pos = 0;
  bool any = false;
  while (pos < s.size()) {
    int sign = 1;
    if (s[pos] == '+' || s[pos] == '-') {
      sign = s[pos] == '-' ? -1 : 1;
      ++pos;
    } else if (any) {
      parse_fail(text, "expected '+' or '-'");
    }
    size_t start = pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    BigInt c = 1;
    bool has_number = pos > start;
    if (has_number) c = parse_integer(std::string_view(s).substr(start, pos - start), text);
    int power = 0;
    if (pos < s.size() && s[pos] == '*') {
      if (!has_number) parse_fail(text, "dangling '*'");
      ++pos;
      if (pos >= s.size() || s[pos] != 'x') parse_fail(text, "expected 'x' after '*'");
    }
    if (pos < s.size() && s[pos] == 'x') {
      ++pos;
      power = 1;
      if (pos < s.size() && s[pos] == '^') {
        ++pos;
        size_t ps = pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
        if (pos == ps) parse_fail(text, "missing exponent");
        power = std::stoi(s.substr(ps, pos - ps));
        if (power > 4096) parse_fail(text, "exponent too large");
      }
    } else if (!has_number) {
      parse_fail(text, "expected a term");
    }
    if (static_cast<int>(coeffs.size()) <= power) coeffs.resize(power + 1);
    coeffs[power] += sign * c;
    any = true;
  }
  return IntPolynomial(std::move(coeffs));
}

std::string IntPolynomial::to_string() const {
  if (coeffs_.empty()) return "0";
  std::string out;
  for (int i = degree(); i >= 0; --i) {
    const BigInt& c = coeffs_[i];
    if (c == 0) continue;
    BigInt a = abs(c);
    if (out.empty()) {
      if (c < 0) out += "-";
    } else {
      out += c < 0 ? " - " : " + ";
    }
    bool unit = a == 1 && i > 0;
    if (!unit) out += a.str();
    if (i > 0) {
      if (!unit) out += "*";
      out += "x";
      if (i > 1) out += "^" + std::to_string(i);
    }
  }
  return out;
}

std::string IntPolynomial::to_coefficient_list() const {
  std::string out = "[";
  if (coeffs_.empty()) out += "0";
  for (size_t i = 0; i < coeffs_.size(); ++i) {
    if (i) out += ",";
    out += coeffs_[i].str();
  }
  return out + "]";
}

IntPolynomial IntPolynomial::derivative() const {
  if (coeffs_.size() <= 1) return {};
  std::vector<BigInt> d(coeffs_.size() - 1);
  for (size_t i = 1; i < coeffs_.size(); ++i) d[i - 1] = coeffs_[i] * static_cast<long long>(i);
  return IntPolynomial(std::move(d));
}

IntPolynomial IntPolynomial::operator+(const IntPolynomial& other) const {
  std::vector<BigInt> r(std::max(coeffs_.size(), other.coeffs_.size()));
  for (size_t i = 0; i < coeffs_.size(); ++i) r[i] += coeffs_[i];
  for (size_t i = 0; i < other.coeffs_.size(); ++i) r[i] += other.coeffs_[i];
  return IntPolynomial(std::move(r));
}

IntPolynomial IntPolynomial::operator-() const {
  std::vector<BigInt> r = coeffs_;
  for (auto& c : r) c = -c;
  return IntPolynomial(std::move(r));
}

IntPolynomial IntPolynomial::operator-(const IntPolynomial& other) const { return *this + (-other); }

IntPolynomial IntPolynomial::operator*(const IntPolynomial& other) const {
  if (is_zero() || other.is_zero()) return {};
  std::vector<BigInt> r(coeffs_.size() + other.coeffs_.size() - 1);
  for (size_t i = 0; i < coeffs_.size(); ++i)
    for (size_t j = 0; j < other.coeffs_.size(); ++j) r[i + j] += coeffs_[i] * other.coeffs_[j];
  return IntPolynomial(std::move(r));
}

IntPolynomial IntPolynomial::operator*(const BigInt& scalar) const {
  std::vector<BigInt> r = coeffs_;
  for (auto& c : r) c *= scalar;
  return IntPolynomial(std::move(r));
}

BigInt IntPolynomial::evaluate(const BigInt& x) const {
  BigInt acc = 0;
  for (int i = degree(); i >= 0; --i) acc = acc * x + coeffs_[i];
  return acc;
}

long double IntPolynomial::evaluate(long double x) const {
  long double acc = 0;
  for (int i = degree(); i >= 0; --i) acc = acc * x + coeffs_[i].convert_to<long double>();
  return acc;
}

std::complex<long double> IntPolynomial::evaluate(std::complex<long double> x) const {
  std::complex<long double> acc = 0;
  for (int i = degree(); i >= 0; --i) acc = acc * x + coeffs_[i].convert_to<long double>();
  return acc;
}

IntPolynomial pseudo_remainder(const IntPolynomial& a, const IntPolynomial& b) {
  if (b.is_zero()) throw Error(ErrorKind::InvalidInput, "pseudo-remainder by zero polynomial");
  std::vector<BigInt> r = a.coefficients();
  const int db = b.degree();
  const BigInt& lb = b.leading();
  int da = a.degree();
  if (da < db) return a;
  int steps = da - db + 1;
  while (!r.empty() && static_cast<int>(r.size()) - 1 >= db) {
    int dr = static_cast<int>(r.size()) - 1;
    BigInt lr = r.back();
    for (auto& c : r) c *= lb;
    for (int i = 0; i <= db; ++i) r[dr - db + i] -= lr * b.coefficients()[i];
    --steps;
    while (!r.empty() && r.back() == 0) r.pop_back();
  }
  BigInt scale = big_pow(lb, static_cast<unsigned>(std::max(steps, 0)));
  for (auto& c : r) c *= scale;
  return IntPolynomial(std::move(r));
}

IntPolynomial primitive_part(const IntPolynomial& p) {
  if (p.is_zero()) return p;
  BigInt g = p.content();
  std::vector<BigInt> c = p.coefficients();
  for (auto& v : c) v /= g;
  if (c.back() < 0)
    for (auto& v : c) v = -v;
  return IntPolynomial(std::move(c));
}

IntPolynomial polynomial_gcd(const IntPolynomial& a, const IntPolynomial& b) {
  if (a.is_zero()) return primitive_part(b);
  if (b.is_zero()) return primitive_part(a);
  IntPolynomial x = primitive_part(a), y = primitive_part(b);
  if (x.degree() < y.degree()) std::swap(x, y);
  while (!y.is_zero()) {
    IntPolynomial r = pseudo_remainder(x, y);
    x = y;
    y = primitive_part(r);
  }
  return primitive_part(x);
}

std::optional<IntPolynomial> exact_divide(const IntPolynomial& a, const IntPolynomial& b) {
  if (b.is_zero()) throw Error(ErrorKind::InvalidInput, "division by zero polynomial");
  if (a.is_zero()) return IntPolynomial();
  if (a.degree() < b.degree()) return std::nullopt;
  std::vector<BigInt> r = a.coefficients();
  std::vector<BigInt> q(a.degree() - b.degree() + 1);
  const int db = b.degree();
  for (int k = a.degree() - db; k >= 0; --k) {
    BigInt num = r[k + db];
    if (num % b.leading() != 0) return std::nullopt;
    BigInt c = num / b.leading();
    q[k] = c;
    for (int i = 0; i <= db; ++i) r[k + i] -= c * b.coefficients()[i];
  }
  for (const auto& v : r)
    if (v != 0) return std::nullopt;
  return IntPolynomial(std::move(q));
}

BigInt resultant(const IntPolynomial& a, const IntPolynomial& b) {
  const int m = a.degree();
  const int n = b.degree();
  if (m < 0 || n < 0) return 0;
  if (m == 0) return big_pow(a.leading(), static_cast<unsigned>(n));
  if (n == 0) return big_pow(b.leading(), static_cast<unsigned>(m));
  BigMatrix s(m + n, m + n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= m; ++j) s(i, i + j) = a.coefficients()[m - j];
  for (int i = 0; i < m; ++i)
    for (int j = 0; j <= n; ++j) s(n + i, i + j) = b.coefficients()[n - j];
  return determinant(s);
}

BigInt discriminant(const IntPolynomial& f) {
  const int n = f.degree();
  if (n < 1) throw Error(ErrorKind::InvalidInput, "discriminant needs degree >= 1");
  if (n == 1) return 1;
  BigInt r = resultant(f, f.derivative());
  BigInt d = r / f.leading();
  if ((static_cast<long long>(n) * (n - 1) / 2) % 2 == 1) d = -d;
  return d;
}

bool is_squarefree(const IntPolynomial& f) {
  if (f.degree() <= 1) return true;
  return polynomial_gcd(f, f.derivative()).degree() == 0;
}

int count_real_roots(const IntPolynomial& f) {
  if (f.degree() <= 0) return 0;
  IntPolynomial sf = f;
  IntPolynomial g = polynomial_gcd(f, f.derivative());
  if (g.degree() > 0) sf = *exact_divide(primitive_part(f), g);
  std::vector<IntPolynomial> seq{primitive_part(sf), primitive_part(sf.derivative())};
  // Sturm chain with positive rescaling only, so sign patterns are preserved.
  while (!seq.back().is_zero() && seq.back().degree() > 0) {
    const IntPolynomial& a = seq[seq.size() - 2];
    const IntPolynomial& b = seq.back();
    IntPolynomial r = pseudo_remainder(a, b);
    int d = a.degree() - b.degree() + 1;
    bool flip = b.leading() < 0 && (d % 2 == 1);
    r = flip ? r : -r;
    if (r.is_zero()) break;
    BigInt c = r.content();
    std::vector<BigInt> cs = r.coefficients();
    for (auto& v : cs) v /= c;
    seq.emplace_back(std::move(cs));
  }
  auto variations = [&](bool at_plus) {
    int count = 0;
    int prev = 0;
    for (const auto& p : seq) {
      if (p.is_zero()) continue;
      int s = p.leading() > 0 ? 1 : -1;
      if (!at_plus && p.degree() % 2 == 1) s = -s;
      if (prev != 0 && s != prev) ++count;
      prev = s;
    }
    return count;
  };
  return variations(false) - variations(true);
}

long double root_bound(const IntPolynomial& f) {
  if (f.degree() < 1) return 0;
  long double lc = abs(f.leading()).convert_to<long double>();
  long double m = 0;
  for (int i = 0; i < f.degree(); ++i) m = std::max(m, abs(f.coefficients()[i]).convert_to<long double>());
  return 1 + m / lc;
}

std::vector<std::complex<long double>> complex_roots(const IntPolynomial& f) {
  const int n = f.degree();
  if (n < 1) return {};
  const long double lc = f.leading().convert_to<long double>();
  Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i < n; ++i) comp(i, i - 1) = 1.0;
  for (int i = 0; i < n; ++i) comp(i, n - 1) = static_cast<double>(-f.coefficients()[i].convert_to<long double>() / lc);
  Eigen::EigenSolver<Eigen::MatrixXd> es(comp, false);
  IntPolynomial df = f.derivative();
  std::vector<std::complex<long double>> roots;
  roots.reserve(n);
  for (int i = 0; i < n; ++i) {
    std::complex<long double> z(es.eigenvalues()[i].real(), es.eigenvalues()[i].imag());
    for (int it = 0; it < 100; ++it) {
      std::complex<long double> fz = f.evaluate(z);
      std::complex<long double> dz = df.evaluate(z);
      if (std::abs(dz) == 0) break;
      std::complex<long double> step = fz / dz;
      z -= step;
      if (std::abs(step) <= 1e-19L * (1 + std::abs(z))) break;
    }
    roots.push_back(z);
  }
  std::sort(roots.begin(), roots.end(), [](const auto& a, const auto& b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  return roots;
}

namespace {

bool has_factor_of_degree(const IntPolynomial& f, const std::vector<std::complex<long double>>& roots, int d,
                          long double coeff_cap) {
  const int n = static_cast<int>(roots.size());
  std::vector<int> idx(d);
  for (int i = 0; i < d; ++i) idx[i] = i;
  while (true) {
    std::vector<std::complex<long double>> prod{1.0L};
    for (int k : idx) {
      std::vector<std::complex<long double>> next(prod.size() + 1, 0.0L);
      for (size_t j = 0; j < prod.size(); ++j) {
        next[j + 1] += prod[j];
        next[j] -= roots[k] * prod[j];
      }
      prod = std::move(next);
    }
    bool plausible = true;
    std::vector<BigInt> coeffs(d + 1);
    for (int j = 0; j <= d; ++j) {
      long double re = prod[j].real();
      if (std::abs(re) > coeff_cap || std::abs(prod[j].imag()) > 1e-3L * (1 + std::abs(re))) {
        plausible = false;
        break;
      }
      coeffs[j] = round_to_big(re);
    }
    if (plausible && exact_divide(f, IntPolynomial(std::move(coeffs)))) return true;
    int i = d - 1;
    while (i >= 0 && idx[i] == n - d + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j < d; ++j) idx[j] = idx[j - 1] + 1;
  }
  return false;
}

}  // namespace

bool is_irreducible(const IntPolynomial& f) {
  const int n = f.degree();
  if (n > 16) throw Error(ErrorKind::DegreeTooLarge, "irreducibility test supports degree <= 16");
  if (!f.is_monic()) throw Error(ErrorKind::NotMonic, "irreducibility test needs a monic polynomial");
  if (n <= 1) return n == 1;
  if (f.coefficients()[0] == 0) return false;
  auto roots = complex_roots(f);
  // Mignotte-style cap: every coefficient of a degree-d factor is at most C(d, j) B^j.
  long double b = std::max<long double>(1, root_bound(f));
  for (int d = 1; d <= n / 2; ++d) {
    long double cap = std::pow(2.0L * b, static_cast<long double>(d)) + 1;
    if (has_factor_of_degree(f, roots, d, cap)) return false;
  }
  return true;
}

}  // namespace cartan
