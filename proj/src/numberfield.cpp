#include "cartan/numberfield.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "cartan/error.hpp"
#include "cartan/parallel.hpp"

namespace cartan {

namespace {

BigInt big_abs(const BigInt& v) { return v < 0 ? BigInt(-v) : v; }

BigInt big_gcd(BigInt a, BigInt b) {
  a = big_abs(a);
  b = big_abs(b);
  while (b != 0) {
    BigInt t = a % b;
    a = b;
    b = t;
  }
  return a;
}

BigInt big_lcm(const BigInt& a, const BigInt& b) { return a / big_gcd(a, b) * b; }

// Reduces a coefficient vector modulo the monic polynomial f.
std::vector<BigInt> reduce_mod(std::vector<BigInt> c, const IntPolynomial& f) {
  const int n = f.degree();
  const auto& fc = f.coefficients();
  for (int k = static_cast<int>(c.size()) - 1; k >= n; --k) {
    if (c[k] == 0) continue;
    BigInt lead = c[k];
    for (int i = 0; i < n; ++i) c[k - n + i] -= lead * fc[i];
    c[k] = 0;
  }
  c.resize(n);
  return c;
}

std::vector<BigInt> poly_mul(const std::vector<BigInt>& a, const std::vector<BigInt>& b) {
  std::vector<BigInt> r(a.size() + b.size() - 1);
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  }
  return r;
}

}  // namespace

RealEmbeddings find_real_roots(const IntPolynomial& f) {
  const int n = f.degree();
  if (n < 1) throw Error(ErrorKind::InvalidInput, "polynomial must have positive degree");
  if (!f.is_monic()) throw Error(ErrorKind::NotMonic, f.to_string());
  if (!is_squarefree(f)) throw Error(ErrorKind::NotSquarefree, f.to_string());
  if (count_real_roots(f) != n) throw Error(ErrorKind::NotTotallyReal, f.to_string() + " has complex roots");
  auto roots = complex_roots(f);
  IntPolynomial df = f.derivative();
  RealEmbeddings out;
  out.degree = n;
  for (const auto& z : roots) {
    if (std::abs(z.imag()) > 1e-6L * (1 + std::abs(z))) {
      throw Error(ErrorKind::NotTotallyReal, f.to_string() + " has complex roots");
    }
    long double x = z.real();
    for (int it = 0; it < 60; ++it) {
      long double d = df.evaluate(x);
      if (d == 0) break;
      long double step = f.evaluate(x) / d;
      x -= step;
      if (std::abs(step) <= 1e-19L * (1 + std::abs(x))) break;
    }
    out.roots.push_back(x);
  }
  std::sort(out.roots.begin(), out.roots.end());
  const long double tol = 1e-12L * (1 + f.max_abs_coefficient().convert_to<long double>());
  for (int i = 0; i < n; ++i) {
    out.residual = std::max(out.residual, std::abs(f.evaluate(out.roots[i])));
    if (i > 0 && out.roots[i] - out.roots[i - 1] <= 1e-12L * (1 + std::abs(out.roots[i])))
      throw Error(ErrorKind::NumericalFailure, "root polishing merged two roots of " + f.to_string());
  }
  if (out.residual > tol) throw Error(ErrorKind::NumericalFailure, "root residual too large for " + f.to_string());
  return out;
}

FieldElement::FieldElement(std::vector<BigInt> c, BigInt den) : coeffs(std::move(c)), denominator(std::move(den)) {}

FieldElement FieldElement::from_int64(const std::vector<long long>& c) {
  std::vector<BigInt> v(c.begin(), c.end());
  return FieldElement(std::move(v));
}

FieldElement FieldElement::one(int n) {
  std::vector<BigInt> v(n);
  v[0] = 1;
  return FieldElement(std::move(v));
}

bool FieldElement::is_one() const {
  if (coeffs.empty() || coeffs[0] != denominator) return false;
  for (size_t i = 1; i < coeffs.size(); ++i)
    if (coeffs[i] != 0) return false;
  return true;
}

std::string FieldElement::to_string() const {
  IntPolynomial p(coeffs);
  std::string s = p.to_string();
  if (denominator != 1) s = "(" + s + ")/" + denominator.str();
  return s;
}

BigInt element_norm(const IntPolynomial& f, const FieldElement& a) {
  BigInt r = resultant(f, IntPolynomial(a.coeffs));
  BigInt d = big_pow(a.denominator, static_cast<unsigned>(f.degree()));
  if (r % d != 0) throw Error(ErrorKind::InvalidInput, "element norm is not an integer");
  return r / d;
}

Order equation_order(const IntPolynomial& f) {
  Order o;
  o.basis = BigMatrix::identity(f.degree());
  o.denominator = 1;
  o.index = 1;
  o.discriminant = discriminant(f);
  return o;
}

namespace {

// Primes p with p^2 | n, by trial division up to the cube root and a square
// test on the cofactor.
std::vector<BigInt> square_divisor_primes(BigInt n) {
  n = big_abs(n);
  std::vector<BigInt> out;
  if (n < 4) return out;
  long double cube = std::cbrt(n.convert_to<long double>());
  long long limit = static_cast<long long>(std::min<long double>(cube + 2, 2.0e6L));
  for (long long p = 2; p <= limit && BigInt(p) * p <= n; ++p) {
    if (n % p != 0) continue;
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    if (e >= 2) out.emplace_back(p);
  }
  if (n > 1) {
    BigInt s = boost::multiprecision::sqrt(n);
    if (s * s == n) out.push_back(s);
  }
  return out;
}

// Power sums Tr(lambda^k) for k < count, by Newton's identities.
std::vector<BigInt> power_sums(const IntPolynomial& f, int count) {
  const int n = f.degree();
  const auto& a = f.coefficients();
  std::vector<BigInt> s(count);
  for (int k = 0; k < count; ++k) {
    if (k == 0) {
      s[0] = n;
      continue;
    }
    BigInt acc = 0;
    for (int i = 1; i <= std::min(k, n); ++i) {
      if (i < k)
        acc += a[n - i] * s[k - i];
      else
        acc += a[n - i] * k;
    }
    s[k] = -acc;
  }
  return s;
}

struct OrderBuilder {
  const IntPolynomial& f;
  int n;
  std::vector<BigInt> sums;

  explicit OrderBuilder(const IntPolynomial& poly) : f(poly), n(poly.degree()), sums(power_sums(poly, poly.degree())) {}

  FieldElement basis_element(const Order& o, int i) const {
    std::vector<BigInt> c(n);
    for (int j = 0; j < n; ++j) c[j] = o.basis(i, j);
    return FieldElement(std::move(c), o.denominator);
  }

  FieldElement mul(const FieldElement& a, const FieldElement& b) const {
    FieldElement r(reduce_mod(poly_mul(a.coeffs, b.coeffs), f), a.denominator * b.denominator);
    return simplify(std::move(r));
  }

  static FieldElement simplify(FieldElement a) {
    BigInt g = a.denominator;
    for (const auto& c : a.coeffs) g = big_gcd(g, c);
    if (g > 1) {
      for (auto& c : a.coeffs) c /= g;
      a.denominator /= g;
    }
    return a;
  }

  BigInt trace(const FieldElement& a) const {
    BigInt t = 0;
    for (int k = 0; k < n; ++k) t += a.coeffs[k] * sums[k];
    if (t % a.denominator != 0) throw Error(ErrorKind::NumericalFailure, "non-integral trace in an order");
    return t / a.denominator;
  }

  BigMatrix trace_form(const Order& o) const {
    BigMatrix t(n, n);
    std::vector<FieldElement> w;
    for (int i = 0; i < n; ++i) w.push_back(basis_element(o, i));
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) t(i, j) = t(j, i) = trace(mul(w[i], w[j]));
    return t;
  }

  std::vector<BigInt> coordinates(const Order& o, const FieldElement& a) const {
    std::vector<BigInt> w(n);
    for (int j = 0; j < n; ++j) {
      BigInt v = a.coeffs[j] * o.denominator;
      if (v % a.denominator != 0) throw Error(ErrorKind::NonIntegerEntry, "element is not in the order");
      w[j] = v / a.denominator;
    }
    std::vector<BigInt> x(n);
    for (int j = 0; j < n; ++j) {
      BigInt acc = w[j];
      for (int i = 0; i < j; ++i) acc -= x[i] * o.basis(i, j);
      if (acc % o.basis(j, j) != 0) throw Error(ErrorKind::NonIntegerEntry, "element is not in the order");
      x[j] = acc / o.basis(j, j);
    }
    return x;
  }

  // Multiplication matrices of the basis elements on the basis, column convention.
  std::vector<BigMatrix> basis_multiplication(const Order& o) const {
    std::vector<FieldElement> w;
    for (int i = 0; i < n; ++i) w.push_back(basis_element(o, i));
    std::vector<BigMatrix> out(n, BigMatrix(n, n));
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) {
        auto c = coordinates(o, mul(w[i], w[k]));
        for (int j = 0; j < n; ++j) out[i](j, k) = c[j];
      }
    return out;
  }

  Order from_generators(const std::vector<FieldElement>& gens) const {
    BigInt den = 1;
    for (const auto& g : gens) den = big_lcm(den, g.denominator);
    BigMatrix m(static_cast<int>(gens.size()), n);
    for (size_t r = 0; r < gens.size(); ++r) {
      BigInt scale = den / gens[r].denominator;
      for (int j = 0; j < n; ++j) m(static_cast<int>(r), j) = gens[r].coeffs[j] * scale;
    }
    HermiteResult h = hermite_normal_form(m);
    if (h.rank != n) throw Error(ErrorKind::NumericalFailure, "order generators are not of full rank");
    BigMatrix b(n, n);
    BigInt g = den;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        b(i, j) = h.h(i, j);
        g = big_gcd(g, b(i, j));
      }
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) b(i, j) /= g;
    Order o;
    o.basis = b;
    o.denominator = den / g;
    BigInt det = 1;
    for (int i = 0; i < n; ++i) det *= b(i, i);
    o.index = big_pow(o.denominator, static_cast<unsigned>(n)) / det;
    o.discriminant = determinant(trace_form(o));
    return o;
  }

  bool integral_over_p(const BigMatrix& mult, const BigInt& p) const {
    BigInt modulus = big_pow(p, static_cast<unsigned>(n));
    std::vector<BigInt> cp;
    if (modulus < BigInt(1) << 62) {
      long long mod = modulus.convert_to<long long>();
      std::vector<std::int64_t> flat(static_cast<size_t>(n) * n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          BigInt v = mult(i, j) % modulus;
          if (v < 0) v += modulus;
          flat[static_cast<size_t>(i) * n + j] = v.convert_to<long long>();
        }
      for (auto v : characteristic_polynomial_mod(flat, n, mod)) cp.emplace_back(v);
    } else {
      cp = characteristic_polynomial(mult);
    }
    BigInt pk = 1;
    for (int k = 1; k <= n; ++k) {
      pk *= p;
      if (cp[n - k] % pk != 0) return false;
    }
    return true;
  }

  // One p-enlargement step; returns false when the order is p-maximal.
  bool enlarge(Order& o, const BigInt& p) const {
    BigMatrix t = trace_form(o);
    if (p > BigInt(1) << 40) return false;
    long long pp = p.convert_to<long long>();
    auto kernel = kernel_mod_p(t, pp);
    if (kernel.empty()) return false;
    auto mults = basis_multiplication(o);
    const int dim = static_cast<int>(kernel.size());
    // Projective enumeration: the first nonzero kernel coefficient is 1.
    for (int lead = 0; lead < dim; ++lead) {
      const int free_count = dim - lead - 1;
      double combos = std::pow(static_cast<double>(pp), free_count);
      if (combos > 5e6) throw Error(ErrorKind::DimensionTooLarge, "p-enlargement search too large");
      std::vector<long long> tcoef(free_count, 0);
      while (true) {
        std::vector<BigInt> r(n);
        for (int j = 0; j < n; ++j) {
          long long v = kernel[lead][j];
          for (int q = 0; q < free_count; ++q) v = (v + tcoef[q] * kernel[lead + 1 + q][j]) % pp;
          r[j] = v;
        }
        BigMatrix mult(n, n);
        for (int i = 0; i < n; ++i) {
          if (r[i] == 0) continue;
          for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) mult(a, b) += r[i] * mults[i](a, b);
        }
        if (integral_over_p(mult, p)) {
          FieldElement x(std::vector<BigInt>(n, 0), o.denominator * p);
          for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) x.coeffs[j] += r[i] * o.basis(i, j);
          x = simplify(std::move(x));
          std::vector<FieldElement> gens;
          for (int i = 0; i < n; ++i) {
            FieldElement pw = basis_element(o, i);
            for (int k = 0; k < n; ++k) {
              gens.push_back(pw);
              pw = mul(pw, x);
            }
          }
          o = from_generators(gens);
          return true;
        }
        int q = 0;
        while (q < free_count && ++tcoef[q] == pp) tcoef[q++] = 0;
        if (q == free_count) break;
      }
    }
    return false;
  }
};

}  // namespace

Order maximal_order(const IntPolynomial& f) {
  OrderBuilder builder(f);
  Order o = equation_order(f);
  for (const BigInt& p : square_divisor_primes(o.discriminant)) {
    while (o.discriminant % (p * p) == 0 && builder.enlarge(o, p)) {
    }
  }
  return o;
}

NumberField::NumberField(IntPolynomial f, Order order)
    : f_(std::move(f)), emb_(find_real_roots(f_)), order_(std::move(order)) {}

NumberField NumberField::create(const IntPolynomial& f, bool use_maximal_order) {
  if (f.degree() < 2) throw Error(ErrorKind::InvalidInput, "degree must be at least 2");
  if (f.degree() > 16) throw Error(ErrorKind::DegreeTooLarge, "degree must be at most 16");
  if (!f.is_monic()) throw Error(ErrorKind::NotMonic, f.to_string());
  find_real_roots(f);
  if (!is_irreducible(f)) throw Error(ErrorKind::InvalidInput, f.to_string() + " is reducible");
  return NumberField(f, use_maximal_order ? maximal_order(f) : equation_order(f));
}

FieldElement NumberField::normalize(FieldElement a) const {
  a.coeffs = reduce_mod(std::move(a.coeffs), f_);
  if (a.denominator < 0) {
    a.denominator = -a.denominator;
    for (auto& c : a.coeffs) c = -c;
  }
  if (a.denominator == 0) throw Error(ErrorKind::InvalidInput, "zero denominator");
  return OrderBuilder::simplify(std::move(a));
}

FieldElement NumberField::multiply(const FieldElement& a, const FieldElement& b) const {
  return normalize(FieldElement(poly_mul(a.coeffs, b.coeffs), a.denominator * b.denominator));
}

FieldElement NumberField::power(const FieldElement& a, const BigInt& e) const {
  FieldElement base = e < 0 ? unit_inverse(a) : normalize(a);
  BigInt k = big_abs(e);
  FieldElement result = FieldElement::one(degree());
  while (k > 0) {
    if ((k & 1) != 0) result = multiply(result, base);
    k >>= 1;
    if (k > 0) base = multiply(base, base);
  }
  return result;
}

FieldElement NumberField::unit_inverse(const FieldElement& a) const {
  auto cp = characteristic_polynomial(multiplication_matrix(a));
  const int n = degree();
  if (cp[0] != 1 && cp[0] != -1) throw Error(ErrorKind::DeterminantNotUnit, "element is not a unit");
  // a^{-1} = -(a^{n-1} + c_{n-1} a^{n-2} + ... + c_1) / c_0
  FieldElement acc = FieldElement::one(n);
  FieldElement x = normalize(a);
  for (int k = n - 1; k >= 1; --k) {
    acc = multiply(acc, x);
    acc.coeffs[0] += cp[k] * acc.denominator;
  }
  if (cp[0] == 1)
    for (auto& c : acc.coeffs) c = -c;
  return normalize(acc);
}

FieldElement NumberField::from_order_coordinates(const std::vector<BigInt>& a) const {
  const int n = degree();
  std::vector<BigInt> c(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) c[j] += a[i] * order_.basis(i, j);
  return normalize(FieldElement(std::move(c), order_.denominator));
}

std::vector<BigInt> NumberField::order_coordinates(const FieldElement& a) const {
  return OrderBuilder(f_).coordinates(order_, normalize(a));
}

BigMatrix NumberField::multiplication_matrix(const FieldElement& a) const {
  const int n = degree();
  OrderBuilder b(f_);
  FieldElement x = normalize(a);
  BigMatrix m(n, n);
  for (int k = 0; k < n; ++k) {
    auto c = b.coordinates(order_, multiply(x, b.basis_element(order_, k)));
    for (int j = 0; j < n; ++j) m(j, k) = c[j];
  }
  return m;
}

std::vector<long double> NumberField::embed(const FieldElement& a) const {
  const int n = degree();
  std::vector<long double> out(n);
  long double den = a.denominator.convert_to<long double>();
  for (int j = 0; j < n; ++j) {
    long double acc = 0;
    for (int k = static_cast<int>(a.coeffs.size()) - 1; k >= 0; --k)
      acc = acc * emb_.roots[j] + a.coeffs[k].convert_to<long double>();
    out[j] = acc / den;
  }
  return out;
}

Eigen::VectorXd NumberField::log_embedding(const FieldElement& a) const {
  auto v = embed(a);
  Eigen::VectorXd out(degree());
  for (int j = 0; j < degree(); ++j) {
    if (v[j] == 0) throw Error(ErrorKind::ZeroEigenvalue, "zero embedding");
    out(j) = static_cast<double>(std::log(std::abs(v[j])));
  }
  return out;
}

int default_unit_bound(int degree) {
  if (degree <= 4) return 6;
  if (degree <= 6) return 4;
  if (degree <= 10) return 2;
  return 1;
}

std::vector<FieldElement> search_units(const NumberField& field, int coeff_bound) {
  if (coeff_bound < 1) throw Error(ErrorKind::InvalidInput, "coefficient bound must be positive");
  const int n = field.degree();
  const Order& o = field.order();
  std::vector<std::vector<long double>> e(n);
  for (int i = 0; i < n; ++i) {
    std::vector<BigInt> c(n);
    for (int j = 0; j < n; ++j) c[j] = o.basis(i, j);
    e[i] = field.embed(FieldElement(std::move(c), o.denominator));
  }
  const std::vector<BigInt> one = field.order_coordinates(FieldElement::one(n));
  const int width = 2 * coeff_bound + 1;

  // One block per value of the first coordinate (canonical sign: first nonzero > 0).
  std::vector<std::vector<std::vector<long long>>> found(coeff_bound + 1);
  parallel_for(static_cast<size_t>(coeff_bound + 1), [&](size_t block) {
    const long long a0 = static_cast<long long>(block);
    std::vector<long long> a(n, -coeff_bound);
    a[0] = a0;
    std::vector<std::vector<long double>> partial(n + 1, std::vector<long double>(n, 0));
    auto& out = found[block];
    // Depth-first odometer over coordinates 1..n-1 with running partial sums.
    std::vector<int> digit(n, 0);
    auto sign_ok = [&](int depth_first_nonzero_check) {
      (void)depth_first_nonzero_check;
      for (int i = 0; i < n; ++i) {
        if (a[i] > 0) return true;
        if (a[i] < 0) return false;
      }
      return false;
    };
    for (int j = 0; j < n; ++j) partial[1][j] = a0 * e[0][j];
    int depth = 1;
    if (n == 1) return;
    digit[1] = 0;
    while (depth >= 1) {
      if (depth == n) {
        if (sign_ok(0)) {
          long double prod = 1;
          for (int j = 0; j < n; ++j) prod *= partial[n][j];
          if (std::abs(std::abs(prod) - 1) < 1e-3L) {
            std::vector<long long> v(a.begin(), a.end());
            out.push_back(std::move(v));
          }
        }
        --depth;
        continue;
      }
      if (digit[depth] >= width) {
        digit[depth] = 0;
        --depth;
        continue;
      }
      a[depth] = digit[depth] - coeff_bound;
      ++digit[depth];
      for (int j = 0; j < n; ++j) partial[depth + 1][j] = partial[depth][j] + a[depth] * e[depth][j];
      ++depth;
      if (depth < n) digit[depth] = 0;
    }
  });

  std::vector<FieldElement> units;
  std::vector<std::vector<long long>> coords;
  for (auto& blk : found)
    for (auto& v : blk) coords.push_back(std::move(v));
  std::sort(coords.begin(), coords.end());
  for (const auto& v : coords) {
    std::vector<BigInt> a(v.begin(), v.end());
    bool plus_one = a == one;
    bool minus_one = true;
    for (int i = 0; i < n; ++i)
      if (a[i] != -one[i]) minus_one = false;
    if (plus_one || minus_one) continue;
    FieldElement x = field.from_order_coordinates(a);
    BigInt nm = element_norm(field.polynomial(), x);
    if (nm == 1 || nm == -1) units.push_back(std::move(x));
  }
  if (units.empty()) throw Error(ErrorKind::EmptyResult, "no units found; increase the coefficient bound");
  return units;
}

std::vector<FieldElement> search_units(const IntPolynomial& f, int coeff_bound) {
  return search_units(NumberField::create(f), coeff_bound);
}

namespace {

struct LatticeVector {
  Eigen::VectorXd log;
  std::map<size_t, BigInt> exps;  // exponents over the input unit list
};

LatticeVector combine(const std::vector<LatticeVector>& gens, const std::vector<BigInt>& coeffs) {
  LatticeVector out;
  out.log = Eigen::VectorXd::Zero(gens.front().log.size());
  for (size_t k = 0; k < gens.size(); ++k) {
    if (coeffs[k] == 0) continue;
    out.log += coeffs[k].convert_to<double>() * gens[k].log;
    for (const auto& [idx, e] : gens[k].exps) out.exps[idx] += coeffs[k] * e;
  }
  for (auto it = out.exps.begin(); it != out.exps.end();) it = it->second == 0 ? out.exps.erase(it) : std::next(it);
  return out;
}

void add_to(LatticeVector& a, const LatticeVector& b, long long c) {
  if (c == 0) return;
  a.log += static_cast<double>(c) * b.log;
  for (const auto& [idx, e] : b.exps) a.exps[idx] += e * c;
  for (auto it = a.exps.begin(); it != a.exps.end();) it = it->second == 0 ? a.exps.erase(it) : std::next(it);
}

void lll_reduce(std::vector<LatticeVector>& b) {
  const int r = static_cast<int>(b.size());
  const double delta = 0.99;
  auto gram_schmidt = [&](std::vector<Eigen::VectorXd>& bs, Eigen::MatrixXd& mu) {
    bs.assign(r, Eigen::VectorXd());
    mu = Eigen::MatrixXd::Zero(r, r);
    for (int i = 0; i < r; ++i) {
      bs[i] = b[i].log;
      for (int j = 0; j < i; ++j) {
        mu(i, j) = b[i].log.dot(bs[j]) / bs[j].squaredNorm();
        bs[i] -= mu(i, j) * bs[j];
      }
    }
  };
  std::vector<Eigen::VectorXd> bs;
  Eigen::MatrixXd mu;
  gram_schmidt(bs, mu);
  int k = 1;
  int guard = 0;
  while (k < r && guard++ < 100000) {
    for (int j = k - 1; j >= 0; --j) {
      double q = std::round(mu(k, j));
      if (q != 0) {
        add_to(b[k], b[j], -static_cast<long long>(q));
        gram_schmidt(bs, mu);
      }
    }
    if (bs[k].squaredNorm() >= (delta - mu(k, k - 1) * mu(k, k - 1)) * bs[k - 1].squaredNorm()) {
      ++k;
    } else {
      std::swap(b[k], b[k - 1]);
      gram_schmidt(bs, mu);
      k = std::max(k - 1, 1);
    }
  }
}

// Replaces b_i by b_i + sum_{j != i} e_j b_j (e in {-1,0,1}) while that shortens it.
void exhaustive_improve(std::vector<LatticeVector>& b) {
  const int r = static_cast<int>(b.size());
  if (r < 2 || r > 6) return;
  bool changed = true;
  int guard = 0;
  while (changed && guard++ < 1000) {
    changed = false;
    for (int i = 0; i < r && !changed; ++i) {
      const int others = r - 1;
      long long total = 1;
      for (int t = 0; t < others; ++t) total *= 3;
      double best = b[i].log.squaredNorm();
      long long best_code = -1;
      for (long long code = 0; code < total; ++code) {
        long long c = code;
        Eigen::VectorXd v = b[i].log;
        bool nonzero = false;
        for (int j = 0, t = 0; j < r; ++j) {
          if (j == i) continue;
          int e = static_cast<int>(c % 3) - 1;
          c /= 3;
          ++t;
          if (e != 0) {
            v += e * b[j].log;
            nonzero = true;
          }
        }
        if (nonzero && v.squaredNorm() < best - 1e-12 * (1 + best)) {
          best = v.squaredNorm();
          best_code = code;
        }
      }
      if (best_code >= 0) {
        long long c = best_code;
        LatticeVector nv = b[i];
        for (int j = 0; j < r; ++j) {
          if (j == i) continue;
          int e = static_cast<int>(c % 3) - 1;
          c /= 3;
          add_to(nv, b[j], e);
        }
        b[i] = std::move(nv);
        changed = true;
      }
    }
  }
}

bool lex_less(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  for (int i = 0; i < a.size(); ++i) {
    if (std::abs(a(i) - b(i)) > 1e-9) return a(i) < b(i);
  }
  return false;
}

}  // namespace

UnitSystem fundamental_system(const NumberField& field, const std::vector<FieldElement>& units) {
  const int n = field.degree();
  const int r = n - 1;
  if (units.empty()) throw Error(ErrorKind::RankDeficient, "no units supplied");
  std::vector<LatticeVector> input(units.size());
  for (size_t i = 0; i < units.size(); ++i) {
    input[i].log = field.log_embedding(units[i]);
    input[i].exps[i] = 1;
  }
  std::vector<size_t> order(units.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](size_t a, size_t b) { return input[a].log.squaredNorm() < input[b].log.squaredNorm() - 1e-12; });

  std::vector<LatticeVector> basis;
  std::vector<size_t> pending;
  for (size_t idx : order) {
    const Eigen::VectorXd& v = input[idx].log;
    if (v.norm() < 1e-9 || static_cast<int>(basis.size()) == r) {
      if (v.norm() >= 1e-9) pending.push_back(idx);
      continue;
    }
    Eigen::MatrixXd m(n, basis.size() + 1);
    for (size_t k = 0; k < basis.size(); ++k) m.col(static_cast<int>(k)) = basis[k].log;
    m.col(static_cast<int>(basis.size())) = v;
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(m);
    qr.setThreshold(1e-8);
    if (qr.rank() == static_cast<int>(basis.size()) + 1)
      basis.push_back(input[idx]);
    else
      pending.push_back(idx);
  }
  if (static_cast<int>(basis.size()) < r)
    throw Error(ErrorKind::RankDeficient, "units span rank " + std::to_string(basis.size()) + " < " +
                                              std::to_string(r) + "; increase the coefficient bound");
  lll_reduce(basis);

  for (size_t idx : pending) {
    const Eigen::VectorXd& v = input[idx].log;
    Eigen::MatrixXd m(n, r);
    for (int k = 0; k < r; ++k) m.col(k) = basis[k].log;
    Eigen::VectorXd c = m.colPivHouseholderQr().solve(v);
    bool integral = true;
    for (int k = 0; k < r; ++k)
      if (std::abs(c(k) - std::round(c(k))) > 1e-7) integral = false;
    if (integral) continue;
    long long den = 1;
    std::vector<std::pair<long long, long long>> q(r);
    for (int k = 0; k < r; ++k) {
      q[k] = rational_approximation(c(k), 100000);
      den = std::lcm(den, q[k].second);
    }
    for (int k = 0; k < r; ++k)
      if (std::abs(c(k) - static_cast<double>(q[k].first) / q[k].second) > 1e-7)
        throw Error(ErrorKind::NumericalFailure, "unit log vector is not a rational combination of the basis");
    BigMatrix mm(r + 1, r);
    for (int k = 0; k < r; ++k) {
      mm(k, k) = den;
      mm(r, k) = BigInt(q[k].first) * (den / q[k].second);
    }
    HermiteResult h = hermite_normal_form(mm);
    std::vector<LatticeVector> gens = basis;
    gens.push_back(input[idx]);
    std::vector<LatticeVector> next;
    for (int i = 0; i < r; ++i) {
      std::vector<BigInt> coeffs(r + 1);
      for (int k = 0; k <= r; ++k) coeffs[k] = h.transform(i, k);
      LatticeVector nv = combine(gens, coeffs);
      // Recompute the log from the bounded HNF row to avoid cancellation.
      nv.log = Eigen::VectorXd::Zero(n);
      for (int k = 0; k < r; ++k) nv.log += (h.h(i, k).convert_to<double>() / static_cast<double>(den)) * basis[k].log;
      next.push_back(std::move(nv));
    }
    basis = std::move(next);
    lll_reduce(basis);
  }
  exhaustive_improve(basis);

  for (auto& b : basis) {
    for (int j = 0; j < n; ++j) {
      if (std::abs(b.log(j)) > 1e-9) {
        if (b.log(j) < 0) {
          b.log = -b.log;
          for (auto& [idx, e] : b.exps) e = -e;
        }
        break;
      }
    }
  }
  std::stable_sort(basis.begin(), basis.end(), [](const LatticeVector& a, const LatticeVector& b) {
    double la = a.log.squaredNorm(), lb = b.log.squaredNorm();
    if (std::abs(la - lb) > 1e-9 * (1 + la)) return la < lb;
    return lex_less(a.log, b.log);
  });

  UnitSystem us;
  us.log_matrix = Eigen::MatrixXd(n, r);
  for (int i = 0; i < r; ++i) {
    FieldElement u = FieldElement::one(n);
    for (const auto& [idx, e] : basis[i].exps) u = field.multiply(u, field.power(units[idx], e));
    auto coords = field.order_coordinates(u);
    for (const auto& c : coords) {
      if (c == 0) continue;
      if (c < 0)
        for (auto& v : u.coeffs) v = -v;
      break;
    }
    BigInt nm = element_norm(field.polynomial(), u);
    if (nm != 1 && nm != -1) throw Error(ErrorKind::NumericalFailure, "reduced basis element is not a unit");
    us.log_matrix.col(i) = field.log_embedding(u);
    if (std::abs(us.log_matrix.col(i).sum()) > kRealTolerance)
      throw Error(ErrorKind::NumericalFailure, "log vector does not sum to zero");
    us.units.push_back(std::move(u));
  }
  us.regulator = regulator(us);
  return us;
}

UnitSystem fundamental_system(const IntPolynomial& f, const std::vector<FieldElement>& units) {
  return fundamental_system(NumberField::create(f), units);
}

double regulator_of_log_matrix(const Eigen::MatrixXd& x) {
  const int n = static_cast<int>(x.rows());
  const int r = static_cast<int>(x.cols());
  if (r != n - 1) throw Error(ErrorKind::InvalidInput, "log matrix must be n x (n-1)");
  if (r == 0) return 1.0;
  std::vector<double> dets(n);
  for (int skip = 0; skip < n; ++skip) {
    Eigen::MatrixXd m(r, r);
    for (int j = 0, row = 0; j < n; ++j) {
      if (j == skip) continue;
      m.row(row++) = x.row(j);
    }
    dets[skip] = std::abs(compensated_determinant(m));
  }
  double value = dets[n - 1];
  for (double d : dets)
    if (std::abs(d - value) > kRealTolerance * std::max(1.0, value))
      throw Error(ErrorKind::InconsistentDeterminants, "row-deleted minors disagree");
  return value;
}

double regulator(const UnitSystem& us) { return regulator_of_log_matrix(us.log_matrix); }

}  // namespace cartan
