#pragma once

#include <vector>

#include <Eigen/Dense>

#include "cartan/linalg.hpp"
#include "cartan/polynomial.hpp"

namespace cartan {

inline constexpr double kRealTolerance = 1e-9;
inline constexpr double kTableTolerance = 1e-4;

/// Real roots of a totally real polynomial, in increasing order.
struct RealEmbeddings {
  int degree = 0;
  std::vector<long double> roots;
  long double residual = 0;  // max |f(root)|
};

/// Raises NotSquarefree or NotTotallyReal.
RealEmbeddings find_real_roots(const IntPolynomial& f);

/// Element (sum_j coeffs[j] lambda^j) / denominator of Q(lambda).
struct FieldElement {
  std::vector<BigInt> coeffs;
  BigInt denominator = 1;

  FieldElement() = default;
  explicit FieldElement(std::vector<BigInt> c, BigInt den = 1);
  static FieldElement from_int64(const std::vector<long long>& c);
  static FieldElement one(int n);

  bool operator==(const FieldElement& other) const = default;
  bool is_one() const;
  std::string to_string() const;
};

/// A Z-basis of an order: row i holds the numerators of omega_i on the power
/// basis, all over the common denominator. Rows form an upper triangular HNF.
struct Order {
  BigMatrix basis;
  BigInt denominator = 1;
  BigInt index = 1;  // [O : Z[lambda]]
  BigInt discriminant;

  bool is_equation_order() const { return index == 1; }
};

Order equation_order(const IntPolynomial& f);

/// Maximal order by repeated p-enlargement at every prime p with p^2 | disc(f).
Order maximal_order(const IntPolynomial& f);

/// Polynomial, its real embeddings and a chosen order.
class NumberField {
 public:
  NumberField(IntPolynomial f, Order order);
  /// Validates f (monic, irreducible, squarefree, totally real).
  static NumberField create(const IntPolynomial& f, bool use_maximal_order = true);

  int degree() const { return f_.degree(); }
  const IntPolynomial& polynomial() const { return f_; }
  const RealEmbeddings& embeddings() const { return emb_; }
  const Order& order() const { return order_; }

  FieldElement normalize(FieldElement a) const;
  FieldElement multiply(const FieldElement& a, const FieldElement& b) const;
  FieldElement power(const FieldElement& a, const BigInt& e) const;
  /// Inverse of an element of norm +-1 in the order.
  FieldElement unit_inverse(const FieldElement& a) const;

  FieldElement from_order_coordinates(const std::vector<BigInt>& a) const;
  /// Coordinates on the order basis; throws NonIntegerEntry if a is not in the order.
  std::vector<BigInt> order_coordinates(const FieldElement& a) const;

  /// Matrix of multiplication by a on the order basis (column k = coordinates of a * omega_k).
  BigMatrix multiplication_matrix(const FieldElement& a) const;

  std::vector<long double> embed(const FieldElement& a) const;
  Eigen::VectorXd log_embedding(const FieldElement& a) const;

 private:
  IntPolynomial f_;
  RealEmbeddings emb_;
  Order order_;
};

/// Exact norm Res(f, p) / denominator^n; throws InvalidInput when not integral.
BigInt element_norm(const IntPolynomial& f, const FieldElement& a);

int default_unit_bound(int degree);

/// Elements of the order with coordinates bounded by coeff_bound and norm +-1,
/// excluding +-1, one representative per sign pair. Raises EmptyResult.
std::vector<FieldElement> search_units(const NumberField& field, int coeff_bound);
std::vector<FieldElement> search_units(const IntPolynomial& f, int coeff_bound);

struct UnitSystem {
  std::vector<FieldElement> units;  // n-1 units
  Eigen::MatrixXd log_matrix;       // n x (n-1), entry (j, i) = log|phi_j(eps_i)|
  double regulator = 0.0;
};

/// Multiplicative basis of the group generated by `units`, LLL-reduced on log vectors.
UnitSystem fundamental_system(const NumberField& field, const std::vector<FieldElement>& units);
UnitSystem fundamental_system(const IntPolynomial& f, const std::vector<FieldElement>& units);

/// |det| of the log matrix with one row removed; all n choices must agree.
double regulator(const UnitSystem& us);

/// Regulator of an (n-1)-column log matrix (any row count n), same cross-check.
double regulator_of_log_matrix(const Eigen::MatrixXd& x);

}  // namespace cartan
