#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cartan/geometry.hpp"

namespace cartan {

/// p(x) = max_i c_i |xi_i . x| with the functionals as rows.
class PolyhedralNorm {
 public:
  /// Raises NotANorm unless the functionals with c_i > 0 span R^k.
  PolyhedralNorm(Eigen::MatrixXd functionals, std::vector<double> coefficients);

  int dimension() const { return static_cast<int>(functionals_.cols()); }
  const Eigen::MatrixXd& functionals() const { return functionals_; }
  const std::vector<double>& coefficients() const { return coefficients_; }

  double operator()(const Eigen::VectorXd& x) const;
  /// {x : +-c_i xi_i . x <= 1} over the positive coefficients.
  HPolytope unit_ball() const;
  const std::vector<Eigen::VectorXd>& vertices() const;  // dimension <= 5
  double volume() const;                                  // exact for dimension <= 5
  PolyhedralNorm scaled(double factor) const;             // factor * p

 private:
  Eigen::MatrixXd functionals_;
  std::vector<double> coefficients_;
  mutable std::vector<Eigen::VectorXd> vertices_;
};

/// max |xi . v| over the unit ball of p.
double dual_norm(const PolyhedralNorm& p, const Eigen::VectorXd& xi);

/// sum_j p*(chi_j) over the rows of the Lyapunov matrix.
double sh_for_norm(const Eigen::MatrixXd& x, const PolyhedralNorm& p);

/// sum_i p*(xi_i) / vol(p)^(1/k) over the rows of `xi`.
double SH_functional(const Eigen::MatrixXd& xi, const PolyhedralNorm& p);

/// The reduced objective F(c) whose minimum over c > 0 is C(n).
double slow_objective(const std::vector<double>& c);

struct OptimizerSettings {
  int grid_resolution = 24;
  double tolerance = 1e-10;
  int max_iterations = 20000;
  int restarts = 3;
};

struct CofN {
  int n = 0;
  double value = 0.0;
  std::vector<double> coefficients;  // normalized to sum 1
  double equal_coefficient_value = 0.0;
  double grid_value = 0.0;
  long long evaluations = 0;
  std::string trace;
};

/// C(n) for 3 <= n <= 10, cached per n. Raises BoundViolation.
CofN c_of_n(int n, const OptimizerSettings& settings = {});

struct SlowReport {
  int n = 0;
  double regulator = 0.0;
  CofN c;
  double sh = 0.0;
  double corollary_c = 0.0;
  double lower_bound = 0.0;  // (n-1)/2
  double upper_bound = 0.0;  // n-1
  bool case_p = true;
};

/// sh = C(n) R^(1/(n-1)) with the corollary check; CaseO gives sh = 0.
SlowReport slow_entropy(const Eigen::MatrixXd& x);

/// c(k) = sh / (C(2k,k)^(1/k) h*^(1/k)); asserts c(k) = C(k+1)/2 and k/4 <= c(k) <= k/2.
double corollary_check(double fried, double sh, int k);

}  // namespace cartan
