#include "cartan/lp.hpp"

#include <limits>
#include <vector>

#include "cartan/error.hpp"

namespace cartan {

LpResult maximize(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, const Eigen::VectorXd& c) {
  const int m = static_cast<int>(a.rows());
  const int n = static_cast<int>(a.cols());
  if (b.size() != m || c.size() != n) throw Error(ErrorKind::InvalidInput, "LP shape mismatch");
  for (int i = 0; i < m; ++i)
    if (b(i) < 0) throw Error(ErrorKind::InvalidInput, "LP requires a feasible origin");

  // Columns: u (n), v (n), slack (m), rhs. Free x = u - v.
  const int cols = 2 * n + m;
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m + 1, cols + 1);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) {
      t(i, j) = a(i, j);
      t(i, n + j) = -a(i, j);
    }
    t(i, 2 * n + i) = 1.0;
    t(i, cols) = b(i);
  }
  for (int j = 0; j < n; ++j) {
    t(m, j) = -c(j);
    t(m, n + j) = c(j);
  }
  std::vector<int> basis(m);
  for (int i = 0; i < m; ++i) basis[i] = 2 * n + i;

  const double eps = 1e-12;
  LpResult result;
  for (int iter = 0; iter < 100000; ++iter) {
    int enter = -1;
    for (int j = 0; j < cols; ++j)
      if (t(m, j) < -eps) {
        enter = j;
        break;
      }
    if (enter < 0) break;
    int leave = -1;
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < m; ++i) {
      if (t(i, enter) > eps) {
        double ratio = t(i, cols) / t(i, enter);
        if (ratio < best - 1e-15 || (std::abs(ratio - best) <= 1e-15 && leave >= 0 && basis[i] < basis[leave])) {
          best = ratio;
          leave = i;
        }
      }
    }
    if (leave < 0) {
      result.status = LpStatus::Unbounded;
      result.value = std::numeric_limits<double>::infinity();
      return result;
    }
    t.row(leave) /= t(leave, enter);
    for (int i = 0; i <= m; ++i) {
      if (i == leave) continue;
      double f = t(i, enter);
      if (f != 0.0) t.row(i) -= f * t.row(leave);
    }
    basis[leave] = enter;
  }
  Eigen::VectorXd z = Eigen::VectorXd::Zero(cols);
  for (int i = 0; i < m; ++i) z(basis[i]) = t(i, cols);
  result.x = z.head(n) - z.segment(n, n);
  result.value = c.dot(result.x);
  return result;
}

}  // namespace cartan
