#pragma once

#include <Eigen/Dense>

namespace cartan {

enum class LpStatus { Optimal, Unbounded };

struct LpResult {
  LpStatus status = LpStatus::Optimal;
  double value = 0.0;
  Eigen::VectorXd x;
};

/// Maximizes c.x subject to A x <= b over free x. Requires b >= 0 so that the
/// origin is feasible. Dense tableau simplex with Bland's rule.
LpResult maximize(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, const Eigen::VectorXd& c);

}  // namespace cartan
