#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "cartan/geometry.hpp"

namespace cartan {

/// c = 1/2 log((1 + sqrt 5) / 2), the universal 1-entropy constant.
double golden_entropy_constant();

/// 2^k / (k! vol)
double fried_from_volume(int k, double vol);

struct BallVolumes {
  double closed_form = 0.0;   // C(2n-2, n-1) / (R (n-1)!)
  VolumeEstimate geometric;   // exact for n <= 5, Monte Carlo otherwise
};

struct MonteCarloSettings {
  std::uint64_t samples = 1000000;
  std::uint64_t seed = 20240601;
};

/// Volume of {t : 1/2 sum_j |X t|_j <= 1} for any full-column-rank X; exact for
/// up to 5 columns unless `force_mc`.
VolumeEstimate entropy_norm_ball_volume(const Eigen::MatrixXd& x, const MonteCarloSettings& mc = {},
                                        bool force_mc = false);

/// Raises CaseO.
BallVolumes entropy_ball_volume(const Eigen::MatrixXd& x, const MonteCarloSettings& mc = {});

/// R 2^(n-1) / C(2n-2, n-1) for an n x (n-1) matrix; 0 in CaseO. For n <= 5 the
/// value is cross-checked against the exact ball volume.
double fried_average_entropy(const Eigen::MatrixXd& x);

/// Definitional h* = 2^k / (k! vol(B)) with the exact or sampled ball volume.
double fried_definitional(const Eigen::MatrixXd& x, const MonteCarloSettings& mc = {});

struct OneEntropy {
  double value = 0.0;
  std::vector<long long> minimizer;
  std::uint64_t points_checked = 0;
  int seed_radius = 3;
};

/// Certified minimum of h over nonzero lattice vectors.
OneEntropy one_entropy(const Eigen::MatrixXd& x, int seed_radius = 3);

struct LEntropy {
  int ell = 0;
  double upper_estimate = 0.0;
  double lower_bound = 0.0;
  int basis_bound = 0;                       // bound actually used
  std::uint64_t sublattices = 0;             // candidates evaluated
  std::vector<std::vector<long long>> best;  // rows of the best basis
};

/// Search over primitive rank-ell sublattices in Hermite normal form with
/// entries bounded by basis_bound. The bound is lowered automatically while
/// the candidate count exceeds `budget`.
LEntropy l_entropy_search(const Eigen::MatrixXd& x, int ell, int basis_bound = 3, std::uint64_t budget = 3000000);

/// c^ell n^ell / ell!
double l_entropy_lower_bound(int n, int ell);

/// (l/n) log c - (l/n) log(l/n) + l/n, for 0 < l/n < e c. Raises RatioOutOfRange.
double exp_growth_bound(int n, int ell);
double exp_growth_exponent(double ratio);

}  // namespace cartan
