#pragma once

#include <string>
#include <utility>
#include <vector>

namespace cartan {

struct ZimmertAB {
  double a = 0.0;  // (1+s)(1+2s) exp(2/s + 1/(1+s))
  double b = 0.0;  // log(Gamma(1+s)/2) - (1+s) psi((1+s)/2)
};

/// Raises NonPositiveArgument for s <= 0.
ZimmertAB zimmert_ab(double s);

/// Constant K with K / a(0.35) = 0.000376.
double zimmert_calibration();

/// 1 / a(s), before calibration.
double zimmert_raw_prefactor(double s);

/// K / a(s); equals 0.000376 at s = 0.35.
double zimmert_prefactor(double s);

/// Calibrated regulator lower bound K / a(s) exp(b(s) n).
double zimmert_regulator_lb(int n, double s);

/// Regulator bound times 2^(n-1) / C(2n-2, n-1).
double zimmert_fried_lb(int n, double s);

/// Same with C(2n-2, n-1) replaced by its upper estimate 4^(n-1).
double zimmert_fried_lb_rough(int n, double s);

struct BoundCurve {
  int n = 0;
  std::vector<std::pair<double, double>> samples;  // (s, Z(n, s)), increasing s
  double argmax = 0.0;
  double max = 0.0;
};

struct ScanSettings {
  int n_min = 8;
  int n_max = 17;
  int min_over_max_n = 16;  // the minimum is taken over n_min..min_over_max_n
  double s_min = 0.05;
  double s_max = 2.0;
  int grid = 400;
};

struct MinMaxScan {
  double value = 0.0;  // min_n max_s Z(n, s)
  int argmin_n = 0;
  std::vector<BoundCurve> curves;  // one per n in [n_min, n_max]
};

/// Dense s-grid plus golden-section refinement of each max. Requires
/// 8 <= n_min <= n_max <= 17.
MinMaxScan min_max_scan(const ScanSettings& settings = {});

/// CSV with header n,s,Z.
std::string curves_csv(const std::vector<BoundCurve>& curves);

/// True when the sampled values rise and then fall at most once.
bool is_unimodal(const BoundCurve& curve);

struct QuadratureSettings {
  double truncation = 1e-18;
  double relative_tolerance = 1e-10;
  int max_refinements = 14;
};

struct FriedmanValue {
  double value = 0.0;
  double error_estimate = 0.0;
  double truncation_t = 0.0;
};

/// g(x) = 1/(2^n 4 pi i) int_{2-i oo}^{2+i oo} (pi^n x)^(-s/2) (2s-1) Gamma(s/2)^n ds
/// for a totally real field of degree n <= 8. Raises QuadratureNotConverged.
FriedmanValue friedman_g(double x, int n, const QuadratureSettings& settings = {});

}  // namespace cartan
