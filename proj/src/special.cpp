#include "cartan/special.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "cartan/error.hpp"

namespace cartan {

namespace {

constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

template <class T>
T lanczos_log_gamma(T z) {
  // Valid for Re z >= 1/2.
  z -= 1.0;
  T sum = kLanczos[0];
  for (std::size_t i = 1; i < kLanczos.size(); ++i) sum += kLanczos[i] / (z + static_cast<double>(i));
  const T t = z + kLanczosG + 0.5;
  return 0.5 * std::log(2.0 * std::numbers::pi) + (z + 0.5) * std::log(t) - t + std::log(sum);
}

}  // namespace

double log_gamma(double x) {
  if (!(x > 0.0)) throw Error(ErrorKind::NonPositiveArgument, "log_gamma needs x > 0");
  if (x < 0.5) {
    // Reflection: Gamma(x) Gamma(1-x) = pi / sin(pi x).
    return std::log(std::numbers::pi / std::sin(std::numbers::pi * x)) - lanczos_log_gamma(1.0 - x);
  }
  return lanczos_log_gamma(x);
}

double digamma(double x) {
  if (!(x > 0.0)) throw Error(ErrorKind::NonPositiveArgument, "digamma needs x > 0");
  double acc = 0.0;
  while (x < 10.0) {
    acc -= 1.0 / x;
    x += 1.0;
  }
  const double r = 1.0 / (x * x);
  // Asymptotic series with Bernoulli numbers B_2..B_12.
  const double series =
      r * (1.0 / 12 - r * (1.0 / 120 - r * (1.0 / 252 - r * (1.0 / 240 - r * (1.0 / 132 - r * 691.0 / 32760)))));
  return acc + std::log(x) - 0.5 / x - series;
}

std::complex<double> log_gamma(std::complex<double> z) {
  if (z.real() < 0.5) {
    const std::complex<double> pi(std::numbers::pi, 0.0);
    return std::log(pi / std::sin(pi * z)) - lanczos_log_gamma(1.0 - z);
  }
  return lanczos_log_gamma(z);
}

}  // namespace cartan
