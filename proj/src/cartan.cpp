#include "cartan/cartan.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>
#include <set>

#include <Eigen/Eigenvalues>

#include "cartan/error.hpp"
#include "cartan/lp.hpp"

namespace cartan {

namespace {

using MatrixLD = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
using VectorLD = Eigen::Matrix<long double, Eigen::Dynamic, 1>;

MatrixLD to_long_double(const BigMatrix& m) {
  MatrixLD out(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) out(i, j) = m(i, j).convert_to<long double>();
  return out;
}

std::vector<double> sorted_abs(std::vector<double> v) {
  for (auto& x : v) x = std::abs(x);
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

CartanAction from_unit_system(const NumberField& field, const UnitSystem& us) {
  CartanAction action;
  action.n = field.degree();
  for (const auto& u : us.units) {
    BigMatrix m = field.multiplication_matrix(u);
    BigInt d = determinant(m);
    if (d != 1 && d != -1) throw Error(ErrorKind::DeterminantNotUnit, "determinant " + d.str());
    Eigen::EigenSolver<Eigen::MatrixXd> es(m.to_double(), false);
    std::vector<double> eig, emb;
    for (int j = 0; j < action.n; ++j) eig.push_back(std::abs(es.eigenvalues()[j]));
    for (long double v : field.embed(u)) emb.push_back(static_cast<double>(v));
    eig = sorted_abs(eig);
    emb = sorted_abs(emb);
    for (int j = 0; j < action.n; ++j)
      if (std::abs(eig[j] - emb[j]) > 1e-8 * std::max(1.0, emb[j]))
        throw Error(ErrorKind::NumericalFailure, "eigenvalues do not match the embeddings");
    action.matrices.push_back(std::move(m));
  }
  action.lyapunov = us.log_matrix;
  return action;
}

ActionDiagnostics verify_action(const std::vector<BigMatrix>& matrices) {
  if (matrices.empty()) throw Error(ErrorKind::InvalidInput, "no matrices");
  const int n = matrices.front().rows();
  for (const auto& m : matrices)
    if (!m.is_square() || m.rows() != n) throw Error(ErrorKind::InvalidInput, "matrices must be square of equal size");
  if (n < 2) throw Error(ErrorKind::InvalidInput, "matrix size must be at least 2");
  ActionDiagnostics d;
  for (size_t i = 0; i < matrices.size(); ++i)
    for (size_t j = i + 1; j < matrices.size(); ++j)
      if (!(matrices[i] * matrices[j] == matrices[j] * matrices[i]))
        throw Error(ErrorKind::NotCommuting,
                    "generators " + std::to_string(i + 1) + " and " + std::to_string(j + 1) + " do not commute");
  d.commuting = true;
  for (const auto& m : matrices) {
    BigInt det = determinant(m);
    if (det != 1 && det != -1) throw Error(ErrorKind::NotUnimodular, "determinant " + det.str());
    d.determinants.push_back(det);
  }
  d.unimodular = true;
  d.first_char_poly = IntPolynomial(characteristic_polynomial(matrices.front()));
  if (!is_irreducible(d.first_char_poly))
    throw Error(ErrorKind::ReducibleCharPoly, d.first_char_poly.to_string());
  d.irreducible = true;

  RealEmbeddings roots = find_real_roots(d.first_char_poly);
  const int k = static_cast<int>(matrices.size());
  std::vector<MatrixLD> mats;
  for (const auto& m : matrices) mats.push_back(to_long_double(m));
  d.eigenvalues = Eigen::MatrixXd(n, k);
  for (int j = 0; j < n; ++j) {
    // Inverse iteration for the eigenvector of A_1 at the polished root.
    long double lambda = roots.roots[j];
    long double shift = lambda + 1e-12L * (1 + std::abs(lambda));
    MatrixLD a = mats[0] - shift * MatrixLD::Identity(n, n);
    Eigen::PartialPivLU<MatrixLD> lu(a);
    VectorLD v = VectorLD::Ones(n);
    for (int it = 0; it < 4; ++it) {
      v = lu.solve(v);
      v /= v.norm();
    }
    for (int i = 0; i < k; ++i) {
      VectorLD av = mats[i] * v;
      long double mu = v.dot(av);
      long double res = (av - mu * v).norm() / std::max<long double>(1, mats[i].norm());
      d.max_residual = std::max(d.max_residual, static_cast<double>(res));
      d.eigenvalues(j, i) = static_cast<double>(mu);
    }
  }
  if (d.max_residual > 1e-8) throw Error(ErrorKind::NotCommuting, "generators lack a common eigenbasis");
  return d;
}

Eigen::MatrixXd lyapunov_matrix(const std::vector<BigMatrix>& matrices) {
  ActionDiagnostics d = verify_action(matrices);
  Eigen::MatrixXd x(d.eigenvalues.rows(), d.eigenvalues.cols());
  for (int j = 0; j < x.rows(); ++j)
    for (int i = 0; i < x.cols(); ++i) {
      double mu = std::abs(d.eigenvalues(j, i));
      if (mu < 1e-300) throw Error(ErrorKind::ZeroEigenvalue, "zero eigenvalue");
      x(j, i) = std::log(mu);
    }
  for (int i = 0; i < x.cols(); ++i)
    if (std::abs(x.col(i).sum()) > kRealTolerance)
      throw Error(ErrorKind::NumericalFailure, "Lyapunov column does not sum to zero");
  return x;
}

Eigen::MatrixXd lyapunov_matrix(const CartanAction& action) {
  if (action.lyapunov.size() > 0) return action.lyapunov;
  return lyapunov_matrix(action.matrices);
}

CartanAction action_from_matrices(const std::vector<BigMatrix>& matrices) {
  CartanAction a;
  a.lyapunov = lyapunov_matrix(matrices);
  a.n = matrices.front().rows();
  a.matrices = matrices;
  return a;
}

ActionCase classify(const Eigen::MatrixXd& x) {
  if (x.cols() == 0) return ActionCase::O;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(x);
  double scale = std::max(1.0, x.cwiseAbs().maxCoeff());
  int rank = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > 1e-9 * scale) ++rank;
  return rank == x.cols() ? ActionCase::P : ActionCase::O;
}

namespace {

std::optional<Eigen::VectorXd> chamber_witness(const Eigen::MatrixXd& x, const std::vector<int>& signs) {
  const int n = static_cast<int>(x.rows());
  const int k = static_cast<int>(x.cols());
  // Variables (t, s): maximize s with sigma_j chi_j(t) >= s, s <= 1, |t_i| <= 1.
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n + 1 + 2 * k, k + 1);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(n + 1 + 2 * k);
  for (int j = 0; j < n; ++j) {
    a.row(j).head(k) = -signs[j] * x.row(j);
    a(j, k) = 1.0;
  }
  a(n, k) = 1.0;
  b(n) = 1.0;
  for (int i = 0; i < k; ++i) {
    a(n + 1 + 2 * i, i) = 1.0;
    a(n + 2 + 2 * i, i) = -1.0;
    b(n + 1 + 2 * i) = 1.0;
    b(n + 2 + 2 * i) = 1.0;
  }
  Eigen::VectorXd c = Eigen::VectorXd::Zero(k + 1);
  c(k) = 1.0;
  LpResult r = maximize(a, b, c);
  if (r.status != LpStatus::Optimal || r.value <= 1e-9) return std::nullopt;
  Eigen::VectorXd t = r.x.head(k);
  for (int j = 0; j < n; ++j)
    if (signs[j] * x.row(j).dot(t) <= 0) return std::nullopt;
  return t;
}

}  // namespace

std::vector<WeylChamber> weyl_chambers(const Eigen::MatrixXd& x, std::uint64_t seed, int samples) {
  const int n = static_cast<int>(x.rows());
  const int k = static_cast<int>(x.cols());
  if (classify(x) != ActionCase::P) throw Error(ErrorKind::CaseO, "Weyl chambers need a CaseP matrix");
  if (k >= 2) {
    double scale = x.cwiseAbs().maxCoeff();
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b) {
        double worst = 0;
        for (int p = 0; p < k; ++p)
          for (int q = p + 1; q < k; ++q)
            worst = std::max(worst, std::abs(x(a, p) * x(b, q) - x(a, q) * x(b, p)));
        if (worst < 1e-10 * scale * scale)
          throw Error(ErrorKind::DegenerateArrangement,
                      "functionals " + std::to_string(a + 1) + " and " + std::to_string(b + 1) + " are proportional");
      }
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::set<std::vector<int>> candidates;
  for (int s = 0; s < samples; ++s) {
    Eigen::VectorXd t(k);
    for (int i = 0; i < k; ++i) t(i) = gauss(rng);
    Eigen::VectorXd v = x * t;
    std::vector<int> sig(n);
    bool generic = true;
    for (int j = 0; j < n; ++j) {
      if (std::abs(v(j)) < 1e-12) generic = false;
      sig[j] = v(j) > 0 ? 1 : -1;
    }
    if (generic) candidates.insert(sig);
  }
  // Complete the sampled set by testing every remaining pattern when feasible.
  if (n <= 12) {
    for (std::uint64_t code = 0; code < (std::uint64_t{1} << n); ++code) {
      std::vector<int> sig(n);
      for (int j = 0; j < n; ++j) sig[j] = (code >> j) & 1U ? 1 : -1;
      candidates.insert(sig);
    }
  }
  std::vector<WeylChamber> out;
  for (const auto& sig : candidates) {
    auto w = chamber_witness(x, sig);
    if (w) out.push_back({sig, *w});
  }
  return out;
}

double entropy_of_element(const Eigen::MatrixXd& x, const Eigen::VectorXd& t) {
  if (t.size() != x.cols()) throw Error(ErrorKind::InvalidInput, "element length must match generator count");
  return 0.5 * (x * t).cwiseAbs().sum();
}

double entropy_of_element(const Eigen::MatrixXd& x, const std::vector<long long>& m) {
  Eigen::VectorXd t(static_cast<int>(m.size()));
  for (size_t i = 0; i < m.size(); ++i) t(static_cast<int>(i)) = static_cast<double>(m[i]);
  return entropy_of_element(x, t);
}

}  // namespace cartan
