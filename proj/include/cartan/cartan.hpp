#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "cartan/linalg.hpp"
#include "cartan/numberfield.hpp"

namespace cartan {

/// Commuting unimodular integer matrices with their Lyapunov matrix.
/// lyapunov(j, i) = log|lambda_j(A_i)|, n rows and one column per generator.
struct CartanAction {
  int n = 0;
  std::vector<BigMatrix> matrices;
  Eigen::MatrixXd lyapunov;
};

struct ActionDiagnostics {
  bool commuting = false;
  bool unimodular = false;
  bool irreducible = false;
  std::vector<BigInt> determinants;
  IntPolynomial first_char_poly;
  /// eigenvalues(j, i): common eigenvalue j of A_i, rows sorted by A_1's eigenvalues.
  Eigen::MatrixXd eigenvalues;
  double max_residual = 0.0;  // largest ||A_i v_j - mu v_j|| / ||A_i||
};

/// A_i = multiplication by eps_i on the order basis (p_i(C_f) on Z[lambda]).
CartanAction from_unit_system(const NumberField& field, const UnitSystem& us);

/// Checks commutation, unimodularity, irreducibility and simultaneous eigenvectors.
/// Raises NotCommuting, NotUnimodular, ReducibleCharPoly or NotTotallyReal.
ActionDiagnostics verify_action(const std::vector<BigMatrix>& matrices);

Eigen::MatrixXd lyapunov_matrix(const std::vector<BigMatrix>& matrices);
Eigen::MatrixXd lyapunov_matrix(const CartanAction& action);

/// Builds a validated action from raw matrices.
CartanAction action_from_matrices(const std::vector<BigMatrix>& matrices);

enum class ActionCase { P, O };

/// CaseP iff X has full column rank.
ActionCase classify(const Eigen::MatrixXd& x);

struct WeylChamber {
  std::vector<int> signs;  // +-1 per Lyapunov functional
  Eigen::VectorXd witness;
};

/// Sign patterns of (chi_1(t), ..., chi_n(t)) realized by some t, each with a
/// certified witness. Raises DegenerateArrangement.
std::vector<WeylChamber> weyl_chambers(const Eigen::MatrixXd& x, std::uint64_t seed = 20240601,
                                       int samples = 100000);

/// h(t) = 1/2 sum_j |chi_j(t)|.
double entropy_of_element(const Eigen::MatrixXd& x, const Eigen::VectorXd& t);
double entropy_of_element(const Eigen::MatrixXd& x, const std::vector<long long>& m);

}  // namespace cartan
