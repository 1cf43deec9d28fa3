#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "cartan/cartan.hpp"
#include "cartan/fried.hpp"
#include "cartan/slow.hpp"
#include "cartan/tables.hpp"

namespace cartan {

struct AnalysisOptions {
  int unit_bound = 0;  // 0 selects default_unit_bound(n)
  MonteCarloSettings mc;
  int one_entropy_radius = 3;
  bool l_entropies = true;
  int max_ell = 2;  // searched ranks; rank n-1 is always reported
  int l_basis_bound = 3;
  std::uint64_t l_budget = 3000000;
  double zimmert_s = 0.35;
};

struct FriedReport {
  int n = 0;
  bool case_p = true;
  double regulator = 0.0;
  double vol_closed = 0.0;
  VolumeEstimate vol_geometric;
  double fried_entropy = 0.0;       // closed form
  double fried_definitional = 0.0;  // from vol_geometric
  OneEntropy one_entropy;
  double one_entropy_lower_bound = 0.0;  // c n
  std::vector<LEntropy> l_entropies;
  double zimmert_lb = 0.0;  // Z(n, s) at the configured s; 0 when n < 3
};

struct Check {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Everything derived from a Lyapunov matrix.
struct EntropyReport {
  FriedReport fried;
  std::optional<SlowReport> slow;  // absent for rank one
  std::vector<Check> checks;

  bool passed() const;
};

EntropyReport analyze_lyapunov(const Eigen::MatrixXd& x, const AnalysisOptions& opts = {});

struct FieldReport {
  std::string polynomial;
  int degree = 0;
  std::string discriminant;
  std::string order_index;
  std::vector<std::string> units;
  Eigen::MatrixXd lyapunov;
  const TableEntry* table = nullptr;
  EntropyReport entropy;
};

FieldReport analyze_field(const std::string& polynomial, const AnalysisOptions& opts = {});

struct ActionReport {
  ActionDiagnostics diagnostics;
  Eigen::MatrixXd lyapunov;
  EntropyReport entropy;
};

/// Validates the matrices first (NotCommuting and friends propagate).
ActionReport analyze_action(const std::vector<BigMatrix>& matrices, const AnalysisOptions& opts = {});

/// Matrices from "poly + unit coefficient vectors": units are power-basis
/// coefficients, acting through p_i(C_f).
std::vector<BigMatrix> matrices_from_units(const std::string& polynomial,
                                           const std::vector<std::vector<long long>>& units);

struct TableRow {
  TableEntry entry;
  double regulator = 0.0;
  double fried = 0.0;
  double delta = 0.0;  // max of |R - R_ref| and |h* - h*_ref|
  bool passed = false;
  std::string error;
};

/// All manifest rows in manifest order; rows are computed concurrently.
std::vector<TableRow> run_tables(int unit_bound = 0);

std::string tables_csv(const std::vector<TableRow>& rows);

struct RunManifest {
  std::string command;
  nlohmann::json inputs = nlohmann::json::object();
  std::uint64_t seed = 20240601;
  nlohmann::json tolerances = nlohmann::json::object();
  std::optional<double> wall_time;
};

std::string tool_version();

nlohmann::json to_json(const RunManifest& m);
nlohmann::json to_json(const VolumeEstimate& v);
nlohmann::json to_json(const FriedReport& r);
nlohmann::json to_json(const SlowReport& r);
nlohmann::json to_json(const CofN& c);
nlohmann::json to_json(const EntropyReport& r);
nlohmann::json to_json(const FieldReport& r);
nlohmann::json to_json(const ActionReport& r);
nlohmann::json to_json(const std::vector<TableRow>& rows);

/// %.6g formatting used by all text output.
std::string fmt6(double v);

}  // namespace cartan
