#include "cartan/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "cartan/bounds.hpp"
#include "cartan/error.hpp"
#include "cartan/numberfield.hpp"
#include "cartan/parallel.hpp"
#include "cartan/polynomial.hpp"

namespace cartan {

using nlohmann::json;

namespace {

constexpr double kUniversalFriedBound = 0.089;

std::string big_to_string(const BigInt& v) { return v.str(); }

Check make_check(std::string name, bool passed, const std::string& detail) {
  return Check{std::move(name), passed, detail};
}

json matrix_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

std::string fmt6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string tool_version() { return CARTAN_ENTROPY_VERSION; }

bool EntropyReport::passed() const {
  for (const auto& c : checks) {
    if (!c.passed) return false;
  }
  return true;
}

EntropyReport analyze_lyapunov(const Eigen::MatrixXd& x, const AnalysisOptions& opts) {
  const int n = static_cast<int>(x.rows());
  if (n < 2 || x.cols() != n - 1) throw Error(ErrorKind::InvalidInput, "Lyapunov matrix must be n x (n-1) with n >= 2");
  EntropyReport rep;
  FriedReport& f = rep.fried;
  f.n = n;
  f.case_p = classify(x) == ActionCase::P;
  if (n >= 3) f.zimmert_lb = zimmert_fried_lb(n, opts.zimmert_s);
  if (!f.case_p) {
    // Both entropies vanish when some element has zero entropy.
    if (n >= 3) rep.slow = slow_entropy(x);
    rep.checks.push_back(make_check("classification", true, "CaseO: Lyapunov functionals share a kernel vector"));
    return rep;
  }
  f.regulator = regulator_of_log_matrix(x);
  BallVolumes vols = entropy_ball_volume(x, opts.mc);
  f.vol_closed = vols.closed_form;
  f.vol_geometric = vols.geometric;
  try {
    f.fried_entropy = fried_average_entropy(x);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::NumericalFailure) throw;
    f.fried_entropy = f.regulator * std::ldexp(1.0, n - 1) / binomial(2 * n - 2, n - 1);
  }
  f.fried_definitional = fried_from_volume(n - 1, f.vol_geometric.value);
  {
    std::ostringstream d;
    bool ok;
    if (f.vol_geometric.method == VolumeMethod::Exact) {
      const double rel = std::abs(f.fried_definitional - f.fried_entropy) / f.fried_entropy;
      ok = rel <= 1e-6;
      d << "exact volume, relative difference " << fmt6(rel);
    } else {
      const double diff = std::abs(f.vol_geometric.value - f.vol_closed);
      ok = diff <= 3.0 * f.vol_geometric.half_width;
      d << "Monte Carlo volume " << fmt6(f.vol_geometric.value) << " +- " << fmt6(f.vol_geometric.half_width)
        << " vs closed form " << fmt6(f.vol_closed);
    }
    rep.checks.push_back(make_check("closedFormVsGeometric", ok, d.str()));
  }

  f.one_entropy = one_entropy(x, opts.one_entropy_radius);
  f.one_entropy_lower_bound = golden_entropy_constant() * n;
  rep.checks.push_back(make_check("oneEntropyLowerBound", f.one_entropy.value >= f.one_entropy_lower_bound - 1e-9,
                                  fmt6(f.one_entropy.value) + " >= " + fmt6(f.one_entropy_lower_bound)));

  if (opts.l_entropies) {
    for (int ell = 1; ell <= std::min(opts.max_ell, n - 2); ++ell) {
      f.l_entropies.push_back(l_entropy_search(x, ell, opts.l_basis_bound, opts.l_budget));
    }
    LEntropy full;
    full.ell = n - 1;
    full.upper_estimate = f.fried_entropy;
    full.lower_bound = l_entropy_lower_bound(n, n - 1);
    full.basis_bound = 1;
    full.sublattices = 1;
    for (int i = 0; i < n - 1; ++i) {
      std::vector<long long> row(static_cast<std::size_t>(n - 1), 0);
      row[static_cast<std::size_t>(i)] = 1;
      full.best.push_back(row);
    }
    f.l_entropies.push_back(full);
    bool ok = true;
    std::ostringstream d;
    for (const auto& l : f.l_entropies) {
      ok = ok && l.upper_estimate >= l.lower_bound - 1e-9;
      d << "l=" << l.ell << ": " << fmt6(l.upper_estimate) << " >= " << fmt6(l.lower_bound) << "; ";
    }
    if (!f.l_entropies.empty() && f.l_entropies.front().ell == 1) {
      const double diff = std::abs(f.l_entropies.front().upper_estimate - f.one_entropy.value);
      ok = ok && diff <= 1e-9;
      d << "l=1 vs 1-entropy difference " << fmt6(diff);
    }
    rep.checks.push_back(make_check("lEntropyLowerBounds", ok, d.str()));
  }

  if (n >= 3) {
    try {
      rep.slow = slow_entropy(x);
      rep.checks.push_back(make_check("corollaryIdentity", true,
                                      "c(k) = " + fmt6(rep.slow->corollary_c) + " = C(k+1)/2"));
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::IdentityViolation && e.kind() != ErrorKind::BoundViolation) throw;
      rep.checks.push_back(make_check("corollaryIdentity", false, e.what()));
    }
  }
  return rep;
}

FieldReport analyze_field(const std::string& polynomial, const AnalysisOptions& opts) {
  const IntPolynomial f = IntPolynomial::parse(polynomial);
  const NumberField field = NumberField::create(f);
  const int bound = opts.unit_bound > 0 ? opts.unit_bound : default_unit_bound(field.degree());
  const UnitSystem us = fundamental_system(field, search_units(field, bound));
  const CartanAction action = from_unit_system(field, us);
  FieldReport rep;
  rep.polynomial = f.to_string();
  rep.degree = field.degree();
  rep.discriminant = big_to_string(discriminant(f) / (field.order().index * field.order().index));
  rep.order_index = big_to_string(field.order().index);
  for (const auto& u : us.units) rep.units.push_back(u.to_string());
  rep.lyapunov = action.lyapunov;
  rep.table = find_table_entry(rep.polynomial);
  rep.entropy = analyze_lyapunov(action.lyapunov, opts);
  return rep;
}

ActionReport analyze_action(const std::vector<BigMatrix>& matrices, const AnalysisOptions& opts) {
  ActionReport rep;
  rep.diagnostics = verify_action(matrices);
  rep.lyapunov = lyapunov_matrix(matrices);
  rep.entropy = analyze_lyapunov(rep.lyapunov, opts);
  return rep;
}

std::vector<BigMatrix> matrices_from_units(const std::string& polynomial,
                                           const std::vector<std::vector<long long>>& units) {
  const IntPolynomial f = IntPolynomial::parse(polynomial);
  const NumberField field = NumberField::create(f, false);
  if (units.empty()) throw Error(ErrorKind::InvalidInput, "no units given");
  std::vector<BigMatrix> out;
  for (const auto& u : units) {
    if (static_cast<int>(u.size()) > field.degree()) {
      throw Error(ErrorKind::InvalidInput, "unit has more coefficients than the degree");
    }
    std::vector<long long> c = u;
    c.resize(static_cast<std::size_t>(field.degree()), 0);
    const FieldElement e = FieldElement::from_int64(c);
    const BigInt norm = element_norm(f, e);
    if (norm != 1 && norm != -1) throw Error(ErrorKind::DeterminantNotUnit, "element " + e.to_string() + " is not a unit");
    out.push_back(field.multiplication_matrix(e));
  }
  return out;
}

std::vector<TableRow> run_tables(int unit_bound) {
  const auto& manifest = table_manifest();
  std::vector<TableRow> rows(manifest.size());
  parallel_for(manifest.size(), [&](std::size_t i) {
    TableRow& row = rows[i];
    row.entry = manifest[i];
    try {
      const IntPolynomial f = IntPolynomial::parse(row.entry.polynomial);
      const NumberField field = NumberField::create(f);
      const int bound = unit_bound > 0 ? unit_bound : default_unit_bound(field.degree());
      const UnitSystem us = fundamental_system(field, search_units(field, bound));
      row.regulator = us.regulator;
      row.fried = fried_average_entropy(us.log_matrix);
      row.delta = std::max(std::abs(row.regulator - row.entry.regulator), std::abs(row.fried - row.entry.fried));
      row.passed = row.delta <= kTableTolerance;
    } catch (const Error& e) {
      row.error = e.what();
      row.passed = false;
    }
  });
  return rows;
}

std::string tables_csv(const std::vector<TableRow>& rows) {
  std::ostringstream os;
  os << "degree,discriminant,polynomial,regulator,regulator_ref,fried,fried_ref,delta,passed\n";
  for (const auto& r : rows) {
    os << r.entry.degree << ',' << r.entry.discriminant << ',' << r.entry.polynomial << ',' << fmt6(r.regulator) << ','
       << fmt6(r.entry.regulator) << ',' << fmt6(r.fried) << ',' << fmt6(r.entry.fried) << ',' << fmt6(r.delta) << ','
       << (r.passed ? "true" : "false") << '\n';
  }
  return os.str();
}

json to_json(const RunManifest& m) {
  json j = {{"command", m.command},
            {"inputs", m.inputs},
            {"version", tool_version()},
            {"seed", m.seed},
            {"tolerances", m.tolerances}};
  if (m.wall_time) j["wallTime"] = *m.wall_time;
  return j;
}

json to_json(const VolumeEstimate& v) {
  return {{"value", v.value}, {"method", to_string(v.method)}, {"halfWidth", v.half_width}, {"samples", v.samples}};
}

json to_json(const FriedReport& r) {
  json ls = json::array();
  for (const auto& l : r.l_entropies) {
    ls.push_back({{"ell", l.ell},
                  {"upperEstimate", l.upper_estimate},
                  {"lowerBound", l.lower_bound},
                  {"basisBound", l.basis_bound},
                  {"sublattices", l.sublattices},
                  {"bestBasis", l.best}});
  }
  return {{"n", r.n},
          {"casePositive", r.case_p},
          {"regulator", r.regulator},
          {"volClosed", r.vol_closed},
          {"volGeometric", to_json(r.vol_geometric)},
          {"friedEntropy", r.fried_entropy},
          {"friedDefinitional", r.fried_definitional},
          {"oneEntropy",
           {{"value", r.one_entropy.value},
            {"minimizer", r.one_entropy.minimizer},
            {"pointsChecked", r.one_entropy.points_checked},
            {"lowerBound", r.one_entropy_lower_bound}}},
          {"lEntropies", ls},
          {"zimmertLB", r.zimmert_lb}};
}

json to_json(const CofN& c) {
  return {{"n", c.n},
          {"value", c.value},
          {"equalCoeffValue", c.equal_coefficient_value},
          {"gridValue", c.grid_value},
          {"evaluations", c.evaluations},
          {"trace", c.trace}};
}

json to_json(const SlowReport& r) {
  return {{"n", r.n},
          {"casePositive", r.case_p},
          {"regulator", r.regulator},
          {"cOfN", to_json(r.c)},
          {"cVector", r.c.coefficients},
          {"shEntropy", r.sh},
          {"equalCoeffValue", r.c.equal_coefficient_value},
          {"corollaryC", r.corollary_c},
          {"bounds", {r.lower_bound, r.upper_bound}}};
}

json to_json(const EntropyReport& r) {
  json checks = json::array();
  for (const auto& c : r.checks) checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  const FriedReport& f = r.fried;
  json j = {{"fried", to_json(f)},
            {"slow", r.slow ? to_json(*r.slow) : json(nullptr)},
            {"bounds",
             {{"zimmertFriedLB", f.zimmert_lb},
              {"universalFriedLB", kUniversalFriedBound},
              {"aboveZimmert", f.fried_entropy > f.zimmert_lb},
              {"aboveUniversal", f.fried_entropy >= kUniversalFriedBound - 1e-6}}},
            {"checks", checks},
            {"passed", r.passed()}};
  return j;
}

json to_json(const FieldReport& r) {
  json j = {{"polynomial", r.polynomial},
            {"degree", r.degree},
            {"discriminant", r.discriminant},
            {"orderIndex", r.order_index},
            {"units", r.units},
            {"lyapunov", matrix_json(r.lyapunov)}};
  if (r.table) {
    j["reference"] = {{"discriminant", r.table->discriminant},
                      {"printedPolynomial", r.table->printed},
                      {"regulator", r.table->regulator},
                      {"friedEntropy", r.table->fried},
                      {"note", r.table->note}};
  } else {
    j["reference"] = nullptr;
  }
  j["report"] = to_json(r.entropy);
  return j;
}

json to_json(const ActionReport& r) {
  const auto& d = r.diagnostics;
  json dets = json::array();
  for (const auto& v : d.determinants) dets.push_back(v.str());
  return {{"diagnostics",
           {{"commuting", d.commuting},
            {"unimodular", d.unimodular},
            {"irreducible", d.irreducible},
            {"determinants", dets},
            {"charPoly", d.first_char_poly.to_string()},
            {"eigenvalues", matrix_json(d.eigenvalues)},
            {"maxResidual", d.max_residual}}},
          {"lyapunov", matrix_json(r.lyapunov)},
          {"report", to_json(r.entropy)}};
}

json to_json(const std::vector<TableRow>& rows) {
  json out = json::array();
  for (const auto& r : rows) {
    out.push_back({{"degree", r.entry.degree},
                   {"discriminant", r.entry.discriminant},
                   {"polynomial", r.entry.polynomial},
                   {"printedPolynomial", r.entry.printed},
                   {"regulator", r.regulator},
                   {"regulatorRef", r.entry.regulator},
                   {"friedEntropy", r.fried},
                   {"friedEntropyRef", r.entry.fried},
                   {"delta", r.delta},
                   {"passed", r.passed},
                   {"error", r.error}});
  }
  return out;
}

}  // namespace cartan
