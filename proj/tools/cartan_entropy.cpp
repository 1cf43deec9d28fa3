// Command-line front end: field, tables, action, bounds, cn.

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "cartan/bounds.hpp"
#include "cartan/error.hpp"
#include "cartan/report.hpp"
#include "cartan/slow.hpp"

using cartan::fmt6;
using nlohmann::json;

namespace {

constexpr int kExitMismatch = 1;
constexpr int kExitInvalid = 2;

struct Globals {
  bool json_out = false;
  bool csv_out = false;
  bool timing = false;
  int unit_bound = 0;
  std::uint64_t mc_samples = 1000000;
  std::uint64_t seed = 20240601;
  int max_ell = 2;
  int l_bound = 3;
  std::uint64_t l_budget = 3000000;
  bool no_l = false;
  double zimmert_s = 0.35;
};

cartan::AnalysisOptions analysis_options(const Globals& g) {
  cartan::AnalysisOptions o;
  o.unit_bound = g.unit_bound;
  o.mc.samples = g.mc_samples;
  o.mc.seed = g.seed;
  o.max_ell = g.max_ell;
  o.l_basis_bound = g.l_bound;
  o.l_budget = g.l_budget;
  o.l_entropies = !g.no_l;
  o.zimmert_s = g.zimmert_s;
  return o;
}

cartan::RunManifest manifest(const Globals& g, std::string command, json inputs) {
  cartan::RunManifest m;
  m.command = std::move(command);
  m.inputs = std::move(inputs);
  m.seed = g.seed;
  m.tolerances = {{"real", cartan::kRealTolerance},
                  {"table", cartan::kTableTolerance},
                  {"mcSamples", g.mc_samples},
                  {"unitBound", g.unit_bound},
                  {"lBasisBound", g.l_bound},
                  {"lBudget", g.l_budget},
                  {"zimmertS", g.zimmert_s}};
  return m;
}

// "a..b" or a single value.
template <class T>
std::pair<T, T> parse_range(const std::string& text) {
  auto convert = [&](const std::string& s) {
    std::istringstream is(s);
    T v{};
    is >> v;
    if (!is || !is.eof()) throw cartan::Error(cartan::ErrorKind::InvalidInput, "bad range '" + text + "'");
    return v;
  };
  const auto dots = text.find("..");
  if (dots == std::string::npos) {
    T v = convert(text);
    return {v, v};
  }
  T lo = convert(text.substr(0, dots));
  T hi = convert(text.substr(dots + 2));
  if (lo > hi) throw cartan::Error(cartan::ErrorKind::InvalidInput, "empty range '" + text + "'");
  return {lo, hi};
}

void print_entropy_text(const cartan::EntropyReport& r) {
  const auto& f = r.fried;
  std::cout << "n                    " << f.n << '\n';
  std::cout << "case                 " << (f.case_p ? "P" : "O") << '\n';
  if (!f.case_p) {
    std::cout << "fried entropy        0\nslow entropy         0\n";
  } else {
    std::cout << "regulator            " << fmt6(f.regulator) << '\n';
    std::cout << "ball volume          " << fmt6(f.vol_closed) << " (closed form), " << fmt6(f.vol_geometric.value)
              << " (" << cartan::to_string(f.vol_geometric.method) << ")\n";
    std::cout << "fried entropy        " << fmt6(f.fried_entropy) << '\n';
    std::cout << "1-entropy            " << fmt6(f.one_entropy.value) << " (lower bound " << fmt6(f.one_entropy_lower_bound)
              << ")\n";
    for (const auto& l : f.l_entropies) {
      std::cout << "l-entropy l=" << l.ell << "        <= " << fmt6(l.upper_estimate) << " (lower bound "
                << fmt6(l.lower_bound) << ", basis bound " << l.basis_bound << ")\n";
    }
    if (r.slow) {
      std::cout << "C(n)                 " << fmt6(r.slow->c.value) << " (equal coefficients " << fmt6(r.slow->c.equal_coefficient_value)
                << ")\n";
      std::cout << "slow entropy         " << fmt6(r.slow->sh) << '\n';
      std::cout << "corollary c(k)       " << fmt6(r.slow->corollary_c) << '\n';
    }
  }
  if (f.n >= 3) std::cout << "zimmert bound        " << fmt6(f.zimmert_lb) << '\n';
  for (const auto& c : r.checks) {
    std::cout << "check " << c.name << ": " << (c.passed ? "pass" : "FAIL") << " (" << c.detail << ")\n";
  }
}

int cmd_field(const Globals& g, const std::string& poly) {
  const auto start = std::chrono::steady_clock::now();
  const auto rep = cartan::analyze_field(poly, analysis_options(g));
  auto m = manifest(g, "field", {{"polynomial", poly}});
  if (g.timing) m.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (g.json_out) {
    json j = cartan::to_json(rep);
    j["manifest"] = cartan::to_json(m);
    std::cout << j.dump(2) << '\n';
  } else if (g.csv_out) {
    const auto& f = rep.entropy.fried;
    std::cout << "key,value\n"
              << "polynomial," << rep.polynomial << "\ndiscriminant," << rep.discriminant << "\nregulator,"
              << fmt6(f.regulator) << "\nfriedEntropy," << fmt6(f.fried_entropy) << "\noneEntropy,"
              << fmt6(f.one_entropy.value) << "\nshEntropy," << (rep.entropy.slow ? fmt6(rep.entropy.slow->sh) : "")
              << "\npassed," << (rep.entropy.passed() ? "true" : "false") << '\n';
  } else {
    std::cout << "polynomial           " << rep.polynomial << '\n';
    std::cout << "discriminant         " << rep.discriminant << '\n';
    std::cout << "order index          " << rep.order_index << '\n';
    for (const auto& u : rep.units) std::cout << "unit                 " << u << '\n';
    print_entropy_text(rep.entropy);
    if (rep.table) {
      std::cout << "reference            R " << fmt6(rep.table->regulator) << ", h* " << fmt6(rep.table->fried) << '\n';
    }
    if (m.wall_time) std::cout << "wall time            " << fmt6(*m.wall_time) << " s\n";
  }
  return rep.entropy.passed() ? 0 : kExitMismatch;
}

int cmd_tables(const Globals& g) {
  const auto start = std::chrono::steady_clock::now();
  const auto rows = cartan::run_tables(g.unit_bound);
  auto m = manifest(g, "tables", json::object());
  if (g.timing) m.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  bool ok = true;
  for (const auto& r : rows) ok = ok && r.passed;
  if (g.json_out) {
    json j = {{"manifest", cartan::to_json(m)}, {"rows", cartan::to_json(rows)}, {"passed", ok}};
    std::cout << j.dump(2) << '\n';
  } else if (g.csv_out) {
    std::cout << cartan::tables_csv(rows);
  } else {
    std::cout << "deg  D_K      R_K        R_ref      h*         h*_ref     |delta|    status\n";
    for (const auto& r : rows) {
      char line[256];
      std::snprintf(line, sizeof line, "%-4d %-8lld %-10s %-10s %-10s %-10s %-10s %s", r.entry.degree,
                    r.entry.discriminant, fmt6(r.regulator).c_str(), fmt6(r.entry.regulator).c_str(),
                    fmt6(r.fried).c_str(), fmt6(r.entry.fried).c_str(), fmt6(r.delta).c_str(),
                    r.passed ? "ok" : (r.error.empty() ? "MISMATCH" : r.error.c_str()));
      std::cout << line << '\n';
    }
    if (m.wall_time) std::cout << "wall time " << fmt6(*m.wall_time) << " s\n";
  }
  return ok ? 0 : kExitMismatch;
}

std::vector<cartan::BigMatrix> read_matrices(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw cartan::Error(cartan::ErrorKind::InvalidInput, "cannot open " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw cartan::Error(cartan::ErrorKind::ParseError, e.what());
  }
  try {
    if (j.is_object()) {
      return cartan::matrices_from_units(j.at("polynomial").get<std::string>(),
                                         j.at("units").get<std::vector<std::vector<long long>>>());
    }
    std::vector<cartan::BigMatrix> out;
    for (const auto& mat : j) {
      const int rows = static_cast<int>(mat.size());
      cartan::BigMatrix m(rows, rows);
      for (int r = 0; r < rows; ++r) {
        if (static_cast<int>(mat[r].size()) != rows) {
          throw cartan::Error(cartan::ErrorKind::InvalidInput, "matrices must be square");
        }
        for (int c = 0; c < rows; ++c) {
          const auto& e = mat[r][c];
          m(r, c) = e.is_string() ? cartan::BigInt(e.get<std::string>()) : cartan::BigInt(e.get<long long>());
        }
      }
      out.push_back(std::move(m));
    }
    return out;
  } catch (const json::exception& e) {
    throw cartan::Error(cartan::ErrorKind::ParseError, e.what());
  } catch (const std::runtime_error& e) {
    if (dynamic_cast<const cartan::Error*>(&e)) throw;
    throw cartan::Error(cartan::ErrorKind::ParseError, e.what());
  }
}

int cmd_action(const Globals& g, const std::string& path) {
  const auto start = std::chrono::steady_clock::now();
  const auto rep = cartan::analyze_action(read_matrices(path), analysis_options(g));
  auto m = manifest(g, "action", {{"file", path}});
  if (g.timing) m.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (g.json_out) {
    json j = cartan::to_json(rep);
    j["manifest"] = cartan::to_json(m);
    std::cout << j.dump(2) << '\n';
  } else {
    std::cout << "commuting            " << (rep.diagnostics.commuting ? "yes" : "no") << '\n';
    std::cout << "unimodular           " << (rep.diagnostics.unimodular ? "yes" : "no") << '\n';
    std::cout << "char poly            " << rep.diagnostics.first_char_poly.to_string() << '\n';
    if (!rep.entropy.fried.case_p) {
      std::cout << "classification       the Lyapunov functionals have a common kernel vector, so some element has "
                   "zero entropy\n";
    }
    print_entropy_text(rep.entropy);
    if (m.wall_time) std::cout << "wall time            " << fmt6(*m.wall_time) << " s\n";
  }
  return rep.entropy.passed() ? 0 : kExitMismatch;
}

int cmd_bounds(const Globals& g, const std::string& n_text, const std::optional<std::string>& s_text, int grid,
               const std::string& out_path) {
  const auto [n_lo, n_hi] = parse_range<int>(n_text);
  const double pref = cartan::zimmert_prefactor(0.35);
  const double b = cartan::zimmert_ab(0.35).b;
  json constants = {{"prefactor", pref},
                    {"rawPrefactor", cartan::zimmert_raw_prefactor(0.35)},
                    {"calibration", cartan::zimmert_calibration()},
                    {"b", b},
                    {"friedPrefactor", 2.0 * pref},
                    {"friedExponent", b - std::log(2.0)},
                    {"roughMinimum", cartan::zimmert_fried_lb_rough(3, 0.35)}};
  bool ok = true;
  std::vector<cartan::BoundCurve> curves;
  json result;
  if (s_text) {
    const auto [s_lo, s_hi] = parse_range<double>(*s_text);
    if (n_lo < 3) throw cartan::Error(cartan::ErrorKind::InvalidInput, "n must be at least 3");
    if (!(s_lo > 0.0)) throw cartan::Error(cartan::ErrorKind::InvalidInput, "s must be positive");
    const int steps = s_lo == s_hi ? 1 : std::max(grid, 2);
    json rows = json::array();
    for (int n = n_lo; n <= n_hi; ++n) {
      cartan::BoundCurve c;
      c.n = n;
      for (int i = 0; i < steps; ++i) {
        const double s = steps == 1 ? s_lo : s_lo + (s_hi - s_lo) * i / (steps - 1);
        c.samples.emplace_back(s, cartan::zimmert_fried_lb(n, s));
      }
      curves.push_back(c);
      if (steps == 1) {
        const double rough = cartan::zimmert_fried_lb_rough(n, s_lo);
        const double formula = 2.0 * cartan::zimmert_prefactor(s_lo) * std::exp((cartan::zimmert_ab(s_lo).b - std::log(2.0)) * n);
        const bool match = std::abs(rough - formula) <= 0.02 * formula;
        ok = ok && match;
        rows.push_back({{"n", n}, {"s", s_lo}, {"Z", c.samples[0].second}, {"Zrough", rough}, {"closedForm", formula},
                        {"roughMatchesClosedForm", match}});
      }
    }
    result = {{"fixedS", rows}};
  } else {
    cartan::ScanSettings st;
    st.n_min = n_lo;
    st.n_max = n_hi;
    st.min_over_max_n = std::min(16, n_hi);
    st.grid = grid;
    const auto scan = cartan::min_max_scan(st);
    curves = scan.curves;
    json per_n = json::array();
    for (const auto& c : scan.curves) {
      per_n.push_back({{"n", c.n}, {"argmax", c.argmax}, {"max", c.max}, {"unimodal", cartan::is_unimodal(c)}});
    }
    const bool reference_run = n_lo == 8 && n_hi == 17;
    const bool matches = std::abs(scan.value - 0.089) <= 0.002;
    if (reference_run) ok = matches;
    result = {{"minMax", scan.value},
              {"argminN", scan.argmin_n},
              {"minMaxReference", 0.089},
              {"matchesReference", matches},
              {"perN", per_n}};
  }
  if (!out_path.empty()) {
    std::ofstream out(out_path);
    if (!out) throw cartan::Error(cartan::ErrorKind::InvalidInput, "cannot write " + out_path);
    out << cartan::curves_csv(curves);
  }
  auto m = manifest(g, "bounds", {{"n", n_text}, {"s", s_text ? json(*s_text) : json(nullptr)}, {"grid", grid}});
  if (g.json_out) {
    json j = {{"manifest", cartan::to_json(m)}, {"constants", constants}, {"result", result}, {"passed", ok}};
    std::cout << j.dump(2) << '\n';
  } else if (g.csv_out) {
    std::cout << cartan::curves_csv(curves);
  } else {
    std::cout << "prefactor at s=0.35   " << fmt6(pref) << " (raw 1/a " << fmt6(cartan::zimmert_raw_prefactor(0.35)) << ")\n";
    std::cout << "b(0.35)               " << fmt6(b) << '\n';
    std::cout << "fried bound           " << fmt6(2.0 * pref) << " exp(" << fmt6(b - std::log(2.0)) << " n)\n";
    if (result.contains("minMax")) {
      std::cout << "min_n max_s Z(n,s)    " << fmt6(result["minMax"].get<double>()) << " at n = "
                << result["argminN"].get<int>() << " (reference 0.089)\n";
      for (const auto& c : curves) {
        std::cout << "  n=" << c.n << " s*=" << fmt6(c.argmax) << " max=" << fmt6(c.max) << '\n';
      }
    } else {
      for (const auto& r : result["fixedS"]) {
        std::cout << "  n=" << r["n"].get<int>() << " Z=" << fmt6(r["Z"].get<double>())
                  << " Zrough=" << fmt6(r["Zrough"].get<double>()) << " formula=" << fmt6(r["closedForm"].get<double>())
                  << '\n';
      }
    }
  }
  return ok ? 0 : kExitMismatch;
}

int cmd_cn(const Globals& g, int n) {
  if (n < 3 || n > 8) throw cartan::Error(cartan::ErrorKind::InvalidInput, "cn needs 3 <= n <= 8");
  const auto c = cartan::c_of_n(n);
  const bool probe = std::abs(c.value - c.equal_coefficient_value) <= 1e-4;
  if (g.json_out) {
    json j = cartan::to_json(c);
    j["cVector"] = c.coefficients;
    j["bounds"] = {(n - 1) / 2.0, n - 1.0};
    j["equalCoeffMatchesOptimizer"] = probe;
    j["manifest"] = cartan::to_json(manifest(g, "cn", {{"n", n}}));
    std::cout << j.dump(2) << '\n';
  } else {
    std::cout << "C(" << n << ")                 " << fmt6(c.value) << '\n';
    std::cout << "equal coefficients   " << fmt6(c.equal_coefficient_value) << '\n';
    std::cout << "minimizer            ";
    for (double v : c.coefficients) std::cout << fmt6(v) << ' ';
    std::cout << "\nbounds               [" << fmt6((n - 1) / 2.0) << ", " << fmt6(n - 1.0) << "]\n";
    std::cout << "trace                " << c.trace << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fried average entropy, l-entropies and slow entropy of Cartan actions"};
  app.set_config("--config", "", "key=value configuration file");
  app.set_version_flag("--version", cartan::tool_version());
  app.require_subcommand(1);
  Globals g;
  auto* fmt = app.add_option_group("format");
  fmt->add_flag("--json", g.json_out, "JSON output");
  fmt->add_flag("--csv", g.csv_out, "CSV output");
  fmt->require_option(0, 1);
  app.add_flag("--timing", g.timing, "Report wall time");
  app.add_option("--unit-bound", g.unit_bound, "Unit search coordinate bound (0 = by degree)")->check(CLI::NonNegativeNumber);
  app.add_option("--mc-samples", g.mc_samples, "Monte Carlo samples")->check(CLI::PositiveNumber);
  app.add_option("--seed", g.seed, "Monte Carlo seed");
  app.add_option("--max-ell", g.max_ell, "Largest searched sublattice rank")->check(CLI::NonNegativeNumber);
  app.add_option("--l-bound", g.l_bound, "Sublattice basis entry bound")->check(CLI::PositiveNumber);
  app.add_option("--l-budget", g.l_budget, "Sublattice candidate budget")->check(CLI::PositiveNumber);
  app.add_flag("--no-l-entropy", g.no_l, "Skip the sublattice search");
  app.add_option("--zimmert-s", g.zimmert_s, "Zimmert parameter for report comparisons")->check(CLI::PositiveNumber);

  std::string poly;
  auto* field = app.add_subcommand("field", "Analyze the field of a totally real polynomial");
  field->add_option("polynomial", poly, "e.g. \"x^4-x^3-3x^2+x+1\" or \"[1,1,-3,-1,1]\"")->required();

  auto* tables = app.add_subcommand("tables", "Recompute the 19 reference fields");

  std::string matrix_file;
  auto* action = app.add_subcommand("action", "Analyze commuting integer matrices from a JSON file");
  action->add_option("file", matrix_file, "JSON matrices or {polynomial, units}")->required();

  std::string n_range = "8..17";
  std::optional<std::string> s_value;
  int grid = 400;
  std::string out_path;
  auto* bounds = app.add_subcommand("bounds", "Zimmert bound constants and curves");
  bounds->add_option("--n", n_range, "n range a..b");
  bounds->add_option("--s", s_value, "fixed s or range a..b");
  bounds->add_option("--grid", grid, "s grid size")->check(CLI::Range(3, 100000));
  bounds->add_option("--out", out_path, "write curve CSV (n,s,Z) to this file");

  int cn_n = 0;
  auto* cn = app.add_subcommand("cn", "The slow entropy constant C(n)");
  cn->add_option("n", cn_n, "3 <= n <= 8")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInvalid;
  }

  try {
    if (*field) return cmd_field(g, poly);
    if (*tables) return cmd_tables(g);
    if (*action) return cmd_action(g, matrix_file);
    if (*bounds) return cmd_bounds(g, n_range, s_value, grid, out_path);
    if (*cn) return cmd_cn(g, cn_n);
  } catch (const cartan::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cartan::is_input_error(e.kind()) ? kExitInvalid : kExitMismatch;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitMismatch;
  }
  return kExitInvalid;
}
