#include <doctest.h>
#include <sys/wait.h>
#include <unistd.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <string>

#include "cartan/bounds.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args, bool merge_stderr = false) {
  const std::string cmd = std::string("\"") + CLI_PATH + "\" " + args + (merge_stderr ? " 2>&1" : " 2>/dev/null");
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf{};
  std::size_t got = 0;
  while ((got = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), got);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

json run_json(const std::string& args, int expected_code = 0) {
  const Run r = run("--json " + args);
  REQUIRE(r.code == expected_code);
  return json::parse(r.out);
}

fs::path scratch() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / ("cartan_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

fs::path write_file(const std::string& name, const std::string& text) {
  const fs::path p = scratch() / name;
  std::ofstream(p) << text;
  return p;
}

std::string quoted(const fs::path& p) { return "\"" + p.string() + "\""; }

}  // namespace

TEST_CASE("field command on the 725 quartic") {
  const Run text = run("--no-l-entropy field \"x^4-x^3-3x^2+x+1\"");
  CHECK(text.code == 0);
  CHECK(text.out.find("fried entropy        0.330028") != std::string::npos);

  const json j = run_json("--no-l-entropy field \"x^4-x^3-3x^2+x+1\"");
  CHECK(j["report"]["fried"]["friedEntropy"].get<double>() == doctest::Approx(0.330027).epsilon(1e-4 / 0.330027));
  CHECK(j["discriminant"] == "725");
  CHECK(j["manifest"]["command"] == "field");
  CHECK(j["report"]["passed"].get<bool>());
}

TEST_CASE("field command accepts coefficient lists") {
  json a = run_json("--no-l-entropy field \"x^4-x^3-3x^2+x+1\"");
  json b = run_json("--no-l-entropy field \"[1,1,-3,-1,1]\"");
  a.erase("manifest");
  b.erase("manifest");
  CHECK(a.dump() == b.dump());
}

TEST_CASE("field command rejects bad input") {
  const Run complex = run("field \"x^2+1\"", true);
  CHECK(complex.code == 2);
  CHECK(complex.out.find("NotTotallyReal") != std::string::npos);
  CHECK(run("field \"x^^2\"").code == 2);
  CHECK(run("field \"2x^2-1\"").code == 2);
}

TEST_CASE("tables command") {
  const json j = run_json("tables", 1);
  const auto& rows = j["rows"];
  REQUIRE(rows.size() == 19);
  int per_degree[7] = {};
  int passed = 0;
  double smallest = 1e300;
  long long smallest_disc = 0;
  for (const auto& r : rows) {
    ++per_degree[r["degree"].get<int>()];
    passed += r["passed"].get<bool>();
    if (r["friedEntropy"].get<double>() < smallest) {
      smallest = r["friedEntropy"].get<double>();
      smallest_disc = r["discriminant"].get<long long>();
    }
  }
  CHECK(per_degree[3] == 2);
  CHECK(per_degree[4] == 7);
  CHECK(per_degree[5] == 4);
  CHECK(per_degree[6] == 6);
  CHECK(passed == 17);
  CHECK(smallest_disc == 725);
  CHECK_FALSE(j["passed"].get<bool>());
  // Rows are ordered by degree, then discriminant.
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto key = [&](std::size_t k) {
      return std::pair(rows[k]["degree"].get<int>(), rows[k]["discriminant"].get<long long>());
    };
    CHECK(key(i - 1) < key(i));
  }

  const Run csv = run("--csv tables");
  CHECK(csv.code == 1);
  CHECK(csv.out.rfind("degree,discriminant,polynomial,", 0) == 0);
  CHECK(std::count(csv.out.begin(), csv.out.end(), '\n') == 20);
}

TEST_CASE("action command") {
  const auto golden = write_file("golden.json", "[[[2,1],[1,1]]]");
  const json g = run_json("--no-l-entropy action " + quoted(golden));
  CHECK(g["report"]["fried"]["friedEntropy"].get<double>() == doctest::Approx(std::log((3 + std::sqrt(5.0)) / 2)));
  CHECK(g["report"]["fried"]["n"].get<int>() == 2);

  const auto units =
      write_file("units.json", R"({"polynomial":"x^4-x^3-3x^2+x+1","units":[[0,1],[1,-1],[0,2,1,-1]]})");
  const json u = run_json("--no-l-entropy action " + quoted(units));
  const json f = run_json("--no-l-entropy field \"x^4-x^3-3x^2+x+1\"");
  for (const char* key : {"regulator", "friedEntropy"})
    CHECK(u["report"]["fried"][key].get<double>() ==
          doctest::Approx(f["report"]["fried"][key].get<double>()).epsilon(1e-9));
  CHECK(u["report"]["fried"]["oneEntropy"]["value"].get<double>() ==
        doctest::Approx(f["report"]["fried"]["oneEntropy"]["value"].get<double>()).epsilon(1e-9));
  CHECK(u["report"]["slow"]["shEntropy"].get<double>() ==
        doctest::Approx(f["report"]["slow"]["shEntropy"].get<double>()).epsilon(1e-9));

  const auto pair = write_file("pair.json", "[[[2,1],[1,1]],[[0,1],[1,0]]]");
  const Run nc = run("action " + quoted(pair), true);
  CHECK(nc.code == 2);
  CHECK(nc.out.find("NotCommuting") != std::string::npos);
  CHECK(run("action " + quoted(scratch() / "missing.json")).code == 2);
  CHECK(run("action " + quoted(write_file("junk.json", "{not json"))).code == 2);
}

TEST_CASE("bounds command") {
  // The scan disagrees with the 0.089 reference, which is a verification mismatch.
  const json d = run_json("bounds", 1);
  CHECK(d["constants"]["prefactor"].get<double>() == doctest::Approx(0.000376).epsilon(5e-5 / 0.000376));
  CHECK(d["constants"]["b"].get<double>() == doctest::Approx(0.9371).epsilon(2e-3 / 0.9371));
  CHECK(d["constants"]["friedPrefactor"].get<double>() == doctest::Approx(0.000752).epsilon(1e-9));
  CHECK(d["constants"]["friedExponent"].get<double>() == doctest::Approx(0.244).epsilon(2e-3 / 0.244));
  CHECK(d["result"]["minMaxReference"].get<double>() == 0.089);
  CHECK(d["result"]["minMax"].get<double>() == doctest::Approx(cartan::min_max_scan().value).epsilon(1e-12));
  CHECK(d["result"]["perN"].size() == 10);

  const auto csv = scratch() / "curves.csv";
  CHECK(run("bounds --out " + quoted(csv)).code == 1);
  std::ifstream in(csv);
  std::string header;
  std::getline(in, header);
  CHECK(header == "n,s,Z");
  std::string line;
  int first_n = 0, last_n = 0;
  while (std::getline(in, line)) {
    const int n = std::stoi(line.substr(0, line.find(',')));
    if (first_n == 0) first_n = n;
    last_n = n;
  }
  CHECK(first_n == 8);
  CHECK(last_n == 17);
}

TEST_CASE("bounds command at a fixed parameter") {
  const json j = run_json("bounds --s 0.35 --n 3..20");
  REQUIRE(j["result"].contains("fixedS"));
  const auto& rows = j["result"]["fixedS"];
  CHECK(rows.size() == 18);
  for (const auto& r : rows) {
    const int n = r["n"].get<int>();
    CHECK(r["Zrough"].get<double>() == doctest::Approx(0.000752 * std::exp(0.244 * n)).epsilon(0.02));
  }
  CHECK(run("bounds --n 5..3").code == 2);
  CHECK(run("bounds --s 0.9..0.2").code == 2);
  CHECK(run("bounds --n 2..5").code == 2);
}

TEST_CASE("cn command") {
  const json c3 = run_json("cn 3");
  CHECK(c3["value"].get<double>() == doctest::Approx(1.7321).epsilon(1e-3 / 1.7321));
  const json c5 = run_json("cn 5");
  CHECK(c5["value"].get<double>() >= 2.0);
  CHECK(c5["value"].get<double>() <= 4.0);
  CHECK(run("cn 2").code == 2);
  CHECK(run("cn 9").code == 2);
}

TEST_CASE("configuration file and flags") {
  const auto cfg = write_file("run.cfg", "seed=7\nmc-samples=2000\nno-l-entropy=true\n");
  const json j = run_json("--config " + quoted(cfg) + " field \"x^3-x^2-2x+1\"");
  CHECK(j["manifest"]["seed"] == 7);
  CHECK(j["manifest"]["tolerances"]["mcSamples"] == 2000);
  // Flags override the file.
  const json k = run_json("--config " + quoted(cfg) + " --seed 11 field \"x^3-x^2-2x+1\"");
  CHECK(k["manifest"]["seed"] == 11);
  CHECK(run("--json --csv cn 3").code != 0);
  const Run v = run("--version");
  CHECK(v.code == 0);
  CHECK(v.out.find('.') != std::string::npos);
}

TEST_CASE("identical invocations give identical bytes") {
  const std::string args = "--json --no-l-entropy field \"x^5-x^4-4x^3+3x^2+3x-1\"";
  const Run a = run(args);
  const Run b = run(args);
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(run("--json cn 4").out == run("--json cn 4").out);
}
