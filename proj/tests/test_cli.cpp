#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "hbvm/cli.hpp"

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "hbvm");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = hbvm::cli::run(int(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, sep)) fields.push_back(field);
  return fields;
}

// Data rows of a CSV report: comment lines dropped, column header dropped.
std::vector<std::vector<std::string>> rows(const std::string& text) {
  std::vector<std::vector<std::string>> result;
  std::istringstream in(text);
  std::string line;
  bool seen_header = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!seen_header) {
      seen_header = true;
      continue;
    }
    result.push_back(split(line, ','));
  }
  return result;
}

std::string first_line(const std::string& text) { return text.substr(0, text.find('\n')); }

}  // namespace

TEST_CASE("gamma-table") {
  const Outcome two = run_cli({"gamma-table", "--s-max", "2"});
  CHECK(two.code == 0);
  CHECK(first_line(two.out).rfind("# hbvm gamma-table", 0) == 0);
  const auto r2 = rows(two.out);
  REQUIRE(r2.size() == 1);
  CHECK(r2[0] == std::vector<std::string>{"2", "0.2887", "0.1340"});

  const auto r10 = rows(run_cli({"gamma-table"}).out);
  REQUIRE(r10.size() == 9);
  CHECK(r10.back() == std::vector<std::string>{"10", "0.0568", "0.6467"});

  const auto with_one = rows(run_cli({"gamma-table", "--s-max", "3", "--include-s1"}).out);
  REQUIRE(with_one.size() == 3);
  CHECK(with_one[0] == std::vector<std::string>{"1", "0.5000", "0.0000"});

  CHECK(run_cli({"gamma-table", "--s-max", "11"}).code == 2);
}

TEST_CASE("isospectral") {
  CHECK(run_cli({"isospectral", "--k", "2", "--s", "2"}).code == 0);

  const Outcome r42 = run_cli({"isospectral", "--k", "4", "--s", "2"});
  CHECK(r42.code == 0);
  const auto data = rows(r42.out);
  REQUIRE(data.size() == 1);
  CHECK(data[0][4] == "pass");
  CHECK(std::stod(data[0][3]) <= 1e-10);

  const Outcome bad = run_cli({"isospectral", "--k", "3", "--s", "5"});
  CHECK(bad.code == 2);
  CHECK(bad.out.empty());
  CHECK_FALSE(bad.err.empty());

  // Far too loose a threshold counts real eigenvalues as zeros.
  CHECK(run_cli({"isospectral", "--k", "4", "--s", "2", "--tol", "10"}).code == 1);

  const Outcome sets = run_cli({"isospectral", "--k", "8", "--s", "3", "--random-sets", "5", "--seed", "3"});
  CHECK(sets.code == 0);
  CHECK(rows(sets.out).size() == 6);
}

TEST_CASE("cond") {
  const auto gauss = rows(run_cli({"cond", "--s", "2", "--k-max", "2"}).out);
  REQUIRE(gauss.size() == 1);
  CHECK(std::stod(gauss[0][1]) == doctest::Approx(4.79128784747792).epsilon(1e-12));

  auto column = [](const std::string& selection) {
    std::vector<std::pair<int, double>> values;
    for (const auto& row : rows(run_cli({"cond", "--s", "3", "--k-max", "100", "--selection", selection}).out))
      values.emplace_back(std::stoi(row[0]), std::stod(row[1]));
    return values;
  };
  const auto rot = column("rule-of-thumb");
  REQUIRE(rot.front().first == 3);
  for (const auto& [k, c] : rot) CHECK(c <= 10.0 * rot.front().second);

  double at10 = 0.0, at100 = 0.0;
  for (const auto& [k, c] : column("first-s")) {
    if (k == 10) at10 = c;
    if (k == 100) at100 = c;
  }
  CHECK(at100 >= 100.0 * at10);
}

TEST_CASE("amplification") {
  const Outcome r = run_cli({"amplification", "--s", "2"});
  CHECK(r.code == 0);
  double best = 0.0;
  const auto data = rows(r.out);
  CHECK(data.size() >= 200);
  for (const auto& row : data) best = std::max(best, std::stod(row[1]));
  CHECK(std::abs(best - 0.1340) <= 1e-4);
}

TEST_CASE("integrate") {
  const Outcome r = run_cli({"integrate", "--problem", "pendulum", "--steps", "10"});
  CHECK(r.code == 0);
  const auto data = rows(r.out);
  REQUIRE(data.size() == 11);
  CHECK(data[0][0] == "0");
  CHECK(data[0][2] == "1");
  CHECK(data[10][0] == "10");
  CHECK(std::stod(data[10][1]) == doctest::Approx(1.0));
  for (const auto& row : data) CHECK(row.size() == 6);
  CHECK(r.out.find("problem=pendulum") != std::string::npos);

  // A solver that may not iterate fails the run but still reports.
  const Outcome failed = run_cli({"integrate", "--h", "1", "--q0", "2.5", "--max-iter", "1", "--k", "4"});
  CHECK(failed.code == 1);
  CHECK(failed.out.find("failed") != std::string::npos);
}

TEST_CASE("energy") {
  const Outcome r = run_cli({"energy"});
  CHECK(r.code == 0);
  const auto data = rows(r.out);
  REQUIRE(data.size() == 1);
  CHECK(data[0][0] == "quartic");
  CHECK(data[0][1] == "4");
  CHECK(data[0][4] == "10000");
  CHECK(std::stod(data[0][7]) <= 1e-10);
}

TEST_CASE("order") {
  const Outcome r = run_cli({"order", "--problem", "harmonic", "--k", "6", "--s", "3"});
  CHECK(r.code == 0);
  CHECK(rows(r.out).size() == 4);
  const auto pos = r.out.find("# slope=");
  REQUIRE(pos != std::string::npos);
  const double slope = std::stod(r.out.substr(pos + 8));
  CHECK(slope >= 5.6);
  CHECK(slope <= 6.4);

  CHECK(run_cli({"order", "--q0", "0", "--problem", "harmonic", "--s", "1", "--k", "2"}).code == 1);
  CHECK(run_cli({"order", "--h", "0.3"}).code == 2);
}

TEST_CASE("tableau") {
  const Outcome r = run_cli({"tableau", "--k", "4", "--s", "2"});
  CHECK(r.code == 0);
  const auto data = rows(r.out);
  REQUIRE(data.size() == 4);
  CHECK(data[1][3] == "1");
  CHECK(data[2][3] == "1");
  CHECK(data[0][3] == "0");
  for (const auto& row : data) {
    REQUIRE(row.size() == 8);
    // Row sums of A reproduce the node.
    double sum = 0.0;
    for (std::size_t j = 4; j < 8; ++j) sum += std::stod(row[j]);
    CHECK(sum == doctest::Approx(std::stod(row[1])).epsilon(1e-13));
  }
}

TEST_CASE("output is deterministic") {
  for (const auto& args : {std::vector<std::string>{"integrate", "--steps", "20"},
                                              std::vector<std::string>{"cond", "--s", "2", "--k-max", "20"},
                                              std::vector<std::string>{"amplification", "--s", "3"}}) {
    CHECK(run_cli(args).out == run_cli(args).out);
  }
}

TEST_CASE("--out writes the report atomically") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "hbvm_cli_test";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const fs::path target = dir / "table.csv";
  {
    std::ofstream old(target);
    old << "stale\n";
  }

  const Outcome to_file = run_cli({"gamma-table", "--out", target.string()});
  CHECK(to_file.code == 0);
  CHECK(to_file.out.empty());
  std::ifstream in(target);
  const std::string written((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  CHECK(written == run_cli({"gamma-table"}).out);
  CHECK(std::distance(fs::directory_iterator(dir), fs::directory_iterator{}) == 1);

  const Outcome missing = run_cli({"gamma-table", "--out", (dir / "no" / "such" / "dir.csv").string()});
  CHECK(missing.code == 1);
  CHECK_FALSE(missing.err.empty());
  fs::remove_all(dir);
}

TEST_CASE("usage errors and help") {
  CHECK(run_cli({}).code == 2);
  CHECK(run_cli({"bogus"}).code == 2);
  CHECK(run_cli({"integrate", "--problem", "kepler"}).code == 2);
  CHECK(run_cli({"integrate", "--h", "-1"}).code == 2);
  CHECK(run_cli({"integrate", "--k", "1", "--s", "2"}).code == 2);
  CHECK(run_cli({"cond", "--selection", "best"}).code == 2);
  const Outcome help = run_cli({"--help"});
  CHECK(help.code == 0);
  CHECK(help.out.find("gamma-table") != std::string::npos);
  CHECK(run_cli({"integrate", "--help"}).code == 0);
}
