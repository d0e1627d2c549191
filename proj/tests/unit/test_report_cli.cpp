#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "stokes_lab/cli.hpp"
#include "stokes_lab/errors.hpp"
#include "stokes_lab/report.hpp"

using namespace stokes_lab;
using namespace stokes_lab::scenarios;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path temp_file(const std::string& name, const std::string& body) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path) << body;
  return path;
}

}  // namespace

TEST_CASE("number formatting") {
  CHECK(report::format_number(3.0) == "3");
  CHECK(report::format_number(1.0 / 3.0) == "0.333333333");
  CHECK(report::format_number(33.51600230180) == "33.5160023");
  CHECK(report::format_number(-0.0) == "0");
  CHECK(report::format_number(1e-13) == "1e-13");
  CHECK(report::format_number(std::numeric_limits<double>::quiet_NaN()) == "nan");
  CHECK(report::format_number(-std::numeric_limits<double>::infinity()) == "-inf");
  CHECK(report::format_cell(Cell{std::string("abc")}) == "abc");
}

TEST_CASE("csv writer") {
  Table t;
  t.columns = {"name", "value"};
  t.rows.push_back({std::string("a,b"), 1.5});
  t.rows.push_back({std::string("say \"hi\""), 2.0});
  std::ostringstream out;
  report::write_csv(out, t);
  CHECK(out.str() == "name,value\n\"a,b\",1.5\n\"say \"\"hi\"\"\",2\n");
}

TEST_CASE("check descriptions") {
  CheckOutcome c;
  c.expectation = {"n3.mean_S1", Expectation::Kind::value, 3.0, 1e-10};
  c.actual = 2.5;
  CHECK(report::describe_check(c) == "FAIL n3.mean_S1: expected 3 +/- 1e-10, actual 2.5");
  c.expectation.kind = Expectation::Kind::less_than;
  c.passed = true;
  CHECK(report::describe_check(c) == "PASS n3.mean_S1: expected < 3, actual 2.5");
}

TEST_CASE("cli list") {
  const auto r = invoke({"list"});
  CHECK(r.code == cli::kExitOk);
  CHECK(r.out.find("number_state\n") != std::string::npos);
  CHECK(r.out.find("threshold_scan\n") != std::string::npos);
}

TEST_CASE("cli run csv") {
  const auto r = invoke({"run", "number_state", "--format", "csv"});
  CHECK(r.code == cli::kExitOk);
  std::istringstream lines(r.out);
  std::string header, first;
  std::getline(lines, header);
  std::getline(lines, first);
  CHECK(header == "state,mean_S0,mean_S1,mean_S2,mean_S3,var_S0,var_S1,var_S2,var_S3,cutoff,oracle_dev,squeezed");
  CHECK(first.rfind("n3,3,3,0,0,0,0,3,3,", 0) == 0);
  CHECK(invoke({"run", "number_state", "--format", "csv"}).out == r.out);
}

TEST_CASE("cli run table and output file") {
  const auto path = std::filesystem::temp_directory_path() / "stokes_lab_out.txt";
  const auto r = invoke({"--out", path.string(), "run", "joint_squeeze"});
  CHECK(r.code == cli::kExitOk);
  CHECK(r.out.empty());
  std::ifstream in(path);
  const std::string text((std::istreambuf_iterator<char>(in)), {});
  CHECK(text.find("# joint_squeeze") == 0);
  CHECK(text.find("PASS fock_03.mean_n_x") != std::string::npos);
  std::filesystem::remove(path);
}

TEST_CASE("cli exit codes") {
  SUBCASE("failed expectation exits 1 and names the quantity") {
    const auto path = temp_file("stokes_lab_fail.yaml", R"(
name: failing
kind: state_table
states:
  - {label: n2, family: number, n: 2}
expect:
  - {quantity: n2.mean_S0, value: 3, tol: 1.0e-10}
)");
    const auto r = invoke({"run", path.string()});
    CHECK(r.code == cli::kExitCheckFailed);
    CHECK(r.err.find("n2.mean_S0") != std::string::npos);
    CHECK(r.err.find("expected 3") != std::string::npos);
    CHECK(r.err.find("actual 2") != std::string::npos);
    CHECK(invoke({"--tol", "2", "run", path.string()}).code == cli::kExitOk);
    std::filesystem::remove(path);
  }
  SUBCASE("bad key exits 2 and names it") {
    const auto path = temp_file("stokes_lab_bad.yaml", "name: bad\nkind: state_table\nstates:\n  - {label: a, family: number, m: 2}\n");
    const auto r = invoke({"run", path.string()});
    CHECK(r.code == cli::kExitUsage);
    CHECK(r.err.find("states[0].m") != std::string::npos);
    std::filesystem::remove(path);
  }
  SUBCASE("usage errors exit 2") {
    CHECK(invoke({}).code == cli::kExitUsage);
    CHECK(invoke({"frobnicate"}).code == cli::kExitUsage);
    CHECK(invoke({"run"}).code == cli::kExitUsage);
    CHECK(invoke({"run", "no_such_scenario"}).code == cli::kExitUsage);
    CHECK(invoke({"--format", "json", "list"}).code == cli::kExitUsage);
    CHECK(invoke({"--fock-dim", "0", "list"}).code == cli::kExitUsage);
    CHECK(invoke({"--tol", "-1", "list"}).code == cli::kExitUsage);
  }
  SUBCASE("help exits 0") { CHECK(invoke({"--help"}).code == cli::kExitOk); }
}

TEST_CASE("cli fock-dim override") {
  CHECK(invoke({"--fock-dim", "12", "run", "number_state"}).code == cli::kExitOk);
  CHECK(invoke({"--fock-dim", "3", "run", "coherent_states"}).code == cli::kExitUsage);
}

TEST_CASE("worker count") {
  ::setenv("STOKES_LAB_THREADS", "3", 1);
  CHECK(cli::worker_count() == 3);
  ::setenv("STOKES_LAB_THREADS", "zero", 1);
  CHECK_THROWS_AS(cli::worker_count(), InvalidArgument);
  ::unsetenv("STOKES_LAB_THREADS");
  CHECK(cli::worker_count() >= 1);
}

TEST_CASE("cli check csv is ordered and deterministic") {
  ::setenv("STOKES_LAB_THREADS", "4", 1);
  const auto a = invoke({"check", "--format", "csv"});
  ::setenv("STOKES_LAB_THREADS", "1", 1);
  const auto b = invoke({"check", "--format", "csv"});
  ::unsetenv("STOKES_LAB_THREADS");
  CHECK(a.code == cli::kExitOk);
  CHECK(a.out == b.out);
  CHECK(a.out.rfind("scenario,quantity,condition,expected,tol,actual,status\nstokes_algebra,", 0) == 0);
  CHECK(a.out.find(",fail\n") == std::string::npos);
}

TEST_CASE("installed binary") {
  const std::string cmd = std::string("\"") + STOKES_LAB_CLI + "\" list > /dev/null";
  CHECK(std::system(cmd.c_str()) == 0);
}
