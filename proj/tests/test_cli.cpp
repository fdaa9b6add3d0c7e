#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "hdgmm/io.hpp"
#include "hdgmm/simulate.hpp"
#include "test_helpers.hpp"

using namespace hdgmm;

namespace {

std::string cli_path() {
#ifdef HDGMM_CLI_PATH
  return HDGMM_CLI_PATH;
#else
  return "./hdgmm";
#endif
}

int run(const std::string& args) {
  const std::string cmd = cli_path() + " " + args + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  if (status < 0) return -1;
  return WEXITSTATUS(status);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct CliData {
  std::string x = "/tmp/hdgmm_cli_x.csv";
  std::string z = "/tmp/hdgmm_cli_z.csv";
  std::string y = "/tmp/hdgmm_cli_y.csv";
  CliData() {
    const DesignSpec spec = DesignSpec::make(2, 80, 5, 10, 1, 17);
    const Dataset d = generate_dataset(spec, 0);
    write_matrix_csv(x, d.X, "x_");
    write_matrix_csv(z, d.Z, "z_");
    write_vector_csv(y, d.Y, "y");
  }
};

const CliData& data() {
  static CliData d;
  return d;
}

}  // namespace

TEST_CASE("cli help and bad invocations exit with the right codes") {
  CHECK(run("--help") == 0);
  CHECK(run("infer --help") == 0);
  CHECK(run("") == 2);               // missing subcommand
  CHECK(run("infer") == 2);          // missing required options
  CHECK(run("frobnicate") == 2);     // unknown subcommand
  CHECK(run("simulate --design 1 --n 10 --p 4 --q 8") == 2);  // no seed
}

TEST_CASE("infer produces a complete table and honors --out") {
  const auto& d = data();
  const std::string out = "/tmp/hdgmm_cli_infer.csv";
  CHECK(run("infer --x " + d.x + " --z " + d.z + " --y " + d.y +
            " --grid-size 8 --out " + out) == 0);
  const std::string text = slurp(out);
  CHECK(text.rfind("j,beta_hat,b_hat,se,t,ci_lower,ci_upper\n", 0) == 0);
  int rows = 0;
  for (char c : text)
    if (c == '\n') ++rows;
  CHECK(rows == 6);  // header + p = 5
  std::remove(out.c_str());
}

TEST_CASE("infer markdown format has one row per coordinate") {
  const auto& d = data();
  const std::string out = "/tmp/hdgmm_cli_infer.md";
  CHECK(run("infer --x " + d.x + " --z " + d.z + " --y " + d.y +
            " --grid-size 8 --format markdown --out " + out) == 0);
  const std::string text = slurp(out);
  CHECK(text.find("| j | beta_hat |") != std::string::npos);
  int rows = 0;
  for (char c : text)
    if (c == '\n') ++rows;
  CHECK(rows == 2 + 5);
  std::remove(out.c_str());
}

TEST_CASE("dimension mismatch reports both counts and exits 2") {
  const auto& d = data();
  const std::string shorty = "/tmp/hdgmm_cli_shorty.csv";
  write_vector_csv(shorty, Vector::Ones(40), "y");
  const std::string cmd = cli_path() + " infer --x " + d.x + " --z " + d.z +
                          " --y " + shorty + " 2>/tmp/hdgmm_cli_err.txt";
  const int status = std::system(cmd.c_str());
  CHECK(WEXITSTATUS(status) == 2);
  const std::string err = slurp("/tmp/hdgmm_cli_err.txt");
  CHECK(err.find("80") != std::string::npos);
  CHECK(err.find("40") != std::string::npos);
  std::remove(shorty.c_str());
  std::remove("/tmp/hdgmm_cli_err.txt");
}

TEST_CASE("null vector shifts the t statistics") {
  const auto& d = data();
  const std::string nulls = "/tmp/hdgmm_cli_null.csv";
  Vector nv(5);
  nv << 1.0, 1.0, 0.0, 0.5, 0.0;
  write_vector_csv(nulls, nv, "null");

  const std::string out0 = "/tmp/hdgmm_cli_null0.csv";
  const std::string out1 = "/tmp/hdgmm_cli_null1.csv";
  const std::string base = "infer --x " + d.x + " --z " + d.z + " --y " +
                           d.y + " --grid-size 8 ";
  CHECK(run(base + "--out " + out0) == 0);
  CHECK(run(base + "--null " + nulls + " --out " + out1) == 0);
  const std::string a = slurp(out0), b = slurp(out1);
  CHECK(a != b);  // t column moves
  // CI bounds are null-free, so first row's ci columns agree.
  const auto tail = [](const std::string& s) {
    const auto line_start = s.find('\n') + 1;
    const auto line = s.substr(line_start, s.find('\n', line_start) - line_start);
    return line.substr(line.rfind(',', line.rfind(',') - 1));
  };
  CHECK(tail(a) == tail(b));

  const std::string bad = "/tmp/hdgmm_cli_nullbad.csv";
  write_vector_csv(bad, Vector::Ones(3), "null");
  CHECK(run(base + "--null " + bad) == 2);
  for (const auto& f : {nulls, out0, out1, bad}) std::remove(f.c_str());
}

TEST_CASE("fit subcommand emits first and second step coefficients") {
  const auto& d = data();
  const std::string out = "/tmp/hdgmm_cli_fit.csv";
  CHECK(run("fit --x " + d.x + " --z " + d.z + " --y " + d.y +
            " --grid-size 8 --out " + out) == 0);
  const std::string text = slurp(out);
  CHECK(text.rfind("j,beta_first,beta_second\n", 0) == 0);
  CHECK(text.find("lambda_first=") != std::string::npos);
  CHECK(text.find("lambda_second=") != std::string::npos);
  std::remove(out.c_str());
}

TEST_CASE("simulate output bytes are deterministic for a fixed seed") {
  const std::string out1 = "/tmp/hdgmm_cli_sim1.csv";
  const std::string out2 = "/tmp/hdgmm_cli_sim2.csv";
  const std::string args =
      "simulate --design 2 --n 40 --p 4 --q 8 --reps 2 --seed 5 "
      "--grid-size 6 ";
  CHECK(run(args + "--out " + out1) == 0);
  CHECK(run(args + "--threads 3 --out " + out2) == 0);
  const std::string a = slurp(out1), b = slurp(out2);
  CHECK(!a.empty());
  CHECK(a == b);
  CHECK(a.rfind("measure,value\n", 0) == 0);
  std::remove(out1.c_str());
  std::remove(out2.c_str());
}

TEST_CASE("simulate rejects invalid designs with exit code 2") {
  CHECK(run("simulate --design 7 --n 40 --p 4 --q 8 --seed 1") == 2);
  CHECK(run("simulate --design 1 --n 40 --p 4 --q 9 --seed 1") == 2);
}

TEST_CASE("panel subcommand round-trips through infer-ready files") {
  const PanelData sim = simulate_panel(30, 4, 1, 0.5, 1.0, 404);
  const std::string panel_csv = "/tmp/hdgmm_cli_panel.csv";
  {
    std::ofstream out(panel_csv);
    out << "unit,period,y,x_1\n";
    for (Index i = 0; i < 30; ++i)
      for (Index t = 0; t < 4; ++t)
        out << (i + 1) << "," << (t + 1) << "," << format_double(sim.y(i, t))
            << "," << format_double(sim.x[0](i, t)) << "\n";
  }
  const std::string prefix = "/tmp/hdgmm_cli_stack_";
  CHECK(run("panel --input " + panel_csv + " --out " + prefix) == 0);

  const Matrix X = read_matrix_csv(prefix + "X.csv");
  const Matrix Z = read_matrix_csv(prefix + "Z.csv");
  const Vector Y = read_vector_csv(prefix + "Y.csv");
  const StackedGmm direct = panel_to_gmm(sim);
  CHECK((X - direct.X).cwiseAbs().maxCoeff() == 0.0);
  CHECK((Z - direct.Z).cwiseAbs().maxCoeff() == 0.0);
  CHECK((Y - direct.Y).cwiseAbs().maxCoeff() == 0.0);
  CHECK(Z.cols() == panel_instrument_count(4, 1));

  for (const auto& f : {panel_csv, prefix + "X.csv", prefix + "Z.csv",
                        prefix + "Y.csv"})
    std::remove(f.c_str());
}

TEST_CASE("unreadable input exits 2") {
  CHECK(run("infer --x /tmp/hdgmm_missing.csv --z /tmp/hdgmm_missing.csv "
            "--y /tmp/hdgmm_missing.csv") == 2);
  CHECK(run("panel --input /tmp/hdgmm_missing.csv --out /tmp/hdgmm_p_") == 2);
}

TEST_CASE("degenerate numerical input exits 3") {
  // Y = 0 makes the first-step fit and residuals exactly zero, so the
  // diagonal weight degenerates.
  const Index n = 20;
  Matrix X(n, 2);
  for (Index i = 0; i < n; ++i) {
    X(i, 0) = double(i + 1);
    X(i, 1) = double((i * 7) % 5) - 2.0;
  }
  const Vector Y = Vector::Zero(n);
  const std::string xf = "/tmp/hdgmm_cli_degx.csv";
  const std::string yf = "/tmp/hdgmm_cli_degy.csv";
  write_matrix_csv(xf, X, "x_");
  write_vector_csv(yf, Y, "y");
  CHECK(run("infer --x " + xf + " --z " + xf + " --y " + yf +
            " --grid-size 4") == 3);
  std::remove(xf.c_str());
  std::remove(yf.c_str());
}
