// End-to-end tests: run the CLI binary as a subprocess and check the envelope
// bytes, exit codes, and table output. DFRAC_BIN is injected by the build.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include "dfrac/cli_format.hpp"

namespace {

struct RunResult {
    int code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

RunResult run_cli(const std::string& args, const std::string& env_prefix = "") {
    static int counter = 0;
    std::string out_path = "cli_out_" + std::to_string(counter) + ".txt";
    std::string err_path = "cli_err_" + std::to_string(counter) + ".txt";
    ++counter;
    std::string cmd = env_prefix + "\"" DFRAC_BIN "\" " + args +
                      " > " + out_path + " 2> " + err_path;
    int rc = std::system(cmd.c_str());
    RunResult r;
    if (rc != -1 && WIFEXITED(rc)) r.code = WEXITSTATUS(rc);
    r.out = slurp(out_path);
    r.err = slurp(err_path);
    std::remove(out_path.c_str());
    std::remove(err_path.c_str());
    return r;
}

bool contains(const std::string& hay, const std::string& needle) {
    return hay.find(needle) != std::string::npos;
}

} // namespace

TEST_CASE("ffact: integer, reciprocal-pole, and fractional examples") {
    RunResult r = run_cli("ffact --t 0,5 --nu 0,1 --alpha 1.5");
    CHECK(r.code == 0);
    CHECK(contains(r.out, "\"value\":5.000000000000e+00"));
    CHECK(contains(r.out, "\"sign_sigma\":-1"));

    r = run_cli("ffact --t 1,-2 --nu 1,-1 --alpha 1.5");
    CHECK(r.code == 0);
    CHECK(contains(r.out, "\"value\":0.000000000000e+00"));

    r = run_cli("ffact --t 1,1 --nu 1,-1 --alpha 1.5");
    CHECK(r.code == 0);
    CHECK(contains(r.out, "\"value\":1.661675485224e+00"));
}

TEST_CASE("ffact: plain reals fall back to the tolerance path with a warning") {
    RunResult r = run_cli("ffact --t 2.5 --nu 0.5 --alpha 1.5");
    CHECK(r.code == 0);
    CHECK(contains(r.out, "\"value\":1.661675485224e+00"));
    CHECK(contains(r.out, "plain real abscissa"));
}

TEST_CASE("ffact: a numerator pole is a domain error with exit 2") {
    RunResult r = run_cli("ffact --t 0,-1 --nu 0,1 --alpha 1.5");
    CHECK(r.code == 2);
    CHECK(contains(r.out, "\"errors\":[\""));
    CHECK(contains(r.out, "pole"));
    CHECK(contains(r.err, "error:"));
}

TEST_CASE("bound: frozen value and envelope shape") {
    RunResult r = run_cli("bound --alpha 1.5 --b 3");
    CHECK(r.code == 0);
    CHECK(contains(r.out, "\"schema_version\":\"1\""));
    CHECK(contains(r.out, "\"command\":\"bound\""));
    CHECK(contains(r.out, "\"value\":3.875000000000e-01"));
}

TEST_CASE("green: json carries the denominator and the full table") {
    RunResult r = run_cli("green --alpha 1.5 --b 3");
    CHECK(r.code == 0);
    CHECK(contains(r.out, "\"denom\":1.287798501049e+00"));
    CHECK(contains(r.out, "\"row_labels\":[\"a+0\",\"a+1\",\"a+2\",\"a+3\",\"a+4\",\"a+5\"]"));
    CHECK(contains(r.out, "\"col_labels\":[\"0\",\"1\",\"2\",\"3\"]"));
}

TEST_CASE("green: csv output is a bare table that round-trips byte-identically") {
    RunResult r = run_cli("green --alpha 1.5 --b 3 --format csv");
    CHECK(r.code == 0);
    CHECK(r.out.rfind("t,0,1,2,3\n", 0) == 0);
    int lines = 0;
    for (char ch : r.out)
        if (ch == '\n') ++lines;
    CHECK(lines == 7);
    dfrac::CsvTable table = dfrac::csv_parse(r.out);
    CHECK(dfrac::csv_emit(table) == r.out);
}

TEST_CASE("green: alpha=2 is rejected as degenerate") {
    RunResult r = run_cli("green --alpha 2 --b 3");
    CHECK(r.code == 2);
    CHECK(contains(r.out, "denominator"));
}

TEST_CASE("green-max: scan agrees with the closed form") {
    RunResult r = run_cli("green-max --alpha 1.5 --b 3");
    CHECK(r.code == 0);
    CHECK(contains(r.out, "\"s_star\":3"));
    CHECK(contains(r.out, "\"closed_form\":2.287037226975e+00"));
    CHECK(contains(r.out, "\"max_value\":2.28703722"));
}

TEST_CASE("solve: the linear default reproduces the exact rational solution") {
    RunResult r = run_cli("solve --alpha 1.5 --b 1");
    CHECK(r.code == 0);
    CHECK(contains(r.out, "\"y\":[0.000000000000e+00,-2.400000000000e+00,"
                          "-4.600000000000e+00,-7.000000000000e+00]"));
    CHECK(contains(r.out, "\"abscissae\":[\"a+0\",\"a+1\",\"a+2\",\"a+3\"]"));
}

TEST_CASE("solve: direct and kernel methods emit the same solution bytes") {
    RunResult a = run_cli("solve --alpha 1.75 --b 3 --method green");
    RunResult b = run_cli("solve --alpha 1.75 --b 3 --method direct");
    CHECK(a.code == 0);
    CHECK(b.code == 0);
    // Same solution through two unrelated paths; 12 printed digits absorb
    // the last-bit differences.
    std::string ya = a.out.substr(a.out.find("\"y\":"));
    std::string yb = b.out.substr(b.out.find("\"y\":"));
    ya = ya.substr(0, ya.find(']'));
    yb = yb.substr(0, yb.find(']'));
    CHECK(ya == yb);
}

TEST_CASE("solve: fixed-point run reports certification fields") {
    RunResult r = run_cli("solve --alpha 1.5 --b 3 --f exp --lambda 0.1");
    CHECK(r.code == 0);
    CHECK(contains(r.out, "\"converged\":true"));
    CHECK(contains(r.out, "\"certified\":true"));
    CHECK(contains(r.out, "\"method\":\"fixed-point\""));
}

TEST_CASE("solve: iteration cap exhaustion exits 3") {
    RunResult r = run_cli("solve --alpha 1.5 --b 1 --f exp --lambda 5 --max-iter 1");
    CHECK(r.code == 3);
    CHECK(contains(r.out, "\"converged\":false"));
    CHECK(contains(r.out, "did not converge"));
}

TEST_CASE("solve: tolerance comes from DFRAC_TOL unless the flag wins") {
    RunResult env_only = run_cli("solve --alpha 1.5 --b 1 --f exp", "DFRAC_TOL=1e-6 ");
    CHECK(env_only.code == 0);
    CHECK(contains(env_only.out, "\"tol\":1.000000000000e-06"));
    CHECK(contains(env_only.out, "DFRAC_TOL"));

    RunResult flag_wins = run_cli("solve --alpha 1.5 --b 1 --f exp --tol 1e-8",
                                  "DFRAC_TOL=1e-6 ");
    CHECK(flag_wins.code == 0);
    CHECK(contains(flag_wins.out, "\"tol\":1.000000000000e-08"));
    CHECK(contains(flag_wins.out, "\"warnings\":[]"));
}

TEST_CASE("eigen: critical scale and vectors at alpha=3/2, b=1") {
    RunResult r = run_cli("eigen --alpha 1.5 --b 1");
    CHECK(r.code == 0);
    CHECK(contains(r.out, "\"lambda_star\":2.7475487"));
    CHECK(contains(r.out, "\"y_extended\":[0.000000000000e+00"));
}

TEST_CASE("check: a trivial candidate exits 2 and names the problem") {
    RunResult r = run_cli("check --alpha 1.5 --b 1 --lambda 1 --y 0,0,0,0");
    CHECK(r.code == 2);
    CHECK(contains(r.out, "trivial solution"));
    CHECK(contains(r.err, "trivial solution"));
}

TEST_CASE("check: report fields for a concrete candidate") {
    RunResult r = run_cli("check --alpha 1.5 --b 1 --lambda 0.3 --f linear --y 0,0.5,1.0,-0.2");
    CHECK(r.code == 0);
    CHECK(contains(r.out, "\"holds\":false"));
    CHECK(contains(r.out, "\"rhs\":6.250000000000e-01"));
    CHECK(contains(r.out, "\"lhs\":6.000000000000e-01"));
}

TEST_CASE("sweep: deterministic output and the expected grid size") {
    RunResult a = run_cli("sweep --alphas 1.5 --bs 1,2,3");
    RunResult b = run_cli("sweep --alphas 1.5 --bs 1,2,3");
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(contains(a.out, "\"rows\":["));

    RunResult csv = run_cli("sweep --alphas 1.5,1.9 --bs 1,2 --format csv");
    CHECK(csv.code == 0);
    CHECK(csv.out.rfind("alpha,b,C,g_max,lhs,margin,error\n", 0) == 0);
    int lines = 0;
    for (char ch : csv.out)
        if (ch == '\n') ++lines;
    CHECK(lines == 5);
}

TEST_CASE("usage errors exit 2, help exits 0") {
    RunResult r = run_cli("");
    CHECK(r.code == 2);
    r = run_cli("frobnicate");
    CHECK(r.code == 2);
    r = run_cli("bound --alpha 1.5");
    CHECK(r.code == 2);
    r = run_cli("--help");
    CHECK(r.code == 0);
}

TEST_CASE("verify --quick: honest failing criteria drive a nonzero exit") {
    RunResult r = run_cli("verify --quick");
    CHECK(r.code == 1);
    CHECK(contains(r.out, "\"all_pass\":false"));
    CHECK(contains(r.out, "\"mode\":\"quick\""));
    CHECK(contains(r.err, "[PASS] #1"));
    CHECK(contains(r.err, "[FAIL] #5"));
}
