#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "bdg/nambu.hpp"
#include "bdg/problem_io.hpp"
#include "bdg/report.hpp"

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

std::string temp_path(const std::string& tag) {
    static int counter = 0;
    return "/tmp/bdg_cli_test_" + std::to_string(getpid()) + "_" + tag +
           "_" + std::to_string(counter++);
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

RunResult run_cli(const std::string& args) {
    const std::string out_path = temp_path("stdout");
    const std::string err_path = temp_path("stderr");
    const std::string cmd = std::string(BDG_CLI_PATH) + " " + args + " > " +
                            out_path + " 2> " + err_path;
    const int status = std::system(cmd.c_str());
    RunResult res;
    res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    res.out = slurp(out_path);
    res.err = slurp(err_path);
    std::remove(out_path.c_str());
    std::remove(err_path.c_str());
    return res;
}

std::string fixture(const std::string& name) {
    return std::string(BDG_FIXTURE_DIR) + "/" + name;
}

// Value of the first "key: value" line, or an empty string.
std::string report_value(const std::string& text, const std::string& key) {
    std::istringstream lines(text);
    std::string line;
    const std::string prefix = key + ": ";
    while (std::getline(lines, line)) {
        if (line.rfind(prefix, 0) == 0) return line.substr(prefix.size());
    }
    return "";
}

std::string strip_wall_time(const std::string& text) {
    std::istringstream lines(text);
    std::string line;
    std::string out;
    while (std::getline(lines, line)) {
        if (line.rfind("wall_time_", 0) != 0) out += line + "\n";
    }
    return out;
}

double report_double(const std::string& text, const std::string& key) {
    const std::string value = report_value(text, key);
    REQUIRE(!value.empty());
    return std::strtod(value.c_str(), nullptr);
}

}  // namespace

TEST_CASE("diagonalize reports the single mode closed form") {
    const auto res = run_cli("diagonalize " + fixture("single_mode.json"));
    CHECK(res.exit_code == 0);
    CHECK(report_value(res.out, "label") == "single mode");
    CHECK(report_value(res.out, "certificates_pass") == "true");
    CHECK(report_double(res.out, "e0") == doctest::Approx(-0.1).epsilon(1e-9));
    CHECK(report_double(res.out, "g_norm") ==
          doctest::Approx(0.6).epsilon(1e-12));
    const std::string xi = report_value(res.out, "xi_spectrum");
    CHECK(std::strtod(xi.c_str() + 1, nullptr) ==
          doctest::Approx(0.8).epsilon(1e-9));
}

TEST_CASE("diagonalize reports are deterministic apart from timing") {
    const std::string out1 = temp_path("report_a");
    const std::string out2 = temp_path("report_b");
    const std::string args = "diagonalize " + fixture("two_mode.json");
    CHECK(run_cli(args + " --out " + out1).exit_code == 0);
    CHECK(run_cli(args + " --out " + out2).exit_code == 0);
    const std::string a = slurp(out1);
    const std::string b = slurp(out2);
    CHECK(a.find("wall_time_diagonalize_ms: ") != std::string::npos);
    CHECK(strip_wall_time(a) == strip_wall_time(b));
    std::remove(out1.c_str());
    std::remove(out2.c_str());
}

TEST_CASE("exit codes cover every documented failure path") {
    SUBCASE("hypothesis violation") {
        const auto res = run_cli("diagonalize " +
                                 fixture("gap_violation.json"));
        CHECK(res.exit_code == 2);
        CHECK(res.err.find("gap violation") != std::string::npos);
    }
    SUBCASE("schema and validation problems") {
        CHECK(run_cli("diagonalize " + fixture("bad_pairing.json"))
                  .exit_code == 1);
        CHECK(run_cli("diagonalize " + fixture("malformed.json"))
                  .exit_code == 1);
        CHECK(run_cli("diagonalize /tmp/bdg_no_such_file.json").exit_code ==
              1);
    }
    SUBCASE("unattainable certificate tolerance") {
        const auto res = run_cli("diagonalize --tol 1e-18 " +
                                 fixture("single_mode.json"));
        CHECK(res.exit_code == 3);
        CHECK(res.err.find("certificate failure") != std::string::npos);
    }
    SUBCASE("missing subcommand") {
        CHECK(run_cli("").exit_code != 0);
    }
}

TEST_CASE("verify confirms the single mode instance on the Fock space") {
    const auto res = run_cli("verify --nmax 40 --levels 6 " +
                             fixture("single_mode.json"));
    CHECK(res.exit_code == 0);
    CHECK(report_value(res.out, "fock_pass") == "true");
    CHECK(report_value(res.out, "fock_lower_bound_ok") == "true");
    CHECK(report_double(res.out, "fock_tail_weight") <= 1e-10);
    CHECK(report_double(res.out, "fock_gamma_error") <= 5e-8);
}

TEST_CASE("verify exit codes") {
    SUBCASE("heavy tail is rejected") {
        const auto res = run_cli("verify --nmax 4 --levels 3 " +
                                 fixture("single_mode.json"));
        CHECK(res.exit_code == 4);
        CHECK(res.err.find("truncation unreliable") != std::string::npos);
    }
    SUBCASE("impossible level tolerance fails verification") {
        const auto res = run_cli("verify --nmax 40 --levels 6 --tol 1e-18 " +
                                 fixture("single_mode.json"));
        CHECK(res.exit_code == 3);
        CHECK(res.err.find("spectrum verification failed") !=
              std::string::npos);
    }
    SUBCASE("no pairing verifies exactly") {
        const auto res = run_cli("verify --nmax 6 --levels 4 " +
                                 fixture("free_modes.json"));
        CHECK(res.exit_code == 0);
        CHECK(report_double(res.out, "fock_gamma_error") == 0.0);
        CHECK(report_double(res.out, "fock_tail_weight") == 0.0);
    }
}

TEST_CASE("verify handles the two mode acceptance instance") {
    const auto res = run_cli("verify --nmax 24 --levels 6 " +
                             fixture("two_mode.json"));
    CHECK(res.exit_code == 0);
    CHECK(report_double(res.out, "fock_tail_weight") <= 1e-8);
    CHECK(report_double(res.out, "e0") ==
          doctest::Approx(-0.11305).epsilon(1e-4));
}

TEST_CASE("generate emits deterministic canonical files") {
    const std::string f1 = temp_path("gen_a");
    const std::string f2 = temp_path("gen_b");
    const std::string args =
        "generate --kind random --modes 6 --gnorm 0.9 --seed 42 --out ";
    CHECK(run_cli(args + f1).exit_code == 0);
    CHECK(run_cli(args + f2).exit_code == 0);
    const std::string text = slurp(f1);
    CHECK(text == slurp(f2));

    const auto file = bdg::parse_problem_text(text);
    CHECK(file.dim == 6);
    CHECK(bdg::canonical_text(file) == text);
    const auto p = bdg::to_problem(file);
    CHECK(bdg::gram_pairing(p).norm == doctest::Approx(0.9).epsilon(1e-10));

    CHECK(run_cli("diagonalize " + f1).exit_code == 0);
    std::remove(f1.c_str());
    std::remove(f2.c_str());
}

TEST_CASE("generate covers every kind and validates its flags") {
    for (const std::string kind : {"commutative", "random", "laplacian"}) {
        const auto res = run_cli("generate --kind " + kind +
                                 " --modes 3 --gnorm 0.5 --seed 11");
        CHECK(res.exit_code == 0);
        const auto file = bdg::parse_problem_text(res.out);
        CHECK(file.dim == 3);
        CHECK(file.label.find(kind) == 0);
    }
    CHECK(run_cli("generate --kind fancy --modes 3 --gnorm 0.5").exit_code ==
          1);
    CHECK(run_cli("generate --kind random --modes 3 --gnorm 1.5").exit_code ==
          1);
    CHECK(run_cli("generate --kind random --modes 0 --gnorm 0.5").exit_code ==
          1);
}

TEST_CASE("ensemble produces the frozen CSV and is deterministic") {
    const std::string csv1 = temp_path("csv_a");
    const std::string csv2 = temp_path("csv_b");
    const std::string args =
        "ensemble --count 5 --modes 3 --gmin 0.1 --gmax 0.9 --seed 7 "
        "--out ";
    CHECK(run_cli(args + csv1).exit_code == 0);
    CHECK(run_cli(args + csv2).exit_code == 0);
    const std::string text = slurp(csv1);
    CHECK(text == slurp(csv2));

    std::istringstream lines(text);
    std::string line;
    std::vector<std::string> rows;
    while (std::getline(lines, line)) rows.push_back(line);
    REQUIRE(rows.size() == 6);
    CHECK(rows[0] == bdg::ensemble_csv_header());
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto commas = std::count(rows[i].begin(), rows[i].end(), ',');
        CHECK(commas == 9);
        CHECK(rows[i].rfind(std::to_string(6 + i), 0) == 0);
    }
    std::remove(csv1.c_str());
    std::remove(csv2.c_str());
}

TEST_CASE("ensemble edge cases") {
    SUBCASE("zero instances still emit the header") {
        const auto res = run_cli("ensemble --count 0 --modes 2");
        CHECK(res.exit_code == 0);
        CHECK(res.out == bdg::ensemble_csv_header() + "\n");
    }
    SUBCASE("near-critical couplings warn but still certify") {
        const auto res = run_cli(
            "ensemble --count 1 --modes 2 --gmin 0.99 --gmax 0.99 --seed 3 "
            "--tol 1e-6");
        CHECK(res.exit_code == 0);
        CHECK(res.err.find("near critical") != std::string::npos);
    }
    SUBCASE("range validation") {
        CHECK(run_cli("ensemble --count 1 --gmin 0.9 --gmax 0.2").exit_code ==
              1);
        CHECK(run_cli("ensemble --count 1 --gmin 0 --gmax 0.5").exit_code ==
              1);
    }
}
