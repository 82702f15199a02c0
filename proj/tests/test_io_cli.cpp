#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <json.hpp>
#include <stdexcept>
#include <string>

#include "meanscope/matrix_io.hpp"
#include "meanscope/sampling.hpp"

using namespace meanscope;

namespace {

struct CliResult {
    int exit_code = -1;
    std::string output;  // stdout and stderr combined
};

CliResult run_cli(const std::string& args) {
    const std::string cmd = std::string(MEANSCOPE_CLI_PATH) + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    CliResult result;
    char buf[4096];
    size_t n;
    while ((n = fread(buf, 1, sizeof(buf), pipe)) > 0) result.output.append(buf, n);
    const int status = pclose(pipe);
    REQUIRE(WIFEXITED(status));
    result.exit_code = WEXITSTATUS(status);
    return result;
}

std::string temp_path(const std::string& name) {
    return std::string("/tmp/meanscope_test_") + name;
}

}  // namespace

TEST_SUITE("io-cli") {

TEST_CASE("matrix text round trip") {
    NormalSampler sampler(77);
    const Eigen::MatrixXd A = gaussian_dense(3, 4, sampler);
    const std::string path = temp_path("m.txt");
    write_matrix_text(path, A);
    const Eigen::MatrixXd B = read_matrix_text(path);
    REQUIRE(B.rows() == 3);
    REQUIRE(B.cols() == 4);
    CHECK(A == B);  // %.17g round-trips doubles exactly
    std::remove(path.c_str());
    CHECK_THROWS_AS(read_matrix_text("/nonexistent/nope.txt"), std::runtime_error);

    const std::string bad = temp_path("bad.txt");
    std::ofstream(bad) << "2 2\n1 2\n3\n";
    CHECK_THROWS_AS(read_matrix_text(bad), std::runtime_error);
    std::remove(bad.c_str());
}

TEST_CASE("matrix json round trip") {
    NormalSampler sampler(78);
    const Eigen::MatrixXd A = gaussian_dense(2, 5, sampler);
    const nlohmann::json j = matrix_to_json(A);
    CHECK(j.at("rows") == 2);
    CHECK(j.at("cols") == 5);
    const Eigen::MatrixXd B = matrix_from_json(j);
    CHECK(A == B);

    nlohmann::json broken = j;
    broken["data"] = std::vector<double>{1.0, 2.0};
    CHECK_THROWS(matrix_from_json(broken));

    const std::string path = temp_path("m.json");
    save_matrix(path, A);
    CHECK(load_matrix(path) == A);
    std::remove(path.c_str());
}

TEST_CASE("load dispatches on the file suffix") {
    NormalSampler sampler(79);
    const Eigen::MatrixXd A = gaussian_dense(2, 2, sampler);
    const std::string t = temp_path("d.txt"), jj = temp_path("d.json");
    save_matrix(t, A);
    save_matrix(jj, A);
    CHECK(load_matrix(t) == A);
    CHECK(load_matrix(jj) == A);
    // The text file is not valid JSON, so suffix dispatch matters.
    std::ifstream probe(jj);
    nlohmann::json parsed;
    CHECK_NOTHROW(probe >> parsed);
    std::remove(t.c_str());
    std::remove(jj.c_str());
}

TEST_CASE("cli scalar evaluation") {
    const CliResult r = run_cli("scalar --kind A:0.5 --x 9 --y 1");
    CHECK(r.exit_code == 0);
    CHECK(std::stod(r.output) == doctest::Approx(4.0).epsilon(1e-6));

    const CliResult j = run_cli("scalar --kind LM --x 4 --y 1 --format json");
    CHECK(j.exit_code == 0);
    const nlohmann::json report = nlohmann::json::parse(j.output);
    CHECK(report.at("schema_version") == 1);
    CHECK(report.at("kind") == "scalar");
    CHECK(report.at("value").get<double>() ==
          doctest::Approx(2.1640425613334453).epsilon(1e-15));
}

TEST_CASE("cli exit codes") {
    CHECK(run_cli("scalar --kind A:0.5 --x 9 --y 1").exit_code == 0);
    CHECK(run_cli("scalar --kind A:7 --x 9 --y 1").exit_code == 2);   // bad parameter
    CHECK(run_cli("scalar --kind A:0.5 --x -9 --y 1").exit_code == 2);  // bad argument
    CHECK(run_cli("verify --chain bogus").exit_code == 2);
    CHECK(run_cli("bogus-subcommand").exit_code == 2);
    CHECK(run_cli("").exit_code == 2);
    CHECK(run_cli("--help").exit_code == 0);
    // A refutation where certification was expected exits 1.
    CHECK(run_cli("posdef --function hm-ratio --m 3").exit_code == 1);
    CHECK(run_cli("posdef --function hm-ratio --m 3 --expect refuted").exit_code == 0);
    CHECK(run_cli("posdef --function hm-ratio --m 2").exit_code == 0);
}

TEST_CASE("cli verify json report") {
    const CliResult r =
        run_cli("verify --chain prop-2.7 --m 1 --dims 2,3 --samples 9 --seed 5");
    CHECK(r.exit_code == 0);
    const nlohmann::json report = nlohmann::json::parse(r.output);
    CHECK(report.at("schema_version") == 1);
    CHECK(report.at("kind") == "chain");
    CHECK(report.at("chain_id") == "prop-2.7[m=1]");
    CHECK(report.at("status") == "pass");
    CHECK(report.at("norms") == "default-battery");
    CHECK(report.at("total_samples").get<long>() == 12);  // ceil split over 6 cells
    CHECK(!report.contains("records"));  // bulk rows stay out of the JSON report
}

TEST_CASE("cli csv export") {
    const CliResult r = run_cli(
        "verify --chain thm-2.5 --m1 1 --m2 2 --dims 2 --samples 3 --seed 5 --format csv");
    CHECK(r.exit_code == 0);
    const std::string header = r.output.substr(0, r.output.find('\n'));
    CHECK(header ==
          "chain_id,sample,dim,norm,left_term,right_term,left_value,right_value,margin");
    // Decorated chain ids contain commas and must be quoted.
    CHECK(r.output.find("\"thm-2.5[m1=1,m2=2]\"") != std::string::npos);
}

TEST_CASE("cli environment variables with flag precedence") {
    const std::string out1 = temp_path("env1.json");
    setenv("MEANSCOPE_SEED", "11", 1);
    const CliResult with_env =
        run_cli("verify --chain prop-2.7 --m 1 --dims 2 --samples 6 --output " + out1);
    unsetenv("MEANSCOPE_SEED");
    CHECK(with_env.exit_code == 0);
    std::ifstream f1(out1);
    nlohmann::json j1;
    f1 >> j1;
    CHECK(j1.at("seed").get<std::uint64_t>() == 11);

    setenv("MEANSCOPE_SEED", "11", 1);
    const CliResult with_flag =
        run_cli("verify --chain prop-2.7 --m 1 --dims 2 --samples 6 --seed 22");
    unsetenv("MEANSCOPE_SEED");
    CHECK(with_flag.exit_code == 0);
    CHECK(nlohmann::json::parse(with_flag.output).at("seed").get<std::uint64_t>() == 22);
    std::remove(out1.c_str());
}

TEST_CASE("cli explicit instance run") {
    const std::string s = temp_path("S.txt"), t = temp_path("T.txt"), x = temp_path("X.json");
    write_matrix_text(s, Eigen::MatrixXd::Constant(1, 1, 4.0));
    write_matrix_text(t, Eigen::MatrixXd::Constant(1, 1, 1.0));
    save_matrix(x, Eigen::MatrixXd::Constant(1, 1, 1.0));
    const CliResult r = run_cli("verify --chain prop-2.4 --alpha 1 --input " + s + "," + t +
                                "," + x);
    CHECK(r.exit_code == 0);
    const nlohmann::json report = nlohmann::json::parse(r.output);
    CHECK(report.at("status") == "pass");
    CHECK(report.at("total_samples") == 1);
    for (const std::string& p : {s, t, x}) std::remove(p.c_str());
}

TEST_CASE("cli report pretty printer") {
    const std::string path = temp_path("stored.json");
    const CliResult made = run_cli("search --lhs GM --rhs AM --output " + path);
    CHECK(made.exit_code == 0);
    const CliResult shown = run_cli("report --input " + path);
    CHECK(shown.exit_code == 0);
    CHECK(shown.output.find("search") != std::string::npos);
    CHECK(shown.output.find("lhs<=rhs") != std::string::npos);
    CHECK(run_cli("report --input /nonexistent.json").exit_code == 2);
    std::remove(path.c_str());
}

}  // TEST_SUITE
