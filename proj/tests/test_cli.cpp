// End-to-end checks of the command-line tool. The binary path arrives via the
// VARQLAB_CLI environment variable, a scratch directory via VARQLAB_TEST_TMP.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>

namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

std::string cli_path() {
    const char* path = std::getenv("VARQLAB_CLI");
    REQUIRE_MESSAGE(path != nullptr, "VARQLAB_CLI must point at the binary");
    return path;
}

fs::path scratch_dir() {
    const char* dir = std::getenv("VARQLAB_TEST_TMP");
    REQUIRE_MESSAGE(dir != nullptr, "VARQLAB_TEST_TMP must point at a scratch directory");
    fs::create_directories(dir);
    return dir;
}

struct RunResult {
    int exit_code = -1;
    std::string stdout_text;
};

RunResult run_cli(const std::string& args) {
    static int counter = 0;
    const fs::path out = scratch_dir() / ("stdout_" + std::to_string(counter++) + ".txt");
    const std::string command =
        cli_path() + " " + args + " > " + out.string() + " 2>/dev/null";
    const int status = std::system(command.c_str());
    RunResult result;
    result.exit_code = WEXITSTATUS(status);
    std::ifstream in(out);
    std::stringstream buffer;
    buffer << in.rdbuf();
    result.stdout_text = buffer.str();
    return result;
}

fs::path write_temp(const std::string& name, const std::string& contents) {
    const fs::path path = scratch_dir() / name;
    std::ofstream(path) << contents;
    return path;
}

json first_json(const std::string& text) {
    const auto brace = text.find('{');
    REQUIRE(brace != std::string::npos);
    return json::parse(text.substr(brace));
}

}  // namespace

TEST_CASE("group reports the two-group partition") {
    const auto ham = write_temp("five.txt", "1 Z0*X1\n1 Y1*X2\n1 X2*X3\n1 X0\n1 Z3\n");
    const RunResult result = run_cli("group " + ham.string());
    REQUIRE(result.exit_code == 0);
    const json report = first_json(result.stdout_text);
    CHECK(report["results"]["n_groups"] == 2);
    CHECK(report["results"]["groups"][0][0] == "Z0*X1");
}

TEST_CASE("shots plan reproduces the 150/90/60 split") {
    const auto ham = write_temp("alloc.txt", "5 Z0\n3 Z1\n2 Z0*Z1\n");
    const RunResult result =
        run_cli("shots plan " + ham.string() + " --budget 300 --strategy proportional");
    REQUIRE(result.exit_code == 0);
    const json report = first_json(result.stdout_text);
    const auto& allocations = report["results"]["allocations"];
    CHECK(allocations[0]["shots"] == 150);
    CHECK(allocations[1]["shots"] == 90);
    CHECK(allocations[2]["shots"] == 60);
}

TEST_CASE("spectrum returns the worked-example ground energy") {
    const auto ham = write_temp("worked.txt", "2.0 Z0\n1.0 X0\n1.0 I\n");
    const RunResult result = run_cli("spectrum " + ham.string());
    REQUIRE(result.exit_code == 0);
    const json report = first_json(result.stdout_text);
    CHECK(std::abs(report["results"]["ground_energy"].get<double>() + 1.2360679775) < 1e-8);
}

TEST_CASE("vqe run with the exact estimator writes report and trace") {
    const auto ham = write_temp("worked2.txt", "2.0 Z0\n1.0 X0\n1.0 I\n");
    const fs::path out = scratch_dir() / "vqe_report.json";
    const fs::path trace = scratch_dir() / "vqe_trace.csv";
    const RunResult result =
        run_cli("vqe run --hamiltonian " + ham.string() + " --shots exact --out " +
                out.string() + " --trace " + trace.string());
    REQUIRE(result.exit_code == 0);
    REQUIRE(fs::exists(out));
    REQUIRE(fs::exists(trace));
    std::ifstream report_in(out);
    const json report = json::parse(report_in);
    CHECK(std::abs(report["results"]["best_energy"].get<double>() + 1.2360679775) < 1e-3);
    CHECK(report["results"]["gap"].get<double>() >= -1e-9);
    std::ifstream trace_in(trace);
    std::string header;
    std::getline(trace_in, header);
    CHECK(header == "iteration,value,evaluations,shots,p0");
}

TEST_CASE("qaoa run solves the triangle") {
    const auto graph = write_temp("triangle.txt", "3\n0 1 10\n0 2 10\n1 2 1\n");
    const RunResult result =
        run_cli("qaoa run --graph " + graph.string() +
                " --p 2 --init schedule:0.5 --shots 1000 --seed 7 --max-evals 150");
    REQUIRE(result.exit_code == 0);
    const json report = first_json(result.stdout_text);
    const std::string solution = report["results"]["solution_bitstring"];
    CHECK((solution == "100" || solution == "011"));
    CHECK(report["results"]["cut_value"] == 20.0);
    CHECK(report["results"]["approximation_ratio"] == 1.0);
}

TEST_CASE("zne run extrapolates toward the clean value") {
    const auto circuit = write_temp("x.txt", "qubits 1\nX q0\n");
    const auto obs = write_temp("z.txt", "1 Z0\n");
    const RunResult result = run_cli(
        "zne run --circuit " + circuit.string() + " --observable " + obs.string() +
        " --scales 1,3,5 --fit linear --trajectories 3000 --seed 4 --p1 0.01 --p2 0"
        " --readout0 0 --readout1 0");
    REQUIRE(result.exit_code == 0);
    const json report = first_json(result.stdout_text);
    const double raw = report["results"]["raw"];
    const double extrapolated = report["results"]["extrapolated"];
    CHECK(std::abs(extrapolated + 1.0) < std::abs(raw + 1.0));
}

TEST_CASE("sampled runs demand a seed and never start") {
    const auto ham = write_temp("worked3.txt", "2.0 Z0\n1.0 X0\n1.0 I\n");
    const fs::path out = scratch_dir() / "never_written.json";
    const RunResult result = run_cli("vqe run --hamiltonian " + ham.string() +
                                     " --shots 500 --out " + out.string());
    CHECK(result.exit_code == 2);
    CHECK_FALSE(fs::exists(out));
}

TEST_CASE("bad configs exit with code 2") {
    CHECK(run_cli("group /does/not/exist.txt").exit_code == 2);
    const auto ham = write_temp("worked4.txt", "2.0 Z0\n1.0 X0\n1.0 I\n");
    CHECK(run_cli("vqe run --hamiltonian " + ham.string() + " --objective sharpe --shots exact")
              .exit_code == 2);
    CHECK(run_cli("vqe run --hamiltonian " + ham.string() +
                  " --objective cvar:0.5 --shots exact")
              .exit_code == 2);
    CHECK(run_cli("demo unknown-demo").exit_code == 2);
    CHECK(run_cli("shots plan " + ham.string() + " --budget 1").exit_code == 2);
}

TEST_CASE("runtime failures exit with code 3") {
    const auto ham = write_temp("worked5.txt", "2.0 Z0\n1.0 X0\n1.0 I\n");
    const RunResult result = run_cli("spectrum " + ham.string() +
                                     " --out /nonexistent-dir/report.json");
    CHECK(result.exit_code == 3);
}

TEST_CASE("demos are deterministic across runs") {
    for (const std::string name :
         {"measurement-cost", "shot-allocation", "vqe-worked-example", "triangle-maxcut"}) {
        const fs::path out_a = scratch_dir() / ("demo_a_" + name + ".json");
        const fs::path out_b = scratch_dir() / ("demo_b_" + name + ".json");
        REQUIRE(run_cli("demo " + name + " --out " + out_a.string()).exit_code == 0);
        REQUIRE(run_cli("demo " + name + " --out " + out_b.string()).exit_code == 0);
        std::ifstream in_a(out_a);
        std::ifstream in_b(out_b);
        const json a = json::parse(in_a);
        const json b = json::parse(in_b);
        CHECK(a["results"] == b["results"]);  // provenance may differ, results not
        CHECK(a["results"]["all_passed"] == true);
    }
}

TEST_CASE("verify prints oracle spot checks") {
    const RunResult result = run_cli("verify");
    CHECK(result.exit_code == 0);
    CHECK(result.stdout_text.find("brute_force_min(triangle): energy -20") != std::string::npos);
    CHECK(result.stdout_text.find("verify done") != std::string::npos);
}
