#include <catch2/catch_amalgamated.hpp>

#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
};

RunResult run_cli(const std::vector<std::string>& args) {
    std::string cmd = std::string(PRODMEAS_CLI);
    for (const auto& a : args) cmd += " '" + a + "'";
    cmd += " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    RunResult res;
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) res.out.append(buf, n);
    int status = pclose(pipe);
    res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return res;
}

std::string docs_dir() { return PRODMEAS_DOCS; }

}  // namespace

TEST_CASE("check all is deterministic and green") {
    RunResult first = run_cli({"check", "all"});
    RunResult second = run_cli({"check", "all"});
    CHECK(first.exit_code == 0);
    CHECK(first.out == second.out);  // byte-identical reports

    auto doc = nlohmann::json::parse(first.out);
    CHECK(doc["all_pass"].get<bool>());
    for (const auto& check : doc["checks"]) CHECK(check["status"] == "pass");
}

TEST_CASE("exit codes match the error taxonomy") {
    // unknown object: parse error
    std::string f = docs_dir() + "/sixth_rectangle.json";
    CHECK(run_cli({"--file", f, "vol", "--name", "nope"}).exit_code == 4);

    // malformed json on stdin: parse error
    RunResult bad = run_cli({"--file", "/dev/null", "vol", "--name", "r"});
    CHECK(bad.exit_code == 4);

    // violated precondition: overlapping union members
    std::string m = docs_dir() + "/measure_suite.json";
    CHECK(run_cli({"--file", m, "measure", "union", "--name", "overlapping_pair"}).exit_code == 2);

    // missing required argument: usage error
    CHECK(run_cli({"vol"}).exit_code == 4);

    CHECK(run_cli({"--help"}).exit_code == 0);
}

TEST_CASE("docs problem files reproduce their stated values") {
    std::size_t files = 0, checks = 0;
    for (const auto& entry : std::filesystem::directory_iterator(docs_dir())) {
        if (entry.path().extension() != ".json") continue;
        ++files;
        std::ifstream in(entry.path());
        auto doc = nlohmann::json::parse(in);
        REQUIRE(doc.contains("expected"));
        for (const auto& expectation : doc["expected"]) {
            std::vector<std::string> args = {"--file", entry.path().string()};
            for (const auto& a : expectation["args"]) args.push_back(a.get<std::string>());
            CAPTURE(entry.path().filename().string(), args);
            RunResult res = run_cli(args);
            REQUIRE(res.exit_code == 0);
            auto out = nlohmann::json::parse(res.out);
            std::string key = expectation["key"].get<std::string>();
            REQUIRE(out.contains(key));
            CHECK(out[key] == expectation["value"]);
            ++checks;
        }
    }
    CHECK(files >= 6);
    CHECK(checks >= 25);
}

TEST_CASE("outputs are stable across repeated runs") {
    std::string f = docs_dir() + "/rn_suite.json";
    RunResult a = run_cli({"--file", f, "rn", "frakP", "--name", "pair"});
    RunResult b = run_cli({"--file", f, "rn", "frakP", "--name", "pair"});
    CHECK(a.exit_code == 0);
    CHECK(a.out == b.out);
}
