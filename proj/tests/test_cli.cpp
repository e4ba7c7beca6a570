#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "otai/cli.hpp"

namespace fs = std::filesystem;

namespace {

struct RunResult {
    int code = -1;
    std::string out;
    std::string err;
};

/// Runs the CLI in-process with captured streams.
RunResult run(const std::vector<std::string>& args) {
    std::vector<const char*> argv = {"ota-inverse"};
    for (const auto& a : args) argv.push_back(a.c_str());

    std::stringstream out, err;
    std::streambuf* old_out = std::cout.rdbuf(out.rdbuf());
    std::streambuf* old_err = std::cerr.rdbuf(err.rdbuf());
    RunResult r;
    r.code = otai::cli::run_cli(static_cast<int>(argv.size()), argv.data());
    std::cout.rdbuf(old_out);
    std::cerr.rdbuf(old_err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string temp_dir(const std::string& name) {
    const std::string path = "/tmp/otai_cli_" + name;
    fs::remove_all(path);
    return path;
}

std::string write_file(const std::string& name, const std::string& body) {
    const std::string path = "/tmp/otai_cli_" + name;
    std::ofstream out(path);
    out << body;
    return path;
}

} // namespace

TEST_CASE("usage errors exit with 64") {
    CHECK(run({}).code == 64);
    CHECK(run({"frobnicate"}).code == 64);
    CHECK(run({"estimate", "--bogus-flag", "1"}).code == 64);
    CHECK(run({"estimate", "--d", "ten", "--s", "5", "--M", "1"}).code == 64);

    const RunResult missing = run({"estimate", "--s", "25", "--M", "4"});
    CHECK(missing.code == 64);
    CHECK(missing.err.find("--d") != std::string::npos);

    CHECK(run({"estimate", "--d", "20", "--s", "5", "--M", "2", "--model", "quantum"}).code ==
          64);
    CHECK(run({"estimate", "--d", "20", "--s", "5", "--M", "2", "--alphas", "1,zap"}).code == 64);
    CHECK(run({"solvability", "--d", "20", "--s", "5", "--M-grid", "4,2"}).code == 64);
    CHECK(run({"estimate", "--d", "0", "--s", "5", "--M", "2"}).code == 64);
}

TEST_CASE("help exits cleanly") {
    const RunResult r = run({"--help"});
    CHECK(r.code == 0);
    CHECK(r.out.find("estimate") != std::string::npos);
    CHECK(r.out.find("concentration") != std::string::npos);
}

TEST_CASE("estimate writes its csv and reruns byte-identically") {
    const std::string dir = temp_dir("estimate");
    const std::vector<std::string> args = {"estimate", "--d", "30",   "--s",    "8",
                                           "--M",      "2",  "--trials", "20", "--seed", "3",
                                           "--out",    dir};
    CHECK(run(args).code == 0);
    const std::string first = slurp(dir + "/estimate.csv");
    CHECK(first.rfind("model,M,trials,mean,stderr,infinite_count\n", 0) == 0);
    CHECK(first.find("per-user,2,20,") != std::string::npos);

    CHECK(run(args).code == 0);
    CHECK(slurp(dir + "/estimate.csv") == first);
}

TEST_CASE("solvability exit code tracks the predicate") {
    const std::string dir = temp_dir("solv");
    CHECK(run({"solvability", "--d", "30", "--s", "8", "--M-grid", "1,2", "--trials", "20",
               "--out", dir}).code == 0);
    const std::string body = slurp(dir + "/solvability.csv");
    CHECK(body.rfind("M,mean,stderr,bound,satisfied\n", 0) == 0);

    // Outside the bound's validity region the computation fails cleanly.
    CHECK(run({"solvability", "--d", "25", "--s", "17", "--M-grid", "1,2", "--trials", "10",
               "--out", temp_dir("solv2")}).code == 2);
}

TEST_CASE("security with identity fading is honestly insecure") {
    const std::string dir = temp_dir("sec");
    const RunResult r = run({"security", "--d", "25", "--s", "6", "--M-grid", "1,2", "--trials",
                             "12", "--fading", "identity", "--out", dir});
    CHECK(r.code == 1);
    CHECK(slurp(dir + "/security.csv").find(",0\n") != std::string::npos);

    // The heavy-tailed M=1 difference needs a few more trials to clear the
    // three-sigma margin at this scale.
    const RunResult ok = run({"security", "--d", "25", "--s", "6", "--M-grid", "1,2", "--trials",
                              "40", "--out", temp_dir("sec2")});
    CHECK(ok.code == 0);
}

TEST_CASE("fig1 runs on desk-scale defaults") {
    const std::string dir = temp_dir("fig1");
    const RunResult r =
        run({"fig1", "--trials", "4", "--M-grid", "1,2", "--out", dir});
    CHECK(r.code == 0);
    const std::string body = slurp(dir + "/fig1.csv");
    CHECK(body.rfind("M,legit_mean,legit_stderr,eaves_mean,eaves_stderr\n", 0) == 0);
    CHECK(r.out.find("d=100") != std::string::npos);
}

TEST_CASE("config supplies defaults and flags override it") {
    const std::string cfg = write_file("cfg.json",
                                       "{\"d\": 30, \"s\": 8, \"M\": 2, \"trials\": 15,"
                                       " \"seed\": 11}");
    const std::string a = temp_dir("cfg_a");
    const std::string b = temp_dir("cfg_b");
    const std::string c = temp_dir("cfg_c");

    CHECK(run({"estimate", "--config", cfg, "--out", a}).code == 0);
    CHECK(run({"estimate", "--d", "30", "--s", "8", "--M", "2", "--trials", "15", "--seed",
               "11", "--out", b}).code == 0);
    CHECK(slurp(a + "/estimate.csv") == slurp(b + "/estimate.csv"));

    // --M on the command line wins over the config value.
    CHECK(run({"estimate", "--config", cfg, "--M", "3", "--out", c}).code == 0);
    CHECK(slurp(c + "/estimate.csv").find("per-user,3,15,") != std::string::npos);

    CHECK(run({"estimate", "--config", "/nonexistent/cfg.json"}).code == 64);
    const std::string broken = write_file("broken.json", "{\"d\": }");
    CHECK(run({"estimate", "--config", broken}).code == 64);
}

TEST_CASE("environment seed applies only when no flag or config seed exists") {
    const std::string dir_env = temp_dir("env_a");
    const std::string dir_flag = temp_dir("env_b");
    setenv("OTA_INVERSE_SEED", "17", 1);
    CHECK(run({"estimate", "--d", "30", "--s", "8", "--M", "2", "--trials", "10", "--out",
               dir_env}).code == 0);
    unsetenv("OTA_INVERSE_SEED");
    CHECK(run({"estimate", "--d", "30", "--s", "8", "--M", "2", "--trials", "10", "--seed",
               "17", "--out", dir_flag}).code == 0);
    CHECK(slurp(dir_env + "/estimate.csv") == slurp(dir_flag + "/estimate.csv"));

    setenv("OTA_INVERSE_SEED", "not-a-number", 1);
    CHECK(run({"estimate", "--d", "30", "--s", "8", "--M", "2", "--trials", "10"}).code == 64);
    unsetenv("OTA_INVERSE_SEED");
}

TEST_CASE("concentration reads gradient files and validates them") {
    const std::string grads = write_file("grads.csv", "user,g_1,g_2,g_3,g_4\n"
                                                      "0,1.0,0.2,0.0,0.8\n"
                                                      "1,0.5,1.5,0.1,0.0\n");
    const std::string dir = temp_dir("conc");
    const RunResult r = run({"concentration", "--d", "4", "--s", "2", "--grads-file", grads,
                             "--epsilon", "2.0", "--sigma-gamma", "0.5", "--delta", "0.3",
                             "--trials", "50", "--out", dir});
    CHECK(r.code == 0);
    const std::string body = slurp(dir + "/concentration.csv");
    CHECK(body.rfind("M,z,epsilon,empirical,exact,bound\n", 0) == 0);
    CHECK(body.find("\n2,") != std::string::npos); // M from the file's two rows

    CHECK(run({"concentration", "--d", "5", "--s", "2", "--grads-file", grads, "--epsilon",
               "2.0"}).code == 64);
    CHECK(run({"concentration", "--d", "4", "--s", "2", "--grads-file", grads, "--M", "3",
               "--epsilon", "2.0"}).code == 64);
    CHECK(run({"concentration", "--d", "4", "--s", "2", "--grads-file", grads, "--M-grid",
               "1,2", "--epsilon", "2.0"}).code == 64);
    CHECK(run({"concentration", "--d", "4", "--s", "2", "--grads-file", "/nonexistent.csv",
               "--epsilon", "2.0"}).code == 3);
    CHECK(run({"concentration", "--d", "4", "--s", "2", "--epsilon", "2.0", "--M", "2",
               "--out", "/proc/forbidden/dir"}).code == 3);
}

TEST_CASE("threaded runs write identical csv files") {
    const std::string one = temp_dir("th1");
    const std::string four = temp_dir("th4");
    CHECK(run({"fig1", "--trials", "6", "--M-grid", "1,2", "--threads", "1", "--out", one})
              .code == 0);
    CHECK(run({"fig1", "--trials", "6", "--M-grid", "1,2", "--threads", "4", "--out", four})
              .code == 0);
    CHECK(slurp(one + "/fig1.csv") == slurp(four + "/fig1.csv"));
}
