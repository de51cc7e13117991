#include "catch_amalgamated.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

struct RunResult {
    int code = -1;
    std::string out, err;
};

std::string env_or(const char* name, const std::string& fallback) {
    const char* v = std::getenv(name);
    return v && *v ? v : fallback;
}

const std::string& binary() {
    static const std::string bin = env_or("DELAYREP_BIN", "delayrep");
    return bin;
}

fs::path scratch(const std::string& name) {
    static const fs::path dir = [] {
        fs::path d = fs::path(env_or("DELAYREP_TMP", fs::temp_directory_path().string())) / "cli_scratch";
        fs::create_directories(d);
        return d;
    }();
    return dir / name;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

RunResult run(const std::string& args) {
    const fs::path out = scratch("stdout.txt"), err = scratch("stderr.txt");
    const std::string cmd = "'" + binary() + "' " + args + " >'" + out.string() + "' 2>'" + err.string() + "'";
    const int status = std::system(cmd.c_str());
    RunResult r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
}

/// The number following `key` on the last line that contains it.
double number_after(const std::string& text, const std::string& key) {
    const auto pos = text.rfind(key);
    REQUIRE(pos != std::string::npos);
    return std::stod(text.substr(pos + key.size()));
}

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream(p) << text;
}

const std::regex kDiagnostic(R"(^delayrep: error kind=\S+ code=[0-3] msg=[^\n]+\n$)");

}  // namespace

TEST_CASE("demo specs pass their lemma checks", "[cli]") {
    const std::string shower = scratch("shower3.json").string();
    REQUIRE(run("demo shower --n 3 -o " + shower).code == 0);
    REQUIRE(run("validate " + shower).code == 0);

    const RunResult l1 = run("lemma-check " + shower + " --lemma 1");
    INFO(l1.out << l1.err);
    CHECK(l1.code == 0);
    CHECK(number_after(l1.out, "max deviation ") <= 1e-8);

    const std::string sof = scratch("sof3.json").string();
    REQUIRE(run("demo sof --n 3 -o " + sof).code == 0);
    const RunResult l5 = run("lemma-check " + sof + " --lemma 5");
    INFO(l5.out << l5.err);
    CHECK(l5.code == 0);
    CHECK(number_after(l5.out, "max deviation ") <= 1e-9);

    const std::string ddf = scratch("shower1_ddf.json").string();
    REQUIRE(run("demo shower --n 1 --form ddf -o " + ddf).code == 0);
    const RunResult l3 = run("lemma-check " + ddf + " --lemma 3");
    CHECK(l3.code == 0);

    // Lemma 5 needs the feedback-network section.
    const RunResult wrong = run("lemma-check " + shower + " --lemma 5");
    CHECK(wrong.code == 1);
    CHECK(std::regex_match(wrong.err, kDiagnostic));
}

TEST_CASE("validation failures name the broken invariant", "[cli]") {
    const fs::path spec = scratch("equal_delays.json");
    write_file(spec, R"({"type": "DDE", "delays": [1, 1],
        "dims": {"n": 1, "m": 0, "p": 0, "q": 0, "r": 0},
        "matrices": {"A0": [[-1]], "Ai": [[[0.5]], [[0.2]]]}})");
    const RunResult r = run("validate " + spec.string());
    CHECK(r.code == 1);
    CHECK(std::regex_match(r.err, kDiagnostic));
    CHECK(r.err.find("delays not strictly increasing") != std::string::npos);
    CHECK(r.err.find("kind=validation") != std::string::npos);
}

TEST_CASE("PIE pipeline matches the DDF trajectory", "[cli]") {
    const std::string ddf = scratch("shower2_ddf.json").string();
    const std::string pie = scratch("shower2_pie.json").string();
    const std::string a = scratch("ddf.csv").string(), b = scratch("pie.csv").string();
    REQUIRE(run("demo shower --n 2 --form ddf -o " + ddf).code == 0);
    REQUIRE(run("convert " + ddf + " --to pie -o " + pie).code == 0);
    const std::string inputs = " --tf 4 --dt 1e-3 --w poly:0,0,1 --u poly:0,0,0.5 ";
    REQUIRE(run("simulate " + ddf + inputs + "-o " + a).code == 0);
    const RunResult sim = run("simulate " + pie + inputs + "--order 16 -o " + b);
    INFO(sim.err);
    REQUIRE(sim.code == 0);
    const RunResult cmp = run("compare " + b + " " + a + " --tol 1e-3 --signals z");
    INFO(cmp.out << cmp.err);
    CHECK(cmp.code == 0);
    CHECK(number_after(cmp.out, "max deviation ") <= 1e-3);

    SECTION("conversions to the other forms") {
        const std::string dde = scratch("shower2.json").string();
        REQUIRE(run("demo shower --n 2 -o " + dde).code == 0);
        for (const char* to : {"ddf", "odepde", "pie"}) {
            const std::string out = scratch(std::string("conv_") + to + ".json").string();
            CHECK(run("convert " + dde + " --to " + to + " -o " + out).code == 0);
            CHECK(run("validate " + out).code == 0);
        }
        const std::string minimal = scratch("minimal.json").string();
        CHECK(run("convert " + dde + " --to ddf --minimal --rank-tol 1e-9 -o " + minimal).code == 0);
        CHECK(slurp(minimal).find("\"p_i\": [1, 1]") != std::string::npos);
        CHECK(run("convert " + pie + " --to ddf -o " + minimal).code == 1);
    }
}

TEST_CASE("exit codes", "[cli]") {
    SECTION("usage errors") {
        for (const char* args : {"", "frobnicate", "convert", "convert x.json --to nowhere", "simulate x.json --dt abc",
                                 "lemma-check x.json --lemma 9", "demo teapot"}) {
            INFO(args);
            const RunResult r = run(args);
            CHECK(r.code == 3);
            CHECK(std::regex_match(r.err, kDiagnostic));
        }
        CHECK(run("--help").code == 0);
    }
    SECTION("missing or malformed files") {
        CHECK(run("validate " + scratch("absent.json").string()).code == 1);
        const fs::path junk = scratch("junk.json");
        write_file(junk, "{ not json");
        CHECK(run("validate " + junk.string()).code == 1);
    }
    SECTION("numerical failure") {
        const fs::path spec = scratch("blowup.json");
        write_file(spec, R"({"type": "DDE", "delays": [1],
            "dims": {"n": 1, "m": 0, "p": 0, "q": 0, "r": 0},
            "matrices": {"A0": [[800]], "Ai": [[[1]]]}})");
        const RunResult r = run("simulate " + spec.string() + " --tf 2 --x0 const:1 -o " + scratch("blowup.csv").string());
        CHECK(r.code == 2);
        CHECK(std::regex_match(r.err, kDiagnostic));
    }
    SECTION("runs are deterministic") {
        const std::string spec = scratch("uav.json").string();
        REQUIRE(run("demo uav --n 2 --seed 4 -o " + spec).code == 0);
        const std::string again = scratch("uav_again.json").string();
        REQUIRE(run("demo uav --n 2 --seed 4 -o " + again).code == 0);
        CHECK(slurp(spec) == slurp(again));
        const std::string a = scratch("uav_a.csv").string(), b = scratch("uav_b.csv").string();
        const std::string args = " --tf 1 --w sin:1:3:0 --u sin:0.5:2:0 -o ";
        const RunResult first = run("simulate " + spec + args + a);
        const RunResult second = run("simulate " + spec + args + b);
        CHECK(first.code == second.code);
        CHECK(first.code == 0);
        CHECK(slurp(a) == slurp(b));
        CHECK(run("compare " + a + " " + b + " --tol 0").code == 0);
    }
}
