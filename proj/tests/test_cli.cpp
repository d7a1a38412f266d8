// Command-line front end: argument handling, exit codes, report formats,
// the glue-spec parser, and stdout determinism.

#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <string>
#include <unistd.h>
#include <vector>

#include "json.hpp"
#include "qd/cli_args.hpp"

using namespace qd;
using Json = nlohmann::json;

namespace {

std::filesystem::path scratch_dir() {
    static auto dir = [] {
        auto d = std::filesystem::temp_directory_path() /
                 ("qd_cli_test_" + std::to_string(std::uint32_t(::getpid())));
        std::filesystem::create_directories(d);
        return d;
    }();
    return dir;
}

std::string write_file(const std::string& name, const std::string& text) {
    auto p = scratch_dir() / name;
    std::ofstream f(p);
    f << text;
    return p.string();
}

CliOutcome run(const std::vector<std::string>& args) { return run_cli(args); }

const char* kMarkov = "0 1 2\n1 2 2\n2 0 2\n";
const char* kTriangle = "0 1\n1 2\n2 0\n";

}  // namespace

TEST_CASE("cli: validate") {
    auto good = write_file("tri.qv", kTriangle);
    auto r = run({"validate", good});
    CHECK(r.code == 0);
    CHECK(r.out.find("valid") != std::string::npos);

    auto twocycle = write_file("twocycle.qv", "0 1\n1 0\n");
    r = run({"validate", twocycle});
    CHECK(r.code == 2);
    CHECK(r.err.find(":2:") != std::string::npos);  // offending line number

    auto heavy = write_file("heavy.qv", "0 1 3\n");
    r = run({"validate", heavy});
    CHECK(r.code == 1);
    CHECK(r.out.find("multiplicity 3") != std::string::npos);

    r = run({"validate", heavy, "--json"});
    Json j = Json::parse(r.out);
    CHECK(j["schema"] == 1);
    CHECK(j["valid"] == true);
    CHECK(j["flags"].size() == 1);

    r = run({"validate", (scratch_dir() / "missing.qv").string()});
    CHECK(r.code == 2);
}

TEST_CASE("cli: decompose verdicts and witness text") {
    auto markov = write_file("markov.qv", kMarkov);
    auto r = run({"decompose", markov, "--all", "--json"});
    REQUIRE(r.code == 0);
    Json j = Json::parse(r.out);
    CHECK(j["verdict"] == "decomposable");
    CHECK(j["unique"] == true);
    CHECK(j["all_enumerated"] == true);
    REQUIRE(j["decompositions"].size() == 1);
    CHECK(j["decompositions"][0]["blocks"].size() == 2);

    std::string star9;
    for (int i = 1; i <= 9; ++i) star9 += "0 " + std::to_string(i) + "\n";
    auto star = write_file("star9.qv", star9);
    r = run({"decompose", star});
    CHECK(r.code == 1);
    CHECK(r.out.find("degree 9 > 8") != std::string::npos);

    auto tri = write_file("tri.qv", kTriangle);
    r = run({"decompose", tri, "--all"});
    CHECK(r.code == 0);
    CHECK(r.out.find("decompositions: 2") != std::string::npos);

    r = run({"decompose", tri, "--trace"});
    CHECK(r.code == 0);
    CHECK(r.out.find("trace:") != std::string::npos);
}

TEST_CASE("cli: oracle agrees on the triangle") {
    auto tri = write_file("tri.qv", kTriangle);
    auto r = run({"oracle", tri, "--all"});
    CHECK(r.code == 0);
    CHECK(r.out.find("decompositions: 2") != std::string::npos);

    auto single = write_file("single.qv", "node 0\n");
    r = run({"oracle", single});
    CHECK(r.code == 1);
}

TEST_CASE("cli: stdout is byte-stable across runs") {
    auto markov = write_file("markov.qv", kMarkov);
    auto a = run({"decompose", markov, "--all", "--json", "--trace"});
    auto b = run({"decompose", markov, "--all", "--json", "--trace"});
    CHECK(a.out == b.out);
    CHECK(a.code == b.code);

    auto r1 = run({"random", "--seed", "7"});
    auto r2 = run({"random", "--seed", "7"});
    CHECK(r1.out == r2.out);
}

TEST_CASE("cli: glue assembles and reports rule violations") {
    auto spec = write_file("pair.glue", "block II 0=0 1=1 2=2\nblock I 0=2 1=3\n");
    auto r = run({"glue", spec});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("# glued 2 blocks") != std::string::npos);
    CHECK(r.out.find("2 3") != std::string::npos);

    auto cancel = write_file("cancel.glue", "block I 0=0 1=1\nblock I 0=1 1=0\n");
    r = run({"glue", cancel});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("# annihilate") != std::string::npos);
    CHECK(r.out.find("node 0") != std::string::npos);
    CHECK(r.out.find("node 1") != std::string::npos);

    auto crowded = write_file("crowded.glue",
                              "block II 0=0 1=1 2=2\n"
                              "block II 0=0 1=3 2=4\n"
                              "block II 0=0 1=5 2=6\n");
    r = run({"glue", crowded});
    CHECK(r.code == 2);

    auto partial = write_file("partial.glue", "block II 0=0 1=1\n");
    r = run({"glue", partial});
    CHECK(r.code == 2);
    CHECK(r.err.find("slot 2") != std::string::npos);
}

TEST_CASE("cli: random output feeds glue, then decompose") {
    auto r = run({"random", "--seed", "9", "--max-blocks", "4"});
    REQUIRE(r.code == 0);
    auto spec = write_file("random.glue", r.out);
    auto g = run({"glue", spec});
    REQUIRE(g.code == 0);
    auto qv = write_file("random.qv", g.out);  // glue stdout parses as a quiver
    auto d = run({"decompose", qv});
    CHECK(d.code == 0);
}

TEST_CASE("cli: mutate and mutate-class") {
    auto spike = write_file("spike.qv", "0 1\n");
    auto r = run({"mutate", spike, "--k", "0"});
    REQUIRE(r.code == 0);
    CHECK(r.out == "1 0\n");

    r = run({"mutate", spike, "--k", "5"});
    CHECK(r.code == 2);

    auto markov = write_file("markov.qv", kMarkov);
    r = run({"mutate-class", markov});
    CHECK(r.code == 0);
    CHECK(r.out.find("class size: 1") != std::string::npos);

    auto a3 = write_file("a3.qv", "0 1\n1 2\n");
    r = run({"mutate-class", a3, "--json"});
    REQUIRE(r.code == 0);
    Json j = Json::parse(r.out);
    CHECK(j["status"] == "finite");
    CHECK(j["class_size"] == 4);

    r = run({"mutate-class", a3, "--limit", "1"});
    CHECK(r.code == 3);
}

TEST_CASE("cli: gen-catalog") {
    auto r = run({"gen-catalog", "degree3"});
    REQUIRE(r.code == 0);
    CHECK(r.out.rfind("qdcatalog 1 degree3", 0) == 0);

    r = run({"gen-catalog", "no-such-kind"});
    CHECK(r.code == 2);
}

TEST_CASE("cli: usage errors") {
    auto tri = write_file("tri.qv", kTriangle);
    CHECK(run({"decompose", tri, "--seed", "3"}).code == 2);  // flag not legal here
    CHECK(run({"frobnicate", tri}).code == 2);
    CHECK(run({}).code == 2);
    CHECK(run({"mutate", tri}).code == 2);  // --k is required
    auto h = run({"--help"});
    CHECK(h.code == 0);
    CHECK(!h.out.empty());
}
