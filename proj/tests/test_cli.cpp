// End-to-end checks of the installed command line. The binary path comes
// from INFOCLUST_BIN (set by ctest); without it the cases bail out loudly.

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "infoclust/generate.hpp"
#include "infoclust/matrix.hpp"

using namespace infoclust;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
};

std::string binary() {
    if (const char* env = std::getenv("INFOCLUST_BIN"))
        return env;
    if (fs::exists("build/tools/infoclust"))
        return "build/tools/infoclust";
    return {};
}

RunResult run(const std::string& args) {
    static int counter = 0;
    auto capture = fs::temp_directory_path() / ("infoclust_cli_out_" + std::to_string(counter++));
    std::string cmd = binary() + " " + args + " > " + capture.string() + " 2>&1";
    int rc = std::system(cmd.c_str());
    RunResult res;
    res.exit_code = WEXITSTATUS(rc);
    std::ifstream f(capture);
    res.out.assign(std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>());
    fs::remove(capture);
    return res;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>());
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

#define REQUIRE_BINARY()                                        \
    do {                                                        \
        if (binary().empty()) {                                 \
            FAIL("INFOCLUST_BIN not set and no local binary"); \
            return;                                             \
        }                                                       \
    } while (0)

}  // namespace

TEST_CASE("cli: triple report matches the exact model") {
    REQUIRE_BINARY();
    auto res = run("triple --universe 3 --x 0,1 --y 1,2 --z 2,0");
    REQUIRE(res.exit_code == 0);
    auto j = json::parse(res.out);
    CHECK(j["triple_info"] == 0);
    CHECK(j["profile"] == json::array({2, 2, 2, 3, 3, 3, 3}));
    CHECK(j["w"].empty());
    CHECK(j["residuals"] == json::array({0, 0, 0}));

    auto venn = run("triple --universe 6 --x 0,1 --y 1,2 --z 1,4 --delta 0");
    REQUIRE(venn.exit_code == 0);
    auto v = json::parse(venn.out);
    CHECK(v["triple_info"] == 1);
    CHECK(v["w"] == json::array({1}));
    CHECK(v["clones"]["pass"] == true);
}

TEST_CASE("cli: matrix over explicit set items") {
    REQUIRE_BINARY();
    TempDir dir("infoclust_cli_matrix");
    {
        std::ofstream items(dir.path / "items.json");
        items << "[[0],[0,1],[0,1,2]]";
    }
    auto res = run("matrix --backend set --universe 3 --items " + (dir.path / "items.json").string() +
                   " --out " + (dir.path / "out").string());
    REQUIRE(res.exit_code == 0);
    auto mat = load_matrix_csv((dir.path / "out" / "matrix.csv").string());
    REQUIRE(mat.size() == 3);
    CHECK(mat.at(0, 2) == 2);
    CHECK(mat.at(1, 2) == 1);
}

TEST_CASE("cli: ncd pipeline is deterministic and clusters the corpus") {
    REQUIRE_BINARY();
    TempDir dir("infoclust_cli_pipeline");
    auto corpus = dir.path / "corpus";
    write_synthetic_corpus(corpus, 2, 3, 1500, 321);

    auto one = dir.path / "run1";
    auto two = dir.path / "run2";
    for (const auto& out : {one, two}) {
        auto res = run("clusters --backend ncd --in " + corpus.string() + " --m 0.85 --l 1 --out " +
                       out.string());
        REQUIRE(res.exit_code == 0);
    }
    for (const char* name : {"matrix.csv", "clusters.json", "tree.dot"}) {
        CHECK(fs::exists(one / name));
        CHECK(slurp(one / name) == slurp(two / name));  // byte-identical
    }
    auto clusters = json::parse(slurp(one / "clusters.json"));
    REQUIRE(clusters.size() == 2);
    CHECK(clusters[0]["members"].size() == 3);
    CHECK(clusters[1]["members"].size() == 3);
    std::string first = clusters[0]["members"][0].get<std::string>();
    CHECK(first.rfind("fam0/", 0) == 0);

    // mining an existing matrix gives the same clusters
    auto from_csv = run("clusters --matrix " + (one / "matrix.csv").string() +
                        " --backend ncd --m 0.85 --l 1 --out " + (dir.path / "run3").string());
    REQUIRE(from_csv.exit_code == 0);
    CHECK(slurp(dir.path / "run3" / "clusters.json") == slurp(one / "clusters.json"));
}

TEST_CASE("cli: single-file corpus yields a singleton cluster") {
    REQUIRE_BINARY();
    TempDir dir("infoclust_cli_single");
    auto corpus = dir.path / "corpus";
    fs::create_directories(corpus);
    {
        std::ofstream f(corpus / "only.txt", std::ios::binary);
        f << "a lonely file\n";
    }
    auto res = run("clusters --backend ncd --in " + corpus.string() + " --m 0.85 --l 0 --out " +
                   (dir.path / "out").string());
    REQUIRE(res.exit_code == 0);
    auto mat = load_matrix_csv((dir.path / "out" / "matrix.csv").string(), DistanceUnits::ncd);
    CHECK(mat.size() == 1);
    auto clusters = json::parse(slurp(dir.path / "out" / "clusters.json"));
    REQUIRE(clusters.size() == 1);
    CHECK(clusters[0]["members"] == json::array({"only.txt"}));
}

TEST_CASE("cli: empty corpus directory is a usage error") {
    REQUIRE_BINARY();
    TempDir dir("infoclust_cli_empty");
    auto corpus = dir.path / "corpus";
    fs::create_directories(corpus);
    auto res = run("clusters --backend ncd --in " + corpus.string() + " --m 0.5 --l 1 --out " +
                   (dir.path / "out").string());
    CHECK(res.exit_code == 2);
}

TEST_CASE("cli: referential filter and certification through files") {
    REQUIRE_BINARY();
    TempDir dir("infoclust_cli_ref");
    std::mt19937 rng(5);
    auto inst = make_clustered_instance(rng, 4, 1, true);
    {
        std::ofstream model(dir.path / "model.json");
        model << inst.system.to_json().dump(2);
    }
    auto mat = distance_matrix(TableModel(inst.system));
    {
        std::ofstream stream(dir.path / "stream.jsonl");
        for (const auto& group : inst.stream) {
            json j;
            j["members"] = json::array();
            for (std::size_t x : group)
                j["members"].push_back(mat.ids()[x]);
            stream << j.dump() << "\n";
        }
        std::ofstream target(dir.path / "target.json");
        json t;
        t["members"] = json::array();
        for (std::size_t x : inst.stream[inst.target_pos])
            t["members"].push_back(mat.ids()[x]);
        target << t.dump();
    }

    auto ref = run("referential --backend table --model " + (dir.path / "model.json").string() +
                   " --stream " + (dir.path / "stream.jsonl").string() + " --m 4 --d 1 --out " +
                   (dir.path / "out").string());
    REQUIRE(ref.exit_code == 0);
    auto reg = json::parse(slurp(dir.path / "out" / "registry.json"));
    CHECK(reg["m"] == 4);
    CHECK(reg["dprime"] == 4);
    CHECK(!reg["kept"].empty());

    auto cert = run("certify --backend table --model " + (dir.path / "model.json").string() +
                    " --stream " + (dir.path / "stream.jsonl").string() + " --target " +
                    (dir.path / "target.json").string() + " --m 4 --d 1 --out " +
                    (dir.path / "out").string());
    REQUIRE(cert.exit_code == 0);
    auto c = json::parse(slurp(dir.path / "out" / "certificate.json"));
    CHECK(c["records"].size() >= 8);  // 2^{m-d} members at least
    for (const auto& rec : c["records"]) {
        CHECK(rec["route"] == "member");
        CHECK(rec["rank_bits"].get<int>() <= 5);      // m + 1
        CHECK(rec["covering_bits"].get<int>() <= 2);  // d + 1
    }

    // the dumped registry re-validates through the verify suite
    auto rv = run("verify --suite registry --registry " +
                  (dir.path / "out" / "registry.json").string());
    CHECK(rv.exit_code == 0);
}

TEST_CASE("cli: verify flags a violated registry invariant") {
    REQUIRE_BINARY();
    TempDir dir("infoclust_cli_badreg");
    {
        std::ofstream bad(dir.path / "bad.json");
        bad << R"({"m": 3, "d": 0, "dprime": 2, "kept": [
            {"ordinal": 0, "members": ["a","b","c","d","e","f","g","h"]},
            {"ordinal": 1, "members": ["a","b","c","p","q","r","s","t"]}
        ]})";
    }
    auto res = run("verify --suite registry --registry " + (dir.path / "bad.json").string() +
                   " --out " + (dir.path / "out").string());
    CHECK(res.exit_code == 1);
    auto report = json::parse(slurp(dir.path / "out" / "verify_report.json"));
    CHECK(report["pass"] == false);
    CHECK(report["suites"][0]["counterexample"]["intersection"] == 3);
}

TEST_CASE("cli: quick verify run exits clean and writes a report") {
    REQUIRE_BINARY();
    TempDir dir("infoclust_cli_verify");
    auto res = run(
        "verify --suite chain --suite daisy --suite triplecore --suite claim "
        "--exhaustive-points 8 --exhaustive-events 5 --out " +
        (dir.path / "out").string());
    REQUIRE(res.exit_code == 0);
    CHECK(res.out.find("[PASS] chain") != std::string::npos);
    auto report = json::parse(slurp(dir.path / "out" / "verify_report.json"));
    CHECK(report["pass"] == true);
    CHECK(report["suites"].size() == 4);
}

TEST_CASE("cli: bad usage exits 2, help exits 0") {
    REQUIRE_BINARY();
    CHECK(run("clusters --no-such-flag").exit_code == 2);
    CHECK(run("").exit_code == 2);
    CHECK(run("--help").exit_code == 0);
    CHECK(run("matrix --backend ncd").exit_code == 2);  // missing --in
    CHECK(run("matrix --backend table").exit_code == 2);
    CHECK(run("matrix --backend set --universe 99").exit_code == 2);
    CHECK(run("verify --suite typo").exit_code == 2);
    CHECK(run("verify --suite registry").exit_code == 2);  // missing --registry
}

TEST_CASE("cli: m-bits threshold needs a matrix that carries a scale") {
    REQUIRE_BINARY();
    TempDir dir("infoclust_cli_mbits");
    auto corpus = dir.path / "corpus";
    write_synthetic_corpus(corpus, 2, 2, 900, 11);
    // fresh ncd matrices carry the mean-compressed-length scale
    auto fresh = run("clusters --backend ncd --in " + corpus.string() +
                     " --m-bits 12000 --l 0 --out " + (dir.path / "out").string());
    CHECK(fresh.exit_code == 0);
    // a reloaded CSV does not, so the bit threshold is refused
    auto reloaded = run("clusters --matrix " + (dir.path / "out" / "matrix.csv").string() +
                        " --backend ncd --m-bits 12000 --l 0");
    CHECK(reloaded.exit_code == 2);
}
