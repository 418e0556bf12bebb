#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string output;  // stdout + stderr
};

RunResult run(const std::string& args) {
    const std::string cmd = std::string(SPOTLIGHT_BIN) + " " + args + " 2>&1";
    RunResult result;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    char buf[512];
    while (fgets(buf, sizeof(buf), pipe)) result.output += buf;
    const int status = pclose(pipe);
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("spotlight_cli_" + std::to_string(std::random_device{}()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
}

}  // namespace

TEST_CASE("mine on identical corpora reports zero patterns and exits 0") {
    TempDir dir;
    std::string lines;
    for (int i = 0; i < 10; ++i) lines += "the same text about nothing in particular\n";
    write_file(dir.file("a.txt"), lines);
    const RunResult r = run("mine --g1 " + dir.file("a.txt") + " --g2 " + dir.file("a.txt") +
                            " --format lines --method dpm --out " + dir.file("f.json"));
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("0 patterns found") != std::string::npos);
    const json findings = json::parse(slurp(dir.file("f.json")));
    CHECK(findings.is_array());
    CHECK(findings.empty());
}

TEST_CASE("usage errors exit 1") {
    CHECK(run("mine --g1 a --g2 b --method bogus --out x.json").exit_code == 1);
    CHECK(run("mine").exit_code == 1);
    CHECK(run("bogus-subcommand").exit_code == 1);
    CHECK(run("suite --benchmark 1 --methods dpm --seeds 1 --out /tmp/x").exit_code == 1);
}

TEST_CASE("data errors exit 2") {
    TempDir dir;
    CHECK(run("mine --g1 " + dir.file("missing.jsonl") + " --g2 " + dir.file("missing.jsonl") +
              " --out " + dir.file("f.json"))
              .exit_code == 2);

    write_file(dir.file("bad.jsonl"), "{\"text\": \"fine here\"}\nnot json at all{\n");
    const RunResult r = run("mine --g1 " + dir.file("bad.jsonl") + " --g2 " +
                            dir.file("bad.jsonl") + " --out " + dir.file("f.json"));
    CHECK(r.exit_code == 2);
    CHECK(r.output.find("line 2") != std::string::npos);
}

TEST_CASE("benchgen writes the four instance files and honors --force") {
    TempDir dir;
    const std::string out = dir.file("inst");
    const RunResult first =
        run("benchgen --benchmark 1 --n 20 --seed 7 --bias 0.8 --out " + out);
    CHECK(first.exit_code == 0);
    for (const std::string name : {"g1.jsonl", "g2.jsonl", "truth.json", "meta.json"}) {
        CHECK(fs::exists(fs::path(out) / name));
    }
    const RunResult refused =
        run("benchgen --benchmark 1 --n 20 --seed 7 --bias 0.8 --out " + out);
    CHECK(refused.exit_code == 2);
    CHECK(refused.output.find("--force") != std::string::npos);
    const RunResult forced =
        run("benchgen --benchmark 1 --n 20 --seed 7 --bias 0.8 --force --out " + out);
    CHECK(forced.exit_code == 0);
}

TEST_CASE("benchgen output is byte-deterministic per seed") {
    TempDir dir;
    REQUIRE(run("benchgen --benchmark 2 --n 30 --seed 5 --out " + dir.file("a")).exit_code == 0);
    REQUIRE(run("benchgen --benchmark 2 --n 30 --seed 5 --out " + dir.file("b")).exit_code == 0);
    CHECK(slurp(dir.file("a") + "/g1.jsonl") == slurp(dir.file("b") + "/g1.jsonl"));
    CHECK(slurp(dir.file("a") + "/g2.jsonl") == slurp(dir.file("b") + "/g2.jsonl"));
    CHECK(slurp(dir.file("a") + "/truth.json") == slurp(dir.file("b") + "/truth.json"));
}

TEST_CASE("mine findings are identical across thread counts") {
    TempDir dir;
    REQUIRE(run("benchgen --benchmark 2 --n 60 --seed 3 --out " + dir.file("i")).exit_code == 0);
    const std::string base = "mine --g1 " + dir.file("i") + "/g1.jsonl --g2 " + dir.file("i") +
                             "/g2.jsonl --method dpm";
    REQUIRE(run(base + " --threads 1 --out " + dir.file("t1.json")).exit_code == 0);
    REQUIRE(run(base + " --threads 4 --out " + dir.file("t4.json")).exit_code == 0);
    CHECK(slurp(dir.file("t1.json")) == slurp(dir.file("t4.json")));
}

TEST_CASE("mine emits the findings.json schema") {
    TempDir dir;
    REQUIRE(run("benchgen --benchmark 1 --n 60 --seed 2 --bias 0.9 --out " + dir.file("i"))
                .exit_code == 0);
    const RunResult r = run("mine --g1 " + dir.file("i") + "/g1.jsonl --g2 " + dir.file("i") +
                            "/g2.jsonl --method dpm --out " + dir.file("f.json"));
    REQUIRE(r.exit_code == 0);
    CHECK(r.output.find("p-value") != std::string::npos);  // table header
    const json findings = json::parse(slurp(dir.file("f.json")));
    REQUIRE(findings.is_array());
    REQUIRE(!findings.empty());
    for (const auto& f : findings) {
        CHECK(f.contains("tokens"));
        CHECK(f.contains("count_g1"));
        CHECK(f.contains("count_g2"));
        CHECK(f.contains("p_value"));
        CHECK((f["direction"] == "g1" || f["direction"] == "g2"));
    }
    CHECK(fs::exists(dir.file("f.json") + ".manifest.json"));
    // the printed table carries a gendered-pronoun row for this instance
    bool pronoun_row = false;
    for (const std::string p : {"{he}", "{she}", "{him}", "{her}", "{his}"}) {
        pronoun_row = pronoun_row || r.output.find(p) != std::string::npos;
    }
    CHECK(pronoun_row);
}

TEST_CASE("ctfidf subcommand prints only single-token patterns") {
    TempDir dir;
    REQUIRE(run("benchgen --benchmark 1 --n 20 --seed 4 --bias 0.8 --out " + dir.file("i"))
                .exit_code == 0);
    const RunResult r = run("mine --g1 " + dir.file("i") + "/g1.jsonl --g2 " + dir.file("i") +
                            "/g2.jsonl --method ctfidf --top-k 9 --out " + dir.file("f.json"));
    REQUIRE(r.exit_code == 0);
    const json findings = json::parse(slurp(dir.file("f.json")));
    CHECK(findings.size() == 18);  // nine per group
    for (const auto& f : findings) CHECK(f["tokens"].size() == 1);
}

TEST_CASE("eval scores a toy strict and soft case") {
    TempDir dir;
    write_file(dir.file("found.json"),
               R"([{"tokens":["Dear"],"count_g1":1,"count_g2":0,"p_value":0.5,"direction":"g1"}])");
    write_file(dir.file("truth.json"), R"({"patterns":[["Dear","Professor"]]})");

    const RunResult soft = run("eval --found " + dir.file("found.json") + " --truth " +
                               dir.file("truth.json") + " --mode soft --out " +
                               dir.file("s.json"));
    CHECK(soft.exit_code == 0);
    const json s = json::parse(slurp(dir.file("s.json")));
    CHECK(s["precision"] == 1.0);
    CHECK(s["recall"] == 1.0);

    const RunResult strict = run("eval --found " + dir.file("found.json") + " --truth " +
                                 dir.file("truth.json") + " --mode strict --out " +
                                 dir.file("st.json"));
    CHECK(strict.exit_code == 0);
    const json st = json::parse(slurp(dir.file("st.json")));
    CHECK(st["precision"] == 0.0);
    CHECK(st["f1"] == 0.0);

    // exact strict match scores 1.0
    write_file(dir.file("exact.json"),
               R"([{"tokens":["Dear","Professor"],"count_g1":1,"count_g2":0,"p_value":0.5,"direction":"g1"}])");
    REQUIRE(run("eval --found " + dir.file("exact.json") + " --truth " + dir.file("truth.json") +
                " --mode strict --out " + dir.file("se.json"))
                .exit_code == 0);
    CHECK(json::parse(slurp(dir.file("se.json")))["f1"] == 1.0);
}

TEST_CASE("eval --banded needs bands and emits per-band recall when present") {
    TempDir dir;
    write_file(dir.file("found.json"),
               R"([{"tokens":["alpha"],"count_g1":0,"count_g2":5,"p_value":0.001,"direction":"g2"}])");
    write_file(dir.file("nobands.json"), R"({"patterns":[["alpha"]]})");
    const RunResult missing = run("eval --found " + dir.file("found.json") + " --truth " +
                                  dir.file("nobands.json") + " --banded --out " +
                                  dir.file("s.json"));
    CHECK(missing.exit_code == 2);
    CHECK(missing.output.find("bands") != std::string::npos);

    write_file(dir.file("bands.json"),
               R"({"patterns":[["alpha"],["beta"],["gamma"]],)"
               R"("bands":{"0":"high","1":"medium","2":"low"},)"
               R"("application_counts":{"0":120,"1":30,"2":2}})");
    const RunResult ok = run("eval --found " + dir.file("found.json") + " --truth " +
                             dir.file("bands.json") + " --mode soft --banded --out " +
                             dir.file("s2.json"));
    CHECK(ok.exit_code == 0);
    const json s = json::parse(slurp(dir.file("s2.json")));
    REQUIRE(s.contains("per_band"));
    CHECK(s["per_band"]["high"] == 1.0);
    CHECK(s["per_band"]["medium"] == 0.0);
    CHECK(s["per_band"]["low"] == 0.0);
}

TEST_CASE("suite emits one csv row per grid cell") {
    TempDir dir;
    const RunResult r = run("suite --benchmark 1 --methods dpm,ctfidf --sizes 10,20 "
                            "--biases 0.8 --seeds 1,2 --out " + dir.file("grid"));
    REQUIRE(r.exit_code == 0);
    std::ifstream csv(dir.file("grid") + "/results.csv");
    REQUIRE(csv.good());
    std::string line;
    std::getline(csv, line);
    CHECK(line.find("benchmark,method,size,bias,seed,success") == 0);
    const auto columns = [](const std::string& row) {
        return 1 + std::count(row.begin(), row.end(), ',');
    };
    const auto expected_columns = columns(line);
    int rows = 0;
    while (std::getline(csv, line)) {
        if (line.empty()) continue;
        ++rows;
        CHECK(columns(line) == expected_columns);
        CHECK(line.find(",ok") != std::string::npos);
    }
    CHECK(rows == 8);  // 2 methods x 2 sizes x 1 bias x 2 seeds
}
