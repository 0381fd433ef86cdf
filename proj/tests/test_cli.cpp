#include <cstdlib>
#include <filesystem>
#include <string>

#include "doctest.h"
#include "test_util.hpp"

#ifndef IMBTEXT_CLI_PATH
#error "IMBTEXT_CLI_PATH must point at the imbtext binary"
#endif

namespace fs = std::filesystem;
using testutil::TempDir;
using testutil::read_file;

namespace {

struct CmdResult {
    int exit_code;
    std::string output;
};

CmdResult run_cli(const std::string& args, const std::string& workdir) {
    const std::string out_file = workdir + "/cmd_output.txt";
    const std::string cmd = "cd '" + workdir + "' && '" + IMBTEXT_CLI_PATH + "' " + args + " > '" +
                            out_file + "' 2>&1";
    const int status = std::system(cmd.c_str());
    CmdResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.output = read_file(out_file);
    return r;
}

void make_fixture(const std::string& workdir) {
    const auto r = run_cli("synth --ratio 30:20:10 --n 60 --dim 6 --sep 8 --seed 3 --out fix", workdir);
    REQUIRE(r.exit_code == 0);
}

std::string train_args(int k) {
    return "train --corpus fix/corpus.jsonl --task T1 --task T2 --task T3 "
           "--features embeddings:fix/embeddings.jsonl --k " +
           std::to_string(k) +
           " --epochs 3 --patience 3 --hidden 6 --lr 0.02 --strategy dependent --seed 5";
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("synth enforces exact class counts") {
    TempDir tmp;
    const auto r =
        run_cli("synth --ratio 878:269:87 --n 1234 --dim 4 --out s", tmp.path().string());
    CHECK(r.exit_code == 0);
    int n = 0, g0 = 0, g1 = 0, g2 = 0;
    std::istringstream in(read_file(tmp.file("s/corpus.jsonl")));
    std::string line;
    while (std::getline(in, line)) {
        n++;
        if (line.find("\"genre_0\"") != std::string::npos) g0++;
        if (line.find("\"genre_1\"") != std::string::npos) g1++;
        if (line.find("\"genre_2\"") != std::string::npos) g2++;
    }
    CHECK(n == 1234);
    CHECK(g0 == 878);
    CHECK(g1 == 269);
    CHECK(g2 == 87);
}

TEST_CASE("stats prints min/max/avg per task") {
    TempDir tmp;
    make_fixture(tmp.path().string());
    const auto r = run_cli("stats --corpus fix/corpus.jsonl --task T1", tmp.path().string());
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("min") != std::string::npos);
    CHECK(r.output.find("max") != std::string::npos);
    CHECK(r.output.find("avg") != std::string::npos);
}

TEST_CASE("folds writes a valid plan file") {
    TempDir tmp;
    make_fixture(tmp.path().string());
    const auto r = run_cli("folds --corpus fix/corpus.jsonl --task T1 --k 3 --seed 9 --plan-out p.json",
                           tmp.path().string());
    CHECK(r.exit_code == 0);
    const std::string plan = read_file(tmp.file("p.json"));
    CHECK(plan.find("\"k\": 3") != std::string::npos);
    CHECK(plan.find("\"assignment\"") != std::string::npos);
}

TEST_CASE("unknown flags and subcommands exit 2") {
    TempDir tmp;
    CHECK(run_cli("frobnicate", tmp.path().string()).exit_code == 2);
    CHECK(run_cli("stats --no-such-flag", tmp.path().string()).exit_code == 2);
}

TEST_CASE("config validation failures exit 1 and name the field") {
    TempDir tmp;
    make_fixture(tmp.path().string());
    const auto r = run_cli(
        "train --corpus fix/corpus.jsonl --task T1 --features tfidf --k 2 --epochs 2 "
        "--patience 5 --out run",
        tmp.path().string());
    CHECK(r.exit_code == 1);
    CHECK(r.output.find("patience") != std::string::npos);

    const auto missing = run_cli("stats --task T1", tmp.path().string());
    CHECK(missing.exit_code == 1);
}

TEST_CASE("train writes reports, checkpoints, manifest, resolved config") {
    TempDir tmp;
    make_fixture(tmp.path().string());
    const auto r = run_cli(train_args(2) + " --out run", tmp.path().string());
    REQUIRE(r.exit_code == 0);
    CHECK(fs::exists(tmp.file("run/resolved_config.json")));
    CHECK(fs::exists(tmp.file("run/manifest.json")));
    CHECK(fs::exists(tmp.file("run/fold_plan.json")));
    for (const char* task : {"T1", "T2", "T3"}) {
        CHECK(fs::exists(tmp.file(std::string("run/cv_report_") + task + ".json")));
        CHECK(fs::exists(tmp.file(std::string("run/cv_report_") + task + ".txt")));
        for (int fold = 0; fold < 2; ++fold)
            CHECK(fs::exists(tmp.file(std::string("run/") + task + "/" + std::to_string(fold) +
                                      "/best.ckpt")));
    }
}

TEST_CASE("rerunning from the resolved config reproduces reports byte-for-byte") {
    TempDir tmp;
    make_fixture(tmp.path().string());
    REQUIRE(run_cli(train_args(2) + " --out runA", tmp.path().string()).exit_code == 0);
    REQUIRE(run_cli("train --config runA/resolved_config.json --out runB", tmp.path().string())
                .exit_code == 0);
    for (const char* f :
         {"manifest.json", "cv_report_T1.json", "cv_report_T2.json", "cv_report_T3.json",
          "fold_plan.json", "T1/0/best.ckpt", "T1/1/best.ckpt", "T2/0/best.ckpt", "T3/1/best.ckpt"}) {
        CHECK_MESSAGE(read_file(tmp.file(std::string("runA/") + f)) ==
                          read_file(tmp.file(std::string("runB/") + f)),
                      f);
    }
}

TEST_CASE("IMB_SEED environment variable overrides the default seed") {
    TempDir tmp;
    make_fixture(tmp.path().string());
    const std::string cmd = "folds --corpus fix/corpus.jsonl --task T1 --k 2 --plan-out env.json";
    const std::string out_file = tmp.path().string() + "/ignored.txt";
    const std::string full = "cd '" + tmp.path().string() + "' && IMB_SEED=777 '" + IMBTEXT_CLI_PATH +
                             "' " + cmd + " > '" + out_file + "' 2>&1";
    REQUIRE(std::system(full.c_str()) == 0);
    CHECK(read_file(tmp.file("env.json")).find("\"seed\": 777") != std::string::npos);

    // explicit flag wins over the environment
    const std::string flagged = "cd '" + tmp.path().string() + "' && IMB_SEED=777 '" +
                                IMBTEXT_CLI_PATH + "' folds --corpus fix/corpus.jsonl --task T1 --k 2 "
                                "--seed 123 --plan-out flag.json > /dev/null 2>&1";
    REQUIRE(std::system(flagged.c_str()) == 0);
    CHECK(read_file(tmp.file("flag.json")).find("\"seed\": 123") != std::string::npos);
}

TEST_CASE("predict consumes checkpoints and writes one line per unit") {
    TempDir tmp;
    make_fixture(tmp.path().string());
    REQUIRE(run_cli(train_args(3) + " --out run", tmp.path().string()).exit_code == 0);

    const auto r = run_cli(
        "predict --corpus fix/corpus.jsonl --run run --predict-task T1 "
        "--features embeddings:fix/embeddings.jsonl --predictions-out preds.jsonl",
        tmp.path().string());
    REQUIRE(r.exit_code == 0);
    std::istringstream in(read_file(tmp.file("preds.jsonl")));
    std::string line;
    int n = 0;
    while (std::getline(in, line)) {
        n++;
        CHECK(line.find("\"label\"") != std::string::npos);
    }
    CHECK(n == 60);

    // gold labels play no role: stripping them changes nothing
    std::string stripped;
    std::istringstream corpus_in(read_file(tmp.file("fix/corpus.jsonl")));
    while (std::getline(corpus_in, line)) {
        const auto pos = line.find(",\"labels_t1\"");
        if (pos != std::string::npos) {
            const auto end = line.find(",\"labels_t2\"", pos);
            line = line.substr(0, pos) + line.substr(end);
        }
        stripped += line + "\n";
    }
    testutil::write_file(tmp.file("nolabels.jsonl"), stripped);
    const auto r2 = run_cli(
        "predict --corpus nolabels.jsonl --run run --predict-task T1 "
        "--features embeddings:fix/embeddings.jsonl --predictions-out preds2.jsonl",
        tmp.path().string());
    REQUIRE(r2.exit_code == 0);
    CHECK(read_file(tmp.file("preds.jsonl")) == read_file(tmp.file("preds2.jsonl")));
}

TEST_CASE("flags override config file values") {
    TempDir tmp;
    make_fixture(tmp.path().string());
    testutil::write_file(tmp.file("cfg.json"),
                         R"({"corpus": "fix/corpus.jsonl", "tasks": ["T1"], "k": 2, "seed_base": 5})");
    const auto r = run_cli("folds --config cfg.json --k 3 --plan-out p.json", tmp.path().string());
    REQUIRE(r.exit_code == 0);
    CHECK(read_file(tmp.file("p.json")).find("\"k\": 3") != std::string::npos);

    const auto bad = run_cli("folds --config cfg.json --plan-out q.json", tmp.path().string());
    CHECK(bad.exit_code == 0);
    CHECK(read_file(tmp.file("q.json")).find("\"k\": 2") != std::string::npos);
}

TEST_CASE("unknown config fields exit 1 with the field path") {
    TempDir tmp;
    testutil::write_file(tmp.file("cfg.json"), R"({"corpsu": "x.jsonl"})");
    const auto r = run_cli("stats --config cfg.json --task T1", tmp.path().string());
    CHECK(r.exit_code == 1);
    CHECK(r.output.find("corpsu") != std::string::npos);
}

}  // TEST_SUITE
