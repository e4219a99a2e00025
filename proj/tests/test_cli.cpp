#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "json.hpp"

namespace fs = std::filesystem;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out, err;
};

const fs::path kWorkDir = fs::temp_directory_path() / "gqlc_cli_test";

std::string binary() {
    const char* bin = std::getenv("GQLC_BIN");
    REQUIRE_MESSAGE(bin != nullptr, "GQLC_BIN must point at the gqlc binary");
    return bin;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

RunResult run(const std::string& args) {
    const fs::path out = kWorkDir / "stdout.txt", err = kWorkDir / "stderr.txt";
    const std::string cmd =
        binary() + " " + args + " > " + out.string() + " 2> " + err.string();
    const int status = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
}

int count_lines(const std::string& s) {
    int n = 0;
    for (char c : s) n += c == '\n';
    return n;
}

const std::string kTinyTrain =
    "--set n=12 --set k=6 --set alpha=2.0 --set n_errors=2 --set threshold_T=5 "
    "--set init_density=0.4 --set val_ebno_db=2 --set batch_size=2 --set max_epochs=2 "
    "--set steps_per_epoch=5 --set val_max_blocks=1500 --set val_target_rel=0.5 ";

}  // namespace

TEST_CASE("cli surface") {
    fs::remove_all(kWorkDir);
    fs::create_directories(kWorkDir);

    SUBCASE("version exits zero") {
        const auto r = run("--version");
        CHECK(r.exit_code == 0);
        CHECK(r.out.find("gqlc") != std::string::npos);
    }

    SUBCASE("unknown flag is a usage error") {
        const auto r = run("eval --no-such-flag");
        CHECK(r.exit_code == 2);
    }

    SUBCASE("missing subcommand is a usage error") {
        const auto r = run("");
        CHECK(r.exit_code == 2);
    }

    SUBCASE("train without alpha names alpha and exits 2") {
        const auto r = run(
            "train --set n=12 --set k=6 --set n_errors=2 --set threshold_T=5 "
            "--set init_density=0.4 --set val_ebno_db=2 --out " +
            (kWorkDir / "t0").string());
        CHECK(r.exit_code == 2);
        CHECK(r.err.find("alpha") != std::string::npos);
    }

    SUBCASE("train rejects unknown keys by name") {
        const auto r = run("train " + kTinyTrain + "--set warp_speed=9 --out " +
                           (kWorkDir / "t1").string());
        CHECK(r.exit_code == 2);
        CHECK(r.err.find("warp_speed") != std::string::npos);
    }

    SUBCASE("config file and seed determinism") {
        const fs::path cfg = kWorkDir / "train.cfg";
        {
            std::ofstream f(cfg);
            f << "# desk-size session\n"
                 "n = 12\nk = 6\nalpha = 2.0\nn_errors = 2\nthreshold_T = 5\n"
                 "init_density = 0.4\nval_ebno_db = 2\nbatch_size = 2\nmax_epochs = 2\n"
                 "steps_per_epoch = 5\nval_max_blocks = 1500\nval_target_rel = 0.5\nseed = 7\n";
        }
        const auto a = run("train --config " + cfg.string() + " --out " + (kWorkDir / "a").string());
        REQUIRE(a.exit_code == 0);
        const auto b = run("train --config " + cfg.string() + " --out " + (kWorkDir / "b").string());
        REQUIRE(b.exit_code == 0);
        CHECK(slurp(kWorkDir / "a" / "code.json") == slurp(kWorkDir / "b" / "code.json"));
        CHECK(slurp(kWorkDir / "a" / "training_log.csv") ==
              slurp(kWorkDir / "b" / "training_log.csv"));

        // flag overrides file: different seed changes the artifact
        const auto c = run("train --config " + cfg.string() + " --set seed=8 --out " +
                           (kWorkDir / "c").string());
        REQUIRE(c.exit_code == 0);
        CHECK(slurp(kWorkDir / "a" / "code.json") != slurp(kWorkDir / "c" / "code.json"));

        // manifest carries the resolved config
        const auto manifest = nlohmann::json::parse(slurp(kWorkDir / "a" / "manifest.json"));
        CHECK(manifest["command"] == "train");
        CHECK(manifest["config"]["alpha"] == 2.0);
        CHECK(manifest["config"]["seed"] == 7);
        CHECK(manifest.contains("end_time"));
        CHECK(fs::exists(kWorkDir / "a" / "code.alist"));
    }

    SUBCASE("the (64,32) working configuration is accepted verbatim") {
        const auto r = run(
            "train --set n=64 --set k=32 --set alpha=2.7 --set n_errors=3 "
            "--set threshold_T=20 --set init_density=0.25 --set val_ebno_db=2 "
            "--set max_epochs=0 --out " +
            (kWorkDir / "t6432").string());
        CHECK(r.exit_code == 0);
        const auto code = nlohmann::json::parse(slurp(kWorkDir / "t6432" / "code.json"));
        CHECK(code["n"] == 64);
        CHECK(code["k"] == 32);
        CHECK(code["metadata"]["alpha"] == 2.7);
        CHECK(code["metadata"]["update_count"] == 0);
    }

    SUBCASE("eval emits one row per Eb/N0 point") {
        const auto t = run("train " + kTinyTrain + "--out " + (kWorkDir / "e").string());
        REQUIRE(t.exit_code == 0);
        const auto r = run("eval " + (kWorkDir / "e" / "code.json").string() +
                           " --ebno 0:7:1 --iters 3 --rel 0.8 --max-blocks 500 --out " +
                           (kWorkDir / "eval").string());
        REQUIRE(r.exit_code == 0);
        const std::string csv = slurp(kWorkDir / "eval" / "bler.csv");
        CHECK(count_lines(csv) == 9);  // header + 8 points
        CHECK(csv.find("ebno_db,blocks,errors,p_tilde,half_width,converged") == 0);
    }

    SUBCASE("noiseless sentinel point is flagged unconverged") {
        const auto t = run("train " + kTinyTrain + "--out " + (kWorkDir / "s").string());
        REQUIRE(t.exit_code == 0);
        const auto r = run("eval " + (kWorkDir / "s" / "code.json").string() +
                           " --ebno 60 --max-blocks 300 --out " + (kWorkDir / "sent").string());
        REQUIRE(r.exit_code == 0);
        const std::string csv = slurp(kWorkDir / "sent" / "bler.csv");
        CHECK(csv.find(",0\n") != std::string::npos);  // converged column 0
    }

    SUBCASE("eval on a missing file is a runtime error") {
        const auto r = run("eval " + (kWorkDir / "nope.json").string());
        CHECK(r.exit_code == 1);
    }

    SUBCASE("random-search, cdf-stats and compare pipeline") {
        const auto rs = run(
            "random-search --n 12 --k 6 --density 0.3 --count 4 --ebno 3 --rel 0.5 "
            "--max-blocks 2000 --workers 2 --seed 5 --out " +
            (kWorkDir / "rs").string());
        REQUIRE(rs.exit_code == 0);
        const std::string records = slurp(kWorkDir / "rs" / "records.jsonl");
        CHECK(count_lines(records) == 4);

        const auto cs = run("cdf-stats --records " + (kWorkDir / "rs" / "records.jsonl").string() +
                            " --ebno 3 --out " + (kWorkDir / "cdf").string());
        REQUIRE(cs.exit_code == 0);
        CHECK(slurp(kWorkDir / "cdf" / "cdf_quantiles.csv").find("density,count") == 0);
        CHECK(slurp(kWorkDir / "cdf" / "density_ranking.csv").find("best,0.3") != std::string::npos);

        const auto t = run("train " + kTinyTrain + "--out " + (kWorkDir / "cmp_code").string());
        REQUIRE(t.exit_code == 0);
        const auto cmp = run("compare --records " + (kWorkDir / "rs" / "records.jsonl").string() +
                             " --learned " + (kWorkDir / "cmp_code" / "code.json").string() +
                             " --ebno 3 --rel 0.5 --max-blocks 2000 --out " +
                             (kWorkDir / "cmp").string());
        REQUIRE(cmp.exit_code == 0);
        const std::string csv = slurp(kWorkDir / "cmp" / "comparison.csv");
        CHECK(csv.find("code_file,updates,bler,q_below,p_beat") == 0);
        CHECK(csv.find("MEAN") != std::string::npos);
    }

    SUBCASE("analyze identity-only code has only degree-0/1 variable nodes") {
        const fs::path code = kWorkDir / "idcode.json";
        {
            std::ofstream f(code);
            f << R"({"n":8,"k":4,"w":["0000","0000","0000","0000"]})";
        }
        const auto r = run("analyze " + code.string() + " --alist --out " +
                           (kWorkDir / "an").string());
        REQUIRE(r.exit_code == 0);
        const auto j = nlohmann::json::parse(slurp(kWorkDir / "an" / "analysis.json"));
        for (auto& [deg, count] : j["vn_degree"].items()) CHECK(std::stoi(deg) <= 1);
        CHECK(j["vn_girth"]["none"] == 8);
        CHECK(fs::exists(kWorkDir / "an" / "code.alist"));
    }
}
