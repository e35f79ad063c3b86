#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "secdss/serialize.hpp"

using namespace secdss;
namespace fs = std::filesystem;

namespace {

const fs::path kDir = fs::temp_directory_path() / "secdss_cli_test";

int run(const std::string& args, const std::string& stdout_file = "") {
    std::string cmd = std::string(SECDSS_CLI_PATH) + " " + args;
    if (!stdout_file.empty()) cmd += " > " + (kDir / stdout_file).string();
    cmd += " 2> /dev/null";
    int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const std::string& name) { return read_text_file((kDir / name).string()); }

}  // namespace

TEST_CASE("construct, verify and determinism") {
    fs::create_directories(kDir);
    std::string code1 = (kDir / "c1.json").string();
    std::string code2 = (kDir / "c2.json").string();

    CHECK(run("construct --n 4 --k 2 --out " + code1, "rep1.json") == 0);
    CHECK(run("construct --n 4 --k 2 --out " + code2, "rep2.json") == 0);
    CHECK(read_text_file(code1) == read_text_file(code2));

    Json rep = Json::parse(slurp("rep1.json"));
    CHECK(rep["ok"] == true);
    CHECK(rep["mds_subsets_checked"] == 6);
    CHECK(rep["params"]["alpha"] == 4);

    CHECK(run("verify --code " + code1) == 0);

    // A guarded request: no construction exists below full repair degree.
    CHECK(run("construct --n 4 --k 2 --d 2 --out " + (kDir / "no.json").string()) == 64);
}

TEST_CASE("verify flags a broken code file") {
    fs::create_directories(kDir);
    std::string good = (kDir / "good.json").string();
    REQUIRE(run("construct --n 4 --k 2 --out " + good) == 0);
    Json j = Json::parse(read_text_file(good));
    // Make both parity blocks identical: reconstruction from the two
    // parities becomes singular.
    j["coding"][1] = j["coding"][0];
    std::string bad = (kDir / "bad.json").string();
    write_text_file(bad, j.dump(2) + "\n");
    CHECK(run("verify --code " + bad) == 2);
}

TEST_CASE("capacity table") {
    fs::create_directories(kDir);
    CHECK(run("capacity --n 4 --k 2", "cap.csv") == 0);
    std::string csv = slurp("cap.csv");
    std::istringstream lines(csv);
    std::string header;
    std::getline(lines, header);
    CHECK(header == "n,k,d,alpha,l1,l2,bound,achieved");
    CHECK(csv.find("4,2,3,4,0,0,8,8") != std::string::npos);
    CHECK(csv.find("4,2,3,4,1,0,4,4") != std::string::npos);
    CHECK(csv.find("4,2,3,4,0,1,2,2") != std::string::npos);
    // Rows at l1 + l2 = k are absent.
    CHECK(csv.find("4,2,3,4,1,1") == std::string::npos);
    CHECK(csv.find("4,2,3,4,0,2") == std::string::npos);

    CHECK(run("capacity --n 4 --k 2", "cap2.csv") == 0);
    CHECK(slurp("cap.csv") == slurp("cap2.csv"));
}

TEST_CASE("attack exit codes and report schema") {
    fs::create_directories(kDir);
    CHECK(run("attack --n 4 --k 2 --ed 1", "attack.json") == 0);
    Json rep = Json::parse(slurp("attack.json"));
    CHECK(rep["secrecy_ok"] == true);
    CHECK(rep["view_rank"] == 6);
    CHECK(rep["thm1_bound"]["num"] == 2);
    CHECK(rep["leaked_positions"] == 0);

    // Unkeyed storage: the same pattern breaks it.
    CHECK(run("attack --n 4 --k 2 --ed 1 --ms 8", "attack2.json") == 1);
    Json rep2 = Json::parse(slurp("attack2.json"));
    CHECK(rep2["secrecy_ok"] == false);
    CHECK(rep2["leaked_positions"].get<int>() > 0);

    CHECK(run("attack --n 4 --k 2 --es 9") == 64);
    CHECK(run("attack --n 4 --k 2 --ed 1 --es 1") == 64);  // overlapping sets

    // Same seed, byte-identical report.
    CHECK(run("attack --n 4 --k 2 --ed 1 --seed 3", "det1.json") == 0);
    CHECK(run("attack --n 4 --k 2 --ed 1 --seed 3", "det2.json") == 0);
    CHECK(slurp("det1.json") == slurp("det2.json"));
}

TEST_CASE("simulate event log") {
    fs::create_directories(kDir);
    CHECK(run("simulate --n 4 --k 2 --ms 2 --ed 1 --seed 5", "sim.jsonl") == 0);
    std::istringstream lines(slurp("sim.jsonl"));
    std::string line;
    int stores = 0, repairs = 0, finals = 0;
    std::string final_line;
    while (std::getline(lines, line)) {
        Json e = Json::parse(line);
        if (e["type"] == "store") ++stores;
        if (e["type"] == "repair") {
            ++repairs;
            CHECK(e["download_symbols"] == 6);
            CHECK(e["helpers"].size() == 3);
        }
        if (e["type"] == "final") {
            ++finals;
            final_line = line;
        }
    }
    CHECK(stores == 1);
    CHECK(repairs == 2);  // default: each systematic node fails once
    CHECK(finals == 1);
    Json fin = Json::parse(final_line);
    CHECK(fin["invariant_ok"] == true);
    CHECK(fin["collect_ok"] == true);
    CHECK(fin["leaked_positions"] == 0);

    // All positions secret: the observed repair leaks, exit reflects it.
    CHECK(run("simulate --n 4 --k 2 --ed 1 --seed 5", "sim2.jsonl") == 1);
}

TEST_CASE("fig1 and table") {
    fs::create_directories(kDir);
    CHECK(run("fig1", "fig1.txt") == 0);
    std::string text = slurp("fig1.txt");
    CHECK(text.find("F+2K") != std::string::npos);
    CHECK(text.find("matches the expected leak profile") != std::string::npos);

    CHECK(run("table --n-max 5", "table.csv") == 0);
    std::string csv = slurp("table.csv");
    CHECK(csv.find("n,k,d,alpha,l1,l2,bound,achieved") == 0);
    CHECK(csv.find("5,3,4,8,0,1,8,") != std::string::npos);
    CHECK(csv.find("4,2,3,4,0,1,2,") != std::string::npos);
}

TEST_CASE("config file with flag overrides") {
    fs::create_directories(kDir);
    Json cfg;
    cfg["n"] = 5;
    cfg["k"] = 3;
    cfg["out"] = (kDir / "cfg_code.json").string();
    std::string cfg_path = (kDir / "cfg.json").string();
    write_text_file(cfg_path, cfg.dump());

    CHECK(run("construct --config " + cfg_path, "cfg_rep.json") == 0);
    Json rep = Json::parse(slurp("cfg_rep.json"));
    CHECK(rep["params"]["n"] == 5);
    CHECK(rep["params"]["k"] == 3);
    CHECK(rep["params"]["alpha"] == 8);

    // Flag wins over the config value.
    CHECK(run("construct --config " + cfg_path + " --n 4 --k 2 --out " +
                  (kDir / "cfg_code2.json").string(),
              "cfg_rep2.json") == 0);
    CHECK(Json::parse(slurp("cfg_rep2.json"))["params"]["n"] == 4);
}

TEST_CASE("unknown arguments are config errors") {
    CHECK(run("construct --bogus 7") == 64);
    CHECK(run("") == 64);
}
