#include <doctest.h>

#include <sys/wait.h>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "expsieve/primes.hpp"
#include "expsieve/report.hpp"

using namespace expsieve;
using json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct RunResult {
    int code = -1;
    std::string output;
};

RunResult run_cli(const std::string& args) {
    std::string cmd = std::string(EXPSIEVE_BIN_PATH) + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    RunResult res;
    char buf[4096];
    size_t got;
    while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) res.output.append(buf, got);
    int status = pclose(pipe);
    res.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return res;
}

fs::path fresh_dir(const std::string& name) {
    fs::path dir = fs::temp_directory_path() / "expsieve_cli_test" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

fs::path write_config(const fs::path& dir, const std::string& text) {
    fs::path p = dir / "config.json";
    std::ofstream(p) << text;
    return p;
}

} // namespace

TEST_CASE("version flag") {
    RunResult r = run_cli("--version");
    CHECK(r.code == 0);
    CHECK(r.output.find("expsieve 0.1.0") != std::string::npos);
}

TEST_CASE("orders command produces a loadable database and a sealed manifest") {
    fs::path dir = fresh_dir("orders");
    fs::path cfg = write_config(dir, R"({"command":"orders","lambda":2,"X":100})");
    fs::path out = dir / "out";
    RunResult r = run_cli("orders -c " + cfg.string() + " -o " + out.string());
    CHECK(r.code == 0);

    OrderDatabase db = OrderDatabase::load(out / "orders.odb");
    CHECK(db.lambda == 2);
    CHECK(db.X == 100);
    CHECK(db.records.size() == 24); // odd primes up to 100

    json manifest = json::parse(read_file(out / "manifest.json"));
    CHECK(manifest.at("command") == "orders");
    CHECK(manifest.at("outputs").size() == 2);
    for (auto& [name, sum] : manifest.at("outputs").items())
        CHECK(checksum_file_hex(out / name) == sum.get<std::string>());
    // the config text is embedded verbatim
    CHECK(manifest.at("config_text").get<std::string>() == read_file(cfg));

    SUBCASE("verify passes, catches corruption, reports missing files") {
        CHECK(run_cli("verify " + (out / "manifest.json").string()).code == 0);

        std::ofstream(out / "orders.json", std::ios::app) << " ";
        RunResult bad = run_cli("verify " + (out / "manifest.json").string());
        CHECK(bad.code == 1);
        CHECK(bad.output.find("mismatch") != std::string::npos);

        fs::remove(out / "orders.json");
        RunResult gone = run_cli("verify " + (out / "manifest.json").string());
        CHECK(gone.code == 5);
    }

    SUBCASE("verify --rerun reproduces the run from the embedded config") {
        CHECK(run_cli("verify --rerun " + (out / "manifest.json").string()).code == 0);
    }
}

TEST_CASE("verify on a nonexistent manifest exits 5") {
    CHECK(run_cli("verify /nonexistent/manifest.json").code == 5);
}

TEST_CASE("vsum requires a seed for random sequences") {
    fs::path dir = fresh_dir("vsum_noseed");
    fs::path cfg = write_config(dir, R"({"command":"vsum","lambda":2,"X":50,"Delta":2,
        "sequence":{"kind":"random","T":8,"S":64},"weights":{"kind":"ones"}})");
    RunResult r = run_cli("vsum -c " + cfg.string() + " -o " + (dir / "out").string());
    CHECK(r.code == 2);
    CHECK(r.output.find("sequence.seed") != std::string::npos);
}

TEST_CASE("vsum runs deterministically") {
    fs::path dir = fresh_dir("vsum");
    fs::path cfg = write_config(dir, R"({"command":"vsum","lambda":2,"X":200,"Delta":3,
        "sequence":{"kind":"random","T":10,"S":100,"seed":5},
        "weights":{"kind":"phases","seed":6},
        "bounds":{"filtered":{"pair":"korobov","eta":0.05,"delta":0.1,"k":3,"C":2},
                  "all_primes":{"rho":0.25,"C":1}}})");
    RunResult r1 = run_cli("vsum -c " + cfg.string() + " -o " + (dir / "o1").string());
    CHECK(r1.code == 0);
    RunResult r2 = run_cli("vsum -c " + cfg.string() + " -o " + (dir / "o2").string());
    CHECK(r2.code == 0);
    for (const char* name : {"vsum_report.json", "vsum_per_prime.csv"}) {
        CHECK(read_file(dir / "o1" / name) == read_file(dir / "o2" / name));
    }
    json rep = json::parse(read_file(dir / "o1" / "vsum_report.json"));
    CHECK(rep.at("value_V").get<double>() > 0);
    CHECK(rep.at("value_W").get<double>() <= rep.at("value_V").get<double>());
    CHECK(rep.at("value_V").get<double>() <= rep.at("trivial_bound").get<double>());
    CHECK(rep.at("bound_reports").size() == 2);
}

TEST_CASE("config command field must match the CLI subcommand") {
    fs::path dir = fresh_dir("mismatch");
    fs::path cfg = write_config(dir, R"({"command":"orders","lambda":2,"X":50})");
    RunResult r = run_cli("vsum -c " + cfg.string() + " -o " + (dir / "out").string());
    CHECK(r.code == 2);
}

TEST_CASE("malformed JSON exits with the validation code") {
    fs::path dir = fresh_dir("badjson");
    fs::path cfg = write_config(dir, "{nope");
    RunResult r = run_cli("orders -c " + cfg.string() + " -o " + (dir / "out").string());
    CHECK(r.code == 2);
    CHECK(r.output.find("not valid JSON") != std::string::npos);
}

TEST_CASE("unknown pair label exits with the validation code") {
    fs::path dir = fresh_dir("badpair");
    fs::path cfg = write_config(
        dir, R"({"command":"admissible","lambda":2,"X":50,"pair":"heathbrown","C":1})");
    RunResult r = run_cli("admissible -c " + cfg.string() + " -o " + (dir / "out").string());
    CHECK(r.code == 2);
}

TEST_CASE("admissible scan writes the scored CSV") {
    fs::path dir = fresh_dir("admissible");
    fs::path cfg = write_config(
        dir, R"({"command":"admissible","lambda":2,"X":100,"pair":"korobov","C":1})");
    fs::path out = dir / "out";
    RunResult r = run_cli("admissible -c " + cfg.string() + " -o " + out.string());
    CHECK(r.code == 0);
    std::string csv = read_file(out / "admissible_scan.csv");
    CHECK(csv.find("kind=admissible-scan") != std::string::npos);
    CHECK(csv.find("pair=korobov") != std::string::npos);
    json summary = json::parse(read_file(out / "admissible.json"));
    CHECK(summary.at("rows") == 24);
    CHECK(summary.at("flagged") == 0);
}

TEST_CASE("large-sieve command reports the inequality sides") {
    fs::path dir = fresh_dir("ls");
    fs::path cfg = write_config(dir, R"({"command":"large-sieve","K":12,
        "sequence":{"kind":"random","T":30,"S":900,"seed":3},
        "weights":{"kind":"signs","seed":4}})");
    fs::path out = dir / "out";
    RunResult r = run_cli("large-sieve -c " + cfg.string() + " -o " + out.string());
    CHECK(r.code == 0);
    json rep = json::parse(read_file(out / "large_sieve.json"));
    CHECK(rep.at("lhs").get<double>() <= rep.at("rhs_constant_one").get<double>() * (1 + 1e-12));
    CHECK(rep.at("ratio").get<double>() <= 1.0 + 1e-12);
}

TEST_CASE("discrepancy command emits per-prime rows") {
    fs::path dir = fresh_dir("disc");
    fs::path cfg = write_config(dir, R"({"command":"discrepancy","lambda":2,"X":60,
        "delta":0.3,"H":12,
        "sequence":{"kind":"random","T":12,"S":80,"seed":9}})");
    fs::path out = dir / "out";
    RunResult r = run_cli("discrepancy -c " + cfg.string() + " -o " + out.string());
    CHECK(r.code == 0);
    std::string csv = read_file(out / "discrepancy.csv");
    size_t lines = std::count(csv.begin(), csv.end(), '\n');
    CHECK(lines == 2 + 16); // header, columns, one row per odd prime <= 60
    json rep = json::parse(read_file(out / "discrepancy.json"));
    CHECK(rep.at("fraction_poly").get<double>() >= 0);
    CHECK(rep.at("fraction_log").get<double>() <= 1);
}

TEST_CASE("digits command covers odd primes in range") {
    fs::path dir = fresh_dir("digits");
    fs::path cfg = write_config(dir, R"({"command":"digits",
        "pattern":{"S":6,"a_hex":"0x9","free":[1,2]},
        "prime_limit":20,"C":1,"omega":{"mode":"exact"}})");
    fs::path out = dir / "out";
    RunResult r = run_cli("digits -c " + cfg.string() + " -o " + out.string());
    CHECK(r.code == 0);
    std::string csv = read_file(out / "digits.csv");
    size_t lines = std::count(csv.begin(), csv.end(), '\n');
    CHECK(lines == 2 + 7); // 3 5 7 11 13 17 19
    json rep = json::parse(read_file(out / "digits.json"));
    CHECK(rep.at("omega").at("mode") == "exact");
    // members are 9, 11, 13, 15: primes {3, 5, 11, 13} (9=3^2, 15=3*5)
    CHECK(rep.at("omega").at("distinct_primes") == 4);
}

TEST_CASE("exceptional command flags and notices empty domains") {
    fs::path dir = fresh_dir("exceptional");
    fs::path cfg = write_config(
        dir, R"({"command":"exceptional","t":2,"k":2,"U":100,"C":1,"ell_max":30})");
    fs::path out = dir / "out";
    RunResult r = run_cli("exceptional -c " + cfg.string() + " -o " + out.string());
    CHECK(r.code == 0);
    json rep = json::parse(read_file(out / "exceptional.json"));
    CHECK(rep.at("total") == 9); // odd primes up to 30
    CHECK(rep.at("empty_domain_notice") == false);

    fs::path cfg2 = write_config(
        dir, R"({"command":"exceptional","t":97,"k":2,"U":100,"C":1,"ell_max":90})");
    RunResult r2 = run_cli("exceptional -c " + cfg2.string() + " -o " + (dir / "out2").string());
    CHECK(r2.code == 0);
    json rep2 = json::parse(read_file(dir / "out2" / "exceptional.json"));
    CHECK(rep2.at("total") == 0);
    CHECK(rep2.at("empty_domain_notice") == true);
}

TEST_CASE("report command evaluates bounds from parameters alone") {
    fs::path dir = fresh_dir("report");
    fs::path cfg = write_config(dir, R"({"command":"report",
        "filtered":{"X":1000,"T":50,"S":200,"Delta":10,"pair":{"theta":0.5,"zeta":0.25},
                    "eta":0.05,"delta":0.1,"k":3,"C":2},
        "all_primes":{"X":5000,"T":9000,"S":100000,"rho":0.3,"C":1.5}})");
    fs::path out = dir / "out";
    RunResult r = run_cli("report -c " + cfg.string() + " -o " + out.string());
    CHECK(r.code == 0);
    json rep = json::parse(read_file(out / "bounds.json"));
    REQUIRE(rep.at("reports").size() == 2);
    CHECK(rep.at("reports")[0].at("id") == "filtered-sieve-bound");
    CHECK(rep.at("reports")[0].at("rhs").get<double>() > 0);
    CHECK(rep.at("reports")[1].at("id") == "all-primes-sieve-bound");
}

TEST_CASE("explicit order database reuse checks the base") {
    fs::path dir = fresh_dir("orderdb");
    fs::path cfg_orders = write_config(dir, R"({"command":"orders","lambda":2,"X":300})");
    fs::path dbout = dir / "dbout";
    REQUIRE(run_cli("orders -c " + cfg_orders.string() + " -o " + dbout.string()).code == 0);
    fs::path db = dbout / "orders.odb";

    fs::path cfg = dir / "vsum.json";
    std::ofstream(cfg) << R"({"command":"vsum","lambda":2,"X":200,"Delta":2,
        "sequence":{"kind":"arithmetic","T":6,"S":50,"start":0,"step":5},
        "weights":{"kind":"ones"}})";
    RunResult ok = run_cli("vsum -c " + cfg.string() + " -o " + (dir / "o1").string() +
                           " --order-db " + db.string());
    CHECK(ok.code == 0);
    json manifest = json::parse(read_file(dir / "o1" / "manifest.json"));
    bool listed = false;
    for (auto& [name, sum] : manifest.at("inputs").items())
        if (name.find("orders.odb") != std::string::npos) listed = true;
    CHECK(listed);

    fs::path cfg3 = dir / "vsum3.json";
    std::ofstream(cfg3) << R"({"command":"vsum","lambda":3,"X":200,"Delta":2,
        "sequence":{"kind":"arithmetic","T":6,"S":50,"start":0,"step":5},
        "weights":{"kind":"ones"}})";
    RunResult bad = run_cli("vsum -c " + cfg3.string() + " -o " + (dir / "o2").string() +
                            " --order-db " + db.string());
    CHECK(bad.code == 2);
    CHECK(bad.output.find("base mismatch") != std::string::npos);
}

TEST_CASE("order databases land in the cache directory when one is set") {
    fs::path dir = fresh_dir("cache");
    fs::path cache = dir / "cache";
    fs::create_directories(cache);
    setenv("EXPSIEVE_CACHE", cache.string().c_str(), 1);
    fs::path cfg = write_config(dir, R"({"command":"admissible","lambda":2,"X":80,
        "pair":"shkredov","C":2})");
    RunResult r = run_cli("admissible -c " + cfg.string() + " -o " + (dir / "o1").string());
    unsetenv("EXPSIEVE_CACHE");
    CHECK(r.code == 0);
    CHECK(fs::exists(cache / "orders_l2_X80.odb"));
    OrderDatabase db = OrderDatabase::load(cache / "orders_l2_X80.odb");
    CHECK(db.X == 80);
}
