#include "expsieve/runner.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "expsieve/digits.hpp"
#include "expsieve/equidist.hpp"
#include "expsieve/expsums.hpp"
#include "expsieve/generators.hpp"
#include "expsieve/parallel.hpp"
#include "expsieve/primes.hpp"
#include "expsieve/report.hpp"
#include "expsieve/sievestats.hpp"
#include "expsieve/version.hpp"

namespace expsieve {

namespace {

using json = nlohmann::json;

[[noreturn]] void fail_field(const std::string& path, const std::string& why) {
    throw ValidationError("config: " + path + ": " + why);
}

const json& need(const json& j, const std::string& ctx, const char* key) {
    auto it = j.find(key);
    if (it == j.end()) fail_field(ctx + key, "required field is missing");
    return *it;
}

uint64_t need_u64(const json& j, const std::string& ctx, const char* key) {
    const json& v = need(j, ctx, key);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<int64_t>() >= 0))
        fail_field(ctx + key, "expected a nonnegative integer");
    return v.get<uint64_t>();
}

double need_num(const json& j, const std::string& ctx, const char* key) {
    const json& v = need(j, ctx, key);
    if (!v.is_number()) fail_field(ctx + key, "expected a number");
    return v.get<double>();
}

std::string need_str(const json& j, const std::string& ctx, const char* key) {
    const json& v = need(j, ctx, key);
    if (!v.is_string()) fail_field(ctx + key, "expected a string");
    return v.get<std::string>();
}

uint64_t opt_u64(const json& j, const char* key, uint64_t dflt) {
    auto it = j.find(key);
    return it == j.end() ? dflt : it->get<uint64_t>();
}

double opt_num(const json& j, const char* key, double dflt) {
    auto it = j.find(key);
    return it == j.end() ? dflt : it->get<double>();
}

SparseSequence build_sequence(const json& sc) {
    const std::string ctx = "sequence.";
    std::string kind = need_str(sc, ctx, "kind");
    uint64_t T = need_u64(sc, ctx, "T");
    uint64_t S = need_u64(sc, ctx, "S");
    if (kind == "random") {
        if (!sc.contains("seed")) fail_field("sequence.seed", "required for kind \"random\"");
        return make_random_subset_sequence(T, S, sc.at("seed").get<uint64_t>());
    }
    if (kind == "arithmetic")
        return make_arithmetic_sequence(T, opt_u64(sc, "start", 0), opt_u64(sc, "step", 1), S);
    if (kind == "geometric")
        return make_geometric_gap_sequence(T, opt_num(sc, "ratio", 2.0), S);
    fail_field("sequence.kind", "unknown kind \"" + kind + "\" (random|arithmetic|geometric)");
}

WeightSequence build_weights(const json& wc, uint64_t T) {
    std::string kind = need_str(wc, "weights.", "kind");
    if (kind == "ones") return make_unit_weights(T);
    if (kind == "signs" || kind == "phases") {
        if (!wc.contains("seed")) fail_field("weights.seed", "required for kind \"" + kind + "\"");
        uint64_t seed = wc.at("seed").get<uint64_t>();
        return kind == "signs" ? make_random_sign_weights(T, seed)
                               : make_random_phase_weights(T, seed);
    }
    fail_field("weights.kind", "unknown kind \"" + kind + "\" (ones|signs|phases)");
}

AdmissiblePair build_pair(const json& pc, const std::string& ctx) {
    if (pc.is_string()) return AdmissiblePair::by_label(pc.get<std::string>());
    if (pc.is_object()) {
        const std::string sub = ctx + ".";
        if (pc.contains("theta"))
            return AdmissiblePair::bgk(need_num(pc, sub, "theta"), need_num(pc, sub, "zeta"));
        if (pc.contains("alpha")) {
            double a = need_num(pc, sub, "alpha"), b = need_num(pc, sub, "beta");
            std::ostringstream l;
            l << "custom(alpha=" << a << ",beta=" << b << ")";
            return AdmissiblePair(a, b, l.str());
        }
    }
    fail_field(ctx, "expected a catalog label, {theta,zeta}, or {alpha,beta}");
}

json bound_report_json(const BoundReport& rep) {
    json flags = json::object();
    for (const auto& f : rep.validity) flags[f.id] = f.satisfied;
    return json{{"id", rep.id}, {"params", rep.params}, {"rhs", rep.rhs}, {"validity", flags}};
}

// The run assembles outputs in memory, writes them, then seals the manifest.
struct RunContext {
    const RunOptions& opts;
    std::string config_text;
    json cfg;
    std::map<std::string, std::string> inputs;  // absolute path -> checksum
    std::map<std::string, std::string> outputs; // out-dir-relative name -> checksum

    explicit RunContext(const RunOptions& o) : opts(o) {
        config_text = read_file(o.config_path);
        try {
            cfg = json::parse(config_text);
        } catch (const json::exception& e) {
            throw ValidationError(std::string("config: not valid JSON: ") + e.what());
        }
        inputs[std::filesystem::absolute(o.config_path).string()] =
            checksum_file_hex(o.config_path);
    }

    void emit(const std::string& name, const std::string& content) {
        std::filesystem::path p = opts.out_dir / name;
        atomic_write(p, content);
        outputs[name] = checksum_file_hex(p);
    }

    void seal(const std::string& command, double wall_s) {
        json manifest{{"tool_version", kToolVersion},
                      {"command", command},
                      {"config_text", config_text},
                      {"wall_time_s", wall_s},
                      {"inputs", inputs},
                      {"outputs", outputs}};
        atomic_write(opts.out_dir / "manifest.json", manifest.dump(2) + "\n");
    }
};

std::string cache_db_name(uint64_t lambda, uint64_t X) {
    std::ostringstream ss;
    ss << "orders_l" << lambda << "_X" << X << ".odb";
    return ss.str();
}

// Database resolution: explicit --order-db wins, then the EXPSIEVE_CACHE
// directory (built and stored on miss), then an in-memory build.
OrderDatabase resolve_db(RunContext& ctx, uint64_t lambda, uint64_t X) {
    if (!ctx.opts.order_db.empty()) {
        OrderDatabase db = OrderDatabase::load(ctx.opts.order_db);
        if (db.lambda != lambda)
            throw ValidationError("order db: base mismatch (db has " + std::to_string(db.lambda) +
                                  ", config wants " + std::to_string(lambda) + ")");
        if (db.X < X)
            throw ValidationError("order db: covers X=" + std::to_string(db.X) +
                                  " but config wants X=" + std::to_string(X));
        ctx.inputs[std::filesystem::absolute(ctx.opts.order_db).string()] =
            checksum_file_hex(ctx.opts.order_db);
        if (db.X > X) {
            std::erase_if(db.records, [X](const PrimeRecord& r) { return r.p > X; });
            db.X = X;
        }
        return db;
    }
    if (const char* cache = std::getenv("EXPSIEVE_CACHE"); cache && *cache) {
        std::filesystem::path path = std::filesystem::path(cache) / cache_db_name(lambda, X);
        if (std::filesystem::exists(path)) {
            OrderDatabase db = OrderDatabase::load(path);
            if (db.lambda == lambda && db.X == X) {
                ctx.inputs[std::filesystem::absolute(path).string()] = checksum_file_hex(path);
                return db;
            }
            // stale or foreign file under our key: rebuild over it
        }
        OrderDatabase db = build_order_db(lambda, X, ctx.opts.threads);
        db.save(path);
        ctx.inputs[std::filesystem::absolute(path).string()] = checksum_file_hex(path);
        return db;
    }
    return build_order_db(lambda, X, ctx.opts.threads);
}

void cmd_orders(RunContext& ctx) {
    uint64_t lambda = need_u64(ctx.cfg, "", "lambda");
    uint64_t X = need_u64(ctx.cfg, "", "X");
    OrderDatabase db = build_order_db(lambda, X, ctx.opts.threads);

    std::filesystem::path db_path = ctx.opts.out_dir / "orders.odb";
    db.save(db_path);
    ctx.outputs["orders.odb"] = checksum_file_hex(db_path);

    json summary{{"kind", "orders"},
                 {"lambda", lambda},
                 {"X", X},
                 {"count", db.records.size()},
                 {"db_path", "orders.odb"}};
    if (X >= 100) summary["density_check"] = density_check(db);
    ctx.emit("orders.json", summary.dump(2) + "\n");
}

void cmd_vsum(RunContext& ctx) {
    uint64_t lambda = need_u64(ctx.cfg, "", "lambda");
    uint64_t X = need_u64(ctx.cfg, "", "X");
    double Delta = need_num(ctx.cfg, "", "Delta");
    SparseSequence seq = build_sequence(need(ctx.cfg, "", "sequence"));
    WeightSequence wt = build_weights(need(ctx.cfg, "", "weights"), seq.size());

    OrderDatabase db = resolve_db(ctx, lambda, X);
    std::vector<PrimeRecord> filtered = filter_E_Delta(db, Delta);
    SieveStatistic stat =
        compute_V(filtered, seq, wt, lambda, ctx.opts.threads);

    ctx.emit("vsum_per_prime.csv",
             render_vsum_per_prime_csv(lambda, X, Delta, seq.size(), seq.bound, filtered,
                                       stat.per_prime));

    json report{{"kind", "vsum"},
                {"params",
                 {{"lambda", lambda},
                  {"X", X},
                  {"Delta", Delta},
                  {"delta_rule", "t>=ceil(Delta)"},
                  {"T", seq.size()},
                  {"S", seq.bound}}},
                {"E_size", filtered.size()},
                {"value_V", stat.value_V},
                {"value_W", stat.value_W},
                {"trivial_bound", stat.trivial_bound},
                {"per_prime_csv_path", "vsum_per_prime.csv"}};

    json bounds = json::array();
    if (auto it = ctx.cfg.find("bounds"); it != ctx.cfg.end()) {
        if (auto f = it->find("filtered"); f != it->end()) {
            AdmissiblePair pair = build_pair(need(*f, "bounds.filtered.", "pair"), "bounds.filtered.pair");
            bounds.push_back(bound_report_json(filtered_sieve_bound(
                double(X), double(seq.size()), double(seq.bound), Delta, pair,
                need_num(*f, "bounds.filtered.", "eta"), need_num(*f, "bounds.filtered.", "delta"),
                int(need_u64(*f, "bounds.filtered.", "k")), need_num(*f, "bounds.filtered.", "C"))));
        }
        if (auto g = it->find("all_primes"); g != it->end()) {
            bounds.push_back(bound_report_json(all_primes_sieve_bound(
                double(X), double(seq.size()), double(seq.bound),
                need_num(*g, "bounds.all_primes.", "rho"), need_num(*g, "bounds.all_primes.", "C"),
                opt_num(*g, "eps", 0.0))));
        }
    }
    report["bound_reports"] = bounds;
    ctx.emit("vsum_report.json", report.dump(2) + "\n");
}

void cmd_admissible(RunContext& ctx) {
    uint64_t lambda = need_u64(ctx.cfg, "", "lambda");
    uint64_t X = need_u64(ctx.cfg, "", "X");
    AdmissiblePair pair = build_pair(need(ctx.cfg, "", "pair"), "pair");
    double C = need_num(ctx.cfg, "", "C");

    OrderDatabase db = resolve_db(ctx, lambda, X);
    std::vector<ScanRow> rows = admissible_scan(db, pair, C, ctx.opts.threads);
    ctx.emit("admissible_scan.csv", render_admissible_csv(lambda, X, pair, C, rows));

    uint64_t flagged = 0;
    double worst = 0;
    for (const auto& r : rows) {
        flagged += r.flagged ? 1 : 0;
        worst = std::max(worst, r.ratio);
    }
    json summary{{"kind", "admissible"},
                 {"params",
                  {{"lambda", lambda},
                   {"X", X},
                   {"pair", pair.label},
                   {"alpha", pair.alpha},
                   {"beta", pair.beta},
                   {"C", C}}},
                 {"rows", rows.size()},
                 {"flagged", flagged},
                 {"max_ratio", worst},
                 {"csv_path", "admissible_scan.csv"}};
    ctx.emit("admissible.json", summary.dump(2) + "\n");
}

void cmd_large_sieve(RunContext& ctx) {
    SparseSequence seq = build_sequence(need(ctx.cfg, "", "sequence"));
    WeightSequence wt = build_weights(need(ctx.cfg, "", "weights"), seq.size());
    uint64_t K = need_u64(ctx.cfg, "", "K");

    double lhs = large_sieve_lhs(seq, wt, K);
    double mass = 0;
    for (const auto& g : wt.gamma) mass += std::norm(g);
    double rhs = (double(K) * double(K) + double(seq.bound)) * mass;

    json report{{"kind", "large-sieve"},
                {"params", {{"K", K}, {"T", seq.size()}, {"S", seq.bound}}},
                {"lhs", lhs},
                {"rhs_constant_one", rhs},
                {"ratio", rhs > 0 ? lhs / rhs : 0.0},
                {"weight_mass", mass}};
    ctx.emit("large_sieve.json", report.dump(2) + "\n");
}

void cmd_discrepancy(RunContext& ctx) {
    uint64_t lambda = need_u64(ctx.cfg, "", "lambda");
    uint64_t X = need_u64(ctx.cfg, "", "X");
    double delta = need_num(ctx.cfg, "", "delta");
    uint64_t H = need_u64(ctx.cfg, "", "H");
    SparseSequence seq = build_sequence(need(ctx.cfg, "", "sequence"));

    OrderDatabase db = resolve_db(ctx, lambda, X);
    EquidistSurvey survey = discrepancy_survey(db, seq, delta, H, ctx.opts.threads);
    ctx.emit("discrepancy.csv",
             render_discrepancy_csv(lambda, X, seq.size(), delta, survey.rows));

    json report{{"kind", "discrepancy"},
                {"params",
                 {{"lambda", lambda}, {"X", X}, {"T", seq.size()}, {"delta", delta}, {"H", H}}},
                {"fraction_poly", survey.fraction_poly},
                {"fraction_log", survey.fraction_log},
                {"threshold_poly", std::pow(double(seq.size()), -delta)},
                {"threshold_log", std::pow(std::log(double(seq.size())), -delta)},
                {"csv_path", "discrepancy.csv"}};
    double loglogT = std::log(std::log(double(seq.size())));
    if (loglogT > 0) {
        json dh = json::array();
        for (const auto& row : survey.rows) {
            double d = row.disc.D;
            dh.push_back({{"p", row.p}, {"delta_hat", -std::log(d) / loglogT}});
        }
        report["delta_hat"] = dh;
    }
    ctx.emit("discrepancy.json", report.dump(2) + "\n");
}

DigitPattern build_pattern(const json& pc) {
    uint64_t S = need_u64(pc, "pattern.", "S");
    std::string ahex = need_str(pc, "pattern.", "a_hex");
    uint64_t a = 0;
    try {
        size_t used = 0;
        a = std::stoull(ahex, &used, 16);
        if (used != ahex.size()) throw std::invalid_argument("trailing junk");
    } catch (const std::exception&) {
        fail_field("pattern.a_hex", "expected a hex integer, got \"" + ahex + "\"");
    }
    const json& fr = need(pc, "pattern.", "free");
    if (!fr.is_array()) fail_field("pattern.free", "expected an array of bit positions");
    std::vector<uint64_t> free;
    for (const auto& v : fr) free.push_back(v.get<uint64_t>());
    return DigitPattern(S, a, SparseSequence(std::move(free), S ? S - 1 : 0));
}

void cmd_digits(RunContext& ctx) {
    DigitPattern pat = build_pattern(need(ctx.cfg, "", "pattern"));
    uint64_t prime_limit = need_u64(ctx.cfg, "", "prime_limit");
    double C = opt_num(ctx.cfg, "C", 1.0);

    OrderDatabase db = resolve_db(ctx, 2, prime_limit);
    std::vector<DigitReportRow> rows(db.records.size());
    std::vector<std::string> errors(db.records.size());
    parallel_for_ordered(db.records.size(), ctx.opts.threads, [&](size_t i) {
        const PrimeRecord& r = db.records[i];
        DivisibilityCount c = count_divisible(pat, r.p);
        double M = digit_sum_max(pat, r.p, r.t).value;
        rows[i] = DigitReportRow{r.p, c.count, c.main_term, c.deviation,
                                 q_p_bound(M, pat.T(), C)};
    });
    ctx.emit("digits.csv", render_digits_csv(pat, prime_limit, C, rows));

    char ahex[32];
    std::snprintf(ahex, sizeof ahex, "0x%llx", (unsigned long long)pat.a);
    json report{{"kind", "digits"},
                {"params",
                 {{"S", pat.S}, {"a_hex", ahex}, {"T", pat.T()}, {"prime_limit", prime_limit},
                  {"C", C}}},
                {"csv_path", "digits.csv"}};

    if (auto it = ctx.cfg.find("omega"); it != ctx.cfg.end()) {
        std::string mode = need_str(*it, "omega.", "mode");
        if (mode == "exact") {
            Factorizer fac;
            OmegaProduct om = omega_product_exact(pat, prime_limit, fac);
            report["omega"] = {{"mode", "exact"},
                               {"distinct_primes", om.omega},
                               {"primes_leq_limit", om.primes_leq_x}};
        } else if (mode == "survey") {
            OmegaProduct om = omega_product_survey(pat, prime_limit, ctx.opts.threads);
            report["omega"] = {{"mode", "survey"}, {"primes_leq_limit", om.primes_leq_x}};
        } else {
            fail_field("omega.mode", "expected \"exact\" or \"survey\"");
        }
    }
    ctx.emit("digits.json", report.dump(2) + "\n");
}

void cmd_exceptional(RunContext& ctx) {
    uint64_t t = need_u64(ctx.cfg, "", "t");
    int k = int(need_u64(ctx.cfg, "", "k"));
    double U = need_num(ctx.cfg, "", "U");
    double C = need_num(ctx.cfg, "", "C");
    uint64_t ell_max = need_u64(ctx.cfg, "", "ell_max");

    ExceptionalScan scan = exceptional_count(t, k, U, C, ell_max, ctx.opts.threads);
    ctx.emit("exceptional.csv", render_exceptional_csv(scan));

    json report{{"kind", "exceptional"},
                {"params", {{"t", t}, {"k", k}, {"U", U}, {"C", C}, {"ell_max", ell_max}}},
                {"total", scan.total},
                {"exceptional", scan.exceptional},
                {"budget", scan.budget},
                {"empty_domain_notice", scan.rows.empty()},
                {"csv_path", "exceptional.csv"}};
    ctx.emit("exceptional.json", report.dump(2) + "\n");
}

void cmd_report(RunContext& ctx) {
    json reports = json::array();
    if (auto f = ctx.cfg.find("filtered"); f != ctx.cfg.end()) {
        AdmissiblePair pair = build_pair(need(*f, "filtered.", "pair"), "filtered.pair");
        reports.push_back(bound_report_json(filtered_sieve_bound(
            need_num(*f, "filtered.", "X"), need_num(*f, "filtered.", "T"),
            need_num(*f, "filtered.", "S"), need_num(*f, "filtered.", "Delta"), pair,
            need_num(*f, "filtered.", "eta"), need_num(*f, "filtered.", "delta"),
            int(need_u64(*f, "filtered.", "k")), need_num(*f, "filtered.", "C"))));
    }
    if (auto g = ctx.cfg.find("all_primes"); g != ctx.cfg.end()) {
        reports.push_back(bound_report_json(all_primes_sieve_bound(
            need_num(*g, "all_primes.", "X"), need_num(*g, "all_primes.", "T"),
            need_num(*g, "all_primes.", "S"), need_num(*g, "all_primes.", "rho"),
            need_num(*g, "all_primes.", "C"), opt_num(*g, "eps", 0.0))));
    }
    if (reports.empty())
        throw ValidationError("config: report command needs a \"filtered\" and/or \"all_primes\" block");
    json out{{"kind", "bounds"}, {"reports", reports}};
    ctx.emit("bounds.json", out.dump(2) + "\n");
}

} // namespace

void run_command(const std::string& command, const RunOptions& opts) {
    auto started = std::chrono::steady_clock::now();
    RunContext ctx(opts);

    std::string cfg_cmd = need_str(ctx.cfg, "", "command");
    if (cfg_cmd != command)
        throw ValidationError("config: command field says \"" + cfg_cmd +
                              "\" but the CLI invoked \"" + command + "\"");
    std::filesystem::create_directories(opts.out_dir);

    if (command == "orders") cmd_orders(ctx);
    else if (command == "vsum") cmd_vsum(ctx);
    else if (command == "admissible") cmd_admissible(ctx);
    else if (command == "large-sieve") cmd_large_sieve(ctx);
    else if (command == "discrepancy") cmd_discrepancy(ctx);
    else if (command == "digits") cmd_digits(ctx);
    else if (command == "exceptional") cmd_exceptional(ctx);
    else if (command == "report") cmd_report(ctx);
    else throw ValidationError("unknown command \"" + command + "\"");

    double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    ctx.seal(command, wall);
}

int verify_manifest(const std::filesystem::path& manifest_path, bool rerun) {
    if (!std::filesystem::exists(manifest_path)) {
        std::cerr << "verify: missing manifest: " << manifest_path.string() << "\n";
        return kExitMissing;
    }
    json manifest;
    try {
        manifest = json::parse(read_file(manifest_path));
    } catch (const json::exception& e) {
        throw ValidationError(std::string("manifest: not valid JSON: ") + e.what());
    }
    std::filesystem::path base = manifest_path.parent_path();

    std::vector<std::string> missing, mismatched;
    for (auto& [name, sum] : manifest.at("outputs").items()) {
        std::filesystem::path p = base / name;
        if (!std::filesystem::exists(p)) {
            missing.push_back(name);
        } else if (checksum_file_hex(p) != sum.get<std::string>()) {
            mismatched.push_back(name);
        }
    }

    if (rerun && missing.empty() && mismatched.empty()) {
        std::filesystem::path scratch =
            std::filesystem::temp_directory_path() /
            ("expsieve_verify_" + std::to_string(fnv1a64(manifest_path.string())));
        std::filesystem::remove_all(scratch);
        std::filesystem::create_directories(scratch);
        std::filesystem::path cfg = scratch / "config.json";
        atomic_write(cfg, manifest.at("config_text").get<std::string>());

        RunOptions opts;
        opts.config_path = cfg;
        opts.out_dir = scratch / "out";
        run_command(manifest.at("command").get<std::string>(), opts);

        for (auto& [name, sum] : manifest.at("outputs").items()) {
            std::filesystem::path p = opts.out_dir / name;
            if (!std::filesystem::exists(p))
                missing.push_back(name + " (rerun)");
            else if (checksum_file_hex(p) != sum.get<std::string>())
                mismatched.push_back(name + " (rerun)");
        }
        std::filesystem::remove_all(scratch);
    }

    if (!missing.empty()) {
        for (const auto& m : missing) std::cerr << "verify: missing artifact: " << m << "\n";
        return kExitMissing;
    }
    if (!mismatched.empty()) {
        for (const auto& m : mismatched) std::cerr << "verify: checksum mismatch: " << m << "\n";
        return kExitMismatch;
    }
    std::cout << "verify: OK (" << manifest.at("outputs").size() << " artifacts"
              << (rerun ? ", rerun matched" : "") << ")\n";
    return kExitOk;
}

} // namespace expsieve
