#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "expsieve/errors.hpp"
#include "expsieve/runner.hpp"
#include "expsieve/version.hpp"

namespace {

struct Invocation {
    std::string command;
    expsieve::RunOptions opts;
};

void add_run_subcommand(CLI::App& app, Invocation& inv, const std::string& name,
                        const std::string& blurb) {
    CLI::App* sub = app.add_subcommand(name, blurb);
    sub->add_option("-c,--config", inv.opts.config_path, "JSON config document")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("-o,--out", inv.opts.out_dir, "output directory (default expsieve_out)");
    sub->add_option("--order-db", inv.opts.order_db, "precomputed order database file")
        ->check(CLI::ExistingFile);
    sub->add_option("-j,--threads", inv.opts.threads, "worker threads (0 = hardware)");
    sub->callback([&inv, name] { inv.command = name; });
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exponential-sum and sieve statistics over order-filtered primes"};
    app.set_version_flag("--version", std::string(expsieve::kToolVersion));
    app.require_subcommand(1);

    Invocation inv;
    add_run_subcommand(app, inv, "orders", "build and store a multiplicative-order database");
    add_run_subcommand(app, inv, "vsum", "order-filtered sum of squared sum maxima, with bounds");
    add_run_subcommand(app, inv, "admissible", "score subgroup sums against an exponent pair");
    add_run_subcommand(app, inv, "large-sieve", "sparse large-sieve inequality check");
    add_run_subcommand(app, inv, "discrepancy", "equidistribution survey of power residues");
    add_run_subcommand(app, inv, "digits", "divisor counts for binary patterns with free digits");
    add_run_subcommand(app, inv, "exceptional", "scan for subgroup sums beating a threshold");
    add_run_subcommand(app, inv, "report", "evaluate closed-form bounds from parameters alone");

    std::string manifest_path;
    bool rerun = false;
    CLI::App* verify = app.add_subcommand("verify", "recheck a run's outputs against its manifest");
    verify->add_option("manifest", manifest_path, "path to a manifest.json")->required();
    verify->add_flag("--rerun", rerun, "also re-execute the embedded config and compare");

    CLI11_PARSE(app, argc, argv);

    try {
        if (verify->parsed()) return expsieve::verify_manifest(manifest_path, rerun);
        expsieve::run_command(inv.command, inv.opts);
        return expsieve::kExitOk;
    } catch (const expsieve::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return expsieve::kExitValidation;
    } catch (const expsieve::ResourceError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return expsieve::kExitResource;
    } catch (const expsieve::PrecisionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return expsieve::kExitPrecision;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: config: " << e.what() << "\n";
        return expsieve::kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return expsieve::kExitInternal;
    }
}
