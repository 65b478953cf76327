#pragma once

#include <filesystem>
#include <string>

namespace expsieve {

// Exit codes shared by the CLI and the manifest verifier:
//   0 ok, 2 validation, 3 resource cap, 4 numerical precision,
//   1 verify found checksum mismatches, 5 verify found missing artifacts,
//   6 unexpected internal failure.
inline constexpr int kExitOk = 0;
inline constexpr int kExitMismatch = 1;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitResource = 3;
inline constexpr int kExitPrecision = 4;
inline constexpr int kExitMissing = 5;
inline constexpr int kExitInternal = 6;

struct RunOptions {
    std::filesystem::path config_path;
    std::filesystem::path out_dir = "expsieve_out";
    std::filesystem::path order_db; // optional explicit database to reuse
    int threads = 0;                // 0 = hardware
};

// Executes the command named inside the config document; writes every report
// into out_dir and a manifest.json (config echoed verbatim, checksums of all
// inputs and outputs) last, atomically. Throws the taxonomy in errors.hpp.
void run_command(const std::string& command, const RunOptions& opts);

// Rechecks a manifest's outputs against their recorded checksums; with rerun
// set, re-executes the embedded config in a scratch directory and compares
// fresh bytes too. Returns one of the exit codes above.
int verify_manifest(const std::filesystem::path& manifest_path, bool rerun);

} // namespace expsieve
