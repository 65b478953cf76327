#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>

#include "expsieve/digits.hpp"
#include "expsieve/equidist.hpp"
#include "expsieve/expsums.hpp"
#include "expsieve/primes.hpp"

namespace expsieve {

// FNV-1a over a byte stream; manifest and database integrity checks.
uint64_t fnv1a64(std::span<const unsigned char> bytes);
uint64_t fnv1a64(const std::string& s);
std::string fnv1a64_hex(std::span<const unsigned char> bytes);

uint64_t checksum_file(const std::filesystem::path& path); // throws ValidationError if unreadable
std::string checksum_file_hex(const std::filesystem::path& path);

// Fixed 12-significant-digit rendering for CSV cells. Negative zero collapses
// to zero so reruns can't differ by a sign bit nobody can see.
std::string fmt_g12(double v);

// Write-to-temp-then-rename so readers never observe a half-written artifact.
void atomic_write(const std::filesystem::path& path, const std::string& content);

std::string read_file(const std::filesystem::path& path);

// CSV renderers. One versioned comment line, one header row, then data; every
// float cell goes through fmt_g12. The CLI writes these byte streams to disk
// and the acceptance suite compares them against fixtures, so nothing
// time- or path-dependent may ever appear here.

std::string render_vsum_per_prime_csv(uint64_t lambda, uint64_t X, double Delta, uint64_t T,
                                      uint64_t S, std::span<const PrimeRecord> records,
                                      std::span<const SumRecord> sums);

std::string render_admissible_csv(uint64_t lambda, uint64_t X, const AdmissiblePair& pair, double C,
                                  std::span<const ScanRow> rows);

std::string render_discrepancy_csv(uint64_t lambda, uint64_t X, uint64_t T, double delta,
                                   std::span<const EquidistRow> rows);

struct DigitReportRow {
    uint64_t p = 0;
    uint64_t count = 0;
    double main_term = 0;
    double deviation = 0;
    double q_bound = 0;
};

std::string render_digits_csv(const DigitPattern& pat, uint64_t prime_limit, double C,
                              std::span<const DigitReportRow> rows);

std::string render_exceptional_csv(const ExceptionalScan& scan);

} // namespace expsieve
