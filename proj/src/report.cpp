#include "expsieve/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "expsieve/errors.hpp"

namespace expsieve {

uint64_t fnv1a64(std::span<const unsigned char> bytes) {
    uint64_t h = 14695981039346656037ull;
    for (unsigned char b : bytes) {
        h ^= b;
        h *= 1099511628211ull;
    }
    return h;
}

uint64_t fnv1a64(const std::string& s) {
    return fnv1a64(std::span<const unsigned char>(
        reinterpret_cast<const unsigned char*>(s.data()), s.size()));
}

std::string fnv1a64_hex(std::span<const unsigned char> bytes) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", (unsigned long long)fnv1a64(bytes));
    return buf;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot read file: " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

uint64_t checksum_file(const std::filesystem::path& path) {
    std::string data = read_file(path);
    return fnv1a64(data);
}

std::string checksum_file_hex(const std::filesystem::path& path) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", (unsigned long long)checksum_file(path));
    return buf;
}

std::string fmt_g12(double v) {
    if (v == 0.0) v = 0.0; // flush -0
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

namespace {

std::string u64s(uint64_t v) { return std::to_string(v); }

} // namespace

std::string render_vsum_per_prime_csv(uint64_t lambda, uint64_t X, double Delta, uint64_t T,
                                      uint64_t S, std::span<const PrimeRecord> records,
                                      std::span<const SumRecord> sums) {
    std::ostringstream out;
    out << "# expsieve csv v1 kind=vsum-per-prime lambda=" << lambda << " X=" << X
        << " Delta=" << fmt_g12(Delta) << " delta_rule=t>=ceil(Delta) T=" << T << " S=" << S << "\n";
    out << "p,t_p,tau_pm1,a_p,m_p\n";
    for (size_t i = 0; i < records.size(); ++i) {
        out << u64s(records[i].p) << ',' << u64s(records[i].t) << ',' << u64s(records[i].tau_pm1)
            << ',' << u64s(sums[i].a) << ',' << fmt_g12(sums[i].value) << "\n";
    }
    return out.str();
}

std::string render_admissible_csv(uint64_t lambda, uint64_t X, const AdmissiblePair& pair, double C,
                                  std::span<const ScanRow> rows) {
    std::ostringstream out;
    out << "# expsieve csv v1 kind=admissible-scan lambda=" << lambda << " X=" << X
        << " pair=" << pair.label << " alpha=" << fmt_g12(pair.alpha)
        << " beta=" << fmt_g12(pair.beta) << " C=" << fmt_g12(C) << "\n";
    out << "p,t_p,a_p,m_p,bound,ratio,flag\n";
    for (const auto& r : rows) {
        out << u64s(r.p) << ',' << u64s(r.t) << ',' << u64s(r.a) << ',' << fmt_g12(r.m) << ','
            << fmt_g12(r.bound) << ',' << fmt_g12(r.ratio) << ',' << (r.flagged ? 1 : 0) << "\n";
    }
    return out.str();
}

std::string render_discrepancy_csv(uint64_t lambda, uint64_t X, uint64_t T, double delta,
                                   std::span<const EquidistRow> rows) {
    std::ostringstream out;
    out << "# expsieve csv v1 kind=discrepancy lambda=" << lambda << " X=" << X << " T=" << T
        << " delta=" << fmt_g12(delta) << "\n";
    out << "p,D,witness_a,witness_b,ET_bound(H),H\n";
    for (const auto& r : rows) {
        out << u64s(r.p) << ',' << fmt_g12(r.disc.D) << ',' << fmt_g12(r.disc.witness_a) << ','
            << fmt_g12(r.disc.witness_b) << ',' << fmt_g12(r.et_bound) << ',' << u64s(r.H) << "\n";
    }
    return out.str();
}

std::string render_digits_csv(const DigitPattern& pat, uint64_t prime_limit, double C,
                              std::span<const DigitReportRow> rows) {
    std::ostringstream out;
    char ahex[32];
    std::snprintf(ahex, sizeof ahex, "0x%llx", (unsigned long long)pat.a);
    out << "# expsieve csv v1 kind=digit-divisors S=" << pat.S << " a=" << ahex << " T=" << pat.T()
        << " prime_limit=" << prime_limit << " C=" << fmt_g12(C) << " (odd primes only)\n";
    out << "p,N_p,main_term,deviation,Q_p_bound\n";
    for (const auto& r : rows) {
        out << u64s(r.p) << ',' << u64s(r.count) << ',' << fmt_g12(r.main_term) << ','
            << fmt_g12(r.deviation) << ',' << fmt_g12(r.q_bound) << "\n";
    }
    return out.str();
}

std::string render_exceptional_csv(const ExceptionalScan& scan) {
    std::ostringstream out;
    out << "# expsieve csv v1 kind=exceptional-subgroups t=" << scan.t << " k=" << scan.k
        << " U=" << fmt_g12(scan.U) << " C=" << fmt_g12(scan.C) << " ell_max=" << scan.ell_max
        << " g_rule=h^((ell-1)/t),h=least_primitive_root\n";
    out << "ell,g,a,value,rhs,exceptional\n";
    for (const auto& r : scan.rows) {
        out << u64s(r.ell) << ',' << u64s(r.g) << ',' << u64s(r.a) << ',' << fmt_g12(r.value) << ','
            << fmt_g12(r.rhs) << ',' << (r.exceptional ? 1 : 0) << "\n";
    }
    return out.str();
}

void atomic_write(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw ValidationError("cannot write file: " + tmp.string());
        out.write(content.data(), std::streamsize(content.size()));
        if (!out) throw ValidationError("short write: " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

} // namespace expsieve
