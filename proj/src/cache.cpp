#include "msslab/cache.hpp"

#include <zlib.h>

#include <bit>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "msslab/error.hpp"
#include "msslab/report.hpp"

namespace msslab {

static_assert(std::endian::native == std::endian::little, "cache I/O assumes a little-endian host");

namespace {

constexpr char kMagic[4] = {'M', 'S', 'S', 'C'};
constexpr std::size_t kHeaderBytes = 4 + 4 + 4 + 8 + 1;

template <class T>
void put(std::ostream& out, T v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <class T>
T get(const char* p) {
    T v;
    std::memcpy(&v, p, sizeof v);
    return v;
}

std::uint32_t crc_of(const void* data, std::size_t bytes) {
    uLong crc = crc32(0L, Z_NULL, 0);
    const auto* p = static_cast<const Bytef*>(data);
    while (bytes > 0) {
        uInt chunk = static_cast<uInt>(std::min<std::size_t>(bytes, 1u << 30));
        crc = crc32(crc, p, chunk);
        p += chunk;
        bytes -= chunk;
    }
    return static_cast<std::uint32_t>(crc);
}

[[noreturn]] void corrupt(const std::filesystem::path& path, const std::string& why) {
    throw Error(Errc::CorruptCache, path.string() + ": " + why);
}

}  // namespace

void write_table(const std::filesystem::path& path, const HeckeTable& table) {
    const std::uint64_t M = table.M();
    const bool real_only = table.self_dual();
    std::vector<double> payload;
    payload.reserve(real_only ? M : 2 * M);
    for (std::uint32_t m = 1; m <= M; ++m) {
        payload.push_back(table.real(m));
        if (!real_only) payload.push_back(table.value(m).imag());
    }
    const std::size_t bytes = payload.size() * sizeof(double);

    std::error_code ec;
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(Errc::IoError, "cannot write " + tmp.string());
        out.write(kMagic, 4);
        put<std::uint32_t>(out, kCacheVersion);
        put<std::uint32_t>(out, static_cast<std::uint32_t>(table.n()));
        put<std::uint64_t>(out, M);
        put<std::uint8_t>(out, real_only ? 1 : 0);
        out.write(reinterpret_cast<const char*>(payload.data()), static_cast<std::streamsize>(bytes));
        put<std::uint32_t>(out, crc_of(payload.data(), bytes));
        if (!out) throw Error(Errc::IoError, "write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw Error(Errc::IoError, "cannot move " + tmp.string() + " into place: " + ec.message());
}

HeckeTable read_table(const std::filesystem::path& path, std::uint32_t max_M) {
    std::ifstream in(path, std::ios::binary | std::ios::ate);
    if (!in) throw Error(Errc::IoError, "cannot read " + path.string());
    const auto size = static_cast<std::uint64_t>(in.tellg());
    if (size < kHeaderBytes + 4) corrupt(path, "shorter than the header");
    in.seekg(0);
    char header[kHeaderBytes];
    in.read(header, kHeaderBytes);
    if (std::memcmp(header, kMagic, 4) != 0) corrupt(path, "bad magic");
    const auto version = get<std::uint32_t>(header + 4);
    if (version != kCacheVersion) corrupt(path, "unsupported version " + std::to_string(version));
    const auto n = get<std::uint32_t>(header + 8);
    const auto M = get<std::uint64_t>(header + 12);
    const auto flag = get<std::uint8_t>(header + 20);
    if (n < 3 || flag > 1 || M == 0 || M > (1ull << 32)) corrupt(path, "implausible header");
    const std::uint64_t count = flag ? M : 2 * M;
    if (size != kHeaderBytes + count * sizeof(double) + 4)
        corrupt(path, "length " + std::to_string(size) + " does not match M = " + std::to_string(M));

    std::vector<double> payload(count);
    in.read(reinterpret_cast<char*>(payload.data()), static_cast<std::streamsize>(count * sizeof(double)));
    char tail[4];
    in.read(tail, 4);
    if (!in) throw Error(Errc::IoError, "read failed for " + path.string());
    if (get<std::uint32_t>(tail) != crc_of(payload.data(), count * sizeof(double))) corrupt(path, "CRC mismatch");

    const std::uint64_t keep = (max_M == 0 || max_M > M) ? M : max_M;
    std::vector<double> re(keep + 1, 0.0), im;
    if (!flag) im.assign(keep + 1, 0.0);
    for (std::uint64_t m = 1; m <= keep; ++m) {
        if (flag) {
            re[m] = payload[m - 1];
        } else {
            re[m] = payload[2 * (m - 1)];
            im[m] = payload[2 * (m - 1) + 1];
        }
    }
    return HeckeTable::from_values(static_cast<int>(n), std::move(re), std::move(im));
}

const char* cache_status_name(CacheStatus s) noexcept {
    switch (s) {
        case CacheStatus::Hit: return "hit";
        case CacheStatus::Built: return "built";
        case CacheStatus::Rebuilt: return "rebuilt";
    }
    return "unknown";
}

std::filesystem::path cache_path(const std::filesystem::path& dir, const FormSpec& form) {
    std::ostringstream name;
    name << "table-" << std::hex << std::setw(16) << std::setfill('0') << form.fingerprint() << ".mssc";
    return dir / name.str();
}

CacheResult load_or_build_cache(const FormSpec& form, std::uint32_t M, const std::filesystem::path& dir, std::ostream& log) {
    CacheResult out;
    out.path = cache_path(dir, form);
    bool existed = std::filesystem::exists(out.path);
    if (existed) {
        try {
            HeckeTable stored = read_table(out.path, M);
            if (stored.n() != form.n || stored.self_dual() != form.self_dual()) {
                log << "warning: cache " << out.path.string() << " holds a different form; rebuilding\n";
            } else if (stored.M() < M) {
                log << "cache " << out.path.string() << " stops at " << stored.M() << " < " << M << "; rebuilding\n";
            } else {
                out.table = std::move(stored);
                out.file_crc = file_crc32(out.path);
                out.status = CacheStatus::Hit;
                log << "cache hit " << out.path.string() << " crc32=" << std::hex << std::setw(8) << std::setfill('0')
                    << out.file_crc << std::dec << " (checksum match), serving M=" << M << "\n";
                return out;
            }
        } catch (const Error& e) {
            if (e.code() != Errc::CorruptCache) throw;
            log << "warning: " << e.what() << "; rebuilding\n";
        }
    }
    out.table = build_coefficient_table(form, M);
    write_table(out.path, out.table);
    out.file_crc = file_crc32(out.path);
    out.status = existed ? CacheStatus::Rebuilt : CacheStatus::Built;
    log << "cache " << cache_status_name(out.status) << " " << out.path.string() << " M=" << M << " crc32=" << std::hex
        << std::setw(8) << std::setfill('0') << out.file_crc << std::dec << "\n";
    return out;
}

}  // namespace msslab
