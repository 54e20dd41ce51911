#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>

#include "msslab/satake.hpp"

namespace msslab {

// Little-endian coefficient file: "MSSC", u32 version (1), u32 n, u64 M,
// u8 self-dual flag, then M binary64 values (2M interleaved re/im when not
// self-dual), then the zlib CRC32 of the value bytes.
inline constexpr std::uint32_t kCacheVersion = 1;

void write_table(const std::filesystem::path& path, const HeckeTable& table);

// CorruptCache on a bad magic, version, length or CRC; IoError if unreadable.
// Returns the first max_M entries when max_M is given and smaller than the
// stored bound.
HeckeTable read_table(const std::filesystem::path& path, std::uint32_t max_M = 0);

enum class CacheStatus { Hit, Built, Rebuilt };
const char* cache_status_name(CacheStatus s) noexcept;

struct CacheResult {
    HeckeTable table;
    std::filesystem::path path;
    std::uint32_t file_crc = 0;  // CRC32 of the whole cache file
    CacheStatus status = CacheStatus::Built;
};

// <dir>/table-<16 hex digits of form.fingerprint()>.mssc. A stored table
// with at least M entries is served (truncated to M); a shorter, corrupt or
// mismatched one is rebuilt at M and replaced. Warnings and the checksum go
// to `log`.
std::filesystem::path cache_path(const std::filesystem::path& dir, const FormSpec& form);
CacheResult load_or_build_cache(const FormSpec& form, std::uint32_t M, const std::filesystem::path& dir, std::ostream& log);

}  // namespace msslab
