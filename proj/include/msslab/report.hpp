#pragma once

#include <filesystem>
#include <fstream>
#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace msslab {

// Shortest decimal that reads back to the same double ("nan", "inf", "-inf"
// for the non-finite values).
std::string format_double(double v);

// CSV with a single header line. Fields are written as given; callers pass
// numbers through format_double. Throws IoError when the file cannot be
// written.
class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, std::span<const std::string_view> header);
    ~CsvWriter();
    CsvWriter(const CsvWriter&) = delete;
    CsvWriter& operator=(const CsvWriter&) = delete;

    void row(const std::vector<std::string>& fields);
    void close();
    std::size_t rows() const noexcept { return rows_; }
    const std::filesystem::path& path() const noexcept { return path_; }

private:
    std::filesystem::path path_;
    std::ofstream out_;
    std::size_t columns_;
    std::size_t rows_ = 0;
};

inline constexpr std::array<std::string_view, 6> kRankinHeader = {"form_label", "x_or_Pmax", "quantity",
                                                                            "value",      "drift",     "tail_bound"};
inline constexpr std::array<std::string_view, 12> kVarianceHeader = {
    "form_label", "X",                 "n",           "theta",       "L_or_Delta", "estimate",
    "stderr",     "samples",           "candidate_paper", "candidate_derived", "empirical_c", "nearest"};
inline constexpr std::array<std::string_view, 12> kOmegaHeader = {
    "n", "nu", "k", "y", "delta", "Y", "Lambda", "re_value", "im_value", "main_term", "residual", "envelope"};

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    // Column index by name; InvalidArgument when absent.
    std::size_t column(std::string_view name) const;
};

// Reads a file written by CsvWriter (no quoting). IoError if unreadable.
CsvTable read_csv(const std::filesystem::path& path);

// zlib crc32 of a whole file; IoError if unreadable.
std::uint32_t file_crc32(const std::filesystem::path& path);

}  // namespace msslab
