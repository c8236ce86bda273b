#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

namespace gridlab {

/// A header plus string cells. Cells never contain commas, quotes or newlines.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::size_t column(std::string_view name) const;
    double number(std::size_t row, std::string_view col) const;
};

CsvTable read_csv(const std::filesystem::path& path);

/// Streams rows to disk. Doubles are written in shortest round-trip form.
class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);

    CsvWriter& cell(std::string_view s);
    CsvWriter& cell(double v);
    CsvWriter& cell(long long v);
    CsvWriter& cell(std::size_t v) { return cell(static_cast<long long>(v)); }
    CsvWriter& cell(int v) { return cell(static_cast<long long>(v)); }
    void end_row();

private:
    std::ofstream out_;
    std::size_t columns_;
    std::size_t in_row_ = 0;
};

}  // namespace gridlab
