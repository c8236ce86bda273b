#include "gridlab/csv.hpp"

#include <charconv>

#include "gridlab/errors.hpp"
#include "gridlab/text.hpp"

namespace gridlab {

std::size_t CsvTable::column(std::string_view name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) return i;
    }
    throw IntegrityError("no column '" + std::string(name) + "'");
}

double CsvTable::number(std::size_t row, std::string_view col) const {
    const std::string& s = rows.at(row).at(column(col));
    double v = 0.0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size()) {
        throw ParseError(row + 2, "not a number: '" + s + "'");
    }
    return v;
}

CsvTable read_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IntegrityError("cannot open " + path.string());
    CsvTable t;
    std::string line;
    if (!std::getline(in, line)) return t;
    for (auto c : text::split(text::trim(text::strip_bom(line)), ',')) t.header.emplace_back(c);
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (text::trim(line).empty()) continue;
        std::vector<std::string> row;
        for (auto c : text::split(text::trim(line), ',')) row.emplace_back(c);
        if (row.size() != t.header.size()) throw ParseError(lineno, "column count mismatch");
        t.rows.push_back(std::move(row));
    }
    return t;
}

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
    : out_(path, std::ios::binary), columns_(header.size()) {
    if (!out_) throw IntegrityError("cannot write " + path.string());
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i) out_ << ',';
        out_ << header[i];
    }
    out_ << '\n';
}

CsvWriter& CsvWriter::cell(std::string_view s) {
    if (in_row_++) out_ << ',';
    out_ << s;
    return *this;
}

CsvWriter& CsvWriter::cell(double v) { return cell(std::string_view(text::format_double(v))); }

CsvWriter& CsvWriter::cell(long long v) { return cell(std::string_view(std::to_string(v))); }

void CsvWriter::end_row() {
    if (in_row_ != columns_) {
        throw IntegrityError("row has " + std::to_string(in_row_) + " cells, expected " +
                             std::to_string(columns_));
    }
    out_ << '\n';
    in_row_ = 0;
}

}  // namespace gridlab
