#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace bergman {

inline constexpr int kCsvSchemaVersion = 1;

/// A CSV document: a "#bergman-csv <version> <kind>" line, a header row, data rows.
/// Numbers are stored in their shortest round-trip form so output is byte-stable.
class CsvTable {
public:
    CsvTable() = default;
    CsvTable(std::string kind, std::vector<std::string> columns);

    const std::string& kind() const noexcept { return kind_; }
    int version() const noexcept { return version_; }
    const std::vector<std::string>& columns() const noexcept { return columns_; }
    const std::vector<std::vector<std::string>>& rows() const noexcept { return rows_; }
    std::size_t size() const noexcept { return rows_.size(); }

    /// Starts a row; fill it with the cell() calls, in column order.
    CsvTable& row();
    CsvTable& cell(double v);
    CsvTable& cell(long long v);
    CsvTable& cell(std::size_t v) { return cell(static_cast<long long>(v)); }
    CsvTable& cell(int v) { return cell(static_cast<long long>(v)); }
    CsvTable& cell(bool v);
    CsvTable& cell(std::string_view v);
    CsvTable& cell(const char* v) { return cell(std::string_view(v)); }

    std::size_t column(std::string_view name) const;  // throws InputError if absent
    const std::string& at(std::size_t row, std::string_view name) const;
    double number(std::size_t row, std::string_view name) const;

    /// Throws InputError if a row is not complete.
    void write(std::ostream& os) const;
    std::string to_string() const;

    /// Strict reader: version line, header and equal-length rows are required.
    static CsvTable read(std::istream& is);
    static CsvTable parse(std::string_view text);

private:
    std::string kind_;
    int version_ = kCsvSchemaVersion;
    std::vector<std::string> columns_;
    std::vector<std::vector<std::string>> rows_;
};

}  // namespace bergman
