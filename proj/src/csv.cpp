#include "bergman/csv.hpp"

#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>

#include "bergman/error.hpp"
#include "bergman/symbolic.hpp"

namespace bergman {

namespace {

constexpr std::string_view kMagic = "#bergman-csv";

bool needs_quotes(std::string_view s) {
    return s.find_first_of(",\"\r\n") != std::string_view::npos || (!s.empty() && (s.front() == ' ' || s.back() == ' '));
}

void write_field(std::ostream& os, std::string_view s) {
    if (!needs_quotes(s)) {
        os << s;
        return;
    }
    os << '"';
    for (char c : s) {
        if (c == '"') os << '"';
        os << c;
    }
    os << '"';
}

void write_record(std::ostream& os, const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) os << ',';
        write_field(os, fields[i]);
    }
    os << '\n';
}

/// Reads one record (quoted fields may span lines). False at end of input.
bool read_record(std::istream& is, std::vector<std::string>& out, std::size_t& line) {
    out.clear();
    if (is.peek() == std::char_traits<char>::eof()) return false;
    std::string field;
    bool quoted = false, was_quoted = false;
    ++line;
    for (int ch; (ch = is.get()) != std::char_traits<char>::eof();) {
        const char c = static_cast<char>(ch);
        if (quoted) {
            if (c == '"') {
                if (is.peek() == '"') {
                    field += '"';
                    is.get();
                } else {
                    quoted = false;
                }
            } else {
                if (c == '\n') ++line;
                field += c;
            }
            continue;
        }
        if (c == '"') {
            if (!field.empty() || was_quoted) throw InputError("csv line " + std::to_string(line) + ": stray quote");
            quoted = was_quoted = true;
        } else if (c == ',') {
            out.push_back(std::move(field));
            field.clear();
            was_quoted = false;
        } else if (c == '\n') {
            out.push_back(std::move(field));
            return true;
        } else if (c != '\r') {
            if (was_quoted) throw InputError("csv line " + std::to_string(line) + ": text after closing quote");
            field += c;
        }
    }
    if (quoted) throw InputError("csv line " + std::to_string(line) + ": unterminated quote");
    out.push_back(std::move(field));
    return true;
}

}  // namespace

CsvTable::CsvTable(std::string kind, std::vector<std::string> columns)
    : kind_(std::move(kind)), columns_(std::move(columns)) {
    if (kind_.empty() || kind_.find_first_of(" \t\r\n") != std::string::npos) {
        throw InputError("csv kind must be a single word, got '" + kind_ + "'");
    }
    if (columns_.empty()) throw InputError("csv needs at least one column");
}

CsvTable& CsvTable::row() {
    if (!rows_.empty() && rows_.back().size() != columns_.size()) {
        throw InputError("csv row " + std::to_string(rows_.size()) + " has " + std::to_string(rows_.back().size()) +
                         " cells, expected " + std::to_string(columns_.size()));
    }
    rows_.emplace_back();
    rows_.back().reserve(columns_.size());
    return *this;
}

CsvTable& CsvTable::cell(std::string_view v) {
    if (rows_.empty()) throw InputError("csv cell before row()");
    if (rows_.back().size() == columns_.size()) throw InputError("csv row has more cells than columns");
    rows_.back().emplace_back(v);
    return *this;
}

CsvTable& CsvTable::cell(double v) { return cell(std::string_view(format_double(v))); }

CsvTable& CsvTable::cell(long long v) { return cell(std::string_view(std::to_string(v))); }

CsvTable& CsvTable::cell(bool v) { return cell(std::string_view(v ? "true" : "false")); }

std::size_t CsvTable::column(std::string_view name) const {
    for (std::size_t i = 0; i < columns_.size(); ++i) {
        if (columns_[i] == name) return i;
    }
    throw InputError("csv has no column '" + std::string(name) + "'");
}

const std::string& CsvTable::at(std::size_t row, std::string_view name) const {
    if (row >= rows_.size()) throw InputError("csv row " + std::to_string(row) + " out of range");
    return rows_[row].at(column(name));
}

double CsvTable::number(std::size_t row, std::string_view name) const {
    const std::string& s = at(row, name);
    double v = 0.0;
    const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || end != s.data() + s.size()) {
        throw InputError("csv column '" + std::string(name) + "' row " + std::to_string(row) + ": '" + s +
                         "' is not a number");
    }
    return v;
}

void CsvTable::write(std::ostream& os) const {
    if (!rows_.empty() && rows_.back().size() != columns_.size()) throw InputError("csv last row is incomplete");
    os << kMagic << ' ' << version_ << ' ' << kind_ << '\n';
    write_record(os, columns_);
    for (const auto& r : rows_) write_record(os, r);
}

std::string CsvTable::to_string() const {
    std::ostringstream os;
    write(os);
    return os.str();
}

CsvTable CsvTable::read(std::istream& is) {
    std::string first;
    if (!std::getline(is, first)) throw InputError("csv is empty");
    if (!first.empty() && first.back() == '\r') first.pop_back();
    std::istringstream head(first);
    std::string magic, kind;
    int version = 0;
    if (!(head >> magic >> version >> kind) || magic != kMagic) {
        throw InputError("csv line 1: expected '#bergman-csv <version> <kind>', got '" + first + "'");
    }
    if (version != kCsvSchemaVersion) {
        throw InputError("csv schema version " + std::to_string(version) + " is not supported");
    }
    std::size_t line = 1;
    std::vector<std::string> columns;
    if (!read_record(is, columns, line)) throw InputError("csv has no header row");
    CsvTable t(kind, columns);
    std::vector<std::string> rec;
    while (read_record(is, rec, line)) {
        if (rec.size() == 1 && rec[0].empty()) continue;  // trailing blank line
        if (rec.size() != t.columns_.size()) {
            throw InputError("csv line " + std::to_string(line) + ": " + std::to_string(rec.size()) +
                             " fields, expected " + std::to_string(t.columns_.size()));
        }
        t.rows_.push_back(rec);
    }
    return t;
}

CsvTable CsvTable::parse(std::string_view text) {
    std::istringstream is{std::string(text)};
    return read(is);
}

}  // namespace bergman
