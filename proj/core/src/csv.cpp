#include "aircap/csv.hpp"

#include <charconv>
#include <cstdio>
#include <sstream>

#include "aircap/errors.hpp"

namespace aircap::csv {

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = line.find(',', start);
        if (pos == std::string::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    if (!out.empty() && !out.back().empty() && out.back().back() == '\r') {
        out.back().pop_back();
    }
    return out;
}

Table parse(std::istream& in, const std::string& source) {
    Table t;
    t.source = source;
    std::string line;
    if (!std::getline(in, line)) {
        throw SchemaError(source + ": empty file, expected a header row");
    }
    t.header = split_line(line);
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        auto fields = split_line(line);
        if (fields.size() != t.header.size()) {
            throw SchemaError(source + ":" + std::to_string(lineno) + ": expected " +
                              std::to_string(t.header.size()) + " fields, got " +
                              std::to_string(fields.size()));
        }
        t.rows.push_back(std::move(fields));
    }
    return t;
}

} // namespace

std::size_t Table::col(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) return i;
    }
    throw SchemaError(source + ": missing required column '" + name + "'");
}

Table read_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError("cannot open " + path.string());
    return parse(in, path.filename().string());
}

Table read_string(const std::string& text, const std::string& source) {
    std::istringstream in(text);
    return parse(in, source);
}

std::int64_t to_int(const Table& t, std::size_t row, std::size_t col) {
    const std::string& s = t.rows[row][col];
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
        throw SchemaError(t.source + ": row " + std::to_string(row + 2) + " column '" +
                          t.header[col] + "': '" + s + "' is not an integer");
    }
    return v;
}

double to_double(const Table& t, std::size_t row, std::size_t col) {
    const std::string& s = t.rows[row][col];
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
        throw SchemaError(t.source + ": row " + std::to_string(row + 2) + " column '" +
                          t.header[col] + "': '" + s + "' is not a number");
    }
    return v;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

Writer::Writer(const std::filesystem::path& path) : out_(path) {
    if (!out_) throw SchemaError("cannot open " + path.string() + " for writing");
}

void Writer::field(const std::string& v) {
    if (!at_row_start_) out_ << ',';
    out_ << v;
    at_row_start_ = false;
}

void Writer::field(std::int64_t v) { field(std::to_string(v)); }

void Writer::field(double v) { field(format_double(v)); }

void Writer::end_row() {
    out_ << '\n';
    at_row_start_ = true;
}

} // namespace aircap::csv
