#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace aircap::csv {

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    // Index of a required column; throws SchemaError naming the file if absent.
    std::size_t col(const std::string& name) const;

    std::string source; // file name for error messages
};

// Strict reader: comma separated, one header row, every row must have the
// header's column count. No quoting; fields may not contain commas.
Table read_file(const std::filesystem::path& path);
Table read_string(const std::string& text, const std::string& source);

// Field parsers that raise SchemaError with file/row/column context.
std::int64_t to_int(const Table& t, std::size_t row, std::size_t col);
double to_double(const Table& t, std::size_t row, std::size_t col);

std::string format_double(double v); // shortest 17-significant-digit form

class Writer {
public:
    explicit Writer(const std::filesystem::path& path);

    void field(const std::string& v);
    void field(std::int64_t v);
    void field(int v) { field(static_cast<std::int64_t>(v)); }
    void field(double v);
    void end_row();

    template <typename... Ts>
    void row(const Ts&... vs) {
        (field(vs), ...);
        end_row();
    }

private:
    std::ofstream out_;
    bool at_row_start_ = true;
};

} // namespace aircap::csv
