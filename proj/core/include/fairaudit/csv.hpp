#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace fairaudit::csv {

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    // Index of a header column, or npos.
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);
    std::size_t column(const std::string& name) const;
};

// RFC-4180 style reader: comma separated, double quotes escape commas,
// quotes and newlines. CRLF and LF both accepted.
Table read(std::istream& in);
Table read_file(const std::string& path);

std::string escape_field(const std::string& field);
void write(std::ostream& out, const Table& table);
void write_file(const std::string& path, const Table& table);

}  // namespace fairaudit::csv
