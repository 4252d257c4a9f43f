#include "fairaudit/csv.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "fairaudit/errors.hpp"

namespace fairaudit::csv {

std::size_t Table::column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) return i;
    }
    return npos;
}

namespace {

// Parses one record starting at the current stream position. Returns false on
// end of input with nothing read.
bool parse_record(std::istream& in, std::vector<std::string>& fields) {
    fields.clear();
    std::string field;
    bool quoted = false;
    bool any = false;
    int c;
    while ((c = in.get()) != EOF) {
        any = true;
        char ch = static_cast<char>(c);
        if (quoted) {
            if (ch == '"') {
                if (in.peek() == '"') {
                    field.push_back('"');
                    in.get();
                } else {
                    quoted = false;
                }
            } else {
                field.push_back(ch);
            }
        } else if (ch == '"') {
            quoted = true;
        } else if (ch == ',') {
            fields.push_back(std::move(field));
            field.clear();
        } else if (ch == '\n') {
            break;
        } else if (ch == '\r') {
            if (in.peek() == '\n') in.get();
            break;
        } else {
            field.push_back(ch);
        }
    }
    if (!any) return false;
    fields.push_back(std::move(field));
    return true;
}

}  // namespace

Table read(std::istream& in) {
    Table table;
    std::vector<std::string> fields;
    if (!parse_record(in, fields)) {
        throw AuditError(ErrorCode::InvalidArgument, "empty CSV input");
    }
    table.header = fields;
    while (parse_record(in, fields)) {
        if (fields.size() == 1 && fields[0].empty()) continue;  // trailing blank line
        if (fields.size() != table.header.size()) {
            throw AuditError(ErrorCode::InvalidArgument,
                             "CSV row has " + std::to_string(fields.size()) + " fields, header has " +
                                 std::to_string(table.header.size()),
                             table.rows.size());
        }
        table.rows.push_back(fields);
    }
    return table;
}

Table read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw AuditError(ErrorCode::InvalidArgument, "cannot open file: " + path);
    }
    return read(in);
}

std::string escape_field(const std::string& field) {
    bool needs_quotes = field.find_first_of(",\"\r\n") != std::string::npos;
    if (!needs_quotes) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += "\"\"";
        else out.push_back(c);
    }
    out.push_back('"');
    return out;
}

void write(std::ostream& out, const Table& table) {
    auto emit_row = [&](const std::vector<std::string>& row) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i > 0) out.put(',');
            out << escape_field(row[i]);
        }
        out.put('\n');
    };
    emit_row(table.header);
    for (const auto& row : table.rows) emit_row(row);
}

void write_file(const std::string& path, const Table& table) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw AuditError(ErrorCode::InvalidArgument, "cannot write file: " + path);
    }
    write(out, table);
}

}  // namespace fairaudit::csv
