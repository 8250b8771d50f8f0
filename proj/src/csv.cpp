#include "sentiment/csv.hpp"

#include <fstream>
#include <ostream>
#include <sstream>

#include "sentiment/error.hpp"

namespace sentiment::csv {

std::vector<Row> parse(std::string_view text)
{
    std::vector<Row> rows;
    Row row;
    std::string field;
    bool in_quotes = false;
    bool row_started = false;

    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                field.push_back(c);
            }
            continue;
        }
        switch (c) {
        case '"':
            in_quotes = true;
            row_started = true;
            break;
        case ',':
            row.push_back(std::move(field));
            field.clear();
            row_started = true;
            break;
        case '\r':
            break;
        case '\n':
            if (row_started || !field.empty()) {
                row.push_back(std::move(field));
                rows.push_back(std::move(row));
            }
            field.clear();
            row.clear();
            row_started = false;
            break;
        default:
            field.push_back(c);
            row_started = true;
        }
    }
    if (in_quotes) {
        throw Error(ErrorCode::Io, "unterminated quoted field at end of input");
    }
    if (row_started || !field.empty()) {
        row.push_back(std::move(field));
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string escape(std::string_view field)
{
    if (field.find_first_of(",\"\r\n") == std::string_view::npos) {
        return std::string(field);
    }
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') {
            out.push_back('"');
        }
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

void write_row(std::ostream& out, const Row& row)
{
    for (std::size_t i = 0; i < row.size(); ++i) {
        if (i > 0) {
            out << ',';
        }
        out << escape(row[i]);
    }
    out << '\n';
}

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::Io, "cannot open '" + path + "'");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

}  // namespace sentiment::csv

#include <charconv>

namespace sentiment {

std::string format_number(double value)
{
    char buf[32];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, ec == std::errc{} ? end : buf);
}

}  // namespace sentiment
