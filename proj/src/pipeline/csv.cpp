#include "tsclust/csv.hpp"

#include "tsclust/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace tsclust {

namespace {

std::string where(std::size_t line) { return "line " + std::to_string(line); }

}  // namespace

std::size_t CsvTable::column(std::string_view name) const {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw ValidationError({"missing column '" + std::string(name) + "'"});
    return static_cast<std::size_t>(it - header.begin());
}

bool CsvTable::has_column(std::string_view name) const {
    return std::find(header.begin(), header.end(), name) != header.end();
}

CsvTable parse_csv(std::string_view text) {
    // Skip a UTF-8 byte order mark.
    if (text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);

    std::vector<std::vector<std::string>> records;
    std::vector<std::string> record;
    std::string field;
    bool quoted = false, field_started = false;
    std::size_t line = 1, quote_line = 0;

    auto end_field = [&] {
        record.push_back(std::move(field));
        field.clear();
        field_started = false;
    };
    auto end_record = [&] {
        end_field();
        // A blank line yields a single empty field; drop it.
        if (!(record.size() == 1 && record[0].empty())) records.push_back(std::move(record));
        record.clear();
    };

    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                if (c == '\n') ++line;
                field += c;
            }
            continue;
        }
        switch (c) {
            case '"':
                if (field_started && !field.empty()) {
                    throw ValidationError({where(line) + ": stray quote inside an unquoted field"});
                }
                quoted = true;
                field_started = true;
                quote_line = line;
                break;
            case ',':
                end_field();
                break;
            case '\r':
                if (i + 1 < text.size() && text[i + 1] == '\n') break;
                end_record();
                ++line;
                break;
            case '\n':
                end_record();
                ++line;
                break;
            default:
                field += c;
                field_started = true;
        }
    }
    if (quoted) throw ValidationError({"unterminated quoted field starting on " + where(quote_line)});
    if (field_started || !field.empty() || !record.empty()) end_record();

    if (records.empty()) throw ValidationError({"CSV input is empty (a header row is required)"});
    CsvTable table;
    table.header = std::move(records.front());
    std::vector<std::string> violations;
    for (std::size_t r = 1; r < records.size(); ++r) {
        if (records[r].size() != table.header.size()) {
            violations.push_back("record " + std::to_string(r + 1) + " has " + std::to_string(records[r].size()) +
                                 " fields, header has " + std::to_string(table.header.size()));
            if (violations.size() >= 20) break;
            continue;
        }
        table.rows.push_back(std::move(records[r]));
    }
    if (!violations.empty()) throw ValidationError(std::move(violations));
    return table;
}

CsvTable read_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError({"cannot open '" + path.string() + "'"});
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_csv(buffer.str());
}

std::string csv_field(std::string_view text) {
    if (text.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(text);
    std::string out = "\"";
    for (char c : text) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string format_double(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[32];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, end);
}

}  // namespace tsclust
