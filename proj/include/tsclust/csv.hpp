#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace tsclust {

/// A header row plus data rows, all as text. Fields may be quoted with '"';
/// a doubled quote inside a quoted field is a literal quote.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    /// Index of the named column; throws ValidationError when absent.
    std::size_t column(std::string_view name) const;
    bool has_column(std::string_view name) const;
};

/// Throws ValidationError on an empty document, an unterminated quote or a
/// row whose field count differs from the header.
CsvTable parse_csv(std::string_view text);
CsvTable read_csv(const std::filesystem::path& path);

/// Quotes the field when it contains a comma, quote or line break.
std::string csv_field(std::string_view text);

/// Shortest decimal text that reads back to the same double.
std::string format_double(double value);

}  // namespace tsclust
