#include "tsclust/csv.hpp"
#include "tsclust/errors.hpp"
#include "tsclust/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <map>
#include <set>

namespace tsclust {

namespace {

bool is_iso_date(std::string_view s) {
    if (s.size() != 10 || s[4] != '-' || s[7] != '-') return false;
    int parts[3] = {0, 0, 0};
    const std::pair<std::size_t, std::size_t> spans[3] = {{0, 4}, {5, 2}, {8, 2}};
    for (int p = 0; p < 3; ++p) {
        const auto [pos, len] = spans[p];
        const char* first = s.data() + pos;
        const auto [end, ec] = std::from_chars(first, first + len, parts[p]);
        if (ec != std::errc() || end != first + len) return false;
    }
    using namespace std::chrono;
    return year_month_day(year(parts[0]), month(static_cast<unsigned>(parts[1])),
                          day(static_cast<unsigned>(parts[2])))
        .ok();
}

bool parse_number(std::string_view s, double& out) {
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
    if (s.empty()) return false;
    if (s.front() == '+') s.remove_prefix(1);
    const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && end == s.data() + s.size() && std::isfinite(out);
}

void note(std::vector<std::string>& violations, std::string message) {
    constexpr std::size_t kMaxReported = 20;
    if (violations.size() < kMaxReported) violations.push_back(std::move(message));
}

IngestResult ingest_table(const CsvTable& table, const PipelineConfig& config) {
    const std::size_t id_col = table.column(config.id_column);
    const std::size_t date_col = table.column(config.date_column);
    const std::size_t value_col = table.column(config.value_column);
    const bool filtering = !config.case_type_column.empty();
    const std::size_t type_col = filtering ? table.column(config.case_type_column) : 0;

    // id -> date -> summed value
    std::map<std::string, std::map<std::string, double>> observed;
    std::vector<std::string> violations;
    int kept = 0;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        if (filtering && row[type_col] != config.case_type) continue;
        ++kept;
        const std::string where = "data row " + std::to_string(r + 1);
        const std::string& id = row[id_col];
        const std::string& date = row[date_col];
        double value = 0.0;
        bool ok = true;
        if (id.empty()) {
            note(violations, where + ": empty id");
            ok = false;
        }
        if (!is_iso_date(date)) {
            note(violations, where + ": date '" + date + "' is not a valid YYYY-MM-DD date");
            ok = false;
        }
        if (!parse_number(row[value_col], value)) {
            note(violations, where + ": value '" + row[value_col] + "' is not a finite number");
            ok = false;
        }
        if (ok) observed[id][date] += value;
    }
    if (!violations.empty()) throw ValidationError(std::move(violations));
    if (observed.empty()) {
        throw ValidationError({filtering ? "no rows left after filtering " + config.case_type_column +
                                               " = '" + config.case_type + "'"
                                         : std::string("input has no data rows")});
    }

    // Common range: latest first date to earliest last date.
    std::string start = observed.begin()->second.begin()->first;
    std::string stop = observed.begin()->second.rbegin()->first;
    for (const auto& [id, dates] : observed) {
        start = std::max(start, dates.begin()->first);
        stop = std::min(stop, dates.rbegin()->first);
    }
    if (start > stop) {
        throw ValidationError({"the ids share no common date range (latest start " + start +
                               " is after earliest end " + stop + ")"});
    }
    std::set<std::string> axis_set;
    for (const auto& [id, dates] : observed)
        for (auto it = dates.lower_bound(start); it != dates.end() && it->first <= stop; ++it)
            axis_set.insert(it->first);
    std::vector<std::string> axis(axis_set.begin(), axis_set.end());

    std::vector<std::string> diagnostics;
    int clamps = 0;

    std::vector<RawSeries> raw;
    int filled = 0;
    for (const auto& [id, dates] : observed) {
        // Last value on or before the start date seeds the carry-forward.
        auto it = dates.upper_bound(start);
        --it;
        double last = it->second;
        std::vector<double> values;
        values.reserve(axis.size());
        for (const auto& d : axis) {
            const auto hit = dates.find(d);
            if (hit != dates.end()) {
                last = hit->second;
            } else {
                ++filled;
            }
            values.push_back(last);
        }
        raw.emplace_back(id, std::move(values));
    }
    if (filled > 0) {
        diagnostics.push_back(std::to_string(filled) +
                              " missing (id, date) cells filled with the last observed value");
    }

    if (config.transform == Transform::Daily) {
        for (auto& [id, values] : raw) {
            std::vector<double> diff;
            diff.reserve(values.empty() ? 0 : values.size() - 1);
            for (std::size_t t = 1; t < values.size(); ++t) {
                double d = values[t] - values[t - 1];
                if (d < 0.0) {
                    d = 0.0;
                    ++clamps;
                }
                diff.push_back(d);
            }
            values = std::move(diff);
        }
        if (!axis.empty()) axis.erase(axis.begin());
        if (clamps > 0) {
            diagnostics.push_back(std::to_string(clamps) + " negative daily differences clamped to 0");
        }
    }

    Dataset pivoted = validate_dataset(raw);
    auto [normalized, scaling] = normalize_dataset(pivoted);
    for (const auto& s : scaling)
        if (s.degenerate) diagnostics.push_back("series '" + s.id + "' is constant and normalizes to zeros");
    return {std::move(pivoted), std::move(normalized), std::move(scaling), std::move(axis),
            static_cast<int>(table.rows.size()), kept, clamps, std::move(diagnostics)};
}

}  // namespace

IngestResult ingest_cases(const PipelineConfig& config) { return ingest_table(read_csv(config.input), config); }

IngestResult ingest_cases_text(std::string_view csv_text, const PipelineConfig& config) {
    return ingest_table(parse_csv(csv_text), config);
}

}  // namespace tsclust
