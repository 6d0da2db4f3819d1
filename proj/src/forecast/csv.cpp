#include "wfl/forecast/csv.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>

#include "wfl/forecast/error.hpp"

namespace wfl::forecast {

namespace {

[[noreturn]] void bad(const std::string& what) { throw ForecastError(ForecastErrc::MalformedCsv, what); }

int digits(std::string_view s, std::size_t pos, std::size_t n) {
    if (pos + n > s.size()) bad("truncated timestamp");
    int v = 0;
    for (std::size_t i = pos; i < pos + n; ++i) {
        if (s[i] < '0' || s[i] > '9') bad("bad digit in timestamp '" + std::string(s) + "'");
        v = v * 10 + (s[i] - '0');
    }
    return v;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

// Splits one CSV record, honouring double-quoted fields.
std::vector<std::string> split_record(std::string_view line) {
    std::vector<std::string> out;
    std::string field;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field.push_back(c);
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.push_back(std::move(field));
            field.clear();
        } else {
            field.push_back(c);
        }
    }
    if (quoted) bad("unterminated quoted field");
    out.push_back(std::move(field));
    return out;
}

double parse_number(std::string_view cell, std::size_t row, const std::string& col) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (ec != std::errc() || ptr != cell.data() + cell.size() || !std::isfinite(v)) {
        bad("row " + std::to_string(row) + " column " + col + ": not a number '" + std::string(cell) + "'");
    }
    return v;
}

}  // namespace

double parse_iso8601_hours(std::string_view text) {
    using namespace std::chrono;
    auto s = trim(text);
    int y = digits(s, 0, 4);
    if (s.size() < 10 || s[4] != '-' || s[7] != '-') bad("bad date in timestamp '" + std::string(s) + "'");
    int mo = digits(s, 5, 2);
    int d = digits(s, 8, 2);
    year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
    if (!ymd.ok()) bad("invalid calendar date '" + std::string(s) + "'");

    double seconds = 0.0;
    std::size_t pos = 10;
    if (pos < s.size() && (s[pos] == 'T' || s[pos] == ' ') && pos + 1 < s.size() && s[pos + 1] >= '0' &&
        s[pos + 1] <= '9') {
        ++pos;
        int hh = digits(s, pos, 2);
        if (pos + 2 >= s.size() || s[pos + 2] != ':') bad("bad time in timestamp '" + std::string(s) + "'");
        int mm = digits(s, pos + 3, 2);
        pos += 5;
        int ss = 0;
        double frac = 0.0;
        if (pos < s.size() && s[pos] == ':') {
            ss = digits(s, pos + 1, 2);
            pos += 3;
            if (pos < s.size() && s[pos] == '.') {
                std::size_t start = ++pos;
                double scale = 0.1;
                while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') {
                    frac += (s[pos] - '0') * scale;
                    scale /= 10;
                    ++pos;
                }
                if (pos == start) bad("empty fraction in timestamp");
            }
        }
        if (hh > 23 || mm > 59 || ss > 60) bad("time out of range in '" + std::string(s) + "'");
        seconds = hh * 3600.0 + mm * 60.0 + ss + frac;
    }
    while (pos < s.size() && s[pos] == ' ') ++pos;
    if (pos < s.size()) {
        if (s[pos] == 'Z' && pos + 1 == s.size()) {
            ++pos;
        } else if (s[pos] == '+' || s[pos] == '-') {
            int sign = s[pos] == '+' ? 1 : -1;
            int oh = digits(s, pos + 1, 2);
            std::size_t p2 = pos + 3;
            if (p2 < s.size() && s[p2] == ':') ++p2;
            int om = digits(s, p2, 2);
            if (p2 + 2 != s.size()) bad("trailing characters in timestamp '" + std::string(s) + "'");
            seconds -= sign * (oh * 3600.0 + om * 60.0);
            pos = s.size();
        } else {
            bad("bad zone designator in '" + std::string(s) + "'");
        }
    }
    auto days = sys_days(ymd).time_since_epoch().count();
    return static_cast<double>(days) * 24.0 + seconds / 3600.0;
}

std::string format_iso8601(double hours) {
    using namespace std::chrono;
    auto total = static_cast<long long>(std::llround(hours * 3600.0));
    long long day_count = total >= 0 ? total / 86400 : -((-total + 86399) / 86400);
    long long rem = total - day_count * 86400;
    year_month_day ymd{sys_days{days{day_count}}};
    char buf[64];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02lld:%02lld:%02lldZ", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()), rem / 3600, (rem / 60) % 60,
                  rem % 60);
    return buf;
}

Dataset parse_weather_csv(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto nl = text.find('\n', start);
        auto line = text.substr(start, nl == std::string_view::npos ? std::string_view::npos : nl - start);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        lines.push_back(line);
        if (nl == std::string_view::npos) break;
        start = nl + 1;
    }
    while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
    if (lines.empty()) bad("missing header row");

    auto header = split_record(lines[0]);
    const std::vector<std::string> required = {columns::kTimestamp,  columns::kTemperature, columns::kHumidity,
                                               columns::kWindSpeed,  columns::kVisibility,  columns::kPressure,
                                               columns::kSummary};
    std::map<std::string, std::size_t> position;
    for (std::size_t i = 0; i < header.size(); ++i) {
        auto name = std::string(trim(header[i]));
        if (std::find(required.begin(), required.end(), name) == required.end()) bad("unexpected column '" + name + "'");
        if (!position.emplace(name, i).second) bad("duplicate column '" + name + "'");
    }
    for (const auto& r : required) {
        if (!position.contains(r)) bad("missing column '" + r + "'");
    }

    Dataset d = empty_weather_dataset();
    for (std::size_t li = 1; li < lines.size(); ++li) {
        auto cells = split_record(lines[li]);
        if (cells.size() != header.size()) {
            bad("row " + std::to_string(li) + " has " + std::to_string(cells.size()) + " fields, expected " +
                std::to_string(header.size()));
        }
        auto ts_cell = trim(cells[position[columns::kTimestamp]]);
        if (ts_cell.empty()) bad("row " + std::to_string(li) + " has no timestamp");
        d.timestamps.push_back(parse_iso8601_hours(ts_cell));
        for (auto& col : d.numeric) {
            auto cell = trim(cells[position[col.name]]);
            col.values.push_back(cell.empty() ? kMissing : parse_number(cell, li, col.name));
        }
        auto label = trim(cells[position[columns::kSummary]]);
        d.categorical[0].values.push_back(label.empty() ? std::nullopt : std::optional<std::string>(label));
    }
    try {
        d.validate();
    } catch (const ForecastError& e) {
        bad(e.what());
    }
    return d;
}

std::string to_weather_csv(const Dataset& data) {
    std::string out = "Timestamp";
    for (const auto& c : data.numeric) out += "," + c.name;
    for (const auto& c : data.categorical) out += "," + c.name;
    out += "\n";
    char buf[64];
    for (std::size_t r = 0; r < data.rows(); ++r) {
        out += format_iso8601(data.timestamps[r]);
        for (const auto& c : data.numeric) {
            out.push_back(',');
            if (!is_missing(c.values[r])) {
                std::snprintf(buf, sizeof buf, "%.17g", c.values[r]);
                out += buf;
            }
        }
        for (const auto& c : data.categorical) {
            out.push_back(',');
            if (c.values[r]) {
                const auto& v = *c.values[r];
                if (v.find_first_of(",\"") != std::string::npos) {
                    out.push_back('"');
                    for (char ch : v) {
                        if (ch == '"') out.push_back('"');
                        out.push_back(ch);
                    }
                    out.push_back('"');
                } else {
                    out += v;
                }
            }
        }
        out.push_back('\n');
    }
    return out;
}

}  // namespace wfl::forecast
