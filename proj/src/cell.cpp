#include "redelex/cell.hpp"

#include <charconv>
#include <cctype>
#include <cstdio>
#include <cstring>

namespace redelex {

double Cell::numeric() const {
    switch (type()) {
        case CellType::Int: return static_cast<double>(as_int());
        case CellType::Real: return as_real();
        case CellType::Bool: return as_bool() ? 1.0 : 0.0;
        case CellType::Time: return static_cast<double>(as_time().seconds);
        default: return 0.0;
    }
}

size_t Cell::hash() const {
    size_t tag = static_cast<size_t>(v_.index()) * 0x9e3779b97f4a7c15ULL;
    switch (type()) {
        case CellType::Null: return tag;
        case CellType::Int: return tag ^ std::hash<int64_t>{}(as_int());
        case CellType::Real: return tag ^ std::hash<double>{}(as_real());
        case CellType::Bool: return tag ^ std::hash<bool>{}(as_bool());
        case CellType::Text: return tag ^ std::hash<std::string>{}(as_text());
        case CellType::Time: return tag ^ std::hash<int64_t>{}(as_time().seconds);
    }
    return tag;
}

// ---- civil time (Howard Hinnant's algorithms) ------------------------------

bool is_leap_year(int y) {
    return y % 4 == 0 && (y % 100 != 0 || y % 400 == 0);
}

int64_t days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    const int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<int64_t>(doe) - 719468;
}

static void civil_from_days(int64_t z, int& y, int& m, int& d) {
    z += 719468;
    const int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const int64_t yy = static_cast<int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    d = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
    m = static_cast<int>(mp + (mp < 10 ? 3 : -9));
    y = static_cast<int>(yy + (m <= 2));
}

CivilTime civil_from_seconds(int64_t epoch_seconds) {
    int64_t days = epoch_seconds / 86400;
    int64_t rem = epoch_seconds % 86400;
    if (rem < 0) {
        rem += 86400;
        days -= 1;
    }
    CivilTime c;
    civil_from_days(days, c.year, c.month, c.day);
    c.hour = static_cast<int>(rem / 3600);
    c.minute = static_cast<int>((rem / 60) % 60);
    c.second = static_cast<int>(rem % 60);
    return c;
}

int64_t seconds_from_civil(const CivilTime& c) {
    return days_from_civil(c.year, c.month, c.day) * 86400 +
           c.hour * 3600 + c.minute * 60 + c.second;
}

int weekday_from_seconds(int64_t epoch_seconds) {
    int64_t days = epoch_seconds / 86400;
    if (epoch_seconds % 86400 < 0) days -= 1;
    return static_cast<int>(((days % 7) + 11) % 7);  // day 0 = Thursday
}

// ---- parsing ---------------------------------------------------------------

static bool all_digits(const char* p, int n) {
    for (int i = 0; i < n; ++i)
        if (!std::isdigit(static_cast<unsigned char>(p[i]))) return false;
    return true;
}

static int days_in_month(int y, int m) {
    static const int dm[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (m == 2 && is_leap_year(y)) return 29;
    return dm[m - 1];
}

std::optional<Timestamp> parse_timestamp(const std::string& text) {
    const char* p = text.c_str();
    size_t n = text.size();
    if (n < 10) return std::nullopt;
    if (!all_digits(p, 4) || p[4] != '-' || !all_digits(p + 5, 2) || p[7] != '-' ||
        !all_digits(p + 8, 2))
        return std::nullopt;
    CivilTime c;
    c.year = (p[0] - '0') * 1000 + (p[1] - '0') * 100 + (p[2] - '0') * 10 + (p[3] - '0');
    c.month = (p[5] - '0') * 10 + (p[6] - '0');
    c.day = (p[8] - '0') * 10 + (p[9] - '0');
    if (c.month < 1 || c.month > 12) return std::nullopt;
    if (c.day < 1 || c.day > days_in_month(c.year, c.month)) return std::nullopt;

    size_t i = 10;
    if (i < n && (p[i] == 'T' || p[i] == ' ')) {
        if (n < i + 9) return std::nullopt;
        const char* t = p + i + 1;
        if (!all_digits(t, 2) || t[2] != ':' || !all_digits(t + 3, 2) || t[5] != ':' ||
            !all_digits(t + 6, 2))
            return std::nullopt;
        c.hour = (t[0] - '0') * 10 + (t[1] - '0');
        c.minute = (t[3] - '0') * 10 + (t[4] - '0');
        c.second = (t[6] - '0') * 10 + (t[7] - '0');
        if (c.hour > 23 || c.minute > 59 || c.second > 60) return std::nullopt;
        if (c.second == 60) c.second = 59;  // leap second clamp
        i += 9;
        if (i < n && p[i] == '.') {  // fractional seconds, truncated
            ++i;
            size_t frac_start = i;
            while (i < n && std::isdigit(static_cast<unsigned char>(p[i]))) ++i;
            if (i == frac_start) return std::nullopt;
        }
    }
    if (i < n && p[i] == 'Z') ++i;
    if (i != n) return std::nullopt;
    return Timestamp{seconds_from_civil(c)};
}

std::string format_timestamp(Timestamp t) {
    CivilTime c = civil_from_seconds(t.seconds);
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02dZ", c.year, c.month,
                  c.day, c.hour, c.minute, c.second);
    return buf;
}

std::optional<int64_t> parse_int(const std::string& text) {
    if (text.empty()) return std::nullopt;
    int64_t v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size()) return std::nullopt;
    return v;
}

std::optional<double> parse_real(const std::string& text) {
    if (text.empty()) return std::nullopt;
    double v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size()) return std::nullopt;
    return v;
}

std::optional<bool> parse_bool(const std::string& text) {
    if (text == "1") return true;
    if (text == "0") return false;
    std::string lower;
    lower.reserve(text.size());
    for (char ch : text) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
    if (lower == "true" || lower == "t") return true;
    if (lower == "false" || lower == "f") return false;
    return std::nullopt;
}

std::string format_real(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

std::string cell_to_string(const Cell& c) {
    switch (c.type()) {
        case CellType::Null: return "";
        case CellType::Int: return std::to_string(c.as_int());
        case CellType::Real: return format_real(c.as_real());
        case CellType::Bool: return c.as_bool() ? "true" : "false";
        case CellType::Text: return c.as_text();
        case CellType::Time: return format_timestamp(c.as_time());
    }
    return "";
}

}  // namespace redelex
