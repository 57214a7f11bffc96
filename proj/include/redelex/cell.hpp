#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace redelex {

// Timestamp cells hold UTC epoch seconds; a distinct type keeps them
// separate from plain integers inside the variant.
struct Timestamp {
    int64_t seconds = 0;
    bool operator==(const Timestamp&) const = default;
    auto operator<=>(const Timestamp&) const = default;
};

enum class CellType : uint8_t { Null, Int, Real, Bool, Text, Time };

// One value of a table cell. Storage classes: null, integer, real, boolean,
// text, timestamp.
class Cell {
  public:
    Cell() = default;
    Cell(int64_t v) : v_(v) {}
    Cell(double v) : v_(v) {}
    Cell(bool v) : v_(v) {}
    Cell(std::string v) : v_(std::move(v)) {}
    Cell(const char* v) : v_(std::string(v)) {}
    Cell(Timestamp v) : v_(v) {}

    static Cell null() { return Cell(); }

    CellType type() const { return static_cast<CellType>(v_.index()); }
    bool is_null() const { return v_.index() == 0; }

    int64_t as_int() const { return std::get<int64_t>(v_); }
    double as_real() const { return std::get<double>(v_); }
    bool as_bool() const { return std::get<bool>(v_); }
    const std::string& as_text() const { return std::get<std::string>(v_); }
    Timestamp as_time() const { return std::get<Timestamp>(v_); }

    // Numeric view used by encoders and synthetic signals.
    double numeric() const;

    bool operator==(const Cell&) const = default;

    size_t hash() const;

  private:
    std::variant<std::monostate, int64_t, double, bool, std::string, Timestamp> v_;
};

struct CellHash {
    size_t operator()(const Cell& c) const { return c.hash(); }
};

// Composite key (e.g. multi-column PK values).
using CellKey = std::vector<Cell>;

struct CellKeyHash {
    size_t operator()(const CellKey& k) const {
        size_t h = 0x9e3779b97f4a7c15ULL;
        for (const auto& c : k) h = h * 1099511628211ULL ^ c.hash();
        return h;
    }
};

// ---- civil time ----------------------------------------------------------

struct CivilTime {
    int year = 1970;
    int month = 1;  // 1..12
    int day = 1;    // 1..31
    int hour = 0;
    int minute = 0;
    int second = 0;
};

int64_t days_from_civil(int y, int m, int d);
CivilTime civil_from_seconds(int64_t epoch_seconds);
int64_t seconds_from_civil(const CivilTime& c);
int weekday_from_seconds(int64_t epoch_seconds);  // 0 = Sunday .. 6 = Saturday
bool is_leap_year(int y);

// Accepts "YYYY-MM-DD", optionally followed by " HH:MM:SS" or "THH:MM:SS",
// optional fractional seconds (truncated) and optional trailing "Z".
std::optional<Timestamp> parse_timestamp(const std::string& text);

// Canonical form "YYYY-MM-DDTHH:MM:SSZ"; round-trips through parse_timestamp.
std::string format_timestamp(Timestamp t);

// ---- text conversions ----------------------------------------------------

std::optional<int64_t> parse_int(const std::string& text);
std::optional<double> parse_real(const std::string& text);
std::optional<bool> parse_bool(const std::string& text);

// Shortest decimal that round-trips the double exactly.
std::string format_real(double v);

// Cell rendered for CSV export; null renders as the empty string.
std::string cell_to_string(const Cell& c);

}  // namespace redelex
