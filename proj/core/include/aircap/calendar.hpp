#pragma once

#include <compare>
#include <cstdint>
#include <string>

namespace aircap {

struct YearQuarter {
    int year = 0;
    int quarter = 0; // 1..4

    auto operator<=>(const YearQuarter&) const = default;

    // Quarters since year 0, a convenient total order / difference basis.
    int index() const { return year * 4 + (quarter - 1); }

    static YearQuarter from_index(int idx) {
        int y = idx / 4;
        int q = idx % 4;
        if (q < 0) {
            q += 4;
            y -= 1;
        }
        return {y, q + 1};
    }

    YearQuarter next() const { return from_index(index() + 1); }
    YearQuarter prev() const { return from_index(index() - 1); }

    std::string str() const {
        return std::to_string(year) + "Q" + std::to_string(quarter);
    }
};

struct YearMonth {
    int year = 0;
    int month = 0; // 1..12

    auto operator<=>(const YearMonth&) const = default;

    int index() const { return year * 12 + (month - 1); }

    static YearMonth from_index(int idx) {
        int y = idx / 12;
        int m = idx % 12;
        if (m < 0) {
            m += 12;
            y -= 1;
        }
        return {y, m + 1};
    }

    YearMonth plus(int months) const { return from_index(index() + months); }

    YearQuarter quarter() const { return {year, (month - 1) / 3 + 1}; }

    std::string str() const {
        std::string m = std::to_string(month);
        if (m.size() == 1) m = "0" + m;
        return std::to_string(year) + "-" + m;
    }
};

// First month strictly after the quarter ends; earnings calls for a quarter
// happen during this month.
inline YearMonth call_month(YearQuarter q) {
    return YearMonth{q.year, q.quarter * 3}.plus(1);
}

} // namespace aircap
