#pragma once

#include <compare>
#include <string>

namespace nowcast {

// Calendar month, the time axis of every series in this project.
struct Month {
    int year = 0;
    int month = 0; // 1..12

    auto operator<=>(const Month&) const = default;

    Month plus(int k) const {
        int idx = year * 12 + (month - 1) + k;
        int y = idx / 12, m = idx % 12;
        if (m < 0) { m += 12; --y; }
        return Month{y, m + 1};
    }
    Month next() const { return plus(1); }

    // Signed count of calendar months from `other` to `*this`.
    int since(const Month& other) const {
        return (year - other.year) * 12 + (month - other.month);
    }

    std::string str() const;                  // "YYYY-MM"
    static Month parse(const std::string&);   // throws DataError on malformed input
};

} // namespace nowcast
