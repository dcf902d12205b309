#include "nowcast/month.hpp"

#include "nowcast/errors.hpp"

#include <cctype>
#include <cstdio>

namespace nowcast {

std::string Month::str() const {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02d", year, month);
    return buf;
}

Month Month::parse(const std::string& s) {
    auto fail = [&] { throw DataError("malformed date '" + s + "', expected YYYY-MM"); };
    if (s.size() != 7 || s[4] != '-') fail();
    for (int i : {0, 1, 2, 3, 5, 6})
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) fail();
    Month m{std::stoi(s.substr(0, 4)), std::stoi(s.substr(5, 2))};
    if (m.month < 1 || m.month > 12) fail();
    return m;
}

} // namespace nowcast
