#include "cropsense/time.hpp"

#include "cropsense/error.hpp"

#include <charconv>
#include <cstdio>

namespace cropsense {

using namespace std::chrono;

namespace {

int parse_int(std::string_view text, std::size_t pos, std::size_t len, std::string_view whole) {
    int value = 0;
    if (pos + len > text.size()) {
        throw Error(Errc::ParseError, "truncated time value '" + std::string(whole) + "'");
    }
    auto first = text.data() + pos;
    auto [ptr, ec] = std::from_chars(first, first + len, value);
    if (ec != std::errc{} || ptr != first + len) {
        throw Error(Errc::ParseError, "bad digits in time value '" + std::string(whole) + "'");
    }
    return value;
}

void expect(std::string_view text, std::size_t pos, char c) {
    if (pos >= text.size() || text[pos] != c) {
        throw Error(Errc::ParseError, "expected '" + std::string(1, c) + "' in '" + std::string(text) + "'");
    }
}

Date checked_date(int y, int m, int d, std::string_view whole) {
    year_month_day ymd{year{y}, month{static_cast<unsigned>(m)}, day{static_cast<unsigned>(d)}};
    if (!ymd.ok()) {
        throw Error(Errc::ParseError, "invalid calendar date '" + std::string(whole) + "'");
    }
    return sys_days{ymd};
}

}  // namespace

std::string format_rfc3339(Timestamp t) {
    const Date d = floor<days>(t);
    const year_month_day ymd{d};
    const hh_mm_ss hms{t - d};
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                  static_cast<int>(hms.hours().count()), static_cast<int>(hms.minutes().count()),
                  static_cast<int>(hms.seconds().count()));
    return buf;
}

Timestamp parse_rfc3339(std::string_view text) {
    const Date d = parse_date(text.substr(0, 10));
    if (text.size() < 20 || (text[10] != 'T' && text[10] != 't' && text[10] != ' ')) {
        throw Error(Errc::ParseError, "not an RFC 3339 timestamp: '" + std::string(text) + "'");
    }
    const int hh = parse_int(text, 11, 2, text);
    expect(text, 13, ':');
    const int mm = parse_int(text, 14, 2, text);
    expect(text, 16, ':');
    const int ss = parse_int(text, 17, 2, text);
    if (hh > 23 || mm > 59 || ss > 60) {
        throw Error(Errc::ParseError, "time of day out of range in '" + std::string(text) + "'");
    }
    std::size_t pos = 19;
    if (pos < text.size() && text[pos] == '.') {
        ++pos;
        while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') ++pos;
    }
    seconds offset{0};
    if (pos < text.size() && (text[pos] == 'Z' || text[pos] == 'z')) {
        ++pos;
    } else if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
        const int sign = text[pos] == '+' ? 1 : -1;
        const int oh = parse_int(text, pos + 1, 2, text);
        expect(text, pos + 3, ':');
        const int om = parse_int(text, pos + 4, 2, text);
        offset = sign * (hours{oh} + minutes{om});
        pos += 6;
    } else {
        throw Error(Errc::ParseError, "missing UTC offset in '" + std::string(text) + "'");
    }
    if (pos != text.size()) {
        throw Error(Errc::ParseError, "trailing characters in '" + std::string(text) + "'");
    }
    return Timestamp{d} + hours{hh} + minutes{mm} + seconds{ss} - offset;
}

std::string format_date(Date d) {
    const year_month_day ymd{d};
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
    return buf;
}

Date parse_date(std::string_view text) {
    if (text.size() != 10) {
        throw Error(Errc::ParseError, "expected YYYY-MM-DD, got '" + std::string(text) + "'");
    }
    const int y = parse_int(text, 0, 4, text);
    expect(text, 4, '-');
    const int m = parse_int(text, 5, 2, text);
    expect(text, 7, '-');
    const int dd = parse_int(text, 8, 2, text);
    return checked_date(y, m, dd, text);
}

Date iso_week_start(Date d) {
    const weekday wd{d};
    // c_encoding: Sunday = 0, Monday = 1.
    const int since_monday = (static_cast<int>(wd.c_encoding()) + 6) % 7;
    return d - days{since_monday};
}

std::string format_iso_week(Date d) {
    const Date monday = iso_week_start(d);
    const Date thursday = monday + days{3};
    const year iso_year = year_month_day{thursday}.year();
    const Date week1 = iso_week_start(sys_days{iso_year / January / 4});
    const auto week = (monday - week1).count() / 7 + 1;
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-W%02d", static_cast<int>(iso_year), static_cast<int>(week));
    return buf;
}

Date parse_iso_week(std::string_view text) {
    if (text.size() != 8 || text[4] != '-' || (text[5] != 'W' && text[5] != 'w')) {
        throw Error(Errc::ParseError, "expected YYYY-Www, got '" + std::string(text) + "'");
    }
    const int y = parse_int(text, 0, 4, text);
    const int w = parse_int(text, 6, 2, text);
    const Date week1 = iso_week_start(sys_days{year{y} / January / 4});
    const Date last_week = iso_week_start(sys_days{year{y} / December / 28});
    const int weeks_in_year = static_cast<int>((last_week - week1).count() / 7 + 1);
    if (w < 1 || w > weeks_in_year) {
        throw Error(Errc::ParseError, "ISO week out of range in '" + std::string(text) + "'");
    }
    return week1 + days{7 * (w - 1)};
}

}  // namespace cropsense
