#pragma once

#include <chrono>
#include <string>
#include <string_view>

namespace cropsense {

using Timestamp = std::chrono::sys_seconds;
using Date = std::chrono::sys_days;

/// Inclusive calendar range [first, last]. Empty when last < first.
struct DateRange {
    Date first;
    Date last;

    bool empty() const noexcept { return last < first; }
    bool contains(Date d) const noexcept { return first <= d && d <= last; }
    bool contains(Timestamp t) const noexcept { return contains(std::chrono::floor<std::chrono::days>(t)); }

    friend bool operator==(const DateRange&, const DateRange&) = default;
};

std::string format_rfc3339(Timestamp t);
/// Accepts "YYYY-MM-DDTHH:MM:SS" followed by "Z" or a "+HH:MM"/"-HH:MM" offset,
/// with optional fractional seconds (truncated).
Timestamp parse_rfc3339(std::string_view text);

std::string format_date(Date d);
Date parse_date(std::string_view text);

inline Date day_of(Timestamp t) { return std::chrono::floor<std::chrono::days>(t); }

/// Monday of the ISO-8601 week containing d.
Date iso_week_start(Date d);
/// "2018-W16" style label for the ISO week containing d.
std::string format_iso_week(Date d);
/// Parses "YYYY-Www" and returns that week's Monday.
Date parse_iso_week(std::string_view text);

}  // namespace cropsense
