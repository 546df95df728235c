#pragma once

#include <charconv>
#include <chrono>
#include <cstdio>
#include <string>
#include <string_view>

#include "loadcoint/errors.hpp"

namespace loadcoint {

/// Calendar days are opaque labels; arithmetic goes through sys_days.
using Date = std::chrono::year_month_day;

inline Date add_days(Date d, int n) {
  return Date{std::chrono::sys_days{d} + std::chrono::days{n}};
}

inline int days_between(Date from, Date to) {
  return static_cast<int>((std::chrono::sys_days{to} - std::chrono::sys_days{from}).count());
}

/// Strict YYYY-MM-DD. Throws InputError on anything else.
inline Date parse_date(std::string_view s) {
  auto bad = [&] { return InputError("invalid ISO date '" + std::string(s) + "'"); };
  if (s.size() != 10 || s[4] != '-' || s[7] != '-') throw bad();
  auto num = [&](std::string_view part) {
    int v = 0;
    auto [p, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
    if (ec != std::errc{} || p != part.data() + part.size()) throw bad();
    return v;
  };
  const Date d{std::chrono::year{num(s.substr(0, 4))},
               std::chrono::month{static_cast<unsigned>(num(s.substr(5, 2)))},
               std::chrono::day{static_cast<unsigned>(num(s.substr(8, 2)))}};
  if (!d.ok()) throw bad();
  return d;
}

inline std::string format_date(Date d) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(d.year()),
                static_cast<unsigned>(d.month()), static_cast<unsigned>(d.day()));
  return buf;
}

inline std::string format_year_month(Date d) { return format_date(d).substr(0, 7); }

}  // namespace loadcoint
