#pragma once

#include <array>
#include <charconv>
#include <cmath>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "loadcoint/calendar.hpp"
#include "loadcoint/errors.hpp"

namespace loadcoint {

inline constexpr int kHours = 24;
inline constexpr int kHistoryDays = 9;

using HourValues = std::array<double, kHours>;

enum class ProfileKind { load_mw, temp_c };

/// Twenty-four hourly values of one calendar day. Hours are 1-based.
class DayProfile {
public:
  DayProfile(Date date, const HourValues& values, ProfileKind kind)
      : date_(date), values_(values), kind_(kind) {
    for (int h = 1; h <= kHours; ++h) {
      const double v = values_[h - 1];
      if (!std::isfinite(v))
        throw InputError("non-finite value at " + format_date(date) + " hour " + std::to_string(h));
      if (kind == ProfileKind::load_mw && !(v > 0.0))
        throw InputError("non-positive load at " + format_date(date) + " hour " + std::to_string(h));
    }
  }

  Date date() const noexcept { return date_; }
  ProfileKind kind() const noexcept { return kind_; }
  const HourValues& values() const noexcept { return values_; }
  double at(int hour) const { return values_.at(static_cast<std::size_t>(hour - 1)); }

  bool operator==(const DayProfile&) const = default;

private:
  Date date_;
  HourValues values_;
  ProfileKind kind_;
};

/// Nine history days of load and temperature, plus the forecast temperature
/// of the target day. Days are addressed by offset from the target: -9..-1
/// for history, 0 for the target itself.
class SeriesWindow {
public:
  SeriesWindow(Date target, std::vector<DayProfile> load_history,
               std::vector<DayProfile> temp_history, DayProfile temp_forecast)
      : target_(target),
        load_(std::move(load_history)),
        temp_(std::move(temp_history)),
        forecast_(std::move(temp_forecast)) {
    if (load_.size() != kHistoryDays || temp_.size() != kHistoryDays)
      throw InputError("window needs exactly 9 history days");
    for (int i = 0; i < kHistoryDays; ++i) {
      const Date expect = add_days(target_, i - kHistoryDays);
      if (load_[i].date() != expect || temp_[i].date() != expect)
        throw InputError("history days must be consecutive and end the day before " +
                         format_date(target_));
      if (load_[i].kind() != ProfileKind::load_mw || temp_[i].kind() != ProfileKind::temp_c)
        throw InputError("history profile has the wrong kind");
    }
    if (forecast_.date() != target_ || forecast_.kind() != ProfileKind::temp_c)
      throw InputError("temperature forecast must be a temp_c profile of the target day");
  }

  Date target_date() const noexcept { return target_; }
  const std::vector<DayProfile>& load_history() const noexcept { return load_; }
  const std::vector<DayProfile>& temp_history() const noexcept { return temp_; }
  const DayProfile& temp_forecast() const noexcept { return forecast_; }

  static bool in_history(int offset) noexcept { return offset >= -kHistoryDays && offset <= -1; }

  bool has_load(int offset) const noexcept { return in_history(offset); }
  bool has_temperature(int offset) const noexcept { return in_history(offset) || offset == 0; }

  const DayProfile& load(int offset) const {
    if (!has_load(offset))
      throw InputError("load for day offset " + std::to_string(offset) + " is outside the window");
    return load_[static_cast<std::size_t>(offset + kHistoryDays)];
  }

  /// Offset 0 yields the forecast temperature of the target day.
  const DayProfile& temperature(int offset) const {
    if (!has_temperature(offset))
      throw InputError("temperature for day offset " + std::to_string(offset) +
                       " is outside the window");
    return offset == 0 ? forecast_ : temp_[static_cast<std::size_t>(offset + kHistoryDays)];
  }

  bool operator==(const SeriesWindow&) const = default;

private:
  Date target_;
  std::vector<DayProfile> load_;
  std::vector<DayProfile> temp_;
  DayProfile forecast_;
};

/// One CSV row. Forecast rows leave load_mw empty.
struct Record {
  Date date;
  int hour = 0;
  std::optional<double> load_mw;
  double temp_c = 0.0;

  bool operator==(const Record&) const = default;
};

inline constexpr std::string_view kCsvHeader = "date,hour,load_mw,temp_c";

namespace detail {

inline std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

inline double parse_real(std::string_view field, const std::string& where) {
  double v = 0.0;
  const auto* first = field.data();
  const auto* last = field.data() + field.size();
  auto [p, ec] = std::from_chars(first, last, v, std::chars_format::fixed | std::chars_format::scientific);
  if (field.empty() || ec != std::errc{} || p != last || !std::isfinite(v))
    throw InputError(where + ": malformed number '" + std::string(field) + "'");
  return v;
}

inline std::string format_real(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

inline std::pair<long, int> slot_key(Date d, int hour) {
  return {static_cast<long>(std::chrono::sys_days{d}.time_since_epoch().count()), hour};
}

}  // namespace detail

/// Parses `date,hour,load_mw,temp_c` text. Errors name the 1-based line.
inline std::vector<Record> parse_csv(std::istream& in) {
  std::vector<Record> records;
  std::set<std::pair<long, int>> seen;
  std::string line;
  int line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!header_seen) {
      if (line != kCsvHeader)
        throw InputError("line 1: expected header '" + std::string(kCsvHeader) + "'");
      header_seen = true;
      continue;
    }
    if (line.empty()) continue;
    const std::string where = "line " + std::to_string(line_no);
    const auto fields = detail::split_commas(line);
    if (fields.size() != 4) throw InputError(where + ": malformed row, expected 4 fields");

    Record r;
    try {
      r.date = parse_date(fields[0]);
    } catch (const InputError& e) {
      throw InputError(where + ": " + e.what());
    }
    int hour = 0;
    auto [p, ec] = std::from_chars(fields[1].data(), fields[1].data() + fields[1].size(), hour);
    if (fields[1].empty() || ec != std::errc{} || p != fields[1].data() + fields[1].size())
      throw InputError(where + ": malformed hour '" + std::string(fields[1]) + "'");
    if (hour < 1 || hour > kHours) throw InputError(where + ": hour out of range (" + std::to_string(hour) + ")");
    r.hour = hour;
    if (!fields[2].empty()) r.load_mw = detail::parse_real(fields[2], where);
    r.temp_c = detail::parse_real(fields[3], where);

    if (!seen.insert(detail::slot_key(r.date, r.hour)).second)
      throw InputError(where + ": duplicate key (" + format_date(r.date) + ", " + std::to_string(hour) + ")");
    records.push_back(r);
  }
  if (!header_seen) throw InputError("line 1: expected header '" + std::string(kCsvHeader) + "'");
  return records;
}

inline std::vector<Record> parse_csv(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_csv(in);
}

/// Shortest round-trip decimal representation; empty field for absent load.
inline std::string serialize_csv(const std::vector<Record>& records) {
  std::string out(kCsvHeader);
  out += '\n';
  for (const auto& r : records) {
    out += format_date(r.date);
    out += ',';
    out += std::to_string(r.hour);
    out += ',';
    if (r.load_mw) out += detail::format_real(*r.load_mw);
    out += ',';
    out += detail::format_real(r.temp_c);
    out += '\n';
  }
  return out;
}

/// Builds the window for `target` from an unordered record set. Records of
/// days outside target-9..target are ignored; the target day contributes its
/// temperature only. The first gap in (day, hour) order is reported.
inline SeriesWindow assemble_window(const std::vector<Record>& records, Date target) {
  std::map<std::pair<int, int>, const Record*> slots;
  for (const auto& r : records) {
    const int offset = days_between(target, r.date);
    if (offset < -kHistoryDays || offset > 0) continue;
    if (!slots.emplace(std::pair{offset, r.hour}, &r).second)
      throw InputError("duplicate key (" + format_date(r.date) + ", " + std::to_string(r.hour) + ")");
  }

  std::vector<DayProfile> loads;
  std::vector<DayProfile> temps;
  HourValues forecast{};
  for (int offset = -kHistoryDays; offset <= 0; ++offset) {
    const Date day = add_days(target, offset);
    HourValues load{};
    HourValues temp{};
    for (int h = 1; h <= kHours; ++h) {
      const auto it = slots.find({offset, h});
      const bool need_load = offset < 0;
      if (it == slots.end() || (need_load && !it->second->load_mw))
        throw InputError("missing data at (" + format_date(day) + ", " + std::to_string(h) + ")");
      if (need_load) {
        const double v = *it->second->load_mw;
        if (!(v > 0.0))
          throw InputError("non-positive load at (" + format_date(day) + ", " + std::to_string(h) + ")");
        load[h - 1] = v;
      }
      temp[h - 1] = it->second->temp_c;
    }
    if (offset < 0) {
      loads.emplace_back(day, load, ProfileKind::load_mw);
      temps.emplace_back(day, temp, ProfileKind::temp_c);
    } else {
      forecast = temp;
    }
  }
  return SeriesWindow(target, std::move(loads), std::move(temps),
                      DayProfile(target, forecast, ProfileKind::temp_c));
}

/// Actual load of one day, for scoring. Throws on gaps.
inline DayProfile day_load(const std::vector<Record>& records, Date day) {
  std::array<bool, kHours> have{};
  HourValues v{};
  for (const auto& r : records) {
    if (r.date != day || !r.load_mw) continue;
    v[r.hour - 1] = *r.load_mw;
    have[r.hour - 1] = true;
  }
  for (int h = 1; h <= kHours; ++h)
    if (!have[h - 1]) throw InputError("missing data at (" + format_date(day) + ", " + std::to_string(h) + ")");
  return DayProfile(day, v, ProfileKind::load_mw);
}

}  // namespace loadcoint
