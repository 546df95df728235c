#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <cstdio>
#include <exception>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "loadcoint/calendar.hpp"
#include "loadcoint/errors.hpp"
#include "loadcoint/ingest.hpp"
#include "loadcoint/pipeline.hpp"
#include "loadcoint/report.hpp"

namespace loadcoint {

struct BacktestConfig {
  PipelineConfig pipeline;
  CriticalValues critical_values;
  /// Worker threads; 0 picks the hardware concurrency.
  unsigned threads = 1;
};

struct BacktestRow {
  Date date;
  /// Daily peak-relative errors (percent) of models A, B, C.
  std::optional<std::array<double, 3>> model_error;
  std::optional<double> ensemble_error;
  std::optional<double> delta_pct;
  ExitCode status = ExitCode::ok;
  std::string message;

  bool ok() const noexcept { return status == ExitCode::ok; }
};

struct MonthlySummary {
  std::string year_month;
  std::optional<std::array<double, 3>> mmre_models;
  std::optional<double> mmre_ensemble;
  int included_days = 0;
  int excluded_days = 0;
};

struct BacktestResult {
  std::vector<BacktestRow> rows;
  std::vector<MonthlySummary> months;
  int excluded_days = 0;
};

inline BacktestRow backtest_day(const std::vector<Record>& records, Date day, const BacktestConfig& cfg) {
  BacktestRow row;
  row.date = day;
  const SeriesWindow w = assemble_window(records, day);
  const DayProfile actual = day_load(records, day);
  try {
    const auto res = run_pipeline(w, cfg.critical_values, cfg.pipeline);
    std::array<double, 3> errs{};
    for (std::size_t i = 0; i < 3; ++i) errs[i] = daily_relative_error(actual, res.forecasts[i].prediction);
    const DayProfile ens(day, res.report.ensemble, ProfileKind::load_mw);
    row.model_error = errs;
    row.ensemble_error = daily_relative_error(actual, ens);
    row.delta_pct = res.report.delta_pct;
  } catch (const DegeneracyError& e) {
    row.status = ExitCode::degeneracy;
    row.message = e.what();
  }
  return row;
}

/// Forecasts and scores every day of [from, to]. Degenerate days are kept
/// as aborted rows and excluded from the monthly means. Rows come back in
/// date order whatever the thread count.
inline BacktestResult run_backtest(const std::vector<Record>& records, Date from, Date to,
                                   const BacktestConfig& cfg = {}) {
  if (days_between(from, to) < 0)
    throw InputError("backtest range is empty: " + format_date(from) + " > " + format_date(to));
  const int n = days_between(from, to) + 1;

  // Coverage is checked up front so a gap fails the whole run, not one day.
  for (int i = 0; i < n; ++i) {
    const Date d = add_days(from, i);
    try {
      (void)assemble_window(records, d);
      (void)day_load(records, d);
    } catch (const InputError& e) {
      throw InputError(std::string("insufficient coverage: ") + e.what());
    }
  }

  BacktestResult out;
  out.rows.resize(static_cast<std::size_t>(n));
  std::vector<std::exception_ptr> failures(static_cast<std::size_t>(n));
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int i = next++; i < n; i = next++) {
      try {
        out.rows[static_cast<std::size_t>(i)] = backtest_day(records, add_days(from, i), cfg);
      } catch (...) {
        failures[static_cast<std::size_t>(i)] = std::current_exception();
      }
    }
  };
  unsigned threads = cfg.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : cfg.threads;
  threads = std::min<unsigned>(threads, static_cast<unsigned>(n));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  for (const auto& f : failures)
    if (f) std::rethrow_exception(f);

  std::map<std::string, MonthlySummary> months;
  std::map<std::string, std::array<double, 4>> sums;
  for (const auto& row : out.rows) {
    const std::string ym = format_year_month(row.date);
    auto& m = months[ym];
    m.year_month = ym;
    if (!row.ok()) {
      ++m.excluded_days;
      ++out.excluded_days;
      continue;
    }
    auto& s = sums[ym];
    for (std::size_t i = 0; i < 3; ++i) s[i] += (*row.model_error)[i];
    s[3] += *row.ensemble_error;
    ++m.included_days;
  }
  for (auto& [ym, m] : months) {
    if (m.included_days > 0) {
      const auto& s = sums[ym];
      const double k = m.included_days;
      m.mmre_models = std::array<double, 3>{s[0] / k, s[1] / k, s[2] / k};
      m.mmre_ensemble = s[3] / k;
    }
    out.months.push_back(m);
  }
  return out;
}

namespace detail {

inline std::string csv_real(const std::optional<double>& v) {
  if (!v) return {};
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", *v);
  return buf;
}

}  // namespace detail

inline std::string status_label(ExitCode c) {
  return c == ExitCode::ok ? "ok" : "aborted:" + std::to_string(static_cast<int>(c));
}

/// Per-day rows, then a `# monthly` trailer.
inline std::string backtest_csv(const BacktestResult& r) {
  using detail::csv_real;
  std::string out = "date,mmre_a,mmre_b,mmre_c,mmre_ensemble,delta_pct,status\n";
  for (const auto& row : r.rows) {
    out += format_date(row.date);
    for (std::size_t i = 0; i < 3; ++i)
      out += "," + (row.model_error ? csv_real((*row.model_error)[i]) : std::string{});
    out += "," + csv_real(row.ensemble_error) + "," + csv_real(row.delta_pct) + "," + status_label(row.status) + "\n";
  }
  out += "# monthly\nyear-month,mmre_ensemble,excluded_days\n";
  for (const auto& m : r.months)
    out += m.year_month + "," + csv_real(m.mmre_ensemble) + "," + std::to_string(m.excluded_days) + "\n";
  return out;
}

}  // namespace loadcoint
