#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "loadcoint/calendar.hpp"
#include "loadcoint/errors.hpp"
#include "loadcoint/ingest.hpp"

namespace loadcoint {

enum class Generator {
  /// Double-peaked base shape, log-linear temperature response, AR(1) noise.
  weather,
  /// Load follows the indicator regression recursively (lambda = 0).
  model_a,
};

struct SynthParams {
  int days = 40;
  double base_mw = 4000.0;
  double peak_amp_mw = 800.0;
  double temp_sensitivity_pct_per_2c = 4.6;
  double ar_rho = 0.5;
  double noise_sd_mw = 20.0;
  std::uint64_t seed = 1;
  Date start_date = Date{std::chrono::year{2004}, std::chrono::April, std::chrono::day{1}};
  double temp_ref_c = 15.0;
  double temp_mean_c = 15.0;
  double temp_diurnal_amp_c = 5.0;
  double temp_day_sd_c = 1.5;
  Generator generator = Generator::weather;
};

struct GroundTruth {
  Generator generator = Generator::weather;
  /// Weather: peak_amp_mw, base_mw, mw_per_log_temp, ... Model A: a0..a9.
  std::map<std::string, double> coefficients;
};

struct SynthDataset {
  std::vector<Record> records;
  GroundTruth truth;
};

inline void validate(const SynthParams& p) {
  auto bad = [](const std::string& m) { return InputError("invalid generator parameter: " + m); };
  if (p.days <= 0) throw bad("days must be positive");
  if (!(p.base_mw > 0.0) || !std::isfinite(p.base_mw)) throw bad("base_mw must be positive");
  if (!std::isfinite(p.peak_amp_mw)) throw bad("peak_amp_mw must be finite");
  if (!std::isfinite(p.temp_sensitivity_pct_per_2c) || p.temp_sensitivity_pct_per_2c <= -100.0)
    throw bad("temp_sensitivity_pct_per_2c must be finite and > -100");
  if (!(p.ar_rho > -1.0 && p.ar_rho < 1.0)) throw bad("ar_rho must lie in (-1, 1)");
  if (!(p.noise_sd_mw >= 0.0) || !std::isfinite(p.noise_sd_mw)) throw bad("noise_sd_mw must be >= 0");
  if (!std::isfinite(p.temp_ref_c) || !std::isfinite(p.temp_mean_c) ||
      !std::isfinite(p.temp_diurnal_amp_c) || !(p.temp_day_sd_c >= 0.0))
    throw bad("temperature parameters must be finite, temp_day_sd_c >= 0");
}

/// Double-peaked shape: Gaussian bumps centred on hours 10 and 20.
inline double peak_shape(int hour) {
  auto bump = [](double x, double c) { return std::exp(-0.5 * (x - c) * (x - c)); };
  return bump(hour, 10.0) + bump(hour, 20.0);
}

namespace detail {

inline std::vector<HourValues> synth_temperatures(const SynthParams& p, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<HourValues> temps(static_cast<std::size_t>(p.days));
  double anomaly = 0.0;
  for (auto& day : temps) {
    anomaly = 0.7 * anomaly + p.temp_day_sd_c * gauss(rng);
    for (int h = 1; h <= kHours; ++h)
      day[h - 1] = p.temp_mean_c + anomaly +
                   p.temp_diurnal_amp_c * std::cos(2.0 * std::numbers::pi * (h - 15) / kHours);
  }
  return temps;
}

}  // namespace detail

/// Deterministic dataset of `days` consecutive days starting at start_date.
/// Temperatures and load noise come from one seeded engine, temperatures
/// first, so shifting temp_mean_c leaves every random draw unchanged.
inline SynthDataset synth_dataset(const SynthParams& p) {
  validate(p);
  std::mt19937_64 rng(p.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const auto temps = detail::synth_temperatures(p, rng);

  SynthDataset out;
  out.truth.generator = p.generator;
  std::vector<HourValues> load(static_cast<std::size_t>(p.days));

  if (p.generator == Generator::weather) {
    const double growth = 1.0 + p.temp_sensitivity_pct_per_2c / 100.0;
    out.truth.coefficients = {{"base_mw", p.base_mw},
                              {"peak_amp_mw", p.peak_amp_mw},
                              {"growth_per_2c", growth},
                              {"temp_ref_c", p.temp_ref_c},
                              {"ar_rho", p.ar_rho},
                              {"noise_sd_mw", p.noise_sd_mw}};
    double u = p.noise_sd_mw * gauss(rng) / std::sqrt(1.0 - p.ar_rho * p.ar_rho);
    for (std::size_t d = 0; d < load.size(); ++d) {
      for (int h = 1; h <= kHours; ++h) {
        if (d > 0 || h > 1) u = p.ar_rho * u + p.noise_sd_mw * gauss(rng);
        const double shape = p.base_mw + p.peak_amp_mw * peak_shape(h);
        load[d][h - 1] = shape * std::pow(growth, (temps[d][h - 1] - p.temp_ref_c) / 2.0) + u;
      }
    }
  } else {
    // Seven seed days with day-level variation, then the indicator recursion.
    const std::array<double, 10> a = {0.05 * p.base_mw, 0.30, 0.10, 0.55,
                                      0.02 * p.peak_amp_mw, 0.04 * p.peak_amp_mw,
                                      0.02 * p.peak_amp_mw, 0.04 * p.peak_amp_mw,
                                      0.03 * p.peak_amp_mw, 0.03 * p.peak_amp_mw};
    for (std::size_t i = 0; i < a.size(); ++i) out.truth.coefficients["a" + std::to_string(i)] = a[i];
    constexpr std::array<int, 6> ind_hours = {9, 10, 19, 20, 11, 21};
    for (std::size_t d = 0; d < load.size(); ++d) {
      if (d < 7) {
        const double level = p.base_mw * (1.0 + 0.05 * gauss(rng));
        for (int h = 1; h <= kHours; ++h)
          load[d][h - 1] = level + p.peak_amp_mw * peak_shape(h) * (1.0 + 0.2 * gauss(rng));
        continue;
      }
      for (int h = 1; h <= kHours; ++h) {
        const double p32 = h <= 12 ? load[d - 2][h + 11] : load[d - 1][h - 13];
        double v = a[0] + a[1] * load[d - 1][h - 1] + a[2] * p32 + a[3] * load[d - 7][h - 1];
        for (std::size_t k = 0; k < ind_hours.size(); ++k)
          if (h == ind_hours[k]) v += a[4 + k];
        if (p.noise_sd_mw > 0.0) v += p.noise_sd_mw * gauss(rng);
        load[d][h - 1] = v;
      }
    }
  }

  out.records.reserve(load.size() * kHours);
  for (std::size_t d = 0; d < load.size(); ++d) {
    const Date day = add_days(p.start_date, static_cast<int>(d));
    for (int h = 1; h <= kHours; ++h) {
      const double v = load[d][h - 1];
      if (!(v > 0.0))
        throw InputError("generator produced non-positive load at " + format_date(day) +
                         "; lower noise_sd_mw or peak_amp_mw");
      out.records.push_back({day, h, v, temps[d][h - 1]});
    }
  }
  return out;
}

/// The window for the last generated day. Needs days >= 10.
inline std::pair<SeriesWindow, GroundTruth> synth_window(const SynthParams& p) {
  if (p.days < kHistoryDays + 1)
    throw InputError("invalid generator parameter: synth_window needs days >= 10");
  auto data = synth_dataset(p);
  const Date target = add_days(p.start_date, p.days - 1);
  return {assemble_window(data.records, target), std::move(data.truth)};
}

}  // namespace loadcoint
