#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "loadcoint/errors.hpp"
#include "loadcoint/ingest.hpp"

namespace loadcoint {

/// A: indicator regression. B, C: regressions with load-temperature links.
enum class ModelId { A, B, C };

inline constexpr std::array<ModelId, 3> kModels = {ModelId::A, ModelId::B, ModelId::C};

inline const char* model_name(ModelId id) {
  switch (id) {
    case ModelId::A: return "a";
    case ModelId::B: return "b";
    case ModelId::C: return "c";
  }
  return "?";
}

/// hour: T at hour tau-lag of the same day, wrapping into the previous day.
/// day: T at hour tau of day for_day-lag.
enum class TempLagMode { hour, day };

struct FeatureConfig {
  TempLagMode temp_mode = TempLagMode::hour;
  int koyck_order = 3;

  bool operator==(const FeatureConfig&) const = default;
};

inline constexpr std::array<int, 6> kIndicatorHours = {9, 10, 19, 20, 11, 21};

inline std::size_t column_count(ModelId id) {
  switch (id) {
    case ModelId::A: return 10;
    case ModelId::B: return 6;
    case ModelId::C: return 9;
  }
  return 0;
}

inline std::vector<std::string> column_names(ModelId id) {
  std::vector<std::string> base = {"const", "load_lag1", "load_lag3_2", "load_lag7"};
  switch (id) {
    case ModelId::A:
      base.insert(base.end(), {"ind9", "ind10", "ind19", "ind20", "koyck_ind11", "koyck_ind21"});
      break;
    case ModelId::B:
      base.insert(base.end(), {"koyck_link_lag1_temp2", "koyck_link_lag3_2_temp8"});
      break;
    case ModelId::C:
      base.insert(base.end(), {"temp2", "temp8", "cross_lag1temp2_lag7temp8", "koyck_link_lag1_temp2",
                               "koyck_link_lag3_2_temp8"});
      break;
  }
  return base;
}

/// Half-day-shifted load: mornings take the afternoon of day-2, afternoons
/// the morning of day-1. Stands in for the load lags 2 and 3.
inline DayProfile p_three_halves(const SeriesWindow& w, int for_day) {
  if (!w.has_load(for_day - 1) || !w.has_load(for_day - 2))
    throw InputError("P(t-3/2) for day offset " + std::to_string(for_day) +
                     " needs load of days -1 and -2 inside the window");
  const auto& two_back = w.load(for_day - 2);
  const auto& one_back = w.load(for_day - 1);
  HourValues v{};
  for (int h = 1; h <= 12; ++h) v[h - 1] = two_back.at(h + 12);
  for (int h = 13; h <= kHours; ++h) v[h - 1] = one_back.at(h - 12);
  return DayProfile(add_days(w.target_date(), for_day), v, ProfileKind::load_mw);
}

/// Unit impulse at one of the six peak hours.
inline HourValues indicator(int hour) {
  if (std::find(kIndicatorHours.begin(), kIndicatorHours.end(), hour) == kIndicatorHours.end())
    throw InputError("indicator hour must be one of 9, 10, 11, 19, 20, 21 (got " + std::to_string(hour) + ")");
  HourValues v{};
  v[hour - 1] = 1.0;
  return v;
}

inline HourValues temp_term(const SeriesWindow& w, int for_day, int lag, TempLagMode mode = TempLagMode::hour) {
  if (lag < 1) throw InputError("temperature lag must be positive");
  HourValues v{};
  if (mode == TempLagMode::day) {
    if (!w.has_temperature(for_day - lag))
      throw InputError("temperature of day offset " + std::to_string(for_day - lag) + " is outside the window");
    v = w.temperature(for_day - lag).values();
    return v;
  }
  if (lag >= kHours) throw InputError("hour-mode temperature lag must be below 24");
  if (!w.has_temperature(for_day) || !w.has_temperature(for_day - 1))
    throw InputError("temperature of day offsets " + std::to_string(for_day - 1) + ".." +
                     std::to_string(for_day) + " is outside the window");
  const auto& today = w.temperature(for_day);
  const auto& yesterday = w.temperature(for_day - 1);
  for (int h = 1; h <= kHours; ++h) {
    const int src = h - lag;
    v[h - 1] = src >= 1 ? today.at(src) : yesterday.at(kHours + src);
  }
  return v;
}

/// Truncated Koyck lag within one day, renormalised where the day start cuts
/// the lag short.
inline HourValues koyck_transform(const HourValues& series, double lambda, int order) {
  if (!(lambda >= 0.0 && lambda < 1.0)) throw InputError("Koyck decay must lie in [0, 1)");
  if (order < 1 || order > kHours - 1) throw InputError("Koyck order must lie in 1..23");
  HourValues out{};
  for (int t = 0; t < kHours; ++t) {
    double num = 0.0;
    double den = 0.0;
    double weight = 1.0;
    for (int j = 0; j <= std::min(order, t); ++j) {
      num += weight * series[t - j];
      den += weight;
      weight *= lambda;
    }
    out[t] = num / den;
  }
  return out;
}

namespace detail {

inline HourValues product(const HourValues& a, const HourValues& b) {
  HourValues r{};
  for (int i = 0; i < kHours; ++i) r[i] = a[i] * b[i];
  return r;
}

inline HourValues difference(const HourValues& a, const HourValues& b) {
  HourValues r{};
  for (int i = 0; i < kHours; ++i) r[i] = a[i] - b[i];
  return r;
}

}  // namespace detail

/// Whether every regressor of `model` for `for_day` can be read off the window.
inline bool lags_resolve(const SeriesWindow& w, ModelId model, int for_day, const FeatureConfig& cfg) {
  if (!w.has_load(for_day - 1) || !w.has_load(for_day - 2) || !w.has_load(for_day - 7)) return false;
  if (model == ModelId::A) return true;
  if (cfg.temp_mode == TempLagMode::hour) return w.has_temperature(for_day) && w.has_temperature(for_day - 1);
  return w.has_temperature(for_day - 2) && w.has_temperature(for_day - 8);
}

/// 24 x k regressor block of one day (offset from the target).
inline Eigen::MatrixXd day_regressors(const SeriesWindow& w, ModelId model, int for_day, double lambda,
                                      const FeatureConfig& cfg) {
  if (!lags_resolve(w, model, for_day, cfg))
    throw InputError(std::string("model ") + model_name(model) + " regressors for day offset " +
                     std::to_string(for_day) + " reach outside the window");
  const HourValues& lag1 = w.load(for_day - 1).values();
  const HourValues lag32 = p_three_halves(w, for_day).values();
  const HourValues& lag7 = w.load(for_day - 7).values();

  std::vector<HourValues> cols = {HourValues{}, lag1, lag32, lag7};
  cols[0].fill(1.0);

  if (model == ModelId::A) {
    for (int h : {9, 10, 19, 20}) cols.push_back(indicator(h));
    cols.push_back(koyck_transform(indicator(11), lambda, cfg.koyck_order));
    cols.push_back(koyck_transform(indicator(21), lambda, cfg.koyck_order));
  } else {
    const HourValues t2 = temp_term(w, for_day, 2, cfg.temp_mode);
    const HourValues t8 = temp_term(w, for_day, 8, cfg.temp_mode);
    const HourValues link_near = detail::product(detail::difference(lag1, lag32), t2);
    const HourValues link_far = detail::product(detail::difference(lag32, lag7), t8);
    if (model == ModelId::C) {
      cols.push_back(t2);
      cols.push_back(t8);
      cols.push_back(detail::difference(detail::product(lag1, t2), detail::product(lag7, t8)));
    }
    cols.push_back(koyck_transform(link_near, lambda, cfg.koyck_order));
    cols.push_back(koyck_transform(link_far, lambda, cfg.koyck_order));
  }

  Eigen::MatrixXd block(kHours, static_cast<Eigen::Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j)
    for (int h = 0; h < kHours; ++h) block(h, static_cast<Eigen::Index>(j)) = cols[j][h];
  return block;
}

struct RowId {
  Date date;
  int hour = 0;

  bool operator==(const RowId&) const = default;
};

struct DesignMatrix {
  ModelId model = ModelId::A;
  std::vector<RowId> rows;
  std::vector<std::string> names;
  Eigen::MatrixXd x;
  Eigen::VectorXd y;
};

/// History days (offsets, ascending) whose lags resolve inside the window.
inline std::vector<int> legal_training_days(const SeriesWindow& w, ModelId model, const FeatureConfig& cfg) {
  std::vector<int> days;
  for (int d = -kHistoryDays; d <= -1; ++d)
    if (lags_resolve(w, model, d, cfg)) days.push_back(d);
  return days;
}

/// Rows ordered day-major, hour-minor, following `training_days`.
inline DesignMatrix design_matrix(const SeriesWindow& w, ModelId model, std::span<const int> training_days,
                                  double lambda, const FeatureConfig& cfg = {}) {
  DesignMatrix dm;
  dm.model = model;
  dm.names = column_names(model);
  const auto n = static_cast<Eigen::Index>(training_days.size() * kHours);
  dm.x.resize(n, static_cast<Eigen::Index>(dm.names.size()));
  dm.y.resize(n);
  Eigen::Index r = 0;
  for (int d : training_days) {
    if (!w.has_load(d)) throw InputError("training day offset " + std::to_string(d) + " has no observed load");
    dm.x.middleRows(r, kHours) = day_regressors(w, model, d, lambda, cfg);
    const auto& resp = w.load(d);
    for (int h = 1; h <= kHours; ++h) {
      dm.y(r + h - 1) = resp.at(h);
      dm.rows.push_back({resp.date(), h});
    }
    r += kHours;
  }
  return dm;
}

inline DesignMatrix design_matrix(const SeriesWindow& w, ModelId model, double lambda, const FeatureConfig& cfg = {}) {
  const auto days = legal_training_days(w, model, cfg);
  return design_matrix(w, model, days, lambda, cfg);
}

}  // namespace loadcoint
