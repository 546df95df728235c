#pragma once

#include <nlohmann/json.hpp>

#include <array>
#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "loadcoint/calendar.hpp"
#include "loadcoint/errors.hpp"
#include "loadcoint/ingest.hpp"
#include "loadcoint/regress.hpp"
#include "loadcoint/thermo.hpp"
#include "loadcoint/verdict.hpp"

namespace loadcoint {

inline constexpr const char* kEngineVersion = "1.0.0";

/// Consumer-belief reliabilities carried verbatim in every report.
inline constexpr double kReliabilityCooperative = 0.8803;
inline constexpr double kReliabilityRareEvent = 0.96806;

/// Normalisation of mu in the error reduction.
inline constexpr double kMuNormalisation = 1.78617;

/// Load change (percent) for a 2 degC rise of the mean daily temperature.
inline constexpr double kPctPer2C = 4.6;

/// Day-ahead price index 10 beta sigma1, sigma reflected about 1 when below it.
inline double price(double beta, double sigma) {
  if (!(sigma > 0.0)) throw DegeneracyError(eq::price, "sigma must be positive");
  const double sigma1 = sigma >= 1.0 ? sigma : 2.0 - sigma;
  return 10.0 * beta * sigma1;
}

/// Percent reduction of the peak-relative mean error.
inline double error_reduction(double w1, double mu, double delta_s) {
  return 10.0 * (w1 * mu / kMuNormalisation - delta_s);
}

/// Temperature rise (degC) equivalent to a load change of `delta_pct` percent.
inline double temp_equivalence(double delta_pct) { return delta_pct * 2.0 / kPctPer2C; }

/// Mean absolute error over the day relative to the actual peak, in percent.
inline double daily_relative_error(const DayProfile& actual, const DayProfile& forecast) {
  if (actual.date() != forecast.date())
    throw InputError("misaligned dates " + format_date(actual.date()) + " / " + format_date(forecast.date()));
  double peak = actual.at(1);
  double sum = 0.0;
  for (int h = 1; h <= kHours; ++h) {
    peak = std::max(peak, actual.at(h));
    sum += std::abs(forecast.at(h) - actual.at(h));
  }
  return sum / kHours / peak * 100.0;
}

inline double mmre(std::span<const DayProfile> actuals, std::span<const DayProfile> forecasts) {
  if (actuals.empty()) throw InputError("mmre needs at least one day");
  if (actuals.size() != forecasts.size()) throw InputError("mmre needs equally long actual and forecast lists");
  double sum = 0.0;
  for (std::size_t i = 0; i < actuals.size(); ++i) sum += daily_relative_error(actuals[i], forecasts[i]);
  return sum / static_cast<double>(actuals.size());
}

/// Calendar-month means of (date, daily error) pairs, keyed by YYYY-MM.
inline std::map<std::string, double> monthly_mean(const std::vector<std::pair<Date, double>>& daily) {
  std::map<std::string, std::pair<double, int>> acc;
  for (const auto& [d, e] : daily) {
    auto& slot = acc[format_year_month(d)];
    slot.first += e;
    slot.second += 1;
  }
  std::map<std::string, double> out;
  for (const auto& [k, v] : acc) out[k] = v.first / v.second;
  return out;
}

struct ReportThermo {
  double theta1 = 0.0;
  double theta2 = 0.0;
  double beta = 0.0;
  double w1 = 0.0;
  double w2 = 0.0;
  double mu = 0.0;
  double sigma = 0.0;
  double delta_s = 0.0;
  double delta_sp = 0.0;

  bool operator==(const ReportThermo&) const = default;
};

struct ReportReserve {
  std::optional<double> r1;
  std::optional<double> r2;
  bool pass = false;

  bool operator==(const ReportReserve&) const = default;
};

struct ReportMeta {
  double p_v = kReliabilityCooperative;
  double p_r = kReliabilityRareEvent;
  std::string engine_version = kEngineVersion;
  std::string price_units = "dimensionless index";
  /// Echo of the run configuration (method, lambda policy, ...).
  std::map<std::string, std::string> config;

  bool operator==(const ReportMeta&) const = default;
};

struct DispatchReport {
  Date target_date;
  std::array<HourValues, 3> forecasts{};
  HourValues ensemble{};
  ReportThermo thermo;
  TimeTestResult time_test;
  ReportReserve reserve_test;
  double price_c = 0.0;
  double delta_pct = 0.0;
  double temp_equiv_c = 0.0;
  ReportMeta meta;

  bool operator==(const DispatchReport&) const = default;
};

inline DispatchReport build_report(const SeriesWindow& w, const std::array<ModelForecast, 3>& forecasts,
                                   const ThermoState& thermo, const TimeTestResult& time_test,
                                   const ReserveTestResult& reserve_test,
                                   std::map<std::string, std::string> config = {}) {
  for (const auto& f : forecasts)
    if (f.prediction.date() != w.target_date())
      throw InputError("forecast date " + format_date(f.prediction.date()) + " does not match target " +
                       format_date(w.target_date()));
  DispatchReport r;
  r.target_date = w.target_date();
  for (std::size_t i = 0; i < 3; ++i) r.forecasts[i] = forecasts[i].prediction.values();
  r.ensemble = ensemble_mean(forecasts).values();
  r.thermo = {thermo.theta1, thermo.theta2, thermo.beta, thermo.w1, thermo.w2,
              thermo.mu,     thermo.sigma,  thermo.delta_s, thermo.delta_sp};
  r.time_test = time_test;
  r.reserve_test = {reserve_test.r1, reserve_test.r2, reserve_test.pass};
  r.price_c = price(thermo.beta, thermo.sigma);
  r.delta_pct = error_reduction(thermo.w1, thermo.mu, thermo.delta_s);
  r.temp_equiv_c = temp_equivalence(r.delta_pct);
  r.meta.config = std::move(config);
  return r;
}

inline nlohmann::ordered_json to_json(const DispatchReport& r) {
  using nlohmann::ordered_json;
  auto arr = [](const HourValues& v) {
    ordered_json a = ordered_json::array();
    for (double x : v) a.push_back(x);
    return a;
  };
  auto opt = [](const std::optional<double>& v) { return v ? ordered_json(*v) : ordered_json(nullptr); };
  ordered_json j;
  j["target_date"] = format_date(r.target_date);
  j["forecasts"] = {{"a", arr(r.forecasts[0])}, {"b", arr(r.forecasts[1])}, {"c", arr(r.forecasts[2])}};
  j["ensemble"] = arr(r.ensemble);
  const auto& t = r.thermo;
  j["thermo"] = {{"theta1", t.theta1}, {"theta2", t.theta2}, {"beta", t.beta},       {"w1", t.w1},
                 {"w2", t.w2},         {"mu", t.mu},         {"sigma", t.sigma},     {"delta_s", t.delta_s},
                 {"delta_sp", t.delta_sp}};
  const auto& tt = r.time_test;
  j["time_test"] = {{"t6_1", tt.t6_1},
                    {"t6_2", tt.t6_2},
                    {"t16", tt.t16},
                    {"t24", tt.t24},
                    {"exponents", {{"i", tt.i}, {"k", tt.k}, {"m", tt.m}, {"n", tt.n}}},
                    {"verdicts",
                     {{"t6", tt.verdicts.t6},
                      {"t16", tt.verdicts.t16},
                      {"t24", tt.verdicts.t24},
                      {"t16_branch", branch_name(tt.verdicts.t16_branch)},
                      {"t24_branch", branch_name(tt.verdicts.t24_branch)}}}};
  j["reserve_test"] = {{"r1", opt(r.reserve_test.r1)}, {"r2", opt(r.reserve_test.r2)}, {"pass", r.reserve_test.pass}};
  j["price_c"] = r.price_c;
  j["delta_pct"] = r.delta_pct;
  j["temp_equiv_c"] = r.temp_equiv_c;
  ordered_json cfg = ordered_json::object();
  for (const auto& [k, v] : r.meta.config) cfg[k] = v;
  j["meta"] = {{"p_v", r.meta.p_v},
               {"p_r", r.meta.p_r},
               {"engine_version", r.meta.engine_version},
               {"price_units", r.meta.price_units},
               {"config", cfg}};
  return j;
}

namespace detail {

inline void write_json(const nlohmann::ordered_json& j, std::string& out, int indent) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  const std::string inner(static_cast<std::size_t>(indent + 1) * 2, ' ');
  switch (j.type()) {
    case nlohmann::ordered_json::value_t::number_float: {
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", j.get<double>());
      out += buf;
      break;
    }
    case nlohmann::ordered_json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        break;
      }
      out += "{\n";
      bool first = true;
      for (const auto& [k, v] : j.items()) {
        if (!first) out += ",\n";
        first = false;
        out += inner + nlohmann::ordered_json(k).dump() + ": ";
        write_json(v, out, indent + 1);
      }
      out += "\n" + pad + "}";
      break;
    }
    case nlohmann::ordered_json::value_t::array: {
      out += "[";
      bool first = true;
      for (const auto& v : j) {
        if (!first) out += ", ";
        first = false;
        write_json(v, out, indent + 1);
      }
      out += "]";
      break;
    }
    default: out += j.dump();
  }
}

}  // namespace detail

/// Pretty JSON with fixed key order and 17 significant digits per real.
inline std::string serialize_report(const DispatchReport& r) {
  std::string out;
  detail::write_json(to_json(r), out, 0);
  out += '\n';
  return out;
}

inline DispatchReport parse_report(const std::string& text) {
  DispatchReport r;
  try {
    const auto j = nlohmann::json::parse(text);
    auto arr = [](const nlohmann::json& a) {
      if (!a.is_array() || a.size() != kHours) throw InputError("report: expected 24 numbers");
      HourValues v{};
      for (int i = 0; i < kHours; ++i) v[i] = a.at(i).get<double>();
      return v;
    };
    auto opt = [](const nlohmann::json& v) { return v.is_null() ? std::optional<double>{} : v.get<double>(); };
    r.target_date = parse_date(j.at("target_date").get<std::string>());
    r.forecasts = {arr(j.at("forecasts").at("a")), arr(j.at("forecasts").at("b")), arr(j.at("forecasts").at("c"))};
    r.ensemble = arr(j.at("ensemble"));
    const auto& t = j.at("thermo");
    r.thermo = {t.at("theta1").get<double>(), t.at("theta2").get<double>(), t.at("beta").get<double>(),
                t.at("w1").get<double>(),     t.at("w2").get<double>(),     t.at("mu").get<double>(),
                t.at("sigma").get<double>(),  t.at("delta_s").get<double>(), t.at("delta_sp").get<double>()};
    const auto& tt = j.at("time_test");
    r.time_test.t6_1 = tt.at("t6_1").get<double>();
    r.time_test.t6_2 = tt.at("t6_2").get<double>();
    r.time_test.t16 = tt.at("t16").get<double>();
    r.time_test.t24 = tt.at("t24").get<double>();
    const auto& ex = tt.at("exponents");
    r.time_test.i = ex.at("i").get<int>();
    r.time_test.k = ex.at("k").get<int>();
    r.time_test.m = ex.at("m").get<int>();
    r.time_test.n = ex.at("n").get<int>();
    const auto& vd = tt.at("verdicts");
    r.time_test.verdicts = {vd.at("t6").get<bool>(), vd.at("t16").get<bool>(), vd.at("t24").get<bool>(),
                            parse_branch(vd.at("t16_branch").get<std::string>()),
                            parse_branch(vd.at("t24_branch").get<std::string>())};
    const auto& rt = j.at("reserve_test");
    r.reserve_test = {opt(rt.at("r1")), opt(rt.at("r2")), rt.at("pass").get<bool>()};
    r.price_c = j.at("price_c").get<double>();
    r.delta_pct = j.at("delta_pct").get<double>();
    r.temp_equiv_c = j.at("temp_equiv_c").get<double>();
    const auto& m = j.at("meta");
    r.meta.p_v = m.at("p_v").get<double>();
    r.meta.p_r = m.at("p_r").get<double>();
    r.meta.engine_version = m.at("engine_version").get<std::string>();
    r.meta.price_units = m.value("price_units", std::string{});
    r.meta.config.clear();
    if (m.contains("config"))
      for (const auto& [k, v] : m.at("config").items()) r.meta.config[k] = v.get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("report: ") + e.what());
  }
  return r;
}

}  // namespace loadcoint
