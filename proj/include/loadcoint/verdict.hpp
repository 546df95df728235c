#pragma once

#include <nlohmann/json.hpp>

#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>

#include "loadcoint/errors.hpp"
#include "loadcoint/thermo.hpp"

namespace loadcoint {

/// Seasonal-cointegration critical values, always supplied from outside.
struct CriticalValues {
  double lvl1_5pct = 0.0;
  double lvl1_10pct = 0.0;
  double lvl2_5pct = 0.0;
  double lvl2_10pct = 0.0;
  double lvl3_5pct = 0.0;

  bool operator==(const CriticalValues&) const = default;
};

/// Object with exactly the five named finite numbers.
inline CriticalValues parse_critical_values(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(std::string("critical values: invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw InputError("critical values: expected a JSON object");
  static constexpr const char* keys[] = {"lvl1_5pct", "lvl1_10pct", "lvl2_5pct", "lvl2_10pct", "lvl3_5pct"};
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (const char* k : keys) known = known || key == k;
    if (!known) throw InputError("critical values: unknown key '" + key + "'");
  }
  auto get = [&](const char* key) {
    if (!j.contains(key)) throw InputError(std::string("critical values: missing key '") + key + "'");
    const auto& v = j.at(key);
    if (!v.is_number() || !std::isfinite(v.get<double>()))
      throw InputError(std::string("critical values: '") + key + "' must be a finite number");
    return v.get<double>();
  };
  return {get("lvl1_5pct"), get("lvl1_10pct"), get("lvl2_5pct"), get("lvl2_10pct"), get("lvl3_5pct")};
}

inline CriticalValues load_critical_values(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read critical values file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_critical_values(ss.str());
}

struct ScaledTime {
  double value = 0.0;
  int exponent = 0;
};

inline constexpr int kExponentBound = 64;

inline double scale_by(double raw, double base, int e) {
  return base == 2.0 ? std::ldexp(raw, e) : std::pow(base, e) * raw;
}

/// The integer e with base^e * raw in (lo, hi]. With hi / lo == base the
/// exponent is unique.
inline ScaledTime scaled_time(double raw, double base, double lo, double hi) {
  if (!(raw > 0.0) || !std::isfinite(raw))
    throw DegeneracyError(eq::times, "no exponent: raw statistic must be positive and finite");
  const double guess = std::ceil(std::log(lo / raw) / std::log(base));
  if (std::isfinite(guess) && std::abs(guess) <= kExponentBound + 2) {
    const int g = static_cast<int>(guess);
    for (int e : {g, g - 1, g + 1, g - 2, g + 2}) {
      if (e < -kExponentBound || e > kExponentBound) continue;
      const double t = scale_by(raw, base, e);
      if (t > lo && t <= hi) return {t, e};
    }
  }
  throw DegeneracyError(eq::times, "no exponent in [-64, 64] scales the statistic into its window");
}

/// Scaled into (4.5, 9]: the largest power of two keeping the time <= 9.
inline ScaledTime scaled_time6(double raw) { return scaled_time(raw, 2.0, 4.5, 9.0); }
inline ScaledTime scaled_time16(double raw) { return scaled_time(raw, 2.0, 10.0, 20.0); }
inline ScaledTime scaled_time24(double raw) { return scaled_time(raw, 1.5, 20.0, 30.0); }

struct RawTimes {
  double t6_1 = 0.0;
  double t6_2 = 0.0;
  double t16 = 0.0;
  double t24 = 0.0;
};

inline constexpr double kTanGuard = 1e-6;

inline RawTimes raw_times(double theta1, double theta2, double w1, double w2) {
  const double x1 = kHalfPi * theta1;
  const double x2 = kHalfPi * theta2;
  for (double x : {x1, x2})
    if (std::abs(x - kHalfPi) < kTanGuard) throw DegeneracyError(eq::times, "tan singularity: angle too close to 1");
  return {w1 * x1 * std::tanh(x1), w2 * x2 * std::tanh(x2), w2 * x2 * std::tan(x2), w1 * x1 * std::tan(x1)};
}

enum class CriticalBranch { level1_5pct, level1_10pct, level2_5pct, level2_10pct, level3_5pct };

inline const char* branch_name(CriticalBranch b) {
  switch (b) {
    case CriticalBranch::level1_5pct: return "lvl1_5pct";
    case CriticalBranch::level1_10pct: return "lvl1_10pct";
    case CriticalBranch::level2_5pct: return "lvl2_5pct";
    case CriticalBranch::level2_10pct: return "lvl2_10pct";
    case CriticalBranch::level3_5pct: return "lvl3_5pct";
  }
  return "?";
}

inline CriticalBranch parse_branch(const std::string& s) {
  for (auto b : {CriticalBranch::level1_5pct, CriticalBranch::level1_10pct, CriticalBranch::level2_5pct,
                 CriticalBranch::level2_10pct, CriticalBranch::level3_5pct})
    if (s == branch_name(b)) return b;
  throw InputError("unknown critical-value branch '" + s + "'");
}

struct TimeVerdicts {
  bool t6 = false;
  bool t16 = false;
  bool t24 = false;
  CriticalBranch t16_branch = CriticalBranch::level2_5pct;
  CriticalBranch t24_branch = CriticalBranch::level3_5pct;

  bool operator==(const TimeVerdicts&) const = default;
};

struct TimeTestResult {
  double t6_1 = 0.0;
  double t6_2 = 0.0;
  double t16 = 0.0;
  double t24 = 0.0;
  int i = 0;
  int k = 0;
  int m = 0;
  int n = 0;
  TimeVerdicts verdicts;

  bool operator==(const TimeTestResult&) const = default;
};

/// Critical-value checks on already scaled times.
inline TimeVerdicts judge_times(double t6_1, double t6_2, double t16, double t24, const CriticalValues& cv) {
  TimeVerdicts v;
  v.t6 = 2.0 * std::min(t6_1, t6_2) > cv.lvl1_5pct;
  if (t16 >= 16.0) {
    v.t16_branch = CriticalBranch::level2_5pct;
    v.t16 = t16 > cv.lvl2_5pct;
  } else {
    v.t16_branch = CriticalBranch::level1_10pct;
    v.t16 = t16 > cv.lvl1_10pct;
  }
  if (t24 >= 24.0) {
    v.t24_branch = CriticalBranch::level3_5pct;
    v.t24 = t24 > cv.lvl3_5pct;
  } else {
    v.t24_branch = CriticalBranch::level2_10pct;
    v.t24 = t24 > cv.lvl2_10pct;
  }
  return v;
}

inline TimeTestResult time_tests(double theta1, double theta2, double w1, double w2, const CriticalValues& cv) {
  const auto raw = raw_times(theta1, theta2, w1, w2);
  const auto s61 = scaled_time6(raw.t6_1);
  const auto s62 = scaled_time6(raw.t6_2);
  const auto s16 = scaled_time16(raw.t16);
  const auto s24 = scaled_time24(raw.t24);
  TimeTestResult r{s61.value, s62.value, s16.value, s24.value, s61.exponent, s62.exponent, s16.exponent,
                   s24.exponent, {}};
  r.verdicts = judge_times(r.t6_1, r.t6_2, r.t16, r.t24, cv);
  return r;
}

/// exp(W0 beta) - sqrt(2 / (1 + sqrt(W0))). Throws for W0 < 0.
inline double reserve(double w0, double beta) {
  if (w0 < 0.0) throw DegeneracyError(eq::reserve, "negative work offset");
  return std::exp(w0 * beta) - std::sqrt(2.0 / (1.0 + std::sqrt(w0)));
}

struct ReserveTestResult {
  /// Absent when the work offset is negative.
  std::optional<double> r1;
  std::optional<double> r2;
  double w0_1 = 0.0;
  double w0_2 = 0.0;
  bool pass = false;
  std::string diagnostic;
};

/// Passes iff both reserves are positive. A negative work offset fails the
/// test with a diagnostic instead of throwing.
inline ReserveTestResult energy_test(double w1, double w2, double beta) {
  ReserveTestResult r;
  r.w0_1 = w1 - kWorkOffset;
  r.w0_2 = w2 - kWorkOffset;
  if (r.w0_1 >= 0.0) r.r1 = reserve(r.w0_1, beta);
  if (r.w0_2 >= 0.0) r.r2 = reserve(r.w0_2, beta);
  if (!r.r1 || !r.r2) r.diagnostic = "negative work offset: reserve undefined";
  r.pass = r.r1 && r.r2 && *r.r1 > 0.0 && *r.r2 > 0.0;
  return r;
}

}  // namespace loadcoint
