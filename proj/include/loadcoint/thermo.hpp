#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <span>
#include <utility>

#include "loadcoint/errors.hpp"
#include "loadcoint/ingest.hpp"

namespace loadcoint {

/// Additive constant of the daily work.
inline constexpr double kWorkOffset = 11.608;

inline constexpr double kDegenerateSeriesTol = 1e-12;
inline constexpr double kRecoherenceTol = 1e-12;
inline constexpr double kSigmaThetaTol = 1e-9;

inline constexpr double kHalfPi = std::numbers::pi / 2.0;

inline HourValues demean(const HourValues& v) {
  double sum = 0.0;
  for (double x : v) sum += x;
  const double mean = sum / kHours;
  HourValues out{};
  for (int i = 0; i < kHours; ++i) out[i] = v[i] - mean;
  return out;
}

inline double hour_mean_product(const HourValues& a, const HourValues& b) {
  double s = 0.0;
  for (int i = 0; i < kHours; ++i) s += a[i] * b[i];
  return s / kHours;
}

/// Cointegration angle of two centred profiles, in [0, pi/2].
inline double cointegration_angle(const HourValues& p, const HourValues& q) {
  const double pq = hour_mean_product(p, q);
  const double pp = hour_mean_product(p, p);
  const double qq = hour_mean_product(q, q);
  if (pp <= kDegenerateSeriesTol && qq <= kDegenerateSeriesTol)
    throw DegeneracyError(eq::angle, "degenerate series: both centred profiles vanish");
  return std::abs(0.5 * std::atan2(2.0 * pq, pp - qq));
}

/// arccos(exp(-(pi/2) theta)).
inline double chi_of(double theta) { return std::acos(std::exp(-kHalfPi * theta)); }

/// -u ln u - (1-u) ln(1-u), with 0 ln 0 = 0.
inline double binary_entropy(double u) {
  auto term = [](double x) { return x > 0.0 ? -x * std::log(x) : 0.0; };
  return term(u) + term(1.0 - u);
}

struct Entropies {
  double chi = 0.0;
  /// System entropy, increasing in theta.
  double s = 0.0;
  /// Environment entropy, decreasing in theta.
  double sp = 0.0;
};

inline Entropies entropies(double theta) {
  if (!(theta >= 0.0) || !std::isfinite(theta)) throw InputError("entropy angle must be finite and >= 0");
  const double c = std::exp(-kHalfPi * theta);
  const double sin_chi = std::sqrt(std::max(0.0, 1.0 - c * c));
  return {std::acos(c), binary_entropy((1.0 - c) / 2.0), binary_entropy((1.0 - sin_chi) / 2.0)};
}

struct CoherenceDeltas {
  double delta_s = 0.0;   // recoherence
  double delta_sp = 0.0;  // decoherence
};

inline CoherenceDeltas coherence_deltas(double theta1, double theta2) {
  const auto e1 = entropies(theta1);
  const auto e2 = entropies(theta2);
  return {e1.s - e2.s, e1.sp - e2.sp};
}

inline double inverse_temperature(double delta_s, double delta_sp) {
  if (std::abs(delta_s) <= kRecoherenceTol)
    throw DegeneracyError(eq::inverse_temperature, "degenerate recoherence: |dS| <= 1e-12");
  return -delta_sp / delta_s;
}

struct PeakBounds {
  double p1_am = 0.0;
  double p2_am = 0.0;
  double p1_pm = 0.0;
  double p2_pm = 0.0;
};

/// Per half-day: the smallest and largest of the three models' maxima.
inline PeakBounds peak_bounds(const DayProfile& a, const DayProfile& b, const DayProfile& c) {
  auto seg_max = [](const DayProfile& p, int from, int to) {
    double m = p.at(from);
    for (int h = from + 1; h <= to; ++h) m = std::max(m, p.at(h));
    return m;
  };
  const std::array<double, 3> am = {seg_max(a, 1, 12), seg_max(b, 1, 12), seg_max(c, 1, 12)};
  const std::array<double, 3> pm = {seg_max(a, 13, 24), seg_max(b, 13, 24), seg_max(c, 13, 24)};
  return {*std::min_element(am.begin(), am.end()), *std::max_element(am.begin(), am.end()),
          *std::min_element(pm.begin(), pm.end()), *std::max_element(pm.begin(), pm.end())};
}

struct DailyWork {
  double w1 = 0.0;
  double w2 = 0.0;
};

inline DailyWork daily_work(const PeakBounds& pk, double beta) {
  if (!(pk.p1_am > 0.0 && pk.p2_am > 0.0 && pk.p1_pm > 0.0 && pk.p2_pm > 0.0))
    throw DegeneracyError(eq::work, "peak bounds must be positive");
  if (beta == 0.0) throw DegeneracyError(eq::work, "inverse temperature is zero");
  return {kWorkOffset + (std::log(pk.p1_pm) - std::log(pk.p1_am)) / beta,
          kWorkOffset + (std::log(pk.p2_pm) - std::log(pk.p2_am)) / beta};
}

struct EvolutionMoments {
  double mu = 0.0;
  double sigma = 0.0;
};

/// Mean and spread of the evolution behaviour. cosh x - sinh x is taken as
/// exp(-x), which is exact and avoids cancellation.
inline EvolutionMoments evolution_moments(double theta1, double theta2, double w1, double w2) {
  if (!(w1 > 0.0) || !(w2 > 0.0)) throw DegeneracyError(eq::moments, "work must be positive under the square root");
  if (theta2 <= kSigmaThetaTol) throw DegeneracyError(eq::moments, "sigma singularity: theta2 <= 1e-9");
  const double x1 = kHalfPi * theta1;
  const double x2 = kHalfPi * theta2;
  const double mu = std::exp(-x1) / std::sqrt(w1);
  const double sigma = (std::exp(-x2) / std::sqrt(w2)) / (std::exp(-2.0 * x2) + 1.0 / (8.0 * w2 * x2 * x2));
  return {mu, sigma};
}

struct ThermoState {
  double theta1 = 0.0;
  double theta2 = 0.0;
  double chi1 = 0.0;
  double chi2 = 0.0;
  double s_theta1 = 0.0;
  double s_theta2 = 0.0;
  double sp_theta1 = 0.0;
  double sp_theta2 = 0.0;
  double delta_s = 0.0;
  double delta_sp = 0.0;
  double beta = 0.0;
  PeakBounds peaks;
  double w1 = 0.0;
  double w2 = 0.0;
  double mu = 0.0;
  double sigma = 0.0;
};

/// Full thermodynamic layer for the three model predictions (A, B, C).
/// Angle 1 pairs A with B, angle 2 pairs C with B.
inline ThermoState compute_thermo(const DayProfile& a, const DayProfile& b, const DayProfile& c) {
  ThermoState st;
  const auto pa = demean(a.values());
  const auto pb = demean(b.values());
  const auto pc = demean(c.values());
  st.theta1 = cointegration_angle(pa, pb);
  st.theta2 = cointegration_angle(pc, pb);
  const auto e1 = entropies(st.theta1);
  const auto e2 = entropies(st.theta2);
  st.chi1 = e1.chi;
  st.chi2 = e2.chi;
  st.s_theta1 = e1.s;
  st.s_theta2 = e2.s;
  st.sp_theta1 = e1.sp;
  st.sp_theta2 = e2.sp;
  st.delta_s = e1.s - e2.s;
  st.delta_sp = e1.sp - e2.sp;
  st.beta = inverse_temperature(st.delta_s, st.delta_sp);
  st.peaks = peak_bounds(a, b, c);
  const auto work = daily_work(st.peaks, st.beta);
  st.w1 = work.w1;
  st.w2 = work.w2;
  const auto m = evolution_moments(st.theta1, st.theta2, st.w1, st.w2);
  st.mu = m.mu;
  st.sigma = m.sigma;
  return st;
}

}  // namespace loadcoint
