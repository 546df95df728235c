#pragma once

#include <array>
#include <cstdio>
#include <exception>
#include <map>
#include <string>

#include "loadcoint/errors.hpp"
#include "loadcoint/features.hpp"
#include "loadcoint/ingest.hpp"
#include "loadcoint/regress.hpp"
#include "loadcoint/report.hpp"
#include "loadcoint/thermo.hpp"
#include "loadcoint/verdict.hpp"

namespace loadcoint {

struct PipelineConfig {
  Method method = Method::exact_ml_ar1;
  LambdaPolicy lambda = LambdaPolicy::grid();
  FeatureConfig features;
};

inline std::string describe_lambda(const LambdaPolicy& p) {
  switch (p.kind) {
    case LambdaPolicy::Kind::grid: return "grid";
    case LambdaPolicy::Kind::off: return "off";
    case LambdaPolicy::Kind::fixed: {
      char buf[48];
      std::snprintf(buf, sizeof buf, "fixed=%.17g", p.value);
      return buf;
    }
  }
  return "?";
}

inline std::map<std::string, std::string> describe(const PipelineConfig& c) {
  return {{"method", method_name(c.method)},
          {"koyck", describe_lambda(c.lambda)},
          {"koyck_order", std::to_string(c.features.koyck_order)},
          {"temp_lag_mode", c.features.temp_mode == TempLagMode::hour ? "hour" : "day"}};
}

struct PipelineResult {
  std::array<ModelForecast, 3> forecasts;
  ThermoState thermo;
  TimeTestResult time_test;
  ReserveTestResult reserve;
  DispatchReport report;
};

/// Everything downstream of estimation: thermodynamics, tests, report.
inline PipelineResult evaluate_forecasts(const SeriesWindow& w, const std::array<ModelForecast, 3>& forecasts,
                                         const CriticalValues& cv, const PipelineConfig& cfg = {}) {
  const ThermoState thermo =
      compute_thermo(forecasts[0].prediction, forecasts[1].prediction, forecasts[2].prediction);
  const TimeTestResult times = time_tests(thermo.theta1, thermo.theta2, thermo.w1, thermo.w2, cv);
  const ReserveTestResult reserve = energy_test(thermo.w1, thermo.w2, thermo.beta);
  DispatchReport report = build_report(w, forecasts, thermo, times, reserve, describe(cfg));
  return {forecasts, thermo, times, reserve, std::move(report)};
}

inline PipelineResult run_pipeline(const SeriesWindow& w, const CriticalValues& cv, const PipelineConfig& cfg = {}) {
  const auto fits = fit_models(w, cfg.method, cfg.lambda, cfg.features);
  return evaluate_forecasts(w, forecast_day(w, fits), cv, cfg);
}

/// 2 for input problems, 3 for numerical degeneracy.
inline ExitCode exit_code_for(const std::exception& e) {
  if (dynamic_cast<const DegeneracyError*>(&e) != nullptr) return ExitCode::degeneracy;
  return ExitCode::validation;
}

}  // namespace loadcoint
