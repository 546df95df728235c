// Command-line front end: forecast, backtest, synth.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "loadcoint/backtest.hpp"
#include "loadcoint/calendar.hpp"
#include "loadcoint/errors.hpp"
#include "loadcoint/ingest.hpp"
#include "loadcoint/pipeline.hpp"
#include "loadcoint/synth.hpp"

namespace {

using namespace loadcoint;

std::vector<Record> read_records(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read '" + path + "'");
  try {
    return parse_csv(in);
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.what());
  }
}

void write_output(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text << std::flush;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << text;
  if (!out) throw InputError("failed writing '" + path + "'");
}

Method parse_method(const std::string& s) {
  if (s == "ols") return Method::ols;
  if (s == "exact-ml") return Method::exact_ml_ar1;
  throw InputError("--method must be ols or exact-ml");
}

LambdaPolicy parse_koyck(const std::string& s) {
  if (s == "grid") return LambdaPolicy::grid();
  if (s == "off") return LambdaPolicy::off();
  if (s.rfind("fixed=", 0) == 0) {
    const std::string num = s.substr(6);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(num, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != num.size() || !(v >= 0.0 && v < 1.0))
      throw InputError("--koyck fixed=<lambda> needs lambda in [0, 1)");
    return LambdaPolicy::fixed(v);
  }
  throw InputError("--koyck must be grid, off or fixed=<lambda>");
}

TempLagMode parse_temp_mode(const std::string& s) {
  if (s == "hour") return TempLagMode::hour;
  if (s == "day") return TempLagMode::day;
  throw InputError("--temp-lag-mode must be hour or day");
}

struct ModelFlags {
  std::string method = "exact-ml";
  std::string koyck = "grid";
  std::string temp_mode = "hour";

  void add_to(CLI::App* app) {
    app->add_option("--method", method, "Estimator: ols | exact-ml")->capture_default_str();
    app->add_option("--koyck", koyck, "Distributed-lag decay: grid | off | fixed=<lambda>")->capture_default_str();
    app->add_option("--temp-lag-mode", temp_mode, "Temperature lag reading: hour | day")->capture_default_str();
  }

  PipelineConfig config() const {
    PipelineConfig c;
    c.method = parse_method(method);
    c.lambda = parse_koyck(koyck);
    c.features.temp_mode = parse_temp_mode(temp_mode);
    return c;
  }
};

int fail(const std::exception& e) {
  const ExitCode code = exit_code_for(e);
  if (code == ExitCode::degeneracy)
    std::cerr << "error: numerical degeneracy: " << e.what() << "\n";
  else
    std::cerr << "error: " << e.what() << "\n";
  return static_cast<int>(code);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Day-ahead load forecasting with load/weather cointegration"};
  app.require_subcommand(1);

  // forecast
  auto* forecast = app.add_subcommand("forecast", "Forecast the target day and write a JSON report");
  std::string history, temp_forecast, target_date, cv_path, out_path = "-";
  ModelFlags forecast_flags;
  forecast->add_option("--history", history, "History CSV (load and temperature)")->required();
  forecast->add_option("--temp-forecast", temp_forecast, "CSV with the target day's temperature forecast")->required();
  forecast->add_option("--target-date", target_date, "Target day, YYYY-MM-DD")->required();
  forecast->add_option("--critical-values", cv_path, "Critical-values JSON")->required();
  forecast->add_option("--out", out_path, "Report path, '-' for standard output")->capture_default_str();
  forecast_flags.add_to(forecast);

  // backtest
  auto* backtest = app.add_subcommand("backtest", "Forecast and score every day of a date range");
  std::string data_path, from_s, to_s, bt_cv_path, report_path;
  unsigned threads = 1;
  ModelFlags backtest_flags;
  backtest->add_option("--data", data_path, "Dataset CSV")->required();
  backtest->add_option("--from", from_s, "First day, YYYY-MM-DD")->required();
  backtest->add_option("--to", to_s, "Last day, YYYY-MM-DD")->required();
  backtest->add_option("--critical-values", bt_cv_path, "Critical-values JSON")->required();
  backtest->add_option("--report", report_path, "Backtest CSV path, '-' for standard output")->required();
  backtest->add_option("--threads", threads, "Worker threads, 0 = all cores")->capture_default_str();
  backtest_flags.add_to(backtest);

  // synth
  auto* synth = app.add_subcommand("synth", "Write a deterministic synthetic dataset");
  SynthParams sp;
  std::string synth_out = "-", start_s = format_date(sp.start_date), generator = "weather";
  synth->add_option("--days", sp.days, "Number of days")->required();
  synth->add_option("--seed", sp.seed, "Random seed")->required();
  synth->add_option("--out", synth_out, "CSV path, '-' for standard output")->capture_default_str();
  synth->add_option("--start-date", start_s, "First day")->capture_default_str();
  synth->add_option("--generator", generator, "weather | model-a")->capture_default_str();
  synth->add_option("--base-mw", sp.base_mw)->capture_default_str();
  synth->add_option("--peak-amp-mw", sp.peak_amp_mw)->capture_default_str();
  synth->add_option("--temp-sensitivity", sp.temp_sensitivity_pct_per_2c, "Load change in % per +2 degC")
      ->capture_default_str();
  synth->add_option("--ar-rho", sp.ar_rho)->capture_default_str();
  synth->add_option("--noise-sd-mw", sp.noise_sd_mw)->capture_default_str();
  synth->add_option("--temp-mean-c", sp.temp_mean_c)->capture_default_str();
  synth->add_option("--temp-ref-c", sp.temp_ref_c)->capture_default_str();
  synth->add_option("--temp-diurnal-amp-c", sp.temp_diurnal_amp_c)->capture_default_str();
  synth->add_option("--temp-day-sd-c", sp.temp_day_sd_c)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return static_cast<int>(ExitCode::validation);
  }

  try {
    if (forecast->parsed()) {
      const PipelineConfig cfg = forecast_flags.config();
      const Date target = parse_date(target_date);
      const CriticalValues cv = load_critical_values(cv_path);
      // History supplies days before the target, the forecast file the target day.
      std::vector<Record> records;
      for (const auto& r : read_records(history))
        if (days_between(r.date, target) > 0) records.push_back(r);
      for (const auto& r : read_records(temp_forecast))
        if (r.date == target) records.push_back(r);
      const SeriesWindow w = assemble_window(records, target);
      const auto result = run_pipeline(w, cv, cfg);
      if (!result.reserve.diagnostic.empty())
        std::cerr << "warning: energy test: " << result.reserve.diagnostic << "\n";
      write_output(out_path, serialize_report(result.report));
      return 0;
    }

    if (backtest->parsed()) {
      BacktestConfig cfg;
      cfg.pipeline = backtest_flags.config();
      cfg.threads = threads;
      const Date from = parse_date(from_s);
      const Date to = parse_date(to_s);
      if (days_between(from, to) < 0) throw InputError("--from is after --to");
      cfg.critical_values = load_critical_values(bt_cv_path);
      const auto records = read_records(data_path);
      const auto result = run_backtest(records, from, to, cfg);
      write_output(report_path, backtest_csv(result));
      std::cerr << "scored " << (result.rows.size() - static_cast<std::size_t>(result.excluded_days))
                << " days, excluded " << result.excluded_days << "\n";
      return 0;
    }

    if (synth->parsed()) {
      sp.start_date = parse_date(start_s);
      if (generator == "weather")
        sp.generator = Generator::weather;
      else if (generator == "model-a")
        sp.generator = Generator::model_a;
      else
        throw InputError("--generator must be weather or model-a");
      const auto data = synth_dataset(sp);
      write_output(synth_out, serialize_csv(data.records));
      return 0;
    }
  } catch (const std::exception& e) {
    return fail(e);
  }
  return static_cast<int>(ExitCode::validation);
}
