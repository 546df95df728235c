#include <gtest/gtest.h>

#include <nlohmann/json.hpp>

#include <cmath>

#include "loadcoint/pipeline.hpp"
#include "loadcoint/report.hpp"
#include "loadcoint/synth.hpp"
#include "test_support.hpp"

namespace loadcoint {
namespace {

using testing::ymd;

const Date kDay = ymd(2004, 5, 10);
const CriticalValues kStub{5.0, 4.0, 12.0, 10.0, 21.0};

DayProfile flat(double v, Date d = kDay) {
  HourValues x{};
  x.fill(v);
  return DayProfile(d, x, ProfileKind::load_mw);
}

TEST(Price, ReflectsSigmaBelowOne) {
  EXPECT_DOUBLE_EQ(price(0.5, 1.4), 7.0);
  EXPECT_DOUBLE_EQ(price(0.5, 0.6), 7.0);
  EXPECT_DOUBLE_EQ(price(2.0, 1.0), 20.0);
  EXPECT_THROW(price(1.0, 0.0), DegeneracyError);
}

TEST(ErrorReduction, Values) {
  EXPECT_DOUBLE_EQ(error_reduction(kMuNormalisation, 1.0, 0.0), 10.0);
  // Frozen from a 40-digit evaluation.
  const double mu = evolution_moments(0.0, 0.5, 11.608, 12.0).mu;
  EXPECT_NEAR(error_reduction(11.608, mu, 0.1), 18.074620619562375, 1e-12);
}

TEST(TempEquivalence, Values) {
  EXPECT_NEAR(temp_equivalence(1.5), 0.7, 0.05);
  EXPECT_NEAR(temp_equivalence(1.5), 0.65217391304347826, 1e-15);
  EXPECT_EQ(temp_equivalence(4.6), 2.0);
}

TEST(Mmre, ConstantOffset) {
  const std::vector<DayProfile> actual = {flat(1000.0)};
  const std::vector<DayProfile> fc = {flat(990.0)};
  EXPECT_DOUBLE_EQ(mmre(actual, fc), 1.0);
  EXPECT_EQ(mmre(actual, actual), 0.0);
}

TEST(Mmre, UsesDailyPeak) {
  HourValues a{};
  a.fill(500.0);
  a[10] = 1000.0;
  HourValues f = a;
  for (double& x : f) x += 10.0;
  const std::vector<DayProfile> actual = {DayProfile(kDay, a, ProfileKind::load_mw)};
  const std::vector<DayProfile> fc = {DayProfile(kDay, f, ProfileKind::load_mw)};
  EXPECT_DOUBLE_EQ(mmre(actual, fc), 1.0);
}

TEST(Mmre, Errors) {
  const std::vector<DayProfile> none;
  EXPECT_THROW(mmre(none, none), InputError);
  const std::vector<DayProfile> a = {flat(1000.0)};
  const std::vector<DayProfile> b = {flat(1000.0, ymd(2004, 5, 11))};
  EXPECT_THROW(mmre(a, b), InputError);
  const std::vector<DayProfile> two = {flat(1.0), flat(2.0)};
  EXPECT_THROW(mmre(a, two), InputError);
}

TEST(MonthlyMean, GroupsByMonth) {
  const auto m = monthly_mean({{ymd(2004, 4, 30), 1.0}, {ymd(2004, 5, 1), 2.0}, {ymd(2004, 5, 2), 4.0}});
  ASSERT_EQ(m.size(), 2u);
  EXPECT_EQ(m.at("2004-04"), 1.0);
  EXPECT_EQ(m.at("2004-05"), 3.0);
}

PipelineResult sample_run(std::uint64_t seed = 3) {
  SynthParams p;
  p.days = 12;
  p.seed = seed;
  const auto w = synth_window(p).first;
  PipelineConfig cfg;
  cfg.method = Method::ols;
  return run_pipeline(w, kStub, cfg);
}

TEST(Report, SchemaKeysInOrder) {
  const auto j = nlohmann::ordered_json::parse(serialize_report(sample_run().report));
  std::vector<std::string> keys;
  for (const auto& [k, v] : j.items()) keys.push_back(k);
  EXPECT_EQ(keys, (std::vector<std::string>{"target_date", "forecasts", "ensemble", "thermo", "time_test",
                                            "reserve_test", "price_c", "delta_pct", "temp_equiv_c", "meta"}));
  EXPECT_EQ(j["forecasts"]["a"].size(), 24u);
  EXPECT_EQ(j["ensemble"].size(), 24u);
  for (const char* k : {"theta1", "theta2", "beta", "w1", "w2", "mu", "sigma", "delta_s", "delta_sp"})
    EXPECT_TRUE(j["thermo"][k].is_number()) << k;
  for (const char* k : {"t6_1", "t6_2", "t16", "t24"}) EXPECT_TRUE(j["time_test"][k].is_number()) << k;
  for (const char* k : {"i", "k", "m", "n"}) EXPECT_TRUE(j["time_test"]["exponents"][k].is_number_integer()) << k;
  EXPECT_TRUE(j["reserve_test"]["pass"].is_boolean());
  EXPECT_EQ(j["meta"]["p_v"].get<double>(), 0.8803);
  EXPECT_EQ(j["meta"]["p_r"].get<double>(), 0.96806);
  EXPECT_EQ(j["meta"]["engine_version"], "1.0.0");
  EXPECT_EQ(j["meta"]["config"]["method"], "ols");
}

TEST(Report, DerivedFieldsFollowThermo) {
  const auto run = sample_run();
  const auto& r = run.report;
  EXPECT_EQ(r.price_c, price(run.thermo.beta, run.thermo.sigma));
  EXPECT_EQ(r.delta_pct, error_reduction(run.thermo.w1, run.thermo.mu, run.thermo.delta_s));
  EXPECT_EQ(r.temp_equiv_c, r.delta_pct * 2.0 / 4.6);
  EXPECT_EQ(r.target_date, ymd(2004, 4, 12));
}

TEST(Report, RoundTripIsExact) {
  for (std::uint64_t seed : {3, 4, 5, 6}) {
    const auto r = sample_run(seed).report;
    const auto text = serialize_report(r);
    const auto back = parse_report(text);
    EXPECT_EQ(back, r);
    EXPECT_EQ(serialize_report(back), text);
  }
}

TEST(Report, SeventeenSignificantDigits) {
  DispatchReport r = sample_run().report;
  r.price_c = 0.1;
  r.delta_pct = 1.0 / 3.0;
  const auto text = serialize_report(r);
  EXPECT_NE(text.find("\"price_c\": 0.10000000000000001"), std::string::npos);
  EXPECT_NE(text.find("\"delta_pct\": 0.33333333333333331"), std::string::npos);
  EXPECT_EQ(text.find("nan"), std::string::npos);
}

TEST(Report, AbsentReserveIsNull) {
  DispatchReport r = sample_run().report;
  r.reserve_test.r1.reset();
  const auto j = nlohmann::json::parse(serialize_report(r));
  EXPECT_TRUE(j["reserve_test"]["r1"].is_null());
  EXPECT_EQ(parse_report(serialize_report(r)), r);
}

TEST(Report, ParseRejectsBadInput) {
  EXPECT_THROW(parse_report("{}"), InputError);
  EXPECT_THROW(parse_report("not json"), InputError);
}

}  // namespace
}  // namespace loadcoint
