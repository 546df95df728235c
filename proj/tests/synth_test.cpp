#include <gtest/gtest.h>

#include "loadcoint/synth.hpp"
#include "test_support.hpp"

namespace loadcoint {
namespace {

SynthParams flat_params() {
  SynthParams p;
  p.days = 12;
  p.noise_sd_mw = 0.0;
  p.peak_amp_mw = 0.0;
  p.temp_diurnal_amp_c = 0.0;
  p.temp_day_sd_c = 0.0;
  p.temp_mean_c = p.temp_ref_c;
  return p;
}

TEST(Synth, DegenerateGeneratorIsFlatBase) {
  const auto data = synth_dataset(flat_params());
  ASSERT_EQ(data.records.size(), 12u * 24u);
  for (const auto& r : data.records) {
    ASSERT_TRUE(r.load_mw.has_value());
    EXPECT_EQ(*r.load_mw, 4000.0);
  }
}

TEST(Synth, SameSeedIsBitIdentical) {
  SynthParams p;
  p.seed = 99;
  const auto a = synth_window(p);
  const auto b = synth_window(p);
  EXPECT_EQ(a.first, b.first);
  EXPECT_EQ(serialize_csv(synth_dataset(p).records), serialize_csv(synth_dataset(p).records));
  p.seed = 100;
  EXPECT_NE(serialize_csv(synth_dataset(p).records), serialize_csv(synth_dataset(SynthParams{}).records));
}

// Shifting every temperature by +2 degC multiplies each noiseless load by the
// growth factor, so mean loads differ by exactly the configured percentage.
TEST(Synth, TwoDegreesGivesConfiguredPercent) {
  SynthParams p;
  p.noise_sd_mw = 0.0;
  p.seed = 5;
  auto q = p;
  q.temp_mean_c += 2.0;
  const auto a = synth_dataset(p).records;
  const auto b = synth_dataset(q).records;
  ASSERT_EQ(a.size(), b.size());
  double ma = 0.0;
  double mb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_NEAR(b[i].temp_c - a[i].temp_c, 2.0, 1e-12);
    ma += *a[i].load_mw;
    mb += *b[i].load_mw;
  }
  EXPECT_NEAR((mb - ma) / ma * 100.0, 4.6, 1e-9);
}

TEST(Synth, PeaksSitInIndicatorHours) {
  auto p = flat_params();
  p.peak_amp_mw = 800.0;
  const auto recs = synth_dataset(p).records;
  int am_peak = 1;
  int pm_peak = 13;
  for (int h = 1; h <= 24; ++h) {
    if (*recs[h - 1].load_mw > *recs[am_peak - 1].load_mw && h <= 12) am_peak = h;
    if (*recs[h - 1].load_mw > *recs[pm_peak - 1].load_mw && h > 12) pm_peak = h;
  }
  EXPECT_GE(am_peak, 9);
  EXPECT_LE(am_peak, 11);
  EXPECT_GE(pm_peak, 19);
  EXPECT_LE(pm_peak, 21);
}

TEST(Synth, ModelAGeneratorFollowsRecursion) {
  SynthParams p;
  p.generator = Generator::model_a;
  p.noise_sd_mw = 0.0;
  p.days = 20;
  const auto data = synth_dataset(p);
  const auto& a = data.truth.coefficients;
  auto load = [&](int day, int h) { return *data.records[static_cast<std::size_t>(day * 24 + h - 1)].load_mw; };
  for (int d = 7; d < p.days; ++d)
    for (int h = 1; h <= 24; ++h) {
      const double p32 = h <= 12 ? load(d - 2, h + 12) : load(d - 1, h - 12);
      double expect = a.at("a0") + a.at("a1") * load(d - 1, h) + a.at("a2") * p32 + a.at("a3") * load(d - 7, h);
      if (h == 9) expect += a.at("a4");
      if (h == 10) expect += a.at("a5");
      if (h == 19) expect += a.at("a6");
      if (h == 20) expect += a.at("a7");
      if (h == 11) expect += a.at("a8");
      if (h == 21) expect += a.at("a9");
      EXPECT_NEAR(load(d, h), expect, 1e-9 * expect);
    }
}

TEST(Synth, ParameterValidation) {
  SynthParams p;
  p.days = 0;
  EXPECT_THROW(synth_dataset(p), InputError);
  p = {};
  p.ar_rho = 1.0;
  EXPECT_THROW(synth_dataset(p), InputError);
  p = {};
  p.noise_sd_mw = -1.0;
  EXPECT_THROW(synth_dataset(p), InputError);
  p = {};
  p.days = 9;
  EXPECT_THROW(synth_window(p), InputError);
}

}  // namespace
}  // namespace loadcoint
