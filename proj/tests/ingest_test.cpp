#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "loadcoint/ingest.hpp"
#include "test_support.hpp"

namespace loadcoint {
namespace {

using testing::make_window;
using testing::window_records;
using testing::ymd;

std::string error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const InputError& e) {
    return e.what();
  }
  return {};
}

TEST(ParseCsv, SingleRow) {
  const auto recs = parse_csv("date,hour,load_mw,temp_c\n2004-05-01,1,4200.5,11.2\n");
  ASSERT_EQ(recs.size(), 1u);
  EXPECT_EQ(recs[0].date, ymd(2004, 5, 1));
  EXPECT_EQ(recs[0].hour, 1);
  ASSERT_TRUE(recs[0].load_mw.has_value());
  EXPECT_DOUBLE_EQ(*recs[0].load_mw, 4200.5);
  EXPECT_DOUBLE_EQ(recs[0].temp_c, 11.2);
}

TEST(ParseCsv, EmptyLoadIsForecastRow) {
  const auto recs = parse_csv("date,hour,load_mw,temp_c\n2004-05-01,7,,18.5\n");
  ASSERT_EQ(recs.size(), 1u);
  EXPECT_FALSE(recs[0].load_mw.has_value());
}

TEST(ParseCsv, HourOutOfRange) {
  const auto msg = error_of([] { parse_csv("date,hour,load_mw,temp_c\n2004-05-01,25,4000,10\n"); });
  EXPECT_NE(msg.find("hour out of range"), std::string::npos) << msg;
  EXPECT_NE(msg.find("line 2"), std::string::npos) << msg;
}

TEST(ParseCsv, DuplicateKeyIsNamed) {
  const auto msg = error_of([] {
    parse_csv("date,hour,load_mw,temp_c\n2004-05-01,3,4000,10\n2004-05-01,4,4000,10\n2004-05-01,3,4100,11\n");
  });
  EXPECT_NE(msg.find("duplicate key (2004-05-01, 3)"), std::string::npos) << msg;
  EXPECT_NE(msg.find("line 4"), std::string::npos) << msg;
}

TEST(ParseCsv, MalformedRowsReportLine) {
  EXPECT_NE(error_of([] { parse_csv("date,hour,load_mw,temp_c\n2004-05-01,1,4000\n"); }).find("line 2"),
            std::string::npos);
  EXPECT_NE(error_of([] { parse_csv("date,hour,load_mw,temp_c\n\n2004-13-01,1,4000,1\n"); }).find("line 3"),
            std::string::npos);
  EXPECT_THROW(parse_csv("date,hour,load_mw,temp_c\n2004-05-01,1,abc,1\n"), InputError);
  EXPECT_THROW(parse_csv("date,hour,load_mw,temp_c\n2004-05-01,1,nan,1\n"), InputError);
  EXPECT_THROW(parse_csv("date,hour,load_mw,temp_c\n2004-05-01,x,4000,1\n"), InputError);
  EXPECT_THROW(parse_csv("hour,date,load_mw,temp_c\n"), InputError);
  EXPECT_THROW(parse_csv(""), InputError);
}

TEST(ParseCsv, RoundTripIsIdentity) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> load(1.0, 1e5);
  std::uniform_real_distribution<double> temp(-40.0, 45.0);
  std::bernoulli_distribution absent(0.2);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Record> recs;
    const Date start = add_days(ymd(2000, 1, 1), static_cast<int>(rng() % 3000));
    const int n = 1 + static_cast<int>(rng() % 60);
    for (int i = 0; i < n; ++i) {
      Record r{add_days(start, i / 24), i % 24 + 1, std::nullopt, temp(rng)};
      if (!absent(rng)) r.load_mw = load(rng);
      recs.push_back(r);
    }
    std::shuffle(recs.begin(), recs.end(), rng);
    EXPECT_EQ(parse_csv(serialize_csv(recs)), recs);
  }
}

TEST(DayProfile, RejectsNonPositiveLoadAndNonFinite) {
  HourValues v{};
  v.fill(100.0);
  EXPECT_NO_THROW(DayProfile(ymd(2004, 1, 1), v, ProfileKind::load_mw));
  v[5] = 0.0;
  EXPECT_THROW(DayProfile(ymd(2004, 1, 1), v, ProfileKind::load_mw), InputError);
  EXPECT_NO_THROW(DayProfile(ymd(2004, 1, 1), v, ProfileKind::temp_c));
  v[5] = std::numeric_limits<double>::infinity();
  EXPECT_THROW(DayProfile(ymd(2004, 1, 1), v, ProfileKind::temp_c), InputError);
}

const Date kTarget = ymd(2004, 5, 10);

double some_load(int off, int h) { return 4000.0 + 10.0 * off + 30.0 * h; }
double some_temp(int off, int h) { return 10.0 + 0.5 * off + 0.1 * h; }

TEST(AssembleWindow, CompleteRecordSet) {
  const auto w = make_window(kTarget, some_load, some_temp);
  EXPECT_EQ(w.target_date(), kTarget);
  ASSERT_EQ(w.load_history().size(), 9u);
  EXPECT_EQ(w.load(-9).date(), ymd(2004, 5, 1));
  EXPECT_EQ(w.load(-1).date(), ymd(2004, 5, 9));
  EXPECT_DOUBLE_EQ(w.load(-4).at(13), some_load(-4, 13));
  EXPECT_DOUBLE_EQ(w.temperature(0).at(24), some_temp(0, 24));
  EXPECT_THROW(w.load(0), InputError);
  EXPECT_THROW(w.temperature(-10), InputError);
}

TEST(AssembleWindow, GapIsNamed) {
  auto recs = window_records(kTarget, some_load, some_temp);
  std::erase_if(recs, [](const Record& r) { return r.date == ymd(2004, 5, 6) && r.hour == 13; });
  const auto msg = error_of([&] { assemble_window(recs, kTarget); });
  EXPECT_NE(msg.find("(2004-05-06, 13)"), std::string::npos) << msg;
}

TEST(AssembleWindow, NonPositiveLoad) {
  auto recs = window_records(kTarget, some_load, some_temp);
  recs[30].load_mw = 0.0;
  const auto msg = error_of([&] { assemble_window(recs, kTarget); });
  EXPECT_NE(msg.find("non-positive load"), std::string::npos) << msg;
}

TEST(AssembleWindow, MissingHistoryLoadOrForecastTemperature) {
  auto recs = window_records(kTarget, some_load, some_temp);
  recs[3].load_mw.reset();
  EXPECT_THROW(assemble_window(recs, kTarget), InputError);
  recs = window_records(kTarget, some_load, some_temp);
  recs.pop_back();  // last forecast hour
  const auto msg = error_of([&] { assemble_window(recs, kTarget); });
  EXPECT_NE(msg.find("(2004-05-10, 24)"), std::string::npos) << msg;
}

TEST(AssembleWindow, IgnoresDaysOutsideTheWindow) {
  auto recs = window_records(kTarget, some_load, some_temp);
  recs.push_back({ymd(2004, 4, 1), 1, 5.0, 1.0});
  recs.push_back({ymd(2004, 5, 11), 1, 5.0, 1.0});
  EXPECT_EQ(assemble_window(recs, kTarget), make_window(kTarget, some_load, some_temp));
}

// Success and failure do not depend on record order.
TEST(AssembleWindow, OrderIndependent) {
  std::mt19937_64 rng(11);
  const auto full = window_records(kTarget, some_load, some_temp);
  const auto reference = assemble_window(full, kTarget);
  for (int trial = 0; trial < 40; ++trial) {
    auto recs = full;
    std::shuffle(recs.begin(), recs.end(), rng);
    EXPECT_EQ(assemble_window(recs, kTarget), reference);

    auto gappy = full;
    const auto drop = rng() % gappy.size();
    const std::string expected = error_of([&] {
      auto g = gappy;
      g.erase(g.begin() + static_cast<long>(drop));
      assemble_window(g, kTarget);
    });
    ASSERT_FALSE(expected.empty());
    gappy.erase(gappy.begin() + static_cast<long>(drop));
    std::shuffle(gappy.begin(), gappy.end(), rng);
    EXPECT_EQ(error_of([&] { assemble_window(gappy, kTarget); }), expected);
  }
}

TEST(Calendar, ParseAndFormat) {
  EXPECT_EQ(format_date(parse_date("2004-02-29")), "2004-02-29");
  EXPECT_THROW(parse_date("2003-02-29"), InputError);
  EXPECT_THROW(parse_date("2004-2-29"), InputError);
  EXPECT_THROW(parse_date("2004/02/29"), InputError);
  EXPECT_EQ(add_days(ymd(2004, 12, 31), 1), ymd(2005, 1, 1));
  EXPECT_EQ(days_between(ymd(2004, 3, 1), ymd(2004, 2, 28)), -2);
}

}  // namespace
}  // namespace loadcoint
