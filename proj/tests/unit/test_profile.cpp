#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "builders.hpp"
#include "tradepack/error.hpp"
#include "tradepack/profile.hpp"
#include "tradepack/tape.hpp"

using namespace tradepack;
using namespace tptest;

namespace {

std::vector<TradeRecord> tape_records() {
  std::vector<TradeRecord> rs;
  // Investor 1 package: six market buys plus one limit buy.
  for (int i = 0; i < 6; ++i) {
    rs.push_back(trade("000001", 1, "2003-01-06", format_clock(34200 + 600 * i), Buy, Mkt, 10.0 + 0.01 * i, 200));
  }
  rs.push_back(trade("000001", 1, "2003-01-06", "14:59:00", Buy, Lim, 10.1, 400));
  // Other investors printing in the same seconds.
  rs.push_back(trade("000001", 2, "2003-01-06", "09:30:00", Sell, Mkt, 10.0, 100));
  rs.push_back(trade("000001", 3, "2003-01-06", "09:30:00", Sell, Lim, 10.0, 100));
  rs.push_back(trade("000001", 4, "2003-01-06", "09:40:00", Buy, Mkt, 10.0, 300));
  return rs;
}

}  // namespace

TEST(Tape, IndexesPerStockAndSecond) {
  const auto rs = tape_records();
  const MarketTape tape(rs);
  ASSERT_EQ(tape.stocks().size(), 1u);
  EXPECT_EQ(tape.trades(StockCode("000001")).size(), rs.size());
  const Timestamp open{Date::parse("2003-01-06"), parse_clock("09:30:00")};
  EXPECT_EQ(tape.same_second(StockCode("000001"), open).size(), 3u);
  EXPECT_FALSE(tape.price_before(StockCode("000001"), open).has_value());
  const Timestamp later{Date::parse("2003-01-06"), parse_clock("09:40:00")};
  EXPECT_DOUBLE_EQ(*tape.price_before(StockCode("000001"), later), 10.0);
  const Timestamp next_day{Date::parse("2003-01-07"), parse_clock("09:30:05")};
  EXPECT_FALSE(tape.price_before(StockCode("000001"), next_day).has_value());
  double sum = 0;
  for (const auto& r : rs) sum += static_cast<double>(r.volume);
  EXPECT_DOUBLE_EQ(tape.mean_volume(StockCode("000001")), sum / static_cast<double>(rs.size()));
  EXPECT_THROW(tape.mean_volume(StockCode("999999")), Error);
}

TEST(Tape, ConcurrentPrintsAreOtherInvestorsMarketOrders) {
  const auto rs = tape_records();
  const MarketTape tape(rs);
  const auto c = concurrent_prints(tape, rs[0]);
  ASSERT_EQ(c.size(), 1u);
  EXPECT_EQ(c[0].investor, 2u);
}

TEST(Profile, TimeBinClampsTheClose) {
  EXPECT_EQ(time_bin(0.0, 48), 0u);
  EXPECT_EQ(time_bin(1.0, 48), 47u);
  EXPECT_EQ(time_bin(0.5, 48), 24u);
  EXPECT_THROW(time_bin(1.01, 48), Error);
  EXPECT_THROW(time_bin(-0.01, 48), Error);
}

TEST(Profile, SelectorsSplitPackageVolume) {
  const auto rs = tape_records();
  const MarketTape tape(rs);
  const auto packages = detect_packages(rs, DetectorConfig{});
  ASSERT_EQ(packages.size(), 1u);
  const auto all = profile_points(packages, tape, VolumeSelector::All);
  const auto mkt = profile_points(packages, tape, VolumeSelector::MarketOnly);
  const auto lim = profile_points(packages, tape, VolumeSelector::LimitOnly);
  EXPECT_EQ(all.size(), 7u);
  EXPECT_EQ(mkt.size() + lim.size(), all.size());
  const double mean = tape.mean_volume(StockCode("000001"));
  EXPECT_DOUBLE_EQ(lim[0].v, 400.0 / mean);
  const auto con = profile_points(packages, tape, VolumeSelector::ConcurrentTrades);
  ASSERT_EQ(con.size(), 2u);
  EXPECT_DOUBLE_EQ(con[0].v + con[1].v, 400.0 / mean);
}

TEST(Profile, MeanAndTotalProfiles) {
  std::vector<TimedVolume> pts{{0.01, 1.0}, {0.02, 3.0}, {0.99, 5.0}};
  const auto mean = mean_volume_profile(pts, 4);
  ASSERT_EQ(mean.bins.size(), 4u);
  EXPECT_DOUBLE_EQ(*mean.bins[0].value, 2.0);
  EXPECT_FALSE(mean.bins[1].value.has_value());
  EXPECT_DOUBLE_EQ(*mean.bins[3].value, 5.0);
  EXPECT_DOUBLE_EQ(mean.bins[1].center(), 0.375);
  const auto total = total_volume_profile(pts, 4);
  EXPECT_DOUBLE_EQ(*total.bins[0].value, 4.0);
  EXPECT_DOUBLE_EQ(*total.bins[1].value, 0.0);
}

TEST(Profile, TotalIsPermutationInvariant) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u;
  std::vector<TimedVolume> pts(5000);
  for (auto& p : pts) p = {u(rng), std::exp(5 * u(rng))};
  const auto a = total_volume_profile(pts);
  std::shuffle(pts.begin(), pts.end(), rng);
  const auto b = total_volume_profile(pts);
  for (std::size_t i = 0; i < a.bins.size(); ++i) EXPECT_EQ(*a.bins[i].value, *b.bins[i].value);
}

TEST(Profile, TimePdfSumsToOne) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u;
  std::vector<double> t(999);
  for (double& x : t) x = u(rng) * u(rng);
  const auto pdf = time_pdf(t, 48);
  double sum = 0.0;
  std::size_t count = 0;
  for (const auto& b : pdf.bins) {
    sum += *b.value;
    count += b.count;
  }
  EXPECT_NEAR(sum, 1.0, 1e-12);
  EXPECT_EQ(count, t.size());
  EXPECT_THROW(time_pdf(std::vector<double>{}), Error);
}

TEST(Profile, EndpointsUseFirstAndLastTrade) {
  const auto rs = tape_records();
  const auto packages = detect_packages(rs, DetectorConfig{});
  const auto e = endpoint_time_pdfs(packages, 4);
  EXPECT_DOUBLE_EQ(*e.initial.bins[0].value, 1.0);
  EXPECT_DOUBLE_EQ(*e.final.bins[3].value, 1.0);
  const auto all = transaction_time_pdf(packages, 4);
  EXPECT_EQ(all.bins[0].count, 6u);
  EXPECT_EQ(all.bins[3].count, 1u);
}
