#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "builders.hpp"
#include "tradepack/synth.hpp"

using namespace tradepack;
using namespace tptest;

namespace {

std::string file_of(std::initializer_list<std::string_view> rows) {
  std::string s(kTradeFileHeader);
  s += '\n';
  for (auto r : rows) {
    s += r;
    s += '\n';
  }
  return s;
}

ErrorCode code_of(std::string_view row) {
  try {
    parse_trade_row(row);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "row parsed: " << row;
  return ErrorCode::Io;
}

}  // namespace

TEST(Ingest, ParsesOneRow) {
  const auto r = parse_trade_row("000001,42,I,2003-01-06,09:30:05,B,M,10.250,300");
  EXPECT_EQ(r.stock.str(), "000001");
  EXPECT_EQ(r.investor, 42u);
  EXPECT_EQ(r.investor_type, InvestorType::Institution);
  EXPECT_EQ(r.time.seconds, 34205);
  EXPECT_EQ(r.side, Side::Buy);
  EXPECT_EQ(r.aggressor, Aggressor::MarketOrder);
  EXPECT_DOUBLE_EQ(r.price, 10.25);
  EXPECT_EQ(r.volume, 300);
}

TEST(Ingest, RowErrorsCarryTheirCode) {
  EXPECT_EQ(code_of("000001,42,I,2003-01-06,09:30:05,B,M,0,300"), ErrorCode::NonPositivePrice);
  EXPECT_EQ(code_of("000001,42,I,2003-01-06,09:30:05,B,M,1.0,0"), ErrorCode::NonPositiveVolume);
  EXPECT_EQ(code_of("000001,42,I,2003-01-06,12:00:00,B,M,1.0,5"), ErrorCode::OutOfSession);
  EXPECT_EQ(code_of("000001,42,X,2003-01-06,09:30:05,B,M,1.0,5"), ErrorCode::MalformedRow);
  EXPECT_EQ(code_of("00001,42,I,2003-01-06,09:30:05,B,M,1.0,5"), ErrorCode::MalformedRow);
  EXPECT_EQ(code_of("000001,42,I,2003-01-06,09:30:05,B,M,1.0"), ErrorCode::MalformedRow);
}

TEST(Ingest, StrictModeNamesTheLine) {
  std::istringstream in(file_of({"000001,1,P,2003-01-06,09:30:05,B,M,1.0,5",
                                 "000001,1,P,2003-01-06,09:30:06,B,M,1.0,-5"}));
  try {
    parse_trade_file(in);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  }
}

TEST(Ingest, LenientModeSkipsAndRecords) {
  std::istringstream in(file_of({"000001,1,P,2003-01-06,09:30:05,B,M,1.0,5",
                                 "garbage", "000001,1,P,2003-01-06,09:30:06,S,L,1.0,7"}));
  const auto result = parse_trade_file(in, ParseMode::Lenient);
  ASSERT_EQ(result.records.size(), 2u);
  ASSERT_EQ(result.issues.size(), 1u);
  EXPECT_EQ(result.issues[0].line, 3u);
}

TEST(Ingest, MissingFileIsIoErrorNamingThePath) {
  try {
    read_trade_file("/nonexistent/trades.csv");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Io);
    EXPECT_NE(std::string(e.what()).find("/nonexistent/trades.csv"), std::string::npos);
  }
}

TEST(Ingest, MergeCollapsesSameSecondFills) {
  std::vector<TradeRecord> rs{
      trade("000001", 1, "2003-01-06", "09:30:05", Buy, Mkt, 10.0, 100),
      trade("000001", 1, "2003-01-06", "09:30:05", Buy, Mkt, 11.0, 300),
      trade("000001", 1, "2003-01-06", "09:30:05", Buy, Lim, 10.5, 50),
      trade("000001", 1, "2003-01-06", "09:30:05", Sell, Mkt, 10.5, 20),
      trade("000001", 1, "2003-01-06", "09:30:06", Buy, Mkt, 10.0, 10),
      trade("000001", 2, "2003-01-06", "09:30:05", Buy, Mkt, 10.0, 10),
  };
  const auto merged = merge_same_time_trades(rs);
  ASSERT_EQ(merged.size(), 5u);
  const auto& first = merged.front();
  EXPECT_EQ(first.volume, 400);
  EXPECT_DOUBLE_EQ(first.price, (10.0 * 100 + 11.0 * 300) / 400.0);
  std::int64_t total = 0;
  for (const auto& r : merged) total += r.volume;
  EXPECT_EQ(total, 490);
}

TEST(Ingest, MergeIsIdempotent) {
  std::vector<TradeRecord> rs{
      trade("000002", 7, "2003-01-06", "10:00:00", Sell, Mkt, 5.0, 10),
      trade("000002", 7, "2003-01-06", "10:00:00", Sell, Mkt, 5.5, 30),
      trade("000001", 3, "2003-01-07", "14:00:00", Buy, Lim, 8.0, 10),
  };
  const auto once = merge_same_time_trades(rs);
  EXPECT_EQ(merge_same_time_trades(once), once);
}

TEST(Ingest, SummaryCountsPerStock) {
  std::vector<TradeRecord> rs;
  for (int i = 0; i < 3; ++i) rs.push_back(trade("000001", 1, "2003-01-06", "09:30:05", Buy, Mkt, 1, 1));
  rs.push_back(trade("000001", 2, "2003-01-06", "09:30:05", Buy, Mkt, 1, 1));
  rs.push_back(trade("000002", 2, "2003-01-06", "09:30:05", Buy, Mkt, 1, 1));
  const auto s = summarize(rs);
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s[0].n_investors, 2u);
  EXPECT_EQ(s[0].n_trades, 4u);
  EXPECT_DOUBLE_EQ(s[0].trades_per_investor_mean, 2.0);
  EXPECT_DOUBLE_EQ(s[0].trades_per_investor_median, 2.0);
  EXPECT_DOUBLE_EQ(s[0].trades_per_investor_std, std::sqrt(2.0));
  EXPECT_FALSE(s[1].std_defined);
}

TEST(Ingest, MetadataAttachesByCode) {
  std::istringstream in("stock\tA_tot\tC_flo\tC_tot\n000001\t1.5\tNA\t3\n");
  const auto meta = read_stock_metadata(in);
  ASSERT_EQ(meta.size(), 1u);
  const auto& m = meta.at(StockCode("000001"));
  EXPECT_DOUBLE_EQ(*m.total_amount, 1.5);
  EXPECT_FALSE(m.float_cap.has_value());
  EXPECT_DOUBLE_EQ(*m.total_cap, 3.0);
}

TEST(Ingest, LargeSynthFileRoundTrips) {
  synth::SynthConfig cfg;
  cfg.seed = 11;
  cfg.n_stocks = 4;
  cfg.trading_days = 20;
  cfg.background.enabled = true;
  cfg.background.print_probability = 0.8;
  const auto market = synth::generate_market(cfg);
  ASSERT_GT(market.records.size(), 900000u);
  std::ostringstream out;
  write_trade_file(out, market.records);
  std::istringstream in(out.str());
  const auto parsed = parse_trade_file(in);
  ASSERT_EQ(parsed.records.size(), market.records.size());
  for (std::size_t i = 0; i < parsed.records.size(); ++i) {
    ASSERT_EQ(parsed.records[i], market.records[i]) << i;
  }
  std::ostringstream again;
  write_trade_file(again, parsed.records);
  EXPECT_EQ(again.str(), out.str());
}
