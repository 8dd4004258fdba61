#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tradepack/day_clock.hpp"
#include "tradepack/error.hpp"

namespace tradepack {

enum class InvestorType : std::uint8_t { Institution, Individual };
enum class Side : std::uint8_t { Buy, Sell };
enum class Aggressor : std::uint8_t { MarketOrder, LimitOrder };

inline constexpr int sign_of(Side side) noexcept { return side == Side::Buy ? 1 : -1; }

/// Six-character exchange code, e.g. "000001".
class StockCode {
 public:
  StockCode() { chars_.fill('0'); }
  /// Throws Error{MalformedRow} unless `text` is exactly six printable chars.
  explicit StockCode(std::string_view text);

  std::string_view view() const noexcept { return {chars_.data(), chars_.size()}; }
  std::string str() const { return std::string(view()); }

  auto operator<=>(const StockCode&) const = default;

 private:
  std::array<char, 6> chars_;
};

/// One (possibly merged) execution of one investor in one stock.
struct TradeRecord {
  StockCode stock;
  std::uint64_t investor = 0;
  InvestorType investor_type = InvestorType::Individual;
  Timestamp time;
  Side side = Side::Buy;
  Aggressor aggressor = Aggressor::MarketOrder;
  double price = 0.0;
  std::int64_t volume = 0;

  bool operator==(const TradeRecord&) const = default;
};

inline constexpr std::string_view kTradeFileHeader =
    "stock,investor,itype,date,time,side,aggr,price,volume";

enum class ParseMode { Strict, Lenient };

struct ParseIssue {
  std::size_t line = 0;  // 1-based, header is line 1
  ErrorCode code = ErrorCode::MalformedRow;
  std::string message;
};

struct ParseResult {
  std::vector<TradeRecord> records;
  std::vector<ParseIssue> issues;  // only populated in lenient mode
};

/// Parses one data row (no trailing newline). Throws Error on any violation.
TradeRecord parse_trade_row(std::string_view row);

/// Reads a trade file. Strict mode throws on the first bad row with its line
/// number in the message; lenient mode skips it and records a ParseIssue.
ParseResult parse_trade_file(std::istream& in, ParseMode mode = ParseMode::Strict);
ParseResult read_trade_file(const std::filesystem::path& path, ParseMode mode = ParseMode::Strict);

/// Canonical rendering: header, LF endings, price with three fraction digits.
std::string format_trade_row(const TradeRecord& record);
void write_trade_file(std::ostream& out, std::span<const TradeRecord> records);

/// Orders by (investor, stock, timestamp); stable, so equal keys keep file order.
void sort_by_investor(std::vector<TradeRecord>& records);

/// Collapses same-investor, same-stock, same-second fills that share side and
/// aggressor into one record (summed volume, volume-weighted price). Fills with
/// different side or aggressor stay separate. Output is sorted by investor.
std::vector<TradeRecord> merge_same_time_trades(std::vector<TradeRecord> records);

struct StockMetadata {
  std::optional<double> total_amount;       // A_tot
  std::optional<double> float_cap;          // C_flo
  std::optional<double> total_cap;          // C_tot
};

struct StockSummary {
  StockCode stock;
  std::size_t n_investors = 0;
  std::size_t n_trades = 0;
  double trades_per_investor_mean = 0.0;
  double trades_per_investor_median = 0.0;
  double trades_per_investor_std = 0.0;  // sample std (n-1)
  bool std_defined = false;              // false with a single investor
  StockMetadata metadata;
};

/// Per-stock investor and trade counts, sorted by stock code.
std::vector<StockSummary> summarize(std::span<const TradeRecord> records);

/// Reads `stock<TAB>A_tot<TAB>C_flo<TAB>C_tot` rows (header first, "NA" for missing).
std::map<StockCode, StockMetadata> read_stock_metadata(std::istream& in);
void attach_metadata(std::vector<StockSummary>& summaries,
                     const std::map<StockCode, StockMetadata>& metadata);

/// Columns follow the stock summary table: code, A_tot, C_flo, C_tot, N_inv,
/// N_tra, mean, median, std.
void write_summary_tsv(std::ostream& out, std::span<const StockSummary> summaries);

std::string_view to_string(InvestorType type);
std::string_view to_string(Side side);
std::string_view to_string(Aggressor aggressor);

}  // namespace tradepack
