#include "tradepack/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_map>

#include "tradepack/text.hpp"

namespace tradepack {

StockCode::StockCode(std::string_view text) {
  if (text.size() != chars_.size()) {
    throw Error(ErrorCode::MalformedRow, "stock code must have 6 characters: '" +
                                             std::string(text) + "'");
  }
  for (std::size_t i = 0; i < chars_.size(); ++i) {
    const char ch = text[i];
    if (ch <= ' ' || ch == ',' || ch == '\t' || ch > '~') {
      throw Error(ErrorCode::MalformedRow, "bad character in stock code");
    }
    chars_[i] = ch;
  }
}

std::string_view to_string(InvestorType type) {
  return type == InvestorType::Institution ? "I" : "P";
}
std::string_view to_string(Side side) { return side == Side::Buy ? "B" : "S"; }
std::string_view to_string(Aggressor aggressor) {
  return aggressor == Aggressor::MarketOrder ? "M" : "L";
}

namespace {

[[noreturn]] void malformed(const std::string& what) {
  throw Error(ErrorCode::MalformedRow, what);
}

template <typename Enum>
Enum parse_flag(std::string_view field, char a, Enum ea, char b, Enum eb, const char* name) {
  if (field.size() == 1) {
    if (field[0] == a) return ea;
    if (field[0] == b) return eb;
  }
  malformed(std::string("bad ") + name + " '" + std::string(field) + "'");
}

double parse_price(std::string_view field) {
  // at most three fraction digits; a leading minus is let through so it reports as NonPositivePrice
  const auto dot = field.find('.');
  if (field.empty()) malformed("empty price");
  if (dot != std::string_view::npos && field.size() - dot - 1 > 3) {
    malformed("price has more than three fraction digits: '" + std::string(field) + "'");
  }
  std::size_t digits = 0;
  for (std::size_t i = 0; i < field.size(); ++i) {
    const char ch = field[i];
    if (ch == '.' && i == dot) continue;
    if (ch == '-' && i == 0) continue;
    if (ch < '0' || ch > '9') malformed("bad price '" + std::string(field) + "'");
    ++digits;
  }
  if (digits == 0) malformed("bad price '" + std::string(field) + "'");
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size()) {
    malformed("bad price '" + std::string(field) + "'");
  }
  if (!(value > 0.0)) {
    throw Error(ErrorCode::NonPositivePrice, "price " + std::string(field));
  }
  return value;
}

template <typename Int>
Int parse_integer(std::string_view field, const char* name) {
  Int value{};
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (field.empty() || ec != std::errc{} || ptr != field.data() + field.size()) {
    malformed(std::string("bad ") + name + " '" + std::string(field) + "'");
  }
  return value;
}

}  // namespace

TradeRecord parse_trade_row(std::string_view row) {
  std::array<std::string_view, 9> f;
  std::size_t count = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= row.size(); ++i) {
    if (i == row.size() || row[i] == ',') {
      if (count == f.size()) malformed("expected 9 fields");
      f[count++] = row.substr(start, i - start);
      start = i + 1;
    }
  }
  if (count != f.size()) malformed("expected 9 fields, got " + std::to_string(count));

  TradeRecord r;
  r.stock = StockCode(f[0]);
  r.investor = parse_integer<std::uint64_t>(f[1], "investor");
  r.investor_type = parse_flag(f[2], 'I', InvestorType::Institution, 'P',
                               InvestorType::Individual, "itype");
  r.time.date = Date::parse(f[3]);
  r.time.seconds = parse_clock(f[4]);
  r.side = parse_flag(f[5], 'B', Side::Buy, 'S', Side::Sell, "side");
  r.aggressor = parse_flag(f[6], 'M', Aggressor::MarketOrder, 'L', Aggressor::LimitOrder, "aggr");
  r.price = parse_price(f[7]);
  const auto volume = parse_integer<std::int64_t>(f[8], "volume");
  if (volume <= 0) {
    throw Error(ErrorCode::NonPositiveVolume, "volume " + std::string(f[8]));
  }
  r.volume = volume;
  if (!day_clock::in_session(r.time.seconds)) {
    throw Error(ErrorCode::OutOfSession, "time " + std::string(f[4]) + " is outside the sessions");
  }
  return r;
}

ParseResult parse_trade_file(std::istream& in, ParseMode mode) {
  ParseResult result;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!header_seen) {
      if (line != kTradeFileHeader) {
        throw Error(ErrorCode::MalformedRow, "line 1: unexpected header '" + line + "'");
      }
      header_seen = true;
      continue;
    }
    if (line.empty()) continue;
    try {
      result.records.push_back(parse_trade_row(line));
    } catch (const Error& e) {
      if (mode == ParseMode::Strict) {
        throw Error(e.code(), "line " + std::to_string(line_no) + ": " + e.what());
      }
      result.issues.push_back({line_no, e.code(), e.what()});
    }
  }
  if (!header_seen) {
    throw Error(ErrorCode::MalformedRow, "missing header row");
  }
  return result;
}

ParseResult read_trade_file(const std::filesystem::path& path, ParseMode mode) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::Io, "cannot open " + path.string());
  }
  return parse_trade_file(in, mode);
}

std::string format_trade_row(const TradeRecord& r) {
  char price[48];
  std::snprintf(price, sizeof price, "%.3f", r.price);
  std::string row;
  row.reserve(64);
  row.append(r.stock.view());
  row += ',';
  row += std::to_string(r.investor);
  row += ',';
  row += to_string(r.investor_type);
  row += ',';
  row += r.time.date.to_string();
  row += ',';
  row += format_clock(r.time.seconds);
  row += ',';
  row += to_string(r.side);
  row += ',';
  row += to_string(r.aggressor);
  row += ',';
  row += price;
  row += ',';
  row += std::to_string(r.volume);
  return row;
}

void write_trade_file(std::ostream& out, std::span<const TradeRecord> records) {
  out << kTradeFileHeader << '\n';
  for (const auto& r : records) {
    out << format_trade_row(r) << '\n';
  }
}

void sort_by_investor(std::vector<TradeRecord>& records) {
  std::stable_sort(records.begin(), records.end(), [](const TradeRecord& a, const TradeRecord& b) {
    if (a.investor != b.investor) return a.investor < b.investor;
    if (a.stock != b.stock) return a.stock < b.stock;
    return a.time < b.time;
  });
}

std::vector<TradeRecord> merge_same_time_trades(std::vector<TradeRecord> records) {
  sort_by_investor(records);
  std::vector<TradeRecord> out;
  out.reserve(records.size());

  struct Accumulator {
    TradeRecord record;
    double notional = 0.0;
    bool single_price = true;
  };
  std::vector<Accumulator> group;  // at most one per (side, aggressor)

  auto flush = [&] {
    for (auto& acc : group) {
      if (!acc.single_price) {
        acc.record.price = acc.notional / static_cast<double>(acc.record.volume);
      }
      out.push_back(acc.record);
    }
    group.clear();
  };

  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    if (i > 0) {
      const auto& prev = records[i - 1];
      if (prev.investor != r.investor || prev.stock != r.stock || prev.time != r.time) flush();
    }
    auto it = std::find_if(group.begin(), group.end(), [&](const Accumulator& acc) {
      return acc.record.side == r.side && acc.record.aggressor == r.aggressor;
    });
    const double notional = r.price * static_cast<double>(r.volume);
    if (it == group.end()) {
      group.push_back({r, notional, true});
    } else {
      it->single_price = it->single_price && it->record.price == r.price;
      it->record.volume += r.volume;
      it->notional += notional;
    }
  }
  flush();
  return out;
}

std::vector<StockSummary> summarize(std::span<const TradeRecord> records) {
  std::map<StockCode, std::unordered_map<std::uint64_t, std::size_t>> counts;
  for (const auto& r : records) {
    ++counts[r.stock][r.investor];
  }
  std::vector<StockSummary> out;
  out.reserve(counts.size());
  for (const auto& [stock, per_investor] : counts) {
    StockSummary s;
    s.stock = stock;
    s.n_investors = per_investor.size();
    std::vector<double> values;
    values.reserve(per_investor.size());
    for (const auto& [id, n] : per_investor) {
      s.n_trades += n;
      values.push_back(static_cast<double>(n));
    }
    std::sort(values.begin(), values.end());
    const double n = static_cast<double>(values.size());
    double sum = 0.0;
    for (double v : values) sum += v;
    s.trades_per_investor_mean = sum / n;
    const std::size_t mid = values.size() / 2;
    s.trades_per_investor_median =
        values.size() % 2 == 1 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
    if (values.size() > 1) {
      double ss = 0.0;
      for (double v : values) ss += (v - s.trades_per_investor_mean) * (v - s.trades_per_investor_mean);
      s.trades_per_investor_std = std::sqrt(ss / (n - 1.0));
      s.std_defined = true;
    }
    out.push_back(std::move(s));
  }
  return out;
}

std::map<StockCode, StockMetadata> read_stock_metadata(std::istream& in) {
  std::map<StockCode, StockMetadata> out;
  std::string line;
  bool header = true;
  std::size_t line_no = 0;
  auto field = [&](std::string_view v) -> std::optional<double> {
    if (v == "NA" || v.empty()) return std::nullopt;
    double x = 0.0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
    if (ec != std::errc{} || ptr != v.data() + v.size()) {
      throw Error(ErrorCode::MalformedRow,
                  "metadata line " + std::to_string(line_no) + ": bad number '" + std::string(v) + "'");
    }
    return x;
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (header) {
      header = false;
      continue;
    }
    if (line.empty()) continue;
    const auto parts = text::split(line, '\t');
    if (parts.size() != 4) {
      throw Error(ErrorCode::MalformedRow,
                  "metadata line " + std::to_string(line_no) + ": expected 4 columns");
    }
    out[StockCode(parts[0])] = {field(parts[1]), field(parts[2]), field(parts[3])};
  }
  return out;
}

void attach_metadata(std::vector<StockSummary>& summaries,
                     const std::map<StockCode, StockMetadata>& metadata) {
  for (auto& s : summaries) {
    if (auto it = metadata.find(s.stock); it != metadata.end()) s.metadata = it->second;
  }
}

void write_summary_tsv(std::ostream& out, std::span<const StockSummary> summaries) {
  out << "code\tA_tot\tC_flo\tC_tot\tN_inv\tN_tra\tmean\tmedian\tstd\n";
  for (const auto& s : summaries) {
    out << s.stock.view() << '\t' << text::number(s.metadata.total_amount) << '\t'
        << text::number(s.metadata.float_cap) << '\t' << text::number(s.metadata.total_cap)
        << '\t' << s.n_investors << '\t' << s.n_trades << '\t'
        << text::number(s.trades_per_investor_mean) << '\t'
        << text::number(s.trades_per_investor_median) << '\t'
        << (s.std_defined ? text::number(s.trades_per_investor_std) : std::string("NA")) << '\n';
  }
}

}  // namespace tradepack
