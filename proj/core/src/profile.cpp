#include "tradepack/profile.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <tuple>

#include "tradepack/text.hpp"

namespace tradepack {

namespace {

void check_bins(std::size_t n_bins) {
  if (n_bins == 0) throw Error(ErrorCode::InvalidArgument, "profile needs at least one bin");
}

Profile empty_profile(std::size_t n_bins) {
  Profile p;
  p.bins.resize(n_bins);
  for (std::size_t b = 0; b < n_bins; ++b) {
    p.bins[b].lower = static_cast<double>(b) / static_cast<double>(n_bins);
    p.bins[b].upper = static_cast<double>(b + 1) / static_cast<double>(n_bins);
  }
  return p;
}

// Values grouped by bin and sorted, so sums do not depend on input order.
std::vector<std::vector<double>> bucket(std::span<const TimedVolume> points, std::size_t n_bins) {
  std::vector<std::vector<double>> groups(n_bins);
  for (const auto& p : points) groups[time_bin(p.t, n_bins)].push_back(p.v);
  for (auto& g : groups) std::sort(g.begin(), g.end());
  return groups;
}

double sum_of(const std::vector<double>& values) {
  double s = 0.0;
  for (double v : values) s += v;
  return s;
}

}  // namespace

std::size_t time_bin(double t, std::size_t n_bins) {
  check_bins(n_bins);
  if (!(t >= 0.0 && t <= 1.0)) {
    throw Error(ErrorCode::OutOfSupport, "normalized time " + text::number(t) + " outside [0, 1]");
  }
  const auto b = static_cast<std::size_t>(std::floor(t * static_cast<double>(n_bins)));
  return std::min(b, n_bins - 1);
}

std::vector<TimedVolume> profile_points(std::span<const TradePackage> packages,
                                        const MarketTape& tape, VolumeSelector selector) {
  std::vector<TimedVolume> out;
  if (selector == VolumeSelector::ConcurrentTrades) {
    std::vector<TradeRecord> seen;
    for (const auto& pkg : packages) {
      if (!pkg.within_one_day) continue;
      for (const auto& trade : pkg.trades) {
        for (const auto& c : concurrent_prints(tape, trade)) seen.push_back(c);
      }
    }
    const auto key = [](const TradeRecord& r) {
      return std::tie(r.stock, r.time, r.investor, r.side, r.aggressor);
    };
    std::sort(seen.begin(), seen.end(),
              [&](const TradeRecord& a, const TradeRecord& b) { return key(a) < key(b); });
    seen.erase(std::unique(seen.begin(), seen.end(),
                           [&](const TradeRecord& a, const TradeRecord& b) { return key(a) == key(b); }),
               seen.end());
    out.reserve(seen.size());
    for (const auto& r : seen) {
      out.push_back({day_clock::normalize(r.time.seconds),
                     static_cast<double>(r.volume) / tape.mean_volume(r.stock)});
    }
    return out;
  }
  for (const auto& pkg : packages) {
    if (!pkg.within_one_day) continue;
    const double mean = tape.mean_volume(pkg.stock);
    for (const auto& trade : pkg.trades) {
      if (selector == VolumeSelector::MarketOnly && trade.aggressor != Aggressor::MarketOrder) continue;
      if (selector == VolumeSelector::LimitOnly && trade.aggressor != Aggressor::LimitOrder) continue;
      out.push_back({day_clock::normalize(trade.time.seconds), static_cast<double>(trade.volume) / mean});
    }
  }
  return out;
}

Profile mean_volume_profile(std::span<const TimedVolume> points, std::size_t n_bins) {
  check_bins(n_bins);
  Profile p = empty_profile(n_bins);
  const auto groups = bucket(points, n_bins);
  for (std::size_t b = 0; b < n_bins; ++b) {
    p.bins[b].count = groups[b].size();
    if (!groups[b].empty()) p.bins[b].value = sum_of(groups[b]) / static_cast<double>(groups[b].size());
  }
  return p;
}

Profile total_volume_profile(std::span<const TimedVolume> points, std::size_t n_bins) {
  check_bins(n_bins);
  Profile p = empty_profile(n_bins);
  const auto groups = bucket(points, n_bins);
  for (std::size_t b = 0; b < n_bins; ++b) {
    p.bins[b].count = groups[b].size();
    p.bins[b].value = sum_of(groups[b]);
  }
  return p;
}

Profile time_pdf(std::span<const double> times, std::size_t n_bins) {
  check_bins(n_bins);
  if (times.empty()) throw Error(ErrorCode::EmptyPopulation, "no times for a time distribution");
  Profile p = empty_profile(n_bins);
  for (double t : times) ++p.bins[time_bin(t, n_bins)].count;
  const auto total = static_cast<double>(times.size());
  for (auto& bin : p.bins) bin.value = static_cast<double>(bin.count) / total;
  return p;
}

Profile transaction_time_pdf(std::span<const TradePackage> packages, std::size_t n_bins) {
  std::vector<double> times;
  for (const auto& pkg : packages) {
    if (!pkg.within_one_day) continue;
    for (const auto& trade : pkg.trades) times.push_back(day_clock::normalize(trade.time.seconds));
  }
  return time_pdf(times, n_bins);
}

EndpointPdfs endpoint_time_pdfs(std::span<const TradePackage> packages, std::size_t n_bins) {
  std::vector<double> first;
  std::vector<double> last;
  for (const auto& pkg : packages) {
    if (!pkg.within_one_day) continue;
    first.push_back(pkg.t_ini);
    last.push_back(pkg.t_fin);
  }
  return {time_pdf(first, n_bins), time_pdf(last, n_bins)};
}

void write_profile_tsv(std::ostream& out, const Profile& profile) {
  out << "center\tvalue\tcount\n";
  for (const auto& bin : profile.bins) {
    out << text::number(bin.center()) << '\t' << text::number(bin.value) << '\t' << bin.count
        << '\n';
  }
}

std::string_view to_string(VolumeSelector selector) {
  switch (selector) {
    case VolumeSelector::MarketOnly: return "market";
    case VolumeSelector::LimitOnly: return "limit";
    case VolumeSelector::All: return "all";
    case VolumeSelector::ConcurrentTrades: return "concurrent";
  }
  return "?";
}

}  // namespace tradepack
