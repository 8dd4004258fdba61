#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "tradepack/detect.hpp"
#include "tradepack/tape.hpp"

namespace tradepack {

enum class VolumeSelector { MarketOnly, LimitOnly, All, ConcurrentTrades };

struct ProfileBin {
  double lower = 0.0;
  double upper = 0.0;
  std::optional<double> value;  // missing for an empty bin where a mean is undefined
  std::size_t count = 0;

  double center() const noexcept { return 0.5 * (lower + upper); }
};

/// A statistic per equal-width bin of normalized day-time t/D in [0, 1].
struct Profile {
  std::vector<ProfileBin> bins;
};

/// One transaction: normalized day-time and volume / stock mean volume.
struct TimedVolume {
  double t = 0.0;
  double v = 0.0;
};

inline constexpr std::size_t kDefaultProfileBins = 48;

/// min(floor(t * n_bins), n_bins - 1).
std::size_t time_bin(double t, std::size_t n_bins);

/// Transactions of within-one-day packages picked by `selector`. For
/// ConcurrentTrades these are other investors' same-second market prints,
/// each counted once. Volumes are divided by the stock's mean print volume.
std::vector<TimedVolume> profile_points(std::span<const TradePackage> packages,
                                        const MarketTape& tape, VolumeSelector selector);

/// Per-bin mean of v; empty bins are missing.
Profile mean_volume_profile(std::span<const TimedVolume> points,
                            std::size_t n_bins = kDefaultProfileBins);

/// Per-bin sum of v; empty bins hold 0.
Profile total_volume_profile(std::span<const TimedVolume> points,
                             std::size_t n_bins = kDefaultProfileBins);

/// Bin counts over the total; sums to 1. Throws EmptyPopulation for no times.
Profile time_pdf(std::span<const double> times, std::size_t n_bins = kDefaultProfileBins);

/// P(t) over every transaction of the within-one-day packages.
Profile transaction_time_pdf(std::span<const TradePackage> packages,
                             std::size_t n_bins = kDefaultProfileBins);

struct EndpointPdfs {
  Profile initial;  // P(t_ini)
  Profile final;    // P(t_fin)
};

EndpointPdfs endpoint_time_pdfs(std::span<const TradePackage> packages,
                                std::size_t n_bins = kDefaultProfileBins);

/// Columns: center, value, count.
void write_profile_tsv(std::ostream& out, const Profile& profile);

std::string_view to_string(VolumeSelector selector);

}  // namespace tradepack
