#include "tradepack/anova.hpp"

#include <boost/math/distributions/fisher_f.hpp>
#include <cmath>
#include <limits>

#include "tradepack/error.hpp"

namespace tradepack {

AnovaResult anova_oneway(std::span<const std::vector<double>> groups) {
  if (groups.size() < 2) throw Error(ErrorCode::TooFewSamples, "ANOVA needs at least two groups");

  // Per-group Welford pass; between-group sum from the group means.
  std::vector<double> means(groups.size());
  double ss_within = 0.0;
  double total = 0.0;
  std::size_t n = 0;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    if (groups[g].size() < 2) {
      throw Error(ErrorCode::TooFewSamples, "ANOVA group " + std::to_string(g) + " has < 2 values");
    }
    double mean = 0.0;
    double m2 = 0.0;
    std::size_t count = 0;
    for (double v : groups[g]) {
      ++count;
      const double delta = v - mean;
      mean += delta / static_cast<double>(count);
      m2 += delta * (v - mean);
    }
    means[g] = mean;
    ss_within += m2;
    total += mean * static_cast<double>(count);
    n += count;
  }
  const double grand = total / static_cast<double>(n);
  double ss_between = 0.0;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    const double d = means[g] - grand;
    ss_between += static_cast<double>(groups[g].size()) * d * d;
  }

  AnovaResult r;
  r.df_between = groups.size() - 1;
  r.df_within = n - groups.size();
  r.ss_between = ss_between;
  r.ss_within = ss_within;
  const double ms_between = ss_between / static_cast<double>(r.df_between);
  const double ms_within = ss_within / static_cast<double>(r.df_within);

  if (ms_within == 0.0) {
    r.degenerate = true;
    if (ss_between > 0.0) {
      r.f = std::numeric_limits<double>::infinity();
      r.p_value = 0.0;
    } else {
      r.f = std::numeric_limits<double>::quiet_NaN();
      r.p_value = 1.0;
    }
    return r;
  }
  r.f = ms_between / ms_within;
  const boost::math::fisher_f dist(static_cast<double>(r.df_between),
                                   static_cast<double>(r.df_within));
  r.p_value = boost::math::cdf(boost::math::complement(dist, r.f));
  return r;
}

}  // namespace tradepack
