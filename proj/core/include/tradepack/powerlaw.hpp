#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace tradepack::powerlaw {

/// BoundedGeneral: p(x) = c x^-delta on [x_min, x_max], any real delta.
/// UnboundedTail:  p(x) = c x^-delta on [x_min, inf), delta > 1.
enum class Regime { BoundedGeneral, UnboundedTail };

struct PowerLawFit {
  Regime regime = Regime::UnboundedTail;
  double delta = 0.0;
  double c = 0.0;
  double x_min = 0.0;
  double x_max = 0.0;      // +inf for UnboundedTail
  double sigma = 0.0;      // standard error of delta
  double ks = 0.0;
  std::size_t n_tail = 0;
  bool small_sample = false;  // fewer than 50 samples were supplied to the scan
};

/// Builds a fit with c filled in; sigma/ks/n_tail are left zero.
PowerLawFit make_bounded(double delta, double x_min, double x_max);
PowerLawFit make_unbounded(double delta, double x_min);

/// ln c for the bounded family; continuous through delta = 1.
double bounded_log_normalization(double delta, double x_min, double x_max);

double pdf(const PowerLawFit& fit, double x);
double cdf(const PowerLawFit& fit, double x);

/// d lnL / d delta for n samples in [x_min, x_max] whose logs sum to sum_log.
double bounded_score(double delta, std::size_t n, double sum_log, double x_min, double x_max);

/// Root of the bounded score equation. Requires n >= 10, all samples inside
/// [x_min, x_max] and not all equal.
double mle_delta_bounded(std::span<const double> samples, double x_min, double x_max);
double mle_delta_bounded(std::size_t n, double sum_log, double x_min, double x_max);

/// delta = 1 + n / sum(ln(x / x_min)).
double mle_delta_unbounded(std::span<const double> samples, double x_min);

/// Standard error 1/sqrt(n I(delta)) with I the per-observation Fisher
/// information. Bounded: I from a central second difference of ln c.
/// Unbounded: I = 1/(delta-1)^2, i.e. sigma = (delta-1)/sqrt(n).
double standard_error(Regime regime, double delta, std::size_t n, double x_min, double x_max);

/// Sup-norm distance between the empirical CDF of the samples >= fit.x_min and
/// the fitted CDF, evaluated on both sides of every step.
double ks_statistic(std::span<const double> samples, const PowerLawFit& fit);

/// Same, for a tail that is already sorted ascending and lies inside the support.
double ks_statistic_sorted(std::span<const double> sorted_tail, const PowerLawFit& fit);

struct ScanOptions {
  std::size_t excluded_top = 10;       // largest order statistics never used as x_min
  std::size_t exhaustive_limit = 1000; // at or below this n every candidate is tried
  std::size_t max_candidates = 1000;   // above it, an evenly spaced subset of this size
  int jobs = 1;
};

/// Fit on the tail x >= x_min with a fixed cutoff. Bounded regime uses
/// x_max = max(samples).
PowerLawFit fit_at_xmin(std::span<const double> samples, Regime regime, double x_min);

/// Candidate cutoffs that fit_with_xmin_scan evaluates, ascending.
std::vector<double> scan_candidates(std::span<const double> samples, const ScanOptions& options = {});

/// KS-minimizing cutoff scan; ties go to the smaller x_min.
PowerLawFit fit_with_xmin_scan(std::span<const double> samples, Regime regime,
                               const ScanOptions& options = {});

/// Inverse-CDF draws, deterministic per seed.
std::vector<double> sample(const PowerLawFit& fit, std::size_t count, std::uint64_t seed);

/// Uniform in (0, 1) from a 64-bit word; the mapping used by sample().
inline double unit_interval(std::uint64_t bits) noexcept {
  return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

/// Inverse CDF of the fit at probability u in (0, 1).
double quantile(const PowerLawFit& fit, double u);

}  // namespace tradepack::powerlaw
