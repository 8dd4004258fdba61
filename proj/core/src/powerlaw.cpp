#include "tradepack/powerlaw.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "tradepack/error.hpp"
#include "tradepack/parallel.hpp"

namespace tradepack::powerlaw {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSingular = 1e-6;  // |1 - delta| below this uses the series around delta = 1

// ln|e^y - 1| without overflow.
double log_abs_expm1(double y) {
  if (y > 30.0) return y + std::log1p(-std::exp(-y));
  if (y < -30.0) return std::log1p(-std::exp(y));
  return std::log(std::abs(std::expm1(y)));
}

void require_bounds(double x_min, double x_max) {
  if (!(x_min > 0.0) || !(x_max > x_min) || !std::isfinite(x_max)) {
    throw Error(ErrorCode::InvalidArgument, "bounded support needs 0 < x_min < x_max < inf");
  }
}

std::string bracket_message(double lo, double hi, double s_lo, double s_hi) {
  std::ostringstream os;
  os << "score has no sign change on [" << lo << ", " << hi << "], score(lo)=" << s_lo
     << ", score(hi)=" << s_hi;
  return os.str();
}

}  // namespace

double bounded_log_normalization(double delta, double x_min, double x_max) {
  require_bounds(x_min, x_max);
  const double a = 1.0 - delta;
  const double u = std::log(x_min);
  const double d = std::log(x_max) - u;
  if (std::abs(a) < kSingular) {
    // a / (e^{ad} - 1) = (1/d)(1 - ad/2 + (ad)^2/12 - ...)
    const double ad = a * d;
    return -std::log(d) - ad / 2.0 + ad * ad / 24.0 - a * u;
  }
  return std::log(std::abs(a)) - log_abs_expm1(a * d) - a * u;
}

PowerLawFit make_bounded(double delta, double x_min, double x_max) {
  PowerLawFit fit;
  fit.regime = Regime::BoundedGeneral;
  fit.delta = delta;
  fit.x_min = x_min;
  fit.x_max = x_max;
  fit.c = std::exp(bounded_log_normalization(delta, x_min, x_max));
  return fit;
}

PowerLawFit make_unbounded(double delta, double x_min) {
  if (!(delta > 1.0)) throw Error(ErrorCode::InvalidArgument, "unbounded tail needs delta > 1");
  if (!(x_min > 0.0)) throw Error(ErrorCode::InvalidArgument, "x_min must be positive");
  PowerLawFit fit;
  fit.regime = Regime::UnboundedTail;
  fit.delta = delta;
  fit.x_min = x_min;
  fit.x_max = kInf;
  fit.c = (delta - 1.0) * std::pow(x_min, delta - 1.0);
  return fit;
}

namespace {

void require_support(const PowerLawFit& fit, double x) {
  if (!(x >= fit.x_min) || !(x <= fit.x_max)) {
    std::ostringstream os;
    os << "x=" << x << " outside [" << fit.x_min << ", " << fit.x_max << "]";
    throw Error(ErrorCode::OutOfSupport, os.str());
  }
}

}  // namespace

double pdf(const PowerLawFit& fit, double x) {
  require_support(fit, x);
  if (fit.regime == Regime::UnboundedTail) {
    return (fit.delta - 1.0) / fit.x_min * std::pow(x / fit.x_min, -fit.delta);
  }
  return std::exp(bounded_log_normalization(fit.delta, fit.x_min, fit.x_max) -
                  fit.delta * std::log(x));
}

double cdf(const PowerLawFit& fit, double x) {
  require_support(fit, x);
  if (fit.regime == Regime::UnboundedTail) {
    return -std::expm1((fit.delta - 1.0) * std::log(fit.x_min / x));
  }
  const double a = 1.0 - fit.delta;
  const double l = std::log(x / fit.x_min);
  const double d = std::log(fit.x_max / fit.x_min);
  if (std::abs(a) < kSingular) return l / d;
  if (a > 0.0) {
    return std::exp(a * (l - d)) * std::expm1(-a * l) / std::expm1(-a * d);
  }
  return std::expm1(a * l) / std::expm1(a * d);
}

double quantile(const PowerLawFit& fit, double u) {
  if (!(u > 0.0 && u < 1.0)) throw Error(ErrorCode::InvalidArgument, "quantile needs u in (0,1)");
  if (fit.regime == Regime::UnboundedTail) {
    return fit.x_min * std::exp(-std::log1p(-u) / (fit.delta - 1.0));
  }
  const double a = 1.0 - fit.delta;
  const double d = std::log(fit.x_max / fit.x_min);
  double l = 0.0;
  if (std::abs(a) < kSingular) {
    l = u * d;
  } else if (a > 0.0) {
    // e^{a l} = 1 + u (e^{a d} - 1), done relative to the upper end
    l = d + std::log(u + (1.0 - u) * std::exp(-a * d)) / a;
  } else {
    l = std::log1p(u * std::expm1(a * d)) / a;
  }
  return std::clamp(fit.x_min * std::exp(l), fit.x_min, fit.x_max);
}

double bounded_score(double delta, std::size_t n, double sum_log, double x_min, double x_max) {
  require_bounds(x_min, x_max);
  const double a = 1.0 - delta;
  const double u = std::log(x_min);
  const double d = std::log(x_max) - u;
  // d ln c / d delta = u - 1/a + d / (1 - e^{-ad})
  double dlnc = 0.0;
  if (std::abs(a) < kSingular) {
    dlnc = u + d / 2.0 + a * d * d / 12.0;
  } else {
    const double t = -a * d;
    double tail = 0.0;
    if (t > 700.0) {
      tail = 0.0;
    } else {
      tail = d / (-std::expm1(t));
    }
    dlnc = u - 1.0 / a + tail;
  }
  return static_cast<double>(n) * dlnc - sum_log;
}

double mle_delta_bounded(std::size_t n, double sum_log, double x_min, double x_max) {
  require_bounds(x_min, x_max);
  if (n < 10) throw Error(ErrorCode::TooFewSamples, "bounded fit needs at least 10 samples");
  auto score = [&](double delta) { return bounded_score(delta, n, sum_log, x_min, x_max); };

  // The score is strictly decreasing in delta (ln c is concave), so a sign
  // change brackets the unique root.
  double lo = 1e-6;
  double hi = 20.0;
  double s_lo = score(lo);
  double s_hi = score(hi);
  double step = 1.0;
  while (s_lo < 0.0 && lo > -1e4) {
    hi = lo;
    s_hi = s_lo;
    lo -= step;
    step *= 2.0;
    s_lo = score(lo);
  }
  while (s_hi > 0.0 && hi < 1e4) {
    lo = hi;
    s_lo = s_hi;
    hi *= 2.0;
    s_hi = score(hi);
  }
  if (!(s_lo >= 0.0 && s_hi <= 0.0)) {
    throw Error(ErrorCode::NoRootInBracket, bracket_message(lo, hi, s_lo, s_hi));
  }
  if (s_lo == 0.0) return lo;
  if (s_hi == 0.0) return hi;
  // Bisect to adjacent doubles.
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double s = score(mid);
    if (s == 0.0) return mid;
    if (s > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return std::abs(score(lo)) <= std::abs(score(hi)) ? lo : hi;
}

double mle_delta_bounded(std::span<const double> samples, double x_min, double x_max) {
  require_bounds(x_min, x_max);
  if (samples.size() < 10) {
    throw Error(ErrorCode::TooFewSamples, "bounded fit needs at least 10 samples");
  }
  double sum_log = 0.0;
  bool all_equal = true;
  for (double x : samples) {
    if (!(x >= x_min && x <= x_max)) {
      throw Error(ErrorCode::OutOfSupport, "sample outside [x_min, x_max]");
    }
    all_equal = all_equal && x == samples.front();
    sum_log += std::log(x);
  }
  if (all_equal) throw Error(ErrorCode::DegenerateSample, "all samples are equal");
  return mle_delta_bounded(samples.size(), sum_log, x_min, x_max);
}

double mle_delta_unbounded(std::span<const double> samples, double x_min) {
  if (!(x_min > 0.0)) throw Error(ErrorCode::InvalidArgument, "x_min must be positive");
  if (samples.size() < 2) throw Error(ErrorCode::TooFewSamples, "tail fit needs at least 2 samples");
  double sum = 0.0;
  for (double x : samples) {
    if (!(x >= x_min)) throw Error(ErrorCode::OutOfSupport, "sample below x_min");
    sum += std::log(x / x_min);
  }
  if (sum == 0.0) throw Error(ErrorCode::InfiniteExponent, "all samples equal x_min");
  return 1.0 + static_cast<double>(samples.size()) / sum;
}

double standard_error(Regime regime, double delta, std::size_t n, double x_min, double x_max) {
  if (n == 0) return kInf;
  if (regime == Regime::UnboundedTail) {
    return (delta - 1.0) / std::sqrt(static_cast<double>(n));
  }
  // ln p(x) = ln c(delta) - delta ln x; only ln c contributes curvature.
  const double h = 1e-4 * std::max(std::abs(delta), 1e-2);
  const double f0 = bounded_log_normalization(delta, x_min, x_max);
  const double fp = bounded_log_normalization(delta + h, x_min, x_max);
  const double fm = bounded_log_normalization(delta - h, x_min, x_max);
  const double second = (fp - 2.0 * f0 + fm) / (h * h);
  if (!(second < 0.0)) return kInf;
  return 1.0 / std::sqrt(-static_cast<double>(n) * second);
}

double ks_statistic_sorted(std::span<const double> tail, const PowerLawFit& fit) {
  if (tail.empty()) throw Error(ErrorCode::EmptyTail, "no samples at or above x_min");
  const double n = static_cast<double>(tail.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < tail.size(); ++i) {
    const double f = cdf(fit, tail[i]);
    const double above = static_cast<double>(i + 1) / n - f;
    const double below = f - static_cast<double>(i) / n;
    worst = std::max({worst, std::abs(above), std::abs(below)});
  }
  return worst;
}

double ks_statistic(std::span<const double> samples, const PowerLawFit& fit) {
  std::vector<double> tail;
  tail.reserve(samples.size());
  for (double x : samples) {
    if (x >= fit.x_min) tail.push_back(x);
  }
  std::sort(tail.begin(), tail.end());
  return ks_statistic_sorted(tail, fit);
}

namespace {

struct SortedSample {
  std::vector<double> xs;
  std::vector<double> suffix_log;  // suffix_log[i] = sum_{k >= i} ln xs[k]
};

SortedSample prepare(std::span<const double> samples) {
  SortedSample s;
  s.xs.assign(samples.begin(), samples.end());
  for (double x : s.xs) {
    if (!(x > 0.0) || !std::isfinite(x)) {
      throw Error(ErrorCode::InvalidArgument, "power-law samples must be positive and finite");
    }
  }
  std::sort(s.xs.begin(), s.xs.end());
  s.suffix_log.assign(s.xs.size() + 1, 0.0);
  for (std::size_t i = s.xs.size(); i-- > 0;) {
    s.suffix_log[i] = s.suffix_log[i + 1] + std::log(s.xs[i]);
  }
  return s;
}

// Fit on xs[start..]; start must be the first index of its value.
PowerLawFit fit_tail(const SortedSample& s, std::size_t start, Regime regime) {
  const std::size_t m = s.xs.size() - start;
  const double x_min = s.xs[start];
  const double sum_log = s.suffix_log[start];
  const std::span<const double> tail(s.xs.data() + start, m);
  PowerLawFit fit;
  if (regime == Regime::UnboundedTail) {
    if (m < 2) throw Error(ErrorCode::TooFewSamples, "tail fit needs at least 2 samples");
    const double sum = sum_log - static_cast<double>(m) * std::log(x_min);
    if (!(sum > 0.0)) throw Error(ErrorCode::InfiniteExponent, "all tail samples equal x_min");
    fit = make_unbounded(1.0 + static_cast<double>(m) / sum, x_min);
  } else {
    const double x_max = s.xs.back();
    if (!(x_max > x_min)) throw Error(ErrorCode::DegenerateSample, "all tail samples are equal");
    fit = make_bounded(mle_delta_bounded(m, sum_log, x_min, x_max), x_min, x_max);
  }
  fit.n_tail = m;
  fit.sigma = standard_error(regime, fit.delta, m, fit.x_min, fit.x_max);
  fit.ks = ks_statistic_sorted(tail, fit);
  return fit;
}

std::vector<std::size_t> candidate_starts(const SortedSample& s, const ScanOptions& options) {
  std::vector<std::size_t> starts;
  const std::size_t n = s.xs.size();
  if (n <= options.excluded_top) return starts;
  const std::size_t last = n - options.excluded_top - 1;  // highest admissible index
  for (std::size_t i = 0; i <= last; ++i) {
    if (i == 0 || s.xs[i] != s.xs[i - 1]) starts.push_back(i);
  }
  if (n > options.exhaustive_limit && options.max_candidates >= 2 &&
      starts.size() > options.max_candidates) {
    std::vector<std::size_t> pruned;
    pruned.reserve(options.max_candidates);
    const std::size_t c = starts.size();
    const std::size_t m = options.max_candidates;
    for (std::size_t k = 0; k < m; ++k) {
      const std::size_t idx = (k * (c - 1) + (m - 1) / 2) / (m - 1);
      if (pruned.empty() || starts[idx] != pruned.back()) pruned.push_back(starts[idx]);
    }
    starts = std::move(pruned);
  }
  return starts;
}

}  // namespace

PowerLawFit fit_at_xmin(std::span<const double> samples, Regime regime, double x_min) {
  const auto s = prepare(samples);
  const auto it = std::lower_bound(s.xs.begin(), s.xs.end(), x_min);
  if (it == s.xs.end()) throw Error(ErrorCode::EmptyTail, "no samples at or above x_min");
  const auto start = static_cast<std::size_t>(it - s.xs.begin());
  if (s.xs[start] == x_min) return fit_tail(s, start, regime);

  // Cutoff strictly between sample values: fit with the requested x_min.
  const std::span<const double> tail(s.xs.data() + start, s.xs.size() - start);
  PowerLawFit fit;
  if (regime == Regime::UnboundedTail) {
    fit = make_unbounded(mle_delta_unbounded(tail, x_min), x_min);
  } else {
    fit = make_bounded(mle_delta_bounded(tail, x_min, s.xs.back()), x_min, s.xs.back());
  }
  fit.n_tail = tail.size();
  fit.sigma = standard_error(regime, fit.delta, fit.n_tail, fit.x_min, fit.x_max);
  fit.ks = ks_statistic_sorted(tail, fit);
  return fit;
}

std::vector<double> scan_candidates(std::span<const double> samples, const ScanOptions& options) {
  const auto s = prepare(samples);
  std::vector<double> out;
  for (std::size_t i : candidate_starts(s, options)) out.push_back(s.xs[i]);
  return out;
}

PowerLawFit fit_with_xmin_scan(std::span<const double> samples, Regime regime,
                               const ScanOptions& options) {
  const auto s = prepare(samples);
  const auto starts = candidate_starts(s, options);
  if (starts.empty()) {
    throw Error(ErrorCode::NoCandidate, "not enough samples for an x_min scan");
  }
  std::vector<PowerLawFit> fits(starts.size());
  std::vector<char> ok(starts.size(), 0);
  parallel_for(starts.size(), options.jobs, [&](std::size_t k) {
    try {
      fits[k] = fit_tail(s, starts[k], regime);
      ok[k] = std::isfinite(fits[k].ks) && std::isfinite(fits[k].delta);
    } catch (const Error&) {
      ok[k] = 0;
    }
  });
  std::size_t best = starts.size();
  for (std::size_t k = 0; k < starts.size(); ++k) {
    if (!ok[k]) continue;
    if (best == starts.size() || fits[k].ks < fits[best].ks) best = k;
  }
  if (best == starts.size()) {
    throw Error(ErrorCode::NoCandidate, "every candidate x_min failed to fit");
  }
  PowerLawFit fit = fits[best];
  fit.small_sample = samples.size() < 50;
  return fit;
}

std::vector<double> sample(const PowerLawFit& fit, std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<double> out(count);
  for (auto& x : out) x = quantile(fit, unit_interval(rng()));
  return out;
}

}  // namespace tradepack::powerlaw
