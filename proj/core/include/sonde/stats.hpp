#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace sonde::stats {

/// Standard normal CDF.
double normal_cdf(double x);

/// Standard normal quantile function (Wichura's AS 241, double precision).
/// Requires p in (0, 1).
double normal_quantile(double p);

/// First four sample moments; sd uses the n-1 divisor.
struct Moments {
  std::size_t count = 0;
  double mean = 0.0;
  double sd = 0.0;
  double skewness = 0.0;
  double excess_kurtosis = 0.0;
};

Moments moments(const std::vector<double>& sample);

double sample_mean(const std::vector<double>& sample);
double sample_sd(const std::vector<double>& sample);

/// Two-sided Kolmogorov-Smirnov distance between the sample and a reference CDF.
double ks_statistic(std::vector<double> sample, const std::function<double(double)>& cdf);

/// KS distance against the standard normal.
double ks_statistic_normal(std::vector<double> sample);

/// 1% critical value of the KS statistic at sample size n (asymptotic 1.63/sqrt(n)).
double ks_critical_1pct(std::size_t n);

/// Empirical quantile with linear interpolation between order statistics.
/// Requires a sorted sample and p in [0, 1].
double quantile_sorted(const std::vector<double>& sorted, double p);

}  // namespace sonde::stats
