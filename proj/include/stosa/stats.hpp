#pragma once

#include <span>
#include <vector>

namespace stosa {

/// Equal-width histogram with raw counts.
struct Histogram {
  double lo = 0.0;
  double hi = 1.0;
  std::vector<double> counts;
  long total = 0;

  int bins() const { return static_cast<int>(counts.size()); }
};

Histogram make_histogram(std::span<const double> values, double lo, double hi,
                         int bins);

/// Total-variation distance between the two histograms' normalized masses.
/// Both must share lo/hi/bins.
double total_variation(const Histogram& a, const Histogram& b);

/// Empirical quantile of a *sorted* sample (linear interpolation).
double sorted_quantile(std::span<const double> sorted, double prob);

/// Percentile pairs (exact_q, approx_q) at 1..99 percent.
std::vector<std::pair<double, double>> qq_percentiles(
    std::span<const double> exact_sorted, std::span<const double> approx_sorted);

double mean_of(std::span<const double> values);
/// Unbiased sample variance; 0 for fewer than two values.
double variance_of(std::span<const double> values);

}  // namespace stosa
