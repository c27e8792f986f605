#include "stosa/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace stosa {

Histogram make_histogram(std::span<const double> values, double lo, double hi,
                         int bins) {
  if (bins < 1) throw std::invalid_argument("histogram: bins < 1");
  if (!(lo < hi)) throw std::invalid_argument("histogram: lo >= hi");
  Histogram h;
  h.lo = lo;
  h.hi = hi;
  h.counts.assign(bins, 0.0);
  const double scale = bins / (hi - lo);
  for (double v : values) {
    if (std::isnan(v)) continue;
    int b = static_cast<int>((v - lo) * scale);
    b = std::clamp(b, 0, bins - 1);  // boundary values fold into edge bins
    h.counts[b] += 1.0;
    ++h.total;
  }
  return h;
}

double total_variation(const Histogram& a, const Histogram& b) {
  if (a.bins() != b.bins() || a.lo != b.lo || a.hi != b.hi) {
    throw std::invalid_argument("total_variation: incompatible histograms");
  }
  if (a.total == 0 || b.total == 0) {
    throw std::invalid_argument("total_variation: empty histogram");
  }
  double tv = 0.0;
  for (int i = 0; i < a.bins(); ++i) {
    tv += std::abs(a.counts[i] / a.total - b.counts[i] / b.total);
  }
  return 0.5 * tv;
}

double sorted_quantile(std::span<const double> sorted, double prob) {
  if (sorted.empty()) throw std::invalid_argument("quantile: empty sample");
  if (sorted.size() == 1) return sorted[0];
  const double pos = prob * (sorted.size() - 1);
  const auto i = static_cast<std::size_t>(pos);
  if (i + 1 >= sorted.size()) return sorted.back();
  const double frac = pos - static_cast<double>(i);
  return sorted[i] + frac * (sorted[i + 1] - sorted[i]);
}

std::vector<std::pair<double, double>> qq_percentiles(
    std::span<const double> exact_sorted,
    std::span<const double> approx_sorted) {
  std::vector<std::pair<double, double>> out;
  out.reserve(99);
  for (int pct = 1; pct <= 99; ++pct) {
    const double p = pct / 100.0;
    out.emplace_back(sorted_quantile(exact_sorted, p),
                     sorted_quantile(approx_sorted, p));
  }
  return out;
}

double mean_of(std::span<const double> values) {
  if (values.empty()) return 0.0;
  double s = 0.0;
  for (double v : values) s += v;
  return s / static_cast<double>(values.size());
}

double variance_of(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n < 2) return 0.0;
  const double m = mean_of(values);
  double s = 0.0;
  for (double v : values) s += (v - m) * (v - m);
  return s / static_cast<double>(n - 1);
}

}  // namespace stosa
