#include "stosa/sobol.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "stosa/stats.hpp"

namespace stosa {

int IndexSample::defined_rows() const {
  int c = 0;
  for (auto f : row_defined) c += (f != 0);
  return c;
}

std::vector<double> IndexSample::defined_column(int k) const {
  std::vector<double> out;
  out.reserve(values.rows());
  for (int i = 0; i < values.rows(); ++i) {
    if (row_defined[i]) out.push_back(values(i, k));
  }
  return out;
}

namespace {

// Janon-normalized pick-and-freeze statistic for paired responses.
double janon_index(std::span<const double> ya, std::span<const double> yc) {
  const std::size_t n = ya.size();
  double cross = 0.0, half_sum = 0.0, half_sq = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    cross += ya[i] * yc[i];
    half_sum += 0.5 * (ya[i] + yc[i]);
    half_sq += 0.5 * (ya[i] * ya[i] + yc[i] * yc[i]);
  }
  cross /= static_cast<double>(n);
  half_sum /= static_cast<double>(n);
  half_sq /= static_cast<double>(n);
  const double var = half_sq - half_sum * half_sum;
  if (var <= 0.0) return std::numeric_limits<double>::quiet_NaN();
  return (cross - half_sum * half_sum) / var;
}

}  // namespace

IndexVector saltelli(const std::function<double(std::span<const double>)>& fn,
                     const ParameterSpace& space, int n_samples,
                     RngStream& rng, SaltelliDiagnostics* diag) {
  if (n_samples < 100) throw std::invalid_argument("saltelli: N must be >= 100");
  const int p = space.dimension();
  const int N = n_samples;

  Eigen::MatrixXd a(N, p), b(N, p);
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j < p; ++j) a(i, j) = space.coordinate(j).sample(rng);
  }
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j < p; ++j) b(i, j) = space.coordinate(j).sample(rng);
  }

  std::vector<double> ya(N), yc(N), point(p);
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j < p; ++j) point[j] = a(i, j);
    ya[i] = fn(point);
  }

  constexpr int kBlocks = 10;
  IndexVector out;
  out.values.assign(p, 0.0);
  if (diag) {
    diag->raw.assign(p, 0.0);
    diag->standard_errors.assign(p, 0.0);
    diag->clamped = 0;
  }
  bool any_defined = false;
  for (int k = 0; k < p; ++k) {
    // Block C_k: column k frozen from A, the rest from B.
    for (int i = 0; i < N; ++i) {
      for (int j = 0; j < p; ++j) point[j] = (j == k) ? a(i, j) : b(i, j);
      yc[i] = fn(point);
    }
    const double raw = janon_index(ya, yc);
    if (std::isnan(raw)) {
      // zero output variance; leave undefined and keep scanning for diag
      continue;
    }
    any_defined = true;
    out.values[k] = std::clamp(raw, 0.0, 1.0);
    if (diag) {
      diag->raw[k] = raw;
      if (raw < 0.0 || raw > 1.0) ++diag->clamped;
      // Disjoint-block replicates give an honest spread estimate; the full-N
      // estimator has roughly 1/kBlocks of the block variance.
      std::vector<double> block_vals;
      const int bs = N / kBlocks;
      for (int blk = 0; blk + 1 <= kBlocks; ++blk) {
        const int lo = blk * bs;
        const double v = janon_index({ya.data() + lo, (std::size_t)bs},
                                     {yc.data() + lo, (std::size_t)bs});
        if (!std::isnan(v)) block_vals.push_back(v);
      }
      diag->standard_errors[k] =
          block_vals.size() > 1
              ? std::sqrt(variance_of(block_vals) / block_vals.size())
              : 0.0;
    }
  }
  if (!any_defined) return IndexVector::undefined(p);
  return out;
}

double normalized_error(const IndexVector& exact, const IndexVector& approx) {
  if (!exact.defined || !approx.defined) {
    throw std::domain_error("normalized_error: undefined index vector");
  }
  if (exact.dimension() != approx.dimension()) {
    throw std::invalid_argument("normalized_error: dimension mismatch");
  }
  double se = 0.0, sa = 0.0;
  for (int k = 0; k < exact.dimension(); ++k) {
    se += exact.values[k];
    sa += approx.values[k];
  }
  if (se <= 0.0 || sa <= 0.0) {
    throw std::domain_error("normalized_error: zero index sum");
  }
  double err = 0.0;
  for (int k = 0; k < exact.dimension(); ++k) {
    err = std::max(err, std::abs(exact.values[k] / se - approx.values[k] / sa));
  }
  return err;
}

MomentEstimate moments(const IndexSample& sample, int order) {
  if (order < 1) throw std::invalid_argument("moments: order must be >= 1");
  if (sample.replicates() < 1) throw std::invalid_argument("moments: empty sample");
  const int m = sample.defined_rows();
  if (m < 1) throw std::invalid_argument("moments: no defined replicates");
  const int p = sample.dimension();
  MomentEstimate est;
  est.order = order;
  est.m = m;
  est.variance_bound = 1.0 / (4.0 * m);
  est.values.assign(p, 0.0);
  for (int i = 0; i < sample.replicates(); ++i) {
    if (!sample.row_defined[i]) continue;
    for (int k = 0; k < p; ++k) {
      est.values[k] += std::pow(sample.values(i, k), order);
    }
  }
  for (double& v : est.values) v /= m;
  return est;
}

VarianceBoundReport variance_bound_check(
    std::span<const MomentEstimate> replicates) {
  if (replicates.size() < 30) {
    throw std::invalid_argument(
        "variance_bound_check: needs >= 30 independent replicates");
  }
  const int r = replicates.front().order;
  const int m = replicates.front().m;
  const int p = static_cast<int>(replicates.front().values.size());
  for (const auto& e : replicates) {
    if (e.order != r || static_cast<int>(e.values.size()) != p) {
      throw std::invalid_argument("variance_bound_check: mixed estimates");
    }
  }
  const int R = static_cast<int>(replicates.size());

  VarianceBoundReport rep;
  rep.order = r;
  rep.m = m;
  rep.replicates = R;
  rep.universal_bound = 1.0 / (4.0 * m);
  rep.ensemble_mean.assign(p, 0.0);
  rep.empirical_variance.assign(p, 0.0);
  rep.bernoulli_bound.assign(p, 0.0);
  rep.variance_sampling_se.assign(p, 0.0);
  rep.violates_bound.assign(p, 0);

  std::vector<double> col(R);
  for (int k = 0; k < p; ++k) {
    for (int i = 0; i < R; ++i) col[i] = replicates[i].values[k];
    const double mean = mean_of(col);
    const double var = variance_of(col);
    rep.ensemble_mean[k] = mean;
    rep.empirical_variance[k] = var;
    rep.bernoulli_bound[k] = mean * (1.0 - mean) / m;
    // Normal-theory spread of a variance estimate from R replicates.
    rep.variance_sampling_se[k] = var * std::sqrt(2.0 / (R - 1));
    const double slack = 3.0 * rep.variance_sampling_se[k];
    if (var > rep.universal_bound + slack) {
      rep.violates_bound[k] = 1;
      rep.all_within_bound = false;
    }
  }
  return rep;
}

}  // namespace stosa
