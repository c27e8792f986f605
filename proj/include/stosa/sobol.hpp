#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "stosa/design.hpp"
#include "stosa/parameter_space.hpp"
#include "stosa/rng.hpp"

namespace stosa {

/// First-order index vector. Either all p entries are defined (each in [0,1])
/// or the whole vector is in the undefined state, which is what a
/// zero-variance (constant) response produces. Undefined is a first-class
/// state, never a NaN in disguise.
struct IndexVector {
  std::vector<double> values;
  bool defined = true;

  static IndexVector undefined(int p) {
    return IndexVector{std::vector<double>(p, 0.0), false};
  }
  int dimension() const { return static_cast<int>(values.size()); }
};

/// m realizations of the p first-order indices, one row per noise replicate,
/// plus the metadata needed to reproduce and audit the run.
struct IndexSample {
  Eigen::MatrixXd values;            // m x p; rows with row_defined[i]==0 are 0
  std::vector<std::uint8_t> row_defined;
  std::vector<std::uint64_t> omega_seeds;
  std::string model_id;
  int surrogate_n = 0;               // per-replicate surrogate sample size
  std::string surrogate_kind;
  std::uint64_t root_seed = 0;
  std::uint64_t model_evaluations = 0;

  int replicates() const { return static_cast<int>(values.rows()); }
  int dimension() const { return static_cast<int>(values.cols()); }
  int defined_rows() const;
  /// Column k restricted to defined rows.
  std::vector<double> defined_column(int k) const;
};

/// Sample r-th moment of each index over the replicate ensemble,
/// with the universal variance bound 1/(4m) attached.
struct MomentEstimate {
  int order = 1;
  std::vector<double> values;  // per variable
  int m = 0;                   // defined replicates used
  double variance_bound = 0.0; // 1/(4m)
};

struct SaltelliDiagnostics {
  std::vector<double> raw;              // before clamping
  std::vector<double> standard_errors;  // 10-block empirical SE
  int clamped = 0;
};

/// Pick-and-freeze first-order estimator with the Janon variance
/// normalization. Uses two independent N x p blocks and exactly (p+1)N
/// evaluations of fn. Entries are clamped to [0,1] after estimation; a
/// zero-variance response yields the undefined state.
IndexVector saltelli(const std::function<double(std::span<const double>)>& fn,
                     const ParameterSpace& space, int n_samples,
                     RngStream& rng, SaltelliDiagnostics* diag = nullptr);

/// l-infinity distance between the two sum-normalized vectors.
/// Throws std::domain_error when either vector is undefined or sums to zero.
double normalized_error(const IndexVector& exact, const IndexVector& approx);

/// Per-variable sample r-th moment over defined rows (order 1 = sample mean).
MomentEstimate moments(const IndexSample& sample, int order);

/// Empirical check of the moment-estimator variance bound across independent
/// replicates of the full m-sample estimator.
struct VarianceBoundReport {
  int order = 1;
  int m = 0;
  int replicates = 0;
  std::vector<double> ensemble_mean;       // mean of mu-hat across replicates
  std::vector<double> empirical_variance;  // variance of mu-hat across replicates
  std::vector<double> bernoulli_bound;     // E(1-E)/m
  double universal_bound = 0.0;            // 1/(4m)
  std::vector<double> variance_sampling_se;
  std::vector<std::uint8_t> violates_bound;  // beyond 3 sampling SEs
  bool all_within_bound = true;
};

VarianceBoundReport variance_bound_check(
    std::span<const MomentEstimate> replicates);

}  // namespace stosa
