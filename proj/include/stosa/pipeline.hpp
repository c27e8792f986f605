#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "stosa/mars.hpp"
#include "stosa/models.hpp"
#include "stosa/pce.hpp"
#include "stosa/reaction_network.hpp"
#include "stosa/sobol.hpp"
#include "stosa/stats.hpp"

namespace stosa {

enum class SurrogateKind { Mars, Pce };

std::string to_string(SurrogateKind kind);
SurrogateKind surrogate_kind_from_string(const std::string& name);

struct Experiment {
  std::string model_id = "toy";
  int n = 200;  // surrogate sample size per replicate
  int m = 1;    // noise replicates
  SurrogateKind surrogate = SurrogateKind::Mars;
  std::uint64_t seed = 0;
  int workers = 0;  // 0 = hardware concurrency
  int histogram_bins = 50;
  ModelOptions model;
  MarsConfig mars;
  PcConfig pce;
  /// Oscillator-only cost knob: reuse one LHS design across every noise
  /// replicate instead of drawing a fresh one per replicate. Recorded in
  /// run metadata.
  bool reuse_design = false;
};

struct QualityReport {
  int replicates = 0;
  int undefined_rows = 0;
  std::vector<std::uint64_t> undefined_seeds;
};

struct Algorithm2Result {
  IndexSample sample;
  QualityReport quality;
};

/// The surrogate-accelerated outer loop: per noise replicate, draw a fresh
/// design, evaluate the model at the frozen noise seed, fit the surrogate and
/// extract its analytic indices. Exactly m*n model evaluations, recorded in
/// sample.model_evaluations.
Algorithm2Result run_algorithm2(const Experiment& exp,
                                const StochasticModel& model);

struct ConvergencePoint {
  int n = 0;
  double mean_error = 0.0;
  double std_error = 0.0;
  int replicates = 0;
};

struct ConvergenceTable {
  std::vector<ConvergencePoint> points;
  double slope = 0.0;  // fitted |d log E / d log n|
};

/// Average normalized-expectation error against the model's analytic oracle
/// for each n, with the fitted log-log convergence rate.
ConvergenceTable convergence_study(const Experiment& exp_template,
                                   std::span<const int> n_values,
                                   int replicates,
                                   const StochasticModel& model);

struct DistributionSummary {
  std::vector<Histogram> histograms;  // per variable, over [0,1]
  int excluded_rows = 0;
  /// (exact, approx) quantile pairs at percentiles 1..99 per variable;
  /// filled only when an oracle distribution is supplied.
  std::vector<std::vector<std::pair<double, double>>> qq;
};

DistributionSummary distribution_summary(
    const IndexSample& sample, int bins,
    const OracleDistribution* oracle = nullptr);

struct TimeResolvedIndices {
  std::vector<double> times;
  std::vector<IndexSample> per_time;       // one m x p sample per grid time
  Eigen::MatrixXd mean;                    // times x p (over defined rows)
  Eigen::MatrixXd variance;                // times x p
  std::vector<int> undefined_rows;         // per time
  /// histograms[k] is a times x bins matrix for variable k.
  std::vector<Eigen::MatrixXd> histograms;
  std::uint64_t model_evaluations = 0;
  bool reused_design = false;
};

/// Time-resolved variant for the oscillator: per noise replicate, n SSA
/// trajectories under a common noise seed; per grid time, a surrogate fit on
/// the recorded responses and an index extraction.
TimeResolvedIndices run_time_resolved(const Experiment& exp,
                                      const OscillatorModel& model);

}  // namespace stosa
