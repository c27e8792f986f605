#pragma once

#include <Eigen/Core>
#include <span>
#include <vector>

#include "stosa/design.hpp"
#include "stosa/sobol.hpp"

namespace stosa {

/// Truncated one-sided linear spline atom.
enum class HingeSide {
  XMinusT,  // (x - t)+
  TMinusX,  // (t - x)+
};

struct Hinge {
  int variable = 0;
  double knot = 0.0;
  HingeSide side = HingeSide::XMinusT;

  double value(double x) const {
    const double d = side == HingeSide::XMinusT ? x - knot : knot - x;
    return d > 0.0 ? d : 0.0;
  }
};

struct SurrogateTerm {
  Hinge hinge;
  double coefficient = 0.0;
};

struct MarsConfig {
  /// Cap on basis size including the intercept; 0 selects the default
  /// min(2n, 21 + ceil(n/2)).
  int max_terms = 0;
  /// Knot candidates per variable are all observed data values, thinned to
  /// at most knot_cap (rank-equispaced) once n exceeds knot_cap_threshold.
  int knot_cap = 50;
  int knot_cap_threshold = 500;
  /// Forward pass stops when the best pair improves RSS by less than this
  /// fraction of the current RSS.
  double forward_rel_tol = 1e-6;
  /// GCV smoothing penalty per knot (additive-model convention).
  double gcv_penalty = 2.0;
  /// Columns whose orthogonalized mass falls below rank_tol (relative) are
  /// treated as linearly dependent and dropped.
  double rank_tol = 1e-10;
};

struct MarsFitInfo {
  double rss = 0.0;
  double gcv = 0.0;
  double r_squared = 0.0;
  int forward_size = 0;  // basis columns after the forward pass (incl. intercept)
  int pruned_size = 0;   // basis columns after GCV pruning (incl. intercept)
};

/// Per-basis-function means, per-variable variance components, and the
/// resulting first-order indices. `approximate` is set when any coordinate
/// needed the sample-based fallback instead of closed-form integration.
struct AnovaSummary {
  std::vector<std::vector<double>> term_means;  // aligned with terms per variable
  std::vector<double> component_variance;       // V_k
  double total_variance = 0.0;
  IndexVector indices;
  bool approximate = false;
};

/// Fitted additive spline model: intercept plus per-variable hinge sums.
/// Immutable and shareable after construction.
class AdditiveSurrogate {
 public:
  AdditiveSurrogate(double intercept,
                    std::vector<std::vector<SurrogateTerm>> terms_by_variable,
                    ParameterSpace space, MarsFitInfo info = {});

  double evaluate(std::span<const double> x) const;
  Eigen::VectorXd evaluate(const Eigen::MatrixXd& points) const;

  double intercept() const { return intercept_; }
  const std::vector<std::vector<SurrogateTerm>>& terms_by_variable() const {
    return terms_;
  }
  const ParameterSpace& space() const { return space_; }
  const MarsFitInfo& fit_info() const { return info_; }
  int dimension() const { return space_.dimension(); }
  int term_count() const;

 private:
  double intercept_;
  std::vector<std::vector<SurrogateTerm>> terms_;
  ParameterSpace space_;
  MarsFitInfo info_;
};

/// Additive MARS fit: greedy forward selection of reflected hinge pairs at
/// data-value knots (RSS tie broken toward the lowest variable index, then
/// knot), followed by GCV backward pruning and a least-squares refit on the
/// retained basis. Requires at least 10 rows.
AdditiveSurrogate fit_mars(const Design& design,
                           std::span<const double> responses,
                           const MarsConfig& config = {});

/// First-order ANOVA decomposition of the surrogate. Uniform coordinates use
/// the closed-form hinge means and exact piecewise-quadratic integration;
/// anything else falls back to a 1e5-draw Monte-Carlo estimate and marks the
/// summary approximate.
AnovaSummary anova(const AdditiveSurrogate& surrogate);

}  // namespace stosa
