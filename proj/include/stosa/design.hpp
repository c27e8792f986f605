#pragma once

#include <Eigen/Core>

#include "stosa/parameter_space.hpp"
#include "stosa/rng.hpp"

namespace stosa {

/// Sample plan: one row per point, columns in ParameterSpace order.
struct Design {
  ParameterSpace space;
  Eigen::MatrixXd points;

  int rows() const { return static_cast<int>(points.rows()); }
  int cols() const { return static_cast<int>(points.cols()); }
};

/// Latin hypercube design: per column, exactly one point in each of the n
/// equiprobable strata [F^-1((i-1)/n), F^-1(i/n)), at an independent uniform
/// location within the stratum. Throws std::invalid_argument for n < 2.
Design lhs(const ParameterSpace& space, int n, RngStream& rng);

/// Plain iid design from the product law.
Design iid_design(const ParameterSpace& space, int n, RngStream& rng);

}  // namespace stosa
