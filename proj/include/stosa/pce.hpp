#pragma once

#include <Eigen/Core>
#include <span>
#include <vector>

#include "stosa/design.hpp"
#include "stosa/mars.hpp"
#include "stosa/sobol.hpp"

namespace stosa {

/// Total-order-truncated Legendre product basis. Multi-indices are listed in
/// graded lexicographic order, all-zeros first; basis functions are
/// orthonormal under the (uniform) input law.
struct PcBasis {
  int dimension = 0;
  int total_order = 0;
  std::vector<std::vector<int>> multi_indices;

  int size() const { return static_cast<int>(multi_indices.size()); }
};

PcBasis make_pc_basis(int dimension, int total_order);

/// Evaluates all basis functions at one point of the mapped support.
void pc_basis_row(const PcBasis& basis, const ParameterSpace& space,
                  std::span<const double> x, std::span<double> out);

class PcSurrogate {
 public:
  PcSurrogate(PcBasis basis, Eigen::VectorXd coefficients, ParameterSpace space);

  double evaluate(std::span<const double> x) const;
  const PcBasis& basis() const { return basis_; }
  const Eigen::VectorXd& coefficients() const { return coef_; }
  const ParameterSpace& space() const { return space_; }

 private:
  PcBasis basis_;
  Eigen::VectorXd coef_;
  ParameterSpace space_;
};

struct PcConfig {
  int order = 3;
  double tau = 0.025;
  double rel_obj_tol = 1e-8;
  int max_iterations = 10000;
};

/// Sparse regression fit: min ||Lambda c - d||^2 subject to
/// (1/n_pc) sum|c_k| <= tau, solved by spectral projected gradient on the
/// scaled l1 ball. Requires uniform coordinates (Legendre path).
PcSurrogate fit_pc(const Design& design, std::span<const double> responses,
                   const PcConfig& config = {});

/// Analytic first-order indices from the coefficients: V_k sums c^2 over
/// multi-indices supported on coordinate k alone.
AnovaSummary pc_sobol(const PcSurrogate& surrogate);

/// Euclidean projection onto the l1 ball of the given radius.
Eigen::VectorXd project_l1_ball(const Eigen::VectorXd& v, double radius);

}  // namespace stosa
