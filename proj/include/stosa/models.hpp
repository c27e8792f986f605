#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "stosa/parameter_space.hpp"
#include "stosa/rng.hpp"
#include "stosa/sobol.hpp"
#include "stosa/stats.hpp"

namespace stosa {

// ---------------------------------------------------------------------------
// toy model: Y = mu + sigma * W,  mu ~ U(0,1), sigma ~ U(1, L+1), W ~ N(0,1)

double toy_eval(double mu, double sigma, double w);

/// Closed-form per-noise indices (S_mu, S_sigma) = (1, L^2 w^2) / (1 + L^2 w^2).
IndexVector toy_indices(double length_scale, double w);

/// E_w{S_sigma} = 1 - (1/L) sqrt(pi/2) exp(1/(2L^2)) erfc(1/(sqrt(2) L)),
/// evaluated through the scaled erfc so small L cannot overflow.
/// Returns 0 at L = 0 (the deterministic-sigma limit).
double toy_expected_sigma_index(double length_scale);

// ---------------------------------------------------------------------------
// stochastic g-function, 15 inputs, noise W ~ Beta(5,3)

inline constexpr int kGFunctionDim = 15;

/// The parameter curves a_k : [0,1] -> R.
std::array<double, kGFunctionDim> gfun_params(double w);

double gfun_eval(std::span<const double> x, double w);

/// Closed-form per-noise first-order indices with a_k = a_k(w):
/// V_k = (1/3)/(1+a_k)^2, Var = prod(1+V_j) - 1, S_k = V_k / Var.
IndexVector gfun_indices(double w);

/// E_w{S_k} against the Beta(5,3) noise law by composite trapezoid.
IndexVector gfun_expected_indices(std::int64_t quadrature_nodes);

/// Deterministic variant with a_k frozen at their Beta(5,3) expectations.
std::array<double, kGFunctionDim> gfun_expected_params();
double gfun_det_eval(std::span<const double> x);
IndexVector gfun_det_indices();

// ---------------------------------------------------------------------------
// model abstraction used by the pipeline

/// Streaming summary of the exact index distribution: per-variable histograms
/// plus 1..99 percentile tables, built from `count` noise draws.
struct OracleDistribution {
  std::vector<Histogram> histograms;       // one per variable
  Eigen::MatrixXd percentiles;             // 99 x p
  std::vector<double> mean;
  int count = 0;
};

/// A stochastic simulator f(X, omega) with omega realized as a 64-bit seed.
/// evaluate() must be bit-identical for identical (x, omega_seed).
class StochasticModel {
 public:
  virtual ~StochasticModel() = default;

  virtual const std::string& id() const = 0;
  virtual const ParameterSpace& space() const = 0;
  virtual double evaluate(std::span<const double> x,
                          std::uint64_t omega_seed) const = 0;

  virtual bool has_analytic_indices() const { return false; }
  /// Exact indices at the noise realization addressed by omega_seed.
  virtual IndexVector analytic_indices(std::uint64_t omega_seed) const;
  /// E_omega{S_k} by quadrature or closed form.
  virtual IndexVector expected_indices(std::int64_t quad_nodes) const;
  /// Exact index distribution from `count` noise draws.
  virtual OracleDistribution exact_index_distribution(int count, int bins,
                                                      RngStream& rng) const;

  int dimension() const { return space().dimension(); }
};

class ToyModel final : public StochasticModel {
 public:
  explicit ToyModel(double length_scale);

  const std::string& id() const override { return id_; }
  const ParameterSpace& space() const override { return space_; }
  double evaluate(std::span<const double> x,
                  std::uint64_t omega_seed) const override;
  bool has_analytic_indices() const override { return true; }
  IndexVector analytic_indices(std::uint64_t omega_seed) const override;
  IndexVector expected_indices(std::int64_t quad_nodes) const override;
  OracleDistribution exact_index_distribution(int count, int bins,
                                              RngStream& rng) const override;

  double noise(std::uint64_t omega_seed) const;
  double length_scale() const { return length_scale_; }

 private:
  std::string id_ = "toy";
  double length_scale_;
  ParameterSpace space_;
};

class GFunctionModel final : public StochasticModel {
 public:
  /// stochastic = false freezes a_k at their noise expectations (the
  /// deterministic g-function).
  explicit GFunctionModel(bool stochastic = true);

  const std::string& id() const override { return id_; }
  const ParameterSpace& space() const override { return space_; }
  double evaluate(std::span<const double> x,
                  std::uint64_t omega_seed) const override;
  bool has_analytic_indices() const override { return true; }
  IndexVector analytic_indices(std::uint64_t omega_seed) const override;
  IndexVector expected_indices(std::int64_t quad_nodes) const override;
  OracleDistribution exact_index_distribution(int count, int bins,
                                              RngStream& rng) const override;

  double noise(std::uint64_t omega_seed) const;
  bool stochastic() const { return stochastic_; }

 private:
  std::string id_;
  bool stochastic_;
  ParameterSpace space_;
};

struct ModelOptions {
  double toy_length_scale = 1.0;
  // oscillator settings (see reaction_network.hpp)
  double t_final = 400.0;
  double grid_dt = 1.0;
  double rate_perturbation = 0.1;
  double output_time = 400.0;  // response time for scalar evaluation
};

/// Registry: "toy", "gfunction", "gfunction-det", "oscillator".
/// Throws std::invalid_argument for unknown ids.
std::unique_ptr<StochasticModel> make_model(const std::string& model_id,
                                            const ModelOptions& options = {});
std::vector<std::string> registered_models();

}  // namespace stosa
