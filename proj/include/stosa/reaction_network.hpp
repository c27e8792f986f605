#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "stosa/models.hpp"
#include "stosa/parameter_space.hpp"
#include "stosa/rng.hpp"

namespace stosa {

/// One mass-action reaction channel. Stoichiometries are non-negative
/// integers; `rate_role` indexes the network's named rate constants (several
/// reactions may share a role).
struct Reaction {
  std::vector<std::pair<int, int>> reactants;  // (species, stoichiometry)
  std::vector<std::pair<int, int>> products;
  int rate_role = 0;
};

struct ReactionNetwork {
  std::vector<std::string> species;
  std::vector<std::string> rate_names;
  std::vector<double> nominal_rates;
  std::vector<Reaction> reactions;
  std::vector<std::int64_t> initial_state;

  int species_count() const { return static_cast<int>(species.size()); }
  int reaction_count() const { return static_cast<int>(reactions.size()); }
  int rate_count() const { return static_cast<int>(rate_names.size()); }
};

/// States recorded at (strictly increasing) grid times: the state immediately
/// before or at each grid time.
struct Trajectory {
  std::vector<double> times;
  Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic> states;  // grid x species

  int grid_size() const { return static_cast<int>(times.size()); }
};

/// Stochastic mass-action propensities: rate times the falling-factorial
/// count product over reactants.
std::vector<double> propensities(const ReactionNetwork& network,
                                 std::span<const std::int64_t> state,
                                 std::span<const double> rates);

/// Exact direct-method SSA. Deterministic given the stream; zero total
/// propensity freezes the state (absorbing), which is not an error.
Trajectory simulate(const ReactionNetwork& network,
                    std::span<const double> rates,
                    std::span<const std::int64_t> initial,
                    std::span<const double> grid, RngStream& rng);

/// Independent U((1-h) r, (1+h) r) draw around each nominal rate.
std::vector<double> perturbed_rates(std::span<const double> nominal,
                                    RngStream& rng,
                                    double relative_halfwidth = 0.1);

/// Uniform grid 0, dt, 2*dt, ..., up to and including t_final.
std::vector<double> uniform_grid(double t_final, double dt);

/// The nine-species, sixteen-reaction activator-repressor circadian circuit
/// with its published nominal rates.
ReactionNetwork genetic_oscillator();

std::string network_to_json(const ReactionNetwork& network);
ReactionNetwork network_from_json(const std::string& text);
ReactionNetwork load_network(const std::string& path);
void save_network(const ReactionNetwork& network, const std::string& path);

/// Pipeline adapter: rates are the uncertain parameters (iid uniform with a
/// relative half-width around nominal), omega is the SSA seed, and the scalar
/// response is the complex count C at `output_time`.
class OscillatorModel final : public StochasticModel {
 public:
  OscillatorModel(double t_final = 400.0, double grid_dt = 1.0,
                  double rate_perturbation = 0.1, double output_time = 400.0);

  const std::string& id() const override { return id_; }
  const ParameterSpace& space() const override { return space_; }
  double evaluate(std::span<const double> x,
                  std::uint64_t omega_seed) const override;

  /// Complex-count time series on the model grid; one SSA run.
  std::vector<double> response_trajectory(std::span<const double> rates,
                                          std::uint64_t omega_seed) const;

  const ReactionNetwork& network() const { return network_; }
  const std::vector<double>& grid() const { return grid_; }
  double t_final() const { return t_final_; }
  int output_species() const { return output_species_; }

 private:
  std::string id_ = "oscillator";
  ReactionNetwork network_;
  double t_final_;
  double grid_dt_;
  double output_time_;
  std::vector<double> grid_;
  int output_species_;
  ParameterSpace space_;
};

}  // namespace stosa
