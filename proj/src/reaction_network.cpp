#include "stosa/reaction_network.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace stosa {

namespace {

constexpr std::uint64_t kSsaTag = 0x535341ull;

// CSR-flattened network for the simulation inner loop.
struct CompiledNetwork {
  int n_species = 0;
  int n_reactions = 0;
  std::vector<double> rate;
  std::vector<int> roff, rsp, rst;
  std::vector<int> doff, dsp;
  std::vector<std::int64_t> ddelta;
};

CompiledNetwork compile(const ReactionNetwork& net,
                        std::span<const double> rates) {
  if (static_cast<int>(rates.size()) != net.rate_count()) {
    throw std::invalid_argument("simulate: rate vector size != rate roles");
  }
  CompiledNetwork c;
  c.n_species = net.species_count();
  c.n_reactions = net.reaction_count();
  c.roff.push_back(0);
  c.doff.push_back(0);
  std::vector<std::int64_t> delta(c.n_species);
  for (const Reaction& r : net.reactions) {
    if (r.rate_role < 0 || r.rate_role >= net.rate_count()) {
      throw std::invalid_argument("simulate: reaction rate role out of range");
    }
    c.rate.push_back(rates[r.rate_role]);
    for (const auto& [sp, st] : r.reactants) {
      if (sp < 0 || sp >= c.n_species || st < 1) {
        throw std::invalid_argument("simulate: bad reactant entry");
      }
      c.rsp.push_back(sp);
      c.rst.push_back(st);
    }
    c.roff.push_back(static_cast<int>(c.rsp.size()));
    std::fill(delta.begin(), delta.end(), 0);
    for (const auto& [sp, st] : r.reactants) delta[sp] -= st;
    for (const auto& [sp, st] : r.products) {
      if (sp < 0 || sp >= c.n_species || st < 1) {
        throw std::invalid_argument("simulate: bad product entry");
      }
      delta[sp] += st;
    }
    for (int sp = 0; sp < c.n_species; ++sp) {
      if (delta[sp] != 0) {
        c.dsp.push_back(sp);
        c.ddelta.push_back(delta[sp]);
      }
    }
    c.doff.push_back(static_cast<int>(c.dsp.size()));
  }
  return c;
}

inline double propensity_of(const CompiledNetwork& c, int r,
                            const std::int64_t* state) {
  double a = c.rate[r];
  for (int i = c.roff[r]; i < c.roff[r + 1]; ++i) {
    const std::int64_t n = state[c.rsp[i]];
    for (int k = 0; k < c.rst[i]; ++k) a *= static_cast<double>(n - k);
  }
  return a > 0.0 ? a : 0.0;
}

}  // namespace

std::vector<double> propensities(const ReactionNetwork& network,
                                 std::span<const std::int64_t> state,
                                 std::span<const double> rates) {
  if (static_cast<int>(state.size()) != network.species_count()) {
    throw std::invalid_argument("propensities: state size != species count");
  }
  for (std::int64_t s : state) {
    if (s < 0) throw std::invalid_argument("propensities: negative count");
  }
  const CompiledNetwork c = compile(network, rates);
  std::vector<double> out(network.reaction_count());
  for (int r = 0; r < c.n_reactions; ++r) {
    out[r] = propensity_of(c, r, state.data());
  }
  return out;
}

Trajectory simulate(const ReactionNetwork& network,
                    std::span<const double> rates,
                    std::span<const std::int64_t> initial,
                    std::span<const double> grid, RngStream& rng) {
  const int ns = network.species_count();
  if (static_cast<int>(initial.size()) != ns) {
    throw std::invalid_argument("simulate: initial state size != species");
  }
  for (std::int64_t s : initial) {
    if (s < 0) throw std::invalid_argument("simulate: negative initial count");
  }
  for (std::size_t g = 0; g < grid.size(); ++g) {
    if (grid[g] < 0.0 || (g > 0 && grid[g] <= grid[g - 1])) {
      throw std::invalid_argument("simulate: grid must be >= 0 and increasing");
    }
  }

  const CompiledNetwork c = compile(network, rates);
  Trajectory tr;
  tr.times.assign(grid.begin(), grid.end());
  tr.states.resize(static_cast<int>(grid.size()), ns);

  std::vector<std::int64_t> state(initial.begin(), initial.end());
  std::vector<double> prop(c.n_reactions);
  int g = 0;
  const int gmax = static_cast<int>(grid.size());
  double t = 0.0;

  auto record_up_to = [&](double horizon) {
    while (g < gmax && grid[g] < horizon) {
      for (int s = 0; s < ns; ++s) tr.states(g, s) = state[s];
      ++g;
    }
  };

  while (g < gmax) {
    double a0 = 0.0;
    for (int r = 0; r < c.n_reactions; ++r) {
      prop[r] = propensity_of(c, r, state.data());
      a0 += prop[r];
    }
    if (a0 <= 0.0) {
      // absorbing: state frozen for the rest of the grid
      record_up_to(std::numeric_limits<double>::infinity());
      break;
    }
    const double dt = -std::log(rng.next_double_open0()) / a0;
    const double t_next = t + dt;
    record_up_to(t_next);
    if (g >= gmax) break;

    double u = rng.next_double() * a0;
    int pick = c.n_reactions - 1;
    for (int r = 0; r < c.n_reactions; ++r) {
      u -= prop[r];
      if (u <= 0.0) {
        pick = r;
        break;
      }
    }
    for (int i = c.doff[pick]; i < c.doff[pick + 1]; ++i) {
      state[c.dsp[i]] += c.ddelta[i];
    }
    t = t_next;
  }
  return tr;
}

std::vector<double> perturbed_rates(std::span<const double> nominal,
                                    RngStream& rng,
                                    double relative_halfwidth) {
  if (relative_halfwidth < 0.0 || relative_halfwidth >= 1.0) {
    throw std::invalid_argument("perturbed_rates: halfwidth must be in [0,1)");
  }
  std::vector<double> out(nominal.begin(), nominal.end());
  if (relative_halfwidth == 0.0) return out;
  for (double& r : out) {
    const double u = rng.next_double();
    r = r * (1.0 - relative_halfwidth) + u * (2.0 * relative_halfwidth * r);
  }
  return out;
}

std::vector<double> uniform_grid(double t_final, double dt) {
  if (!(t_final > 0.0) || !(dt > 0.0)) {
    throw std::invalid_argument("uniform_grid: t_final and dt must be > 0");
  }
  const int count = static_cast<int>(std::floor(t_final / dt + 1e-9)) + 1;
  std::vector<double> grid(count);
  for (int i = 0; i < count; ++i) grid[i] = i * dt;
  return grid;
}

ReactionNetwork genetic_oscillator() {
  ReactionNetwork net;
  net.species = {"D_A", "Dp_A", "A", "Dp_R", "D_R", "R", "M_A", "M_R", "C"};
  net.initial_state = {1, 0, 0, 0, 1, 0, 0, 0, 0};
  net.rate_names = {"gamma_A", "theta_A", "gamma_R",  "theta_R", "gamma_C",
                    "alpha_A", "alpha_R", "alpha_Ap", "alpha_Rp", "beta_A",
                    "beta_R",  "delta_MA", "delta_A", "delta_MR", "delta_R"};
  net.nominal_rates = {1.0, 50.0, 1.0, 100.0, 2.0, 50.0, 0.01, 500.0,
                       50.0, 50.0, 5.0, 10.0, 1.0, 0.5, 0.2};

  enum Sp { DA, DpA, A, DpR, DR, R, MA, MR, C };
  auto add = [&](std::vector<std::pair<int, int>> re,
                 std::vector<std::pair<int, int>> pr, int role) {
    net.reactions.push_back(Reaction{std::move(re), std::move(pr), role});
  };
  add({{DA, 1}, {A, 1}}, {{DpA, 1}}, 0);           // D_A + A -> D'_A
  add({{DpA, 1}}, {{DA, 1}, {A, 1}}, 1);           // D'_A -> D_A + A
  add({{DR, 1}, {A, 1}}, {{DpR, 1}}, 2);           // D_R + A -> D'_R
  add({{DpR, 1}}, {{DR, 1}, {A, 1}}, 3);           // D'_R -> D_R + A
  add({{A, 1}, {R, 1}}, {{C, 1}}, 4);              // A + R -> C
  add({{DA, 1}}, {{DA, 1}, {MA, 1}}, 5);           // D_A -> D_A + M_A
  add({{DR, 1}}, {{DR, 1}, {MR, 1}}, 6);           // D_R -> D_R + M_R
  add({{DpA, 1}}, {{DpA, 1}, {MA, 1}}, 7);         // D'_A -> D'_A + M_A
  add({{DpR, 1}}, {{DpR, 1}, {MR, 1}}, 8);         // D'_R -> D'_R + M_R
  add({{MA, 1}}, {{MA, 1}, {A, 1}}, 9);            // M_A -> M_A + A
  add({{MR, 1}}, {{MR, 1}, {R, 1}}, 10);           // M_R -> M_R + R
  add({{MA, 1}}, {}, 11);                          // M_A -> 0
  add({{A, 1}}, {}, 12);                           // A -> 0
  add({{MR, 1}}, {}, 13);                          // M_R -> 0
  add({{R, 1}}, {}, 14);                           // R -> 0
  add({{C, 1}}, {{R, 1}}, 12);                     // C -> R, shares delta_A
  return net;
}

namespace {

int species_index(const ReactionNetwork& net, const std::string& name) {
  const auto it = std::find(net.species.begin(), net.species.end(), name);
  if (it == net.species.end()) {
    throw std::invalid_argument("network json: unknown species " + name);
  }
  return static_cast<int>(it - net.species.begin());
}

}  // namespace

std::string network_to_json(const ReactionNetwork& net) {
  nlohmann::ordered_json j;
  j["species"] = net.species;
  j["initial_state"] = net.initial_state;
  nlohmann::ordered_json rates = nlohmann::ordered_json::array();
  for (int i = 0; i < net.rate_count(); ++i) {
    rates.push_back({{"name", net.rate_names[i]}, {"value", net.nominal_rates[i]}});
  }
  j["rates"] = rates;
  nlohmann::ordered_json reactions = nlohmann::ordered_json::array();
  for (const Reaction& r : net.reactions) {
    nlohmann::ordered_json jr;
    nlohmann::ordered_json re = nlohmann::ordered_json::object();
    for (const auto& [sp, st] : r.reactants) re[net.species[sp]] = st;
    nlohmann::ordered_json pr = nlohmann::ordered_json::object();
    for (const auto& [sp, st] : r.products) pr[net.species[sp]] = st;
    jr["reactants"] = re;
    jr["products"] = pr;
    jr["rate"] = net.rate_names[r.rate_role];
    reactions.push_back(jr);
  }
  j["reactions"] = reactions;
  return j.dump(2) + "\n";
}

ReactionNetwork network_from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  ReactionNetwork net;
  net.species = j.at("species").get<std::vector<std::string>>();
  net.initial_state = j.at("initial_state").get<std::vector<std::int64_t>>();
  if (net.initial_state.size() != net.species.size()) {
    throw std::invalid_argument("network json: initial state size mismatch");
  }
  for (const auto& jr : j.at("rates")) {
    net.rate_names.push_back(jr.at("name").get<std::string>());
    net.nominal_rates.push_back(jr.at("value").get<double>());
  }
  for (const auto& jr : j.at("reactions")) {
    Reaction r;
    for (const auto& [name, st] : jr.at("reactants").items()) {
      r.reactants.emplace_back(species_index(net, name), st.get<int>());
    }
    for (const auto& [name, st] : jr.at("products").items()) {
      r.products.emplace_back(species_index(net, name), st.get<int>());
    }
    const std::string role = jr.at("rate").get<std::string>();
    const auto it =
        std::find(net.rate_names.begin(), net.rate_names.end(), role);
    if (it == net.rate_names.end()) {
      throw std::invalid_argument("network json: unknown rate " + role);
    }
    r.rate_role = static_cast<int>(it - net.rate_names.begin());
    net.reactions.push_back(std::move(r));
  }
  return net;
}

ReactionNetwork load_network(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open network file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return network_from_json(ss.str());
}

void save_network(const ReactionNetwork& net, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write network file: " + path);
  out << network_to_json(net);
}

OscillatorModel::OscillatorModel(double t_final, double grid_dt,
                                 double rate_perturbation, double output_time)
    : network_(genetic_oscillator()), t_final_(t_final), grid_dt_(grid_dt),
      output_time_(std::min(output_time, t_final)),
      grid_(uniform_grid(t_final, grid_dt)),
      output_species_(species_index(network_, "C")) {
  std::vector<Distribution> coords;
  coords.reserve(network_.rate_count());
  for (double nominal : network_.nominal_rates) {
    coords.push_back(Distribution::uniform(nominal * (1.0 - rate_perturbation),
                                           nominal * (1.0 + rate_perturbation)));
  }
  std::vector<std::string> names = network_.rate_names;
  space_ = ParameterSpace(std::move(coords), std::move(names));
}

double OscillatorModel::evaluate(std::span<const double> x,
                                 std::uint64_t omega_seed) const {
  const std::vector<double> single_grid{output_time_};
  RngStream rng(omega_seed, kSsaTag);
  const Trajectory tr =
      simulate(network_, x, network_.initial_state, single_grid, rng);
  return static_cast<double>(tr.states(0, output_species_));
}

std::vector<double> OscillatorModel::response_trajectory(
    std::span<const double> rates, std::uint64_t omega_seed) const {
  RngStream rng(omega_seed, kSsaTag);
  const Trajectory tr =
      simulate(network_, rates, network_.initial_state, grid_, rng);
  std::vector<double> out(tr.grid_size());
  for (int g = 0; g < tr.grid_size(); ++g) {
    out[g] = static_cast<double>(tr.states(g, output_species_));
  }
  return out;
}

}  // namespace stosa
