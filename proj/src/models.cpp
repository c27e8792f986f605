#include "stosa/models.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>

#include "stosa/distribution.hpp"
#include "stosa/quadrature.hpp"
#include "stosa/reaction_network.hpp"
#include "stosa/special.hpp"

namespace stosa {

namespace {
// Purpose tag separating the model-noise stream from every other use of a seed.
constexpr std::uint64_t kNoiseTag = 0x4e4f495345ull;

double beta53_pdf(double t) {
  if (t < 0.0 || t > 1.0) return 0.0;
  const double om = 1.0 - t;
  return 105.0 * t * t * t * t * om * om;
}
}  // namespace

double toy_eval(double mu, double sigma, double w) { return mu + sigma * w; }

IndexVector toy_indices(double length_scale, double w) {
  if (length_scale < 0.0) {
    throw std::invalid_argument("toy_indices: L must be >= 0");
  }
  const double q = length_scale * length_scale * w * w;
  IndexVector out;
  out.values = {1.0 / (1.0 + q), q / (1.0 + q)};
  return out;
}

double toy_expected_sigma_index(double length_scale) {
  if (length_scale < 0.0) {
    throw std::invalid_argument("toy_expected_sigma_index: L must be >= 0");
  }
  if (length_scale == 0.0) return 0.0;
  const double x = 1.0 / (std::numbers::sqrt2 * length_scale);
  const double e_mu =
      std::sqrt(std::numbers::pi / 2.0) / length_scale * erfcx(x);
  return std::clamp(1.0 - e_mu, 0.0, 1.0);
}

std::array<double, kGFunctionDim> gfun_params(double t) {
  const auto sq = [](double v) { return v * v; };
  return {
      std::pow(1.0 - t, 5),
      std::pow(t, 5),
      sq(std::sin(8.0 * t)),
      sq(std::sin(10.0 * (1.0 - t))),
      sq(std::cos(10.0 * (1.0 - t))),
      sq(std::cos(8.0 * t)),
      sq(1.5 - t),
      sq(0.5 + t),
      sq(3.0 - t),
      sq(2.0 + t),
      sq(3.5 - t),
      sq(2.5 + t),
      sq(4.0 - t),
      sq(3.0 + t),
      sq(4.0 + t),
  };
}

namespace {

double gfun_product(std::span<const double> x,
                    const std::array<double, kGFunctionDim>& a) {
  if (static_cast<int>(x.size()) != kGFunctionDim) {
    throw std::invalid_argument("gfun_eval: x must have 15 components");
  }
  double prod = 1.0;
  for (int k = 0; k < kGFunctionDim; ++k) {
    prod *= (std::abs(4.0 * x[k] - 2.0) + a[k]) / (1.0 + a[k]);
  }
  return prod;
}

IndexVector indices_from_params(const std::array<double, kGFunctionDim>& a) {
  // Each factor has unit mean and variance V_k = (1/3)/(1+a_k)^2; the product
  // then has Var = prod(1+V_k) - 1 and main effects V_k. Validated against
  // quadrature and the pick-and-freeze estimator in the test suite.
  std::array<double, kGFunctionDim> v{};
  double prod = 1.0;
  for (int k = 0; k < kGFunctionDim; ++k) {
    v[k] = (1.0 / 3.0) / ((1.0 + a[k]) * (1.0 + a[k]));
    prod *= 1.0 + v[k];
  }
  const double var = prod - 1.0;
  if (!(var > 0.0)) return IndexVector::undefined(kGFunctionDim);
  IndexVector out;
  out.values.resize(kGFunctionDim);
  for (int k = 0; k < kGFunctionDim; ++k) out.values[k] = v[k] / var;
  return out;
}

}  // namespace

double gfun_eval(std::span<const double> x, double w) {
  return gfun_product(x, gfun_params(w));
}

IndexVector gfun_indices(double w) {
  if (w < 0.0 || w > 1.0) {
    throw std::invalid_argument("gfun_indices: w must lie in [0,1]");
  }
  return indices_from_params(gfun_params(w));
}

IndexVector gfun_expected_indices(std::int64_t quadrature_nodes) {
  if (quadrature_nodes < 1000) {
    throw std::invalid_argument("gfun_expected_indices: needs >= 1000 nodes");
  }
  // One sweep integrating all 15 index curves against the Beta(5,3) density,
  // compensated like stosa::trapezoid.
  const std::int64_t nodes = quadrature_nodes;
  const double h = 1.0 / static_cast<double>(nodes - 1);
  std::array<double, kGFunctionDim> sum{}, comp{};
  for (std::int64_t i = 0; i < nodes; ++i) {
    const double t = static_cast<double>(i) * h;
    const double weight = (i == 0 || i == nodes - 1) ? 0.5 : 1.0;
    const IndexVector s = indices_from_params(gfun_params(t));
    const double dens = beta53_pdf(t);
    for (int k = 0; k < kGFunctionDim; ++k) {
      const double y = weight * s.values[k] * dens - comp[k];
      const double tt = sum[k] + y;
      comp[k] = (tt - sum[k]) - y;
      sum[k] = tt;
    }
  }
  IndexVector out;
  out.values.resize(kGFunctionDim);
  for (int k = 0; k < kGFunctionDim; ++k) out.values[k] = h * sum[k];
  return out;
}

std::array<double, kGFunctionDim> gfun_expected_params() {
  static const std::array<double, kGFunctionDim> cached = [] {
    std::array<double, kGFunctionDim> mean{};
    for (int k = 0; k < kGFunctionDim; ++k) {
      mean[k] = trapezoid(
          [k](double t) { return gfun_params(t)[k] * beta53_pdf(t); }, 0.0,
          1.0, 1000000);
    }
    return mean;
  }();
  return cached;
}

double gfun_det_eval(std::span<const double> x) {
  return gfun_product(x, gfun_expected_params());
}

IndexVector gfun_det_indices() {
  return indices_from_params(gfun_expected_params());
}

// ---------------------------------------------------------------------------

IndexVector StochasticModel::analytic_indices(std::uint64_t) const {
  throw std::logic_error("model '" + id() + "' has no analytic indices");
}

IndexVector StochasticModel::expected_indices(std::int64_t) const {
  throw std::logic_error("model '" + id() + "' has no analytic indices");
}

OracleDistribution StochasticModel::exact_index_distribution(int, int,
                                                             RngStream&) const {
  throw std::logic_error("model '" + id() + "' has no analytic indices");
}

namespace {

OracleDistribution distribution_from_noise(
    int count, int bins, RngStream& rng, int p,
    const std::function<double(RngStream&)>& draw_noise,
    const std::function<IndexVector(double)>& index_at) {
  if (count < 2) throw std::invalid_argument("oracle distribution: count < 2");
  std::vector<double> w(count);
  for (int i = 0; i < count; ++i) w[i] = draw_noise(rng);

  OracleDistribution out;
  out.count = count;
  out.percentiles.resize(99, p);
  out.mean.assign(p, 0.0);
  std::vector<double> col(count);
  for (int k = 0; k < p; ++k) {
    for (int i = 0; i < count; ++i) col[i] = index_at(w[i]).values[k];
    out.mean[k] = mean_of(col);
    out.histograms.push_back(make_histogram(col, 0.0, 1.0, bins));
    std::sort(col.begin(), col.end());
    for (int pct = 1; pct <= 99; ++pct) {
      out.percentiles(pct - 1, k) = sorted_quantile(col, pct / 100.0);
    }
  }
  return out;
}

}  // namespace

ToyModel::ToyModel(double length_scale)
    : length_scale_(length_scale),
      space_(length_scale > 0.0
                 ? ParameterSpace({Distribution::uniform(0.0, 1.0),
                                   Distribution::uniform(1.0, 1.0 + length_scale)},
                                  {"mu", "sigma"})
                 : ParameterSpace()) {
  if (!(length_scale > 0.0)) {
    throw std::invalid_argument("toy model: L must be > 0");
  }
}

double ToyModel::noise(std::uint64_t omega_seed) const {
  RngStream rng(omega_seed, kNoiseTag);
  return sample_standard_normal(rng);
}

double ToyModel::evaluate(std::span<const double> x,
                          std::uint64_t omega_seed) const {
  if (x.size() != 2) throw std::invalid_argument("toy model: x must be (mu, sigma)");
  return toy_eval(x[0], x[1], noise(omega_seed));
}

IndexVector ToyModel::analytic_indices(std::uint64_t omega_seed) const {
  return toy_indices(length_scale_, noise(omega_seed));
}

IndexVector ToyModel::expected_indices(std::int64_t) const {
  const double es = toy_expected_sigma_index(length_scale_);
  IndexVector out;
  out.values = {1.0 - es, es};
  return out;
}

OracleDistribution ToyModel::exact_index_distribution(int count, int bins,
                                                      RngStream& rng) const {
  return distribution_from_noise(
      count, bins, rng, 2,
      [](RngStream& r) { return sample_standard_normal(r); },
      [this](double w) { return toy_indices(length_scale_, w); });
}

GFunctionModel::GFunctionModel(bool stochastic)
    : id_(stochastic ? "gfunction" : "gfunction-det"),
      stochastic_(stochastic),
      space_(ParameterSpace::iid(Distribution::uniform(0.0, 1.0),
                                 kGFunctionDim)) {}

double GFunctionModel::noise(std::uint64_t omega_seed) const {
  RngStream rng(omega_seed, kNoiseTag);
  return Distribution::beta(5.0, 3.0).sample(rng);
}

double GFunctionModel::evaluate(std::span<const double> x,
                                std::uint64_t omega_seed) const {
  if (!stochastic_) return gfun_det_eval(x);
  return gfun_eval(x, noise(omega_seed));
}

IndexVector GFunctionModel::analytic_indices(std::uint64_t omega_seed) const {
  if (!stochastic_) return gfun_det_indices();
  return gfun_indices(noise(omega_seed));
}

IndexVector GFunctionModel::expected_indices(std::int64_t quad_nodes) const {
  if (!stochastic_) return gfun_det_indices();
  return gfun_expected_indices(quad_nodes);
}

OracleDistribution GFunctionModel::exact_index_distribution(
    int count, int bins, RngStream& rng) const {
  if (!stochastic_) {
    return distribution_from_noise(
        count, bins, rng, kGFunctionDim, [](RngStream&) { return 0.0; },
        [](double) { return gfun_det_indices(); });
  }
  Distribution noise_law = Distribution::beta(5.0, 3.0);
  return distribution_from_noise(
      count, bins, rng, kGFunctionDim,
      [noise_law](RngStream& r) { return noise_law.sample(r); },
      [](double w) { return gfun_indices(w); });
}

std::unique_ptr<StochasticModel> make_model(const std::string& model_id,
                                            const ModelOptions& options) {
  if (model_id == "toy") {
    return std::make_unique<ToyModel>(options.toy_length_scale);
  }
  if (model_id == "gfunction") {
    return std::make_unique<GFunctionModel>(true);
  }
  if (model_id == "gfunction-det") {
    return std::make_unique<GFunctionModel>(false);
  }
  if (model_id == "oscillator") {
    return std::make_unique<OscillatorModel>(options.t_final, options.grid_dt,
                                             options.rate_perturbation,
                                             options.output_time);
  }
  throw std::invalid_argument("unknown model id: " + model_id);
}

std::vector<std::string> registered_models() {
  return {"toy", "gfunction", "gfunction-det", "oscillator"};
}

}  // namespace stosa
