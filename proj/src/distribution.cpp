#include "stosa/distribution.hpp"

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/erf.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace stosa {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

Distribution Distribution::uniform(double a, double b) {
  if (!(a < b)) {
    throw std::invalid_argument("uniform(a,b) requires a < b");
  }
  return Distribution(DistKind::Uniform, a, b);
}

Distribution Distribution::beta(double alpha, double beta) {
  if (!(alpha > 0.0) || !(beta > 0.0)) {
    throw std::invalid_argument("beta(alpha,beta) requires alpha, beta > 0");
  }
  return Distribution(DistKind::Beta, alpha, beta);
}

Distribution Distribution::normal(double mean, double variance) {
  if (!(variance > 0.0)) {
    throw std::invalid_argument("normal(mu,var) requires var > 0");
  }
  return Distribution(DistKind::Normal, mean, variance);
}

double Distribution::mean() const {
  switch (kind_) {
    case DistKind::Uniform: return 0.5 * (p1_ + p2_);
    case DistKind::Beta: return p1_ / (p1_ + p2_);
    case DistKind::Normal: return p1_;
  }
  return 0.0;
}

double Distribution::variance() const {
  switch (kind_) {
    case DistKind::Uniform: {
      const double w = p2_ - p1_;
      return w * w / 12.0;
    }
    case DistKind::Beta: {
      const double s = p1_ + p2_;
      return p1_ * p2_ / (s * s * (s + 1.0));
    }
    case DistKind::Normal: return p2_;
  }
  return 0.0;
}

double Distribution::pdf(double x) const {
  switch (kind_) {
    case DistKind::Uniform:
      return (x >= p1_ && x <= p2_) ? 1.0 / (p2_ - p1_) : 0.0;
    case DistKind::Beta: {
      if (x < 0.0 || x > 1.0) return 0.0;
      if (x == 0.0) return p1_ > 1.0 ? 0.0 : (p1_ == 1.0 ? p2_ : kInf);
      if (x == 1.0) return p2_ > 1.0 ? 0.0 : (p2_ == 1.0 ? p1_ : kInf);
      const double lb = std::lgamma(p1_) + std::lgamma(p2_) -
                        std::lgamma(p1_ + p2_);
      return std::exp((p1_ - 1.0) * std::log(x) +
                      (p2_ - 1.0) * std::log1p(-x) - lb);
    }
    case DistKind::Normal: {
      const double z = (x - p1_);
      return std::exp(-0.5 * z * z / p2_) /
             std::sqrt(2.0 * std::numbers::pi * p2_);
    }
  }
  return 0.0;
}

double Distribution::cdf(double x) const {
  switch (kind_) {
    case DistKind::Uniform:
      if (x <= p1_) return 0.0;
      if (x >= p2_) return 1.0;
      return (x - p1_) / (p2_ - p1_);
    case DistKind::Beta:
      if (x <= 0.0) return 0.0;
      if (x >= 1.0) return 1.0;
      return boost::math::ibeta(p1_, p2_, x);
    case DistKind::Normal:
      return 0.5 * std::erfc(-(x - p1_) / std::sqrt(2.0 * p2_));
  }
  return 0.0;
}

double Distribution::quantile(double prob) const {
  if (!(prob >= 0.0 && prob <= 1.0)) {
    throw std::invalid_argument("quantile probability outside [0,1]");
  }
  switch (kind_) {
    case DistKind::Uniform: return p1_ + (p2_ - p1_) * prob;
    case DistKind::Beta:
      if (prob == 0.0) return 0.0;
      if (prob == 1.0) return 1.0;
      return boost::math::ibeta_inv(p1_, p2_, prob);
    case DistKind::Normal:
      if (prob == 0.0) return -kInf;
      if (prob == 1.0) return kInf;
      return p1_ + std::sqrt(2.0 * p2_) * boost::math::erf_inv(2.0 * prob - 1.0);
  }
  return 0.0;
}

double Distribution::lower() const {
  switch (kind_) {
    case DistKind::Uniform: return p1_;
    case DistKind::Beta: return 0.0;
    case DistKind::Normal: return -kInf;
  }
  return 0.0;
}

double Distribution::upper() const {
  switch (kind_) {
    case DistKind::Uniform: return p2_;
    case DistKind::Beta: return 1.0;
    case DistKind::Normal: return kInf;
  }
  return 0.0;
}

double sample_standard_normal(RngStream& rng) {
  const double u1 = rng.next_double_open0();
  const double u2 = rng.next_double();
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

double sample_gamma(double shape, RngStream& rng) {
  if (shape < 1.0) {
    // Boost the shape above 1 and correct with a power of a uniform.
    const double u = rng.next_double_open0();
    return sample_gamma(shape + 1.0, rng) * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    const double z = sample_standard_normal(rng);
    double v = 1.0 + c * z;
    if (v <= 0.0) continue;
    v = v * v * v;
    const double u = rng.next_double_open0();
    if (std::log(u) < 0.5 * z * z + d - d * v + d * std::log(v)) {
      return d * v;
    }
  }
}

double Distribution::sample(RngStream& rng) const {
  switch (kind_) {
    case DistKind::Uniform: return p1_ + (p2_ - p1_) * rng.next_double();
    case DistKind::Beta: {
      const double g1 = sample_gamma(p1_, rng);
      const double g2 = sample_gamma(p2_, rng);
      return g1 / (g1 + g2);
    }
    case DistKind::Normal:
      return p1_ + std::sqrt(p2_) * sample_standard_normal(rng);
  }
  return 0.0;
}

void Distribution::sample(RngStream& rng, std::span<double> out) const {
  for (double& v : out) v = sample(rng);
}

std::string Distribution::describe() const {
  char buf[64];
  switch (kind_) {
    case DistKind::Uniform:
      std::snprintf(buf, sizeof buf, "uniform(%g,%g)", p1_, p2_);
      break;
    case DistKind::Beta:
      std::snprintf(buf, sizeof buf, "beta(%g,%g)", p1_, p2_);
      break;
    case DistKind::Normal:
      std::snprintf(buf, sizeof buf, "normal(%g,%g)", p1_, p2_);
      break;
  }
  return buf;
}

}  // namespace stosa
