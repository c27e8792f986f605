#pragma once

#include <span>
#include <string>

#include "stosa/rng.hpp"

namespace stosa {

enum class DistKind { Uniform, Beta, Normal };

/// Univariate input distribution: uniform(a,b), beta(alpha,beta) on [0,1], or
/// normal(mu, sigma^2). Immutable after construction; construction validates
/// parameters and throws std::invalid_argument on violation.
class Distribution {
 public:
  static Distribution uniform(double a, double b);
  static Distribution beta(double alpha, double beta);
  /// Note the second parameter is the variance, not the standard deviation.
  static Distribution normal(double mean, double variance);

  DistKind kind() const { return kind_; }
  double param1() const { return p1_; }  // a | alpha | mu
  double param2() const { return p2_; }  // b | beta  | sigma^2

  double mean() const;
  double variance() const;
  double pdf(double x) const;
  double cdf(double x) const;
  double quantile(double prob) const;

  /// Support endpoints (+-inf for normal).
  double lower() const;
  double upper() const;

  double sample(RngStream& rng) const;
  void sample(RngStream& rng, std::span<double> out) const;

  std::string describe() const;

  bool operator==(const Distribution&) const = default;

 private:
  Distribution(DistKind kind, double p1, double p2)
      : kind_(kind), p1_(p1), p2_(p2) {}

  DistKind kind_;
  double p1_;
  double p2_;
};

/// One standard normal draw (Box-Muller, two uniforms consumed).
double sample_standard_normal(RngStream& rng);

/// Gamma(shape, 1) draw via Marsaglia-Tsang squeeze; exact, rejection-based.
double sample_gamma(double shape, RngStream& rng);

}  // namespace stosa
